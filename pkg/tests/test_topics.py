import random

import numpy as np
import pytest

from crisislens.textprep import build_vocabulary
from crisislens.topics import (
    GibbsSampler,
    LdaConfig,
    TopicModel,
    export_day_topics,
    fit_lda,
    prevalent_topic,
    top_terms,
)


def conservation_holds(sampler: GibbsSampler) -> bool:
    total = sampler.total_tokens
    if sum(sampler.n_k) != total:
        return False
    if sum(sum(row) for row in sampler.n_kw) != total:
        return False
    if sum(sum(row) for row in sampler.n_dk) != total:
        return False
    return all(
        all(c >= 0 for c in row) for row in sampler.n_kw
    ) and all(all(c >= 0 for c in row) for row in sampler.n_dk)


def disjoint_topic_corpus(n_docs: int, seed: int):
    """Docs drawn from 3 topics with disjoint 10-term supports."""
    rng = random.Random(seed)
    topics = [[f"w{t}_{i}" for i in range(10)] for t in range(3)]
    docs = []
    for _ in range(n_docs):
        support = topics[rng.randrange(3)]
        docs.append([rng.choice(support) for _ in range(10)])
    true_phi = np.zeros((3, 30))
    order = sorted(t for sup in topics for t in sup)
    for t, support in enumerate(topics):
        for term in support:
            true_phi[t, order.index(term)] = 0.1
    return docs, true_phi


def greedy_alignment_cosines(phi: np.ndarray, true_phi: np.ndarray) -> list[float]:
    pairs = []
    for k in range(phi.shape[0]):
        for j in range(true_phi.shape[0]):
            num = float(np.dot(phi[k], true_phi[j]))
            den = float(np.linalg.norm(phi[k]) * np.linalg.norm(true_phi[j]))
            pairs.append((num / den, k, j))
    pairs.sort(reverse=True)
    used_k, used_j, cosines = set(), set(), []
    for cos, k, j in pairs:
        if k not in used_k and j not in used_j:
            used_k.add(k)
            used_j.add(j)
            cosines.append(cos)
    return cosines


class TestSampler:
    def test_single_token_corpus(self):
        docs = [["w"]]
        vocab = build_vocabulary(docs)
        config = LdaConfig(topics=2, iterations=5, seed=1)
        model = fit_lda(docs, config, vocab)
        assert sum(model.n_k) == 1
        assigned = model.assignments[0][0]
        alpha = config.resolved_alpha()
        theta = model.theta()[0]
        assert theta[assigned] == pytest.approx((1 + alpha) / (1 + 2 * alpha))
        assert theta.sum() == pytest.approx(1.0, abs=1e-9)

    def test_same_seed_identical_assignments(self):
        docs, _ = disjoint_topic_corpus(40, seed=5)
        vocab = build_vocabulary(docs)
        config = LdaConfig(topics=3, iterations=20, seed=77)
        a = fit_lda(docs, config, vocab)
        b = fit_lda(docs, config, vocab)
        assert a.assignments == b.assignments

    def test_counts_conserved_after_every_sweep(self):
        docs, _ = disjoint_topic_corpus(50, seed=6)
        vocab = build_vocabulary(docs)
        sampler = GibbsSampler(docs, LdaConfig(topics=4, iterations=1, seed=2), vocab)
        assert conservation_holds(sampler)
        for _ in range(50):
            sampler.sweep()
            assert conservation_holds(sampler)

    def test_distributions_sum_to_one(self):
        docs, _ = disjoint_topic_corpus(60, seed=7)
        vocab = build_vocabulary(docs)
        model = fit_lda(docs, LdaConfig(topics=5, iterations=30, seed=3), vocab)
        phi, theta = model.phi(), model.theta()
        assert np.all(phi >= 0) and np.all(theta >= 0)
        assert np.allclose(phi.sum(axis=1), 1.0, atol=1e-9)
        assert np.allclose(theta.sum(axis=1), 1.0, atol=1e-9)

    def test_recovers_disjoint_topics(self):
        docs, true_phi = disjoint_topic_corpus(200, seed=8)
        vocab = build_vocabulary(docs)
        model = fit_lda(docs, LdaConfig(topics=3, iterations=200, seed=11), vocab)
        cosines = greedy_alignment_cosines(model.phi(), true_phi)
        assert sum(cosines) / len(cosines) >= 0.8

    def test_empty_corpus_rejected(self):
        vocab = build_vocabulary([["w"]])
        with pytest.raises(ValueError):
            GibbsSampler([], LdaConfig(topics=2), vocab)
        with pytest.raises(ValueError):
            GibbsSampler([[]], LdaConfig(topics=2), vocab)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            LdaConfig(topics=1)
        with pytest.raises(ValueError):
            LdaConfig(beta=0.0)
        assert LdaConfig(topics=10).resolved_alpha() == 5.0


def hand_model(n_kw: list[list[int]], terms: list[str], beta: float = 0.01) -> TopicModel:
    vocab = build_vocabulary([terms])
    # vocabulary sorts terms; build counts in vocabulary order
    reorder = [terms.index(t) for t in vocab.terms]
    counts = [[row[i] for i in reorder] for row in n_kw]
    while len(counts) < 2:  # config requires at least two topics
        counts.append([0] * len(terms))
    n_k = [sum(row) for row in counts]
    return TopicModel(
        config=LdaConfig(topics=len(counts), beta=beta, iterations=0, seed=0),
        vocab=vocab,
        assignments=[],
        n_kw=counts,
        n_dk=[list(n_k)],
        n_k=n_k,
    )


class TestTopTerms:
    def test_ranked_by_probability(self):
        model = hand_model([[5, 3, 2]], ["alpha", "beta", "gamma"])
        rows = top_terms(model, 0, day_counts={"alpha": 9, "beta": 4, "gamma": 2})
        assert [r.term for r in rows] == ["alpha", "beta", "gamma"]
        assert rows[0].topic_count == 5
        assert rows[0].day_count == 9

    def test_probability_tie_breaks_lexicographically(self):
        model = hand_model([[3, 3, 1]], ["zulu", "echo", "mike"])
        rows = top_terms(model, 0, day_counts={})
        assert [r.term for r in rows][:2] == ["echo", "zulu"]

    def test_matches_brute_force_sort_oracle(self):
        docs, _ = disjoint_topic_corpus(80, seed=13)
        vocab = build_vocabulary(docs)
        model = fit_lda(docs, LdaConfig(topics=3, iterations=30, seed=17), vocab)
        phi = model.phi()
        for k in range(3):
            rows = top_terms(model, k, day_counts={}, n=30)
            expected = sorted(
                vocab.terms, key=lambda t: (-phi[k][vocab.index_of[t]], t)
            )[:30]
            assert [r.term for r in rows] == expected

    def test_topic_count_bounded_by_day_count(self):
        docs, _ = disjoint_topic_corpus(80, seed=19)
        vocab = build_vocabulary(docs)
        model = fit_lda(docs, LdaConfig(topics=3, iterations=10, seed=23), vocab)
        from collections import Counter

        day_counts = Counter(t for doc in docs for t in doc)
        for k in range(3):
            for row in top_terms(model, k, day_counts=day_counts):
                assert row.topic_count <= row.day_count

    def test_topic_out_of_range(self):
        model = hand_model([[1]], ["w"])
        with pytest.raises(ValueError):
            top_terms(model, 5, day_counts={})


class TestPrevalentTopic:
    def test_majority_mass(self):
        model = hand_model([[3, 1], [2, 0]], ["a", "b"])
        model.n_dk = [[4, 2]]
        model.n_k = [4, 2]
        assert prevalent_topic(model) == 0

    def test_tie_goes_to_lowest_index(self):
        model = hand_model([[2, 0], [0, 2]], ["a", "b"])
        assert prevalent_topic(model) == 0

    def test_matches_token_recount(self):
        docs, _ = disjoint_topic_corpus(60, seed=29)
        vocab = build_vocabulary(docs)
        model = fit_lda(docs, LdaConfig(topics=3, iterations=15, seed=31), vocab)
        recount = [0, 0, 0]
        for zs in model.assignments:
            for z in zs:
                recount[z] += 1
        assert prevalent_topic(model) == recount.index(max(recount))


class TestExport:
    def test_export_shape_and_prevalent_flag(self):
        docs, _ = disjoint_topic_corpus(50, seed=37)
        vocab = build_vocabulary(docs)
        model = fit_lda(docs, LdaConfig(topics=3, iterations=10, seed=41), vocab)
        from collections import Counter

        payload = export_day_topics(model, Counter(t for d in docs for t in d), n=5)
        assert payload["n_topics"] == 3
        assert len(payload["topics"]) == 3
        flagged = [t for t in payload["topics"] if t["prevalent"]]
        assert len(flagged) == 1
        assert flagged[0]["topic"] == payload["prevalent_topic"]
        assert all(len(t["terms"]) <= 5 for t in payload["topics"])
