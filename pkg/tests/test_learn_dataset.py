import numpy as np
import pytest

from crisislens.learn import LabeledDataset, split_dataset


def one_class_dataset(n: int, n_classes: int = 1) -> LabeledDataset:
    return LabeledDataset(
        features=np.arange(n, dtype=float).reshape(-1, 1),
        labels=np.zeros(n, dtype=int),
        class_names=tuple(f"c{i}" for i in range(n_classes)),
    )


def multi_class_dataset(counts: dict[int, int]) -> LabeledDataset:
    labels = np.concatenate([[cls] * n for cls, n in counts.items()])
    return LabeledDataset(
        features=np.arange(len(labels), dtype=float).reshape(-1, 1),
        labels=labels,
        class_names=tuple(f"c{i}" for i in range(max(counts) + 1)),
    )


class TestSplitDataset:
    def test_exact_ratio_sizes(self):
        train, dev, test = split_dataset(one_class_dataset(100), (0.6, 0.2, 0.2), seed=1)
        assert (train.n, dev.n, test.n) == (60, 20, 20)

    def test_remainder_assigned_train_first(self):
        train, dev, test = split_dataset(one_class_dataset(7), (0.6, 0.2, 0.2), seed=1)
        assert (train.n, dev.n, test.n) == (5, 1, 1)

    def test_tiny_class_goes_entirely_to_train(self, caplog):
        data = multi_class_dataset({0: 50, 1: 2})
        with caplog.at_level("WARNING"):
            train, dev, test = split_dataset(data, (0.6, 0.2, 0.2), seed=1)
        assert int((train.labels == 1).sum()) == 2
        assert int((dev.labels == 1).sum()) == 0
        assert int((test.labels == 1).sum()) == 0
        assert any("c1" in rec.message for rec in caplog.records)

    def test_ratios_must_sum_to_one(self):
        with pytest.raises(ValueError):
            split_dataset(one_class_dataset(10), (0.5, 0.2, 0.2), seed=1)

    def test_stratified_floor_plus_remainder_per_class(self):
        counts = {0: 17, 1: 23, 2: 9, 3: 101}
        data = multi_class_dataset(counts)
        train, dev, test = split_dataset(data, (0.6, 0.2, 0.2), seed=5)
        for cls, n_c in counts.items():
            sizes = [int(0.6 * n_c), int(0.2 * n_c), int(0.2 * n_c)]
            remainder = n_c - sum(sizes)
            for slot in range(remainder):
                sizes[slot % 3] += 1
            assert int((train.labels == cls).sum()) == sizes[0]
            assert int((dev.labels == cls).sum()) == sizes[1]
            assert int((test.labels == cls).sum()) == sizes[2]

    def test_parts_partition_the_dataset(self):
        data = multi_class_dataset({0: 40, 1: 30})
        train, dev, test = split_dataset(data, (0.6, 0.2, 0.2), seed=2)
        values = np.concatenate(
            [train.features[:, 0], dev.features[:, 0], test.features[:, 0]]
        )
        assert sorted(values.tolist()) == list(range(70))

    def test_reproducible_for_a_seed(self):
        data = multi_class_dataset({0: 40, 1: 30})
        a = split_dataset(data, (0.6, 0.2, 0.2), seed=9)
        b = split_dataset(data, (0.6, 0.2, 0.2), seed=9)
        for part_a, part_b in zip(a, b):
            assert np.array_equal(part_a.features, part_b.features)
            assert np.array_equal(part_a.labels, part_b.labels)


class TestLabeledDataset:
    def test_validates_lengths_and_labels(self):
        with pytest.raises(ValueError):
            LabeledDataset(
                features=np.zeros((3, 2)), labels=np.zeros(2, dtype=int), class_names=("a",)
            )
        with pytest.raises(ValueError):
            LabeledDataset(
                features=np.zeros((2, 2)), labels=np.array([0, 1]), class_names=("a",)
            )
