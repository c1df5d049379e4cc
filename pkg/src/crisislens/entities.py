"""Rule-and-gazetteer entity extraction, human curation rules, top-k tables.

Extraction is a deterministic left-to-right pass over a light tokenization
of the raw text, producing candidate spans from three sources:

(a) gazetteer phrases (locations, organizations, persons), matched
    case-insensitively as whole-word sequences;
(b) a title prefix (Gov., Sen., Mr., Dr., President) followed by a
    capitalized token run -> person;
(c) a capitalized token run ending in an organization suffix
    (Inc., Corp., Agency, Center, Department) -> organization.

Overlapping candidates are resolved longest-span first, then earliest
start, then by source priority in the order above, so the surviving
mentions of a tweet never overlap.  This baseline hides behind the same
interface a learned tagger would use; everything downstream consumes only
the mention stream.
"""

from __future__ import annotations

import json
import re
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .corpus import Corpus, normalize_for_dedup

ETYPES = ("person", "organization", "location")

TITLE_PREFIXES = frozenset({"gov.", "sen.", "mr.", "dr.", "president"})
ORG_SUFFIXES = frozenset({"Inc.", "Corp.", "Agency", "Center", "Department"})

# Word-ish tokens; interior periods kept so abbreviations like "U.S." and
# titles like "Gov." stay single tokens.
_TOKEN = re.compile(r"[A-Za-z][A-Za-z0-9.'&-]*")


@dataclass(frozen=True)
class EntityMention:
    surface: str
    etype: str
    tweet_id: str
    start: int
    end: int


@dataclass
class EntityTable:
    """Top-k surfaces of one entity type, sorted by tweet count descending."""

    etype: str
    rows: list[tuple[str, int, int]]  # (surface, tweet_count, unique_message_count)


@dataclass
class GazetteerResources:
    """Lowercased token-tuple phrase sets per entity type."""

    phrases: dict[str, set[tuple[str, ...]]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for etype in ETYPES:
            self.phrases.setdefault(etype, set())
        self.max_len = max(
            (len(p) for phrases in self.phrases.values() for p in phrases),
            default=0,
        )


def load_gazetteer_file(path: str) -> set[tuple[str, ...]]:
    """One phrase per line; ``#`` comments and blank lines ignored."""
    phrases: set[tuple[str, ...]] = set()
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            phrase = line.split("#", 1)[0].strip()
            if phrase:
                phrases.add(tuple(phrase.lower().split()))
    return phrases


def load_gazetteers(
    persons: str | None = None,
    organizations: str | None = None,
    locations: str | None = None,
) -> GazetteerResources:
    resources = GazetteerResources()
    if persons:
        resources.phrases["person"] = load_gazetteer_file(persons)
    if organizations:
        resources.phrases["organization"] = load_gazetteer_file(organizations)
    if locations:
        resources.phrases["location"] = load_gazetteer_file(locations)
    resources.__post_init__()
    return resources


def _tokenize(text: str) -> list[tuple[str, int, int]]:
    """(token, start, end) triples; a lone trailing period is sentence
    punctuation and gets trimmed unless the token is a known title or a
    dotted abbreviation."""
    tokens: list[tuple[str, int, int]] = []
    for m in _TOKEN.finditer(text):
        tok, start, end = m.group(0), m.start(), m.end()
        if (
            tok.endswith(".")
            and tok.count(".") == 1
            and tok.lower() not in TITLE_PREFIXES
        ):
            tok = tok[:-1]
            end -= 1
        if tok:
            tokens.append((tok, start, end))
    return tokens


def _is_capitalized(token: str) -> bool:
    return token[0].isupper()


def extract_entities(
    text: str,
    resources: GazetteerResources,
    tweet_id: str = "",
) -> list[EntityMention]:
    tokens = _tokenize(text)
    lowered = [t[0].lower() for t in tokens]
    n = len(tokens)
    # candidate = (start, end, etype, priority); lower priority wins ties
    candidates: list[tuple[int, int, str, int]] = []

    priorities = {"location": 0, "organization": 1, "person": 2}
    for i in range(n):
        for length in range(1, min(resources.max_len, n - i) + 1):
            window = tuple(lowered[i : i + length])
            for etype in ("location", "organization", "person"):
                if window in resources.phrases[etype]:
                    candidates.append(
                        (tokens[i][1], tokens[i + length - 1][2], etype, priorities[etype])
                    )

    for i in range(n - 1):
        if lowered[i] in TITLE_PREFIXES and _is_capitalized(tokens[i + 1][0]):
            j = i + 1
            while j + 1 < n and _is_capitalized(tokens[j + 1][0]):
                j += 1
            candidates.append((tokens[i + 1][1], tokens[j][2], "person", 3))

    run_start = None
    for i in range(n + 1):
        capitalized = i < n and _is_capitalized(tokens[i][0])
        if capitalized and run_start is None:
            run_start = i
        elif not capitalized and run_start is not None:
            for j in range(run_start + 1, i):
                if tokens[j][0] in ORG_SUFFIXES:
                    candidates.append(
                        (tokens[run_start][1], tokens[j][2], "organization", 4)
                    )
            run_start = None

    # Longest span first, then earliest start, then source priority.
    candidates.sort(key=lambda c: (-(c[1] - c[0]), c[0], c[3]))
    chosen: list[tuple[int, int, str]] = []
    for start, end, etype, _prio in candidates:
        if all(end <= s or start >= e for s, e, _ in chosen):
            chosen.append((start, end, etype))
    chosen.sort()
    return [
        EntityMention(
            surface=text[start:end],
            etype=etype,
            tweet_id=tweet_id,
            start=start,
            end=end,
        )
        for start, end, etype in chosen
    ]


@dataclass
class CurationRules:
    """User-edited cleanup applied before aggregation.

    Surfaces in rules match mentions case-insensitively; alias targets are
    emitted verbatim.  Order of application: block, retype, alias.
    """

    blocklist: set[tuple[str, str]] = field(default_factory=set)  # (surface_lc, etype)
    retype: dict[tuple[str, str], str] = field(default_factory=dict)
    alias: dict[str, str] = field(default_factory=dict)  # surface_lc -> canonical

    def __post_init__(self) -> None:
        self._check_alias_cycles()

    def _check_alias_cycles(self) -> None:
        for start in self.alias:
            seen: set[str] = set()
            current = start
            while current in self.alias:
                target = self.alias[current].lower()
                if target == current:
                    break  # self-canonical fixed point
                if current in seen:
                    raise ValueError(f"alias cycle involving {start!r}")
                seen.add(current)
                current = target

    def resolve_alias(self, surface: str) -> str:
        current = surface
        hops = 0
        while current.lower() in self.alias:
            target = self.alias[current.lower()]
            if target.lower() == current.lower():
                return target
            current = target
            hops += 1
            if hops > len(self.alias):  # unreachable once load validation passed
                raise ValueError(f"alias cycle involving {surface!r}")
        return current


def load_curation(path: str) -> CurationRules:
    """Line-oriented directives::

        block <type> <surface>
        retype <old-type> <new-type> <surface>
        alias <surface> => <canonical>
    """
    blocklist: set[tuple[str, str]] = set()
    retype: dict[tuple[str, str], str] = {}
    alias: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split(None, 1)
            directive = parts[0]
            rest = parts[1] if len(parts) > 1 else ""
            if directive == "block":
                bits = rest.split(None, 1)
                if len(bits) != 2 or bits[0] not in ETYPES:
                    raise ValueError(f"{path}:{lineno}: bad block directive")
                blocklist.add((bits[1].strip().lower(), bits[0]))
            elif directive == "retype":
                bits = rest.split(None, 2)
                if len(bits) != 3 or bits[0] not in ETYPES or bits[1] not in ETYPES:
                    raise ValueError(f"{path}:{lineno}: bad retype directive")
                retype[(bits[2].strip().lower(), bits[0])] = bits[1]
            elif directive == "alias":
                if "=>" not in rest:
                    raise ValueError(f"{path}:{lineno}: bad alias directive")
                src, dst = (s.strip() for s in rest.split("=>", 1))
                if not src or not dst:
                    raise ValueError(f"{path}:{lineno}: bad alias directive")
                alias[src.lower()] = dst
            else:
                raise ValueError(f"{path}:{lineno}: unknown directive {directive!r}")
    return CurationRules(blocklist=blocklist, retype=retype, alias=alias)


def apply_curation(
    mentions: Iterable[EntityMention],
    rules: CurationRules,
) -> list[EntityMention]:
    out: list[EntityMention] = []
    for m in mentions:
        key = m.surface.lower()
        if (key, m.etype) in rules.blocklist:
            continue
        etype = rules.retype.get((key, m.etype), m.etype)
        surface = rules.resolve_alias(m.surface)
        if surface != m.surface or etype != m.etype:
            m = EntityMention(
                surface=surface,
                etype=etype,
                tweet_id=m.tweet_id,
                start=m.start,
                end=m.end,
            )
        out.append(m)
    return out


def aggregate_topk(
    mentions: Iterable[EntityMention],
    corpus: Corpus,
    k: int = 10,
) -> dict[str, EntityTable]:
    """Per-type top-k tables by distinct-tweet count.

    ``tweet_count`` is the number of distinct tweets with at least one
    mention of the surface; ``unique_message_count`` the number of distinct
    canonical texts among those tweets.  Ties sort by surface.
    """
    text_by_id = {rec.id: rec.text for rec in corpus.records}
    tweets: dict[tuple[str, str], set[str]] = defaultdict(set)
    for m in mentions:
        if m.tweet_id in text_by_id:
            tweets[(m.etype, m.surface)].add(m.tweet_id)
    tables: dict[str, EntityTable] = {}
    for etype in ETYPES:
        rows: list[tuple[str, int, int]] = []
        for (mtype, surface), ids in tweets.items():
            if mtype != etype:
                continue
            canon = {normalize_for_dedup(text_by_id[tid]) for tid in ids}
            rows.append((surface, len(ids), len(canon)))
        rows.sort(key=lambda r: (-r[1], r[0]))
        tables[etype] = EntityTable(etype=etype, rows=rows[:k])
    return tables


def write_tables(tables: Mapping[str, EntityTable], path: str) -> None:
    obj = {
        etype: [
            {"surface": s, "tweet_count": tc, "unique_message_count": uc}
            for s, tc, uc in table.rows
        ]
        for etype, table in tables.items()
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, sort_keys=True, indent=2, ensure_ascii=False)
        fh.write("\n")
