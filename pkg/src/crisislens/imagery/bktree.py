"""BK-tree index over Hamming space and the streaming de-duplication pass."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .phash import hamming


@dataclass
class DedupConfig:
    """Hamming radius: images within ``tau`` of a retained image are duplicates."""

    tau: int = 10

    def __post_init__(self) -> None:
        if not 0 <= self.tau <= 64:
            raise ValueError("tau must lie in [0, 64]")


class _Node:
    __slots__ = ("value", "index", "children")

    def __init__(self, value: int, index: int) -> None:
        self.value = value
        self.index = index  # insertion order, used for earliest-match ties
        self.children: dict[int, _Node] = {}


class BKTree:
    """Metric tree on Hamming distance; radius queries prune by the
    triangle inequality (child edge distance within [d - tau, d + tau])."""

    def __init__(self) -> None:
        self._root: Optional[_Node] = None
        self._size = 0

    def __len__(self) -> int:
        return self._size

    def insert(self, value: int, index: int) -> None:
        node = _Node(value, index)
        self._size += 1
        if self._root is None:
            self._root = node
            return
        current = self._root
        while True:
            d = hamming(value, current.value)
            child = current.children.get(d)
            if child is None:
                current.children[d] = node
                return
            current = child

    def within(self, value: int, tau: int) -> list[tuple[int, int]]:
        """All (insertion index, distance) pairs within ``tau`` of ``value``."""
        if self._root is None:
            return []
        matches: list[tuple[int, int]] = []
        stack = [self._root]
        while stack:
            node = stack.pop()
            d = hamming(value, node.value)
            if d <= tau:
                matches.append((node.index, d))
            for edge, child in node.children.items():
                if d - tau <= edge <= d + tau:
                    stack.append(child)
        return matches

    def earliest_within(self, value: int, tau: int) -> Optional[int]:
        matches = self.within(value, tau)
        if not matches:
            return None
        return min(index for index, _ in matches)


def dedup_stream(hashes: list[int], config: DedupConfig) -> list[Optional[int]]:
    """Process hashes in arrival order against the retained set.

    Returns one entry per input: ``None`` if the image was retained, else
    the stream index of the earliest retained image within ``tau``.
    """
    tree = BKTree()
    verdicts: list[Optional[int]] = []
    for i, h in enumerate(hashes):
        match = tree.earliest_within(h, config.tau)
        verdicts.append(match)
        if match is None:
            tree.insert(h, i)
    return verdicts
