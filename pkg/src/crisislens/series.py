"""Day-ordered value series shared by every aggregation and the report layer."""

from __future__ import annotations

from dataclasses import dataclass

UNITS = ("count", "percent", "fraction")


@dataclass(frozen=True)
class DailySeries:
    """One value per day of an event window, in window order."""

    name: str
    event: str
    values: tuple[float, ...]
    unit: str

    def __post_init__(self) -> None:
        if self.unit not in UNITS:
            raise ValueError(f"unit must be one of {UNITS}, got {self.unit!r}")
        if self.unit == "percent" and any(v < 0 or v > 100 for v in self.values):
            raise ValueError(f"percent values out of [0, 100] in {self.name!r}")
        if self.unit == "fraction" and any(v < 0 or v > 1 for v in self.values):
            raise ValueError(f"fraction values out of [0, 1] in {self.name!r}")

    def __len__(self) -> int:
        return len(self.values)
