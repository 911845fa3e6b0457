from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class PartitionError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class GroupPartition:
    """Disjoint, sorted, half-open row ranges covering [0, M).

    Stored as G+1 increasing offsets so that group g is rows
    ``bounds[g]:bounds[g+1]``.
    """

    bounds: np.ndarray

    def __post_init__(self):
        b = np.ascontiguousarray(self.bounds, dtype=np.intp)
        if b.ndim != 1 or b.size < 2:
            raise PartitionError("need at least one group")
        if b[0] != 0:
            raise PartitionError("first group must start at row 0")
        if np.any(np.diff(b) <= 0):
            raise PartitionError("groups must be non-empty, sorted and contiguous")
        b.setflags(write=False)
        object.__setattr__(self, "bounds", b)

    @classmethod
    def from_ranges(cls, ranges) -> "GroupPartition":
        ranges = [tuple(map(int, r)) for r in ranges]
        if not ranges:
            raise PartitionError("need at least one group")
        for (a0, a1), (b0, _) in zip(ranges, ranges[1:]):
            if a1 != b0:
                raise PartitionError(f"ranges [{a0},{a1}) and [{b0},..) leave a gap or overlap")
        return cls(np.array([ranges[0][0]] + [r[1] for r in ranges]))

    @classmethod
    def equal(cls, m: int, n_groups: int) -> "GroupPartition":
        """``n_groups`` contiguous ranges of (near-)equal size over [0, m)."""
        if not 1 <= n_groups <= m:
            raise PartitionError(f"group count {n_groups} must lie in [1, {m}]")
        return cls(np.round(np.linspace(0, m, n_groups + 1)).astype(np.intp))

    @property
    def n_rows(self) -> int:
        return int(self.bounds[-1])

    @property
    def n_groups(self) -> int:
        return self.bounds.size - 1

    @property
    def sizes(self) -> np.ndarray:
        return np.diff(self.bounds)

    @property
    def ranges(self) -> list:
        return [(int(a), int(b)) for a, b in zip(self.bounds[:-1], self.bounds[1:])]

    def group_of(self, rows) -> np.ndarray:
        return np.searchsorted(self.bounds, rows, side="right") - 1

    def check(self, m: int):
        if self.n_rows != m:
            raise PartitionError(f"partition covers {self.n_rows} rows, code has {m}")
