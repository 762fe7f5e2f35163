from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from relkit.relalg import kernels


@dataclass(frozen=True)
class Relation:
    """Binary relation over ``range(n)`` stored as bit rows."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != self.n:
            raise ValueError("row count does not match base size")
        mask = (1 << self.n) - 1
        if any(r & ~mask for r in self.rows):
            raise ValueError("relation pair outside base x base")

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "Relation":
        rows = [0] * n
        for i, j in pairs:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"pair ({i}, {j}) outside base of size {n}")
            rows[i] |= 1 << j
        return cls(n, tuple(rows))

    @classmethod
    def empty(cls, n: int) -> "Relation":
        return cls(n, (0,) * n)

    @classmethod
    def full(cls, n: int) -> "Relation":
        return cls(n, ((1 << n) - 1,) * n)

    @classmethod
    def identity(cls, n: int) -> "Relation":
        return cls(n, tuple(1 << i for i in range(n)))

    def __contains__(self, pair: tuple[int, int]) -> bool:
        i, j = pair
        return bool(self.rows[i] >> j & 1)

    def pairs(self) -> Iterator[tuple[int, int]]:
        for i, r in enumerate(self.rows):
            j = 0
            while r:
                if r & 1:
                    yield (i, j)
                r >>= 1
                j += 1

    def successors(self, i: int) -> list[int]:
        r = self.rows[i]
        return [j for j in range(self.n) if r >> j & 1]

    def __len__(self) -> int:
        return sum(bin(r).count("1") for r in self.rows)

    def _same_base(self, other: "Relation") -> None:
        if self.n != other.n:
            raise ValueError("relations over different bases")

    def __or__(self, other: "Relation") -> "Relation":
        self._same_base(other)
        return Relation(self.n, tuple(a | b for a, b in zip(self.rows, other.rows)))

    def __and__(self, other: "Relation") -> "Relation":
        self._same_base(other)
        return Relation(self.n, tuple(a & b for a, b in zip(self.rows, other.rows)))

    def complement(self) -> "Relation":
        mask = (1 << self.n) - 1
        return Relation(self.n, tuple(~r & mask for r in self.rows))

    def compose(self, other: "Relation") -> "Relation":
        self._same_base(other)
        return Relation(self.n, kernels.compose(self.rows, other.rows, self.n))

    def converse(self) -> "Relation":
        return Relation(self.n, kernels.converse(self.rows, self.n))

    def closure(self) -> "Relation":
        return Relation(self.n, kernels.closure(self.rows, self.n))

    def issubset(self, other: "Relation") -> bool:
        self._same_base(other)
        return all(a & ~b == 0 for a, b in zip(self.rows, other.rows))

    def power(self, k: int) -> "Relation":
        out = Relation.identity(self.n)
        for _ in range(k):
            out = out.compose(self)
        return out


def closure(r: Relation, n: int | None = None) -> Relation:
    if n is not None and n != r.n:
        raise ValueError("base size does not match the relation")
    return r.closure()
