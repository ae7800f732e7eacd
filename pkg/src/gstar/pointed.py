"""Pointed finite sets <n> = {0, ..., n} and basepoint-preserving maps."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True, order=True)
class PointedFinSet:
    size: int

    def __post_init__(self):
        if self.size < 0:
            raise ValueError(f"pointed set size must be >= 0, got {self.size}")

    @property
    def elements(self) -> range:
        return range(self.size + 1)

    def to_json(self) -> dict:
        return {"size": self.size}

    @classmethod
    def from_json(cls, data: dict) -> PointedFinSet:
        return cls(int(data["size"]))


@dataclass(frozen=True, order=True)
class PointedMap:
    """A map <dom> -> <cod>; ``values[k-1]`` is the image of element k."""

    dom: int
    cod: int
    values: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.values, tuple):
            object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) != self.dom:
            raise ValueError(f"expected {self.dom} values, got {len(self.values)}")
        for v in self.values:
            if not 0 <= v <= self.cod:
                raise ValueError(f"value {v} outside <{self.cod}>")

    def __call__(self, x: int) -> int:
        return self.values[x - 1] if x else 0

    @property
    def table(self) -> tuple[int, ...]:
        """Images of 0, 1, ..., dom."""
        return (0,) + self.values

    def is_injective(self) -> bool:
        nonzero = [v for v in self.values if v]
        return len(nonzero) == self.dom and len(set(nonzero)) == self.dom

    def is_surjective(self) -> bool:
        return set(self.values) | {0} == set(range(self.cod + 1))

    def is_bijection(self) -> bool:
        return self.dom == self.cod and self.is_injective()

    def to_json(self) -> dict:
        return {"dom": self.dom, "cod": self.cod, "values": list(self.values)}

    @classmethod
    def from_json(cls, data: dict) -> PointedMap:
        return cls(int(data["dom"]), int(data["cod"]), tuple(int(v) for v in data["values"]))

    def __repr__(self) -> str:
        return f"PointedMap(<{self.dom}> -> <{self.cod}>, {list(self.values)})"


def identity_map(n: int) -> PointedMap:
    return PointedMap(n, n, tuple(range(1, n + 1)))


def zero_map(n: int, m: int) -> PointedMap:
    return PointedMap(n, m, (0,) * n)


def is_zero_morphism(f: PointedMap) -> bool:
    # the only factorization through <0> is the constant basepoint map
    return all(v == 0 for v in f.values)


def compose_pointed(g: PointedMap, f: PointedMap) -> PointedMap:
    """``g o f``."""
    if f.cod != g.dom:
        raise ValueError(f"cannot compose {g!r} after {f!r}: <{f.cod}> != <{g.dom}>")
    gt = g.table
    return PointedMap(f.dom, g.cod, tuple(gt[v] for v in f.values))


def wedge(xs: Sequence[PointedFinSet | int]) -> tuple[PointedFinSet, list[PointedMap]]:
    """Wedge sum with its summand inclusions, summands laid out left to right.

    The empty wedge is <0>.
    """
    sizes = [x.size if isinstance(x, PointedFinSet) else int(x) for x in xs]
    total = sum(sizes)
    inclusions = []
    offset = 0
    for n in sizes:
        inclusions.append(PointedMap(n, total, tuple(range(offset + 1, offset + n + 1))))
        offset += n
    return PointedFinSet(total), inclusions


def pointed_map_from_function(dom: int, cod: int, fn) -> PointedMap:
    return PointedMap(dom, cod, tuple(fn(k) for k in range(1, dom + 1)))

