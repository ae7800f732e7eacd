"""The skeletal category F of pointed finite sets, the injection category Inj,
reindexing, smash products of tuples, and a pointed truncated Delta^op."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

from .category import FinCategory
from .pointed import PointedMap, compose_pointed, identity_map


class TruncationError(ValueError):
    pass


class _Star:
    """The basepoint object of a tuple category."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "*"

    __str__ = __repr__

    def __reduce__(self):
        return (_Star, ())


STAR = _Star()


@dataclass(frozen=True)
class TruncationParams:
    N: int = 2
    q_max: int = 2
    d: int = 3

    def __post_init__(self):
        if min(self.N, self.q_max, self.d) < 0:
            raise ValueError("truncation parameters must be >= 0")

    def check_size(self, n: int) -> None:
        if n > self.N:
            raise TruncationError(f"<{n}> exceeds truncation N={self.N}")

    def check_length(self, q: int) -> None:
        if q > self.q_max:
            raise TruncationError(f"tuple length {q} exceeds q_max={self.q_max}")


# F


def enum_fskel_hom(n: int, m: int, nonzero_only: bool = False, N: int | None = None) -> list[PointedMap]:
    """All pointed maps <n> -> <m>, lexicographic in their value arrays."""
    if N is not None and max(n, m) > N:
        raise TruncationError(f"hom(<{n}>, <{m}>) exceeds truncation N={N}")
    maps = [PointedMap(n, m, vals) for vals in itertools.product(range(m + 1), repeat=n)]
    if nonzero_only:
        maps = [f for f in maps if any(f.values)]
    return maps


def fskel(N: int) -> FinCategory:
    """The full subcategory of F on <0>, ..., <N>."""
    return FinCategory.generate(
        list(range(N + 1)),
        hom=lambda a, b: enum_fskel_hom(a, b),
        compose=lambda a, b, c, g, f: compose_pointed(g, f),
        identity=identity_map,
        basepoint=0,
        name=f"F<={N}",
    )


def smash_objects(t: Sequence[int] | _Star) -> int:
    if t is STAR:
        return 0
    return math.prod(t)


def lex_index(point: Sequence[int], sizes: Sequence[int]) -> int:
    """Position of a nonbasepoint point of a smash product, leftmost factor most significant."""
    idx = 0
    for a, n in zip(point, sizes):
        idx = idx * n + (a - 1)
    return idx + 1


def lex_points(sizes: Sequence[int]) -> list[tuple[int, ...]]:
    return list(itertools.product(*(range(1, n + 1) for n in sizes)))


# Inj


@dataclass(frozen=True, order=True)
class Injection:
    """An injection {1..q} -> {1..p}; ``images[i-1]`` is the image of i."""

    q: int
    p: int
    images: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.images, tuple):
            object.__setattr__(self, "images", tuple(self.images))
        if len(self.images) != self.q:
            raise ValueError(f"injection needs {self.q} images, got {len(self.images)}")
        if len(set(self.images)) != self.q or any(not 1 <= v <= self.p for v in self.images):
            raise ValueError(f"{self.images} is not an injection into {{1..{self.p}}}")

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def preimage(self, j: int) -> int | None:
        try:
            return self.images.index(j) + 1
        except ValueError:
            return None

    def to_json(self) -> dict:
        return {"q": self.q, "p": self.p, "images": list(self.images)}

    @classmethod
    def from_json(cls, data: dict) -> Injection:
        return cls(int(data["q"]), int(data["p"]), tuple(int(v) for v in data["images"]))


def identity_injection(q: int) -> Injection:
    return Injection(q, q, tuple(range(1, q + 1)))


def compose_injections(g: Injection, f: Injection) -> Injection:
    if f.p != g.q:
        raise ValueError("injections are not composable")
    return Injection(f.q, g.p, tuple(g(v) for v in f.images))


def enum_injections(q: int, p: int) -> list[Injection]:
    # permutations of a sorted pool come out in lexicographic order
    return [Injection(q, p, imgs) for imgs in itertools.permutations(range(1, p + 1), q)]


def block_injection(f: Injection, g: Injection) -> Injection:
    """``f (+) g`` on {1..q+q'} -> {1..p+p'}."""
    return Injection(f.q + g.q, f.p + g.p, f.images + tuple(v + f.p for v in g.images))


def reindex(f: Injection, t: Sequence, fill=1) -> tuple:
    """``f_* t``: entry j is ``t[f^{-1}(j)]``, or ``fill`` off the image of f."""
    if len(t) != f.q:
        raise ValueError(f"tuple of length {len(t)} cannot be reindexed along Inj({f.q},{f.p})")
    out = [fill] * f.p
    for i, j in enumerate(f.images):
        out[j - 1] = t[i]
    return tuple(out)


def smash_maps(f: Injection, psis: Sequence[PointedMap], source: Sequence[int],
               target: Sequence[int]) -> PointedMap:
    """The smash of a morphism ``(f, psis): source -> target`` of tuples.

    A point ``(a_1..a_q)`` goes to ``(b_1..b_p)`` with ``b_j = psi_j(a_{f^-1(j)})``,
    where ``a_{empty} = 1``; if any ``b_j`` is the basepoint so is the image.
    """
    source, target = tuple(source), tuple(target)
    if len(source) != f.q or len(target) != f.p or len(psis) != f.p:
        raise ValueError("malformed morphism datum for smash_maps")
    expected = reindex(f, source)
    for j, psi in enumerate(psis):
        if (psi.dom, psi.cod) != (expected[j], target[j]):
            raise ValueError(f"component {j + 1} should map <{expected[j]}> -> <{target[j]}>, got {psi!r}")
    pre = [f.preimage(j) for j in range(1, f.p + 1)]
    values = []
    for point in lex_points(source):
        image = []
        for j, psi in enumerate(psis):
            a = point[pre[j] - 1] if pre[j] else 1
            image.append(psi(a))
        values.append(0 if 0 in image else lex_index(image, target))
    return PointedMap(smash_objects(source), smash_objects(target), tuple(values))


# pointed Delta^op


def monotone_maps(n: int, m: int) -> list[tuple[int, ...]]:
    """Order-preserving [n] -> [m], lexicographic as value tuples."""
    return list(itertools.combinations_with_replacement(range(m + 1), n + 1))


def pointed_delta_op(d: int) -> FinCategory:
    """Delta^op on [0]..[d] with a disjoint zero object ``*`` adjoined.

    A nonzero morphism [m] -> [n] is labelled by the monotone map [n] -> [m]
    it reverses; zero morphisms are labelled ``None``.
    """
    objects = [STAR] + list(range(d + 1))

    def hom(a, b):
        if a is STAR or b is STAR:
            return [None]
        return monotone_maps(b, a) + [None]

    def compose(a, b, c, g, f):
        if g is None or f is None:
            return None
        # f: a -> b reverses alpha_f: [b] -> [a]; g reverses alpha_g: [c] -> [b]
        return tuple(f[v] for v in g)

    def identity(a):
        return None if a is STAR else tuple(range(a + 1))

    return FinCategory.generate(objects, hom, compose, identity, basepoint=STAR,
                                name=f"Dop+<={d}")
