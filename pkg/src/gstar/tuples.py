"""Tuple categories over a pointed base: G* (base F) and E (base pointed Delta^op).

Objects are ``*`` and tuples of nonzero base objects.  A nonzero morphism
``n -> m`` is an injection ``f`` on positions together with nonzero base
morphisms ``psi_j: (f_* n)_j -> m_j``; anything with a zero component is
identified with the zero morphism.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Sequence

from .category import FinCategory, PointedFunctor, object_key, require_valid
from .pointed import PointedMap
from .skeletal import (
    STAR,
    Injection,
    TruncationError,
    block_injection,
    compose_injections,
    enum_injections,
    fskel,
    identity_injection,
    reindex,
    smash_maps,
    smash_objects,
)


@dataclass(frozen=True)
class TupleMorphism:
    """``(f, psis)`` with base morphism ids, or the zero morphism when ``f`` is None."""

    dom: Any
    cod: Any
    f: Injection | None = None
    psis: tuple[int, ...] = ()

    @property
    def is_zero(self) -> bool:
        return self.f is None


def zero_morphism(dom, cod) -> TupleMorphism:
    return TupleMorphism(dom, cod)


def tuple_hom(base: FinCategory, unit, dom, cod, nonzero_only: bool = False) -> list[TupleMorphism]:
    """Morphisms ``dom -> cod`` over ``base`` without building the whole tuple category.

    Order: injections lexicographic, then component ids, then the zero morphism.
    """
    out = []
    if dom is not STAR and cod is not STAR:
        for f in enum_injections(len(dom), len(cod)):
            src = reindex(f, dom, fill=unit)
            choices = [base.nonzero_hom(s, t) for s, t in zip(src, cod)]
            for psis in itertools.product(*choices):
                out.append(TupleMorphism(dom, cod, f, psis))
    if not nonzero_only:
        out.append(zero_morphism(dom, cod))
    return out


class TupleCategory:
    """The tuple category over ``base`` truncated at length ``q_max``.

    ``unit`` is the base object filling positions missed by an injection
    (``<1>`` for F).
    """

    def __init__(self, base: FinCategory, q_max: int, unit, name: str = ""):
        require_valid(base)
        if base.basepoint is None:
            raise ValueError("base category lacks a zero object")
        if unit == base.basepoint or not base.has_object(unit):
            raise ValueError(f"unit {unit!r} must be a nonzero base object")
        self.base = base
        self.q_max = q_max
        self.unit = unit
        self.base_objects = tuple(b for b in base.objects if b != base.basepoint)
        self.objects = [STAR] + [t for q in range(q_max + 1)
                                 for t in itertools.product(self.base_objects, repeat=q)]
        self._unit_id = base.identity(unit)
        self.cat = FinCategory.generate(
            self.objects,
            hom=lambda a, b: self.hom(a, b),
            compose=lambda a, b, c, g, f: self.compose(g, f),
            identity=self.identity,
            basepoint=STAR,
            name=name or f"T({base.name})<={q_max}",
        )

    def contains(self, t) -> bool:
        return t is STAR or (isinstance(t, tuple) and len(t) <= self.q_max
                             and all(x in self.base_objects for x in t))

    def _check(self, *ts) -> None:
        for t in ts:
            if not self.contains(t):
                raise TruncationError(f"{object_key(t)} is not an object of {self.cat.name}")

    def fill(self, f: Injection, t: Sequence) -> tuple:
        out = [self.unit] * f.p
        for i, j in enumerate(f.images):
            out[j - 1] = t[i]
        return tuple(out)

    def hom(self, dom, cod, nonzero_only: bool = False) -> list[TupleMorphism]:
        self._check(dom, cod)
        return tuple_hom(self.base, self.unit, dom, cod, nonzero_only)

    def identity(self, t) -> TupleMorphism:
        if t is STAR:
            return zero_morphism(STAR, STAR)
        return TupleMorphism(t, t, identity_injection(len(t)), tuple(self.base.identity(x) for x in t))

    def compose(self, g: TupleMorphism, f: TupleMorphism) -> TupleMorphism:
        """``(g f, phi o g_* psi)``, normalized to zero if any component is zero."""
        if f.cod != g.dom:
            raise ValueError(f"cannot compose {g} after {f}")
        if f.is_zero or g.is_zero:
            return zero_morphism(f.dom, g.cod)
        B = self.base
        psis = list(g.psis)
        for i, j in enumerate(g.f.images):
            psis[j - 1] = B.compose(g.psis[j - 1], f.psis[i])
        if any(B.is_zero(m) for m in psis):
            return zero_morphism(f.dom, g.cod)
        return TupleMorphism(f.dom, g.cod, compose_injections(g.f, f.f), tuple(psis))

    def make(self, dom, cod, f: Injection, psis: Sequence) -> TupleMorphism:
        """A morphism from base ids or base labels, normalized."""
        B = self.base
        src = self.fill(f, dom)
        ids = []
        for s, t, psi in zip(src, cod, psis):
            ids.append(psi if isinstance(psi, int) and not isinstance(psi, bool)
                       else B.mid(s, t, psi))
        if len(ids) != f.p or any(B.is_zero(m) for m in ids):
            return zero_morphism(dom, cod)
        return TupleMorphism(dom, cod, f, tuple(ids))

    def morphism_json(self, m: TupleMorphism) -> dict:
        out = {"dom": _key_json(m.dom), "cod": _key_json(m.cod)}
        if m.is_zero:
            out["zero"] = True
        else:
            out["f"] = list(m.f.images)
            out["psis"] = [_label_json(self.base.label(p)) for p in m.psis]
        return out


def _key_json(t):
    return {"basepoint": True} if t is STAR else {"entries": [_label_json(x) for x in t]}


def _label_json(x):
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, tuple):
        return list(x)
    return x


def build_tuple_category(base: FinCategory, q_max: int, unit=None) -> TupleCategory:
    if unit is None:
        unit = 1
    return TupleCategory(base, q_max, unit)


def build_gstar(N: int, q_max: int) -> TupleCategory:
    return TupleCategory(fskel(N), q_max, unit=1, name=f"G*<={N},{q_max}")


def build_e(d: int, q_max: int) -> TupleCategory:
    from .skeletal import pointed_delta_op
    return TupleCategory(pointed_delta_op(d), q_max, unit=0, name=f"E<={d},{q_max}")


def enum_tuple_hom(T: TupleCategory, dom, cod, nonzero_only: bool = False) -> list[TupleMorphism]:
    """Hom-set in canonical order: injections lexicographic, then components, zero last."""
    return T.hom(dom, cod, nonzero_only)


def compose_tuple(T: TupleCategory, g: TupleMorphism, f: TupleMorphism) -> TupleMorphism:
    return T.compose(g, f)


def oplus(T: TupleCategory, a, b):
    """Concatenation of objects, or block sum of morphisms; ``*`` and zero absorb."""
    if isinstance(a, TupleMorphism) != isinstance(b, TupleMorphism):
        raise TypeError("oplus needs two objects or two morphisms")
    if not isinstance(a, TupleMorphism):
        if a is STAR or b is STAR:
            return STAR
        out = tuple(a) + tuple(b)
        T._check(tuple(a), tuple(b))
        if len(out) > T.q_max:
            raise TruncationError(f"{object_key(out)} exceeds q_max={T.q_max}")
        return out
    dom, cod = oplus(T, a.dom, b.dom), oplus(T, a.cod, b.cod)
    if a.is_zero or b.is_zero:
        return zero_morphism(dom, cod)
    return TupleMorphism(dom, cod, block_injection(a.f, b.f), a.psis + b.psis)


def collapse_functor(T: TupleCategory, x, N_target: int | None = None):
    """The smash functor on an object (returns n for <n>) or a morphism (returns a PointedMap)."""
    if not isinstance(x, TupleMorphism):
        n = smash_objects(x)
        if N_target is not None and n > N_target:
            raise TruncationError(f"smash <{n}> exceeds target truncation N={N_target}")
        return n
    dom, cod = collapse_functor(T, x.dom, N_target), collapse_functor(T, x.cod, N_target)
    if x.is_zero:
        return PointedMap(dom, cod, (0,) * dom)
    psis = [T.base.label(p) for p in x.psis]
    return smash_maps(x.f, psis, x.dom, x.cod)


def smash_functor(T: TupleCategory, target: FinCategory | None = None) -> PointedFunctor:
    """The smash functor as a table functor into a truncation of F large enough for it."""
    if target is None:
        top = max([smash_objects(t) for t in T.objects] + [0])
        target = fskel(top)
    return PointedFunctor.from_labels(
        T.cat, target,
        on_object=lambda t: collapse_functor(T, t, target.objects[-1]),
        on_label=lambda a, b, m: collapse_functor(T, m, target.objects[-1]),
        name="smash",
    )


def length_one_inclusion(T: TupleCategory) -> PointedFunctor:
    """``b |-> (b)``, ``psi |-> (1, (psi))``; the zero object goes to ``*``."""
    if T.q_max < 1:
        raise TruncationError("length-one inclusion needs q_max >= 1")
    B = T.base
    one = identity_injection(1)

    def on_object(b):
        return STAR if b == B.basepoint else (b,)

    omap = {b: on_object(b) for b in B.objects}
    mmap = []
    for m in B.morphisms():
        a, b = omap[B.dom(m)], omap[B.cod(m)]
        if B.is_zero(m):
            label = zero_morphism(a, b)
        else:
            label = TupleMorphism(a, b, one, (m,))
        mmap.append(T.cat.mid(a, b, label))
    return PointedFunctor(B, T.cat, omap, mmap, name="i")


def nonzero_hom_count(T: TupleCategory, dom, cod) -> int:
    """Closed-form count: sum over injections of the product of nonzero component counts."""
    if dom is STAR or cod is STAR:
        return 0
    total = 0
    for f in enum_injections(len(dom), len(cod)):
        prod = 1
        for s, t in zip(T.fill(f, dom), cod):
            prod *= len(T.base.hom(s, t)) - 1
        total += prod
    return total


def fskel_nonzero_count_formula(dom: Sequence[int], cod: Sequence[int]) -> int:
    """Sum over f in Inj(q,p) of prod_j ((m_j + 1)^(n_{f^-1 j}) - 1), n_empty = 1."""
    total = 0
    for f in enum_injections(len(dom), len(cod)):
        prod = 1
        for j, m in enumerate(cod, start=1):
            i = f.preimage(j)
            n = dom[i - 1] if i else 1
            prod *= (m + 1) ** n - 1
        total += prod
    return total
