"""Relative categories and their set-level homotopy data: relative simplex
categories, truncated classification diagrams, Segal maps, and the simplicial
homotopies that natural transformations induce on nerves.

Every check here is the strict, set-level statement.  Segal maps are tested
for bijectivity, not for being weak equivalences.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Protocol, Sequence

import numpy as np

from .category import (
    FinCategory,
    NatTransformation,
    PointedFunctor,
    check_natural,
    require_valid,
    subcategory,
)
from .report import Report
from .simplicial import Nerve, TableSimplicialSet, check_simplicial_identities
from .skeletal import monotone_maps


class RelativeCategory:
    """A finite category with a class of weak equivalences, stored as morphism ids."""

    def __init__(self, cat: FinCategory, weq: Iterable[int] | Callable[[int], bool], name: str = ""):
        require_valid(cat)
        self.cat = cat
        if callable(weq):
            weq = [m for m in cat.morphisms() if weq(m)]
        self.weq = frozenset(weq)
        self.name = name or cat.name

    def is_weq(self, m: int) -> bool:
        return m in self.weq


def is_isomorphism(C: FinCategory, m: int) -> bool:
    a, b = C.dom(m), C.cod(m)
    return any(C.compose(n, m) == C.identity(a) and C.compose(m, n) == C.identity(b)
               for n in C.hom(b, a))


def weq_predicate(C: FinCategory, kind: str) -> Callable[[int], bool]:
    """``all``, ``identities`` or ``isos``."""
    if kind == "all":
        return lambda m: True
    if kind == "identities":
        return C.is_identity
    if kind == "isos":
        return lambda m: is_isomorphism(C, m)
    raise ValueError(f"unknown weak-equivalence class {kind!r}")


def check_relative_category(R: RelativeCategory, contains_isos: bool = False,
                            two_out_of_three: bool = False) -> Report:
    """Wide-subcategory axioms, plus the optional properties when declared."""
    C, W = R.cat, R.weq
    report = Report(f"relative[{R.name}]")
    fault = next((a for a in C.objects if C.identity(a) not in W), None)
    report.add("contains-identities", fault is None, witness={"object": fault})
    fault = next(({"g": g, "f": f} for g, f in C.composable_pairs()
                  if g in W and f in W and C.compose(g, f) not in W), None)
    report.add("closed-under-composition", fault is None, witness=fault)
    if contains_isos:
        fault = next((m for m in C.morphisms() if is_isomorphism(C, m) and m not in W), None)
        report.add("contains-isos", fault is None, witness={"morphism": fault})
    if two_out_of_three:
        fault = None
        for g, f in C.composable_pairs():
            if (g in W) + (f in W) + (C.compose(g, f) in W) == 2:
                fault = {"g": g, "f": f}
                break
        report.add("two-out-of-three", fault is None, witness=fault)
    return report


# fixtures


def _category_from_words(objects: Sequence, arrows: dict, relations: dict, name: str) -> FinCategory:
    """A finite category whose hom labels are words; ``relations`` rewrites
    composites ``(g, f)`` of non-identity labels."""
    homs = {(a, b): [] for a in objects for b in objects}
    for a in objects:
        homs[(a, a)].append(f"id{a}")
    for label, (a, b) in arrows.items():
        homs[(a, b)].append(label)

    def compose(a, b, c, g, f):
        if f == f"id{a}":
            return g
        if g == f"id{b}":
            return f
        return relations[(g, f)]

    return FinCategory.generate(objects, lambda a, b: homs[(a, b)], compose,
                                lambda a: f"id{a}", name=name)


def walking_arrow() -> FinCategory:
    return _category_from_words([0, 1], {"a": (0, 1)}, {}, "walking-arrow")


def walking_iso() -> FinCategory:
    return _category_from_words([0, 1], {"a": (0, 1), "b": (1, 0)},
                                {("b", "a"): "id0", ("a", "b"): "id1"}, "walking-iso")


def terminal_category() -> FinCategory:
    return _category_from_words([0], {}, {}, "terminal")


def composable_pair() -> FinCategory:
    """0 -> 1 -> 2 with the composite."""
    return _category_from_words([0, 1, 2], {"a": (0, 1), "b": (1, 2), "ba": (0, 2)},
                                {("b", "a"): "ba"}, "[2]")


FIXTURE_CATEGORIES: dict[str, Callable[[], FinCategory]] = {
    "walking-arrow": walking_arrow,
    "walking-iso": walking_iso,
    "terminal": terminal_category,
    "composable-pair": composable_pair,
}


def fixture_relative_categories() -> list[RelativeCategory]:
    out = []
    for name, build in FIXTURE_CATEGORIES.items():
        C = build()
        for kind in ("all", "identities", "isos"):
            out.append(RelativeCategory(C, weq_predicate(C, kind), name=f"{name}/{kind}"))
    return out


# relative simplex categories


def string_restriction(C: FinCategory, s: tuple[int, ...], n: int, alpha: Sequence[int]) -> tuple[int, ...]:
    """Restrict an n-string along a monotone map ``alpha: [m] -> [n]``.

    Strings use the nerve convention: ``(id_c,)`` in degree 0.
    """
    verts = [C.dom(s[0])] if n == 0 else [C.dom(x) for x in s] + [C.cod(s[-1])]
    if len(alpha) == 1:
        return (C.identity(verts[alpha[0]]),)
    out = []
    for lo, hi in zip(alpha, alpha[1:]):
        if lo == hi:
            out.append(C.identity(verts[lo]))
        else:
            out.append(C.compose_path(*reversed(s[lo:hi])))
    return tuple(out)


def relative_simplex_category(R: RelativeCategory, n: int, base_nerve: Nerve | None = None) -> FinCategory:
    """Diagrams ``[n] -> C`` with ladders of weak equivalences between them."""
    C, W = R.cat, R.weq
    nerve = base_nerve if base_nerve is not None and base_nerve.d >= n else Nerve(C, n)
    strings = list(nerve.simplices[n])

    def verts(s):
        return [nerve.vertex(s, n, i) for i in range(n + 1)]

    def hom(s, t):
        vs, vt = verts(s), verts(t)
        choices = [[w for w in C.hom(a, b) if w in W] for a, b in zip(vs, vt)]
        out = []
        for ladder in itertools.product(*choices):
            if n == 0 or all(C.compose(ladder[i], s[i - 1]) == C.compose(t[i - 1], ladder[i - 1])
                             for i in range(1, n + 1)):
                out.append(ladder)
        return out

    def compose(a, b, c, g, f):
        return tuple(C.compose(x, y) for x, y in zip(g, f))

    def identity(s):
        return tuple(C.identity(v) for v in verts(s))

    cat = FinCategory.generate(strings, hom, compose, identity, name=f"{R.name}^[{n}]")
    return require_valid(cat)


# classification diagrams


class Bisimplicial(Protocol):
    """A truncated bisimplicial set: horizontal degree n, vertical degree k."""

    d: int

    def size(self, n: int, k: int) -> int: ...

    def operator(self, n: int, alpha: tuple[int, ...], k: int) -> np.ndarray:
        """The horizontal operator ``alpha^*``: level (n, k) -> level (len(alpha)-1, k)."""
        ...

    def vertical(self, n: int) -> Any:
        """Level n as a truncated simplicial set in the vertical direction."""
        ...


def face_alpha(n: int, i: int) -> tuple[int, ...]:
    """``d^i: [n-1] -> [n]`` skipping i."""
    return tuple(v for v in range(n + 1) if v != i)


def degeneracy_alpha(n: int, i: int) -> tuple[int, ...]:
    """``s^i: [n+1] -> [n]`` hitting i twice."""
    return tuple(range(i + 1)) + tuple(range(i, n + 1))


class ClassificationDiagram:
    """Levelwise nerves of the relative simplex categories, truncated at ``d``
    in both directions."""

    def __init__(self, R: RelativeCategory, d: int = 3):
        self.R = R
        self.d = d
        self.base = Nerve(R.cat, d + 1)
        self.cats = [relative_simplex_category(R, n, self.base) for n in range(d + 1)]
        self.nerves = [Nerve(c, d) for c in self.cats]
        self._ops: dict = {}
        self._functors: dict = {}

    def size(self, n: int, k: int) -> int:
        return self.nerves[n].size(k)

    def level(self, n: int, k: int) -> list[tuple[int, ...]]:
        return self.nerves[n].simplices[k]

    def vertical(self, n: int) -> Nerve:
        return self.nerves[n]

    def _functor(self, n: int, alpha: tuple[int, ...]) -> list[int]:
        """Morphism table of ``alpha^*: R^[n] -> R^[m]``."""
        key = (n, alpha)
        if key not in self._functors:
            m = len(alpha) - 1
            src, dst = self.cats[n], self.cats[m]
            C = self.R.cat
            table = []
            for x in src.morphisms():
                s, t = src.dom(x), src.cod(x)
                ladder = src.label(x)
                table.append(dst.mid(string_restriction(C, s, n, alpha),
                                     string_restriction(C, t, n, alpha),
                                     tuple(ladder[a] for a in alpha)))
            self._functors[key] = table
        return self._functors[key]

    def operator(self, n: int, alpha: tuple[int, ...], k: int) -> np.ndarray:
        key = (n, tuple(alpha), k)
        if key not in self._ops:
            table = self._functor(n, tuple(alpha))
            idx = self.nerves[len(alpha) - 1].index[k]
            self._ops[key] = np.array([idx[tuple(table[x] for x in s)] for s in self.level(n, k)],
                                      dtype=np.int64)
        return self._ops[key]

    def horizontal(self, k: int) -> TableSimplicialSet:
        d = self.d
        faces = {(n, i): self.operator(n, face_alpha(n, i), k) for n in range(1, d + 1) for i in range(n + 1)}
        degens = {(n, i): self.operator(n, degeneracy_alpha(n, i), k) for n in range(d) for i in range(n + 1)}
        return TableSimplicialSet([self.size(n, k) for n in range(d + 1)], faces, degens)


def classification_level(R: RelativeCategory, n: int, k: int, d: int | None = None) -> list[tuple[int, ...]]:
    d = max(n, k) if d is None else d
    return ClassificationDiagram(R, d).level(n, k)


def check_bisimplicial(B: ClassificationDiagram) -> Report:
    """Simplicial identities in both directions, and commutation of horizontal
    with vertical operators, throughout the truncated range."""
    report = Report(f"bisimplicial[{B.R.name}]")
    d = B.d
    for n in range(d + 1):
        report.extend(check_simplicial_identities(B.vertical(n)), prefix=f"vertical[n={n}]")
    for k in range(d + 1):
        report.extend(check_simplicial_identities(B.horizontal(k)), prefix=f"horizontal[k={k}]")
    fault = None
    for n in range(d + 1):
        alphas = [face_alpha(n, i) for i in range(n + 1)] if n else []
        alphas += [degeneracy_alpha(n, i) for i in range(n + 1)] if n < d else []
        V = B.vertical(n)
        for alpha in alphas:
            W = B.vertical(len(alpha) - 1)
            for k in range(d + 1):
                h = B.operator(n, alpha, k)
                ops = [(V.face(k, j), W.face(k, j), k - 1) for j in range(k + 1)] if k else []
                ops += [(V.degeneracy(k, j), W.degeneracy(k, j), k + 1) for j in range(k + 1)] if k < d else []
                for v_src, v_dst, k2 in ops:
                    if not np.array_equal(v_dst[h], B.operator(n, alpha, k2)[v_src]):
                        fault = fault or {"n": n, "alpha": list(alpha), "k": k}
    report.add("horizontal-vertical-commute", fault is None, witness=fault)
    return report


# Segal maps


def segal_map_check(B: Bisimplicial, n: int, k: int) -> Report:
    """The set-level Segal map ``Y_n -> Y_1 x_{Y_0} ... x_{Y_0} Y_1`` at vertical degree k."""
    if n < 2:
        raise ValueError("Segal maps are defined for n >= 2")
    report = Report(f"segal[n={n},k={k}]")
    spines = [B.operator(n, (i - 1, i), k) for i in range(1, n + 1)]
    src0, tgt0 = B.operator(1, (0,), k), B.operator(1, (1,), k)
    images = list(zip(*(s.tolist() for s in spines)))
    fault = next((x for x, img in enumerate(images)
                  if any(tgt0[a] != src0[b] for a, b in zip(img, img[1:]))), None)
    report.add("lands-in-pullback", fault is None, witness={"simplex": fault})

    # pullback cardinality: count spines by their final vertex
    paths = Counter(tgt0.tolist())
    for _ in range(n - 1):
        nxt: Counter = Counter()
        for a in range(B.size(1, k)):
            nxt[int(tgt0[a])] += paths[int(src0[a])]
        paths = nxt
    pullback = sum(paths.values())

    distinct = len(set(images))
    size = B.size(n, k)
    injective = distinct == size
    surjective = fault is None and distinct == pullback
    witness = None
    if not injective:
        seen: dict = {}
        for x, img in enumerate(images):
            if img in seen:
                witness = {"simplices": [seen[img], x], "image": list(img)}
                break
            seen[img] = x
    report.add("injective", injective, witness=witness, detail=f"{size} -> {pullback}")
    witness = None
    if not surjective and fault is None:
        witness = _missing_spine(B, k, n, set(images), src0, tgt0)
    report.add("surjective", surjective, witness=witness, detail=f"image {distinct} of {pullback}")
    return report


def _missing_spine(B, k, n, images, src0, tgt0):
    starting: dict[int, list[int]] = {}
    for a in range(B.size(1, k)):
        starting.setdefault(int(src0[a]), []).append(a)
    stack = [(a,) for a in range(B.size(1, k))]
    while stack:
        path = stack.pop()
        if len(path) == n:
            if path not in images:
                return {"spine": list(path)}
            continue
        stack.extend(path + (b,) for b in starting.get(int(tgt0[path[-1]]), []))
    return None


class SimplexSubcomplex:
    """A sub-simplicial set of Delta[top], constant in the vertical direction.

    Its n-simplices are the monotone maps [n] -> [top] whose image set passes
    ``keep``.  With ``keep`` excluding the full vertex set of Delta[2] this is
    the boundary of the 2-simplex, whose Segal map misses the spine (01, 12).
    """

    def __init__(self, top: int, keep: Callable[[frozenset], bool], d: int = 3, name: str = ""):
        self.top = top
        self.d = d
        self.name = name
        self.levels = [[s for s in monotone_maps(n, top) if keep(frozenset(s))] for n in range(d + 1)]
        self.index = [{s: x for x, s in enumerate(lv)} for lv in self.levels]

    def size(self, n: int, k: int) -> int:
        return len(self.levels[n])

    def operator(self, n: int, alpha: tuple[int, ...], k: int) -> np.ndarray:
        idx = self.index[len(alpha) - 1]
        return np.array([idx[tuple(s[a] for a in alpha)] for s in self.levels[n]], dtype=np.int64)

    def vertical(self, n: int) -> TableSimplicialSet:
        size = len(self.levels[n])
        ident = list(range(size))
        return TableSimplicialSet([size] * (self.d + 1),
                                  {(k, i): ident for k in range(1, self.d + 1) for i in range(k + 1)},
                                  {(k, i): ident for k in range(self.d) for i in range(k + 1)})


def boundary_of_triangle(d: int = 3) -> SimplexSubcomplex:
    return SimplexSubcomplex(2, lambda image: len(image) < 3, d, name="boundary-of-triangle")


# simplicial homotopies from natural transformations


@dataclass
class Prism:
    """``h[(k, j)]``: index array N_k(source) -> N_{k+1}(target)."""

    transformation: NatTransformation
    d: int
    source: Nerve
    target: Nerve
    h: dict
    ends: tuple[np.ndarray, np.ndarray]


def nerve_of_functor(F: PointedFunctor, S: Nerve, T: Nerve, k: int) -> np.ndarray:
    return np.array([T.index[k][tuple(F.morphism_map[m] for m in s)] for s in S.simplices[k]],
                    dtype=np.int64)


def _prism_simplex(t: NatTransformation, S: Nerve, s: tuple[int, ...], deg: int,
                   alpha: Sequence[int]) -> tuple[int, ...]:
    """The image of ``(s, alpha)`` for a (deg)-simplex s and ``alpha: [deg] -> [1]``."""
    F, G = t.source, t.target
    D = F.cod
    out = []
    for i in range(1, deg + 1):
        m = s[i - 1]
        lo, hi = alpha[i - 1], alpha[i]
        if lo == hi == 0:
            out.append(F.morphism_map[m])
        elif lo == hi == 1:
            out.append(G.morphism_map[m])
        else:
            out.append(D.compose(t.components[S.vertex(s, deg, i)], F.morphism_map[m]))
    return tuple(out)


def homotopy_from_transformation(t: NatTransformation, d: int = 3) -> tuple[Prism, Report]:
    """The prism homotopy ``h_j(s) = H(s_j s, 0^{j+1} 1^{k+1-j})`` from N(F) to N(G)
    through degree d, with its identities checked exhaustively."""
    report = Report(f"prism[{t.name}]")
    nat = check_natural(t)
    report.extend(nat, prefix="natural")
    F, G = t.source, t.target
    S, T = Nerve(F.dom, d), Nerve(F.cod, d + 1)
    h = {}
    for k in range(d + 1):
        for j in range(k + 1):
            beta = (0,) * (j + 1) + (1,) * (k + 1 - j)
            rows = []
            for s in S.simplices[k]:
                lifted = S.degeneracy_of(s, k, j)
                rows.append(T.index[k + 1][_prism_simplex(t, S, lifted, k + 1, beta)])
            h[(k, j)] = np.array(rows, dtype=np.int64)
    nF = [nerve_of_functor(F, S, T, k) for k in range(d + 1)]
    nG = [nerve_of_functor(G, S, T, k) for k in range(d + 1)]
    prism = Prism(t, d, S, T, h, (nF[0], nG[0]))

    def record(name, pairs):
        fault = next((w for lhs, rhs, w in pairs if not np.array_equal(lhs, rhs)), None)
        report.add(name, fault is None, witness=fault)

    # ends
    record("end-source", [(T.face(k + 1, k + 1)[h[(k, k)]], nF[k], {"k": k}) for k in range(d + 1)])
    record("end-target", [(T.face(k + 1, 0)[h[(k, 0)]], nG[k], {"k": k}) for k in range(d + 1)])
    pairs = []
    for k in range(1, d + 1):
        for j in range(k + 1):
            for i in range(k + 2):
                lhs = T.face(k + 1, i)[h[(k, j)]]
                if i < j:
                    rhs = h[(k - 1, j - 1)][S.face(k, i)]
                elif i == j and j > 0:
                    rhs = T.face(k + 1, j)[h[(k, j - 1)]]
                elif i > j + 1:
                    rhs = h[(k - 1, j)][S.face(k, i - 1)]
                else:
                    continue
                pairs.append((lhs, rhs, {"identity": f"d{i} h{j}", "k": k}))
    record("face-identities", pairs)
    pairs = []
    for k in range(d):
        for j in range(k + 1):
            for i in range(k + 2):
                lhs = T.degeneracy(k + 1, i)[h[(k, j)]]
                if i <= j:
                    rhs = h[(k + 1, j + 1)][S.degeneracy(k, i)]
                else:
                    rhs = h[(k + 1, j)][S.degeneracy(k, i - 1)]
                pairs.append((lhs, rhs, {"identity": f"s{i} h{j}", "k": k}))
    record("degeneracy-identities", pairs)
    return prism, report


def is_constant_homotopy(prism: Prism) -> bool:
    """Whether ``h_j = s_j N(F)`` in every computed degree."""
    F = prism.transformation.source
    S, T = prism.source, prism.target
    for (k, j), arr in prism.h.items():
        if not np.array_equal(arr, T.degeneracy(k, j)[nerve_of_functor(F, S, T, k)]):
            return False
    return True


def constant_functor(C: FinCategory, D: FinCategory, obj) -> PointedFunctor:
    ident = D.identity(obj)
    return PointedFunctor(C, D, {a: obj for a in C.objects}, [ident] * C.n_morphisms, name=f"const_{obj}")


def constants_transformation(C: FinCategory | None = None) -> NatTransformation:
    """The transformation const_0 => const_1 into the walking arrow, with every component ``a``."""
    A = walking_arrow()
    C = C or A
    a = A.mid(0, 1, "a")
    return NatTransformation(constant_functor(C, A, 0), constant_functor(C, A, 1),
                             {c: a for c in C.objects}, name="const0=>const1")


def weq_subcategory(R: RelativeCategory) -> FinCategory:
    return subcategory(R.cat, R.is_weq, name=f"we({R.name})")
