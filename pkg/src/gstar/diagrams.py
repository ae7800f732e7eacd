"""Pointed diagrams: basepoint-preserving functors from a finite pointed index
category into pointed finite sets or finite categories, stored as tables."""

from __future__ import annotations

import itertools
import random
import weakref
from typing import Any, Mapping, Sequence

import numpy as np

from .category import (
    FinCategory,
    PointedFunctor,
    compose_functors,
    identity_functor,
    object_key,
    validate_category,
    validate_functor,
)
from .pointed import PointedMap, compose_pointed, identity_map
from .report import Report
from .simplicial import Nerve
from .unionfind import UnionFind

SET = "set"
CAT = "cat"


class BudgetExceeded(RuntimeError):
    pass


class PointedDiagram:
    """``on_objects[c]`` is a size n (for <n>) or a FinCategory; ``on_morphisms[m]``
    is a PointedMap or a PointedFunctor, indexed by morphism id of ``index``."""

    def __init__(self, index: FinCategory, kind: str, on_objects: Mapping[Any, Any],
                 on_morphisms: Sequence[Any] | Mapping[int, Any], name: str = ""):
        if kind not in (SET, CAT):
            raise ValueError(f"unknown diagram kind {kind!r}")
        if index.basepoint is None:
            raise ValueError("diagram index category must be pointed")
        self.index = index
        self.kind = kind
        self.on_objects = dict(on_objects)
        if isinstance(on_morphisms, Mapping):
            on_morphisms = [on_morphisms.get(m) for m in index.morphisms()]
        self.on_morphisms = list(on_morphisms)
        self.name = name
        self.validated = False

    def size(self, c) -> int:
        return self.on_objects[c]

    def act(self, m: int, x: int) -> int:
        return self.on_morphisms[m](x)

    def __repr__(self) -> str:
        return f"PointedDiagram({self.name or '?'}: {self.index.name} -> {self.kind})"


class DiagramMap:
    def __init__(self, source: PointedDiagram, target: PointedDiagram, components: Mapping[Any, Any],
                 name: str = ""):
        if source.index is not target.index or source.kind != target.kind:
            raise ValueError("diagram map between diagrams of different shape")
        self.source = source
        self.target = target
        self.components = dict(components)
        self.name = name

    def __getitem__(self, c):
        return self.components[c]

    def key(self) -> tuple:
        """Hashable identity of a set-valued map."""
        return tuple(self.components[c].values for c in self.source.index.objects)

    def __eq__(self, other) -> bool:
        return (isinstance(other, DiagramMap) and self.source is other.source
                and self.target is other.target and self.components == other.components)

    def __hash__(self) -> int:
        return hash(self.key())


# validation


def _functors_equal(F: PointedFunctor, G: PointedFunctor) -> bool:
    return (F.dom is G.dom and F.cod is G.cod and F.object_map == G.object_map
            and F.morphism_map == G.morphism_map)


def _value_identity(X: PointedDiagram, c):
    v = X.on_objects[c]
    return identity_map(v) if X.kind == SET else identity_functor(v)


def _value_compose(X: PointedDiagram, g, f):
    return compose_pointed(g, f) if X.kind == SET else compose_functors(g, f)


def _value_equal(X: PointedDiagram, a, b) -> bool:
    return a == b if X.kind == SET else _functors_equal(a, b)


def is_point_category(c: FinCategory) -> bool:
    return len(c.objects) == 1 and c.n_morphisms == 1


def _composition_fault(X: PointedDiagram):
    C = X.index
    for g, f in C.composable_pairs():
        lhs = X.on_morphisms[C.compose(g, f)]
        rhs = _value_compose(X, X.on_morphisms[g], X.on_morphisms[f])
        if not _value_equal(X, lhs, rhs):
            return {"g": g, "f": f, "composite": C.compose(g, f)}
    return None


_COMPOSITE_POSITIONS: "weakref.WeakKeyDictionary[FinCategory, dict]" = weakref.WeakKeyDictionary()


def _composite_positions(C: FinCategory, f: int, c) -> np.ndarray:
    """Hom-positions of ``g o f`` for every g in ``C(cod f, c)``, in hom order."""
    cache = _COMPOSITE_POSITIONS.setdefault(C, {})
    key = (f, c)
    if key not in cache:
        cache[key] = np.array([C.position(C.compose(g, f)) for g in C.hom(C.cod(f), c)],
                              dtype=np.int64)
    return cache[key]


def _composition_fault_set(X: PointedDiagram):
    """Functoriality of a set-valued diagram, one hom-set block at a time:
    the stacked tables of ``C(b, c)`` read through f must equal the stacked
    tables of the composites in ``C(a, c)``."""
    C = X.index
    stacks = {}
    for a in C.objects:
        for c in C.objects:
            ms = C.hom(a, c)
            if ms:
                stacks[(a, c)] = np.array([X.on_morphisms[m].table for m in ms], dtype=np.int64)
    for f in C.morphisms():
        a, b = C.dom(f), C.cod(f)
        tab_f = np.asarray(X.on_morphisms[f].table, dtype=np.int64)
        for c in C.objects:
            if (b, c) not in stacks:
                continue
            lhs = stacks[(b, c)][:, tab_f]
            rhs = stacks[(a, c)][_composite_positions(C, f, c)]
            if not np.array_equal(lhs, rhs):
                row = int(np.nonzero((lhs != rhs).any(axis=1))[0][0])
                g = C.hom(b, c)[row]
                return {"g": g, "f": f, "composite": C.compose(g, f)}
    return None


def validate_diagram(X: PointedDiagram) -> Report:
    C = X.index
    report = Report(f"diagram {X.name}".strip())
    missing = [object_key(c) for c in C.objects if X.on_objects.get(c) is None]
    missing_m = [m for m in C.morphisms() if m >= len(X.on_morphisms) or X.on_morphisms[m] is None]
    report.add("tables-total", not missing and not missing_m,
               witness={"objects": missing[:5], "morphisms": missing_m[:5]})
    if missing or missing_m:
        X.validated = False
        return report

    if X.kind == CAT:
        bad = [object_key(c) for c in C.objects if not validate_category(X.on_objects[c]).ok]
        report.add("values-are-categories", not bad, witness={"objects": bad})
        bad = [m for m in C.morphisms() if not validate_functor(X.on_morphisms[m]).ok]
        report.add("values-are-functors", not bad, witness={"morphisms": bad[:5]})

    fault = None
    for m in C.morphisms():
        v = X.on_morphisms[m]
        src, tgt = X.on_objects[C.dom(m)], X.on_objects[C.cod(m)]
        if X.kind == SET:
            ok = isinstance(v, PointedMap) and (v.dom, v.cod) == (src, tgt)
        else:
            ok = isinstance(v, PointedFunctor) and v.dom is src and v.cod is tgt
        if not ok:
            fault = {"morphism": m}
            break
    report.add("value-types", fault is None, witness=fault)
    if fault:
        X.validated = False
        return report

    fault = next((object_key(c) for c in C.objects
                  if not _value_equal(X, X.on_morphisms[C.identity(c)], _value_identity(X, c))), None)
    report.add("preserves-identities", fault is None, witness={"object": fault})

    fault = _composition_fault_set(X) if X.kind == SET else _composition_fault(X)
    report.add("preserves-composition", fault is None, witness=fault)

    base = X.on_objects[C.basepoint]
    point = base == 0 if X.kind == SET else is_point_category(base)
    report.add("basepoint-preserving", point, witness={"value": repr(base)})
    X.validated = report.ok
    return report


def require_valid_diagram(X: PointedDiagram) -> PointedDiagram:
    if not X.validated:
        report = validate_diagram(X)
        if not report.ok:
            raise ValueError(str(report))
    return X


def check_diagram_map(f: DiagramMap) -> Report:
    X, Y = f.source, f.target
    C = X.index
    report = Report(f"diagram-map {f.name}".strip())
    missing = [object_key(c) for c in C.objects if c not in f.components]
    report.add("components-total", not missing, witness={"objects": missing})
    if missing:
        return report
    fault = None
    for c in C.objects:
        comp = f.components[c]
        if X.kind == SET:
            ok = (comp.dom, comp.cod) == (X.on_objects[c], Y.on_objects[c])
        else:
            ok = comp.dom is X.on_objects[c] and comp.cod is Y.on_objects[c]
        if not ok:
            fault = {"object": object_key(c)}
            break
    report.add("component-types", fault is None, witness=fault)
    if fault:
        return report
    for m in C.morphisms():
        a, b = C.dom(m), C.cod(m)
        lhs = _value_compose(X, Y.on_morphisms[m], f.components[a])
        rhs = _value_compose(X, f.components[b], X.on_morphisms[m])
        if not _value_equal(X, lhs, rhs):
            fault = {"morphism": m, "dom": object_key(a), "cod": object_key(b)}
            break
    report.add("naturality", fault is None, witness=fault)
    bp = C.basepoint
    report.add("basepoint-identity",
               _value_equal(X, f.components[bp], _value_identity(X, bp)),
               witness={"component": repr(f.components[bp])})
    return report


def diagrams_equal(X: PointedDiagram, Y: PointedDiagram) -> bool:
    if X.index is not Y.index or X.kind != Y.kind:
        return False
    if X.kind == SET:
        return X.on_objects == Y.on_objects and X.on_morphisms == Y.on_morphisms
    return (all(X.on_objects[c] is Y.on_objects[c] for c in X.index.objects)
            and all(_functors_equal(f, g) for f, g in zip(X.on_morphisms, Y.on_morphisms)))


# constructions


def terminal_diagram(C: FinCategory, kind: str = SET) -> PointedDiagram:
    if kind == SET:
        return PointedDiagram(C, SET, {c: 0 for c in C.objects},
                              [PointedMap(0, 0, ()) for _ in C.morphisms()], name="terminal")
    one = point_category()
    F = identity_functor(one)
    return PointedDiagram(C, CAT, {c: one for c in C.objects}, [F for _ in C.morphisms()],
                          name="terminal")


def point_category() -> FinCategory:
    return FinCategory.from_tables(["o"], {("o", "o"): [0]}, {(0, 0): 0}, {"o": 0}, name="1")


def representable(C: FinCategory, c) -> PointedDiagram:
    """``n |-> C(c, n)`` as a pointed set: basepoint the zero morphism, then the
    nonzero morphisms in hom order."""
    elements = {n: C.nonzero_hom(c, n) for n in C.objects}
    index = {n: {m: k + 1 for k, m in enumerate(ms)} for n, ms in elements.items()}
    on_morphisms = []
    for h in C.morphisms():
        a, b = C.dom(h), C.cod(h)
        vals = tuple(index[b].get(C.compose(h, th), 0) for th in elements[a])
        on_morphisms.append(PointedMap(len(elements[a]), len(elements[b]), vals))
    return PointedDiagram(C, SET, {n: len(ms) for n, ms in elements.items()}, on_morphisms,
                          name=f"hom({object_key(c)},-)")


def wedge_diagram(Xs: Sequence[PointedDiagram], name: str = "") -> PointedDiagram:
    """Levelwise wedge of set-valued diagrams, summands in the given order."""
    C = Xs[0].index
    sizes = {c: sum(X.on_objects[c] for X in Xs) for c in C.objects}
    maps = []
    for m in C.morphisms():
        a, b = C.dom(m), C.cod(m)
        vals, off_b = [], 0
        for X in Xs:
            vals.extend(y + off_b if y else 0 for y in X.on_morphisms[m].values)
            off_b += X.on_objects[b]
        maps.append(PointedMap(sizes[a], sizes[b], tuple(vals)))
    return PointedDiagram(C, SET, sizes, maps, name=name or " v ".join(X.name for X in Xs))


def identity_diagram_map(X: PointedDiagram) -> DiagramMap:
    return DiagramMap(X, X, {c: _value_identity(X, c) for c in X.index.objects}, name="1")


def compose_diagram_maps(g: DiagramMap, f: DiagramMap) -> DiagramMap:
    if f.target is not g.source:
        raise ValueError("diagram maps are not composable")
    X = f.source
    return DiagramMap(f.source, g.target,
                      {c: _value_compose(X, g.components[c], f.components[c]) for c in X.index.objects})


def is_levelwise_bijection(f: DiagramMap) -> bool:
    return all(comp.is_bijection() for comp in f.components.values())


def precompose(X: PointedDiagram | DiagramMap, F: PointedFunctor):
    """``F^* X``: restriction of a diagram, or of a diagram map, along ``F``."""
    if isinstance(X, DiagramMap):
        return precompose_map(X, F, precompose(X.source, F), precompose(X.target, F))
    if X.index is not F.cod:
        raise ValueError("diagram index does not match the functor's codomain")
    if F.object_map[F.dom.basepoint] != F.cod.basepoint:
        raise ValueError("precomposition needs a basepoint-preserving functor")
    return PointedDiagram(F.dom, X.kind, {c: X.on_objects[F.object_map[c]] for c in F.dom.objects},
                          [X.on_morphisms[F.morphism_map[m]] for m in F.dom.morphisms()],
                          name=f"{F.name}*{X.name}")


def precompose_map(f: DiagramMap, F: PointedFunctor, source: PointedDiagram,
                   target: PointedDiagram) -> DiagramMap:
    """Restriction of a map along ``F`` between already-restricted diagrams."""
    return DiagramMap(source, target, {c: f.components[F.object_map[c]] for c in F.dom.objects},
                      name=f"{F.name}*{f.name}")


# enumeration of natural transformations


def enum_diagram_maps(X: PointedDiagram, Y: PointedDiagram, budget: int = 10**6) -> list[DiagramMap]:
    """All natural transformations ``X -> Y`` of set-valued diagrams.

    Backtracking over elements: the unassigned element with the largest
    orbit is tried against every value of the target, and
    each choice is pushed along all morphisms out of its object, so values
    forced by naturality are never branched on and conflicts prune at once.
    ``budget`` bounds the number of trial values.  Maps come out ordered by
    their component tables.
    """
    if X.kind != SET or Y.kind != SET:
        raise ValueError("map enumeration is implemented for set-valued diagrams")
    if X.index is not Y.index:
        raise ValueError("diagrams have different index categories")
    C = X.index
    objs = list(C.objects)
    out_of: dict[Any, list[tuple[Any, PointedMap, PointedMap]]] = {c: [] for c in objs}
    for m in C.morphisms():
        if not C.is_identity(m):
            out_of[C.dom(m)].append((C.cod(m), X.on_morphisms[m], Y.on_morphisms[m]))
    value = {c: [0] + [-1] * X.on_objects[c] for c in objs}
    # branch on elements with the largest orbits first: they force the most
    orbit = {}
    for c in objs:
        for x in range(1, X.on_objects[c] + 1):
            seen = {(c, x)}
            stack = [(c, x)]
            while stack:
                a, z = stack.pop()
                for b, xm, _ in out_of[a]:
                    y = xm(z)
                    if y and (b, y) not in seen:
                        seen.add((b, y))
                        stack.append((b, y))
            orbit[(c, x)] = len(seen)
    rank = {c: k for k, c in enumerate(objs)}
    order = sorted(orbit, key=lambda e: (-orbit[e], rank[e[0]], e[1]))
    examined = 0
    results: list[tuple] = []

    def propagate(c, x, v, trail) -> bool:
        stack = [(c, x, v)]
        while stack:
            c, x, v = stack.pop()
            cur = value[c][x]
            if cur == v:
                continue
            if cur != -1:
                return False
            value[c][x] = v
            trail.append((c, x))
            for b, xm, ym in out_of[c]:
                y, w = xm(x), ym(v)
                if y == 0:
                    if w != 0:
                        return False
                else:
                    stack.append((b, y, w))
        return True

    def descend(k):
        nonlocal examined
        while k < len(order) and value[order[k][0]][order[k][1]] != -1:
            k += 1
        if k == len(order):
            results.append(tuple(tuple(value[c][1:]) for c in objs))
            return
        c, x = order[k]
        for v in range(Y.on_objects[c] + 1):
            examined += 1
            if examined > budget:
                raise BudgetExceeded(f"more than {budget} trial values for maps "
                                     f"{X.name} -> {Y.name}")
            trail: list = []
            if propagate(c, x, v, trail):
                descend(k + 1)
            for a, z in trail:
                value[a][z] = -1

    descend(0)
    return [DiagramMap(X, Y, {c: PointedMap(X.on_objects[c], Y.on_objects[c], vals)
                              for c, vals in zip(objs, sol)})
            for sol in sorted(results)]


def enum_diagram_maps_brute(X: PointedDiagram, Y: PointedDiagram, limit: int = 10**6) -> list[DiagramMap]:
    """Unpruned search over every family of pointed component maps (tiny cases only)."""
    C = X.index
    objs = list(C.objects)
    total = 1
    for c in objs:
        total *= (Y.on_objects[c] + 1) ** X.on_objects[c]
    if total > limit:
        raise BudgetExceeded(f"{total} component families exceed {limit}")
    per_object = []
    for c in objs:
        n, m = X.on_objects[c], Y.on_objects[c]
        per_object.append([PointedMap(n, m, v) for v in itertools.product(range(m + 1), repeat=n)])
    out = []
    for combo in itertools.product(*per_object):
        f = DiagramMap(X, Y, dict(zip(objs, combo)))
        if check_diagram_map(f).ok:
            out.append(f)
    return out


# random diagrams


def random_diagram(C: FinCategory, rng: random.Random, max_generators: int = 3,
                   max_relations: int = 3, max_generator_size: int | None = None) -> PointedDiagram:
    """A random quotient of a wedge of representables, closed into a congruence.

    Every finite pointed diagram arises this way, so the sampler reaches all
    shapes; the quotient is functorial by construction.
    """
    candidates = [c for c in C.objects if c != C.basepoint]
    if max_generator_size is not None:
        candidates = [c for c in candidates
                      if max(len(C.nonzero_hom(c, n)) for n in C.objects) <= max_generator_size]
    gens = [rng.choice(candidates) for _ in range(rng.randint(1, max_generators))]
    reps = [representable(C, g) for g in gens]
    sizes = {n: sum(r.on_objects[n] for r in reps) for n in C.objects}
    offsets = {n: list(itertools.accumulate([0] + [r.on_objects[n] for r in reps]))[:-1]
               for n in C.objects}

    def act(m, x):
        # wedge action: find the summand containing x
        if x == 0:
            return 0
        n, n2 = C.dom(m), C.cod(m)
        for r, off, off2 in zip(reps, offsets[n], offsets[n2]):
            if x <= off + r.on_objects[n]:
                y = r.on_morphisms[m](x - off)
                return y + off2 if y else 0
        raise AssertionError("element outside wedge")

    uf = {n: UnionFind(sizes[n] + 1) for n in C.objects}
    outgoing = {n: [m for m in C.morphisms() if C.dom(m) == n] for n in C.objects}
    queue = []
    for _ in range(rng.randint(0, max_relations)):
        n = rng.choice(C.objects)
        if sizes[n] == 0:
            continue
        x = rng.randint(1, sizes[n])
        y = rng.randint(0, sizes[n])
        queue.append((n, x, y))
    while queue:
        n, x, y = queue.pop()
        if uf[n].union(x, y):
            for m in outgoing[n]:
                queue.append((C.cod(m), act(m, x), act(m, y)))

    # renumber classes: basepoint class first, others by least member
    renum = {}
    new_sizes = {}
    for n in C.objects:
        roots = {}
        base = uf[n].find(0)
        table = [0] * (sizes[n] + 1)
        for x in range(1, sizes[n] + 1):
            r = uf[n].find(x)
            if r == base:
                continue
            if r not in roots:
                roots[r] = len(roots) + 1
            table[x] = roots[r]
        renum[n] = table
        new_sizes[n] = len(roots)
    on_morphisms = []
    for m in C.morphisms():
        n, n2 = C.dom(m), C.cod(m)
        vals = [0] * new_sizes[n]
        for x in range(1, sizes[n] + 1):
            if renum[n][x]:
                vals[renum[n][x] - 1] = renum[n2][act(m, x)]
        on_morphisms.append(PointedMap(new_sizes[n], new_sizes[n2], tuple(vals)))
    X = PointedDiagram(C, SET, new_sizes, on_morphisms,
                       name="random(" + ",".join(object_key(g) for g in gens) + ")")
    return X


# levelwise nerve


class LevelwiseNerve:
    """``N_* X`` for a category-valued diagram, one set-valued diagram per degree.

    ``faces[(k, i)]`` and ``degeneracies[(k, i)]`` are the simplicial
    operators as diagram maps between levels.  In each level element 0 is
    the constant simplex at the basepoint object (the image of the point).
    """

    def __init__(self, X: PointedDiagram, levels, faces, degeneracies, nerves, numbering, d):
        self.diagram = X
        self.levels: list[PointedDiagram] = levels
        self.faces: dict[tuple[int, int], DiagramMap] = faces
        self.degeneracies: dict[tuple[int, int], DiagramMap] = degeneracies
        self.nerves: dict[Any, Nerve] = nerves
        self.numbering = numbering
        self.d = d

    def at(self, c) -> _ObjectNerve:
        return _ObjectNerve(self, c)


class _ObjectNerve:
    """The simplicial set ``(N_* X)(c)`` in the pointed numbering."""

    def __init__(self, nerve: LevelwiseNerve, c):
        self.nerve, self.c, self.d = nerve, c, nerve.d

    def size(self, k):
        return self.nerve.levels[k].on_objects[self.c] + 1

    def face(self, k, i):
        return np.array(self.nerve.faces[(k, i)].components[self.c].table, dtype=np.int64)

    def degeneracy(self, k, i):
        return np.array(self.nerve.degeneracies[(k, i)].components[self.c].table, dtype=np.int64)


def nerve_levelwise(X: PointedDiagram, d: int = 3) -> LevelwiseNerve:
    if X.kind != CAT:
        raise ValueError("levelwise nerve needs a category-valued diagram")
    require_valid_diagram(X)
    C = X.index
    star_obj = X.on_objects[C.basepoint].objects[0]
    nerves, numbering = {}, {}
    for c in C.objects:
        cat = X.on_objects[c]
        nv = Nerve(cat, d)
        base_obj = X.on_morphisms[C.zero(C.basepoint, c)].object_map[star_obj]
        ident = cat.identity(base_obj)
        order = []
        for k in range(d + 1):
            base = (ident,) * max(k, 1)
            others = [s for s in nv.simplices[k] if s != base]
            order.append([base] + others)
        nerves[c] = nv
        numbering[c] = [{s: i for i, s in enumerate(level)} for level in order]

    def level_diagram(k):
        sizes = {c: nerves[c].size(k) - 1 for c in C.objects}
        maps = []
        for m in C.morphisms():
            a, b = C.dom(m), C.cod(m)
            F = X.on_morphisms[m]
            num_a, num_b = numbering[a][k], numbering[b][k]
            vals = [0] * sizes[a]
            for s, i in num_a.items():
                if i:
                    vals[i - 1] = num_b[tuple(F.morphism_map[x] for x in s)]
            maps.append(PointedMap(sizes[a], sizes[b], tuple(vals)))
        return PointedDiagram(C, SET, sizes, maps, name=f"N_{k}({X.name})")

    levels = [level_diagram(k) for k in range(d + 1)]

    def operator(k, k2, fn):
        comps = {}
        for c in C.objects:
            num, num2 = numbering[c][k], numbering[c][k2]
            vals = [0] * (len(num) - 1)
            for s, i in num.items():
                if i:
                    vals[i - 1] = num2[fn(c, s)]
            comps[c] = PointedMap(len(num) - 1, len(num2) - 1, tuple(vals))
        return DiagramMap(levels[k], levels[k2], comps)

    faces = {(k, i): operator(k, k - 1, lambda c, s, k=k, i=i: nerves[c].face_of(s, k, i))
             for k in range(1, d + 1) for i in range(k + 1)}
    degens = {(k, i): operator(k, k + 1, lambda c, s, k=k, i=i: nerves[c].degeneracy_of(s, k, i))
              for k in range(d) for i in range(k + 1)}
    return LevelwiseNerve(X, levels, faces, degens, nerves, numbering, d)


def check_levelwise_nerve(N: LevelwiseNerve) -> Report:
    from .simplicial import check_simplicial_identities

    report = Report("levelwise-nerve")
    for k, level in enumerate(N.levels):
        report.extend(validate_diagram(level), prefix=f"level{k}")
    for (k, i), f in sorted(N.faces.items()):
        report.add(f"d{i}@{k}-natural", check_diagram_map(f).ok)
    for (k, i), f in sorted(N.degeneracies.items()):
        report.add(f"s{i}@{k}-natural", check_diagram_map(f).ok)
    for c in N.diagram.index.objects:
        report.extend(check_simplicial_identities(N.at(c)), prefix=f"at{object_key(c)}")
    bp = N.diagram.index.basepoint
    report.add("basepoint-level-is-point",
               all(level.on_objects[bp] == 0 for level in N.levels))
    return report
