"""The left adjoint L to restriction along a pointed functor i: C -> D, computed
as a coend of pointed finite sets, with its unit and counit and exhaustive
checks of the adjunction.

For a set-valued pointed diagram X on C and an object t of D, (LX)t is the
quotient of the wedge of copies of Xn indexed by nonzero morphisms
theta: i(n) -> t, under the relations

    (n, theta o i(h), x) ~ (n', theta, (Xh)(x))    for h: n -> n' in C,

where a generator whose morphism or element is zero is the basepoint.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .category import PointedFunctor, identity_functor, object_key
from .diagrams import (
    SET,
    BudgetExceeded,
    DiagramMap,
    PointedDiagram,
    compose_diagram_maps,
    enum_diagram_maps,
    identity_diagram_map,
    is_levelwise_bijection,
    precompose,
    precompose_map,
    require_valid_diagram,
)
from .pointed import PointedFinSet, PointedMap, compose_pointed, identity_map
from .report import Report


@dataclass
class CoendPresentation:
    """Generators, their classes, and a canonical representative per class.

    Generator ``g`` (1-based; 0 is the basepoint) is ``generators[g-1] =
    (n, theta, x)``; generators are in lexicographic (n, theta-position, x)
    order, so the least member of a class is its canonical representative.
    """

    target: Any
    generators: list[tuple[Any, int, int]]
    class_of: list[int]
    representatives: list[tuple[Any, int, int]]
    _offsets: dict = field(repr=False, default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.representatives)

    def generator_index(self, n, theta: int, x: int) -> int:
        """Index of ``(n, theta, x)``, or 0 if it is the basepoint."""
        if x == 0:
            return 0
        off, width, positions = self._offsets[n]
        p = positions.get(theta)
        if p is None:
            return 0
        return off + p * width + x

    def element(self, n, theta: int, x: int) -> int:
        return self.class_of[self.generator_index(n, theta, x)]

    def members(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for g in range(1, len(self.class_of)):
            out.setdefault(self.class_of[g], []).append(g)
        return out


_SKELETONS: "weakref.WeakKeyDictionary[PointedFunctor, dict]" = weakref.WeakKeyDictionary()


_IDENTITIES: "weakref.WeakKeyDictionary[Any, PointedFunctor]" = weakref.WeakKeyDictionary()


def _relation_skeleton(i: PointedFunctor, t) -> tuple[dict, list]:
    """Diagram-independent part of the presentation at t: the nonzero
    ``theta: i(n) -> t`` per n, and for each non-identity ``h: n -> n'`` the
    position of ``theta o i(h)`` among the generators' morphisms (-1 if zero)
    for every theta out of ``i(n')``."""
    per_functor = _SKELETONS.setdefault(i, {})
    if t not in per_functor:
        C, D = i.dom, i.cod
        thetas = {n: D.nonzero_hom(i.object_map[n], t) for n in C.objects}
        positions = {n: {th: p for p, th in enumerate(ths)} for n, ths in thetas.items()}
        relations = []
        for h in C.morphisms():
            n, n2 = C.dom(h), C.cod(h)
            if C.is_identity(h) or not thetas[n2]:
                continue
            ih = i.morphism_map[h]
            moved = np.array([positions[n].get(D.compose(th, ih), -1) for th in thetas[n2]],
                             dtype=np.int64)
            relations.append((h, n, n2, moved))
        per_functor[t] = (thetas, relations)
    return per_functor[t]


def compute_L(X: PointedDiagram, i: PointedFunctor, t) -> tuple[PointedFinSet, CoendPresentation]:
    """``(LX)t`` with its presentation.

    Relations are edges of a graph on the generators (node 0 is the
    basepoint); its connected components are the elements of the coend.
    """
    require_valid_diagram(X)
    if X.kind != SET:
        raise ValueError("L is implemented for set-valued diagrams")
    C, D = i.dom, i.cod
    if X.index is not C:
        raise ValueError("diagram is not indexed by the domain of i")
    if not D.has_object(t):
        raise KeyError(f"{object_key(t)} is not an object of {D.name}")
    thetas, relations = _relation_skeleton(i, t)

    generators: list[tuple[Any, int, int]] = []
    offsets = {}
    for n in C.objects:
        width = X.on_objects[n]
        offsets[n] = (len(generators), width, {th: p for p, th in enumerate(thetas[n])})
        for th in thetas[n]:
            generators.extend((n, th, x) for x in range(1, width + 1))
    pres = CoendPresentation(t, generators, [], [], offsets)
    V = len(generators) + 1

    lefts, rights = [], []
    for h, n, n2, moved in relations:
        width, width2 = X.on_objects[n], X.on_objects[n2]
        if width == 0:
            continue
        xs = np.arange(1, width + 1, dtype=np.int64)
        images = np.asarray(X.on_morphisms[h].values, dtype=np.int64)
        ps = np.arange(len(moved), dtype=np.int64)[:, None]
        left = np.where(moved[:, None] >= 0, offsets[n][0] + moved[:, None] * width + xs, 0)
        right = np.where(images > 0, offsets[n2][0] + ps * width2 + images, 0)
        lefts.append(left.ravel())
        rights.append(right.ravel())
    if lefts:
        rows, cols = np.concatenate(lefts), np.concatenate(rights)
    else:
        rows = cols = np.zeros(0, dtype=np.int64)
    graph = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(V, V))
    _, labels = connected_components(graph, directed=False)

    # number components by least member; the basepoint's component is 0
    least = np.full(labels.max() + 1, V, dtype=np.int64)
    np.minimum.at(least, labels, np.arange(V))
    order = np.argsort(least, kind="stable")
    number = np.empty_like(order)
    number[order] = np.arange(len(order))
    # least[labels[0]] == 0, so the basepoint component gets number 0
    class_of = number[labels]
    pres.class_of = class_of.tolist()
    pres.representatives = [generators[g - 1] for g in least[order[1:]].tolist()]
    return PointedFinSet(len(pres.representatives)), pres


@dataclass
class LeftKan:
    """``LX`` as a diagram on D, with the coend presentation at every object."""

    diagram: PointedDiagram
    presentations: dict
    source: PointedDiagram
    along: PointedFunctor


def left_kan(X: PointedDiagram, i: PointedFunctor, check_well_defined: bool = False) -> LeftKan:
    D = i.cod
    pres = {t: compute_L(X, i, t)[1] for t in D.objects}
    maps = []
    for u in D.morphisms():
        t, s = D.dom(u), D.cod(u)
        P, Q = pres[t], pres[s]
        if check_well_defined:
            vals = [None] * P.size
            for g, (n, th, x) in enumerate(P.generators, start=1):
                k = P.class_of[g]
                if k == 0:
                    continue
                img = Q.element(n, D.compose(u, th), x)
                if vals[k - 1] is None:
                    vals[k - 1] = img
                elif vals[k - 1] != img:
                    raise AssertionError(f"L{X.name} is not well defined on morphism {u}")
        else:
            vals = [Q.element(n, D.compose(u, th), x) for (n, th, x) in P.representatives]
        maps.append(PointedMap(P.size, Q.size, tuple(vals)))
    LX = PointedDiagram(D, SET, {t: pres[t].size for t in D.objects}, maps, name=f"L({X.name})")
    return LeftKan(LX, pres, X, i)


def L_on_map(f: DiagramMap, source: LeftKan, target: LeftKan) -> DiagramMap:
    """``L(f)``: the class of ``(n, theta, x)`` goes to the class of ``(n, theta, f_n(x))``."""
    comps = {}
    for t, P in source.presentations.items():
        Q = target.presentations[t]
        vals = tuple(Q.element(n, th, f.components[n](x)) for (n, th, x) in P.representatives)
        comps[t] = PointedMap(P.size, Q.size, vals)
    return DiagramMap(source.diagram, target.diagram, comps, name=f"L({f.name})")


def unit_eta(X: PointedDiagram, i: PointedFunctor, p, kan: LeftKan | None = None) -> PointedMap:
    """``eta_{X,p}``: x goes to the class of ``(p, 1_{i(p)}, x)``."""
    kan = kan or left_kan(X, i)
    D = i.cod
    ip = i.object_map[p]
    P = kan.presentations[ip]
    ident = D.identity(ip)
    return PointedMap(X.on_objects[p], P.size,
                      tuple(P.element(p, ident, x) for x in range(1, X.on_objects[p] + 1)))


def unit(X: PointedDiagram, i: PointedFunctor, kan: LeftKan | None = None,
         restricted: PointedDiagram | None = None) -> DiagramMap:
    """``eta_X: X -> i^* L X``."""
    kan = kan or left_kan(X, i)
    restricted = restricted or precompose(kan.diagram, i)
    comps = {p: unit_eta(X, i, p, kan) for p in i.dom.objects}
    return DiagramMap(X, restricted, comps, name=f"eta_{X.name}")


def counit_epsilon(Y: PointedDiagram, i: PointedFunctor, t, kan: LeftKan | None = None) -> PointedMap:
    """``eps_{Y,t}``: the class of ``(n, theta, y)`` goes to ``(Y theta)(y)``.

    Raises if two generators of one class disagree, which would mean the
    coend relations and the naturality of Y are out of step.
    """
    kan = kan or left_kan(precompose(Y, i), i)
    P = kan.presentations[t]
    vals: list[int | None] = [None] * P.size
    for g, (n, th, y) in enumerate(P.generators, start=1):
        k = P.class_of[g]
        img = Y.on_morphisms[th](y)
        if k == 0:
            if img != 0:
                raise ValueError(f"counit at {object_key(t)}: basepoint class meets {img}")
            continue
        if vals[k - 1] is None:
            vals[k - 1] = img
        elif vals[k - 1] != img:
            raise ValueError(f"counit at {object_key(t)}: class {k} has images {vals[k - 1]} and {img}")
    return PointedMap(P.size, Y.on_objects[t], tuple(vals))


def counit(Y: PointedDiagram, i: PointedFunctor, kan: LeftKan | None = None) -> DiagramMap:
    """``eps_Y: L i^* Y -> Y``."""
    kan = kan or left_kan(precompose(Y, i), i)
    comps = {t: counit_epsilon(Y, i, t, kan) for t in i.cod.objects}
    return DiagramMap(kan.diagram, Y, comps, name=f"eps_{Y.name}")


# triangle identities


def check_triangles(i: PointedFunctor, X: PointedDiagram | None = None,
                    Y: PointedDiagram | None = None) -> Report:
    """``eps_{LX} o L(eta_X) = 1`` for X, and ``(i^* eps_Y) o eta_{i^* Y} = 1`` for Y."""
    report = Report("triangles")
    if X is not None:
        kan = left_kan(X, i)
        iLX = precompose(kan.diagram, i)
        eta = unit(X, i, kan, iLX)
        kan2 = left_kan(iLX, i)
        L_eta = L_on_map(eta, kan, kan2)
        eps = counit(kan.diagram, i, kan2)
        fault = None
        for t in i.cod.objects:
            comp = compose_pointed(eps.components[t], L_eta.components[t])
            if comp != identity_map(kan.diagram.on_objects[t]):
                x = next(k for k in range(1, comp.dom + 1) if comp(k) != k)
                fault = {"object": object_key(t), "element": x, "image": comp(x)}
                break
        report.add(f"eps_LX.L(eta_X)=1[{X.name}]", fault is None, witness=fault)
    if Y is not None:
        iY = precompose(Y, i)
        kan = left_kan(iY, i)
        fault = None
        for p in i.dom.objects:
            eta = unit_eta(iY, i, p, kan)
            eps = counit_epsilon(Y, i, i.object_map[p], kan)
            comp = compose_pointed(eps, eta)
            if comp != identity_map(iY.on_objects[p]):
                x = next(k for k in range(1, comp.dom + 1) if comp(k) != k)
                fault = {"object": object_key(p), "element": x, "image": comp(x)}
                break
        report.add(f"i*eps_Y.eta_i*Y=1[{Y.name}]", fault is None, witness=fault)
    return report


# hom bijection


def adjunction_bijection(X: PointedDiagram, Y: PointedDiagram, i: PointedFunctor,
                         budget: int = 10**6) -> Report:
    """Phi(g) = i^*(g) o eta_X and Psi(f) = eps_Y o L(f) are mutually inverse."""
    report = Report(f"adjunction[{X.name},{Y.name}]")
    kanX = left_kan(X, i)
    LX = kanX.diagram
    iLX = precompose(LX, i)
    iY = precompose(Y, i)
    eta = unit(X, i, kanX, iLX)
    kanY = left_kan(iY, i)
    eps = counit(Y, i, kanY)

    try:
        left = enum_diagram_maps(LX, Y, budget)      # D-diagrams  LX -> Y
        right = enum_diagram_maps(X, iY, budget)     # C-diagrams  X -> i^*Y
    except BudgetExceeded as exc:
        report.skip("bijection", detail=str(exc))
        return report

    def phi(g: DiagramMap) -> DiagramMap:
        return compose_diagram_maps(precompose_map(g, i, iLX, iY), eta)

    def psi(f: DiagramMap) -> DiagramMap:
        return compose_diagram_maps(eps, L_on_map(f, kanX, kanY))

    left_keys = {g.key() for g in left}
    right_keys = {f.key() for f in right}
    report.add("cardinalities", len(left) == len(right),
               witness={"hom(LX,Y)": len(left), "hom(X,i*Y)": len(right)},
               detail=f"{len(left)} maps")
    phis = [phi(g) for g in left]
    psis = [psi(f) for f in right]
    report.add("phi-lands-in-hom", all(p.key() in right_keys for p in phis))
    report.add("psi-lands-in-hom", all(p.key() in left_keys for p in psis))
    fault = next((f.key() for f, p in zip(right, psis) if phi(p).key() != f.key()), None)
    report.add("phi.psi=1", fault is None, witness=fault)
    fault = next((g.key() for g, p in zip(left, phis) if psi(p).key() != g.key()), None)
    report.add("psi.phi=1", fault is None, witness=fault)
    return report


def check_L_functorial(maps: Sequence[DiagramMap], i: PointedFunctor) -> Report:
    """L(1) = 1 and L(g f) = L(g) L(f) over the given maps."""
    report = Report("L-functoriality")
    kans: dict[int, LeftKan] = {}

    def kan(X):
        if id(X) not in kans:
            kans[id(X)] = left_kan(X, i)
        return kans[id(X)]

    fault = None
    for f in maps:
        for X in (f.source, f.target):
            k = kan(X)
            if L_on_map(identity_diagram_map(X), k, k).key() != identity_diagram_map(k.diagram).key():
                fault = fault or {"diagram": X.name}
    report.add("L(1)=1", fault is None, witness=fault)
    fault = None
    count = 0
    for f in maps:
        for g in maps:
            if f.target is not g.source:
                continue
            count += 1
            gf = compose_diagram_maps(g, f)
            lhs = L_on_map(gf, kan(f.source), kan(g.target))
            rhs = compose_diagram_maps(L_on_map(g, kan(g.source), kan(g.target)),
                                       L_on_map(f, kan(f.source), kan(f.target)))
            if lhs.key() != rhs.key():
                fault = fault or {"f": f.name, "g": g.name}
    report.add("L(gf)=L(g)L(f)", fault is None, witness=fault, detail=f"{count} pairs")
    return report


# unit isomorphism and density


def check_unit_iso(X: PointedDiagram, i: PointedFunctor, kan: LeftKan | None = None) -> Report:
    kan = kan or left_kan(X, i)
    report = Report(f"unit-iso[{X.name}]")
    fault = None
    for p in i.dom.objects:
        eta = unit_eta(X, i, p, kan)
        if not eta.is_bijection():
            fault = {"object": object_key(p), "eta": list(eta.values)}
            break
    report.add("eta-bijective", fault is None, witness=fault)
    return report


def yoneda_density_oracle(X: PointedDiagram, p, i: PointedFunctor | None = None,
                          kan: LeftKan | None = None) -> Report:
    """Density: the coend over C^0(n, p) evaluates bijectively onto Xp.  With a
    fully faithful ``i``, also checks that Xp -> (LX)(ip) ~ density coend -> Xp
    is the identity."""
    C = X.index
    report = Report(f"density[{X.name}@{object_key(p)}]")
    idC = _IDENTITIES.get(C)
    if idC is None:
        idC = _IDENTITIES[C] = identity_functor(C)
    _, dens = compute_L(X, idC, p)

    ev: list[int | None] = [None] * dens.size
    consistent = True
    for g, (n, th, x) in enumerate(dens.generators, start=1):
        k = dens.class_of[g]
        img = X.on_morphisms[th](x)
        if k == 0:
            consistent &= img == 0
            continue
        if ev[k - 1] is None:
            ev[k - 1] = img
        else:
            consistent &= ev[k - 1] == img
    report.add("evaluation-well-defined", consistent)
    evaluation = PointedMap(dens.size, X.on_objects[p], tuple(v or 0 for v in ev))
    report.add("evaluation-bijective", consistent and evaluation.is_bijection(),
               witness={"coend": dens.size, "Xp": X.on_objects[p]})

    if i is None:
        return report
    D = i.cod
    kan = kan or left_kan(X, i)
    ip = i.object_map[p]
    P = kan.presentations[ip]
    # hom-set bijection D^0(i n, i p) -> C^0(n, p), as a lookup
    back: dict[int, int] = {}
    ff = True
    for n in C.objects:
        for th in C.nonzero_hom(n, p):
            back.setdefault(i.morphism_map[th], th)
        ff &= len(D.nonzero_hom(i.object_map[n], ip)) == len(C.nonzero_hom(n, p))
    ff &= all(th in back for n in C.objects for th in D.nonzero_hom(i.object_map[n], ip))
    report.add("i-fully-faithful-on-homs", ff)
    if not ff:
        return report
    middle: list[int | None] = [None] * P.size
    well = True
    for g, (n, th, x) in enumerate(P.generators, start=1):
        k = P.class_of[g]
        img = dens.element(n, back[th], x)
        if k == 0:
            well &= img == 0
            continue
        if middle[k - 1] is None:
            middle[k - 1] = img
        else:
            well &= middle[k - 1] == img
    iso = PointedMap(P.size, dens.size, tuple(v or 0 for v in middle))
    report.add("reindexing-iso", well and iso.is_bijection())
    eta = unit_eta(X, i, p, kan)
    composite = compose_pointed(evaluation, compose_pointed(iso, eta))
    report.add("composite-is-identity", composite == identity_map(X.on_objects[p]),
               witness={"composite": list(composite.values)})
    return report


# right-induced classes


Predicate = Callable[[DiagramMap], bool]


def right_induced_predicate(S: Predicate, i: PointedFunctor) -> Predicate:
    """``S^i = (i^*)^{-1} S``."""

    def induced(f: DiagramMap) -> bool:
        return S(precompose(f, i))

    return induced


def enumerate_maps_among(diagrams: Sequence[PointedDiagram], budget: int = 10**5
                         ) -> tuple[list[DiagramMap], list[tuple[str, str]]]:
    """All maps between every ordered pair; pairs over budget are reported, not raised."""
    maps, skipped = [], []
    for X in diagrams:
        for Y in diagrams:
            try:
                maps.extend(enum_diagram_maps(X, Y, budget))
            except BudgetExceeded:
                skipped.append((X.name, Y.name))
    return maps, skipped


def check_closure(P: Predicate, maps: Sequence[DiagramMap], name: str = "closure") -> Report:
    """Isomorphism closure and 2-out-of-3 of ``P`` over composable pairs of ``maps``."""
    report = Report(name)
    isos = [f for f in maps if is_levelwise_bijection(f)]
    fault = next((f.key() for f in isos if not P(f)), None)
    report.add("contains-isomorphisms", fault is None, witness=fault, detail=f"{len(isos)} isos")
    by_source: dict[int, list[DiagramMap]] = {}
    for g in maps:
        by_source.setdefault(id(g.source), []).append(g)
    memo: dict[tuple, bool] = {}

    def holds(f):
        k = (id(f.source), id(f.target), f.key())
        if k not in memo:
            memo[k] = P(f)
        return memo[k]

    count = 0
    fault = None
    for f in maps:
        for g in by_source.get(id(f.target), []):
            gf = compose_diagram_maps(g, f)
            flags = (holds(f), holds(g), holds(gf))
            count += 1
            if sum(flags) == 2:
                fault = fault or {"f": f.key(), "g": g.key(), "in": flags}
    report.add("two-out-of-three", fault is None, witness=fault, detail=f"{count} pairs")
    return report


def check_relative_functor(F: Callable[[Any], Any], W: Predicate, W2: Predicate,
                           morphisms: Iterable[Any], name: str = "relative-functor") -> Report:
    report = Report(name)
    relative = creates = None
    total = 0
    for f in morphisms:
        total += 1
        a, b = W(f), W2(F(f))
        if a and not b and relative is None:
            relative = {"morphism": getattr(f, "name", repr(f))}
        if a != b and creates is None:
            creates = {"morphism": getattr(f, "name", repr(f)), "in_W": a, "image_in_W2": b}
    report.add("relative", relative is None, witness=relative, detail=f"{total} morphisms")
    report.add("creates", creates is None, witness=creates)
    return report


# truncation stability


def stability_diagnostic(X_big: PointedDiagram, N: int, margin: int, q_max: int) -> Report:
    """Compare (LX)t computed with base truncation N against N + margin.

    ``X_big`` lives on F<=N+margin.  For each object t of the smaller tuple
    category the canonical map between the two coends is tested for
    bijectivity.  This observes agreement; it proves nothing about the
    untruncated coend.
    """
    from .tuples import TupleMorphism, build_gstar, length_one_inclusion

    small_T, big_T = build_gstar(N, q_max), build_gstar(N + margin, q_max)
    if X_big.index.objects != big_T.base.objects:
        raise ValueError("diagram must live on the larger truncation of F")
    Fs, Fb = small_T.base, big_T.base
    # re-home X_big onto this copy of F<=N+margin (object-for-object equal)
    X_b = PointedDiagram(Fb, SET, X_big.on_objects,
                         [X_big.on_morphisms[X_big.index.mid(Fb.dom(m), Fb.cod(m), Fb.label(m))]
                          for m in Fb.morphisms()], name=X_big.name)
    incl = PointedFunctor.from_labels(Fs, Fb, lambda n: n, lambda a, b, m: m, name="incl")
    X_s = precompose(X_b, incl)
    i_s, i_b = length_one_inclusion(small_T), length_one_inclusion(big_T)
    report = Report(f"stability[N={N}->{N + margin}]")
    for t in small_T.cat.objects:
        _, P = compute_L(X_s, i_s, t)
        _, Q = compute_L(X_b, i_b, t)
        vals = []
        for (n, th, x) in P.representatives:
            m = small_T.cat.label(th)
            big = TupleMorphism(m.dom, m.cod, m.f, tuple(incl.morphism_map[p] for p in m.psis))
            vals.append(Q.element(n, big_T.cat.mid(m.dom, m.cod, big), x))
        cmp = PointedMap(P.size, Q.size, tuple(vals))
        report.add(f"comparison@{object_key(t)}", cmp.is_bijection(),
                   witness={"small": P.size, "big": Q.size}, detail=f"{P.size} vs {Q.size}")
    return report
