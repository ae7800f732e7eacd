"""The check suite: every exhaustive and seeded property check, run under one
configuration and collected into a deterministic report."""

from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

from .category import (
    compose_functors,
    identity_functor,
    identity_transformation,
    is_fully_faithful,
    validate_category,
    validate_functor,
)
from .coend import (
    adjunction_bijection,
    check_closure,
    check_L_functorial,
    check_triangles,
    check_unit_iso,
    counit,
    enumerate_maps_among,
    left_kan,
    right_induced_predicate,
    stability_diagnostic,
    yoneda_density_oracle,
)
from .diagrams import (
    enum_diagram_maps,
    is_levelwise_bijection,
    precompose,
    random_diagram,
    representable,
    terminal_diagram,
    wedge_diagram,
)
from .relative import (
    ClassificationDiagram,
    RelativeCategory,
    boundary_of_triangle,
    check_bisimplicial,
    check_relative_category,
    constants_transformation,
    fixture_relative_categories,
    homotopy_from_transformation,
    is_constant_homotopy,
    segal_map_check,
    walking_iso,
    weq_predicate,
)
from .report import FAIL, PASS, SKIPPED, Check, Report
from .skeletal import STAR, fskel, identity_injection, smash_maps
from .tuples import (
    build_gstar,
    fskel_nonzero_count_formula,
    length_one_inclusion,
    oplus,
    smash_functor,
    tuple_hom,
)

SUITES = (
    "category-axioms",
    "hom-counts",
    "functor-laws",
    "emptiness",
    "monoidality",
    "triangles",
    "adjunction",
    "unit-iso",
    "density",
    "right-induced",
    "classification",
    "stability",
)


@dataclass(frozen=True)
class SuiteConfig:
    N: int = 2
    q_max: int = 2
    d: int = 3
    seed: int = 0
    random_count: int = 100
    budget: int = 10**5
    stability_margin: int = 0
    suites: tuple[str, ...] = SUITES

    def __post_init__(self):
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise ValueError(f"unknown suite(s): {', '.join(unknown)}")
        if self.N < 1 or self.q_max < 2 or self.d < 1:
            raise ValueError("the suite needs N >= 1, q_max >= 2 and d >= 1")
        if self.random_count < 0 or self.budget < 1 or self.stability_margin < 0:
            raise ValueError("random_count, budget and stability_margin must be non-negative")


@dataclass
class CheckReport:
    """Checks sorted by name; seeds echoed for replay; timing kept apart from
    the canonical form so equal configurations give identical bytes."""

    config: SuiteConfig
    checks: list[Check] = field(default_factory=list)
    seeds: dict[str, list[int]] = field(default_factory=dict)
    timing: dict[str, float] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def suite_status(self, suite: str) -> str:
        mine = [c for c in self.checks if c.name.split(".", 1)[0] == suite]
        if any(c.status == FAIL for c in mine):
            return FAIL
        if not mine or all(c.status == SKIPPED for c in mine):
            return SKIPPED
        return PASS

    def to_dict(self, timing: bool = False) -> dict:
        cfg = asdict(self.config)
        cfg["suites"] = list(cfg["suites"])
        out = {
            "suite": "gstar-check",
            "status": PASS if self.ok else FAIL,
            "config": cfg,
            "seeds": {k: v for k, v in sorted(self.seeds.items())},
            "suites": {s: self.suite_status(s) for s in SUITES},
            "checks": [c.to_dict() for c in sorted(self.checks, key=lambda c: c.name)],
        }
        if timing:
            out["timing"] = {k: round(v, 3) for k, v in sorted(self.timing.items())}
        return out


class _Context:
    """Objects shared between suites, built on first use."""

    def __init__(self, cfg: SuiteConfig):
        self.cfg = cfg
        self._cache: dict = {}

    def get(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    @property
    def T(self):
        return self.get("T", lambda: build_gstar(self.cfg.N, self.cfg.q_max))

    @property
    def F(self):
        return self.T.base

    @property
    def i(self):
        return self.get("i", lambda: length_one_inclusion(self.T))

    def seeds(self, tag: str) -> list[int]:
        base = self.cfg.seed * 1_000_003
        return [base + k for k in range(self.cfg.random_count)]

    def random_F(self, s: int):
        return random_diagram(self.F, random.Random(f"F:{s}"))

    def random_G(self, s: int):
        return random_diagram(self.T.cat, random.Random(f"G:{s}"))

    def fixtures_F(self):
        def build():
            F = self.F
            out = [representable(F, n) for n in F.objects if n != F.basepoint]
            out.append(terminal_diagram(F))
            out.append(wedge_diagram([representable(F, 1), representable(F, 1)]))
            return out
        return self.get("fixtures_F", build)

    def fixtures_G(self):
        def build():
            G = self.T.cat
            out = [representable(G, t) for t in ((1,), (2,), (1, 1)) if G.has_object(t)]
            out.append(terminal_diagram(G))
            return out
        return self.get("fixtures_G", build)


# suites


def _category_axioms(ctx: _Context, rep: Report) -> None:
    rep.extend(validate_category(ctx.F), prefix="F")
    rep.extend(validate_category(ctx.T.cat), prefix="G")
    rep.add("G.size", True, detail=f"{len(ctx.T.cat.objects)} objects, {ctx.T.cat.n_morphisms} morphisms")


def _hom_counts(ctx: _Context, rep: Report) -> None:
    T = ctx.T
    fault = None
    pairs = 0
    for a in T.cat.objects:
        for b in T.cat.objects:
            got = len(T.cat.nonzero_hom(a, b))
            want = 0 if STAR in (a, b) else fskel_nonzero_count_formula(a, b)
            pairs += 1
            if got != want:
                fault = fault or {"dom": str(a), "cod": str(b), "enumerated": got, "formula": want}
    rep.add("G.nonzero-formula", fault is None, witness=fault, detail=f"{pairs} pairs")
    F3 = fskel(3)
    fault = next(({"n": n, "m": m} for n in F3.objects for m in F3.objects
                  if len(F3.hom(n, m)) != (m + 1) ** n), None)
    rep.add("F.hom-size", fault is None, witness=fault)


def _functor_laws(ctx: _Context, rep: Report) -> None:
    T3 = ctx.get("T3", lambda: build_gstar(3, 1))
    i3 = length_one_inclusion(T3)
    sm3 = smash_functor(T3, fskel(3))
    comp = compose_functors(sm3, i3)
    ident = identity_functor(T3.base)
    rep.add("smash.i=1", comp.object_map == ident.object_map and comp.morphism_map == ident.morphism_map,
            detail=f"{T3.base.n_morphisms} morphisms of F<=3")
    rep.extend(validate_functor(i3), prefix="i<=3")
    rep.extend(validate_functor(ctx.i), prefix="i")
    rep.extend(is_fully_faithful(ctx.i), prefix="i")
    rep.extend(is_fully_faithful(i3), prefix="i<=3")
    sm = ctx.get("smash", lambda: smash_functor(ctx.T))
    rep.extend(validate_functor(sm), prefix="smash")


def _emptiness(ctx: _Context, rep: Report) -> None:
    empty = not ctx.T.cat.nonzero_hom((1,), ())
    rep.add("G0(i<1>,())", empty)
    Fbig = fskel(4)
    fault = None
    for m in (1, 2):
        for n in (1, 2):
            if tuple_hom(Fbig, 1, (m, n), (m * n,), nonzero_only=True):
                fault = fault or {"m": m, "n": n}
    rep.add("G0((m,n),(mn))", fault is None, witness=fault, detail="m, n <= 2")


def _monoidality(ctx: _Context, rep: Report) -> None:
    T = ctx.T
    G = T.cat
    short = [t for t in G.objects if t is not STAR and 2 * len(t) <= T.q_max]
    unit_ok = all(oplus(T, (), t) == t == oplus(T, t, ()) for t in G.objects if t is not STAR)
    rep.add("oplus-unit", unit_ok)
    morphisms = [m for a in short for b in short for m in G.hom(a, b)]
    fault = None
    for a in short:
        for b in short:
            if oplus(T, G.label(G.identity(a)), G.label(G.identity(b))) != G.label(G.identity(oplus(T, a, b))):
                fault = fault or {"a": str(a), "b": str(b)}
    rep.add("oplus-identities", fault is None, witness=fault)
    pairs = [(g, f) for f in morphisms for g in morphisms if G.cod(f) == G.dom(g)]
    fault = None
    for g, f in pairs:
        for g2, f2 in pairs:
            lhs = oplus(T, G.label(G.compose(g, f)), G.label(G.compose(g2, f2)))
            rhs = T.compose(oplus(T, G.label(g), G.label(g2)), oplus(T, G.label(f), G.label(f2)))
            if lhs != rhs:
                fault = fault or {"pair1": [g, f], "pair2": [g2, f2]}
    rep.add("oplus-interchange", fault is None, witness=fault, detail=f"{len(pairs) ** 2} pairs of pairs")
    sm = ctx.get("smash", lambda: smash_functor(T))
    S = sm.cod
    fault = None
    for f in morphisms:
        for g in morphisms:
            lhs = sm.morphism_map[G.mid(*_ends(T, f, g))]
            sf, sg = S.label(sm.morphism_map[f]), S.label(sm.morphism_map[g])
            rhs = smash_maps(identity_injection(2), [sf, sg], (sf.dom, sg.dom), (sf.cod, sg.cod))
            if S.label(lhs) != rhs:
                fault = fault or {"f": f, "g": g}
    rep.add("smash-strict-monoidal", fault is None, witness=fault, detail=f"{len(morphisms) ** 2} pairs")


def _ends(T, f, g):
    m = oplus(T, T.cat.label(f), T.cat.label(g))
    return m.dom, m.cod, m


def _seeded(ctx: _Context, report: CheckReport, suite: str) -> list[int]:
    seeds = ctx.seeds(suite)
    report.seeds[suite] = seeds
    return seeds


def _triangles(ctx: _Context, rep: Report, seeds: list[int]) -> None:
    i = ctx.i
    for X in ctx.fixtures_F():
        rep.extend(check_triangles(i, X=X), prefix=f"fixture[{X.name}]")
    for Y in ctx.fixtures_G():
        rep.extend(check_triangles(i, Y=Y), prefix=f"fixture[{Y.name}]")
    fault = None
    for s in seeds:
        r = check_triangles(i, X=ctx.random_F(s), Y=ctx.random_G(s))
        if not r.ok:
            fault = fault or {"seed": s, "failures": [c.name for c in r.failures]}
    rep.add("random", fault is None, witness=fault, detail=f"{len(seeds)} seeds")


def _adjunction(ctx: _Context, rep: Report, seeds: list[int]) -> None:
    i = ctx.i
    budget = ctx.cfg.budget
    skipped = 0
    for X in ctx.fixtures_F():
        for Y in ctx.fixtures_G():
            r = adjunction_bijection(X, Y, i, budget)
            skipped += any(c.status == SKIPPED for c in r.checks)
            rep.extend(r, prefix=f"fixture[{X.name},{Y.name}]")
    fault = None
    done = 0
    for s in seeds:
        r = adjunction_bijection(ctx.random_F(s), ctx.random_G(s), i, budget)
        if any(c.status == SKIPPED for c in r.checks):
            skipped += 1
            continue
        done += 1
        if not r.ok:
            fault = fault or {"seed": s, "failures": [c.name for c in r.failures]}
    rep.add("random", fault is None, witness=fault,
            detail=f"{done} pairs checked, {skipped} over budget {budget}")
    maps = []
    for X in ctx.fixtures_F()[:3]:
        for Y in ctx.fixtures_F()[:3]:
            maps.extend(enum_diagram_maps(X, Y, budget))
    rep.extend(check_L_functorial(maps, i), prefix="L")


def _unit_iso(ctx: _Context, rep: Report, seeds: list[int]) -> None:
    i = ctx.i
    for X in ctx.fixtures_F():
        rep.extend(check_unit_iso(X, i), prefix=f"fixture[{X.name}]")
    fault = None
    for s in seeds:
        r = check_unit_iso(ctx.random_F(s), i)
        if not r.ok:
            fault = fault or {"seed": s, "witness": r.failures[0].witness}
    rep.add("random", fault is None, witness=fault, detail=f"{len(seeds)} seeds")


def _density(ctx: _Context, rep: Report, seeds: list[int]) -> None:
    i = ctx.i
    F, G = ctx.F, ctx.T.cat
    for X in ctx.fixtures_F():
        for p in F.objects:
            rep.extend(yoneda_density_oracle(X, p, i), prefix=f"fixture[{X.name}]@{p}")
    for Y in ctx.fixtures_G():
        fault = None
        for t in G.objects:
            r = yoneda_density_oracle(Y, t)
            if not r.ok:
                fault = fault or {"object": str(t)}
        rep.add(f"fixture[{Y.name}]", fault is None, witness=fault)
    fault = None
    for s in seeds:
        X = ctx.random_F(s)
        kan = left_kan(X, i)
        for p in F.objects:
            r = yoneda_density_oracle(X, p, i, kan)
            if not r.ok:
                fault = fault or {"seed": s, "object": p, "failures": [c.name for c in r.failures]}
    rep.add("random-F", fault is None, witness=fault, detail=f"{len(seeds)} seeds, all objects")
    fault = None
    for s in seeds:
        Y = ctx.random_G(s)
        for t in G.objects:
            r = yoneda_density_oracle(Y, t)
            if not r.ok:
                fault = fault or {"seed": s, "object": str(t)}
    rep.add("random-G", fault is None, witness=fault, detail=f"{len(seeds)} seeds, all objects")


def _right_induced(ctx: _Context, rep: Report) -> None:
    i, G = ctx.i, ctx.T.cat
    S = is_levelwise_bijection
    Si = right_induced_predicate(S, i)
    r1 = representable(G, (1,))
    diagrams = [r1, wedge_diagram([r1, r1]), terminal_diagram(G),
                left_kan(representable(ctx.F, 1), i).diagram]
    diagrams += [random_diagram(G, random.Random(f"S:{ctx.cfg.seed}:{k}"), max_generators=1,
                                max_relations=2) for k in range(3)]
    maps, skipped = enumerate_maps_among(diagrams, ctx.cfg.budget)
    r = check_closure(Si, maps, name="S^i")
    rep.extend(r, prefix="S^i")
    rep.add("sweep", True, detail=f"{len(diagrams)} diagrams, {len(maps)} maps, {len(skipped)} pairs over budget")
    rep.extend(check_closure(S, maps, name="S"), prefix="S")
    # S^i is strictly larger than S on G: the counit at a smash-restricted diagram
    sm = ctx.get("smash", lambda: smash_functor(ctx.T))
    X = representable(sm.cod, 1)
    Y = precompose(X, sm)
    eps = counit(Y, i)
    rep.add("counit-in-S^i", Si(eps))
    rep.add("counit-not-in-S", not S(eps),
            detail="bijective on length-one tuples, not on longer ones")


def _classification(ctx: _Context, rep: Report) -> None:
    d = ctx.cfg.d
    C = walking_iso()
    R = RelativeCategory(C, weq_predicate(C, "all"), name="walking-iso/all")
    B = ClassificationDiagram(R, d)
    fault = next(({"n": n, "k": k, "size": B.size(n, k)} for n in range(d + 1) for k in range(d + 1)
                  if B.size(n, k) != 2 ** ((n + 1) * (k + 1))), None)
    rep.add("walking-iso-sizes", fault is None, witness=fault, detail=f"n, k <= {d}")
    for R in fixture_relative_categories():
        rc = check_relative_category(R)
        rep.extend(rc, prefix=f"rel[{R.name}]")
        B = ClassificationDiagram(R, d)
        bi = check_bisimplicial(B)
        rep.add(f"rel[{R.name}].bisimplicial", bi.ok,
                witness=None if bi.ok else [c.name for c in bi.failures])
        fault = None
        for n in range(2, d + 1):
            for k in range(d + 1):
                sg = segal_map_check(B, n, k)
                if not sg.ok:
                    fault = fault or {"n": n, "k": k, "failures": [c.to_dict() for c in sg.failures]}
        rep.add(f"rel[{R.name}].segal-bijective", fault is None, witness=fault)
    bd = boundary_of_triangle(d)
    rep.add("non-segal-fixture-detected", not segal_map_check(bd, 2, 0).ok,
            detail="boundary of the 2-simplex misses the spine (01, 12)")
    t = constants_transformation()
    prism, pr = homotopy_from_transformation(t, d)
    rep.extend(pr, prefix="prism[const0=>const1]")
    rep.add("prism[const0=>const1].nonconstant", not is_constant_homotopy(prism))
    for name, C in (("walking-iso", walking_iso()), ("F<=1", fskel(1))):
        prism, pr = homotopy_from_transformation(identity_transformation(identity_functor(C)), d)
        rep.extend(pr, prefix=f"prism[1_{name}]")
        rep.add(f"prism[1_{name}].constant", is_constant_homotopy(prism))


def _stability(ctx: _Context, rep: Report) -> None:
    k = ctx.cfg.stability_margin
    if k == 0:
        rep.skip("comparison", detail="stability margin is 0")
        return
    N = ctx.cfg.N
    big = fskel(N + k)
    for X in (representable(big, 1), representable(big, N + k),
              random_diagram(big, random.Random(f"stab:{ctx.cfg.seed}"))):
        rep.extend(stability_diagnostic(X, N, k, ctx.cfg.q_max), prefix=f"{X.name}")


_PLAIN: dict[str, Callable[[_Context, Report], None]] = {
    "category-axioms": _category_axioms,
    "hom-counts": _hom_counts,
    "functor-laws": _functor_laws,
    "emptiness": _emptiness,
    "monoidality": _monoidality,
    "right-induced": _right_induced,
    "classification": _classification,
    "stability": _stability,
}
_SEEDED = {
    "triangles": _triangles,
    "adjunction": _adjunction,
    "unit-iso": _unit_iso,
    "density": _density,
}


def run_suite(cfg: SuiteConfig | None = None) -> CheckReport:
    cfg = cfg or SuiteConfig()
    ctx = _Context(cfg)
    report = CheckReport(cfg)
    for suite in SUITES:
        rep = Report(suite)
        start = time.perf_counter()
        if suite not in cfg.suites:
            rep.skip("all", detail="not selected")
        elif suite in _SEEDED:
            _SEEDED[suite](ctx, rep, _seeded(ctx, report, suite))
        else:
            _PLAIN[suite](ctx, rep)
        report.timing[suite] = time.perf_counter() - start
        for c in rep.checks:
            report.checks.append(Check(f"{suite}.{c.name}", c.status, c.witness, c.detail))
    return report
