"""Command-line front end.

Exit codes: 0 success, 1 a check failed, 2 malformed input or configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from typing import Any, Sequence

from .category import FinCategory, object_key, to_dot, validate_category
from .coend import compute_L, left_kan
from .diagrams import (
    SET,
    nerve_levelwise,
    precompose,
    validate_diagram,
)
from .relative import (
    FIXTURE_CATEGORIES,
    ClassificationDiagram,
    RelativeCategory,
    boundary_of_triangle,
    constants_transformation,
    homotopy_from_transformation,
    segal_map_check,
    weq_predicate,
)
from .serialize import diagram_to_json, dumps, load_category, load_diagram, load_json, parse_object
from .skeletal import STAR, TruncationError, fskel, lex_points, smash_objects
from .suite import SUITES, SuiteConfig, run_suite
from .tuples import build_e, build_gstar, collapse_functor, length_one_inclusion, smash_functor

FORMATS = ("json", "csv", "dot")


class UsageError(Exception):
    """Malformed input; reported with exit code 2."""


# output helpers


def _csv(rows: Sequence[Sequence[Any]], header: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(args, data: Any, rows=None, header=None, dot: str | None = None) -> None:
    fmt = args.format
    if fmt == "json":
        sys.stdout.write(dumps(data))
    elif fmt == "csv":
        if rows is None:
            raise UsageError("this output has no CSV form")
        sys.stdout.write(_csv(rows, header))
    else:
        if dot is None:
            raise UsageError("this output has no DOT form")
        sys.stdout.write(dot)


def _tuple_arg(text: str):
    obj = parse_object(text)
    if obj is not STAR and not isinstance(obj, tuple):
        if isinstance(obj, int):
            return (obj,)
        raise UsageError(f"expected a tuple such as '(1,2)', '()' or '*', got {text!r}")
    return obj


def _gstar_for(args, *objects):
    """G* at the requested truncation, or the least one containing the objects."""
    entries = [x for t in objects if t is not STAR for x in t]
    lengths = [len(t) for t in objects if t is not STAR]
    N = args.trunc if args.trunc is not None else max(entries + [1])
    q = args.qmax if args.qmax is not None else max(lengths + [1])
    for t in objects:
        if t is STAR:
            continue
        if any(x > N or x < 1 for x in t):
            raise TruncationError(f"{object_key(t)} has entries outside 1..{N}")
        if len(t) > q:
            raise TruncationError(f"{object_key(t)} is longer than q_max={q}")
    return build_gstar(N, q)


# subcommands


def cmd_hom(args) -> int:
    a, b = _tuple_arg(args.dom), _tuple_arg(args.cod)
    T = _gstar_for(args, a, b)
    ms = T.hom(a, b)
    data = {"dom": object_key(a), "cod": object_key(b), "nonzero": sum(not m.is_zero for m in ms),
            "morphisms": [T.morphism_json(m) for m in ms]}
    rows = [[k, object_key(a), object_key(b),
             "zero" if m.is_zero else " ".join(map(str, m.f.images)),
             "" if m.is_zero else ";".join(" ".join(map(str, T.base.label(p).values)) for p in m.psis)]
            for k, m in enumerate(ms)]
    _emit(args, data, rows, ["position", "dom", "cod", "injection", "components"])
    return 0


def cmd_smash(args) -> int:
    if args.cod is None:
        t = _tuple_arg(args.dom)
        n = smash_objects(t)
        sizes = () if t is STAR else t
        points = [] if t is STAR else [list(p) for p in lex_points(sizes)]
        data = {"object": object_key(t), "smash": n, "points": points}
        rows = [[k + 1, " ".join(map(str, p))] for k, p in enumerate(points)]
        _emit(args, data, rows, ["element", "point"])
        return 0
    a, b = _tuple_arg(args.dom), _tuple_arg(args.cod)
    T = _gstar_for(args, a, b)
    images = [collapse_functor(T, m) for m in T.hom(a, b)]
    data = {"dom": object_key(a), "cod": object_key(b),
            "images": [f.to_json() for f in images]}
    rows = [[k, " ".join(map(str, f.values))] for k, f in enumerate(images)]
    _emit(args, data, rows, ["position", "values"])
    return 0


def _tuple_category(args):
    q = 2 if args.qmax is None else args.qmax
    if args.base == "delta":
        return build_e(args.degree, q)
    return build_gstar(2 if args.trunc is None else args.trunc, q)


def _short_label(T, m: int) -> str:
    t = T.cat.label(m)
    if t.is_zero:
        return "0"
    comps = []
    for p in t.psis:
        lab = T.base.label(p)
        comps.append(" ".join(map(str, getattr(lab, "values", lab))))
    return f"[{' '.join(map(str, t.f.images))}] ({'; '.join(comps)})"


def cmd_tuplecat(args) -> int:
    T = _tuple_category(args)
    C = T.cat
    census = [{"dom": object_key(a), "cod": object_key(b), "nonzero": len(C.nonzero_hom(a, b))}
              for a in C.objects for b in C.objects]
    data = {"name": C.name, "objects": [object_key(a) for a in C.objects],
            "morphisms": C.n_morphisms, "hom_census": census}
    status = 0
    if args.validate:
        rep = validate_category(C)
        data["validation"] = rep.to_dict()
        status = 0 if rep.ok else 1
    rows = [[c["dom"], c["cod"], c["nonzero"]] for c in census]
    dot = to_dot(C, lambda m: _short_label(T, m)) if args.format == "dot" else None
    _emit(args, data, rows, ["dom", "cod", "nonzero"], dot)
    return status


def cmd_diagram(args) -> int:
    X = load_diagram(args.diagram)
    if args.action == "validate":
        rep = validate_diagram(X)
        _emit(args, rep.to_dict(), [[c.name, c.status] for c in rep.checks], ["check", "status"])
        return 0 if rep.ok else 1
    rep = validate_diagram(X)
    if not rep.ok:
        sys.stdout.write(dumps(rep.to_dict()))
        return 1
    if args.action == "precompose":
        src = load_json(args.diagram)["index"]
        if src.get("builtin") == "F" and args.along == "smash":
            T = build_gstar(2 if args.trunc is None else args.trunc, 2 if args.qmax is None else args.qmax)
            sm = smash_functor(T)
            if sm.cod.objects[-1] > X.index.objects[-1]:
                raise TruncationError(f"smash needs the diagram on F<={sm.cod.objects[-1]}")
            X = _rehome(X, sm.cod)
            Y = precompose(X, sm)
            spec = {"builtin": "G", "N": T.base.objects[-1], "q_max": T.q_max}
        elif src.get("builtin") == "G" and args.along == "i":
            T = build_gstar(int(src.get("N", 2)), int(src.get("q_max", 2)))
            X = _rehome(X, T.cat)
            Y = precompose(X, length_one_inclusion(T))
            spec = {"builtin": "F", "N": T.base.objects[-1]}
        else:
            raise UsageError("precompose supports F diagrams along 'smash' and G diagrams along 'i'")
        data = diagram_to_json(Y, spec)
        rows = [[k, v] for k, v in data["on_objects"].items()]
        _emit(args, data, rows, ["object", "size"])
        return 0
    # nerve
    if X.kind == SET:
        raise UsageError("the levelwise nerve needs a category-valued diagram")
    N = nerve_levelwise(X, args.degree)
    data = {"diagram": X.name, "degree": args.degree,
            "levels": [{object_key(c): lv.on_objects[c] for c in X.index.objects} for lv in N.levels]}
    rows = [[k, object_key(c), lv.on_objects[c]] for k, lv in enumerate(N.levels) for c in X.index.objects]
    _emit(args, data, rows, ["degree", "object", "nonbasepoint_simplices"])
    return 0


def _rehome(X, C: FinCategory):
    """The same diagram on an equal copy of its index category."""
    from .diagrams import PointedDiagram

    if X.index is C:
        return X
    if X.index.objects != C.objects:
        # restriction to a smaller truncation of F is allowed when the target is a full subcategory
        if not set(C.objects) <= set(X.index.objects):
            raise TruncationError(f"diagram on {X.index.name} cannot be read on {C.name}")
    maps = [X.on_morphisms[X.index.mid(C.dom(m), C.cod(m), C.label(m))] for m in C.morphisms()]
    return PointedDiagram(C, X.kind, {c: X.on_objects[c] for c in C.objects}, maps, name=X.name)


def cmd_lift(args) -> int:
    X = load_diagram(args.diagram)
    spec = load_json(args.diagram)["index"]
    if spec.get("builtin") != "F":
        raise UsageError("lift takes a diagram on F (index {'builtin': 'F'})")
    rep = validate_diagram(X)
    if not rep.ok:
        sys.stdout.write(dumps(rep.to_dict()))
        return 1
    t = _tuple_arg(args.at)
    N = X.index.objects[-1]
    if args.trunc is not None and args.trunc != N:
        raise UsageError(f"the diagram lives on F<={N}; --trunc must match")
    q = args.qmax if args.qmax is not None else max(1, 0 if t is STAR else len(t))
    T = build_gstar(N, q)
    if not T.contains(t):
        raise TruncationError(f"{object_key(t)} is not an object of {T.cat.name}")
    i = length_one_inclusion(T)
    X = _rehome(X, T.base)
    if args.all:
        kan = left_kan(X, i)
        data = {"diagram": X.name, "values": {object_key(s): kan.diagram.on_objects[s] for s in T.cat.objects}}
        rows = [[k, v] for k, v in data["values"].items()]
        _emit(args, data, rows, ["object", "size"])
        return 0
    L, pres = compute_L(X, i, t)
    reps = [{"n": n, "theta": T.morphism_json(T.cat.label(th)), "x": x} for (n, th, x) in pres.representatives]
    data = {"diagram": X.name, "at": object_key(t), "size": L.size, "elements": list(range(L.size + 1)),
            "representatives": reps, "generators": len(pres.generators)}
    rows = [[k + 1, r["n"], r["x"]] for k, r in enumerate(reps)]
    _emit(args, data, rows, ["element", "n", "x"])
    return 0


def _selected_suites(args) -> tuple[str, ...]:
    chosen = list(args.names) + list(args.suite or [])
    unknown = [s for s in chosen if s not in SUITES]
    if unknown:
        raise UsageError(f"unknown suite {unknown[0]!r}; choose from {', '.join(SUITES)}")
    return tuple(dict.fromkeys(chosen)) or SUITES


def _config(args) -> SuiteConfig:
    return SuiteConfig(
        N=2 if args.trunc is None else args.trunc,
        q_max=2 if args.qmax is None else args.qmax,
        d=args.degree, seed=args.seed, random_count=args.random_count, budget=args.budget,
        stability_margin=args.stability_margin,
        suites=_selected_suites(args),
    )


def cmd_check(args) -> int:
    if args.category:
        rep = validate_category(load_category(args.category))
        data = rep.to_dict()
        rows = [[c.name, c.status, c.detail] for c in rep.checks]
        _emit(args, data, rows, ["check", "status", "detail"])
        return 0 if rep.ok else 1
    try:
        cfg = _config(args)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = run_suite(cfg)
    data = report.to_dict(timing=args.timing)
    rows = [[c["name"], c["status"], c.get("detail", "")] for c in data["checks"]]
    _emit(args, data, rows, ["check", "status", "detail"])
    return report.exit_code


def _relative(args) -> RelativeCategory:
    name = args.fixture or args.cat
    if name == "F":
        C = fskel(2 if args.trunc is None else args.trunc)
    elif name in FIXTURE_CATEGORIES:
        C = FIXTURE_CATEGORIES[name]()
    else:
        C = load_category(name)
    try:
        weq = weq_predicate(C, args.weq)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return RelativeCategory(C, weq, name=f"{C.name}/{args.weq}")


def cmd_classify(args) -> int:
    R = _relative(args)
    d = args.degree
    if args.n is not None and args.k is not None:
        d = max(args.n, args.k)
    B = ClassificationDiagram(R, d)
    cells = [(n, k) for n in range(d + 1) for k in range(d + 1)]
    if args.n is not None or args.k is not None:
        cells = [(n, k) for n, k in cells
                 if (args.n is None or n == args.n) and (args.k is None or k == args.k)]
    if len(cells) == 1 and args.format == "json" and not args.verbose:
        n, k = cells[0]
        sys.stdout.write(f"{B.size(n, k)}\n")
        return 0
    data = {"relative_category": R.name, "levels": [{"n": n, "k": k, "size": B.size(n, k)} for n, k in cells],
            "statement": "set-level cardinalities"}
    _emit(args, data, [[n, k, B.size(n, k)] for n, k in cells], ["n", "k", "size"])
    return 0


def cmd_segal(args) -> int:
    if args.fixture == "boundary-of-triangle":
        B = boundary_of_triangle(max(args.n, args.degree))
        name = "boundary-of-triangle"
    else:
        R = _relative(args)
        B = ClassificationDiagram(R, max(args.n, args.k, 1))
        name = R.name
    rep = segal_map_check(B, args.n, args.k)
    data = {"bisimplicial": name, "statement": "strict (set-level) Segal bijectivity", **rep.to_dict()}
    _emit(args, data, [[c.name, c.status, c.detail] for c in rep.checks], ["check", "status", "detail"])
    return 0 if rep.ok else 1


def cmd_prism(args) -> int:
    from .category import identity_functor, identity_transformation

    if args.fixture == "constants":
        t = constants_transformation()
    else:
        C = FIXTURE_CATEGORIES[args.fixture]()
        t = identity_transformation(identity_functor(C))
    prism, rep = homotopy_from_transformation(t, args.degree)
    data = {"transformation": t.name, "degree": args.degree, **rep.to_dict(),
            "homotopy": {f"h{j}@{k}": arr.tolist() for (k, j), arr in sorted(prism.h.items())}}
    _emit(args, data, [[c.name, c.status] for c in rep.checks], ["check", "status"])
    return 0 if rep.ok else 1


def cmd_emit(args) -> int:
    if args.artifact == "hom-census":
        args.validate = False
        if args.base is None:
            args.base = "F"
        return cmd_tuplecat(args)
    if args.artifact == "L-values":
        if not args.diagram:
            raise UsageError("L-values needs --diagram")
        args.all = True
        args.at = "()"
        return cmd_lift(args)
    args.n = args.k = None
    args.verbose = True
    if not (args.fixture or args.cat):
        args.fixture = "walking-iso"
    return cmd_classify(args)


# parser


def _add_globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    def default(v):
        return argparse.SUPPRESS if suppress else v

    g = p.add_argument_group("global options")
    g.add_argument("--trunc", type=int, default=default(None), metavar="N",
                   help="truncation of F (sizes <= N)")
    g.add_argument("--qmax", type=int, default=default(None), metavar="Q", help="maximum tuple length")
    g.add_argument("--degree", type=int, default=default(3), metavar="D", help="simplicial degree bound")
    g.add_argument("--seed", type=int, default=default(0), metavar="S", help="seed for randomized checks")
    g.add_argument("--format", choices=FORMATS, default=default("json"))
    g.add_argument("--stability-margin", type=int, default=default(0), metavar="K",
                   help="also compare L at truncations N and N+K")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gstar", description=__doc__.splitlines()[0])
    _add_globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, fn):
        p = sub.add_parser(name, help=help_text)
        _add_globals(p, suppress=True)
        p.set_defaults(func=fn)
        return p

    p = add("hom", "enumerate a hom-set of G*", cmd_hom)
    p.add_argument("--from", dest="dom", required=True)
    p.add_argument("--to", dest="cod", required=True)

    p = add("smash", "smash an object, or every morphism of a hom-set", cmd_smash)
    p.add_argument("--from", "--object", dest="dom", required=True)
    p.add_argument("--to", dest="cod")

    p = add("tuplecat", "build a truncated tuple category and print its hom census", cmd_tuplecat)
    p.add_argument("--base", choices=("F", "delta"), default="F")
    p.add_argument("--validate", action="store_true")

    p = add("diagram", "validate, precompose, or take the levelwise nerve of a diagram", cmd_diagram)
    p.add_argument("action", choices=("validate", "precompose", "nerve"))
    p.add_argument("--diagram", required=True)
    p.add_argument("--along", choices=("smash", "i"), default="smash")

    p = add("lift", "evaluate the left adjoint L at an object of G*", cmd_lift)
    p.add_argument("--diagram", required=True)
    p.add_argument("--at", default="()")
    p.add_argument("--all", action="store_true", help="every object of the truncation")

    p = add("check", "run the check suite (or validate one category file)", cmd_check)
    p.add_argument("names", nargs="*", metavar="SUITE", help="suites to run (same as --suite)")
    p.add_argument("--suite", action="append", choices=SUITES)
    p.add_argument("--random-count", type=int, default=100)
    p.add_argument("--budget", type=int, default=10**5)
    p.add_argument("--category", help="validate this category JSON instead")
    p.add_argument("--timing", action="store_true", help="include wall-clock timing (not byte-stable)")

    for name, help_text, fn in (("classify", "classification-diagram level sizes", cmd_classify),
                                ("segal", "set-level Segal map check", cmd_segal)):
        p = add(name, help_text, fn)
        p.add_argument("--fixture", help=f"one of {', '.join(FIXTURE_CATEGORIES)}"
                       + (", boundary-of-triangle" if name == "segal" else ""))
        p.add_argument("--cat", help="'F', a fixture name, or a category JSON file")
        p.add_argument("--weq", default="all", help="all | identities | isos")
        p.add_argument("--n", type=int, default=None if name == "classify" else 2)
        p.add_argument("--k", type=int, default=None if name == "classify" else 0)
        if name == "classify":
            p.add_argument("--verbose", action="store_true", help="full record even for one level")

    p = add("prism", "simplicial homotopy from a natural transformation", cmd_prism)
    p.add_argument("--fixture", default="constants",
                   choices=["constants"] + list(FIXTURE_CATEGORIES),
                   help="'constants' (const0 => const1 into the walking arrow) or a category's identity")

    p = add("emit", "serialize an artifact", cmd_emit)
    p.add_argument("--artifact", choices=("hom-census", "L-values", "classification"), required=True)
    p.add_argument("--diagram")
    p.add_argument("--fixture")
    p.add_argument("--cat")
    p.add_argument("--weq", default="all")
    p.add_argument("--base", choices=("F", "delta"), default=None)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in ("classify", "segal") and not (args.fixture or args.cat):
        parser.error(f"{args.command} needs --fixture or --cat")
    try:
        return args.func(args)
    except (UsageError, TruncationError, ValueError, KeyError, FileNotFoundError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"gstar: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
