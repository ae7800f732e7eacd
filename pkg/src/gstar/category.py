"""Finite categories presented by explicit tables, functors between them, and
natural transformations, each with an exhaustive validator."""

from __future__ import annotations

import itertools
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping, Sequence

import numpy as np

from .report import Report

Obj = Hashable
LabelCompose = Callable[[Obj, Obj, Obj, Any, Any], Any]


class MalformedCategory(ValueError):
    pass


def object_key(obj: Obj) -> str:
    if isinstance(obj, tuple):
        return "(" + ",".join(object_key(x) for x in obj) + ")"
    return str(obj)


class FinCategory:
    """A finite category with stable integer morphism ids.

    Ids are dense (``0 .. n_morphisms-1``) and ordered by (domain, codomain,
    position in the hom list), so enumeration order is reproducible.
    Composition is either a total table on ids or a label-level function
    whose results are memoized as they are requested.
    """

    def __init__(
        self,
        objects: Sequence[Obj],
        homs: Mapping[tuple[Obj, Obj], Sequence[Any]],
        identities: Mapping[Obj, Any],
        *,
        compose_table: Mapping[tuple[int, int], int] | None = None,
        compose_labels: LabelCompose | None = None,
        basepoint: Obj | None = None,
        name: str = "",
        ids_given: bool = False,
    ):
        self.objects = tuple(objects)
        self.name = name
        self.basepoint = basepoint
        self._index = {x: i for i, x in enumerate(self.objects)}
        if len(self._index) != len(self.objects):
            raise MalformedCategory("duplicate objects")
        if basepoint is not None and basepoint not in self._index:
            raise MalformedCategory(f"basepoint {basepoint!r} is not an object")

        self._dom: list[Obj] = []
        self._cod: list[Obj] = []
        self._label: list[Any] = []
        self._pos: list[int] = []
        self._hom: dict[tuple[Obj, Obj], tuple[int, ...]] = {}
        self._lookup: dict[tuple[Obj, Obj, Any], int] = {}

        if ids_given:
            # homs hold explicit ids; labels default to the ids themselves
            all_ids = sorted(m for ms in homs.values() for m in ms)
            if all_ids != list(range(len(all_ids))):
                raise MalformedCategory("morphism ids must be exactly 0..n-1, each in one hom-set")
            n = len(all_ids)
            self._dom = [None] * n
            self._cod = [None] * n
            self._label = list(range(n))
            self._pos = [0] * n
        for a in self.objects:
            for b in self.objects:
                entries = tuple(homs.get((a, b), ()))
                ids = []
                for p, entry in enumerate(entries):
                    if ids_given:
                        m = int(entry)
                        self._dom[m], self._cod[m], self._pos[m] = a, b, p
                    else:
                        m = len(self._label)
                        self._dom.append(a)
                        self._cod.append(b)
                        self._label.append(entry)
                        self._pos.append(p)
                    self._lookup[(a, b, self._label[m])] = m
                    ids.append(m)
                self._hom[(a, b)] = tuple(ids)
        extra = set(homs) - set(self._hom)
        if extra:
            raise MalformedCategory(f"hom-sets between non-objects: {sorted(map(str, extra))[:3]}")

        self._ident: dict[Obj, int | None] = {}
        for a in self.objects:
            if a not in identities:
                self._ident[a] = None
                continue
            e = identities[a]
            self._ident[a] = int(e) if ids_given else self._lookup.get((a, a, e))
        self._table: dict[tuple[int, int], int] = dict(compose_table or {})
        self._compose_labels = compose_labels
        self._zero: dict[tuple[Obj, Obj], int] = {}
        self.validated = False

    # construction helpers

    @classmethod
    def generate(
        cls,
        objects: Sequence[Obj],
        hom: Callable[[Obj, Obj], Iterable[Any]],
        compose: LabelCompose,
        identity: Callable[[Obj], Any],
        basepoint: Obj | None = None,
        name: str = "",
    ) -> FinCategory:
        homs = {(a, b): list(hom(a, b)) for a in objects for b in objects}
        idents = {a: identity(a) for a in objects}
        return cls(objects, homs, idents, compose_labels=compose, basepoint=basepoint, name=name)

    @classmethod
    def from_tables(
        cls,
        objects: Sequence[Obj],
        homs: Mapping[tuple[Obj, Obj], Sequence[int]],
        compose: Mapping[tuple[int, int], int],
        identities: Mapping[Obj, int],
        basepoint: Obj | None = None,
        labels: Mapping[int, Any] | None = None,
        name: str = "",
    ) -> FinCategory:
        cat = cls(objects, homs, identities, compose_table=compose, basepoint=basepoint,
                  name=name, ids_given=True)
        if labels:
            for m, lab in labels.items():
                m = int(m)
                cat._label[m] = lab
                cat._lookup[(cat._dom[m], cat._cod[m], lab)] = m
        return cat

    # queries

    @property
    def n_morphisms(self) -> int:
        return len(self._label)

    def morphisms(self) -> range:
        return range(len(self._label))

    def has_object(self, a: Obj) -> bool:
        return a in self._index

    def index(self, a: Obj) -> int:
        return self._index[a]

    def hom(self, a: Obj, b: Obj) -> tuple[int, ...]:
        try:
            return self._hom[(a, b)]
        except KeyError:
            raise KeyError(f"{a!r} or {b!r} is not an object of {self.name or 'category'}") from None

    def dom(self, m: int) -> Obj:
        return self._dom[m]

    def cod(self, m: int) -> Obj:
        return self._cod[m]

    def label(self, m: int) -> Any:
        return self._label[m]

    def position(self, m: int) -> int:
        return self._pos[m]

    def mid(self, a: Obj, b: Obj, label: Any) -> int:
        return self._lookup[(a, b, label)]

    def identity(self, a: Obj) -> int:
        m = self._ident.get(a)
        if m is None:
            raise MalformedCategory(f"no identity for {a!r}")
        return m

    def is_identity(self, m: int) -> bool:
        return self._ident.get(self._dom[m]) == m

    def compose(self, g: int, f: int) -> int:
        """``g o f``."""
        key = (g, f)
        h = self._table.get(key)
        if h is not None:
            return h
        if self._cod[f] != self._dom[g]:
            raise ValueError(f"morphisms {g} after {f} are not composable")
        if self._compose_labels is None:
            raise MalformedCategory(f"composition table has no entry for {key}")
        a, b, c = self._dom[f], self._cod[f], self._cod[g]
        lab = self._compose_labels(a, b, c, self._label[g], self._label[f])
        try:
            h = self._lookup[(a, c, lab)]
        except KeyError:
            raise MalformedCategory(f"composite {lab!r} of {g} and {f} is not in hom({a!r}, {c!r})") from None
        self._table[key] = h
        return h

    def compose_path(self, *ms: int) -> int:
        """Compose right to left: ``compose_path(h, g, f) = h o g o f``."""
        out = ms[-1]
        for m in reversed(ms[:-1]):
            out = self.compose(m, out)
        return out

    def composable_pairs(self) -> Iterator[tuple[int, int]]:
        for a in self.objects:
            for b in self.objects:
                fs = self._hom[(a, b)]
                if not fs:
                    continue
                for c in self.objects:
                    for g in self._hom[(b, c)]:
                        for f in fs:
                            yield g, f

    # pointed structure

    def zero(self, a: Obj, b: Obj) -> int:
        """The morphism ``a -> * -> b``."""
        key = (a, b)
        z = self._zero.get(key)
        if z is None:
            star = self.basepoint
            if star is None:
                raise MalformedCategory("category has no basepoint")
            to_star = self._hom[(a, star)]
            from_star = self._hom[(star, b)]
            if len(to_star) != 1 or len(from_star) != 1:
                raise MalformedCategory("basepoint is not a zero object")
            z = self.compose(from_star[0], to_star[0])
            self._zero[key] = z
        return z

    def is_zero(self, m: int) -> bool:
        return self.zero(self._dom[m], self._cod[m]) == m

    def nonzero_hom(self, a: Obj, b: Obj) -> tuple[int, ...]:
        z = self.zero(a, b)
        return tuple(m for m in self._hom[(a, b)] if m != z)

    def __repr__(self) -> str:
        return f"FinCategory({self.name or '?'}: {len(self.objects)} objects, {self.n_morphisms} morphisms)"

    # serialization

    def composition_table(self) -> dict[tuple[int, int], int]:
        return {(g, f): self.compose(g, f) for g, f in self.composable_pairs()}

    def to_json(self, label_json: Callable[[Any], Any] | None = None) -> dict:
        key = object_key
        out = {
            "name": self.name,
            "objects": [key(a) for a in self.objects],
            "homs": {f"{key(a)}|{key(b)}": list(ms) for (a, b), ms in self._hom.items() if ms},
            "compose": {f"{g}|{f}": h for (g, f), h in sorted(self.composition_table().items())},
            "identities": {key(a): m for a, m in self._ident.items() if m is not None},
            "basepoint": None if self.basepoint is None else key(self.basepoint),
        }
        if label_json is not None:
            out["labels"] = {str(m): label_json(self._label[m]) for m in self.morphisms()}
        return out

    @classmethod
    def from_json(cls, data: Mapping, parse: Callable[[str], Obj] = lambda s: s) -> FinCategory:
        objects = [parse(o) for o in data["objects"]]
        homs = {}
        for k, ms in data.get("homs", {}).items():
            a, b = k.split("|")
            homs[(parse(a), parse(b))] = [int(m) for m in ms]
        compose = {}
        for k, h in data.get("compose", {}).items():
            g, f = k.split("|")
            compose[(int(g), int(f))] = int(h)
        idents = {parse(a): int(m) for a, m in data.get("identities", {}).items()}
        bp = data.get("basepoint")
        labels = {int(m): lab for m, lab in data.get("labels", {}).items()}
        return cls.from_tables(objects, homs, compose, idents,
                               basepoint=None if bp is None else parse(bp),
                               labels=labels, name=data.get("name", ""))


# validation


def validate_category(c: FinCategory) -> Report:
    """Exhaustive axiom check: tables, units, associativity, zero basepoint."""
    report = Report(f"category {c.name}".strip())
    objs = c.objects

    # tables
    missing_ids = [a for a in objs if c._ident.get(a) is None]
    bad_ids = [a for a in objs if c._ident.get(a) is not None
               and (c.dom(c._ident[a]), c.cod(c._ident[a])) != (a, a)]
    report.add("identities-present", not missing_ids and not bad_ids,
               witness={"missing": missing_ids, "wrong-hom": bad_ids})
    table_fault = None
    for g, f in c.composable_pairs():
        try:
            h = c.compose(g, f)
        except MalformedCategory as exc:
            table_fault = {"pair": (g, f), "error": str(exc)}
            break
        if not (0 <= h < c.n_morphisms) or (c.dom(h), c.cod(h)) != (c.dom(f), c.cod(g)):
            table_fault = {"pair": (g, f), "composite": h, "error": "composite in wrong hom-set"}
            break
    report.add("composition-total", table_fault is None, witness=table_fault)
    if table_fault is not None or missing_ids or bad_ids:
        report.skip("unitality", "tables malformed")
        report.skip("associativity", "tables malformed")
    else:
        unit_fault = None
        for m in c.morphisms():
            if c.compose(c.identity(c.cod(m)), m) != m or c.compose(m, c.identity(c.dom(m))) != m:
                unit_fault = {"morphism": m}
                break
        report.add("unitality", unit_fault is None, witness=unit_fault)
        fault, count = _associativity(c)
        report.add("associativity", fault is None, witness=fault, detail=f"{count} triples")

    if c.basepoint is not None:
        star = c.basepoint
        bad = [a for a in objs if len(c.hom(star, a)) != 1 or len(c.hom(a, star)) != 1]
        report.add("basepoint-zero-object", not bad, witness={"objects": bad[:5]})
    c.validated = report.ok
    return report


def _triple_tables(c: FinCategory) -> tuple[dict, np.ndarray]:
    pos = np.array(c._pos, dtype=np.int64)
    tables = {}
    for a in c.objects:
        for b in c.objects:
            fs = c.hom(a, b)
            if not fs:
                continue
            for d in c.objects:
                gs = c.hom(b, d)
                if not gs:
                    continue
                t = np.empty((len(gs), len(fs)), dtype=np.int64)
                for i, g in enumerate(gs):
                    for j, f in enumerate(fs):
                        t[i, j] = c.compose(g, f)
                tables[(a, b, d)] = t
    return tables, pos


def _associativity(c: FinCategory) -> tuple[dict | None, int]:
    tables, pos = _triple_tables(c)
    count = 0
    for (a, b, cc), t_abc in tables.items():
        pos_abc = pos[t_abc]
        for d in c.objects:
            t_bcd = tables.get((b, cc, d))
            if t_bcd is None:
                continue
            t_abd = tables[(a, b, d)]
            t_acd = tables[(a, cc, d)]
            left = t_abd[pos[t_bcd]]  # ((h g) f)
            right = t_acd[np.arange(t_bcd.shape[0])[:, None, None], pos_abc[None, :, :]]
            count += left.size
            bad = np.argwhere(left != right)
            if len(bad):
                i, j, k = bad[0]
                h, g, f = c.hom(cc, d)[i], c.hom(b, cc)[j], c.hom(a, b)[k]
                return {"h": h, "g": g, "f": f, "(hg)f": int(left[i, j, k]),
                        "h(gf)": int(right[i, j, k])}, count
    return None, count


def require_valid(c: FinCategory) -> FinCategory:
    if not c.validated:
        report = validate_category(c)
        if not report.ok:
            raise MalformedCategory(str(report))
    return c


def subcategory(c: FinCategory, keep: Callable[[int], bool], name: str = "") -> FinCategory:
    """Wide subcategory on the morphisms satisfying ``keep``; labels are the parent ids."""
    homs = {(a, b): [m for m in c.hom(a, b) if keep(m)] for a in c.objects for b in c.objects}
    idents = {a: c.identity(a) for a in c.objects}

    def compose(a, b, cc, g, f):
        return c.compose(g, f)

    return FinCategory(c.objects, homs, idents, compose_labels=compose, name=name or f"sub({c.name})")


def generating_morphisms(c: FinCategory) -> list[int]:
    """Non-identity morphisms that are not composites of two non-identities."""
    decomposable = set()
    for g, f in c.composable_pairs():
        if not c.is_identity(g) and not c.is_identity(f):
            decomposable.add(c.compose(g, f))
    return [m for m in c.morphisms() if not c.is_identity(m) and m not in decomposable]


def to_dot(c: FinCategory, label: Callable[[int], str] | None = None) -> str:
    """Objects and generating nonzero morphisms.  With nontrivial idempotents
    everything factors, so every nonzero non-identity morphism is drawn instead."""
    label = label or (lambda m: str(c.label(m)))
    lines = [f'digraph "{c.name or "category"}" {{']
    for a in c.objects:
        lines.append(f'  "{object_key(a)}";')

    def nonzero(m):
        return c.basepoint is None or not c.is_zero(m)

    edges = [m for m in generating_morphisms(c) if nonzero(m)]
    if not edges:
        edges = [m for m in c.morphisms() if not c.is_identity(m) and nonzero(m)]
    for m in edges:
        lines.append(f'  "{object_key(c.dom(m))}" -> "{object_key(c.cod(m))}" [label="{label(m)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# functors


class PointedFunctor:
    """A functor given by an object table and a morphism-id table.

    Basepoint preservation is part of validation whenever the domain
    declares a basepoint.
    """

    def __init__(self, dom: FinCategory, cod: FinCategory, object_map: Mapping[Obj, Obj],
                 morphism_map: Sequence[int] | Mapping[int, int], name: str = ""):
        self.dom = dom
        self.cod = cod
        self.object_map = dict(object_map)
        if isinstance(morphism_map, Mapping):
            morphism_map = [morphism_map.get(m) for m in dom.morphisms()]
        self.morphism_map = list(morphism_map)
        self.name = name

    def on_object(self, a: Obj) -> Obj:
        return self.object_map[a]

    def on_morphism(self, m: int) -> int:
        return self.morphism_map[m]

    def __repr__(self) -> str:
        return f"PointedFunctor({self.name or '?'}: {self.dom.name} -> {self.cod.name})"

    @classmethod
    def from_labels(cls, dom: FinCategory, cod: FinCategory, on_object: Callable[[Obj], Obj],
                    on_label: Callable[[Obj, Obj, Any], Any], name: str = "") -> PointedFunctor:
        """Build from label-level rules; ``on_label(a, b, label)`` gives the image label."""
        omap = {a: on_object(a) for a in dom.objects}
        mmap = []
        for m in dom.morphisms():
            a, b = dom.dom(m), dom.cod(m)
            mmap.append(cod.mid(omap[a], omap[b], on_label(a, b, dom.label(m))))
        return cls(dom, cod, omap, mmap, name)


def identity_functor(c: FinCategory) -> PointedFunctor:
    return PointedFunctor(c, c, {a: a for a in c.objects}, list(c.morphisms()), name=f"1_{c.name}")


def compose_functors(g: PointedFunctor, f: PointedFunctor) -> PointedFunctor:
    if f.cod is not g.dom:
        raise ValueError("functors are not composable")
    omap = {a: g.object_map[b] for a, b in f.object_map.items()}
    mmap = [g.morphism_map[m] for m in f.morphism_map]
    return PointedFunctor(f.dom, g.cod, omap, mmap, name=f"{g.name}.{f.name}")


def validate_functor(F: PointedFunctor) -> Report:
    C, D = F.dom, F.cod
    report = Report(f"functor {F.name}".strip())
    missing = [a for a in C.objects if a not in F.object_map or not D.has_object(F.object_map[a])]
    missing_m = [m for m in C.morphisms() if F.morphism_map[m] is None]
    report.add("tables-total", not missing and not missing_m,
               witness={"objects": missing[:5], "morphisms": missing_m[:5]})
    if missing or missing_m:
        return report
    fault = None
    for m in C.morphisms():
        fm = F.morphism_map[m]
        if (D.dom(fm), D.cod(fm)) != (F.object_map[C.dom(m)], F.object_map[C.cod(m)]):
            fault = {"morphism": m, "image": fm}
            break
    report.add("dom-cod", fault is None, witness=fault)
    fault = next((a for a in C.objects if F.morphism_map[C.identity(a)] != D.identity(F.object_map[a])), None)
    report.add("preserves-identities", fault is None, witness={"object": fault})
    fault = None
    for g, f in C.composable_pairs():
        if F.morphism_map[C.compose(g, f)] != D.compose(F.morphism_map[g], F.morphism_map[f]):
            fault = {"g": g, "f": f}
            break
    report.add("preserves-composition", fault is None, witness=fault)
    if C.basepoint is not None:
        report.add("preserves-basepoint", F.object_map[C.basepoint] == D.basepoint,
                   witness={"image": F.object_map[C.basepoint]})
    return report


def is_fully_faithful(F: PointedFunctor) -> Report:
    C, D = F.dom, F.cod
    report = Report(f"fully-faithful {F.name}".strip())
    fault = None
    for a in C.objects:
        for b in C.objects:
            image = [F.morphism_map[m] for m in C.hom(a, b)]
            target = D.hom(F.object_map[a], F.object_map[b])
            if len(set(image)) != len(image) or set(image) != set(target):
                fault = {"dom": object_key(a), "cod": object_key(b),
                         "source_size": len(image), "target_size": len(target),
                         "image_size": len(set(image))}
                break
        if fault:
            break
    report.add("hom-bijections", fault is None, witness=fault)
    return report


# natural transformations


class NatTransformation:
    def __init__(self, source: PointedFunctor, target: PointedFunctor, components: Mapping[Obj, int],
                 name: str = ""):
        if source.dom is not target.dom or source.cod is not target.cod:
            raise ValueError("source and target functors must share domain and codomain")
        self.source = source
        self.target = target
        self.components = dict(components)
        self.name = name

    def __getitem__(self, a: Obj) -> int:
        return self.components[a]


def check_natural(t: NatTransformation) -> Report:
    F, G = t.source, t.target
    C, D = F.dom, F.cod
    missing = [a for a in C.objects if a not in t.components]
    if missing:
        raise KeyError(f"transformation has no component at {missing[0]!r}")
    report = Report(f"naturality {t.name}".strip())
    fault = None
    for a in C.objects:
        comp = t.components[a]
        if (D.dom(comp), D.cod(comp)) != (F.object_map[a], G.object_map[a]):
            fault = {"object": object_key(a), "component": comp}
            break
    report.add("component-types", fault is None, witness=fault)
    if fault:
        return report
    for m in C.morphisms():
        a, b = C.dom(m), C.cod(m)
        lhs = D.compose(G.morphism_map[m], t.components[a])
        rhs = D.compose(t.components[b], F.morphism_map[m])
        if lhs != rhs:
            fault = {"morphism": m, "dom": object_key(a), "cod": object_key(b),
                     "G(m)t_a": lhs, "t_b F(m)": rhs}
            break
    report.add("squares", fault is None, witness=fault)
    return report


def whisker_right(t: NatTransformation, H: PointedFunctor) -> NatTransformation:
    """``t H``: precompose with H."""
    return NatTransformation(compose_functors(t.source, H), compose_functors(t.target, H),
                             {b: t.components[H.object_map[b]] for b in H.dom.objects},
                             name=f"{t.name}.{H.name}")


def whisker_left(K: PointedFunctor, t: NatTransformation) -> NatTransformation:
    """``K t``: postcompose with K."""
    return NatTransformation(compose_functors(K, t.source), compose_functors(K, t.target),
                             {a: K.morphism_map[m] for a, m in t.components.items()},
                             name=f"{K.name}.{t.name}")


def identity_transformation(F: PointedFunctor) -> NatTransformation:
    return NatTransformation(F, F, {a: F.cod.identity(F.object_map[a]) for a in F.dom.objects},
                             name=f"1_{F.name}")


def all_functors_by_objects(C: FinCategory, D: FinCategory) -> Iterator[PointedFunctor]:
    """Every functor C -> D, by brute force (tiny categories only)."""
    for objs in itertools.product(D.objects, repeat=len(C.objects)):
        omap = dict(zip(C.objects, objs))
        choices = [D.hom(omap[C.dom(m)], omap[C.cod(m)]) for m in C.morphisms()]
        for mmap in itertools.product(*choices):
            F = PointedFunctor(C, D, omap, list(mmap))
            if validate_functor(F).ok:
                yield F
