import pytest

from gstar.category import (
    FinCategory,
    MalformedCategory,
    NatTransformation,
    PointedFunctor,
    all_functors_by_objects,
    check_natural,
    compose_functors,
    identity_functor,
    identity_transformation,
    is_fully_faithful,
    subcategory,
    to_dot,
    validate_category,
    validate_functor,
    whisker_left,
    whisker_right,
)
from gstar.relative import composable_pair, walking_arrow, walking_iso
from gstar.serialize import load_category, parse_object
from gstar.skeletal import fskel


def statuses(report):
    return {c.name: c.status for c in report.checks}


def test_broken_composition_table_fails_associativity():
    C = load_category("broken-composition.json")
    rep = validate_category(C)
    assert statuses(rep)["associativity"] == "fail"
    witness = next(c.witness for c in rep.checks if c.name == "associativity")
    assert witness is not None


def test_fskel_passes_all_axioms():
    rep = validate_category(fskel(2))
    assert rep.ok
    assert statuses(rep)["basepoint-zero-object"] == "pass"


def test_corrupted_table_is_caught():
    F2 = fskel(2)
    data = F2.to_json()
    # point one composite at another morphism of the same hom-set
    for key, h in data["compose"].items():
        g, f = map(int, key.split("|"))
        options = [m for m in F2.hom(F2.dom(f), F2.cod(g)) if m != h]
        if options and not (F2.is_identity(g) or F2.is_identity(f)):
            data["compose"][key] = options[0]
            break
    rep = validate_category(FinCategory.from_json(data, parse_object))
    assert not rep.ok


def test_incomplete_table_reports_composition_fault():
    data = walking_arrow().to_json()
    data["compose"].pop(next(iter(data["compose"])))
    rep = validate_category(FinCategory.from_json(data, parse_object))
    assert statuses(rep)["composition-total"] == "fail"
    assert statuses(rep)["associativity"] == "skipped"


def test_json_round_trip_preserves_tables():
    C = composable_pair()
    D = FinCategory.from_json(C.to_json(), parse_object)
    assert D.objects == C.objects
    assert D.composition_table() == C.composition_table()
    assert validate_category(D).ok


def test_duplicate_objects_rejected():
    with pytest.raises(MalformedCategory):
        FinCategory(["a", "a"], {}, {})


def test_identity_naturality():
    F = identity_functor(walking_iso())
    assert check_natural(identity_transformation(F)).ok


def test_unnatural_components_have_a_witness():
    A = walking_arrow()
    F = identity_functor(A)
    G = PointedFunctor(A, A, {0: 1, 1: 1}, [A.identity(1)] * 3)
    a = A.mid(0, 1, "a")
    assert check_natural(NatTransformation(F, G, {0: a, 1: A.identity(1)})).ok
    # a is not an endomorphism of 0, so it cannot be a component of 1 => 1
    rep = check_natural(NatTransformation(F, F, {0: a, 1: A.identity(1)}))
    assert not rep.ok
    assert rep.failures[0].witness["object"] == "0"


def test_whiskering_preserves_naturality():
    A = walking_arrow()
    G = PointedFunctor(A, A, {0: 1, 1: 1}, [A.identity(1)] * 3, name="c1")
    t = NatTransformation(identity_functor(A), G, {0: A.mid(0, 1, "a"), 1: A.identity(1)})
    assert check_natural(t).ok
    K = identity_functor(A)
    assert check_natural(whisker_left(K, t)).ok
    assert check_natural(whisker_right(t, G)).ok


def test_functor_enumeration_counts():
    # functors [1] -> [1] are the three monotone maps
    A = walking_arrow()
    assert len(list(all_functors_by_objects(A, A))) == 3


def test_functor_checks():
    A, I = walking_arrow(), walking_iso()
    incl = PointedFunctor(A, I, {0: 0, 1: 1}, [I.identity(0), I.mid(0, 1, "a"), I.identity(1)])
    assert validate_functor(incl).ok
    assert not is_fully_faithful(incl).ok
    assert is_fully_faithful(identity_functor(I)).ok
    both = compose_functors(identity_functor(I), incl)
    assert both.morphism_map == incl.morphism_map


def test_subcategory_and_dot():
    I = walking_iso()
    W = subcategory(I, I.is_identity)
    assert W.n_morphisms == 2
    assert validate_category(W).ok
    dot = to_dot(I)
    assert dot.startswith("digraph")
