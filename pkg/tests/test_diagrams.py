import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gstar.category import compose_functors, identity_functor
from gstar.diagrams import (
    BudgetExceeded,
    DiagramMap,
    PointedDiagram,
    SET,
    check_diagram_map,
    check_levelwise_nerve,
    compose_diagram_maps,
    diagrams_equal,
    enum_diagram_maps,
    enum_diagram_maps_brute,
    identity_diagram_map,
    nerve_levelwise,
    precompose,
    random_diagram,
    representable,
    terminal_diagram,
    validate_diagram,
    wedge_diagram,
)
from gstar.pointed import PointedMap, identity_map
from gstar.relative import walking_arrow, walking_iso
from gstar.serialize import load_diagram
from gstar.simplicial import Nerve, check_simplicial_identities
from gstar.skeletal import fskel
from gstar.tuples import build_gstar, length_one_inclusion, smash_functor

F2 = fskel(2)
T12 = build_gstar(1, 2)


def test_terminal_and_representables_are_valid():
    assert validate_diagram(terminal_diagram(F2)).ok
    for n in F2.objects:
        X = representable(F2, n)
        assert validate_diagram(X).ok
        assert X.on_objects == {m: len(F2.nonzero_hom(n, m)) for m in F2.objects}


def test_broken_composite_names_the_pair():
    F1 = fskel(1)
    maps = []
    for m in F1.morphisms():
        a, b = F1.dom(m), F1.cod(m)
        # send the zero endomorphism of <1> to the identity
        maps.append(identity_map(1) if (a, b) == (1, 1) else PointedMap(a, b, (0,) * a))
    X = PointedDiagram(F1, SET, {0: 0, 1: 1}, maps, name="bad")
    rep = validate_diagram(X)
    fault = next(c for c in rep.checks if c.name == "preserves-composition")
    assert fault.status == "fail"
    g, f = fault.witness["g"], fault.witness["f"]
    assert F1.compose(g, f) == fault.witness["composite"]


def test_restriction_along_smash_then_i_is_identity():
    sm = smash_functor(T12, fskel(1))
    i = length_one_inclusion(T12)
    X = random_diagram(sm.cod, random.Random(3))
    back = precompose(precompose(X, sm), i)
    assert back.on_objects == X.on_objects
    assert back.on_morphisms == X.on_morphisms


def test_precompose_along_identity_and_composites():
    X = random_diagram(F2, random.Random(7))
    same = precompose(X, identity_functor(F2))
    assert same.on_morphisms == X.on_morphisms
    T = build_gstar(2, 2)
    sm = smash_functor(T)
    i = length_one_inclusion(T)
    Y = random_diagram(sm.cod, random.Random(1))
    lhs = precompose(Y, compose_functors(sm, i))
    rhs = precompose(precompose(Y, sm), i)
    assert lhs.on_morphisms == rhs.on_morphisms


def test_precompose_rejects_mismatched_index():
    with pytest.raises(ValueError):
        precompose(terminal_diagram(fskel(1)), identity_functor(F2))


@pytest.mark.parametrize("c", [1, 2])
def test_yoneda_count(c):
    # pointed maps hom(c, -) -> X are the elements of Xc, basepoint included
    for seed in range(5):
        X = random_diagram(F2, random.Random(seed))
        assert len(enum_diagram_maps(representable(F2, c), X)) == X.on_objects[c] + 1


def test_maps_to_and_from_terminal():
    X = random_diagram(F2, random.Random(2))
    Z = terminal_diagram(F2)
    assert len(enum_diagram_maps(X, Z)) == 1
    assert len(enum_diagram_maps(Z, X)) == 1


def test_enumeration_agrees_with_brute_force():
    F1 = fskel(1)
    diagrams = [representable(F1, 1), terminal_diagram(F1),
                wedge_diagram([representable(F1, 1)] * 2)]
    diagrams += [random_diagram(F1, random.Random(s)) for s in range(4)]
    for X in diagrams:
        for Y in diagrams:
            fast = [f.key() for f in enum_diagram_maps(X, Y)]
            slow = sorted(f.key() for f in enum_diagram_maps_brute(X, Y))
            assert fast == slow
            assert all(check_diagram_map(f).ok for f in enum_diagram_maps(X, Y))


def test_enumeration_budget():
    X = wedge_diagram([representable(F2, 2)] * 2)
    with pytest.raises(BudgetExceeded):
        enum_diagram_maps(X, X, budget=3)


def test_diagram_map_composition():
    X = representable(F2, 1)
    Y = wedge_diagram([X, X])
    maps = enum_diagram_maps(X, Y)
    for f in maps:
        assert compose_diagram_maps(identity_diagram_map(Y), f).key() == f.key()
        assert compose_diagram_maps(f, identity_diagram_map(X)).key() == f.key()


def test_unnatural_map_is_caught():
    X = representable(F2, 1)
    # swap the two elements at <2> while fixing <1>: not natural
    comps = {0: PointedMap(0, 0, ()), 1: identity_map(1), 2: PointedMap(2, 2, (2, 1))}
    rep = check_diagram_map(DiagramMap(X, X, comps))
    assert not rep.ok


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_random_diagrams_are_valid(seed):
    assert validate_diagram(random_diagram(F2, random.Random(seed))).ok


def test_random_diagrams_on_gstar_are_valid():
    G = build_gstar(2, 2).cat
    for seed in range(10):
        assert validate_diagram(random_diagram(G, random.Random(seed))).ok


def test_nerve_of_walking_arrow():
    N = Nerve(walking_arrow(), 3)
    assert [N.size(k) for k in range(4)] == [2, 3, 4, 5]
    assert check_simplicial_identities(N).ok
    assert check_simplicial_identities(Nerve(walking_iso(), 3)).ok


def test_levelwise_nerve_of_arrow_gamma():
    X = load_diagram("arrow-gamma.json")
    N = nerve_levelwise(X, 3)
    # basepoint removed: the simplices of the walking arrow minus the one at 0
    assert [N.levels[k].on_objects[1] for k in range(4)] == [1, 2, 3, 4]
    assert all(N.levels[k].on_objects[0] == 0 for k in range(4))
    assert check_levelwise_nerve(N).ok


def test_levelwise_nerve_commutes_with_precomposition():
    X = load_diagram("arrow-gamma.json")
    F1 = X.index
    sm = smash_functor(T12, F1)
    # re-home onto the smash functor's copy of F<=1
    Xs = PointedDiagram(sm.cod, X.kind, X.on_objects, X.on_morphisms, name=X.name)
    lhs = nerve_levelwise(precompose(Xs, sm), 2)
    rhs = nerve_levelwise(Xs, 2)
    for k in range(3):
        restricted = precompose(rhs.levels[k], sm)
        assert diagrams_equal(lhs.levels[k], restricted)


def test_nerve_needs_category_values():
    with pytest.raises(ValueError):
        nerve_levelwise(terminal_diagram(F2))
