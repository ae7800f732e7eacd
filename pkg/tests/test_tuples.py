import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gstar.category import compose_functors, identity_functor, is_fully_faithful, validate_category, validate_functor
from gstar.pointed import PointedMap, compose_pointed
from gstar.skeletal import STAR, Injection, TruncationError, fskel, identity_injection
from gstar.tuples import (
    TupleMorphism,
    build_e,
    build_gstar,
    collapse_functor,
    enum_tuple_hom,
    fskel_nonzero_count_formula,
    length_one_inclusion,
    nonzero_hom_count,
    oplus,
    smash_functor,
    zero_morphism,
)


@pytest.fixture(scope="module")
def G22():
    return build_gstar(2, 2)


@pytest.fixture(scope="module")
def G31():
    return build_gstar(3, 1)


def test_objects_of_small_truncation(G22):
    assert G22.cat.objects == (STAR, (), (1,), (2,), (1, 1), (1, 2), (2, 1), (2, 2))


def test_length_zero_truncation():
    T = build_gstar(2, 0)
    assert T.cat.objects == (STAR, ())
    assert [m.f for m in T.hom((), ())] == [identity_injection(0), None]
    assert validate_category(T.cat).ok
    with pytest.raises(TruncationError):
        length_one_inclusion(T)


def test_hom_from_length_one(G31):
    homs = enum_tuple_hom(G31, (2,), (3,))
    assert len(homs) == 16
    assert sum(not m.is_zero for m in homs) == 15
    assert homs[-1] == zero_morphism((2,), (3,))


def test_no_nonzero_maps_into_the_empty_tuple(G22):
    assert enum_tuple_hom(G22, (1,), ()) == [zero_morphism((1,), ())]


def test_no_nonzero_maps_collapsing_length(G22):
    for m, n in itertools.product((1, 2), repeat=2):
        if m * n <= 2:
            assert enum_tuple_hom(G22, (m, n), (m * n,), nonzero_only=True) == []


def test_hom_outside_truncation_raises(G22):
    with pytest.raises(TruncationError):
        G22.hom((3,), (1,))
    with pytest.raises(TruncationError):
        G22.hom((1, 1, 1), (1,))


def test_composition_units_and_zero(G22):
    G = G22.cat
    for a in G.objects:
        for b in G.objects:
            for m in G.hom(a, b):
                assert G.compose(G.identity(b), m) == m == G.compose(m, G.identity(a))
                assert G.is_zero(G.compose(G.zero(b, STAR), m))


def test_concrete_composite_agrees_with_smash(G22):
    F = G22.base
    # (1) -> (2): element 1 goes to 2; (2) -> (2,2): insert at position 2, unit at position 1
    f = TupleMorphism((1,), (2,), identity_injection(1), (F.mid(1, 2, PointedMap(1, 2, (2,))),))
    g = TupleMorphism((2,), (2, 2), Injection(1, 2, (2,)),
                      (F.mid(1, 2, PointedMap(1, 2, (1,))), F.mid(2, 2, PointedMap(2, 2, (2, 1)))))
    gf = G22.compose(g, f)
    assert gf.f == Injection(1, 2, (2,))
    assert [F.label(p).values for p in gf.psis] == [(1,), (1,)]
    smash = lambda m: collapse_functor(G22, m)
    assert smash(gf) == compose_pointed(smash(g), smash(f))
    # the point lands on (1, 1), the first point of <2> ^ <2>
    assert smash(gf).values == (1,)


def test_oplus_objects_and_truncation(G22):
    assert oplus(G22, (1,), (2,)) == (1, 2)
    assert oplus(G22, (), (2, 1)) == (2, 1)
    assert oplus(G22, STAR, (1,)) is STAR
    with pytest.raises(TruncationError):
        oplus(G22, (1, 1), (2,))


def test_oplus_of_morphisms(G22):
    G = G22.cat
    a, b = G.label(G.identity((1,))), G.label(G.identity((2,)))
    assert oplus(G22, a, b) == G.label(G.identity((1, 2)))
    z = G.label(G.zero((1,), (2,)))
    assert oplus(G22, z, b).is_zero


def test_smash_of_identities_and_i(G31):
    sm = smash_functor(G31, fskel(3))
    assert validate_functor(sm).ok
    for t in G31.cat.objects:
        assert sm.morphism_map[G31.cat.identity(t)] == sm.cod.identity(sm.object_map[t])
    i = length_one_inclusion(G31)
    both = compose_functors(sm, i)
    assert both.morphism_map == identity_functor(G31.base).morphism_map


def test_i_is_fully_faithful_and_zero_preserving(G22):
    i = length_one_inclusion(G22)
    assert validate_functor(i).ok
    assert is_fully_faithful(i).ok
    F = G22.base
    assert i.object_map[0] is STAR
    for m in F.morphisms():
        if F.is_zero(m):
            assert G22.cat.is_zero(i.morphism_map[m])


def test_count_formula_matches_enumeration(G22):
    for a in G22.cat.objects:
        for b in G22.cat.objects:
            n = len(G22.cat.nonzero_hom(a, b))
            assert n == nonzero_hom_count(G22, a, b)
            if STAR not in (a, b):
                assert n == fskel_nonzero_count_formula(a, b)


def test_count_formula_examples():
    # (1) -> (1,1): two injections, each with one map <1> -> <1> and one map <1> -> <1>
    assert fskel_nonzero_count_formula((1,), (1, 1)) == 2
    assert fskel_nonzero_count_formula((2,), (3,)) == 15
    assert fskel_nonzero_count_formula((1,), ()) == 0


def test_e_is_a_pointed_category():
    E = build_e(1, 2)
    assert validate_category(E.cat).ok
    assert E.cat.basepoint is STAR
    assert E.unit == 0


_G22 = build_gstar(2, 2)


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_composition_associative_on_random_triples(data):
    G = _G22.cat
    objs = list(G.objects)
    a, b, c, d = (data.draw(st.sampled_from(objs)) for _ in range(4))
    f = data.draw(st.sampled_from(G.hom(a, b)))
    g = data.draw(st.sampled_from(G.hom(b, c)))
    h = data.draw(st.sampled_from(G.hom(c, d)))
    assert G.compose(h, G.compose(g, f)) == G.compose(G.compose(h, g), f)
