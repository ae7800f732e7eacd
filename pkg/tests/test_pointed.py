import pytest
from hypothesis import given
from hypothesis import strategies as st

from gstar.pointed import (
    PointedFinSet,
    PointedMap,
    compose_pointed,
    identity_map,
    is_zero_morphism,
    wedge,
    zero_map,
)


def pointed_maps(dom, cod):
    return st.lists(st.integers(0, cod), min_size=dom, max_size=dom).map(
        lambda vs: PointedMap(dom, cod, tuple(vs)))


def test_zero_morphism_examples():
    assert is_zero_morphism(PointedMap(2, 3, (0, 0)))
    assert not is_zero_morphism(PointedMap(2, 3, (0, 1)))
    # maps out of <0> are all zero
    assert is_zero_morphism(PointedMap(0, 5, ()))


def test_wedge_sizes_and_inclusions():
    total, (i1, i2) = wedge([PointedFinSet(2), PointedFinSet(3)])
    assert total == PointedFinSet(5)
    assert i1.values == (1, 2)
    assert i2.values == (3, 4, 5)
    assert wedge([]) == (PointedFinSet(0), [])


def test_swap_is_an_involution():
    swap = PointedMap(2, 2, (2, 1))
    assert compose_pointed(swap, swap) == identity_map(2)


def test_composition_rejects_mismatched_maps():
    with pytest.raises(ValueError):
        compose_pointed(PointedMap(2, 2, (1, 2)), PointedMap(1, 3, (3,)))


def test_values_are_checked():
    with pytest.raises(ValueError):
        PointedMap(2, 1, (1, 2))
    with pytest.raises(ValueError):
        PointedMap(2, 1, (1,))
    with pytest.raises(ValueError):
        PointedFinSet(-1)


def test_json_round_trip():
    f = PointedMap(3, 2, (0, 2, 1))
    assert PointedMap.from_json(f.to_json()) == f
    assert PointedFinSet.from_json(PointedFinSet(4).to_json()) == PointedFinSet(4)


@given(st.data())
def test_composition_is_associative_and_unital(data):
    n, m, k, l = (data.draw(st.integers(0, 3)) for _ in range(4))
    f = data.draw(pointed_maps(n, m))
    g = data.draw(pointed_maps(m, k))
    h = data.draw(pointed_maps(k, l))
    assert compose_pointed(h, compose_pointed(g, f)) == compose_pointed(compose_pointed(h, g), f)
    assert compose_pointed(identity_map(m), f) == f == compose_pointed(f, identity_map(n))
    assert is_zero_morphism(compose_pointed(zero_map(m, k), f))
