import pytest
from hypothesis import given
from hypothesis import strategies as st

from gstar.pointed import PointedMap, compose_pointed, identity_map
from gstar.skeletal import (
    STAR,
    Injection,
    TruncationError,
    TruncationParams,
    compose_injections,
    enum_fskel_hom,
    enum_injections,
    fskel,
    identity_injection,
    lex_index,
    reindex,
    smash_maps,
    smash_objects,
)


def test_fskel_hom_counts():
    assert len(enum_fskel_hom(2, 3)) == 16
    assert len(enum_fskel_hom(1, 1, nonzero_only=True)) == 1
    assert enum_fskel_hom(0, 4, nonzero_only=True) == []
    assert [f.values for f in enum_fskel_hom(1, 2)] == [(0,), (1,), (2,)]


def test_fskel_hom_respects_truncation():
    with pytest.raises(TruncationError):
        enum_fskel_hom(3, 1, N=2)


def test_fskel_category_shape():
    F = fskel(2)
    assert F.objects == (0, 1, 2)
    assert F.basepoint == 0
    assert F.n_morphisms == sum((m + 1) ** n for n in range(3) for m in range(3))


def test_smash_objects():
    assert smash_objects((2, 3)) == 6
    assert smash_objects(()) == 1
    assert smash_objects(STAR) == 0


def test_injection_counts():
    assert len(enum_injections(1, 2)) == 2
    assert enum_injections(2, 1) == []
    assert len(enum_injections(2, 3)) == 6
    assert [f.images for f in enum_injections(1, 2)] == [(1,), (2,)]


def test_injection_validation():
    with pytest.raises(ValueError):
        Injection(2, 3, (1, 1))
    with pytest.raises(ValueError):
        Injection(1, 2, (3,))


def test_reindex_fills_missed_positions():
    assert reindex(Injection(1, 2, (2,)), (3,)) == (1, 3)
    assert reindex(Injection(1, 2, (1,)), (3,), fill=0) == (3, 0)


def test_lex_convention():
    assert [lex_index(p, (2, 3)) for p in ((1, 1), (1, 3), (2, 1), (2, 3))] == [1, 3, 4, 6]


def test_smash_of_swap_is_the_transposition():
    swap = Injection(2, 2, (2, 1))
    one = identity_map(2)
    assert smash_maps(swap, [one, one], (2, 2), (2, 2)).values == (1, 3, 2, 4)


def test_smash_with_a_zero_component_is_zero():
    f = identity_injection(2)
    out = smash_maps(f, [PointedMap(2, 2, (0, 0)), identity_map(3)], (2, 3), (2, 3))
    assert out.values == (0,) * 6


def test_smash_rejects_mistyped_components():
    with pytest.raises(ValueError):
        smash_maps(identity_injection(1), [identity_map(2)], (3,), (3,))


def test_truncation_params():
    p = TruncationParams(N=2, q_max=1)
    p.check_size(2)
    with pytest.raises(TruncationError):
        p.check_size(3)
    with pytest.raises(TruncationError):
        p.check_length(2)
    with pytest.raises(ValueError):
        TruncationParams(N=-1)


@st.composite
def composable_tuple_maps(draw):
    """(f, psi): a -> b and (g, phi): b -> c with entries in 1..2."""
    q = draw(st.integers(0, 2))
    p = draw(st.integers(q, 3))
    r = draw(st.integers(p, 3))
    a = tuple(draw(st.integers(1, 2)) for _ in range(q))
    b = tuple(draw(st.integers(1, 2)) for _ in range(p))
    c = tuple(draw(st.integers(1, 2)) for _ in range(r))
    f = draw(st.sampled_from(enum_injections(q, p)))
    g = draw(st.sampled_from(enum_injections(p, r)))

    def comps(inj, src, tgt):
        pulled = reindex(inj, src)
        return [draw(st.lists(st.integers(0, t), min_size=s, max_size=s)
                     .map(lambda v, s=s, t=t: PointedMap(s, t, tuple(v))))
                for s, t in zip(pulled, tgt)]

    return a, b, c, f, comps(f, a, b), g, comps(g, b, c)


@given(composable_tuple_maps())
def test_smash_is_functorial(data):
    a, b, c, f, psis, g, phis = data
    gf = compose_injections(g, f)
    # components of the composite: phi_j o (g_* psi)_j, identity of <1> off the image of g
    moved = [identity_map(1)] * g.p
    for i, j in enumerate(g.images):
        moved[j - 1] = psis[i]
    composite = [compose_pointed(phi, m) for phi, m in zip(phis, moved)]
    lhs = smash_maps(gf, composite, a, c)
    rhs = compose_pointed(smash_maps(g, phis, b, c), smash_maps(f, psis, a, b))
    assert lhs == rhs


def test_compose_injections():
    f = Injection(1, 2, (2,))
    g = Injection(2, 3, (3, 1))
    assert compose_injections(g, f).images == (1,)
    assert compose_injections(identity_injection(2), f) == f
