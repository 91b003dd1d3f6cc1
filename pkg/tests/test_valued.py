from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vhtriples.errors import BadLevel, BadWeight, RamificationMismatch, WindowTooSmall, ZeroInverse
from vhtriples.exactnum import INF, PolyQuot, RingHom, ZpQuot
from vhtriples.valued import (
    VH,
    ZERO,
    Ball,
    EqualChar,
    MixedUnram,
    VHElem,
    ball_contains,
    ball_equal,
    ball_enumerate,
    lift_sum,
    vh_compose,
    vh_distance,
    vh_embedding_morphism,
    vh_identity,
    vh_inv,
    vh_morphism_lemmas,
    vh_mul,
    vh_multisum,
    vh_neg,
    vh_rescale,
    vh_sum,
    vh_theta_rho,
    vh_verify_axioms,
    vh_verify_morphism,
)

Q2 = VH(MixedUnram(2), 2)


def E(H, v, u):
    return H.elem(v, u)


# -- frozen examples ---------------------------------------------------------


def test_q2_sums():
    x, y = E(Q2, 0, 1), E(Q2, 0, 3)
    B = vh_sum(Q2, x, x)
    assert ball_enumerate(Q2, B, 3) == {E(Q2, 1, 1), E(Q2, 1, 3)}
    B0 = vh_sum(Q2, x, y)
    assert B0.center == ZERO and B0.radius_exp == 2
    assert ball_enumerate(Q2, B0, 3) == {ZERO, E(Q2, 2, 1), E(Q2, 2, 3), E(Q2, 3, 1), E(Q2, 3, 3)}


def test_q2_products_and_inverses():
    assert vh_mul(Q2, E(Q2, 0, 3), E(Q2, 1, 3)) == E(Q2, 1, 1)
    assert vh_inv(Q2, E(Q2, 2, 3)) == E(Q2, -2, 3)
    assert vh_neg(Q2, E(Q2, 0, 1)) == E(Q2, 0, 3)
    with pytest.raises(ZeroInverse):
        vh_inv(Q2, ZERO)


def test_distances():
    assert vh_distance(Q2, E(Q2, 0, 1), E(Q2, 0, 3)) == 1
    assert vh_distance(Q2, E(Q2, 0, 1), E(Q2, 1, 1)) == 0
    assert vh_distance(Q2, E(Q2, 0, 1), E(Q2, 0, 1)) == INF


@pytest.mark.parametrize("H,rho", [(Q2, 2), (VH(EqualChar(3), 1), 1), (VH(MixedUnram(5), 3), 3),
                                   (VH(MixedUnram(2, 2), 2), 2)])
def test_rho_from_one_minus_one(H, rho):
    assert vh_theta_rho(H) == (H.log_weight, rho)


def test_bad_parameters():
    with pytest.raises(BadLevel):
        VH(MixedUnram(2), 0)
    with pytest.raises(BadWeight):
        VH(MixedUnram(2), 1, Fraction(0))


def test_enumerate_needs_large_enough_window():
    with pytest.raises(WindowTooSmall):
        ball_enumerate(Q2, Ball(ZERO, 2), 1)


def test_rescale_changes_only_weight():
    H = vh_rescale(Q2, Fraction(1, 2))
    assert H.abs_log(E(H, 3, 1)) == Fraction(3, 2)
    assert H.unit_ring == Q2.unit_ring


def test_axioms_small_cases():
    assert vh_verify_axioms(Q2, (-3, 5)).passed
    assert vh_verify_axioms(VH(EqualChar(4), 1), (-3, 5)).passed


def test_tampered_rho_is_caught():
    H = VH(MixedUnram(2), 2, rho_exp=3)
    rep = vh_verify_axioms(H, (-2, 4))
    assert rep.get("vh.v").status == "fail"


# -- morphisms ---------------------------------------------------------------


def test_e2_morphism_values():
    A, B = VH(EqualChar(2), 1), VH(EqualChar(2), 2, Fraction(1, 2))
    f = vh_embedding_morphism(A, B, 2)
    assert f(E(A, 1, 1)) == E(B, 2, 1)
    assert vh_verify_morphism(f).passed
    assert vh_morphism_lemmas(f).passed


def test_residue_extension_embeds_units():
    A, B = VH(EqualChar(2), 2), VH(EqualChar(4), 2)
    f = vh_embedding_morphism(A, B, 1)
    imgs = {f(VHElem(0, u)) for u in A.units}
    assert len(imgs) == len(A.units)
    assert vh_verify_morphism(f).passed


def test_level_too_high_is_rejected():
    with pytest.raises(RamificationMismatch):
        vh_embedding_morphism(VH(EqualChar(2), 1), VH(EqualChar(2), 3, Fraction(1, 2)), 2)


def test_composition_matches_pointwise():
    A = VH(EqualChar(2), 1)
    B = VH(EqualChar(2), 2, Fraction(1, 2))
    C = VH(EqualChar(2), 6, Fraction(1, 6))
    f, g = vh_embedding_morphism(A, B, 2), vh_embedding_morphism(B, C, 3)
    gf = vh_compose(g, f)
    assert gf.ram == 6
    for x in A.elements((-3, 3)):
        assert gf(x) == g(f(x))
    assert vh_compose(vh_identity(B), f)(E(A, 1, 1)) == f(E(A, 1, 1))


def test_explicit_hom():
    A, B = VH(EqualChar(2), 1), VH(EqualChar(2), 2, Fraction(1, 2))
    T = PolyQuot(2, 2)
    f = vh_embedding_morphism(A, B, 2, RingHom(A.unit_ring, T, None, T((0, 0))))
    assert f(E(A, -1, 1)) == E(B, -2, 1)


# -- properties against the lift oracle ---------------------------------------

OBJECTS = [Q2, VH(MixedUnram(3), 2), VH(EqualChar(2), 3), VH(EqualChar(3), 2), VH(MixedUnram(2, 2), 1)]


@st.composite
def vh_and_elems(draw, k=2, lo=-2, hi=2):
    H = draw(st.sampled_from(OBJECTS))
    out = []
    for _ in range(k):
        if draw(st.integers(0, 9)) == 0:
            out.append(ZERO)
        else:
            out.append(VHElem(draw(st.integers(lo, hi)), draw(st.sampled_from(H.units))))
    return H, out


@settings(max_examples=200, deadline=None)
@given(vh_and_elems())
def test_sum_matches_lift_oracle(data):
    H, (x, y) = data
    vals = [z.val for z in (x, y) if z.unit is not None]
    v_max = (max(vals) if vals else 0) + H.level + 1
    B = vh_sum(H, x, y)
    assert frozenset(ball_enumerate(H, B, v_max)) == lift_sum(H, x, y, v_max)


@settings(max_examples=200, deadline=None)
@given(vh_and_elems(k=3))
def test_sum_radius_and_commutativity(data):
    H, (x, y, _) = data
    assert vh_sum(H, x, y) == vh_sum(H, y, x)
    if x.unit is not None and y.unit is not None:
        B = vh_sum(H, x, y)
        assert B.radius_exp == min(x.val, y.val) + H.level


@settings(max_examples=200, deadline=None)
@given(vh_and_elems(k=3))
def test_multiplicative_group(data):
    H, (x, y, z) = data
    assert vh_mul(H, x, y) == vh_mul(H, y, x)
    assert vh_mul(H, vh_mul(H, x, y), z) == vh_mul(H, x, vh_mul(H, y, z))
    if x.unit is not None:
        assert vh_mul(H, x, vh_inv(H, x)) == H.one


@settings(max_examples=150, deadline=None)
@given(vh_and_elems(k=2))
def test_multisum_of_two_is_sum(data):
    H, (x, y) = data
    assert ball_equal(H, vh_multisum(H, [x, y]), vh_sum(H, x, y))


@settings(max_examples=150, deadline=None)
@given(vh_and_elems(k=2))
def test_distance_ultrametric_symmetry(data):
    H, (x, y) = data
    assert vh_distance(H, x, y) == vh_distance(H, y, x)
    d0 = vh_distance(H, x, ZERO)
    assert d0 == (INF if x.unit is None else x.val)
