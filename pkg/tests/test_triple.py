import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vhtriples.errors import BadParameter, BadPowers, NotComposable, TripleMismatch
from vhtriples.exactnum import GaloisRingQuot, PolyQuot, RingHom, ZpQuot, tdvr_enumerate
from vhtriples.triple import (
    TensorElem,
    Triple,
    TripleMorphism,
    eps_eta_lemma,
    eps_rs,
    eta_tensor_power,
    tdvr_length,
    tensor_mul,
    tensor_v,
    triple_identity,
    triple_morphism_compose,
    triple_morphism_validate,
)


def T_(R, u=1):
    return Triple(R, R(u))


def test_tensor_valuation():
    R = ZpQuot(2, 3)
    assert tensor_v(TensorElem(2, R(2))) == 3
    assert tensor_v(TensorElem(-1, R(1))) == -1


def test_eps_examples():
    R = ZpQuot(3, 2)
    T = T_(R)
    assert eps_rs(T, 0, 2, TensorElem(2, R(1))).coeff.is_zero()
    assert eps_rs(T, 0, 1, TensorElem(1, R(1))).coeff == R(3)
    T2 = T_(R, 2)
    assert eps_rs(T2, 0, 1, TensorElem(1, R(1))).coeff == R(6)
    with pytest.raises(BadPowers):
        eps_rs(T, 2, 1, TensorElem(1, R(1)))


def test_eps_unit_must_be_unit():
    with pytest.raises(BadParameter):
        T_(ZpQuot(2, 2), 2)


def test_module_action():
    R = ZpQuot(5, 2)
    assert tensor_mul(TensorElem(0, R(3)), TensorElem(2, R(4))) == TensorElem(2, R(12))
    with pytest.raises(TripleMismatch):
        tensor_mul(TensorElem(0, R(1)), TensorElem(0, ZpQuot(2, 2)(1)))


def test_r2_morphism_valid():
    S, T = PolyQuot(2, 1), PolyQuot(2, 2)
    u = TripleMorphism(T_(S), T_(T), 2, RingHom(S, T, None, T.zero), T.one)
    assert triple_morphism_validate(u).passed
    f = eta_tensor_power(u, 1)
    assert f(TensorElem(1, S.one)) == TensorElem(2, T.one)


def test_eta_coeff_non_unit_fails_condition_three():
    S, T = PolyQuot(2, 1), PolyQuot(2, 2)
    u = TripleMorphism(T_(S), T_(T), 2, RingHom(S, T, None, T.zero), T.uniformizer)
    rep = triple_morphism_validate(u)
    assert rep.get("triple.eta_iso").status == "fail"


def test_eps_incompatible_fails_condition_two():
    R = ZpQuot(2, 3)
    u = TripleMorphism(T_(R), T_(R), 1, RingHom.identity(R), R(3))
    rep = triple_morphism_validate(u)
    assert rep.get("triple.eps_compat").status == "fail"
    assert rep.get("triple.eta_iso").status == "pass"


def _chain():
    A, B, C = PolyQuot(2, 1), PolyQuot(2, 2), PolyQuot(2, 6)
    u = TripleMorphism(T_(A), T_(B), 2, RingHom(A, B, None, B.zero), B.one)
    v = TripleMorphism(T_(B), T_(C), 3, RingHom(B, C, None, C((0, 0, 0, 1, 0, 0))), C.one)
    return u, v


def test_compose_multiplies_ramification():
    u, v = _chain()
    w = triple_morphism_compose(v, u)
    assert w.r == 6
    assert triple_morphism_validate(w).passed
    with pytest.raises(NotComposable):
        triple_morphism_compose(u, v)


def test_identity_is_neutral():
    u, _ = _chain()
    assert triple_morphism_compose(u, triple_identity(u.source)).same(u)
    assert triple_morphism_compose(triple_identity(u.target), u).same(u)


def test_eta_scales_powers():
    u, _ = _chain()
    for k in range(-2, 4):
        assert eta_tensor_power(u, k)(TensorElem(k, u.source.R.one)).power == 2 * k


def test_eps_eta_lemma_on_chain():
    u, v = _chain()
    for w in (u, v, triple_morphism_compose(v, u)):
        assert eps_eta_lemma(w, kmax=4).passed


def test_length():
    assert tdvr_length(GaloisRingQuot(3, 3, 2)) == 3


def test_compose_associative():
    u, v = _chain()
    C = v.target.R
    D = PolyQuot(2, 6)
    idC = TripleMorphism(v.target, Triple(D, D.one), 1, RingHom.identity(C), C.one)
    left = triple_morphism_compose(idC, triple_morphism_compose(v, u))
    right = triple_morphism_compose(triple_morphism_compose(idC, v), u)
    assert left.same(right)


RINGS = [ZpQuot(2, 4), ZpQuot(3, 3), PolyQuot(2, 4), GaloisRingQuot(2, 2, 2)]


@st.composite
def eps_data(draw):
    R = draw(st.sampled_from(RINGS))
    u = draw(st.sampled_from(tdvr_enumerate(R, "units")))
    r = draw(st.integers(-3, 3))
    s = r + draw(st.integers(0, 3))
    t = s + draw(st.integers(0, 3))
    a = draw(st.sampled_from(tdvr_enumerate(R)))
    return Triple(R, u), r, s, t, a


@settings(max_examples=300, deadline=None)
@given(eps_data())
def test_eps_composes(data):
    T, r, s, t, a = data
    x = TensorElem(t, a)
    assert eps_rs(T, r, s, eps_rs(T, s, t, x)) == eps_rs(T, r, t, x)
    assert eps_rs(T, t, t, x) == x


@settings(max_examples=300, deadline=None)
@given(eps_data())
def test_eps_is_linear(data):
    T, r, _, t, a = data
    x, y = TensorElem(t, a), TensorElem(t, T.R.one)
    s = TensorElem(t, a + T.R.one)
    assert eps_rs(T, r, t, s).coeff == eps_rs(T, r, t, x).coeff + eps_rs(T, r, t, y).coeff
