import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vhtriples.errors import BadParameter, NotAUnit, RingMismatch, ZeroElement
from vhtriples.exactnum import (
    INF,
    GaloisRingQuot,
    PolyQuot,
    RingHom,
    ZpQuot,
    finite_field,
    is_prime,
    least_irreducible,
    prime_power,
    roots_in,
    tdvr_enumerate,
    tdvr_length,
    tdvr_ring_ops,
    tdvr_unit_decompose,
    tdvr_valuation,
)


def _poly_mul_naive(a, b, p, n):
    """Coefficient convolution truncated at t^n, coefficients mod p."""
    out = [0] * n
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if i + j < n:
                out[i + j] = (out[i + j] + x * y) % p
    return tuple(out)


def _galois_mul_naive(a, b, p, n, h):
    """Schoolbook product mod (p^n, h) for monic h given low-degree first."""
    e = len(h) - 1
    m = p**n
    prod = [0] * (2 * e - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] += x * y
    for k in range(len(prod) - 1, e - 1, -1):
        c = prod[k]
        prod[k] = 0
        for i in range(e):
            prod[k - e + i] -= c * h[i]
    return tuple(c % m for c in prod[:e])


# -- frozen examples ---------------------------------------------------------


def test_zp_examples():
    R = ZpQuot(2, 3)
    assert tdvr_ring_ops(R(3), R(5), "mul") == R(7)
    assert tdvr_valuation(R(4)) == 2
    assert tdvr_valuation(R(0)) == INF
    assert len(tdvr_enumerate(R)) == 8
    assert len(tdvr_enumerate(R, "units")) == 4


def test_poly_examples():
    R = PolyQuot(2, 3)
    assert R((1, 1, 0)) + R((0, 1, 1)) == R((1, 0, 1))
    assert tdvr_valuation(PolyQuot(3, 4)((0, 0, 2, 1))) == 2
    assert tdvr_unit_decompose(R((0, 1, 1))) == (1, R((1, 1, 0)))
    assert len(tdvr_enumerate(PolyQuot(3, 2), "units")) == 6


def test_galois_examples():
    G = GaloisRingQuot(2, 2, 2)
    assert G.modulus == (1, 1, 1)
    x = G.generator
    assert (x * x).rep == (3, 3)
    assert len(tdvr_enumerate(G, "units")) == 12
    assert G.size == 16


def test_unit_decompose_examples():
    v, u = tdvr_unit_decompose(ZpQuot(3, 2)(6))
    assert v == 1 and u == ZpQuot(3, 2)(2)
    with pytest.raises(ZeroElement):
        tdvr_unit_decompose(ZpQuot(2, 3)(0))


def test_errors():
    with pytest.raises(NotAUnit):
        ZpQuot(2, 3)(2).inv()
    with pytest.raises(RingMismatch):
        tdvr_ring_ops(ZpQuot(2, 3)(1), ZpQuot(3, 2)(1), "add")
    with pytest.raises(BadParameter):
        ZpQuot(4, 2)


def test_prime_helpers():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert prime_power(9) == (3, 2)
    assert prime_power(8) == (2, 3)
    assert least_irreducible(2, 2) == (1, 1, 1)


@pytest.mark.parametrize("R", [ZpQuot(2, 4), ZpQuot(5, 2), PolyQuot(2, 4), PolyQuot(4, 2), GaloisRingQuot(2, 2, 2),
                               GaloisRingQuot(3, 2, 2)])
def test_length_is_n(R):
    assert tdvr_length(R) == R.n


def test_finite_field_sizes():
    for q in (2, 3, 4, 5, 7, 8, 9, 11, 13):
        K = finite_field(q)
        assert len(tdvr_enumerate(K, "units")) == q - 1
        assert all(a.is_unit() for a in tdvr_enumerate(K, "units"))


def test_roots_of_residue_modulus():
    R = finite_field(4)
    assert len(roots_in((1, 1, 1), R)) == 2


def test_ring_hom_identity_and_compose():
    R = GaloisRingQuot(2, 2, 2)
    idR = RingHom.identity(R)
    assert all(idR(a) == a for a in tdvr_enumerate(R))
    assert idR.law_failures() == []
    S, T = PolyQuot(2, 1), PolyQuot(2, 2)
    f = RingHom(S, T, None, T.zero)
    g = RingHom(T, PolyQuot(2, 6), None, PolyQuot(2, 6)((0, 0, 0, 1, 0, 0)))
    assert g.compose(f)(S.one) == PolyQuot(2, 6).one


def test_ring_hom_rejects_bad_images():
    R, T = PolyQuot(2, 2), PolyQuot(2, 2)
    # t -> 1 is not nilpotent, so t^2 = 0 fails
    assert RingHom(R, T, None, T.one).relation_failures()


# -- brute-force oracles -----------------------------------------------------


@pytest.mark.parametrize("p,n", [(2, 3), (3, 2), (5, 2)])
def test_zp_matches_integers(p, n):
    R = ZpQuot(p, n)
    m = p**n
    for a, b in itertools.product(range(m), repeat=2):
        assert (R(a) + R(b)).rep == (a + b) % m
        assert (R(a) * R(b)).rep == (a * b) % m


@pytest.mark.parametrize("p,n", [(2, 3), (3, 2)])
def test_poly_matches_convolution(p, n):
    R = PolyQuot(p, n)
    for a, b in itertools.product(tdvr_enumerate(R), repeat=2):
        assert (a * b).rep == _poly_mul_naive(a.rep, b.rep, p, n)


@pytest.mark.parametrize("p,n,e", [(2, 2, 2), (3, 2, 2), (2, 3, 2)])
def test_galois_matches_schoolbook(p, n, e):
    R = GaloisRingQuot(p, n, e)
    for a, b in itertools.product(tdvr_enumerate(R), repeat=2):
        assert (a * b).rep == _galois_mul_naive(a.rep, b.rep, p, n, R.modulus)


# -- properties --------------------------------------------------------------

RINGS = [ZpQuot(2, 4), ZpQuot(3, 3), PolyQuot(2, 4), PolyQuot(3, 3), PolyQuot(4, 2), GaloisRingQuot(2, 3, 2)]


@st.composite
def ring_and_elems(draw, k=3):
    R = draw(st.sampled_from(RINGS))
    elems = tdvr_enumerate(R)
    return R, [draw(st.sampled_from(elems)) for _ in range(k)]


@settings(max_examples=300, deadline=None)
@given(ring_and_elems())
def test_ring_axioms(data):
    R, (a, b, c) = data
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + (-a) == R.zero
    assert a * R.one == a


@settings(max_examples=300, deadline=None)
@given(ring_and_elems())
def test_valuation_laws(data):
    R, (a, b, _) = data
    va, vb = a.valuation(), b.valuation()
    assert (a + b).valuation() >= min(va, vb)
    vab = (a * b).valuation()
    assert vab == (INF if va + vb >= R.n else va + vb)


@settings(max_examples=300, deadline=None)
@given(ring_and_elems())
def test_unit_decompose_reconstructs(data):
    R, (a, _, _) = data
    if a.is_zero():
        return
    v, u = tdvr_unit_decompose(a)
    assert u.is_unit()
    assert R.uniformizer**v * u == a


@settings(max_examples=200, deadline=None)
@given(ring_and_elems())
def test_inverse(data):
    R, (a, _, _) = data
    if a.is_unit():
        assert a * a.inv() == R.one
