from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vhtriples.errors import EndpointMismatch, NonIntegralRamification, NotAHyperfieldIso, WindowTooSmall
from vhtriples.exactnum import PolyQuot, RingHom, ZpQuot, tdvr_enumerate
from vhtriples.functors import (
    UZERO,
    Psi,
    flat_finite_check,
    hf_iso_from_map,
    hyperfield_iso_exponent_check,
    lift_morphism,
    module_generators,
    psi_check,
    realize_triple,
    tr_morphism,
    tr_object_closed_form,
    tr_object_generic,
    u_morphism,
    u_object,
    vh_iso_search,
)
from vhtriples.triple import TensorElem, Triple, TripleMorphism, triple_morphism_validate
from vhtriples.valued import (
    VH,
    ZERO,
    EqualChar,
    MixedUnram,
    VHElem,
    VHMorphism,
    lift_sum,
    vh_embedding_morphism,
    vh_identity,
    vh_rescale,
)

Q2 = VH(MixedUnram(2), 2)


def e2_morphism(src_level=1, tgt_level=2):
    A = VH(EqualChar(2), src_level)
    B = VH(EqualChar(2), tgt_level, Fraction(1, 2))
    return vh_embedding_morphism(A, B, 2)


# -- Tr on objects -------------------------------------------------------------


def test_closed_form_examples():
    T = tr_object_closed_form(Q2)
    assert T.R == ZpQuot(2, 2) and T.eps_unit == T.R.one
    assert tr_object_closed_form(VH(EqualChar(3), 1)).R == PolyQuot(3, 1)


@pytest.mark.parametrize("H", [Q2, VH(EqualChar(2), 2), VH(MixedUnram(3), 3), VH(MixedUnram(2, 2), 2)])
def test_generic_matches_closed_form(H):
    g = tr_object_generic(H)
    assert g.report.passed
    assert len(g.M0) == len(g.M1) == H.unit_ring.size
    assert g.length == H.level


def test_generic_q2_table_is_z4():
    g = tr_object_generic(Q2)
    assert sorted(a.rep for a in g.iota0.values()) == [0, 1, 2, 3]
    one = g.M0.cls(Q2.one)
    two = g.M0.add[(one, one)]
    assert g.iota0[two] == ZpQuot(2, 2)(2)
    assert g.M0.add[(two, two)] == 0


def test_generic_needs_window():
    with pytest.raises(WindowTooSmall):
        tr_object_generic(Q2, (0, 3))


# -- Tr on morphisms -------------------------------------------------------------


def test_tr_morphism_r2():
    u = tr_morphism(e2_morphism())
    assert u.r == 2
    assert triple_morphism_validate(u).passed


def test_tr_identity():
    u = tr_morphism(vh_identity(Q2))
    assert u.r == 1 and u.eta_coeff == Q2.unit_ring.one
    assert all(u.phi(a) == a for a in tdvr_enumerate(Q2.unit_ring))


def test_non_integral_ramification():
    f = e2_morphism()
    bad = vh_rescale(f.target, Fraction(2, 3))
    g = VHMorphism(f.source, bad, f.ram, f.hom, f.unit_image)
    with pytest.raises(NonIntegralRamification):
        tr_morphism(g)


# -- U and psi -----------------------------------------------------------------


def test_u_object_strata():
    T = tr_object_closed_form(Q2)
    U = u_object(T, 1, (-1, 2))
    assert len(U.stratum(0)) == 2
    assert UZERO in U.elements()
    with pytest.raises(WindowTooSmall):
        u_object(T, 1, (2, 1))


def test_u_sum_example():
    T = tr_object_closed_form(Q2)
    R = T.R
    U = u_object(T, 1, (-4, 6))
    x = TensorElem(0, R.one)
    s = U.sum(x, x)
    members = U.sum_members(s, 6)
    assert members == {TensorElem(1, R(1)), TensorElem(1, R(3))}
    assert members == U.sum_members_literal(s, 6)
    psi = Psi(Q2)
    assert {psi(z) for z in lift_sum(Q2, Q2.one, Q2.one, 6)} == members


def test_u_sum_zero_rule():
    T = tr_object_closed_form(Q2)
    U = u_object(T, 1)
    x = TensorElem(0, T.R.one)
    assert UZERO in U.sum_members(U.sum(x, U.neg(x)), 4)
    assert UZERO not in U.sum_members(U.sum(x, x), 4)
    assert U.sum_members(U.sum(x, UZERO), 4) == {x}


def test_u_morphism_strata_and_functoriality():
    f = e2_morphism()
    u = tr_morphism(f)
    Uf = u_morphism(u)
    R = u.source.R
    assert Uf(TensorElem(1, R.one)).power == 2
    assert Uf(UZERO) == UZERO
    ident = u_morphism(tr_morphism(vh_identity(f.source)))
    U = u_object(u.source, 1, (-3, 3))
    assert all(ident(x) == x for x in U.elements())


def test_psi_check_q2():
    rep = psi_check(Q2)
    assert rep.passed
    assert "2" in rep.get("psi.bijective").detail


def test_psi_naturality_e2():
    f = e2_morphism()
    rep = psi_check(f.source, morphisms=[f])
    assert rep.get("psi.naturality[0]").status == "pass"


# -- lifting -------------------------------------------------------------------


def test_lift_recovers_morphism():
    f = e2_morphism(2, 4)
    L = lift_morphism(tr_morphism(f), f.source, f.target)
    assert not L.rescaled and L.report.passed
    assert all(L.morphism(x) == f(x) for x in f.source.elements())


def test_lift_identity():
    L = lift_morphism(tr_morphism(vh_identity(Q2)), Q2, Q2)
    assert all(L.morphism(x) == x for x in Q2.elements())


def test_lift_rescales_weight_mismatch():
    f = e2_morphism()
    off = vh_rescale(f.target, Fraction(1))
    L = lift_morphism(tr_morphism(f), f.source, off)
    assert L.rescaled and L.target.log_weight == Fraction(1, 2)
    assert tr_morphism(L.morphism).same(tr_morphism(f))
    assert tr_object_closed_form(L.target) == tr_object_closed_form(off)


def test_lift_endpoint_mismatch():
    f = e2_morphism()
    with pytest.raises(EndpointMismatch):
        lift_morphism(tr_morphism(f), Q2, f.target)


# -- isomorphisms --------------------------------------------------------------


def test_exponent_law_level_one():
    A, B = VH(MixedUnram(2), 1), VH(EqualChar(2), 1)
    g = hf_iso_from_map(A, B, B.elem(1, 1), {A.unit_ring.one: B.unit_ring.one})
    rep, tri = hyperfield_iso_exponent_check(g)
    assert rep.passed and tri is not None
    assert rep.get("iso.exponent_law").detail == "exponent 1"


def test_exponent_after_rescale():
    A = VH(MixedUnram(2), 1)
    B = VH(EqualChar(2), 1, Fraction(5, 2))
    g = hf_iso_from_map(A, B, B.elem(1, 1), {A.unit_ring.one: B.unit_ring.one})
    rep, _ = hyperfield_iso_exponent_check(g)
    assert rep.passed
    assert rep.get("iso.exponent_law").detail == "exponent 5/2"


def test_not_an_iso():
    A, B = VH(MixedUnram(2), 2), VH(EqualChar(2), 2)
    # multiplicative bijection Z/4^x -> (F_2[t]/t^2)^x, but 0 in 1+1 only on the right
    units = {A.unit_ring(1): B.unit_ring((1, 0)), A.unit_ring(3): B.unit_ring((1, 1))}
    g = hf_iso_from_map(A, B, B.elem(1, 1), units)
    with pytest.raises(NotAHyperfieldIso):
        hyperfield_iso_exponent_check(g)


def test_iso_search_examples():
    A1, B1 = VH(MixedUnram(2), 1), VH(EqualChar(2), 1)
    assert vh_iso_search(A1, B1).status == "found"
    A2, B2 = VH(MixedUnram(2), 2), VH(EqualChar(2), 2)
    res = vh_iso_search(A2, B2)
    assert res.status == "not_isomorphic"
    assert res.witness == {"invariant": "0 in 1+1", "source": False, "target": True}
    same = vh_iso_search(Q2, Q2)
    assert same.status == "found"
    assert all(same.iso(x) == x for x in Q2.elements())


def test_iso_search_budget_is_inconclusive():
    H = VH(MixedUnram(5), 2)
    res = vh_iso_search(H, H, candidate_budget=0)
    assert res.status == "inconclusive"


# -- finite / flat ---------------------------------------------------------------


def test_flat_cases():
    H = VH(EqualChar(2), 2)
    a = flat_finite_check(vh_embedding_morphism(H, VH(EqualChar(2), 4, Fraction(1, 2)), 2))
    assert (a.vh_flat, a.triple_flat, a.vh_finite, a.triple_finite) == (True, True, True, True)
    b = flat_finite_check(vh_embedding_morphism(H, VH(EqualChar(2), 3, Fraction(1, 2)), 2))
    assert (b.vh_flat, b.triple_flat) == (False, False)
    assert b.report.passed
    c = flat_finite_check(vh_embedding_morphism(H, VH(EqualChar(4), 2), 1))
    assert c.vh_flat and c.triple_flat and len(c.generators) == 2


def test_flat_rejects_wrong_u():
    f = e2_morphism()
    with pytest.raises(EndpointMismatch):
        flat_finite_check(f, tr_morphism(vh_identity(f.source)))


def test_module_generators_count():
    S, T = PolyQuot(2, 2), PolyQuot(4, 2)
    gens, table = module_generators(RingHom(S, T, None, T.uniformizer))
    assert len(gens) == 2 and len(table) == T.size


# -- realization ------------------------------------------------------------------


@pytest.mark.parametrize("R,u", [(ZpQuot(3, 2), 2), (PolyQuot(4, 2), (2, 1)), (ZpQuot(2, 3), 5)])
def test_realize_triple(R, u):
    T = Triple(R, R(u))
    H, iso = realize_triple(T)
    assert tr_object_closed_form(H).R == R
    assert triple_morphism_validate(iso).passed


# -- properties ------------------------------------------------------------------

OBJECTS = [Q2, VH(MixedUnram(3), 2), VH(EqualChar(2), 3), VH(MixedUnram(2, 2), 1)]


@st.composite
def vh_pair(draw):
    H = draw(st.sampled_from(OBJECTS))

    def el():
        if draw(st.integers(0, 7)) == 0:
            return ZERO
        return VHElem(draw(st.integers(-2, 2)), draw(st.sampled_from(H.units)))
    return H, el(), el()


@settings(max_examples=150, deadline=None)
@given(vh_pair())
def test_psi_transports_sum_oracle(data):
    H, x, y = data
    psi = Psi(H)
    U = u_object(tr_object_closed_form(H), H.log_weight)
    v_max = 2 + H.level + 1
    left = {psi(z) for z in lift_sum(H, x, y, v_max)}
    s = U.sum(psi(x), psi(y))
    assert left == U.sum_members(s, v_max) == U.sum_members_literal(s, v_max)


@settings(max_examples=150, deadline=None)
@given(vh_pair())
def test_lift_then_tr_is_identity(data):
    H, x, _ = data
    u = tr_morphism(vh_identity(H))
    L = lift_morphism(u, H, H)
    assert L.morphism(x) == x
