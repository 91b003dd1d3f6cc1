"""Deligne triples (R, M, eps) with M free of rank one on a formal generator.

An element of ``M^{(x)k}`` is ``TensorElem(k, a)`` meaning ``a * gen^{(x)k}``;
negative ``k`` stands for the dual power.  ``eps(gen) = eps_unit * pi_R``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import BadParameter, BadPowers, NotComposable, TripleMismatch
from .exactnum import INF, RingHom, TdvrDescriptor, TdvrElem, tdvr_enumerate, tdvr_length
from .report import Report

__all__ = [
    "Triple",
    "TensorElem",
    "TripleMorphism",
    "tensor_v",
    "tensor_mul",
    "eps_rs",
    "eta_tensor_power",
    "triple_morphism_validate",
    "triple_morphism_compose",
    "triple_identity",
    "eps_eta_lemma",
    "tdvr_length",
]


@dataclass(frozen=True)
class Triple:
    R: TdvrDescriptor
    eps_unit: TdvrElem
    gen: str = "m"

    def __post_init__(self):
        if self.eps_unit.ring != self.R:
            raise TripleMismatch("eps_unit lives in another ring")
        if not self.eps_unit.is_unit():
            raise BadParameter(f"eps_unit {self.eps_unit} is not a unit: image of eps would not be m_R")

    @property
    def eps_gen(self) -> TdvrElem:
        """``eps(gen)``, a generator of the maximal ideal."""
        return self.eps_unit * self.R.uniformizer

    def elem(self, power: int, coeff) -> "TensorElem":
        return TensorElem(power, self.R(coeff))

    def to_json(self):
        return {"R": _ring_json(self.R), "eps_unit": self.eps_unit.to_json()}

    def __str__(self):
        return f"({self.R.label}, <{self.gen}>, eps({self.gen})={self.eps_gen})"


def _ring_json(R: TdvrDescriptor):
    out = {"family": R.family, "p": R.p, "n": R.n}
    if R.e > 1:
        out["e"] = R.e
        out["modulus"] = list(R.modulus)
    return out


@dataclass(frozen=True, slots=True)
class TensorElem:
    power: int
    coeff: TdvrElem

    def to_json(self):
        return [self.power, self.coeff.to_json()]

    def __str__(self):
        return f"{self.coeff}*m^{self.power}"

    __repr__ = __str__


def tensor_v(x: TensorElem):
    v = x.coeff.valuation()
    return INF if v == INF else x.power + v


def tensor_mul(x: TensorElem, y: TensorElem) -> TensorElem:
    if x.coeff.ring != y.coeff.ring:
        raise TripleMismatch("tensor factors come from different triples")
    return TensorElem(x.power + y.power, x.coeff * y.coeff)


def eps_rs(T: Triple, r: int, s: int, x: TensorElem) -> TensorElem:
    """``eps_{r,s}: M^{(x)s} -> M^{(x)r}``, multiplying by ``eps(gen)^(s-r)``."""
    if s < r:
        raise BadPowers(f"eps_{{{r},{s}}} needs s >= r")
    if x.power != s:
        raise BadPowers(f"argument lives in M^{x.power}, expected M^{s}")
    if x.coeff.ring != T.R:
        raise TripleMismatch("element from another triple")
    return TensorElem(r, x.coeff * T.eps_gen ** (s - r))


@dataclass(frozen=True)
class TripleMorphism:
    """``(r, phi, eta)`` with ``eta(gen) = eta_coeff * gen'^{(x)r}``."""

    source: Triple
    target: Triple
    r: int
    phi: RingHom
    eta_coeff: TdvrElem

    def __post_init__(self):
        if self.r < 1:
            raise BadParameter("ramification index must be positive")
        if self.phi.source != self.source.R or self.phi.target != self.target.R:
            raise TripleMismatch("phi does not go from R to R'")
        if self.eta_coeff.ring != self.target.R:
            raise TripleMismatch("eta_coeff must lie in R'")

    def same(self, other: "TripleMorphism") -> bool:
        return (
            self.source == other.source
            and self.target == other.target
            and self.r == other.r
            and self.eta_coeff == other.eta_coeff
            and self.phi.same_map(other.phi)
        )

    def to_json(self):
        return {"r": self.r, "phi": self.phi.to_json(), "eta_coeff": self.eta_coeff.to_json()}


def eta_tensor_power(u: TripleMorphism, k: int):
    """The map ``M^{(x)k} -> M'^{(x)rk}``, ``(k, a) -> (rk, phi(a) * eta_coeff^k)``."""
    c = u.eta_coeff**k

    def apply(x: TensorElem) -> TensorElem:
        if x.power != k:
            raise BadPowers(f"argument lives in M^{x.power}, expected M^{k}")
        return TensorElem(u.r * k, u.phi(x.coeff) * c)

    return apply


def triple_identity(T: Triple) -> TripleMorphism:
    return TripleMorphism(T, T, 1, RingHom.identity(T.R), T.R.one)


def triple_morphism_validate(u: TripleMorphism, law_limit: int = 4096) -> Report:
    rep = Report()
    with rep.timed():
        bad = u.phi.relation_failures()
        laws = [] if bad else u.phi.law_failures(law_limit)
        rep.add("triple.phi_hom", "phi is a ring homomorphism on the presentation",
                not bad and not laws, witness=bad or laws or None,
                detail="" if u.phi.source.size <= law_limit else "relations only: source too large for a full law check")
        lhs = u.phi(u.source.eps_gen)
        rhs = u.eta_coeff * u.target.eps_gen**u.r
        rep.add("triple.eps_compat", "f eps = eps'_{0,r} eta on the generator", lhs == rhs,
                witness={"f(eps(gen))": lhs, "eps'_0r(eta(gen))": rhs})
        rep.add("triple.eta_iso", "M (x) R' -> M'^{(x)r} is an isomorphism (eta_coeff a unit)",
                u.eta_coeff.is_unit(), witness={"eta_coeff": u.eta_coeff})
    return rep


def triple_morphism_compose(u1: TripleMorphism, u2: TripleMorphism) -> TripleMorphism:
    """``u1 o u2`` = ``(r1 r2, phi1 phi2, eta1^{(x)r2} eta2)``."""
    if u2.target != u1.source:
        raise NotComposable("codomain of the first map is not the domain of the second")
    eta = u1.phi(u2.eta_coeff) * u1.eta_coeff**u2.r
    return TripleMorphism(u2.source, u1.target, u1.r * u2.r, u1.phi.compose(u2.phi), eta)


def eps_eta_lemma(u: TripleMorphism, kmax: int = 4, exhaustive_limit: int = 4096) -> Report:
    """``eps'_{rj,rk} eta^{(x)k} = eta^{(x)j} eps_{j,k}`` for ``0 <= j <= k <= kmax``.

    Checked on the generator and, when R is small enough, on every coefficient.
    """
    T, T2, r = u.source, u.target, u.r
    R = T.R
    coeffs = tdvr_enumerate(R) if R.size <= exhaustive_limit else [R.one, R.uniformizer]
    bad = None
    for k in range(kmax + 1):
        ek = eta_tensor_power(u, k)
        for j in range(k + 1):
            ej = eta_tensor_power(u, j)
            for a in coeffs:
                x = TensorElem(k, a)
                left = eps_rs(T2, r * j, r * k, ek(x))
                right = ej(eps_rs(T, j, k, x))
                if left != right:
                    bad = {"j": j, "k": k, "x": x, "left": left, "right": right}
                    break
            if bad:
                break
        if bad:
            break
    rep = Report()
    rep.add("lemma.eps_eta", "eps'_{rj,rk} eta^(k) = eta^(j) eps_{j,k}", bad is None, witness=bad,
            detail=f"0 <= j <= k <= {kmax}, " + ("all coefficients" if R.size <= exhaustive_limit else "generator only"))
    return rep
