"""Tr, U, psi, morphism lifting, hyperfield isomorphisms and finite/flat checks."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    BadParameter,
    EndpointMismatch,
    NonIntegralRamification,
    NotAHyperfieldIso,
    WindowTooSmall,
)
from .exactnum import INF, RingHom, TdvrDescriptor, TdvrElem, tdvr_enumerate, tdvr_length, tdvr_unit_decompose
from .report import FAIL, INCONCLUSIVE, PASS, Report
from .triple import (
    TensorElem,
    Triple,
    TripleMorphism,
    eps_rs,
    eta_tensor_power,
    tensor_mul,
    tensor_v,
    triple_morphism_validate,
)
from .valued import (
    DEFAULT_WINDOW,
    VH,
    ZERO,
    Ball,
    LocalFieldDesc,
    VHElem,
    VHMorphism,
    _sample,
    ball_contains,
    ball_enumerate,
    ball_min_val,
    ball_subset,
    vh_distance,
    vh_mul,
    vh_multisum,
    vh_neg,
    vh_pow,
    vh_rescale,
    vh_sum,
    vh_theta_rho,
)

# ---------------------------------------------------------------------------
# helpers between H and R = O_H / m_H^level


def reduce_O(H: VH, x: VHElem) -> TdvrElem:
    """Class in R of an element of O_H (``pi^v * u``)."""
    R = H.unit_ring
    if x.unit is None or x.val >= R.n:
        return R.zero
    if x.val < 0:
        raise BadParameter(f"{x} is not in O_H")
    return R.uniformizer**x.val * x.unit


def lift_O(H: VH, a: TdvrElem) -> VHElem:
    """A lift of ``a`` in R to O_H."""
    if a.is_zero():
        return ZERO
    v, u = tdvr_unit_decompose(a)
    return VHElem(v, u)


def tr_object_closed_form(H: VH) -> Triple:
    """``(O_K/m^i, m_K/m^{1+i}, eps)`` with eps induced by ``m_K in O_K``: eps(gen) = pi."""
    return Triple(H.unit_ring, H.unit_ring.one)


# ---------------------------------------------------------------------------
# generic construction of M_k = m_H^k / =_{rho theta^k}


@dataclass
class QuotientModule:
    level_index: int
    classes: list  # canonical representatives (window elements), class 0 first
    of: dict  # window element -> class id
    add: dict = field(default_factory=dict)  # (i, j) -> class id

    def cls(self, x: VHElem) -> int:
        return self.of[x]

    def __len__(self):
        return len(self.classes)


def _quotient_module(H: VH, k: int, rho: int, E: list[VHElem]) -> QuotientModule:
    """Group ``{x in E : v(x) >= k}`` by ``d(x, y) <= rho * theta^k``."""
    members = [x for x in E if x.unit is None or x.val >= k]
    reps: list[VHElem] = [ZERO]
    of: dict[VHElem, int] = {}
    bound = rho + k
    for x in members:
        for idx, c in enumerate(reps):
            if vh_distance(H, x, c) >= bound:
                of[x] = idx
                break
        else:
            of[x] = len(reps)
            reps.append(x)
    return QuotientModule(k, reps, of)


@dataclass
class TrGeneric:
    H: VH
    rho_exp: int
    M0: QuotientModule
    M1: QuotientModule
    mul00: dict
    mul01: dict
    eps: dict  # M1 class -> M0 class
    iota0: dict  # M0 class -> element of R
    iota1: dict  # M1 class -> coefficient c with class = c * gen
    report: Report

    @property
    def R_size(self) -> int:
        return len(self.M0)

    @property
    def length(self) -> int:
        """Nilpotency index of the class of the uniformizer in the generic R table."""
        pi = self.M0.cls(self.H.uniformizer)
        k, power = 0, self.M0.cls(self.H.one)
        while power != 0:
            power = self.mul00[(power, pi)]
            k += 1
        return k


def tr_object_generic(H: VH, window=None) -> TrGeneric:
    """Build R = M_0 and M = M_1 from the hyperfield operations on window representatives.

    Every sum/product is read off ``vh_sum``/``vh_mul`` of representatives and
    re-derived from a second lift to confirm that the tables are well defined.
    The result also carries the identification with the closed form and the
    table-for-table comparison in ``report``.
    """
    i = H.level
    window = window or (0, 2 * i + 1)
    lo, hi = window
    if lo > 0 or hi < 2 * i + 1:
        raise WindowTooSmall(f"window must cover valuations [0, {2 * i + 1}]")
    _, rho = vh_theta_rho(H)
    E = H.elements((0, hi))
    M0 = _quotient_module(H, 0, rho, E)
    M1 = _quotient_module(H, 1, rho, E)

    def alt_lifts(M: QuotientModule):
        first, last = {}, {}
        for x, c in M.of.items():
            first.setdefault(c, x)
            last[c] = x
        return [first[c] for c in range(len(M))], [last[c] for c in range(len(M))]

    def any_member(B: Ball) -> VHElem:
        return B.center

    rep = Report()
    bad_add = None
    with rep.timed():
        for M in (M0, M1):
            a_lift, b_lift = alt_lifts(M)
            for ci, cj in itertools.product(range(len(M)), repeat=2):
                z = M.of.get(any_member(vh_sum(H, a_lift[ci], a_lift[cj])), 0)
                z2 = M.of.get(any_member(vh_sum(H, b_lift[ci], b_lift[cj])), 0)
                M.add[(ci, cj)] = z
                if z != z2 and bad_add is None:
                    bad_add = {"k": M.level_index, "x": a_lift[ci], "y": a_lift[cj]}
        a0, b0 = alt_lifts(M0)
        a1, b1 = alt_lifts(M1)

        def cls_of(M, x):
            return M.of.get(x, 0) if x.unit is None or x.val <= hi else 0

        mul00, mul01, eps = {}, {}, {}
        bad_mul = None
        for ci, cj in itertools.product(range(len(M0)), repeat=2):
            mul00[(ci, cj)] = cls_of(M0, vh_mul(H, a0[ci], a0[cj]))
            if cls_of(M0, vh_mul(H, b0[ci], b0[cj])) != mul00[(ci, cj)] and bad_mul is None:
                bad_mul = (a0[ci], a0[cj])
        for ci, cj in itertools.product(range(len(M0)), range(len(M1))):
            mul01[(ci, cj)] = cls_of(M1, vh_mul(H, a0[ci], a1[cj]))
            if cls_of(M1, vh_mul(H, b0[ci], b1[cj])) != mul01[(ci, cj)] and bad_mul is None:
                bad_mul = (a0[ci], a1[cj])
        for cj in range(len(M1)):
            eps[cj] = M0.of[a1[cj]]
            if M0.of[b1[cj]] != eps[cj] and bad_mul is None:
                bad_mul = ("eps", a1[cj])
        rep.add("tr.add_well_defined", "M_i addition single valued and independent of lifts", bad_add is None,
                witness=bad_add, window=window)
        rep.add("tr.mul_well_defined", "M_0 x M_i -> M_i and eps independent of lifts", bad_mul is None,
                witness=bad_mul, window=window)

        # identification with (O_K/m^i, m_K/m^{1+i}, eps)
        T = tr_object_closed_form(H)
        R = T.R
        iota0 = {c: reduce_O(H, a0[c]) for c in range(len(M0))}
        iota1 = {c: reduce_O(H, vh_mul(H, a1[c], _pi_inv(H))) for c in range(len(M1))}
        bij0 = len(set(iota0.values())) == len(M0) == R.size
        bij1 = len(set(iota1.values())) == len(M1) == R.size
        rep.add("tr.class_count", "|M_0| = |M_1| = |O_K/m^i|", len(M0) == len(M1) == R.size,
                witness={"M0": len(M0), "M1": len(M1), "R": R.size}, window=window)
        rep.add("tr.identification_bijective", "class-of-representative maps M_0 -> R and M_1 -> M are bijective",
                bij0 and bij1, window=window)
        bad = None
        for (ci, cj), z in M0.add.items():
            if iota0[ci] + iota0[cj] != iota0[z]:
                bad = ("M0 +", a0[ci], a0[cj])
                break
        for (ci, cj), z in M1.add.items():
            if bad is None and iota1[ci] + iota1[cj] != iota1[z]:
                bad = ("M1 +", a1[ci], a1[cj])
                break
        for (ci, cj), z in mul00.items():
            if bad is None and iota0[ci] * iota0[cj] != iota0[z]:
                bad = ("R *", a0[ci], a0[cj])
                break
        for (ci, cj), z in mul01.items():
            if bad is None and iota0[ci] * iota1[cj] != iota1[z]:
                bad = ("R x M", a0[ci], a1[cj])
                break
        for cj, z in eps.items():
            if bad is None and iota1[cj] * T.eps_gen != iota0[z]:
                bad = ("eps", a1[cj])
                break
        rep.add("tr.tables_match_closed_form", "generic tables equal (O_K/m^i, m_K/m^{1+i}, eps) under the identification",
                bad is None, witness=bad, window=window)
        gen = TrGeneric(H, rho, M0, M1, mul00, mul01, eps, iota0, iota1, rep)
        rep.add("tr.length", "l(R) = log rho / log theta = level", gen.length == rho == tdvr_length(R) == i,
                witness={"generic_length": gen.length, "rho_exp": rho, "level": i}, window=window)
    return gen


def _pi_inv(H: VH) -> VHElem:
    return VHElem(-1, H.unit_ring.one)


# ---------------------------------------------------------------------------
# Tr on morphisms


def tr_morphism(f: VHMorphism) -> TripleMorphism:
    H, H2 = f.source, f.target
    ratio = H.log_weight / H2.log_weight
    if ratio.denominator != 1 or ratio < 1:
        raise NonIntegralRamification(f"log theta ratio {ratio} is not a positive integer")
    r = int(ratio)
    R, R2 = H.unit_ring, H2.unit_ring

    def phi_point(a: TdvrElem) -> TdvrElem:
        return reduce_O(H2, f(lift_O(H, a)))

    x_img = phi_point(R.generator) if R.e > 1 else None
    t_img = phi_point(R.uniformizer) if R.family == "poly" else None
    phi = RingHom(R, R2, x_img, t_img)
    bad = next((a for a in tdvr_enumerate(R) if phi(a) != phi_point(a)), None) if R.size <= 4096 else None
    if bad is not None:
        raise BadParameter(f"lift-apply-reduce is not the ring map generated by its images (at {bad})")
    fpi = f(H.uniformizer)
    if fpi.val < r:
        raise NonIntegralRamification(f"f(pi) has valuation {fpi.val} < r = {r}")
    eta = reduce_O(H2, VHElem(fpi.val - r, fpi.unit))
    return TripleMorphism(tr_object_closed_form(H), tr_object_closed_form(H2), r, phi, eta)


# ---------------------------------------------------------------------------
# U and the reconstructed addition


@dataclass(frozen=True)
class UZero:
    def to_json(self):
        return "0"

    def __str__(self):
        return "0"

    __repr__ = __str__


UZERO = UZero()


@dataclass(frozen=True)
class USum:
    """``{w in S_k, k >= j : eps_{j,k}(w) = target}``, plus 0 when ``has_zero``."""

    triple: Triple
    j: object
    target: TensorElem | None
    has_zero: bool
    point: object = None  # x + 0 = {x}

    def contains(self, w) -> bool:
        if self.point is not None:
            return w == self.point
        if isinstance(w, UZero):
            return self.has_zero
        if w.power < self.j or not w.coeff.is_unit():
            return False
        return eps_rs(self.triple, self.j, w.power, w) == self.target


@dataclass(frozen=True)
class USet:
    triple: Triple
    log_weight: Fraction = Fraction(1)
    window: tuple = DEFAULT_WINDOW

    def stratum(self, i: int) -> list[TensorElem]:
        return [TensorElem(i, u) for u in tdvr_enumerate(self.triple.R, "units")]

    def elements(self) -> list:
        lo, hi = self.window
        return [UZERO] + [w for i in range(lo, hi + 1) for w in self.stratum(i)]

    def mul(self, x, y):
        if isinstance(x, UZero) or isinstance(y, UZero):
            return UZERO
        return tensor_mul(x, y)

    def abs_log(self, x):
        return INF if isinstance(x, UZero) else self.log_weight * x.power

    def neg(self, x):
        return x if isinstance(x, UZero) else TensorElem(x.power, -x.coeff)

    def sum(self, x, y) -> USum:
        T = self.triple
        if isinstance(x, UZero):
            return USum(T, None, None, isinstance(y, UZero), point=y)
        if isinstance(y, UZero):
            return USum(T, None, None, False, point=x)
        if y.power < x.power:
            x, y = y, x
        j, i = x.power, y.power
        z = TensorElem(j, x.coeff + eps_rs(T, j, i, y).coeff)
        return USum(T, j, z, z.coeff.is_zero())

    def sum_members(self, s: USum, v_max: int) -> set:
        """Members with power ``<= v_max``: the eps-condition solved stratum by stratum."""
        if s.point is not None:
            return {s.point}
        T = self.triple
        n = T.R.n
        out = {UZERO} if s.has_zero else set()
        d = s.target.coeff.valuation()
        units = tdvr_enumerate(T.R, "units")
        # eps_{j,k}(w) has coefficient valuation k - j (or is 0 once k - j >= n)
        ks = range(s.j + n, v_max + 1) if d == INF else [s.j + d]
        for k in ks:
            if k > v_max:
                continue
            for c in units:
                w = TensorElem(k, c)
                if s.contains(w):
                    out.add(w)
        return out

    def sum_members_literal(self, s: USum, v_max: int) -> set:
        """Same set by testing the condition for every stratum ``j <= k <= v_max``."""
        if s.point is not None:
            return {s.point}
        out = {UZERO} if s.has_zero else set()
        for k in range(s.j, v_max + 1):
            out |= {w for w in self.stratum(k) if s.contains(w)}
        return out


def u_object(T: Triple, log_weight=Fraction(1), window=DEFAULT_WINDOW) -> USet:
    lo, hi = window
    if hi < lo:
        raise WindowTooSmall("empty window")
    return USet(T, Fraction(log_weight), tuple(window))


def u_morphism(u: TripleMorphism, window=None):
    """Stratum-wise ``eta^{(x)i}``; ``0 -> 0``."""
    cache = {}

    def apply(x):
        if isinstance(x, UZero):
            return UZERO
        f = cache.get(x.power)
        if f is None:
            f = cache[x.power] = eta_tensor_power(u, x.power)
        return f(x)

    return apply


# ---------------------------------------------------------------------------
# psi : H -> U(Tr(H))


class Psi:
    """``psi = beta o alpha``: reduce x in C_n modulo =_{rho theta^n}, then read the
    coefficient against the generator ``class(pi^n)`` of M_n."""

    def __init__(self, H: VH):
        self.H = H
        self.rho = vh_theta_rho(H)[1]
        self.units = H.units
        self._cache: dict = {}

    def __call__(self, x: VHElem):
        if x.unit is None:
            return UZERO
        r = self._cache.get(x)
        if r is None:
            n = x.val
            found = [a for a in self.units if vh_distance(self.H, x, VHElem(n, a)) >= self.rho + n]
            if len(found) != 1:
                raise BadParameter(f"{x} reduces to {len(found)} coefficients")
            r = self._cache[x] = TensorElem(n, found[0])
        return r

    def inverse(self, w) -> VHElem:
        if isinstance(w, UZero):
            return ZERO
        return VHElem(w.power, w.coeff)


def psi_check(H: VH, window=DEFAULT_WINDOW, morphisms=(), pair_budget: int = 1500,
              literal_budget: int = 60, seed: int = 0) -> Report:
    lo, hi = window
    rng = random.Random(seed)
    psi = Psi(H)
    U = u_object(tr_object_closed_form(H), H.log_weight, window)
    rep = Report()
    with rep.timed():
        # (1) stratum bijections
        bad = None
        for n in range(lo, hi + 1):
            C = [x for x in H.elements((n, n)) if x.unit is not None]
            img = [psi(x) for x in C]
            if len(set(img)) != len(C) or set(img) != set(U.stratum(n)):
                bad = {"stratum": n, "C": len(C), "image": len(set(img)), "S": len(U.stratum(n))}
                break
        rep.add("psi.bijective", "psi restricts to bijections C_i -> S_i", bad is None, witness=bad, window=window,
                detail=f"|C_i| = |S_i| = {len(H.units)}")

        E = H.elements(window)
        one = H.one
        core = [(one, one), (one, vh_neg(H, one)), (H.uniformizer, one), (ZERO, one)]
        pairs, exh = _sample(E, 2, pair_budget, rng, core)
        det = "exhaustive over pairs" if exh else f"seeded sample of {len(pairs)} pairs"
        bad_mul = bad_abs = bad_add = bad_lit = None
        for x in E:
            if U.abs_log(psi(x)) != H.abs_log(x):
                bad_abs = x
                break
        for idx, (x, y) in enumerate(pairs):
            xy = vh_mul(H, x, y)
            if (xy.unit is None or lo <= xy.val <= hi) and psi(xy) != U.mul(psi(x), psi(y)):
                bad_mul = (x, y)
            B = vh_sum(H, x, y)
            mv = ball_min_val(H, B)
            members = ball_enumerate(H, B, hi) if mv == INF or mv <= hi else ({ZERO} if ball_contains(H, B, ZERO) else set())
            left = {psi(z) for z in members}
            s = U.sum(psi(x), psi(y))
            right = U.sum_members(s, hi)
            if left != right and bad_add is None:
                bad_add = {"x": x, "y": y, "only_H": sorted(map(str, left - right))[:5],
                           "only_U": sorted(map(str, right - left))[:5]}
            if idx < literal_budget and U.sum_members_literal(s, hi) != right and bad_lit is None:
                bad_lit = (x, y)
        rep.add("psi.abs", "|psi(x)| = |x|", bad_abs is None, witness=bad_abs, window=window)
        rep.add("psi.mul", "psi(xy) = psi(x) psi(y)", bad_mul is None, witness=bad_mul, window=window, detail=det)
        rep.add("psi.add", "psi(x + y) equals the reconstructed sum of psi(x), psi(y), set for set", bad_add is None,
                witness=bad_add, window=window, detail=det)
        rep.add("u.sum_literal", "solved eps-condition agrees with stratum-by-stratum evaluation", bad_lit is None,
                witness=bad_lit, window=window, detail=f"first {min(literal_budget, len(pairs))} pairs")

        for idx, f in enumerate(morphisms):
            r = f.ram
            psi2 = Psi(f.target)
            Uf = u_morphism(tr_morphism(f))
            bad = next((x for x in E if psi2(f(x)) != Uf(psi(x))), None)
            rep.add(f"psi.naturality[{idx}]", "psi' o f = U(Tr(f)) o psi", bad is None, witness=bad, window=window,
                    detail=f"ramification {r}")
    return rep


# ---------------------------------------------------------------------------
# lifting


@dataclass
class LiftResult:
    morphism: VHMorphism
    target: VH
    rescaled: bool
    report: Report


def lift_morphism(u: TripleMorphism, H: VH, H2: VH, window=DEFAULT_WINDOW) -> LiftResult:
    """``f = psi'^-1 o U(u) o psi``, after rescaling H2 so that ``w_H / w_H2 = r``."""
    if tr_object_closed_form(H) != u.source or tr_object_closed_form(H2) != u.target:
        raise EndpointMismatch("Tr(H), Tr(H') do not match the endpoints of u")
    rescaled = H.log_weight / H2.log_weight != u.r
    target = vh_rescale(H2, H.log_weight / u.r) if rescaled else H2
    f = VHMorphism(H, target, u.r, u.phi, u.eta_coeff)
    rep = Report()
    with rep.timed():
        psi, psi2, Uu = Psi(H), Psi(target), u_morphism(u)
        E = H.elements(window)
        bad = next((x for x in E if psi2(f(x)) != Uu(psi(x))), None)
        rep.add("lift.pointwise", "f = psi'^-1 o U(u) o psi on the window", bad is None, witness=bad, window=window)
        back = tr_morphism(f)
        rep.add("lift.tr_roundtrip", "Tr(lift(u)) = u", back.same(u),
                witness=None if back.same(u) else {"tr": back.to_json(), "u": u.to_json()})
        rep.add("lift.tr_unchanged", "Tr of the (possibly rescaled) target is unchanged",
                tr_object_closed_form(target) == tr_object_closed_form(H2))
    return LiftResult(f, target, rescaled, rep)


# ---------------------------------------------------------------------------
# hyperfield isomorphisms


@dataclass(frozen=True)
class HFIso:
    """A multiplicative bijection given by the image of pi and a map on unit classes."""

    source: VH
    target: VH
    pi_image: VHElem
    unit_map: tuple  # sorted ((unit rep, image unit), ...)

    @property
    def table(self) -> dict:
        return {self.source.unit_ring(a): self.target.unit_ring(b) for a, b in self.unit_map}

    def __call__(self, x: VHElem) -> VHElem:
        if x.unit is None:
            return ZERO
        u = self._table[x.unit]
        return vh_mul(self.target, vh_pow(self.target, self.pi_image, x.val), VHElem(0, u))

    @property
    def _table(self):
        t = self.__dict__.get("_t")
        if t is None:
            t = self.table
            object.__setattr__(self, "_t", t)
        return t

    def to_json(self):
        return {"pi_image": self.pi_image.to_json(), "unit_map": [[a if not isinstance(a, tuple) else list(a),
                                                                   b if not isinstance(b, tuple) else list(b)]
                                                                  for a, b in self.unit_map]}


def hf_iso_from_map(H: VH, H2: VH, pi_image: VHElem, unit_map: dict) -> HFIso:
    return HFIso(H, H2, pi_image, tuple(sorted(((a.rep, b.rep) for a, b in unit_map.items()), key=repr)))


def _hf_iso_laws(g: HFIso, window, pair_budget: int, seed: int):
    """First failing hyperfield-isomorphism law on the window, or None."""
    H, H2 = g.source, g.target
    lo, hi = window
    E = H.elements(window)
    img = {x: g(x) for x in E}
    if len(set(img.values())) != len(E):
        return {"law": "injective"}
    s = g.pi_image.val
    if s < 1:
        return {"law": "order", "pi_image": g.pi_image}
    for n in range(lo, hi + 1):
        if {img[x] for x in E if x.unit is not None and x.val == n} != {y for y in H2.elements((s * n, s * n)) if y.unit is not None}:
            return {"law": "surjective on strata", "stratum": n}
    pairs, _ = _sample(E, 2, pair_budget, random.Random(seed), [(H.one, H.one), (H.one, vh_neg(H, H.one))])
    for x, y in pairs:
        if g(vh_mul(H, x, y)) != vh_mul(H2, img[x], img[y]):
            return {"law": "multiplicative", "x": x, "y": y}
        B = vh_sum(H, x, y)
        mv = ball_min_val(H, B)
        left = ball_enumerate(H, B, hi) if mv == INF or mv <= hi else ({ZERO} if ball_contains(H, B, ZERO) else set())
        B2 = vh_sum(H2, img[x], img[y])
        mv2 = ball_min_val(H2, B2)
        top = s * hi
        right = ball_enumerate(H2, B2, top) if mv2 == INF or mv2 <= top else ({ZERO} if ball_contains(H2, B2, ZERO) else set())
        if {g(z) for z in left} != right:
            return {"law": "sums", "x": x, "y": y}
    return None


def hyperfield_iso_exponent_check(g: HFIso, window=DEFAULT_WINDOW, pair_budget: int = 2000, seed: int = 0):
    """Returns ``(report, induced triple isomorphism)``; raises NotAHyperfieldIso when the laws fail."""
    H, H2 = g.source, g.target
    bad = _hf_iso_laws(g, window, pair_budget, seed)
    if bad is not None:
        raise NotAHyperfieldIso(str(bad))
    E = H.elements(window)
    rep = Report()
    with rep.timed():
        # |x| <= |y|  iff  (x - x) is contained in (y - y), on both sides
        pairs, exh = _sample(E, 2, pair_budget, random.Random(seed))
        bad_order = None
        for x, y in pairs:
            a = ball_subset(H, vh_sum(H, x, vh_neg(H, x)), vh_sum(H, y, vh_neg(H, y)))
            b = ball_subset(H2, vh_sum(H2, g(x), vh_neg(H2, g(x))), vh_sum(H2, g(y), vh_neg(H2, g(y))))
            if a != b:
                bad_order = (x, y)
                break
        rep.add("iso.order", "(x-x) in (y-y) iff (g x - g x) in (g y - g y)", bad_order is None,
                witness=bad_order, window=window)
        exponent = H2.log_weight / H.log_weight
        bad_exp = next((x for x in E if H2.abs_log(g(x)) != (INF if x.unit is None else exponent * H.abs_log(x))), None)
        rep.add("iso.exponent_law", "|g(x)|' = |x|^(log theta' / log theta)", bad_exp is None, witness=bad_exp,
                window=window, detail=f"exponent {exponent}")
        rep.add("iso.uniformizer", "g(pi) has the least positive valuation", g.pi_image.val == 1,
                witness={"v(g(pi))": g.pi_image.val})
        # induced triple isomorphism: rescale the target so that g preserves |.|
        R, R2 = H.unit_ring, H2.unit_ring
        H2r = vh_rescale(H2, H.log_weight)

        def phi_point(a):
            return reduce_O(H2r, g(lift_O(H, a)))

        x_img = phi_point(R.generator) if R.e > 1 else None
        t_img = phi_point(R.uniformizer) if R.family == "poly" else None
        tri = None
        try:
            phi = RingHom(R, R2, x_img, t_img)
            pointwise = all(phi(a) == phi_point(a) for a in tdvr_enumerate(R))
            bij = len({phi(a) for a in tdvr_enumerate(R)}) == R2.size == R.size
            eta = reduce_O(H2r, VHElem(g.pi_image.val - 1, g.pi_image.unit))
            tri = TripleMorphism(tr_object_closed_form(H), tr_object_closed_form(H2), 1, phi, eta)
            ok = pointwise and bij and triple_morphism_validate(tri).passed
        except Exception as exc:  # the induced data may fail to be a ring map
            ok, pointwise = False, str(exc)
        rep.add("iso.triple", "g induces an isomorphism Tr(H) = Tr(H')", ok,
                witness=None if ok else {"pointwise": pointwise})
    return rep, tri


@dataclass
class IsoResult:
    status: str  # 'found' | 'not_isomorphic' | 'inconclusive'
    iso: HFIso | None = None
    witness: object = None

    def to_json(self):
        return {"status": self.status, "iso": None if self.iso is None else self.iso.to_json(),
                "witness": self.witness}


def _group_generators(units: list[TdvrElem]) -> list[TdvrElem]:
    one = units[0].ring.one
    group = {one}

    def close(gens):
        seen, frontier = {one}, [one]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = a * g
                    if b not in seen:
                        seen.add(b)
                        nxt.append(b)
            frontier = nxt
        return seen

    gens: list[TdvrElem] = []
    by_order = sorted(units, key=lambda u: (-_order(u), units.index(u)))
    for u in by_order:
        if len(group) == len(units):
            break
        if u not in group:
            gens.append(u)
            group = close(gens)
    return gens


def _order(u: TdvrElem) -> int:
    k, p = 1, u
    while p != u.ring.one:
        p = p * u
        k += 1
    return k


def _extend_hom(gens, images, one, one2):
    """BFS extension of generator images to a multiplicative map; None if inconsistent."""
    m = {one: one2}
    frontier = [one]
    while frontier:
        nxt = []
        for a in frontier:
            for g, h in zip(gens, images):
                b, c = a * g, m[a] * h
                if b in m:
                    if m[b] != c:
                        return None
                else:
                    m[b] = c
                    nxt.append(b)
        frontier = nxt
    return m


def vh_iso_search(H: VH, H2: VH, window=DEFAULT_WINDOW, candidate_budget: int = 2000,
                  pair_budget: int = 400, seed: int = 0) -> IsoResult:
    """Search over (pi image, unit-group generator images) with windowed sum checks."""
    one, one2 = H.one, H2.one
    inv = [
        ("unit group order", len(H.units), len(H2.units)),
        ("residue field size", H.unit_ring.q, H2.unit_ring.q),
        ("0 in 1+1", ball_contains(H, vh_sum(H, one, one), ZERO), ball_contains(H2, vh_sum(H2, one2, one2), ZERO)),
    ]
    for name, a, b in inv:
        if a != b:
            return IsoResult("not_isomorphic", witness={"invariant": name, "source": a, "target": b})
    if len(H.units) != len(H2.units):
        return IsoResult("not_isomorphic")
    gens = _group_generators(H.units)
    orders = [_order(g) for g in gens]
    pis = [VHElem(1, u) for u in H2.units]
    # the natural guess first: pi -> pi', units -> same representative when rings coincide
    if H.unit_ring == H2.unit_ring:
        pis.sort(key=lambda p: p.unit != H2.unit_ring.one)
    cand_lists = []
    for g, o in zip(gens, orders):
        cs = [u for u in H2.units if _order(u) == o]
        if H.unit_ring == H2.unit_ring:
            cs.sort(key=lambda u: u != g)
        cand_lists.append(cs)
    tried = 0
    last_fail = None
    for images in itertools.product(*cand_lists) if gens else [()]:
        m = _extend_hom(gens, images, H.unit_ring.one, H2.unit_ring.one)
        if m is None or len(set(m.values())) != len(H.units):
            continue
        for p in pis:
            tried += 1
            if tried > candidate_budget:
                return IsoResult("inconclusive", witness={"reason": "candidate budget exhausted", "tried": tried - 1})
            g = hf_iso_from_map(H, H2, p, m)
            bad = _hf_iso_laws(g, window, pair_budget, seed)
            if bad is None:
                return IsoResult("found", iso=g)
            last_fail = bad
    # every multiplicative candidate fails a sum law seen on the window
    return IsoResult("not_isomorphic", witness={"reason": "every candidate fails on the window", "last": last_fail})


# ---------------------------------------------------------------------------
# finite / flat


@dataclass
class FlatFinite:
    vh_flat: bool
    triple_flat: bool
    vh_finite: bool
    triple_finite: bool
    generators: list
    report: Report

    def to_json(self):
        return {"vh_flat": self.vh_flat, "triple_flat": self.triple_flat, "vh_finite": self.vh_finite,
                "triple_finite": self.triple_finite, "generator_count": len(self.generators),
                "generators": [g.to_json() for g in self.generators]}


def module_generators(phi: RingHom):
    """A minimal generating set of R' over R via phi, plus the span table.

    The set lifts a basis of ``R'/phi(m_R)R'`` over the residue field (Nakayama).
    """
    R, R2 = phi.source, phi.target
    pi_img = phi(R.uniformizer)
    ideal = {pi_img * b for b in tdvr_enumerate(R2)}
    residues = [phi(a) for a in tdvr_enumerate(R) if a.is_unit() or a.is_zero()]
    residue_reps = {}
    for a in tdvr_enumerate(R):
        key = phi(a)
        residue_reps.setdefault(key, a)

    def coset(b):
        return frozenset(b + z for z in ideal)

    span = {coset(R2.zero)}
    gens = []
    for b in tdvr_enumerate(R2):
        if coset(b) in span:
            continue
        gens.append(b)
        span = {coset(next(iter(s)) + phi(a) * b) for s in span for a in tdvr_enumerate(R)}
        if len(span) * len(ideal) >= R2.size:
            break
    # span of the lifted generators in R' with explicit coefficients
    table = {R2.zero: tuple(R.zero for _ in gens)}
    frontier = True
    while frontier:
        frontier = False
        for b, coeffs in list(table.items()):
            for k, g in enumerate(gens):
                for a in tdvr_enumerate(R):
                    c = b + phi(a) * g
                    if c not in table:
                        new = list(coeffs)
                        new[k] = new[k] + a
                        table[c] = tuple(new)
                        frontier = True
    return gens, table


def flat_finite_check(f: VHMorphism, u: TripleMorphism | None = None, window=None) -> FlatFinite:
    H, H2 = f.source, f.target
    tf = tr_morphism(f)
    if u is not None and not u.same(tf):
        raise EndpointMismatch("u is not Tr(f)")
    u = tf
    r = u.r
    rep = Report()
    with rep.timed():
        vh_flat = H.log_weight * H.rho_exp == H2.log_weight * H2.rho_exp
        lR, lR2 = tdvr_length(H.unit_ring), tdvr_length(H2.unit_ring)
        triple_flat = lR2 == lR * r
        rep.add("flat.agree", "rho_H = rho_H' iff l(R') = l(R) r", vh_flat == triple_flat,
                witness={"log_rho": H.log_weight * H.rho_exp, "log_rho'": H2.log_weight * H2.rho_exp,
                         "l(R)": lR, "l(R')": lR2, "r": r},
                detail=f"vh_flat={vh_flat} triple_flat={triple_flat}")
        gens, table = module_generators(u.phi)
        triple_finite = len(table) == H2.unit_ring.size
        rep.add("finite.triple", "phi makes R' a finite R-module", triple_finite,
                detail=f"{len(gens)} generators = dim of R'/m_R R' over the residue field")

        # spanning family alpha_k pi'^j, 0 <= j < r, checked on O_H' within the window
        lo, hi = window or (0, 2 * H2.level + r)
        alphas = [lift_O(H2, g) for g in gens]
        fam = [(k, j, vh_mul(H2, a, VHElem(j, H2.unit_ring.one))) for k, a in enumerate(alphas) for j in range(r)]
        fpi = f(H.uniformizer)
        bad = None
        for x in H2.elements((max(lo, 0), hi)):
            if x.unit is None:
                continue
            i, j = divmod(x.val, r)
            # x' = f(pi)^-i pi'^-j x has |x'| = 1
            xp = vh_mul(H2, x, vh_pow(H2, fpi, -i)) if i else x
            xp = vh_mul(H2, xp, VHElem(-j, H2.unit_ring.one))
            coeffs = table[reduce_O(H2, xp)]
            terms = []
            for k, a in enumerate(coeffs):
                if a.is_zero():
                    continue
                s = next(e for kk, jj, e in fam if kk == k and jj == j)
                terms.append(vh_mul(H2, f(vh_mul(H, vh_pow(H, H.uniformizer, i), lift_O(H, a))), s))
            if not ball_contains(H2, vh_multisum(H2, terms), x):
                bad = {"x": x, "coefficients": [c.to_json() for c in coeffs]}
                break
        vh_finite = bad is None
        rep.add("finite.vh", "O_H' is spanned by {alpha_k pi'^j : 0 <= j < r} over f(O_H)", vh_finite,
                witness=bad, window=(max(lo, 0), hi),
                detail="constructive spanning family checked on the window (a necessary-condition check)")
    return FlatFinite(vh_flat, triple_flat, vh_finite, triple_finite, gens, rep)


# ---------------------------------------------------------------------------
# essential surjectivity on the built-in families


def realize_triple(T: Triple):
    """A VH H and an isomorphism Tr(H) -> T for the built-in ring families."""
    R = T.R
    if R.family == "poly":
        base = LocalFieldDesc("equal_char", R.q)
    else:
        base = LocalFieldDesc("mixed_unram", R.q)
    H = VH(base, R.n)
    if H.unit_ring != R:
        raise BadParameter(f"{R.label} uses a non-default presentation")
    iso = TripleMorphism(tr_object_closed_form(H), T, 1, RingHom.identity(R), T.eps_unit.inv())
    return H, iso
