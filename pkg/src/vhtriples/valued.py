"""Discretely valued hyperfields K/(1+m^i) over desk-scale local fields.

An element is either ``ZERO`` or a class ``(val, unit)`` standing for
``pi^val * unit * (1+m^i)`` with ``unit`` a unit of ``O_K/m^i``.  Absolute values
are formal: ``log|x| = -w * v(x)`` with ``w = H.log_weight`` an exact rational,
so cross-hyperfield comparisons reduce to comparing ``w * v``.

Sums are closed balls ``Ball(center, radius_exp)``, meaning
``{z : d(z, center) <= theta^radius_exp}``; ``radius_exp=None`` is a point.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property

from .errors import (
    BadLevel,
    BadParameter,
    BadWeight,
    MismatchedVH,
    RamificationMismatch,
    WindowTooSmall,
    ZeroInverse,
)
from .exactnum import (
    INF,
    GaloisRingQuot,
    PolyQuot,
    RingHom,
    TdvrDescriptor,
    TdvrElem,
    ZpQuot,
    prime_power,
    roots_in,
    tdvr_enumerate,
)
from .report import INCONCLUSIVE, Report

DEFAULT_WINDOW = (-4, 6)


# ---------------------------------------------------------------------------
# base fields


@dataclass(frozen=True)
class LocalFieldDesc:
    """``equal_char``: F_q((t)).  ``mixed_unram``: unramified extension of Q_p with residue field F_q."""

    family: str
    q: int

    def __post_init__(self):
        if self.family not in ("equal_char", "mixed_unram"):
            raise BadParameter(f"unknown local field family {self.family!r}")
        prime_power(self.q)

    @property
    def p(self) -> int:
        return prime_power(self.q)[0]

    @property
    def e(self) -> int:
        return prime_power(self.q)[1]

    @property
    def label(self) -> str:
        if self.family == "equal_char":
            return f"F_{self.q}((t))"
        return f"Q_{self.p}" if self.e == 1 else f"Q_{self.p}^ur({self.q})"

    def ring(self, prec: int) -> TdvrDescriptor:
        """O_K / m_K^prec."""
        if self.family == "equal_char":
            return PolyQuot(self.q, prec)
        return ZpQuot(self.p, prec) if self.e == 1 else GaloisRingQuot(self.p, prec, self.e)

    def to_json(self):
        return {"family": self.family, "q": self.q}


def EqualChar(q: int) -> LocalFieldDesc:
    return LocalFieldDesc("equal_char", q)


def MixedUnram(p: int, e: int = 1) -> LocalFieldDesc:
    return LocalFieldDesc("mixed_unram", p**e)


# ---------------------------------------------------------------------------
# representative helpers


def _truncate(u: TdvrElem, k: int) -> TdvrElem:
    """Canonical lift of ``u mod pi^k`` (``k >= 1``)."""
    R = u.ring
    if k >= R.n:
        return u
    if R.family == "zp":
        return TdvrElem(R, u.rep % R.p**k)
    if R.family == "galois":
        m = R.p**k
        return TdvrElem(R, tuple(c % m for c in u.rep))
    return TdvrElem(R, u.rep[:k] + (0,) * (R.n - k))


def lift_to(u: TdvrElem, big: TdvrDescriptor) -> TdvrElem:
    """Canonical lift of ``u`` into a higher-precision quotient of the same DVR."""
    return big(u.rep if u.ring.family != "zp" else u.rep)


def reduce_to(x: TdvrElem, small: TdvrDescriptor) -> TdvrElem:
    if x.ring.family == "poly":
        return small(x.rep[: small.n])
    return small(x.rep)


# ---------------------------------------------------------------------------
# elements and balls


@dataclass(frozen=True, slots=True)
class VHElem:
    val: object  # int, or INF for zero
    unit: TdvrElem | None = None

    @property
    def is_zero(self) -> bool:
        return self.unit is None

    def sort_key(self):
        if self.unit is None:
            return (0, 0, ())
        return (1, self.val, self.unit.rep)

    def to_json(self):
        return "0" if self.unit is None else [self.val, self.unit.to_json()]

    def __str__(self):
        return "0" if self.unit is None else f"({self.val},{self.unit})"

    __repr__ = __str__


ZERO = VHElem(INF, None)


def Class(val: int, unit: TdvrElem) -> VHElem:
    return VHElem(val, unit)


@dataclass(frozen=True, slots=True)
class Ball:
    center: VHElem
    radius_exp: int | None  # None: the point {center}

    def to_json(self):
        return {"center": self.center.to_json(), "radius_exp": self.radius_exp}

    def __str__(self):
        if self.radius_exp is None:
            return f"{{{self.center}}}"
        return f"B({self.center}, theta^{self.radius_exp})"


# ---------------------------------------------------------------------------
# the hyperfield


@dataclass(frozen=True)
class VH:
    base: LocalFieldDesc
    level: int
    log_weight: Fraction = Fraction(1)
    rho_exp: int | None = None

    def __post_init__(self):
        if not isinstance(self.level, int) or self.level < 1:
            raise BadLevel(f"level must be a positive integer, got {self.level!r}")
        w = Fraction(self.log_weight)
        if w <= 0:
            raise BadWeight(f"log weight must be positive, got {w}")
        object.__setattr__(self, "log_weight", w)
        if self.rho_exp is None:
            object.__setattr__(self, "rho_exp", self.level)

    @cached_property
    def unit_ring(self) -> TdvrDescriptor:
        return self.base.ring(self.level)

    @property
    def label(self) -> str:
        return f"{self.base.label}/(1+m^{self.level})"

    @property
    def one(self) -> VHElem:
        return VHElem(0, self.unit_ring.one)

    @property
    def uniformizer(self) -> VHElem:
        return VHElem(1, self.unit_ring.one)

    @property
    def zero(self) -> VHElem:
        return ZERO

    @cached_property
    def units(self) -> list[TdvrElem]:
        return tdvr_enumerate(self.unit_ring, "units")

    def elem(self, val, unit=None) -> VHElem:
        """Build ``Class(val, unit)`` from raw data; ``elem(None)`` is zero."""
        if val is None or val == INF:
            return ZERO
        u = self.unit_ring(unit if unit is not None else 1)
        if not u.is_unit():
            raise BadParameter(f"{u} is not a unit of {self.unit_ring.label}")
        return VHElem(int(val), u)

    def from_field(self, val: int, x: TdvrElem) -> VHElem:
        """Class of ``pi^val * x`` for ``x`` in some ``O_K/m^P``; zero if x is zero."""
        if x.is_zero():
            return ZERO
        k = x.valuation()
        u = TdvrElem(x.ring, x.ring._split_rep(x.rep, k))
        if x.ring.n - k < self.level:
            raise WindowTooSmall("not enough precision to determine the class")
        return VHElem(val + k, reduce_to(u, self.unit_ring))

    def elements(self, window=DEFAULT_WINDOW) -> list[VHElem]:
        lo, hi = window
        return [ZERO] + [VHElem(v, u) for v in range(lo, hi + 1) for u in self.units]

    def abs_log(self, x: VHElem):
        """``-log|x|`` as an exact rational (INF for zero)."""
        return INF if x.unit is None else self.log_weight * x.val

    def to_json(self):
        out = {"base": self.base.to_json(), "level": self.level, "log_weight": str(self.log_weight)}
        if self.rho_exp != self.level:
            out["rho_exp"] = self.rho_exp
        return out


def vh_make(base: LocalFieldDesc, level: int, log_weight=Fraction(1)) -> VH:
    return VH(base, level, Fraction(log_weight))


def vh_rescale(H: VH, new_weight) -> VH:
    w = Fraction(new_weight)
    if w <= 0:
        raise BadWeight(f"log weight must be positive, got {w}")
    return replace(H, log_weight=w)


def _same(H: VH, *xs: VHElem):
    R = H.unit_ring
    for x in xs:
        if x.unit is not None and x.unit.ring != R:
            raise MismatchedVH(f"{x} does not belong to {H.label}")


# ---------------------------------------------------------------------------
# arithmetic


def vh_mul(H: VH, x: VHElem, y: VHElem) -> VHElem:
    if x.unit is None or y.unit is None:
        return ZERO
    return VHElem(x.val + y.val, x.unit * y.unit)


def vh_inv(H: VH, x: VHElem) -> VHElem:
    if x.unit is None:
        raise ZeroInverse("0 has no inverse")
    return VHElem(-x.val, x.unit.inv())


def vh_neg(H: VH, x: VHElem) -> VHElem:
    return x if x.unit is None else VHElem(x.val, -x.unit)


def vh_pow(H: VH, x: VHElem, k: int) -> VHElem:
    if x.unit is None:
        if k <= 0:
            raise ZeroInverse("0 has no inverse")
        return ZERO
    return VHElem(x.val * k, x.unit**k)


def _pi_pow(R: TdvrDescriptor, k: int) -> TdvrElem:
    return R.uniformizer**k if k < R.n else R.zero


def vh_sum(H: VH, x: VHElem, y: VHElem) -> Ball:
    """The set ``x + y``: a closed ball of radius ``theta^(level + min v)``."""
    if x.unit is None:
        return Ball(y, None) if y.unit is None else Ball(y, y.val + H.level)
    if y.unit is None:
        return Ball(x, x.val + H.level)
    if y.val < x.val:
        x, y = y, x
    a, d = x.val, y.val - x.val
    R = x.unit.ring
    s = x.unit + _pi_pow(R, d) * y.unit if d < R.n else x.unit
    radius = a + H.level
    if s.is_zero():
        return Ball(ZERO, radius)
    k = s.valuation()
    return Ball(VHElem(a + k, TdvrElem(R, R._split_rep(s.rep, k))), radius)


def vh_distance(H: VH, x: VHElem, y: VHElem):
    """Exponent m with ``d(x, y) = theta^m``; INF when x = y."""
    if x == y:
        return INF
    if x.unit is None:
        return y.val
    if y.unit is None:
        return x.val
    if x.val != y.val:
        return min(x.val, y.val)
    return x.val + (x.unit - y.unit).valuation()


def ball_normal(H: VH, B: Ball) -> Ball:
    """Canonical form: equal balls (as sets) have equal normal forms."""
    c, m = B.center, B.radius_exp
    if m is None:
        return B
    if c.unit is None:
        return B
    if m <= c.val:
        return Ball(ZERO, m)
    if m >= c.val + H.level:
        return Ball(c, None)
    return Ball(VHElem(c.val, _truncate(c.unit, m - c.val)), m)


def ball_contains(H: VH, B: Ball, z: VHElem) -> bool:
    if B.radius_exp is None:
        return z == B.center
    return vh_distance(H, z, B.center) >= B.radius_exp


def ball_equal(H: VH, A: Ball, B: Ball) -> bool:
    return ball_normal(H, A) == ball_normal(H, B)


def ball_subset(H: VH, A: Ball, B: Ball) -> bool:
    A, B = ball_normal(H, A), ball_normal(H, B)
    if A.radius_exp is None:
        return ball_contains(H, B, A.center)
    if B.radius_exp is None:
        return False
    return A.radius_exp >= B.radius_exp and ball_contains(H, B, A.center)


def ball_min_val(H: VH, B: Ball):
    """Smallest valuation of a member (INF for the point ball at 0)."""
    B = ball_normal(H, B)
    if B.center.unit is None:
        return INF if B.radius_exp is None else B.radius_exp
    return B.center.val


def ball_enumerate(H: VH, B: Ball, v_max: int) -> set[VHElem]:
    """Members with ``v <= v_max``, plus 0 when the ball contains it."""
    N = ball_normal(H, B)
    c, m = N.center, N.radius_exp
    if m is None:
        if c.unit is not None and c.val > v_max:
            raise WindowTooSmall(f"v_max={v_max} is below the member valuation {c.val}")
        return {c}
    if c.unit is None:
        if v_max < m:
            raise WindowTooSmall(f"v_max={v_max} is below the ball radius exponent {m}")
        return {ZERO} | {VHElem(v, u) for v in range(m, v_max + 1) for u in H.units}
    if c.val > v_max:
        raise WindowTooSmall(f"v_max={v_max} is below the member valuation {c.val}")
    k = m - c.val
    return {VHElem(c.val, u) for u in H.units if (u - c.unit).valuation() >= k}


def vh_multisum(H: VH, xs) -> Ball:
    """Iterated sum: for K/(1+m^i) it is the ball around the lifted sum of radius i + min v."""
    xs = [x for x in xs if x.unit is not None]
    if not xs:
        return Ball(ZERO, None)
    a = min(x.val for x in xs)
    P = H.level + max(x.val for x in xs) - a + 1
    big = H.base.ring(P)
    acc = big.zero
    for x in xs:
        d = x.val - a
        if d < P:
            acc = acc + _pi_pow(big, d) * lift_to(x.unit, big)
    radius = a + H.level
    if acc.valuation() >= H.level:
        return Ball(ZERO, radius)
    k = acc.valuation()
    u = TdvrElem(big, big._split_rep(acc.rep, k))
    return Ball(VHElem(a + k, reduce_to(u, H.unit_ring)), radius)


# ---------------------------------------------------------------------------
# brute-force oracle over lifts


def lift_sum(H: VH, x: VHElem, y: VHElem, v_max: int) -> frozenset:
    """``{class(x~ + y~ h) : h in 1+m^i}`` restricted to ``v <= v_max``, by brute force.

    Lifts live in ``O_K/m^P`` with ``P`` just large enough to pin down every class
    of valuation at most ``v_max``.  0 is included exactly when ``y = -x``.
    """
    if x.unit is None or y.unit is None:
        z = y if x.unit is None else x
        return frozenset({z} if z.unit is None or z.val <= v_max else set())
    if y.val < x.val:
        x, y = y, x
    a, d, i = x.val, y.val - x.val, H.level
    out = {ZERO} if y == vh_neg(H, x) else set()
    if v_max < a:
        return frozenset(out)
    P = v_max - a + i
    big = H.base.ring(P)
    xt = lift_to(x.unit, big)
    yt = lift_to(y.unit, big)
    pi_d = _pi_pow(big, d)
    pi_i = _pi_pow(big, i)
    if P > i:
        tails = [pi_i * lift_to(c, big) for c in tdvr_enumerate(H.base.ring(P - i))]
    else:
        tails = [big.zero]
    for c in tails:
        s = xt + pi_d * (yt + yt * c)
        if s.is_zero():
            continue
        k = s.valuation()
        if a + k > v_max:
            continue
        out.add(H.from_field(a, s))
    return frozenset(out)


def vh_theta_rho(H: VH, search_limit: int | None = None) -> tuple[Fraction, int]:
    """``(w, rho_exp)`` with rho read off the ball ``1 + (-1)`` via the lift oracle."""
    limit = search_limit or H.level + 2
    one = H.one
    for v_max in range(1, limit + 1):
        members = lift_sum(H, one, vh_neg(H, one), v_max) - {ZERO}
        if members:
            return H.log_weight, min(z.val for z in members)
    raise WindowTooSmall(f"no nonzero member of 1-1 with v <= {limit}")


# ---------------------------------------------------------------------------
# windowed axiom verification


def _sample(pool: list, k: int, budget: int, rng: random.Random, core=()):
    """All k-tuples when that fits the budget, else the core tuples plus a seeded sample."""
    total = len(pool) ** k
    if total <= budget:
        return list(itertools.product(pool, repeat=k)), True
    picks = [tuple(c) for c in core]
    while len(picks) < budget:
        picks.append(tuple(rng.choice(pool) for _ in range(k)))
    return picks, False


def _union_sum(H: VH, B: Ball, z: VHElem, hi: int) -> frozenset:
    """``B + z`` (union of ``t + z`` over members t of B) restricted to ``v <= hi``.

    Members t with ``v(t) >= v(z) + level`` give ``t + z = {z}`` just like 0, so
    enumerating B up to that valuation (plus 0 when present) is enough.
    """
    top = hi if z.unit is None else max(hi, z.val + H.level - 1)
    mv = ball_min_val(H, B)
    ts = {ZERO} if mv == INF else ball_enumerate(H, B, max(top, mv))
    out, seen = set(), set()
    for t in ts:
        S = ball_normal(H, vh_sum(H, t, z))
        if S in seen:
            continue
        seen.add(S)
        if ball_min_val(H, S) <= hi:
            out |= ball_enumerate(H, S, hi)
        elif ball_contains(H, S, ZERO):
            out.add(ZERO)
    return frozenset(out)


def vh_verify_axioms(H: VH, window=DEFAULT_WINDOW, pair_budget: int = 150_000,
                     triple_budget: int = 600, seed: int = 0) -> Report:
    """Axioms (i)-(v) and (a)-(e) on the window ``lo <= v <= hi``.

    Pairwise laws are exhaustive up to ``pair_budget`` pairs; laws quantifying
    over three elements are exhaustive up to ``triple_budget`` triples and
    otherwise use a seeded sample that always contains the triples built from
    0, 1, -1 and the uniformizer.  The report says which regime was used.
    """
    lo, hi = window
    rng = random.Random(seed)
    E = H.elements(window)
    win = (lo, hi)
    rep = Report()
    one, m1, pi = H.one, vh_neg(H, H.one), H.uniformizer
    specials = [x for x in (ZERO, one, m1, pi, vh_neg(H, pi)) if x.unit is None or lo <= x.val <= hi]

    with rep.timed():
        # the ball 1 + (-1) is tested first so that a bad rho is reported on it
        core_pairs = [(one, m1)] + [(x, y) for x in specials for y in specials]
        pairs, exhaustive = _sample(E, 2, pair_budget, rng, core_pairs)
        if exhaustive:
            pairs = core_pairs + pairs
        pdetail = "exhaustive over pairs" if exhaustive else f"seeded sample of {len(pairs)} pairs"

        w = {}

        def fail(key, witness):
            if key not in w:
                w[key] = witness

        sums = {}

        def S(x, y):
            k = (x, y)
            b = sums.get(k)
            if b is None:
                b = sums[k] = vh_sum(H, x, y)
            return b

        for x in E:
            if (x.unit is None) != (H.abs_log(x) == INF):
                fail("i", x)
        for x, y in pairs:
            B = S(x, y)
            xy = vh_mul(H, x, y)
            # |.| = theta^v with theta fixed, so (ii) is additivity of v
            if xy.val != x.val + y.val:
                fail("ii", (x, y))
            mv = min(x.val, y.val)
            has0 = ball_contains(H, B, ZERO)
            if ball_min_val(H, B) < mv:
                fail("iii", (x, y))
            N = ball_normal(H, B)
            if not has0 and (N.center.unit is None or (N.radius_exp is not None and N.radius_exp <= N.center.val)):
                fail("iv", (x, y))
            if mv != INF:
                if B.radius_exp != H.rho_exp + mv:
                    fail("v", {"x": x, "y": y, "radius_exp": B.radius_exp, "expected": H.rho_exp + mv})
            if not ball_equal(H, B, S(y, x)):
                fail("b", (x, y))
            if has0 and y != vh_neg(H, x):
                fail("d", (x, y))
            if vh_mul(H, x, y) != vh_mul(H, y, x):
                fail("mul.commutative", (x, y))
        for x in E:
            if not ball_equal(H, S(x, ZERO), Ball(x, None)):
                fail("c", x)
            if not ball_contains(H, S(x, vh_neg(H, x)), ZERO):
                fail("d", (x, vh_neg(H, x)))
            if vh_mul(H, x, one) != x:
                fail("mul.unital", x)
            if x.unit is not None and vh_mul(H, x, vh_inv(H, x)) != one:
                fail("mul.inverses", x)

        # rho is the least exponent with ball 1-1 of that radius: pi^rho is in 1-1, pi^(rho-1) is not
        B11 = S(one, m1)
        rho_ok = (ball_contains(H, B11, VHElem(H.rho_exp, H.unit_ring.one))
                  and not ball_contains(H, B11, VHElem(H.rho_exp - 1, H.unit_ring.one)))
        if not rho_ok:
            fail("v", {"x": one, "y": m1, "rho_exp": H.rho_exp, "ball": B11})

        core_triples = [(a, b, c) for a in specials for b in specials for c in specials]
        triples, texh = _sample(E, 3, triple_budget, rng, core_triples)
        tdetail = "exhaustive over triples" if texh else f"seeded sample of {len(triples)} triples"
        for x, y, z in triples:
            if not ball_subset(H, _scale(H, S(x, y), z), S(vh_mul(H, x, z), vh_mul(H, y, z))):
                fail("distributivity", (x, y, z))
            if ball_contains(H, S(y, vh_neg(H, z)), x) != ball_contains(H, S(x, z), y):
                fail("e", (x, y, z))
            if vh_mul(H, vh_mul(H, x, y), z) != vh_mul(H, x, vh_mul(H, y, z)):
                fail("mul.associative", (x, y, z))
        assoc_triples = triples[: max(1, triple_budget // 4)] if not texh else triples
        for x, y, z in assoc_triples:
            left = _union_sum(H, S(x, y), z, hi)
            right = _union_sum(H, S(y, z), x, hi)
            if left != right:
                fail("a", {"x": x, "y": y, "z": z,
                           "only_left": sorted(left - right, key=VHElem.sort_key)[:5],
                           "only_right": sorted(right - left, key=VHElem.sort_key)[:5]})

        adet = "exhaustive over triples" if texh else f"seeded sample of {len(assoc_triples)} triples"
        entries = [
            ("i", "valued hyperfield (i): |x| >= 0 with equality only at 0", pdetail),
            ("ii", "valued hyperfield (ii): |xy| = |x||y|", pdetail),
            ("iii", "valued hyperfield (iii): |x+y| <= max(|x|,|y|)", pdetail),
            ("iv", "valued hyperfield (iv): |x+y| is a single value unless 0 in x+y", pdetail),
            ("v", "valued hyperfield (v): x+y is a closed ball of radius rho*max(|x|,|y|)", pdetail),
            ("a", "hypergroup (a): associativity, unions compared on the window", adet),
            ("b", "hypergroup (b): commutativity", pdetail),
            ("c", "hypergroup (c): x + 0 = {x}", "all window elements"),
            ("d", "hypergroup (d): unique negative", pdetail),
            ("e", "hypergroup (e): reversibility", tdetail),
            ("mul.commutative", "multiplication commutative", pdetail),
            ("mul.associative", "multiplication associative", tdetail),
            ("mul.unital", "1 is a multiplicative unit", "all window elements"),
            ("mul.inverses", "nonzero elements invertible", "all window elements"),
            ("distributivity", "(x+y)z is contained in xz+yz", tdetail),
        ]
        for key, anchor, det in entries:
            rep.add(f"vh.{key}", anchor, key not in w, witness=w.get(key), window=win, detail=det)
        rep.add("vh.zero_ne_one", "0 != 1", True, window=win)
    return rep


def _scale(H: VH, B: Ball, z: VHElem) -> Ball:
    """``B * z`` for a ball B and an element z."""
    if z.unit is None:
        return Ball(ZERO, None)
    c = vh_mul(H, B.center, z)
    return Ball(c, None if B.radius_exp is None else B.radius_exp + z.val)


# ---------------------------------------------------------------------------
# morphisms


@dataclass(frozen=True)
class VHMorphism:
    """``Class(n, u) -> Class(ram*n, hom(u) * unit_image^n)``, ``0 -> 0``.

    ``hom`` maps ``O_K/m^i`` to ``O_L/m^{i'}`` and must send ``pi`` to
    ``unit_image * pi'^ram``; it comes from an embedding ``K -> L``.
    """

    source: VH
    target: VH
    ram: int
    hom: RingHom
    unit_image: TdvrElem

    def __call__(self, x: VHElem) -> VHElem:
        if x.unit is None:
            return ZERO
        return VHElem(self.ram * x.val, self.hom(x.unit) * self.unit_image**x.val)

    def to_json(self):
        return {
            "ram": self.ram,
            "hom": self.hom.to_json(),
            "unit_image": self.unit_image.to_json(),
        }


def residue_embedding_root(h, target: TdvrDescriptor) -> TdvrElem:
    """Least root of the residue modulus in ``target`` (the image of x)."""
    roots = roots_in(h, target)
    if not roots:
        raise BadParameter(f"no root of {h} in {target.label}")
    return roots[0]


def vh_embedding_morphism(src: VH, tgt: VH, ram: int, hom: RingHom | None = None,
                          unit_image=None) -> VHMorphism:
    """Morphism induced by an embedding of local fields with ramification ``ram``.

    Without ``hom`` the standard embedding is used: residue field by the least
    root of its modulus, and ``t -> s^ram`` (equal characteristic) or ``p -> p``.
    """
    if ram < 1:
        raise RamificationMismatch("ramification index must be positive")
    if tgt.level > ram * src.level:
        raise RamificationMismatch(
            f"target level {tgt.level} exceeds ram * source level = {ram * src.level}")
    if src.base.family != tgt.base.family:
        raise RamificationMismatch("cannot embed between characteristics")
    if src.base.family == "mixed_unram" and ram != 1:
        raise RamificationMismatch("ramified extensions of mixed characteristic are out of scope")
    if src.base.p != tgt.base.p or tgt.base.e % src.base.e:
        raise BadParameter(f"{src.base.label} does not embed in {tgt.base.label}")
    R, R2 = src.unit_ring, tgt.unit_ring
    if hom is None:
        x_img = residue_embedding_root(R.modulus, R2) if R.e > 1 else None
        t_img = R2.uniformizer**ram if R.family == "poly" else None
        hom = RingHom(R, R2, x_img, t_img)
    c = R2.one if unit_image is None else R2(unit_image)
    if not c.is_unit():
        raise BadParameter(f"unit image {c} is not a unit")
    bad = hom.relation_failures()
    if bad:
        raise BadParameter("; ".join(bad))
    if hom(R.uniformizer) != c * R2.uniformizer**ram:
        raise RamificationMismatch("hom(pi) is not unit_image * pi'^ram")
    return VHMorphism(src, tgt, ram, hom, c)


def vh_identity(H: VH) -> VHMorphism:
    return VHMorphism(H, H, 1, RingHom.identity(H.unit_ring), H.unit_ring.one)


def vh_compose(g: VHMorphism, f: VHMorphism) -> VHMorphism:
    """``g o f``."""
    if f.target.base != g.source.base or f.target.level != g.source.level:
        raise MismatchedVH("morphisms are not composable")
    return VHMorphism(f.source, g.target, f.ram * g.ram, g.hom.compose(f.hom),
                      g.hom(f.unit_image) * g.unit_image**f.ram)


def vh_morphisms_agree(f: VHMorphism, g: VHMorphism, window=DEFAULT_WINDOW):
    """First window element where ``f`` and ``g`` differ, or None."""
    for x in f.source.elements(window):
        if f(x) != g(x):
            return x
    return None


def vh_verify_morphism(f: VHMorphism, window=DEFAULT_WINDOW, pair_budget: int = 4000,
                       seed: int = 0) -> Report:
    H, H2 = f.source, f.target
    lo, hi = window
    E = H.elements(window)
    rng = random.Random(seed)
    rep = Report()
    with rep.timed():
        pairs, exh = _sample(E, 2, pair_budget, rng, [(H.one, H.one), (H.one, vh_neg(H, H.one))])
        det = "exhaustive over pairs" if exh else f"seeded sample of {len(pairs)} pairs"
        img = {x: f(x) for x in E}
        fibers: dict[VHElem, list[VHElem]] = {}
        for x in E:
            fibers.setdefault(img[x], []).append(x)

        w1 = next(((x, y) for x, y in pairs if f(vh_mul(H, x, y)) != vh_mul(H2, img[x], img[y])), None)
        rep.add("morphism.i", "morphism (i): f(xy) = f(x)f(y)", w1 is None, witness=w1, window=window, detail=det)

        # (ii) compared on window elements; the image-side sum is enumerated as a ball
        w2 = None
        budget2 = max(1, pair_budget // 20)
        for x, y in pairs[:budget2]:
            target_ball = vh_sum(H2, img[x], img[y])
            lhs = frozenset(z for z in E if ball_contains(H2, target_ball, img[z]))
            rhs = set()
            for x2 in fibers[img[x]]:
                for y2 in fibers[img[y]]:
                    B = vh_sum(H, x2, y2)
                    rhs |= {z for z in ball_enumerate(H, B, max(hi, ball_min_val(H, B)) if ball_min_val(H, B) != INF else hi)
                            if z.unit is None or lo <= z.val <= hi}
            if lhs != frozenset(rhs):
                w2 = {"a": img[x], "b": img[y], "only_preimage": sorted(lhs - rhs, key=VHElem.sort_key)[:5],
                      "only_sum": sorted(rhs - lhs, key=VHElem.sort_key)[:5]}
                break
        rep.add("morphism.ii", "morphism (ii): f^-1(a+b) = f^-1(a) + f^-1(b)", w2 is None, witness=w2,
                window=window, detail=f"{min(len(pairs), budget2)} image pairs")

        w3 = next((x for x in E if H2.abs_log(img[x]) != H.abs_log(x)), None)
        rep.add("morphism.iii", "morphism (iii): |f(x)| = |x|", w3 is None,
                witness=None if w3 is None else {"x": w3, "f(x)": img[w3],
                                                  "source_log": H.abs_log(w3), "target_log": H2.abs_log(img[w3])},
                window=window)

        fib = [x for x in E if img[x] == H2.one]
        m = min((vh_distance(H, x, H.one) for x in fib), default=INF)
        ball = Ball(H.one, None if m == INF else m)
        w4 = next((x for x in E if ball_contains(H, ball, x) != (img[x] == H2.one)), None)
        rep.add("morphism.iv", "morphism (iv): the fiber over 1 is a ball", w4 is None,
                witness=None if w4 is None else {"x": w4, "ball": ball}, window=window,
                detail="membership characterization on the window")
    return rep


def vh_morphism_lemmas(f: VHMorphism, window=DEFAULT_WINDOW, pair_budget: int = 20_000, seed: int = 0) -> Report:
    """rho monotonicity and the distance lemma ``d(f(x),f(y)) <= d(x,y)``, equal when images differ."""
    H, H2 = f.source, f.target
    rep = Report()
    with rep.timed():
        # rho' >= rho  <=>  w' * rho_exp' <= w * rho_exp
        ok = H2.log_weight * H2.rho_exp <= H.log_weight * H.rho_exp
        rep.add("lemma.rho_monotone", "rho of the target is at least rho of the source", ok,
                witness={"source": H.log_weight * H.rho_exp, "target": H2.log_weight * H2.rho_exp})
        E = H.elements(window)
        pairs, exh = _sample(E, 2, pair_budget, random.Random(seed))
        bad = None
        for x, y in pairs:
            fx, fy = f(x), f(y)
            d = vh_distance(H, x, y)
            d2 = vh_distance(H2, fx, fy)
            dl = INF if d == INF else H.log_weight * d
            dl2 = INF if d2 == INF else H2.log_weight * d2
            if dl2 < dl or (fx != fy and dl2 != dl):
                bad = {"x": x, "y": y, "source_log_distance": dl, "target_log_distance": dl2}
                break
        rep.add("lemma.distance", "d(f(x),f(y)) <= d(x,y) with equality when f(x) != f(y)", bad is None,
                witness=bad, window=window,
                detail="exhaustive over pairs" if exh else f"seeded sample of {len(pairs)} pairs")
    return rep
