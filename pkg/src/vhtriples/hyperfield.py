"""Plain hyperfields: finite tables, quotients K/G, and two lazy rational carriers.

Finite hyperfields store their elements as integer ids ``0..N-1`` with labels.
The lazy ones (Viro's hyperfield and the tropical reals) work over
``fractions.Fraction`` values, with ``NEG_INF`` adjoined for Viro's.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import AxiomViolation, BadParameter, NotASubgroup, NotInCarrier
from .exactnum import TdvrDescriptor, TdvrElem, finite_field, prime_power, tdvr_enumerate
from .report import Report

NEG_INF = -math.inf


# ---------------------------------------------------------------------------
# sum sets


@dataclass(frozen=True)
class Finite:
    elements: frozenset

    def contains(self, t) -> bool:
        return t in self.elements

    def points(self):
        return set(self.elements)


@dataclass(frozen=True)
class DownSet:
    """``{t | t <= bound}`` in a totally ordered carrier."""

    bound: object

    def contains(self, t) -> bool:
        return t <= self.bound

    def points(self):
        return {self.bound}


@dataclass(frozen=True)
class Interval:
    lo: object
    hi: object
    closed: bool = True

    def contains(self, t) -> bool:
        if self.closed:
            return self.lo <= t <= self.hi
        return self.lo < t < self.hi

    def points(self):
        return {self.lo, self.hi}


SumSet = Finite | DownSet | Interval


def _finite(*xs) -> Finite:
    return Finite(frozenset(xs))


# ---------------------------------------------------------------------------
# finite hyperfields


@dataclass(frozen=True)
class FiniteHyperfield:
    name: str
    labels: tuple[str, ...]
    zero: int
    one: int
    mul: tuple[tuple[int, ...], ...]
    hsum: tuple[tuple[frozenset, ...], ...]

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def carrier(self) -> range:
        return range(len(self.labels))

    def elem(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise NotInCarrier(f"{label!r} is not an element of {self.name}") from None

    def with_sum(self, x: int, y: int, value) -> "FiniteHyperfield":
        """Copy with ``x+y`` (and ``y+x``) overwritten -- used to build broken tables."""
        rows = [list(r) for r in self.hsum]
        rows[x][y] = rows[y][x] = frozenset(value)
        return FiniteHyperfield(self.name + "*", self.labels, self.zero, self.one, self.mul,
                                tuple(tuple(r) for r in rows))

    def table(self) -> str:
        """Cayley-style rendering of the sum and product tables."""
        w = max(len(s) for s in self.labels)
        cells = [[("{" + ",".join(self.labels[t] for t in sorted(self.hsum[x][y])) + "}")
                  for y in self.carrier] for x in self.carrier]
        cw = max(w, max(len(c) for row in cells for c in row))
        out = [f"{self.name}  (+)", " " * (w + 3) + " ".join(s.rjust(cw) for s in self.labels)]
        for x in self.carrier:
            out.append(self.labels[x].rjust(w) + " | " + " ".join(c.rjust(cw) for c in cells[x]))
        out.append(f"{self.name}  (*)")
        out.append(" " * (w + 3) + " ".join(s.rjust(w) for s in self.labels))
        for x in self.carrier:
            out.append(self.labels[x].rjust(w) + " | " +
                       " ".join(self.labels[self.mul[x][y]].rjust(w) for y in self.carrier))
        return "\n".join(out)

    def to_json(self):
        return {
            "name": self.name,
            "labels": list(self.labels),
            "zero": self.zero,
            "one": self.one,
            "mul": [list(r) for r in self.mul],
            "hsum": [[sorted(s) for s in r] for r in self.hsum],
        }

    @classmethod
    def from_json(cls, d) -> "FiniteHyperfield":
        return cls(
            d.get("name", "H"),
            tuple(d["labels"]),
            d["zero"],
            d["one"],
            tuple(tuple(r) for r in d["mul"]),
            tuple(tuple(frozenset(s) for s in r) for r in d["hsum"]),
        )


# ---------------------------------------------------------------------------
# lazy hyperfields over the rationals


class LazyHyperfield:
    name = "lazy"
    zero: object
    one: object

    def in_carrier(self, x) -> bool:
        return isinstance(x, (int, Fraction))

    def mul(self, x, y):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def hsum(self, x, y) -> SumSet:
        raise NotImplementedError

    def neg(self, x):
        raise NotImplementedError


class ViroY(LazyHyperfield):
    """Rationals with -inf; product is addition, x+y is max(x,y) or a down-set."""

    name = "viro_y"
    zero = NEG_INF
    one = Fraction(0)

    def in_carrier(self, x):
        return x == NEG_INF or isinstance(x, (int, Fraction))

    def mul(self, x, y):
        if x == NEG_INF or y == NEG_INF:
            return NEG_INF
        return Fraction(x) + Fraction(y)

    def inv(self, x):
        return -Fraction(x)

    def hsum(self, x, y):
        if x != y:
            return _finite(max(x, y))
        if x == NEG_INF:
            return _finite(NEG_INF)
        return DownSet(x)

    def neg(self, x):
        return x


class TropicalReals(LazyHyperfield):
    """Rationals with x+y the larger in absolute value, or [-x, x] when y = -x."""

    name = "tr_reals"
    zero = Fraction(0)
    one = Fraction(1)

    def mul(self, x, y):
        return Fraction(x) * Fraction(y)

    def inv(self, x):
        return 1 / Fraction(x)

    def hsum(self, x, y):
        if abs(x) > abs(y):
            return _finite(x)
        if abs(y) > abs(x):
            return _finite(y)
        if x == y:
            return _finite(x)
        return Interval(-abs(x), abs(x))

    def neg(self, x):
        return -x


Hyperfield = FiniteHyperfield | LazyHyperfield


# ---------------------------------------------------------------------------
# operations


def _check_member(H, x):
    ok = x in H.carrier if isinstance(H, FiniteHyperfield) else H.in_carrier(x)
    if not ok:
        raise NotInCarrier(f"{x!r} is not in {H.name}")


def hf_sum(H: Hyperfield, x, y) -> SumSet:
    _check_member(H, x)
    _check_member(H, y)
    if isinstance(H, FiniteHyperfield):
        return Finite(H.hsum[x][y])
    return H.hsum(x, y)


def hf_neg(H: Hyperfield, x):
    """The unique ``y`` with ``0 in x + y``."""
    _check_member(H, x)
    if isinstance(H, LazyHyperfield):
        return H.neg(x)
    found = [y for y in H.carrier if H.zero in H.hsum[x][y]]
    if len(found) != 1:
        raise AxiomViolation(f"{H.labels[x]} has {len(found)} negatives")
    return found[0]


def hf_mul(H: Hyperfield, x, y):
    _check_member(H, x)
    _check_member(H, y)
    if isinstance(H, FiniteHyperfield):
        return H.mul[x][y]
    return H.mul(x, y)


def hf_builtin(name: str, q: int | None = None) -> Hyperfield:
    if name == "krasner":
        return FiniteHyperfield(
            "K", ("0", "1"), 0, 1,
            mul=((0, 0), (0, 1)),
            hsum=((frozenset({0}), frozenset({1})), (frozenset({1}), frozenset({0, 1}))),
        )
    if name == "signs":
        Z, P, N = frozenset({0}), frozenset({1}), frozenset({2})
        return FiniteHyperfield(
            "S", ("0", "1", "-1"), 0, 1,
            mul=((0, 0, 0), (0, 1, 2), (0, 2, 1)),
            hsum=((Z, P, N), (P, P, frozenset({0, 1, 2})), (N, frozenset({0, 1, 2}), N)),
        )
    if name == "quadratic":
        if q is None:
            raise BadParameter("quadratic needs q")
        p, _ = prime_power(q)
        if p == 2:
            raise BadParameter("quadratic(q) needs q odd")
        K = finite_field(q)
        H = hf_quotient(K, [g * g for g in tdvr_enumerate(K, "units")])
        return FiniteHyperfield(f"F_{q}/squares", H.labels, H.zero, H.one, H.mul, H.hsum)
    if name == "viro_y":
        return ViroY()
    if name == "tr_reals":
        return TropicalReals()
    raise BadParameter(f"unknown builtin hyperfield {name!r}")


def generated_subgroup(K: TdvrDescriptor, generators) -> list[TdvrElem]:
    if K.n != 1:
        raise BadParameter(f"{K.label} is not a field")
    gens = []
    for g in generators:
        g = g if isinstance(g, TdvrElem) else K(g)
        if g.ring != K or not g.is_unit():
            raise NotASubgroup(f"{g!r} is not in the unit group of {K.label}")
        gens.append(g)
    group, frontier = {K.one}, [K.one]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = a * g
                if b not in group:
                    group.add(b)
                    nxt.append(b)
        frontier = nxt
    return sorted(group, key=lambda e: tdvr_enumerate(K).index(e))


def hf_quotient(K: TdvrDescriptor, generators) -> FiniteHyperfield:
    """The orbit hyperfield K/G, sums computed by brute force over G x G."""
    G = generated_subgroup(K, generators)
    elems = tdvr_enumerate(K)
    units = [a for a in elems if a.is_unit()]
    reps, cls = [K.zero], {K.zero: 0}
    for a in [K.one] + units:
        if a in cls:
            continue
        cls.update({a * g: len(reps) for g in G})
        reps.append(a)
    n = len(reps)
    mul = tuple(tuple(cls[reps[i] * reps[j]] for j in range(n)) for i in range(n))
    hsum = tuple(
        tuple(frozenset(cls[reps[i] * g + reps[j] * h] for g in G for h in G) for j in range(n))
        for i in range(n)
    )
    labels = tuple("0" if i == 0 else f"[{reps[i]}]" for i in range(n))
    return FiniteHyperfield(f"F_{K.q}/G{len(G)}", labels, 0, 1, mul, hsum)


def subgroups_of_units(K: TdvrDescriptor) -> list[list[TdvrElem]]:
    """Every subgroup of the (cyclic) unit group of a finite field, each given by a generator."""
    units = tdvr_enumerate(K, "units")
    order = len(units)
    gen = next(g for g in units if len(generated_subgroup(K, [g])) == order)
    return [[gen ** (order // d)] for d in range(1, order + 1) if order % d == 0]


def signs_surrogate(sample=(Fraction(1, 3), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(3))) -> FiniteHyperfield:
    """Q / Q_{>0}: orbit sums found by brute force over a sample of positive rationals."""
    reps = [Fraction(0), Fraction(1), Fraction(-1)]

    def cls(z):
        return 0 if z == 0 else (1 if z > 0 else 2)

    mul = tuple(tuple(cls(a * b) for b in reps) for a in reps)
    hsum = tuple(
        tuple(frozenset(cls(a * g + b * h) for g in sample for h in sample) for b in reps)
        for a in reps
    )
    return FiniteHyperfield("Q/Q>0", ("0", "1", "-1"), 0, 1, mul, hsum)


# ---------------------------------------------------------------------------
# verification


def _verify_finite(H: FiniteHyperfield, rep: Report):
    C = list(H.carrier)
    S, M, z, o = H.hsum, H.mul, H.zero, H.one
    lab = H.labels

    def first(pred, arity):
        for t in itertools.product(C, repeat=arity):
            if not pred(*t):
                return tuple(lab[i] for i in t)
        return None

    def add(cid, anchor, wit):
        rep.add(cid, anchor, wit is None, witness=wit)

    add("sum.nonempty", "multivalued sum lands in nonempty subsets", first(lambda x, y: bool(S[x][y]), 2))
    add("a.associativity", "hypergroup associativity (x+y)+z = x+(y+z)",
        first(lambda x, y, w: _fold(S, S[x][y], w) == _fold(S, S[y][w], x), 3))
    add("b.commutativity", "hypergroup commutativity", first(lambda x, y: S[x][y] == S[y][x], 2))
    add("c.zero", "x + 0 = {x}", first(lambda x: S[x][z] == {x}, 1))
    negs = {x: [y for y in C if z in S[x][y]] for x in C}
    bad = next((x for x in C if len(negs[x]) != 1), None)
    add("d.negatives", "unique -x with 0 in x + (-x)",
        None if bad is None else {"x": lab[bad], "candidates": [lab[y] for y in negs[bad]]})
    if bad is None:
        neg = {x: negs[x][0] for x in C}
        add("e.reversibility", "x in y - z iff y in x + z",
            first(lambda x, y, w: (x in S[y][neg[w]]) == (y in S[x][w]), 3))
    else:
        rep.add("e.reversibility", "x in y - z iff y in x + z", False,
                witness="negatives are not unique", detail="skipped: depends on d.negatives")
    add("mul.commutative", "multiplication commutative", first(lambda x, y: M[x][y] == M[y][x], 2))
    add("mul.associative", "multiplication associative",
        first(lambda x, y, w: M[M[x][y]][w] == M[x][M[y][w]], 3))
    add("mul.unital", "1 is a multiplicative unit", first(lambda x: M[x][o] == x, 1))
    add("mul.inverses", "nonzero elements invertible",
        first(lambda x: x == z or any(M[x][y] == o for y in C), 1))
    rep.add("zero_ne_one", "0 != 1", z != o)
    add("distributivity", "(x+y)z is contained in xz+yz",
        first(lambda x, y, w: {M[t][w] for t in S[x][y]} <= S[M[x][w]][M[y][w]], 3))


def _fold(S, left: frozenset, w: int) -> frozenset:
    out = set()
    for t in left:
        out |= S[t][w]
    return frozenset(out)


def _closure(H: LazyHyperfield, window) -> list:
    pts = set(window) | {H.zero, H.one}
    for _ in range(4):
        new = set(pts)
        for x in pts:
            new.add(H.neg(x))
        for x in list(pts):
            for y in list(pts):
                new |= H.hsum(x, y).points()
        if new == pts:
            break
        pts = new
    return sorted(pts)


def _verify_lazy(H: LazyHyperfield, window, rep: Report):
    W = list(dict.fromkeys(window))
    if not W:
        raise BadParameter("a lazy hyperfield needs a nonempty sample window")
    for x in W:
        _check_member(H, x)
    C = _closure(H, W)
    z, o = H.zero, H.one
    detail = f"sample of {len(W)} rationals, closure of {len(C)}"

    def first(pred, arity, pool=W):
        for t in itertools.product(pool, repeat=arity):
            if not pred(*t):
                return [str(v) for v in t]
        return None

    def add(cid, anchor, wit):
        rep.add(cid, anchor, wit is None, witness=wit, detail=detail)

    def fold(x, y, w):
        left = [t for t in C if H.hsum(x, y).contains(t)]
        return frozenset(u for u in C if any(H.hsum(t, w).contains(u) for t in left))

    add("a.associativity", "hypergroup associativity on the sample closure",
        first(lambda x, y, w: fold(x, y, w) == fold(y, w, x), 3))
    add("b.commutativity", "hypergroup commutativity", first(lambda x, y: H.hsum(x, y) == H.hsum(y, x), 2))
    add("c.zero", "x + 0 = {x}", first(lambda x: H.hsum(x, z) == _finite(x), 1))
    add("d.negatives", "unique -x with 0 in x + (-x)",
        first(lambda x: [y for y in C if H.hsum(x, y).contains(z)] == [H.neg(x)], 1))
    add("e.reversibility", "x in y - z iff y in x + z",
        first(lambda x, y, w: H.hsum(y, H.neg(w)).contains(x) == H.hsum(x, w).contains(y), 3))
    add("mul.commutative", "multiplication commutative", first(lambda x, y: H.mul(x, y) == H.mul(y, x), 2))
    add("mul.associative", "multiplication associative",
        first(lambda x, y, w: H.mul(H.mul(x, y), w) == H.mul(x, H.mul(y, w)), 3))
    add("mul.unital", "1 is a multiplicative unit", first(lambda x: H.mul(x, o) == x, 1))
    add("mul.inverses", "nonzero elements invertible", first(lambda x: x == z or H.mul(x, H.inv(x)) == o, 1))
    rep.add("zero_ne_one", "0 != 1", z != o)
    add("distributivity", "(x+y)z is contained in xz+yz",
        first(lambda x, y, w: all(H.hsum(H.mul(x, w), H.mul(y, w)).contains(H.mul(t, w))
                                  for t in C if H.hsum(x, y).contains(t)), 3))


def hf_verify_axioms(H: Hyperfield, window=None) -> Report:
    """Per-axiom pass/fail; exhaustive for finite tables, sample-based for lazy carriers."""
    rep = Report()
    with rep.timed():
        if isinstance(H, FiniteHyperfield):
            _verify_finite(H, rep)
        else:
            _verify_lazy(H, window or [], rep)
    return rep


# ---------------------------------------------------------------------------
# isomorphism


def _fingerprint(H: FiniteHyperfield, x: int):
    order, y = 1, x
    if x == H.zero:
        order = 0
    else:
        while y != H.one:
            y = H.mul[y][x]
            order += 1
    return order, tuple(sorted(len(H.hsum[x][y]) for y in H.carrier)), H.zero in H.hsum[x][x]


def hf_isomorphism(H1: FiniteHyperfield, H2: FiniteHyperfield) -> dict[int, int] | None:
    """Backtracking search for a bijection preserving 0, 1, products and sums."""
    if H1.size != H2.size:
        return None
    fp1 = {x: _fingerprint(H1, x) for x in H1.carrier}
    fp2 = {x: _fingerprint(H2, x) for x in H2.carrier}
    if sorted(fp1.values()) != sorted(fp2.values()):
        return None
    order = [H1.zero, H1.one] + [x for x in H1.carrier if x not in (H1.zero, H1.one)]
    m: dict[int, int] = {}

    def consistent(x):
        for a in m:
            b = m[a]
            for u, v in ((x, a), (a, x)):
                mu = H1.mul[u][v]
                if mu in m and m[mu] != H2.mul[m[u]][m[v]]:
                    return False
                s1 = H1.hsum[u][v]
                if all(t in m for t in s1) and {m[t] for t in s1} != H2.hsum[m[u]][m[v]]:
                    return False
        return True

    def go(i):
        if i == len(order):
            return True
        x = order[i]
        forced = {H1.zero: H2.zero, H1.one: H2.one}
        cands = [forced[x]] if x in forced else [y for y in H2.carrier if fp2[y] == fp1[x]]
        used = set(m.values())
        for y in cands:
            if y in used:
                continue
            m[x] = y
            if consistent(x) and go(i + 1):
                return True
            del m[x]
        return False

    return dict(m) if go(0) else None
