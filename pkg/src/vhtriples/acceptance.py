"""The ten acceptance criteria as runnable functions.

Each ``criterion_N()`` returns a :class:`Criterion` whose ``report`` holds every
individual check; ``run_all`` runs them in order.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from .exactnum import finite_field, prime_power
from .functors import (
    flat_finite_check,
    hf_iso_from_map,
    hyperfield_iso_exponent_check,
    lift_morphism,
    psi_check,
    tr_morphism,
    tr_object_closed_form,
    tr_object_generic,
    u_morphism,
    u_object,
    vh_iso_search,
)
from .hyperfield import hf_builtin, hf_quotient, hf_verify_axioms, signs_surrogate, subgroups_of_units
from .report import Report
from .triple import eps_eta_lemma, triple_morphism_compose, triple_morphism_validate
from .valued import (
    VH,
    EqualChar,
    MixedUnram,
    vh_compose,
    vh_embedding_morphism,
    vh_identity,
    vh_morphism_lemmas,
    vh_morphisms_agree,
    vh_rescale,
    vh_verify_axioms,
    vh_verify_morphism,
)

WINDOW = (-4, 6)
TIME_LIMIT = 60.0
# triple-based axioms (associativity, distributivity) beyond this many triples are sampled
TRIPLE_BUDGET = 4000


@dataclass
class Criterion:
    number: int
    title: str
    report: Report = field(default_factory=Report)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.report.passed and len(self.report) > 0 and self.seconds < TIME_LIMIT

    def line(self) -> str:
        n_fail = len(self.report.failures())
        status = "PASS" if self.passed else "FAIL"
        extra = f", {n_fail} failed" if n_fail else ""
        slow = " (over time limit)" if self.seconds >= TIME_LIMIT else ""
        return f"criterion {self.number:>2} {status}  {self.title}  [{len(self.report)} checks{extra}, {self.seconds:.1f}s{slow}]"


def _timed(number, title, body) -> Criterion:
    c = Criterion(number, title)
    t0 = time.perf_counter()
    body(c.report)
    c.seconds = time.perf_counter() - t0
    return c


# ---------------------------------------------------------------------------
# objects and morphisms under test


def criterion2_objects() -> list[VH]:
    fields = [MixedUnram(2), MixedUnram(3), MixedUnram(5), MixedUnram(2, 2), EqualChar(2), EqualChar(3), EqualChar(4)]
    return [VH(K, i) for K in fields for i in (1, 2, 3)]


def chain_morphisms():
    """F_2((t)) -> F_2((s)) (e=2) -> F_2((u)) (e=3) at levels 1 -> 2 -> 6."""
    A = VH(EqualChar(2), 1)
    B = VH(EqualChar(2), 2, Fraction(1, 2))
    C = VH(EqualChar(2), 6, Fraction(1, 6))
    return vh_embedding_morphism(A, B, 2), vh_embedding_morphism(B, C, 3)


def flat_cases():
    H = VH(EqualChar(2), 2)
    a = vh_embedding_morphism(H, VH(EqualChar(2), 4, Fraction(1, 2)), 2)
    b = vh_embedding_morphism(H, VH(EqualChar(2), 3, Fraction(1, 2)), 2)
    c = vh_embedding_morphism(H, VH(EqualChar(4), 2), 1)
    return a, b, c


def morphism_catalogue() -> list[tuple[str, object]]:
    """Every morphism the acceptance run constructs."""
    f, g = chain_morphisms()
    a, b, c = flat_cases()
    out = [
        ("chain.f (e=2)", f),
        ("chain.g (e=3)", g),
        ("chain.g o f (e=6)", vh_compose(g, f)),
        ("flat.a F_2 l2 -> l4", a),
        ("flat.b F_2 l2 -> l3", b),
        ("flat.c F_2 -> F_4", c),
        ("Q_2 -> Q_4-analog l2", vh_embedding_morphism(VH(MixedUnram(2), 2), VH(MixedUnram(2, 2), 2), 1)),
        ("Q_3 l3 -> Q_3 l2", vh_embedding_morphism(VH(MixedUnram(3), 3), VH(MixedUnram(3), 2), 1)),
        ("F_3 l1 -> F_9 l2 (e=2)", vh_embedding_morphism(VH(EqualChar(3), 1), VH(EqualChar(9), 2, Fraction(1, 2)), 2)),
        ("id Q_5 l2", vh_identity(VH(MixedUnram(5), 2))),
        ("id F_4 l2", vh_identity(VH(EqualChar(4), 2))),
    ]
    return out


# ---------------------------------------------------------------------------
# criteria


def criterion_1() -> Criterion:
    def body(rep: Report):
        for name in ("krasner", "signs"):
            rep.extend(hf_verify_axioms(hf_builtin(name)), prefix=f"{name}:")
        rep.extend(hf_verify_axioms(signs_surrogate()), prefix="Q/Q>0:")
        for q in (3, 5, 7, 9):
            rep.extend(hf_verify_axioms(hf_builtin("quadratic", q)), prefix=f"quadratic({q}):")
        for q in range(2, 14):
            try:
                prime_power(q)
            except Exception:
                continue
            K = finite_field(q)
            for gens in subgroups_of_units(K):
                H = hf_quotient(K, gens)
                rep.extend(hf_verify_axioms(H), prefix=f"{H.name}:")
    return _timed(1, "hyperfield axioms (exhaustive)", body)


def criterion_2() -> Criterion:
    def body(rep: Report):
        for H in criterion2_objects():
            rep.extend(vh_verify_axioms(H, WINDOW, triple_budget=TRIPLE_BUDGET), prefix=f"{H.label}:")
    return _timed(2, "valued-hyperfield axioms and rho = theta^i", body)


def criterion_3() -> Criterion:
    def body(rep: Report):
        for H in criterion2_objects():
            rep.extend(tr_object_generic(H, (0, 2 * H.level + 1)).report, prefix=f"{H.label}:")
    return _timed(3, "generic Tr equals the closed form, l(R) = i", body)


def criterion_4() -> Criterion:
    def body(rep: Report):
        for H in criterion2_objects():
            rep.extend(psi_check(H, WINDOW), prefix=f"{H.label}:")
    return _timed(4, "U o Tr is the forgetful functor via psi", body)


def criterion_5() -> Criterion:
    def body(rep: Report):
        f, g = chain_morphisms()
        gf = vh_compose(g, f)
        left = tr_morphism(gf)
        right = triple_morphism_compose(tr_morphism(g), tr_morphism(f))
        rep.add("tr.composition", "Tr(f' o f) = Tr(f') o Tr(f)", left.same(right),
                witness=None if left.same(right) else {"left": left.to_json(), "right": right.to_json()})
        rep.add("tr.composite_ramification", "composed ramification index 6", left.r == 6 and gf.ram == 6,
                witness={"Tr r": left.r, "ram": gf.ram})
        rep.extend(triple_morphism_validate(left), prefix="Tr(g o f):")
        U = u_object(tr_object_closed_form(f.source), f.source.log_weight, WINDOW)
        Ugf, Ug, Uf = u_morphism(left), u_morphism(tr_morphism(g)), u_morphism(tr_morphism(f))
        bad = next((x for x in U.elements() if Ugf(x) != Ug(Uf(x))), None)
        rep.add("u.composition", "U(u' o u) = U(u') o U(u)", bad is None, witness=bad, window=WINDOW)
        rep.extend(psi_check(f.source, WINDOW, morphisms=[f, gf]), prefix="psi A:")
        rep.extend(psi_check(g.source, WINDOW, morphisms=[g]), prefix="psi B:")
    return _timed(5, "functoriality along F_2((t)) -> F_2((s)) -> F_2((u))", body)


def criterion_6() -> Criterion:
    def body(rep: Report):
        for name, f in morphism_catalogue():
            u = tr_morphism(f)
            L = lift_morphism(u, f.source, f.target, WINDOW)
            rep.extend(L.report, prefix=f"{name}:")
            bad = vh_morphisms_agree(L.morphism, f, WINDOW)
            rep.add(f"{name}:lift.equals_f", "lift of Tr(f) returns f pointwise", bad is None and not L.rescaled,
                    witness=bad, window=WINDOW)
        # weight mismatch: same target with the source weight, so rescaling is needed
        f, _ = chain_morphisms()
        off = vh_rescale(f.target, f.source.log_weight)
        L = lift_morphism(tr_morphism(f), f.source, off, WINDOW)
        rep.extend(L.report, prefix="rescale:")
        rep.add("rescale:taken", "weight-mismatched target takes the rescale path",
                L.rescaled and L.target.log_weight == f.target.log_weight,
                witness={"rescaled": L.rescaled, "weight": L.target.log_weight})
        same = tr_morphism(L.morphism).same(tr_morphism(f))
        rep.add("rescale:same_tr", "the rescaled lift has identical Tr", same)
    return _timed(6, "lifting Tr(f) recovers f; rescale path", body)


def criterion_7() -> Criterion:
    def body(rep: Report):
        for name, f in morphism_catalogue():
            rep.extend(vh_verify_morphism(f, WINDOW), prefix=f"{name}:")
            rep.extend(vh_morphism_lemmas(f, WINDOW), prefix=f"{name}:")
    return _timed(7, "morphism lemmas: rho monotone, distances", body)


def criterion_8() -> Criterion:
    def body(rep: Report):
        a, b, c = flat_cases()
        expect = {"a": (True, 2), "b": (False, 2), "c": (True, 2)}
        for key, f in zip("abc", (a, b, c)):
            ff = flat_finite_check(f)
            rep.extend(ff.report, prefix=f"({key}):")
            flat, ngen = expect[key]
            rep.add(f"({key}):expected", "flatness and generator count as predicted",
                    ff.vh_flat == ff.triple_flat == flat and ff.vh_finite and ff.triple_finite
                    and len(ff.generators) == ngen,
                    witness=ff.to_json())
        residue_degree = c.target.unit_ring.e // c.source.unit_ring.e
        rep.add("(c):residue_degree", "generator count = residue degree",
                len(flat_finite_check(c).generators) == residue_degree, witness={"residue_degree": residue_degree})
    return _timed(8, "finite/flat correspondence", body)


def criterion_9() -> Criterion:
    def body(rep: Report):
        A, B = VH(MixedUnram(2), 1), VH(EqualChar(2), 1)
        g = hf_iso_from_map(A, B, B.elem(1, 1), {A.unit_ring.one: B.unit_ring.one})
        r, tri = hyperfield_iso_exponent_check(g, WINDOW)
        rep.extend(r, prefix="Q_2/(1+m) -> F_2((t))/(1+m):")
        if tri is not None:
            rep.extend(triple_morphism_validate(tri), prefix="induced Tr iso:")
        found = vh_iso_search(A, B, WINDOW)
        rep.add("search level 1", "Q_2/(1+m) and F_2((t))/(1+m) are isomorphic", found.status == "found",
                witness=found.to_json())
        A2, B2 = VH(MixedUnram(2), 2), VH(EqualChar(2), 2)
        res = vh_iso_search(A2, B2, WINDOW)
        w = res.witness or {}
        ok = res.status == "not_isomorphic" and w.get("invariant") == "0 in 1+1" \
            and w.get("source") is False and w.get("target") is True
        rep.add("search level 2", "level-2 pair certified non-isomorphic: 0 not in 1+1 vs 0 in 1+1", ok,
                witness=res.to_json(), detail=f"witness {w}")
    return _timed(9, "hyperfield isomorphisms and the exponent law", body)


def criterion_10() -> Criterion:
    def body(rep: Report):
        produced = []
        for name, f in morphism_catalogue():
            u = tr_morphism(f)
            produced.append((f"Tr({name})", u))
            produced.append((f"lift({name})", tr_morphism(lift_morphism(u, f.source, f.target, WINDOW).morphism)))
        f, g = chain_morphisms()
        produced.append(("Tr(g) o Tr(f)", triple_morphism_compose(tr_morphism(g), tr_morphism(f))))
        for name, u in produced:
            rep.extend(eps_eta_lemma(u, kmax=4), prefix=f"{name}:")
    return _timed(10, "eps'_{rj,rk} eta^(k) = eta^(j) eps_{j,k}, 0 <= j <= k <= 4", body)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


def run_all(numbers=None) -> list[Criterion]:
    return [fn() for i, fn in enumerate(CRITERIA, 1) if numbers is None or i in numbers]
