"""Batch front end: spec documents, verification suites and reports.

A spec document is JSON::

    {
      "objects":   {"H": {"kind": "vh", "family": "equal_char", "q": 2, "level": 1, "log_weight": "1"}},
      "morphisms": {"f": {"kind": "vh_morphism", "source": "H", "target": "H2", "ram": 2}},
      "iso_pairs": [{"source": "A", "target": "B", "expect": "found"}],
      "suites":    ["axioms"],
      "window":    [-4, 6],
      "seed":      0
    }

A bare object record is accepted as a one-object document named ``H``.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    SpecError,
    SpecSyntaxError,
    UnknownField,
    UnresolvedReference,
    VHError,
)
from .exactnum import GaloisRingQuot, PolyQuot, RingHom, ZpQuot, finite_field, tdvr_length
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
from .hyperfield import FiniteHyperfield, hf_builtin, hf_quotient, hf_sum, hf_verify_axioms
from .report import INCONCLUSIVE, PASS, Report, emit_report, jsonable
from .triple import Triple, TripleMorphism, eps_eta_lemma, triple_morphism_compose, triple_morphism_validate
from .valued import (
    VH,
    LocalFieldDesc,
    ball_enumerate,
    vh_compose,
    vh_embedding_morphism,
    vh_morphism_lemmas,
    vh_morphisms_agree,
    vh_sum,
    vh_verify_axioms,
    vh_verify_morphism,
)

SUITES = ("axioms", "roundtrip", "functoriality", "flatfinite", "iso", "all")
DEFAULT_WINDOW = (-4, 6)

OBJECT_FIELDS = {
    "hyperfield": {"kind", "builtin", "q", "generators", "table"},
    "vh": {"kind", "family", "q", "level", "log_weight", "rho_exp"},
    "triple": {"kind", "family", "p", "q", "n", "e", "eps_unit", "of"},
}
MORPHISM_FIELDS = {
    "vh_morphism": {"kind", "source", "target", "ram", "x_image", "t_image", "unit_image"},
    "triple_morphism": {"kind", "source", "target", "r", "x_image", "t_image", "eta_coeff"},
    "hf_iso": {"kind", "source", "target", "pi_image", "unit_map"},
    "compose": {"kind", "first", "second"},
}
TOP_FIELDS = {"objects", "morphisms", "iso_pairs", "suites", "window", "seed"}


# ---------------------------------------------------------------------------
# spec documents


@dataclass
class SpecDocument:
    objects: dict = field(default_factory=dict)
    morphisms: dict = field(default_factory=dict)
    iso_pairs: list = field(default_factory=list)
    suites: list = field(default_factory=list)
    window: tuple = DEFAULT_WINDOW
    seed: int = 0
    built: dict = field(default_factory=dict, compare=False, repr=False)

    def to_json(self):
        return {
            "objects": self.objects,
            "morphisms": self.morphisms,
            "iso_pairs": self.iso_pairs,
            "suites": self.suites,
            "window": list(self.window),
            "seed": self.seed,
        }


class _Locator:
    """Maps field names back to line/column positions in the source text."""

    def __init__(self, text: str):
        self.text = text

    def at(self, *keys):
        pos = 0
        for k in keys:
            i = self.text.find(json.dumps(k), pos)
            if i < 0:
                break
            pos = i
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col


def _weight(v) -> str:
    return str(Fraction(str(v)))


def _normalize_object(name, rec, loc):
    if not isinstance(rec, dict) or "kind" not in rec:
        raise SpecError(f"object {name!r} needs a 'kind'", *loc.at(name))
    kind = rec["kind"]
    if kind not in OBJECT_FIELDS:
        raise UnknownField(f"unknown object kind {kind!r}", *loc.at(name, "kind"))
    extra = set(rec) - OBJECT_FIELDS[kind]
    if extra:
        f = sorted(extra)[0]
        raise UnknownField(f"unknown field {f!r} for {kind}", *loc.at(name, f))
    out = dict(rec)
    if kind == "vh":
        for req in ("family", "q", "level"):
            if req not in rec:
                raise SpecError(f"vh {name!r} needs {req!r}", *loc.at(name))
        out["log_weight"] = _weight(rec.get("log_weight", "1"))
    elif kind == "triple":
        if "of" not in rec:
            out.setdefault("eps_unit", 1)
    return out


def _normalize_morphism(name, rec, loc):
    if not isinstance(rec, dict) or "kind" not in rec:
        raise SpecError(f"morphism {name!r} needs a 'kind'", *loc.at(name))
    kind = rec["kind"]
    if kind not in MORPHISM_FIELDS:
        raise UnknownField(f"unknown morphism kind {kind!r}", *loc.at(name, "kind"))
    extra = set(rec) - MORPHISM_FIELDS[kind]
    if extra:
        f = sorted(extra)[0]
        raise UnknownField(f"unknown field {f!r} for {kind}", *loc.at(name, f))
    return dict(rec)


ISO_PAIR_FIELDS = {"source", "target", "expect"}


def _parse_iso_pair(p, loc):
    if not isinstance(p, dict) or not {"source", "target"} <= set(p):
        raise SpecError("iso_pairs entries need 'source' and 'target'", *loc.at("iso_pairs"))
    extra = set(p) - ISO_PAIR_FIELDS
    if extra:
        f = sorted(extra)[0]
        raise UnknownField(f"unknown field {f!r} in iso_pairs", *loc.at("iso_pairs", f))
    if p.get("expect", "found") not in ("found", "not_isomorphic"):
        raise SpecError(f"bad expect {p['expect']!r}", *loc.at("iso_pairs", "expect"))
    return dict(p)


def _shaped(raw, key, typ, loc):
    v = raw.get(key, typ())
    if not isinstance(v, typ):
        raise SpecError(f"{key!r} must be a JSON {'object' if typ is dict else 'array'}", *loc.at(key))
    return v


def _window_arg(text):
    try:
        return _parse_window(text)
    except SpecError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _parse_window(w, loc=None):
    try:
        if isinstance(w, str):
            lo, hi = (int(s) for s in w.split(":"))
        else:
            lo, hi = (int(s) for s in w)
    except (TypeError, ValueError):
        raise SpecError(f"window must be [lo, hi] or 'lo:hi', got {w!r}", *(loc.at("window") if loc else ())) from None
    if lo > hi:
        raise SpecError(f"empty window {lo}:{hi}")
    return lo, hi


def parse_spec(text: str) -> SpecDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    loc = _Locator(text)
    if not isinstance(raw, dict):
        raise SpecSyntaxError("top level must be an object", 1, 1)
    if "kind" in raw:
        raw = {"objects": {"H": raw}}
    extra = set(raw) - TOP_FIELDS
    if extra:
        f = sorted(extra)[0]
        raise UnknownField(f"unknown top-level field {f!r}", *loc.at(f))
    seed = raw.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise SpecError(f"seed must be an integer, got {seed!r}", *loc.at("seed"))
    doc = SpecDocument(
        objects={n: _normalize_object(n, r, loc) for n, r in _shaped(raw, "objects", dict, loc).items()},
        morphisms={n: _normalize_morphism(n, r, loc) for n, r in _shaped(raw, "morphisms", dict, loc).items()},
        iso_pairs=[_parse_iso_pair(p, loc) for p in _shaped(raw, "iso_pairs", list, loc)],
        suites=list(_shaped(raw, "suites", list, loc)),
        window=_parse_window(raw.get("window", DEFAULT_WINDOW), loc),
        seed=seed,
    )
    for s in doc.suites:
        if s not in SUITES:
            raise UnknownField(f"unknown suite {s!r}", *loc.at("suites", s))
    _resolve(doc, loc)
    _build(doc, loc)
    return doc


def emit_spec(doc: SpecDocument) -> str:
    return json.dumps(doc.to_json(), indent=2, sort_keys=True)


def _resolve(doc: SpecDocument, loc):
    objs, morphs = doc.objects, doc.morphisms

    def need(name, pool, where, what):
        if name not in pool:
            raise UnresolvedReference(f"{where} refers to undeclared {what} {name!r}", *loc.at(where, name))

    for n, rec in objs.items():
        if rec["kind"] == "triple" and "of" in rec:
            need(rec["of"], objs, n, "object")
    for n, rec in morphs.items():
        if rec["kind"] == "compose":
            need(rec["first"], morphs, n, "morphism")
            need(rec["second"], morphs, n, "morphism")
        else:
            need(rec["source"], objs, n, "object")
            need(rec["target"], objs, n, "object")
    for p in doc.iso_pairs:
        need(p["source"], objs, "iso_pairs", "object")
        need(p["target"], objs, "iso_pairs", "object")


def _ring(rec):
    fam = rec["family"]
    if fam == "zp":
        return ZpQuot(rec["p"], rec["n"])
    if fam == "poly":
        return PolyQuot(rec["q"], rec["n"])
    if fam == "galois":
        return GaloisRingQuot(rec["p"], rec["n"], rec["e"])
    raise SpecError(f"unknown ring family {fam!r}")


def _build(doc: SpecDocument, loc):
    built = doc.built
    pending = list(doc.objects.items())
    while pending:  # triples declared "of" another object wait for it
        n, rec = pending.pop(0)
        if rec["kind"] == "triple" and "of" in rec and rec["of"] not in built:
            pending.append((n, rec))
            continue
        try:
            built[n] = _build_object(rec, built)
        except SpecError:
            raise
        except VHError as exc:
            raise type(exc)(f"{exc} (object {n!r}, line {loc.at(n)[0]}, column {loc.at(n)[1]})") from None
    todo = list(doc.morphisms.items())
    guard = 0
    while todo:
        n, rec = todo.pop(0)
        if rec["kind"] == "compose" and (rec["first"] not in built or rec["second"] not in built):
            todo.append((n, rec))
            guard += 1
            if guard > 10_000:
                raise UnresolvedReference(f"cyclic composition at {n!r}", *loc.at(n))
            continue
        try:
            built[n] = _build_morphism(rec, built)
        except VHError as exc:
            if isinstance(exc, SpecError):
                raise
            raise type(exc)(f"{exc} (morphism {n!r}, line {loc.at(n)[0]}, column {loc.at(n)[1]})") from None


def _build_object(rec, built):
    kind = rec["kind"]
    if kind == "hyperfield":
        if "table" in rec:
            return FiniteHyperfield.from_json(rec["table"])
        if "generators" in rec:
            K = finite_field(rec["q"])
            return hf_quotient(K, [K(g) for g in rec["generators"]])
        return hf_builtin(rec["builtin"], rec.get("q"))
    if kind == "vh":
        return VH(LocalFieldDesc(rec["family"], rec["q"]), rec["level"], Fraction(rec["log_weight"]),
                  rec.get("rho_exp"))
    if "of" in rec:
        H = built[rec["of"]]
        if not isinstance(H, VH):
            raise SpecError("'of' must name a vh object")
        return tr_object_closed_form(H)
    R = _ring(rec)
    return Triple(R, R(rec["eps_unit"]))


def _as_triple(obj):
    return tr_object_closed_form(obj) if isinstance(obj, VH) else obj


def _build_morphism(rec, built):
    kind = rec["kind"]
    if kind == "compose":
        f, g = built[rec["first"]], built[rec["second"]]
        if isinstance(f, TripleMorphism):
            return triple_morphism_compose(g, f)
        return vh_compose(g, f)
    src, tgt = built[rec["source"]], built[rec["target"]]
    if kind == "vh_morphism":
        hom = None
        if "x_image" in rec or "t_image" in rec:
            hom = RingHom.build(src.unit_ring, tgt.unit_ring, rec.get("x_image"), rec.get("t_image"))
        return vh_embedding_morphism(src, tgt, rec["ram"], hom, rec.get("unit_image"))
    if kind == "triple_morphism":
        T, T2 = _as_triple(src), _as_triple(tgt)
        phi = RingHom.build(T.R, T2.R, rec.get("x_image"), rec.get("t_image"))
        return TripleMorphism(T, T2, rec["r"], phi, T2.R(rec["eta_coeff"]))
    # hf_iso
    v, u = rec["pi_image"]
    table = {src.unit_ring(a): tgt.unit_ring(b) for a, b in rec["unit_map"]}
    return hf_iso_from_map(src, tgt, tgt.elem(v, u), table)


# ---------------------------------------------------------------------------
# suites


def _guard(rep: Report, name: str, fn):
    """Run one unit of work; module errors become failing checks."""
    try:
        out = fn()
    except VHError as exc:
        rep.add(f"{name}:error", type(exc).__name__, False, detail=str(exc))
        return None
    if isinstance(out, Report):
        rep.extend(out, prefix=f"{name}:")
    return out


def _kind(doc, name):
    rec = doc.objects.get(name) or doc.morphisms.get(name)
    if rec["kind"] == "compose":
        return "triple_morphism" if isinstance(doc.built[name], TripleMorphism) else "vh_morphism"
    return rec["kind"]


def _named(doc, kind):
    return [(n, doc.built[n]) for n in list(doc.objects) + list(doc.morphisms) if _kind(doc, n) == kind]


def suite_axioms(doc, window, seed) -> Report:
    rep = Report()
    for n, H in _named(doc, "hyperfield"):
        _guard(rep, n, lambda H=H: hf_verify_axioms(H, window if not isinstance(H, FiniteHyperfield) else None))
    for n, H in _named(doc, "vh"):
        _guard(rep, n, lambda H=H: vh_verify_axioms(H, window, seed=seed))
    for n, T in _named(doc, "triple"):
        r = Report()
        r.add("triple.length", "l(R) = nilpotency index of pi_R = n", tdvr_length(T.R) == T.R.n,
              witness={"length": tdvr_length(T.R), "n": T.R.n})
        rep.extend(r, prefix=f"{n}:")
    for n, f in _named(doc, "vh_morphism"):
        _guard(rep, n, lambda f=f: vh_verify_morphism(f, window))
        _guard(rep, n, lambda f=f: vh_morphism_lemmas(f, window, seed=seed))
    for n, u in _named(doc, "triple_morphism"):
        _guard(rep, n, lambda u=u: triple_morphism_validate(u))
        _guard(rep, n, lambda u=u: eps_eta_lemma(u))
    return rep


def suite_roundtrip(doc, window, seed) -> Report:
    rep = Report()
    vms = _named(doc, "vh_morphism")
    for n, H in _named(doc, "vh"):
        gw = (min(0, window[0]), max(window[1], 2 * H.level + 1))
        _guard(rep, n, lambda H=H: tr_object_generic(H, gw).report)
        outgoing = [f for _, f in vms if f.source == H]
        _guard(rep, n, lambda H=H, o=outgoing: psi_check(H, window, morphisms=o, seed=seed))
    for n, f in vms:
        def lift(f=f):
            L = lift_morphism(tr_morphism(f), f.source, f.target, window)
            bad = vh_morphisms_agree(L.morphism, f, window)
            L.report.add("lift.equals_f", "lift of Tr(f) equals f pointwise", bad is None and not L.rescaled,
                         witness=bad, window=window)
            return L.report
        _guard(rep, n, lift)
    for n, u in _named(doc, "triple_morphism"):
        rec = doc.morphisms[n]
        if rec["kind"] == "compose":
            continue
        src, tgt = doc.built[rec["source"]], doc.built[rec["target"]]
        if isinstance(src, VH) and isinstance(tgt, VH):
            _guard(rep, n, lambda u=u, s=src, t=tgt: lift_morphism(u, s, t, window).report)
    return rep


def suite_functoriality(doc, window, seed) -> Report:
    rep = Report()
    vms = _named(doc, "vh_morphism")
    for n1, f in vms:
        for n2, g in vms:
            if f.target != g.source:
                continue

            def check(f=f, g=g):
                r = Report()
                gf = vh_compose(g, f)
                left = tr_morphism(gf)
                right = triple_morphism_compose(tr_morphism(g), tr_morphism(f))
                r.add("tr.composition", "Tr(g o f) = Tr(g) o Tr(f)", left.same(right),
                      witness=None if left.same(right) else {"Tr(gf)": left.to_json(), "TrgTrf": right.to_json()})
                Ugf, Ug, Uf = u_morphism(left), u_morphism(tr_morphism(g)), u_morphism(tr_morphism(f))
                U = u_object(tr_object_closed_form(f.source), f.source.log_weight, window)
                bad = next((x for x in U.elements() if Ugf(x) != Ug(Uf(x))), None)
                r.add("u.composition", "U(u' o u) = U(u') o U(u)", bad is None, witness=bad, window=window)
                r.add("composite.ramification", "ramification indices multiply", left.r == f.ram * g.ram,
                      witness={"r": left.r}, detail=f"r = {left.r}")
                r.extend(eps_eta_lemma(left))
                return r
            _guard(rep, f"{n1}>{n2}", check)
    for n, f in vms:
        _guard(rep, n, lambda f=f: eps_eta_lemma(tr_morphism(f)))
    return rep


def suite_flatfinite(doc, window, seed) -> Report:
    rep = Report()
    for n, f in _named(doc, "vh_morphism"):
        _guard(rep, n, lambda f=f: flat_finite_check(f).report)
    return rep


def flatfinite_values(doc) -> dict:
    out = {}
    for n, f in _named(doc, "vh_morphism"):
        try:
            out[n] = flat_finite_check(f).to_json()
        except VHError as exc:
            out[n] = {"error": str(exc)}
    return out


def suite_iso(doc, window, seed) -> Report:
    rep = Report()
    for n, g in _named(doc, "hf_iso"):
        _guard(rep, n, lambda g=g: hyperfield_iso_exponent_check(g, window, seed=seed)[0])
    for p in doc.iso_pairs:
        name = f"{p['source']}~{p['target']}"

        def search(p=p):
            r = Report()
            res = vh_iso_search(doc.built[p["source"]], doc.built[p["target"]], window, seed=seed)
            expect = p.get("expect")
            if res.status == "inconclusive":
                r.add("iso.search", "isomorphism search", True, status=INCONCLUSIVE, witness=res.witness,
                      window=window)
            else:
                ok = expect is None or expect == res.status
                r.add("iso.search", "isomorphism search", ok, witness=res.to_json(), window=window,
                      detail=f"{res.status}: {json.dumps(jsonable(res.witness), sort_keys=True)}")
            return r
        _guard(rep, name, search)
    return rep


SUITE_FUNCS = {
    "axioms": suite_axioms,
    "roundtrip": suite_roundtrip,
    "functoriality": suite_functoriality,
    "flatfinite": suite_flatfinite,
    "iso": suite_iso,
}


def run(doc: SpecDocument, suites=None, window=None, seed=None) -> Report:
    suites = suites or doc.suites or ["axioms"]
    if "all" in suites:
        suites = list(SUITE_FUNCS)
    window = window or doc.window
    seed = doc.seed if seed is None else seed
    rep = Report()
    for s in suites:
        rep.extend(SUITE_FUNCS[s](doc, window, seed), prefix=f"{s}/")
    return rep


# ---------------------------------------------------------------------------
# built-in specs


BUILTIN_SPECS = {
    "krasner": {"objects": {"K": {"kind": "hyperfield", "builtin": "krasner"},
                            "S": {"kind": "hyperfield", "builtin": "signs"}},
                "suites": ["axioms"]},
    "q2_level2": {"objects": {"H": {"kind": "vh", "family": "mixed_unram", "q": 2, "level": 2}},
                  "suites": ["axioms", "roundtrip"]},
    "e2_pair": {"objects": {"H": {"kind": "vh", "family": "equal_char", "q": 2, "level": 2},
                            "H2": {"kind": "vh", "family": "equal_char", "q": 2, "level": 4, "log_weight": "1/2"}},
                "morphisms": {"f": {"kind": "vh_morphism", "source": "H", "target": "H2", "ram": 2}},
                "suites": ["flatfinite"]},
    "chain": {"objects": {"A": {"kind": "vh", "family": "equal_char", "q": 2, "level": 1},
                          "B": {"kind": "vh", "family": "equal_char", "q": 2, "level": 2, "log_weight": "1/2"},
                          "C": {"kind": "vh", "family": "equal_char", "q": 2, "level": 6, "log_weight": "1/6"}},
              "morphisms": {"f": {"kind": "vh_morphism", "source": "A", "target": "B", "ram": 2},
                            "g": {"kind": "vh_morphism", "source": "B", "target": "C", "ram": 3}},
              "suites": ["functoriality"], "window": [-2, 3]},
    "iso_levels": {"objects": {"A1": {"kind": "vh", "family": "mixed_unram", "q": 2, "level": 1},
                               "B1": {"kind": "vh", "family": "equal_char", "q": 2, "level": 1},
                               "A2": {"kind": "vh", "family": "mixed_unram", "q": 2, "level": 2},
                               "B2": {"kind": "vh", "family": "equal_char", "q": 2, "level": 2}},
                   "morphisms": {"g": {"kind": "hf_iso", "source": "A1", "target": "B1",
                                       "pi_image": [1, 1], "unit_map": [[1, [1]]]}},
                   "iso_pairs": [{"source": "A1", "target": "B1", "expect": "found"},
                                 {"source": "A2", "target": "B2", "expect": "not_isomorphic"}],
                   "suites": ["iso"]},
}


def load_spec(ref: str) -> SpecDocument:
    if ref.startswith("builtin:"):
        name = ref.split(":", 1)[1]
        if name not in BUILTIN_SPECS:
            raise SpecError(f"unknown builtin spec {name!r}; choose from {sorted(BUILTIN_SPECS)}")
        return parse_spec(json.dumps(BUILTIN_SPECS[name], indent=2))
    if ref == "-":
        return parse_spec(sys.stdin.read())
    with open(ref, encoding="utf-8") as fh:
        return parse_spec(fh.read())


# ---------------------------------------------------------------------------
# commands


def _emit(obj, fmt):
    if fmt == "json":
        return json.dumps(jsonable(obj), indent=2, sort_keys=True)
    lines = []
    for k, v in obj.items():
        lines.append(f"{k}: {json.dumps(jsonable(v), sort_keys=True)}")
    return "\n".join(lines)


def cmd_suite(args, doc, suites):
    rep = run(doc, suites, args.window, args.seed)
    print(emit_report(rep, args.format))
    return 0 if rep.passed else 1


def cmd_tr(args, doc):
    out, ok = {}, True
    for n, H in _named(doc, "vh"):
        T = tr_object_closed_form(H)
        gen = tr_object_generic(H)
        ok &= gen.report.passed
        out[n] = {"triple": T.to_json(), "length": tdvr_length(T.R), "generic_agrees": gen.report.passed}
    for n, f in _named(doc, "vh_morphism"):
        try:
            out[n] = tr_morphism(f).to_json()
        except VHError as exc:
            out[n] = {"error": str(exc)}
            ok = False
    print(_emit(out, args.format))
    return 0 if ok else 1


def cmd_u(args, doc):
    window = args.window or doc.window
    out = {}
    for n, T in _named(doc, "triple") + _named(doc, "vh"):
        w = T.log_weight if isinstance(T, VH) else Fraction(1)
        U = u_object(_as_triple(T), w, window)
        out[n] = {"zero": "0", "log_weight": w,
                  "strata": {str(i): [x.coeff for x in U.stratum(i)] for i in range(window[0], window[1] + 1)}}
    print(_emit(out, args.format))
    return 0


def cmd_morphism(args, doc):
    window = args.window or doc.window
    if args.action == "check":
        rep = Report()
        for n, f in _named(doc, "vh_morphism"):
            _guard(rep, n, lambda f=f: vh_verify_morphism(f, window))
            _guard(rep, n, lambda f=f: vh_morphism_lemmas(f, window, seed=args.seed or 0))
        for n, u in _named(doc, "triple_morphism"):
            _guard(rep, n, lambda u=u: triple_morphism_validate(u))
            _guard(rep, n, lambda u=u: eps_eta_lemma(u))
        print(emit_report(rep, args.format))
        return 0 if rep.passed else 1
    if args.action == "compose":
        out = {}
        for n1, f in _named(doc, "vh_morphism"):
            for n2, g in _named(doc, "vh_morphism"):
                if f.target == g.source:
                    gf = vh_compose(g, f)
                    out[f"{n2}.{n1}"] = {"morphism": gf.to_json(), "tr": tr_morphism(gf).to_json()}
        print(_emit(out, args.format))
        return 0
    rep = suite_roundtrip(doc, window, args.seed or 0)
    rep.checks = [c for c in rep.checks if ":lift." in c.check_id or c.check_id.endswith(":error")]
    print(emit_report(rep, args.format))
    return 0 if rep.passed else 1


def cmd_flatfinite(args, doc):
    rep = run(doc, ["flatfinite"], args.window, args.seed)
    if args.format == "json":
        body = json.loads(emit_report(rep, "json"))
        body["values"] = flatfinite_values(doc)
        print(json.dumps(body, indent=2, sort_keys=True))
    else:
        print(emit_report(rep, "text"))
        for n, v in flatfinite_values(doc).items():
            print(f"{n}: {json.dumps(v, sort_keys=True)}")
    return 0 if rep.passed else 1


def cmd_examples(args):
    out = {}
    for name, q in (("krasner", None), ("signs", None), ("quadratic", 3), ("quadratic", 5)):
        H = hf_builtin(name, q)
        out[H.name] = H.to_json() if args.format == "json" else H.table()
    Y, TR = hf_builtin("viro_y"), hf_builtin("tr_reals")
    out["Viro Y"] = {"2+1": str(hf_sum(Y, 2, 1)), "1+1": str(hf_sum(Y, 1, 1))}
    out["TR"] = {"2+(-1)": str(hf_sum(TR, 2, -1)), "2+(-2)": str(hf_sum(TR, 2, -2))}
    H = VH(LocalFieldDesc("mixed_unram", 2), 2)
    x = H.one
    out[H.label] = {"1+1": sorted(map(str, ball_enumerate(H, vh_sum(H, x, x), 3))),
                    "1+(-1) up to v=3": sorted(map(str, ball_enumerate(H, vh_sum(H, x, H.elem(0, 3)), 3)))}
    if args.format == "json":
        print(json.dumps(jsonable(out), indent=2, sort_keys=True))
    else:
        for k, v in out.items():
            print(v if isinstance(v, str) else f"{k}: {json.dumps(v)}")
            print()
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", default=None,
                        help="spec file, '-' for stdin, or builtin:<name> (%s)" % ", ".join(sorted(BUILTIN_SPECS)))
    common.add_argument("--suite", action="append", choices=SUITES, help="suite to run (repeatable)")
    common.add_argument("--window", type=_window_arg, default=None, help="valuation window lo:hi (default -4:6)")
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--seed", type=int, default=None, help="seed for sampled checks (default: the document's, else 0)")
    p = argparse.ArgumentParser(prog="vhtriples", description="Discretely valued hyperfields and triples.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, h in (("verify", "run suites (default: the document's, else axioms)"),
                    ("tr", "Tr of every vh object and morphism"),
                    ("u", "strata of U(T) on the window"),
                    ("roundtrip", "generic Tr, psi and lifting checks"),
                    ("flatfinite", "flat/finite booleans for every vh morphism"),
                    ("iso", "hyperfield isomorphism checks and searches"),
                    ("examples", "print the built-in example hyperfields")):
        sub.add_parser(name, parents=[common], help=h)
    m = sub.add_parser("morphism", parents=[common], help="check, compose or lift morphisms")
    m.add_argument("action", choices=("check", "compose", "lift"))
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "examples":
            return cmd_examples(args)
        if args.spec is None:
            parser.error("--spec is required for this command")
        doc = load_spec(args.spec)
        if args.command == "verify":
            return cmd_suite(args, doc, args.suite)
        if args.command == "roundtrip":
            return cmd_suite(args, doc, ["roundtrip"])
        if args.command == "iso":
            return cmd_suite(args, doc, ["iso"])
        if args.command == "flatfinite":
            return cmd_flatfinite(args, doc)
        if args.command == "tr":
            return cmd_tr(args, doc)
        if args.command == "u":
            return cmd_u(args, doc)
        return cmd_morphism(args, doc)
    except (VHError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
