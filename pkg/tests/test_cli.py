import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vhtriples.cli import BUILTIN_SPECS, emit_spec, main, parse_spec, run
from vhtriples.errors import BadWeight, SpecError, SpecSyntaxError, UnknownField, UnresolvedReference
from vhtriples.hyperfield import hf_builtin
from vhtriples.report import Report, emit_report
from vhtriples.valued import VH


def test_minimal_vh_record():
    doc = parse_spec('{"kind": "vh", "family": "equal_char", "q": 2, "level": 1, "log_weight": "1"}')
    H = doc.built["H"]
    assert isinstance(H, VH) and H.level == 1 and H.base.q == 2


def test_unresolved_reference_has_position():
    text = '{"objects": {"H": {"kind": "vh", "family": "equal_char", "q": 2, "level": 1}},\n' \
           ' "morphisms": {"f": {"kind": "vh_morphism", "source": "H", "target": "Z", "ram": 1}}}'
    with pytest.raises(UnresolvedReference) as ei:
        parse_spec(text)
    assert ei.value.line == 2


def test_zero_weight():
    with pytest.raises(BadWeight):
        parse_spec('{"kind": "vh", "family": "equal_char", "q": 2, "level": 1, "log_weight": "0"}')


def test_unknown_field_and_syntax():
    with pytest.raises(UnknownField):
        parse_spec('{"kind": "vh", "family": "equal_char", "q": 2, "level": 1, "colour": 3}')
    with pytest.raises(SpecSyntaxError) as ei:
        parse_spec('{"objects": [1,\n2')
    assert ei.value.line == 2


@pytest.mark.parametrize("text", [
    '{"objects": [1, 2]}',
    '{"iso_pairs": [["A", "B"]]}',
    '{"iso_pairs": [{"source": "A"}]}',
    '{"window": "a:b"}',
    '{"seed": "x"}',
])
def test_malformed_shapes_are_spec_errors(text):
    with pytest.raises(SpecError):
        parse_spec(text)


@pytest.mark.parametrize("name", sorted(BUILTIN_SPECS))
def test_builtin_specs_roundtrip_and_pass(name):
    doc = parse_spec(json.dumps(BUILTIN_SPECS[name]))
    assert parse_spec(emit_spec(doc)) == doc
    assert emit_spec(parse_spec(emit_spec(doc))) == emit_spec(doc)
    assert run(doc).passed


def test_reports_are_reproducible():
    doc = parse_spec(json.dumps(BUILTIN_SPECS["q2_level2"]))
    assert emit_report(run(doc)) == emit_report(run(doc))


def test_empty_report_document():
    body = json.loads(emit_report(Report()))
    assert body == {"checks": [], "counts": {"fail": 0, "inconclusive": 0, "pass": 0}, "passed": True}


def test_failing_axiom_carries_witness():
    table = hf_builtin("krasner").with_sum(1, 1, {1}).to_json()
    doc = parse_spec(json.dumps({"objects": {"K": {"kind": "hyperfield", "table": table}}}))
    rep = run(doc, ["axioms"])
    bad = [c for c in rep if c.status == "fail"]
    assert bad and all(c.witness is not None for c in bad)


def test_windowed_records_carry_bounds():
    doc = parse_spec(json.dumps(BUILTIN_SPECS["q2_level2"]))
    body = json.loads(emit_report(run(doc, ["axioms"], window=(-2, 3))))
    assert any(c["window"] == [-2, 3] for c in body["checks"])


def test_flatfinite_reports_four_booleans(capsys):
    assert main(["flatfinite", "--spec", "builtin:e2_pair", "--format", "json"]) == 0
    out = json.loads(capsys.readouterr().out)
    vals = out["values"]["f"]
    assert {k: vals[k] for k in ("vh_flat", "triple_flat", "vh_finite", "triple_finite")} == \
        {"vh_flat": True, "triple_flat": True, "vh_finite": True, "triple_finite": True}


@pytest.mark.parametrize("argv", [
    ["verify", "--spec", "builtin:krasner"],
    ["roundtrip", "--spec", "builtin:q2_level2"],
    ["iso", "--spec", "builtin:iso_levels"],
    ["tr", "--spec", "builtin:chain"],
    ["u", "--spec", "builtin:q2_level2", "--window", "0:1"],
    ["morphism", "check", "--spec", "builtin:chain"],
    ["morphism", "compose", "--spec", "builtin:chain"],
    ["morphism", "lift", "--spec", "builtin:e2_pair"],
    ["examples"],
])
def test_commands_exit_zero(argv, capsys):
    assert main(argv) == 0
    assert capsys.readouterr().out


def test_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "vh", "family": "equal_char", "q": 2, "level": 1, "log_weight": "0"}')
    assert main(["verify", "--spec", str(bad)]) == 2
    table = hf_builtin("krasner").with_sum(1, 1, {1}).to_json()
    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps({"objects": {"K": {"kind": "hyperfield", "table": table}}}))
    assert main(["verify", "--spec", str(broken)]) == 1
    with pytest.raises(SystemExit) as ei:
        main(["verify", "--window", "x"])
    assert ei.value.code == 2


@st.composite
def vh_records(draw):
    fam = draw(st.sampled_from(["equal_char", "mixed_unram"]))
    q = draw(st.sampled_from([2, 3, 4, 5, 9]))
    rec = {"kind": "vh", "family": fam, "q": q, "level": draw(st.integers(1, 3))}
    num, den = draw(st.integers(1, 6)), draw(st.integers(1, 6))
    rec["log_weight"] = f"{num}/{den}"
    return rec


@settings(max_examples=60, deadline=None)
@given(st.dictionaries(st.sampled_from(["A", "B", "C", "H"]), vh_records(), min_size=1),
       st.integers(-5, 0), st.integers(0, 8), st.integers(0, 99))
def test_parse_emit_identity(objects, lo, hi, seed):
    text = json.dumps({"objects": objects, "window": [lo, hi], "seed": seed})
    doc = parse_spec(text)
    assert parse_spec(emit_spec(doc)) == doc
