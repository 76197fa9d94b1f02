"""End-to-end command line tests: text output, JSON schemas, exit codes,
and byte-for-byte determinism."""

import json
import math

import pytest
from jsonschema import validate

from hnnlab import cli
from hnnlab.biauto import z2_normal_form_fsa


def run(capsys, argv):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, argv):
    code, out, _ = run(capsys, argv)
    return code, json.loads(out)


# ---------------------------------------------------------------------------
# verify


def test_verify_prints_one_line_per_relation(capsys):
    code, out, _ = run(capsys, ["verify"])
    assert code == 0
    lines = out.splitlines()
    assert sum(1 for l in lines if l.startswith("PASS relation ")) == 27
    assert "INFO source edge subgroup has index 12" in lines
    assert "INFO target edge subgroup has index 12" in lines
    assert any(l.startswith("PASS mutant screen: 27/27") for l in lines)
    assert lines[-1] == "OK: group data verified"


def test_verify_is_deterministic(capsys):
    argv = ["verify", "--samples", "6", "--seed", "3"]
    code1, out1, _ = run(capsys, argv)
    code2, out2, _ = run(capsys, argv)
    assert code1 == code2 == 0
    assert out1 == out2
    assert "random consequences: 6/6 trivial (seed 3)" in out1


VERIFY_SCHEMA = {
    "type": "object",
    "required": [
        "relations",
        "pair_memberships_ok",
        "source_index",
        "target_index",
        "mutants_detected",
        "mutants_total",
        "ok",
    ],
    "properties": {
        "relations": {
            "type": "array",
            "minItems": 27,
            "maxItems": 27,
            "items": {
                "type": "object",
                "required": ["index", "relator", "holds"],
                "properties": {
                    "index": {"type": "integer"},
                    "relator": {"type": "string"},
                    "holds": {"type": "boolean"},
                },
            },
        },
        "pair_memberships_ok": {"type": "boolean"},
        "source_index": {"type": "integer"},
        "target_index": {"type": "integer"},
        "ok": {"type": "boolean"},
    },
}


def test_verify_json_schema(capsys):
    code, data = run_json(capsys, ["verify", "--json", "--samples", "4"])
    assert code == 0
    validate(data, VERIFY_SCHEMA)
    assert data["ok"]
    assert data["source_index"] == 12 and data["target_index"] == 12
    assert data["mutants_detected"] == data["mutants_total"] == 27
    assert data["samples_ok"] == data["samples_total"] == 4


# ---------------------------------------------------------------------------
# classify and lengths


CLASSIFY_SCHEMA = {
    "type": "object",
    "required": ["word", "trace", "type", "order", "length_exact", "length_decimal"],
    "properties": {
        "word": {"type": "string"},
        "trace": {"type": "string"},
        "type": {"type": "string"},
        "order": {"type": ["integer", "null"]},
        "length_exact": {"type": ["string", "null"]},
        "length_decimal": {"type": ["string", "null"]},
    },
}


def test_classify_hyperbolic_generator(capsys):
    code, data = run_json(capsys, ["classify", "a", "--json"])
    assert code == 0
    validate(data, CLASSIFY_SCHEMA)
    assert data["type"] == "hyperbolic"
    assert data["trace"] == "3"
    assert data["length_exact"] == "2*log(3/2 + 1/2*sqrt(5))"
    # display string agrees with an independent float route
    assert float(data["length_decimal"]) == pytest.approx(2 * math.acosh(3 / 2))
    digits = data["length_decimal"].replace(".", "").lstrip("0")
    assert len(digits) == 50


def test_classify_stable_letter_is_elliptic(capsys):
    code, data = run_json(capsys, ["classify", "t", "--json"])
    assert code == 0
    assert data["type"] == "elliptic (infinite order)"
    assert data["trace"] == "2/3"
    assert data["length_exact"] is None and data["length_decimal"] is None


def test_lengths_detects_exact_dependence(capsys):
    code, out, _ = run(capsys, ["lengths", "a", "d"])
    assert code == 0
    assert "ratio check: 2 * len(a) = 1 * len(d)" in out
    code, data = run_json(capsys, ["lengths", "a", "d", "--json"])
    assert code == 0
    assert data["comparison"] == {"kind": "dependent", "p": 2, "q": 1}


def test_lengths_certifies_independence_across_fields(capsys):
    code, data = run_json(capsys, ["lengths", "a", "c", "--json"])
    assert code == 0
    assert data["comparison"]["kind"] == "independent-certified"
    fields = {row["length_field"] for row in data["elements"]}
    assert fields == {5, 21}


def test_lengths_default_four_generators(capsys):
    code, data = run_json(capsys, ["lengths", "--json"])
    assert code == 0
    assert [r["word"] for r in data["elements"]] == ["a", "b", "c", "d"]
    assert all(r["type"] == "hyperbolic" for r in data["elements"])
    assert data["comparison"] is None


# ---------------------------------------------------------------------------
# word problem commands


def test_reduce_applies_dehn_step(capsys):
    code, out, _ = run(capsys, ["reduce", "AdcbC"])
    assert code == 0
    assert out.strip() == "dbA"


def test_britton_pinches_through_both_tables(capsys):
    code, data = run_json(capsys, ["britton", "tDaacBCT", "--json"])
    assert code == 0
    assert data["normal_form"] == "d"
    assert data["t_count"] == 0
    code, data = run_json(capsys, ["britton", "tat", "--json"])
    assert code == 0
    assert data["t_count"] == 2
    assert data["exponents"] == [1, 1]


def test_trivial_exit_codes(capsys):
    code, out, _ = run(capsys, ["trivial", "AdcbCaBD"])
    assert code == 0 and out.strip() == "trivial"
    code, out, _ = run(capsys, ["trivial", "ab"])
    assert code == 1 and out.strip() == "nontrivial"


# ---------------------------------------------------------------------------
# cosets, tree, abelianize


COSETS_SCHEMA = {
    "type": "object",
    "required": ["generators", "columns", "index", "table", "representatives"],
    "properties": {
        "index": {"type": "integer"},
        "table": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "integer"}},
        },
        "representatives": {"type": "array", "items": {"type": "string"}},
    },
}


def test_cosets_both_sides(capsys):
    for side in ("source", "target"):
        code, data = run_json(capsys, ["cosets", "--side", side, "--json"])
        assert code == 0
        validate(data, COSETS_SCHEMA)
        assert data["index"] == 12
        assert len(data["table"]) == 12
    code, out, _ = run(capsys, ["cosets"])
    assert code == 0
    assert "index: 12" in out
    assert "subgroup genus: 13" in out


def test_coset_cap_env_var(capsys, monkeypatch):
    monkeypatch.setenv(cli.COSET_CAP_ENV, "3")
    code, _, err = run(capsys, ["cosets"])
    assert code == 1
    assert "more than 3 cosets" in err


def test_tree_distances(capsys):
    code, out, _ = run(capsys, ["tree", "tat"])
    assert code == 0
    assert "distance from base vertex: 2" in out
    code, data = run_json(capsys, ["tree", "t", "at", "--json"])
    assert code == 0
    assert data["distance"] == 2 and data["same_vertex"] is False
    code, data = run_json(capsys, ["tree", "tDaacBCT", "d", "--json"])
    assert code == 0
    assert data["distance"] == 0 and data["same_vertex"] is True


def test_abelianize_both_levels(capsys):
    code, out, _ = run(capsys, ["abelianize"])
    assert code == 0
    assert out.strip() == "H1(ambient) = Z x Z/21"
    code, data = run_json(capsys, ["abelianize", "--which", "vertex", "--json"])
    assert code == 0
    assert data["betti"] == 4 and data["torsion"] == []


# ---------------------------------------------------------------------------
# fsa-check


FSA_SCHEMA = {
    "type": "object",
    "required": ["language", "radius", "rule", "finite_to_one",
                 "fellow_traveller", "quasigeodesic", "ok"],
    "properties": {
        "finite_to_one": {
            "type": "object",
            "required": ["bound", "surjective", "ok"],
        },
        "fellow_traveller": {
            "type": "object",
            "required": ["zeta", "cap", "pairs_checked", "ok", "witness"],
        },
        "ok": {"type": "boolean"},
    },
}


def test_fsa_check_passes_normal_form(capsys):
    code, data = run_json(
        capsys, ["fsa-check", "z2-normal", "--cap", "2", "--json"]
    )
    assert code == 0
    validate(data, FSA_SCHEMA)
    assert data["ok"]
    assert data["finite_to_one"]["bound"] == 1
    assert data["fellow_traveller"]["zeta"] == 2


def test_fsa_check_fails_adversarial_language(capsys):
    code, data = run_json(
        capsys,
        ["fsa-check", "z2-adversarial", "--cap", "2", "--radius", "6", "--json"],
    )
    assert code == 1
    validate(data, FSA_SCHEMA)
    assert not data["ok"]
    assert data["finite_to_one"]["ok"]  # only the fellow traveller axiom fails
    assert data["fellow_traveller"]["zeta"] == 6
    witness = data["fellow_traveller"]["witness"]
    assert witness["separation"] == 6
    code, out, _ = run(
        capsys, ["fsa-check", "z2-adversarial", "--cap", "2", "--radius", "6"]
    )
    assert code == 1
    assert "worst pair:" in out and out.splitlines()[-1] == "FAIL"


def test_fsa_check_simultaneous_rule(capsys):
    code, data = run_json(
        capsys,
        ["fsa-check", "z2-normal", "--rule", "simultaneous", "--json"],
    )
    assert code == 0
    assert data["fellow_traveller"]["zeta"] == 3


def test_fsa_check_reads_automaton_file(capsys, tmp_path):
    path = tmp_path / "lang.json"
    path.write_text(json.dumps(z2_normal_form_fsa().to_json()))
    code, data = run_json(
        capsys, ["fsa-check", str(path), "--cap", "2", "--json"]
    )
    assert code == 0
    assert data["ok"]


# ---------------------------------------------------------------------------
# export


def test_export_json_counts_relators(capsys):
    code, data = run_json(capsys, ["export", "--format", "json"])
    assert code == 0
    assert data["generators"] == ["a", "b", "c", "d", "t"]
    assert len(data["relators"]) == 27
    code, data = run_json(
        capsys, ["export", "--which", "vertex", "--format", "json"]
    )
    assert len(data["relators"]) == 1


def test_export_gap_and_magma_syntax(capsys):
    code, out, _ = run(capsys, ["export", "--format", "gap"])
    assert code == 0
    assert out.startswith('F := FreeGroup("a", "b", "c", "d", "t");;')
    assert out.rstrip().endswith("G := F / rels;;")
    assert out.count("*") > 50
    code, out, _ = run(capsys, ["export", "--format", "magma"])
    assert code == 0
    assert out.startswith("G<a, b, c, d, t> := Group<")
    assert out.rstrip().endswith(">;")


def test_exports_are_deterministic(capsys):
    for argv in (
        ["export", "--format", "gap"],
        ["cosets", "--json"],
        ["lengths", "a", "c", "--json"],
    ):
        _, out1, _ = run(capsys, argv)
        _, out2, _ = run(capsys, argv)
        assert out1 == out2


# ---------------------------------------------------------------------------
# usage errors


def test_no_subcommand_is_usage_error(capsys):
    code, _, _ = run(capsys, [])
    assert code == 2


def test_bad_word_is_usage_error(capsys):
    code, _, err = run(capsys, ["classify", "zz"])
    assert code == 2
    assert "error:" in err
    # t is not a surface-group letter
    code, _, err = run(capsys, ["reduce", "tat"])
    assert code == 2


def test_unknown_language_is_usage_error(capsys):
    code, _, err = run(capsys, ["fsa-check", "nonsense"])
    assert code == 2
    assert "builtins" in err


def test_tree_rejects_three_words(capsys):
    code, _, err = run(capsys, ["tree", "t", "ta", "tat"])
    assert code == 2
    assert "one or two words" in err


def test_argparse_rejects_unknown_flags():
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify", "--nope"])
    assert exc.value.code == 2
