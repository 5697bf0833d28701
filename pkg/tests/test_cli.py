import json
from pathlib import Path

import pytest

from cmfree.cli import SpecError, main, parse_spec

ROOT = Path(__file__).parent
FIXTURES = sorted((ROOT / "fixtures").glob("*.toml"))


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("fixture", FIXTURES, ids=lambda p: p.stem)
def test_classify_matches_golden(capsys, fixture):
    code, out, _ = run(capsys, "classify", fixture, "--json")
    assert code == 0
    golden = (ROOT / "golden" / f"{fixture.stem}.json").read_text()
    assert out == golden


def test_classify_is_byte_identical(capsys):
    f = ROOT / "fixtures" / "ringel665.toml"
    first = run(capsys, "classify", f, "--json", "--certificates")[1]
    second = run(capsys, "classify", f, "--json", "--certificates")[1]
    assert first == second
    doc = json.loads(first)
    assert doc["schemaVersion"] == 1 and "certificates" in doc["report"]
    assert "timing" not in doc


def test_timing_is_opt_in(capsys):
    code, out, _ = run(capsys, "classify", ROOT / "fixtures" / "a2.toml", "--json", "--timing")
    assert code == 0 and "timing" in json.loads(out)


def test_ringel_report(capsys):
    code, out, _ = run(capsys, "classify", ROOT / "fixtures" / "ringel665.toml", "--json")
    r = json.loads(out)["report"]
    assert (r["cmFinite"], r["gorenstein"], r["cmFree"]) == (True, False, False)


def test_a2_report(capsys):
    r = json.loads(run(capsys, "classify", ROOT / "fixtures" / "a2.toml", "--json")[1])["report"]
    assert r["cmFree"] is True and r["glDim"] == {"status": "finite", "value": 1}


def test_char_override(capsys):
    code, out, _ = run(capsys, "classify", ROOT / "fixtures" / "ringel665.toml", "--json", "--char", "101")
    doc = json.loads(out)
    assert code == 0 and doc["characteristic"] == 101
    golden = json.loads((ROOT / "golden" / "ringel665.json").read_text())
    assert doc["report"]["gpModules"] == golden["report"]["gpModules"]


def test_invalid_sequence_exit_1(capsys, tmp_path):
    f = tmp_path / "bad.toml"
    f.write_text('kind = "nakayama-cyclic"\n[algebra]\nsequence = [6, 4, 5]\n')
    code, _, err = run(capsys, "classify", f)
    assert code == 1 and "InvalidAdmissibleSequence" in err


def test_parse_error_has_position(capsys, tmp_path):
    f = tmp_path / "bad.toml"
    f.write_text('kind = "nakayama-cyclic"\n[algebra]\nsequence = [2,, 3]\n')
    code, _, err = run(capsys, "classify", f)
    assert code == 1 and "line 3" in err and "column" in err


def test_unknown_key_rejected():
    with pytest.raises(SpecError, match="line 2.*colour"):
        parse_spec('kind = "nakayama-linear"\ncolour = 1\n[algebra]\nsequence = [2, 1]\n')
    with pytest.raises(SpecError, match="unknown"):
        parse_spec('kind = "nakayama-linear"\n[algebra]\nsequence = [2, 1]\nvertices = 2\n')
    with pytest.raises(SpecError, match="kind"):
        parse_spec('kind = "tensor"\n')


def test_caps_parse():
    spec = parse_spec('kind = "nakayama-cyclic"\n[algebra]\nsequence = [2]\n[caps]\nmaxDepth = 5\nglDimCap = 7\n')
    assert spec.caps.max_depth == 5 and spec.caps.gl_dim_cap == 7


def test_missing_file(capsys):
    assert run(capsys, "classify", ROOT / "nope.toml")[0] == 1


@pytest.mark.parametrize("theorem", ["free", "exp", "yoneda", "stability", "dif"])
def test_verify_ringel(capsys, theorem):
    code, out, _ = run(capsys, "verify", ROOT / "fixtures" / "ringel665.toml", "--theorem", theorem)
    assert code == 0 and "pass" in out


def test_verify_free_8887(capsys):
    assert run(capsys, "verify", ROOT / "fixtures" / "ringel8887.toml", "--theorem", "free", "--json")[0] == 0


def test_verify_dif_dual_numbers(capsys):
    code, out, _ = run(capsys, "verify", ROOT / "fixtures" / "dual_numbers.toml", "--theorem", "dif", "--json")
    assert code == 0 and json.loads(out)["result"]["decided"] is True


def emit_and_classify(capsys, tmp_path, stem):
    out = tmp_path / f"aus_{stem}.toml"
    assert run(capsys, "aus", ROOT / "fixtures" / f"{stem}.toml", "--emit", out)[0] == 0
    code, text, _ = run(capsys, "classify", out, "--json")
    assert code == 0
    return json.loads(text)["report"]


def test_aus_a2_is_cm_free(capsys, tmp_path):
    r = emit_and_classify(capsys, tmp_path, "a2")
    assert r["cmFree"] is True and r["dim"] == 3


def test_aus_dual_numbers_finite_gldim(capsys, tmp_path):
    r = emit_and_classify(capsys, tmp_path, "dual_numbers")
    assert r["glDim"]["status"] == "finite" and r["dim"] == 5


def test_aus_ringel_refutation_empty(capsys, tmp_path):
    r = emit_and_classify(capsys, tmp_path, "ringel665")
    assert r["aus"]["cmFreeRefutationEmpty"] is True
    assert r["dim"] == 24


def test_emitted_file_round_trips(capsys, tmp_path):
    out = tmp_path / "g.toml"
    main(["aus", str(ROOT / "fixtures" / "dual_numbers.toml"), "--emit", str(out)])
    spec = parse_spec(out.read_text())
    assert spec.kind == "structure-constants" and spec.payload["dim"] == 5
    assert spec.build().dim == 5
