import json

import pytest
from hypothesis import given, settings, strategies as st

from reslie import liealg
from reslie.errors import ParseError, ValidationError
from reslie.workbench import cli, fileformat
from reslie.workbench.catalog import FIXTURE_DIR, builtin_catalog, catalog_paths
from reslie.workbench.report import Report, strip_timing
from reslie.workbench.verify import VerifyOutcome

from conftest import F4

HEIS = """restricted-lie-algebra 1
# Heisenberg over F_2
field p=2
dim 3
basis x y z
bracket x y = z
"""


def test_parse_heisenberg():
    P = fileformat.parse(HEIS)
    assert P.dim == 3 and P.names == ("x", "y", "z")
    assert P.brackets == {(0, 1): (0, 0, 1)}
    assert all(not any(v) for v in P.pmap)


def test_reversed_bracket_is_negated():
    text = "restricted-lie-algebra 1\nfield p=3\ndim 3\nbasis x y z\nbracket y x = z\n"
    assert fileformat.parse(text).brackets == {(0, 1): (0, 0, 2)}


def test_extension_field_coefficients():
    text = ("restricted-lie-algebra 1\nfield p=2 k=2 modulus=1,1,1\ndim 2\nbasis a b\n"
            "pmap a = (u+1)*b\npmap b = 0\n")
    P = fileformat.parse(text)
    assert P.field == F4
    assert P.pmap[0] == (0, 3)
    assert fileformat.parse(fileformat.serialize(P)).structure_key() == P.structure_key()


@pytest.mark.parametrize("text, line, column, fragment", [
    ("algebra 1\n", 1, 1, "header"),
    ("restricted-lie-algebra 2\n", 1, 24, "version"),
    ("restricted-lie-algebra 1\nfield p=4\n", 2, None, "prime"),
    ("restricted-lie-algebra 1\nfield p=2\ndim 2\nbasis x x\n", 4, 1, "distinct"),
    ("restricted-lie-algebra 1\nfield p=2\ndim 1\nbasis x\npmap y = x\n", 5, 6, "unknown basis name"),
    ("restricted-lie-algebra 1\nfield p=2\ndim 2\nbasis x y\nbracket x y = x +\n", 5, None, ""),
    ("restricted-lie-algebra 1\nfield p=2\ndim 2\nbasis x y\nbracket x y = 3*w\n", 5, 17, "w"),
    ("restricted-lie-algebra 1\nfield p=2\ndim 2\nbasis x y\npmap x = y\npmap x = 0\n", 6, 1, "twice"),
    ("restricted-lie-algebra 1\nfield p=2\nbasis x\n", 3, 1, "basis before dim"),
    ("restricted-lie-algebra 1\nfield p=2\ndim 1\nbasis x\nfrobnicate x\n", 5, 1, "unknown statement"),
])
def test_parse_errors_carry_position(text, line, column, fragment):
    with pytest.raises(ParseError) as info:
        fileformat.parse(text, source="t.alg")
    err = info.value
    assert err.line == line
    if column is not None:
        assert err.column == column
    assert fragment in str(err)
    assert str(err).startswith(f"t.alg:{line}:")


def test_validation_error_names_axiom():
    text = HEIS + "pmap x = y\n"
    with pytest.raises(ValidationError) as info:
        fileformat.parse(text)
    assert info.value.report.violations
    assert fileformat.parse(text, validate=False).pmap[0] == (0, 1, 0)


def test_shipped_files_match_builtin_catalog():
    built = builtin_catalog()
    paths = catalog_paths()
    assert {p.stem for p in paths} == set(built)
    for path in paths:
        assert path.read_text() == fileformat.serialize(built[path.stem][0], built[path.stem][1])


def test_round_trip_every_fixture(catalog):
    for name, P in catalog.items():
        text = fileformat.serialize(P)
        Q = fileformat.parse(text)
        assert Q.structure_key() == P.structure_key(), name
        assert fileformat.serialize(Q) == text


def test_catalog_coverage(catalog):
    names = set(catalog)
    assert {"line-f2-0", "line-f2-1", "line-f3-0", "line-f3-1", "line-f3-2"} <= names
    for parts in ["2", "11", "3", "21", "111", "4", "31", "22", "211", "1111"]:
        assert f"abelian-f2-{parts}" in names
    assert sum(1 for n in names if n.startswith("heis-f2-") and "rebased" not in n) == 8
    assert sum(1 for n in names if n.startswith("heis-f3-") and "rebased" not in n) == 27
    assert any(not liealg.is_p_nilpotent(P) for P in catalog.values())
    assert any(liealg.is_nilpotent(P) and liealg.nilpotence_class(P) == 3 for P in catalog.values())


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(sorted(builtin_catalog())), st.text(alphabet="abc xyz#", max_size=20))
def test_round_trip_with_comments(name, comment):
    P = builtin_catalog()[name][0]
    text = fileformat.serialize(P, comment.replace("#", "") or None)
    assert fileformat.parse(text).structure_key() == P.structure_key()


# reports

def test_report_timing_is_isolated():
    r = Report("x")
    r.body = {"value": float("inf"), "pair": (1, 2)}
    with r.timed("step"):
        pass
    doc = json.loads(r.to_json())
    assert doc["result"] == {"value": "inf", "pair": [1, 2]}
    assert "step" in doc["timing"]
    assert strip_timing(doc) == json.loads(r.to_json(include_timing=False))


def _run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


def test_cli_reports_deterministic(capsys, tmp_path):
    f = str(FIXTURE_DIR / "filiform-f3-1.alg")
    outs = []
    for _ in range(2):
        code, out = _run(capsys, "invariants", f, "--format", "structured")
        assert code == 0
        outs.append(json.dumps(strip_timing(json.loads(out)), sort_keys=True))
    assert outs[0] == outs[1]


def test_cli_invariants_heisenberg(capsys):
    code, out = _run(capsys, "invariants", str(FIXTURE_DIR / "heis-f2-000.alg"), "--format", "structured")
    doc = json.loads(out)
    assert code == 0
    assert doc["result"]["fingerprint"]["omega_dims"] == [7, 5, 3, 1, 0]
    assert doc["inputs"][0]["digest"].startswith("sha256:")
    assert doc["inputs"][0]["field"]["modulus"] == [0, 1]


def test_cli_invariants_non_p_nilpotent(capsys):
    code, out = _run(capsys, "invariants", str(FIXTURE_DIR / "affine-f3.alg"), "--format", "structured")
    assert code == 0
    assert json.loads(out)["result"]["fingerprint"] is None


def test_cli_compare_rebased(capsys, tmp_path):
    a, b = (str(FIXTURE_DIR / f) for f in ("heis-f2-100.alg", "heis-f2-100-rebased.alg"))
    out_file = tmp_path / "cmp.json"
    code, out = _run(capsys, "compare", a, b, "--format", "structured", "--report-out", str(out_file))
    assert code == 0
    doc = json.loads(out)
    assert doc == json.loads(out_file.read_text())
    res = doc["result"]
    assert res["fingerprint_differences"] == []
    assert res["lie_iso"]["status"] == "isomorphic" and res["lie_iso"]["witness"]
    assert res["consistency"]["outcome"] == "consistent"


def test_cli_decompose(capsys):
    code, out = _run(capsys, "decompose", str(FIXTURE_DIR / "abelian-f2-211.alg"), "--format", "structured")
    assert code == 0
    assert sorted(json.loads(out)["result"]["cyclic"]["exponents"]) == [1, 1, 2]
    code, out = _run(capsys, "decompose", str(FIXTURE_DIR / "heis-f2-000.alg"))
    assert code == 2 and "abelian" in out


def test_cli_exit_code_parse_and_validation(capsys, tmp_path):
    bad = tmp_path / "bad.alg"
    bad.write_text("restricted-lie-algebra 1\nfield p=2\ndim 1\nbasis x\npmap y = x\n")
    code, out = _run(capsys, "validate", str(bad), "--format", "structured")
    assert code == 2
    body = json.loads(out)["result"]
    assert body["kind"] == "ParseError" and (body["line"], body["column"]) == (5, 6)
    invalid = tmp_path / "invalid.alg"
    invalid.write_text(HEIS + "pmap x = y\n")
    code, out = _run(capsys, "validate", str(invalid))
    assert code == 2 and "ValidationError" in out
    code, _ = _run(capsys, "validate", str(tmp_path / "missing.alg"))
    assert code == 2


def test_cli_exit_code_size_limit(capsys, tmp_path):
    names = " ".join(f"x{i}" for i in range(11))
    big = tmp_path / "big.alg"
    big.write_text(f"restricted-lie-algebra 1\nfield p=3\ndim 11\nbasis {names}\n")
    code, out = _run(capsys, "invariants", str(big))
    assert code == 3 and "SizeLimit" in out


def test_cli_exit_code_property_failure(capsys, monkeypatch, tmp_path):
    failing = VerifyOutcome([], [])
    monkeypatch.setattr(VerifyOutcome, "ok", property(lambda self: False))
    monkeypatch.setattr(cli, "run_catalog", lambda *a, **k: failing)
    (tmp_path / "one.alg").write_text(HEIS)
    code, _ = _run(capsys, "verify", str(tmp_path))
    assert code == 1


def test_cli_verify_small_catalog(capsys, tmp_path):
    for name in ("heis-f2-000", "heis-f2-100", "abelian-f2-21", "line-f2-1"):
        (tmp_path / f"{name}.alg").write_text((FIXTURE_DIR / f"{name}.alg").read_text())
    code, out = _run(capsys, "verify", str(tmp_path), "--trials", "5", "--format", "structured")
    doc = json.loads(out)
    assert code == 0
    assert doc["result"]["summary"]["failures"] == 0
    assert doc["result"]["summary"]["candidate_violations"] == 0
    code2, out2 = _run(capsys, "verify", str(tmp_path), "--trials", "5", "--format", "structured", "--jobs", "2")
    assert code2 == 0
    assert strip_timing(json.loads(out2)) == strip_timing(doc)


def test_cli_verify_empty_dir(capsys, tmp_path):
    code, _ = _run(capsys, "verify", str(tmp_path))
    assert code == 2


def test_cli_verify_shipped_catalog(capsys):
    code, out = _run(capsys, "verify", "--format", "structured")
    summary = json.loads(out)["result"]["summary"]
    assert code == 0
    assert summary["failures"] == 0 and summary["candidate_violations"] == 0
    assert summary["algebras"] == len(catalog_paths())
