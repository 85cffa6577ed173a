import json

import pytest

from crossing_forge.cli import main


@pytest.fixture
def cnf(tmp_path):
    p = tmp_path / "example.cnf"
    p.write_text("p cnf 5 3\n1 -2 4 -5 0\n-1 -3 5 0\n2 3 -4 0\n")
    return p


@pytest.fixture
def unsat(tmp_path):
    p = tmp_path / "unsat.cnf"
    p.write_text("p cnf 1 2\n1 0\n-1 0\n")
    return p


def run(args, capsys):
    code = main([str(a) for a in args])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_reduce_draw_audit_extract(tmp_path, cnf, capsys):
    g = tmp_path / "g.cfg"
    d = tmp_path / "d.drw"
    assert run(["reduce", cnf, "--out", g, "--trace", tmp_path / "t.txt"], capsys)[0] == 0
    assert run(["draw", g, "--assignment", "11000", "--plan", "5,3,2", "--out", d,
                "--svg", tmp_path / "d.svg"], capsys)[0] == 0
    code, out, _ = run(["audit", g, d, "--json"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert int(rep["value"]) <= int(rep["k_value"])
    code, out, _ = run(["extract", g, d], capsys)
    assert code == 0 and out.strip() == "11000"


def test_draw_refuses_bad_plan(tmp_path, cnf, capsys):
    g = tmp_path / "g.cfg"
    run(["reduce", cnf, "--out", g], capsys)
    code, _, err = run(["draw", g, "--assignment", "11000", "--plan", "1,1,1"], capsys)
    assert code == 1 and "refused" in err


def test_forced_drawing_fails_audit(tmp_path, unsat, capsys):
    g, d = tmp_path / "g.cfg", tmp_path / "d.drw"
    run(["reduce", unsat, "--out", g], capsys)
    assert run(["draw", g, "--assignment", "1", "--forced", "--out", d], capsys)[0] == 0
    code, out, _ = run(["audit", g, d], capsys)
    assert code == 1 and "BUDGET" in out


def test_decompose_and_validate(tmp_path, cnf, capsys):
    g = tmp_path / "g.cfg"
    run(["reduce", cnf, "--out", g], capsys)
    for flag in ("--path", "--tree"):
        dec = tmp_path / f"x{flag}.dec"
        assert run(["decompose", g, flag, "--out", dec], capsys)[0] == 0
        code, out, _ = run(["validate-decomposition", g, dec], capsys)
        assert code == 0 and out.startswith("valid")
    dec = tmp_path / "s.dec"
    assert run(["decompose", g, "--subdivided", "--out", dec], capsys)[0] == 0
    assert run(["validate-decomposition", g, dec, "--subdivided"], capsys)[0] == 0


def test_analyze(capsys):
    code, out, _ = run(["analyze", "a-of-h", "--h", "1", "--json"], capsys)
    assert code == 0 and json.loads(out)["A"] == "3*w^7 + 17*w^4"
    assert run(["analyze", "identities", "--max-h", "10"], capsys)[0] == 0
    code, out, _ = run(["analyze", "brute-min", "--h", "3", "--json"], capsys)
    assert json.loads(out)["unique_alternating"] is True
    assert run(["analyze", "a-of-h", "--h", "0"], capsys)[0] == 2


def test_pw_exact_edge_list(tmp_path, capsys):
    p = tmp_path / "k4.txt"
    p.write_text("a b\na c\na d\nb c\nb d\nc d\n")
    code, out, _ = run(["pw-exact", p], capsys)
    assert code == 0 and out.strip() == "pathwidth 3"


def test_simplify(tmp_path, cnf, capsys):
    g = tmp_path / "g.cfg"
    run(["reduce", cnf, "--out", g], capsys)
    assert run(["simplify", g, "--out", tmp_path / "s.cfg"], capsys)[0] == 0


def test_selfcheck(capsys):
    code, out, _ = run(["selfcheck", "--max-h", "20"], capsys)
    assert code == 0 and "FAIL" not in out


def test_end_to_end_exit_codes(tmp_path, cnf, unsat, capsys):
    code, out, _ = run(["end-to-end", cnf, "--out-dir", tmp_path / "a", "--json"], capsys)
    assert code == 0 and json.loads(out)["ok"]
    code, out, _ = run(["end-to-end", unsat, "--out-dir", tmp_path / "b"], capsys)
    assert code == 3 and "unsat demonstrated" in out


def test_env_default_out_dir(tmp_path, cnf, capsys, monkeypatch):
    monkeypatch.setenv("CROSSING_FORGE_OUT", str(tmp_path / "env"))
    assert run(["end-to-end", cnf], capsys)[0] == 0
    assert (tmp_path / "env" / "example" / "report.json").exists()


@pytest.mark.parametrize("args", [
    [],
    ["frobnicate"],
    ["reduce", "/nonexistent.cnf"],
    ["draw", "/nonexistent.cfg", "--assignment", "1"],
])
def test_usage_errors(args, capsys):
    assert run(args, capsys)[0] == 2


def test_malformed_cnf_is_usage_error(tmp_path, capsys):
    p = tmp_path / "bad.cnf"
    p.write_text("p cnf 1 1\n2 0\n")
    code, _, err = run(["reduce", p], capsys)
    assert code == 2 and "error" in err
