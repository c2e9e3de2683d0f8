import json

import pytest

from greenlimits import cli
from greenlimits.ideals import IdealSpec, maximal_ideal_power
from greenlimits.numcore import MultiPoly
from greenlimits.residues import PolyMap2
from greenlimits.sandwich import SandwichSummary

z1, z2 = MultiPoly.var(0, 2), MultiPoly.var(1, 2)


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def dump(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj.to_json() if hasattr(obj, "to_json") else obj))
    return p


def test_ideal_commands(capsys, tmp_path):
    f = dump(tmp_path, "m2.json", maximal_ideal_power(2))
    code, out, _ = run(capsys, "ideal", "ci", "--file", f)
    assert code == 0 and json.loads(out) == {"l": 3, "e": 4, "ci": False}
    f = dump(tmp_path, "m.json", IdealSpec.from_generators([z1, z2]))
    code, out, _ = run(capsys, "ideal", "length", "--file", f)
    assert code == 0 and json.loads(out)["l"] == 1
    f = dump(tmp_path, "line.json", IdealSpec.from_generators([z1]))
    code, out, _ = run(capsys, "ideal", "mult", "--file", f)
    assert code == 2 and json.loads(out)["error"] == "not certified"


def test_input_errors(capsys, tmp_path):
    code, out, _ = run(capsys, "ideal", "length", "--file", tmp_path / "missing.json")
    assert code == 1 and json.loads(out)["error"] == "input"
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, _ = run(capsys, "ideal", "length", "--file", bad)
    assert code == 1
    code, _, _ = run(capsys, "green", "sandwich", "--eps", "2")
    assert code == 1
    code, _, _ = run(capsys, "nope")
    assert code == 1
    code, _, _ = run(capsys, "green", "grid", "--samples", "4")
    assert code == 1


def test_family_commands(capsys):
    code, out, _ = run(capsys, "family", "predict", "--builtin", "gen3-generic")
    rep = json.loads(out)
    assert code == 0 and rep["converged"]
    assert rep["converges"] is False and (rep["l"], rep["e"]) == (3, 4)
    code, out, _ = run(capsys, "family", "predict", "--builtin", "gen3-collinear", "--alpha", "1")
    assert code == 0 and json.loads(out)["converges"] is True
    code, out, _ = run(capsys, "family", "limit", "--builtin", "product-2x2")
    assert code == 0 and json.loads(out)["limit_rank"] == 15 - 4


def test_family_bad_schedule(capsys):
    code, _, _ = run(capsys, "family", "limit", "--builtin", "gen3-generic", "--schedule", "0.1", "0.2", "0.01", "0.001")
    assert code == 1


def test_residue_commands(capsys, tmp_path):
    m = dump(tmp_path, "map.json", PolyMap2.of(z1 ** 2, z2))
    h = dump(tmp_path, "h.json", z1)
    code, out, _ = run(capsys, "residue", "eval", "--map", m, "--h", h)
    re, im = json.loads(out)["value"]
    assert code == 0 and abs(re - 1) < 1e-8 and abs(im) < 1e-8
    m = dump(tmp_path, "map2.json", PolyMap2.of(z1 ** 2, z2 ** 2))
    for poly, want in [(z1 * z2, False), (z1 ** 3, True)]:
        h = dump(tmp_path, "h2.json", poly)
        code, out, _ = run(capsys, "residue", "member", "--map", m, "--h", h)
        assert code == 0 and json.loads(out)["member"] is want


def test_disk_dump(capsys):
    code, out, _ = run(capsys, "disk", "dump", "--kind", "axes", "--z", 0.5, 0, 0.1, 0, "--eps", 1e-3)
    rep = json.loads(out)
    assert code == 0 and rep["certified"] and rep["upper"] <= 2 * -0.6931 + 0.05
    code, out, _ = run(capsys, "disk", "dump", "--kind", "axes", "--z", 0.5, 0, 0.4, 0)
    assert code == 1 and json.loads(out)["error"] == "domain"


def test_two_point(capsys):
    code, out, _ = run(capsys, "green", "two-point", "--rho", 0.01, "--samples", 64)
    rep = json.loads(out)
    assert code == 0
    assert rep["z1_decay_spread"] <= 1e-12 and rep["z2_decay_spread"] <= 1e-12


def test_grid_rows(capsys):
    code, out, _ = run(capsys, "green", "grid", "--samples", 64, "--eps", 1e-3)
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 65
    assert lines[0] == "re1,im1,re2,im2,region,lower,upper,model,width"


def test_sandwich_is_deterministic(capsys, tmp_path):
    outs = []
    for jobs in (1, 4):
        f = tmp_path / f"s{jobs}.csv"
        code, out, _ = run(capsys, "green", "sandwich", "--samples", 24, "--torus", 0.3, 0.6,
                           "--eps", 1e-2, "--jobs", jobs, "--out", f)
        assert code == 0 and json.loads(out)["violations"] == 0
        outs.append(f.read_bytes())
    assert outs[0] == outs[1]


def test_violation_exit_code(capsys, monkeypatch):
    def fake(bounds, case="generic", tol=1e-9):
        return SandwichSummary(len(bounds), 1, 0.0, 0.0, (bounds[0].z,))
    monkeypatch.setattr(cli, "summarize", fake)
    code, _, err = run(capsys, "green", "sandwich", "--samples", 16, "--eps", 1e-2)
    assert code == 3 and json.loads(err)["violations"] == 1


def test_config_defaults(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"samples": 16, "eps": 0.01, "torus": [0.4]}))
    code, out, _ = run(capsys, "green", "grid", "--config", cfg)
    assert code == 0 and len(out.strip().splitlines()) == 17
    cfg.write_text(json.dumps({"bogus": 1}))
    code, out, _ = run(capsys, "green", "grid", "--config", cfg)
    assert code == 1 and "bogus" in json.loads(out)["message"]


def test_help_exits_zero(capsys):
    assert cli.main(["--help"]) == 0
    capsys.readouterr()
