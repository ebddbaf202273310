import csv
import json

import pytest

from spinising import graphs
from spinising.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_graph_counts(capsys):
    code, out, _ = run(capsys, "graph", "--generate", "k4")
    assert code == 0
    assert "vertices 4" in out
    assert "edges 6" in out
    assert "faces 4" in out


def test_graph_from_file(capsys, tmp_path):
    path = tmp_path / "g.txt"
    path.write_text(graphs.generate("theta").to_text())
    code, out, _ = run(capsys, "graph", "--graph", str(path))
    assert code == 0
    assert "vertices 2" in out


def test_kasteleyn_listing(capsys):
    code, out, _ = run(capsys, "kasteleyn", "--generate", "cube")
    assert code == 0
    assert "kasteleyn true" in out
    edge_lines = [l for l in out.splitlines() if l.startswith("edge ")]
    assert len(edge_lines) == 12
    for line in edge_lines:
        parts = line.split()
        assert len(parts) == 4
        int(parts[1]), int(parts[2]), int(parts[3])


def test_ising_z(capsys):
    code, out, _ = run(capsys, "ising", "z", "--generate", "theta",
                       "--coupling", "1/3")
    assert code == 0
    assert "z 4/3" in out


def test_ising_corr(capsys):
    code, out, _ = run(capsys, "ising", "corr", "--generate", "theta",
                       "--coupling", "1/3", "--edge", "0")
    assert code == 0
    assert "corr 0 7/9" in out


def test_ising_corr_needs_edge(capsys):
    code, _, err = run(capsys, "ising", "corr", "--generate", "theta",
                       "--coupling", "1/3")
    assert code == 2
    assert "edge" in err


def test_grassmann_forms(capsys):
    for form in ("real", "complex", "squared"):
        code, out, _ = run(capsys, "grassmann", "--generate", "theta",
                           "--form", form)
        assert code == 0, form
        assert "matches_loop_sum true" in out


def test_spinnet_series(capsys):
    code, out, _ = run(capsys, "spinnet", "series", "--generate", "theta",
                       "--degree", "4")
    assert code == 0
    assert "1 1 0 -2" in out


def test_spinnet_eval(capsys):
    code, out, _ = run(capsys, "spinnet", "eval", "--generate", "theta",
                       "--colors", "1,1,0")
    assert code == 0
    value = float(out.splitlines()[0].split()[1])
    assert value == pytest.approx(-2.0, abs=1e-9)


def test_bridge_verify(capsys):
    code, out, _ = run(capsys, "bridge", "verify", "--generate", "k4",
                       "--Y", "1/3")
    assert code == 0
    assert "PASS fundamental_equality" in out
    assert "FAIL" not in out


def test_verify_all(capsys):
    code, out, _ = run(capsys, "verify-all", "--generate", "k4")
    assert code == 0
    assert out.count("PASS") == 7
    assert "FAIL" not in out


def test_json_output(capsys):
    code, out, _ = run(capsys, "--json", "verify-all", "--generate", "theta")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema_version"] == 1
    assert doc["ok"] is True
    assert all(c["ok"] for c in doc["checks"])


def test_determinism(capsys):
    _, out1, _ = run(capsys, "--json", "spinnet", "series", "--generate", "k4",
                     "--degree", "4")
    _, out2, _ = run(capsys, "--json", "spinnet", "series", "--generate", "k4",
                     "--degree", "4")
    assert out1 == out2


def test_unknown_command(capsys):
    with pytest.raises(SystemExit) as ex:
        main(["frobnicate"])
    assert ex.value.code == 2


def test_crit_hex(capsys, tmp_path):
    out_path = tmp_path / "curve.csv"
    code, out, _ = run(capsys, "crit", "hex", "--from", "0.3", "--to", "0.5",
                       "--step", "0.1", "--out", str(out_path))
    assert code == 0
    assert "rows 3" in out
    with open(out_path) as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 3


def test_crit_stationary(capsys, tmp_path):
    spec_path = tmp_path / "tri.txt"
    spec_path.write_text("generate k4 " + " ".join(["1.0"] * 6))
    code, out, _ = run(capsys, "crit", "stationary", "--triangles",
                       str(spec_path))
    assert code == 0
    y_lines = [l for l in out.splitlines() if l.startswith("Y ")]
    assert len(y_lines) == 6
    for line in y_lines:
        assert float(line.split()[2]) == pytest.approx(3 ** -0.5, abs=1e-12)


def test_missing_file_is_usage_error(capsys):
    code, _, err = run(capsys, "graph", "--graph", "/nonexistent/file")
    assert code == 2
    assert "error" in err
