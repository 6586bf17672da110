import csv
import json
import subprocess
import sys

import pytest

from pushpull.cli import main

GEN = ["--generate", "erdos_renyi:200:600", "--seed", "3"]
PARAMS = ["--alpha", "0.4", "--beta", "0.6", "--gamma", "0.004"]


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_graph_info(tmp_path, capsys):
    code, out, _ = run(["graph-info", "--generate", "regular:100:4", "--out", str(tmp_path)], capsys)
    assert code == 0
    d = json.loads(out)
    assert d["nodes"] == 100 and d["edges"] == 200 and d["arcs"] == 400
    assert d["lambda1"] == pytest.approx(4.0, abs=1e-9)
    assert json.loads((tmp_path / "graph_info.json").read_text()) == d
    assert read_csv(tmp_path / "degree_histogram.csv") == [{"k": "4", "count": "100"}]


def test_graph_info_from_edge_file(tmp_path, capsys):
    f = tmp_path / "g.txt"
    f.write_text("# tiny\n10 20\n20 30\n20 10\n30 30\n")
    code, out, _ = run(["graph-info", "--edges", str(f)], capsys)
    assert code == 0
    d = json.loads(out)
    assert d["load_report"] == {"nodes": 3, "edges": 2, "duplicates_dropped": 1, "self_loops_dropped": 1}


def test_analyze(tmp_path, capsys):
    code, out, _ = run(["analyze", *GEN, *PARAMS, "--out", str(tmp_path)], capsys)
    assert code == 0
    d = json.loads(out)
    assert d["succinct_verdict"] == "stable"
    rows = read_csv(tmp_path / "bounds.csv")
    assert len(rows) == 200
    assert all(float(r["theta_minus"]) <= float(r["theta_plus"]) for r in rows)


def test_simulate(tmp_path, capsys):
    code, _, _ = run(["simulate", *GEN, *PARAMS, "--steps", "30", "--runs", "20", "--out", str(tmp_path)],
                     capsys)
    assert code == 0
    rows = read_csv(tmp_path / "simulate.csv")
    assert len(rows) == 31
    assert list(rows[0]) == ["t", "i_bar_model", "i_bar_mc", "i_bar_mc_std", "theta_minus_avg", "theta_plus_avg"]
    assert float(rows[0]["i_bar_model"]) == pytest.approx(0.2)


def test_meanfield(tmp_path, capsys):
    code, out, _ = run(["meanfield", *GEN, *PARAMS, "--sweep", "alpha", "--runs", "0",
                        "--out", str(tmp_path)], capsys)
    assert code == 0
    sweep = read_csv(tmp_path / "sweep.csv")
    assert [float(r["value"]) for r in sweep] == pytest.approx([0.1 * k for k in range(1, 10)])
    profile = read_csv(tmp_path / "profile.csv")
    assert "i_star_mc" not in profile[0]


def test_meanfield_warns_on_large_coupling(capsys):
    code, _, err = run(["meanfield", *GEN, "--alpha", "0.4", "--beta", "0.6", "--gamma", "0.2",
                        "--runs", "0", "--sweep", "beta"], capsys)
    assert code == 0
    assert err.count("warning:") == 1


def test_monitor_all_panel_has_zero_error(tmp_path, capsys):
    code, out, _ = run(["monitor", *GEN, *PARAMS, "--steps", "40", "--runs", "10", "--t0", "5", "--t1", "35",
                        "--panel-sizes", "2,8,all", "--running-x", "8", "--out", str(tmp_path)], capsys)
    assert code == 0
    d = json.loads(out)
    assert d["sweep"][-1] == {"x": "all", "abs_error": 0.0}
    panels = json.loads((tmp_path / "panels.json").read_text())
    assert panels[0]["x"] == 2 and len(panels[0]["nodes"]) == 2


def test_json_format(tmp_path, capsys):
    code, _, _ = run(["simulate", *GEN, *PARAMS, "--steps", "5", "--runs", "4", "--format", "json",
                      "--out", str(tmp_path)], capsys)
    assert code == 0
    rows = json.loads((tmp_path / "simulate.json").read_text())
    assert len(rows) == 6 and rows[0]["t"] == 0


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# experiment\ngenerate = regular:50:4\nalpha = 0.4\nbeta = 0.6\ngamma = 0.004\nsteps = 7\n")
    code, _, _ = run(["simulate", "--config", str(cfg), "--runs", "3", "--steps", "9",
                      "--out", str(tmp_path)], capsys)
    assert code == 0
    assert len(read_csv(tmp_path / "simulate.csv")) == 10


@pytest.mark.parametrize("argv", [
    ["analyze", *GEN],                                        # params missing
    ["analyze", *GEN, "--alpha", "1.5", "--beta", "0.1", "--gamma", "0.1"],
    ["graph-info", "--generate", "regular:7:3"],
    ["graph-info", "--edges", "/nonexistent/file.txt"],
    ["graph-info"],                                           # no graph source
])
def test_usage_errors_exit_2(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2
    assert err.startswith("error:")


def test_parse_error_reports_line(tmp_path, capsys):
    f = tmp_path / "bad.txt"
    f.write_text("0 1\n1 two\n")
    code, _, err = run(["graph-info", "--edges", str(f)], capsys)
    assert code == 2 and "line 2" in err


def test_monitor_window_outside_run(capsys):
    code, _, err = run(["monitor", *GEN, *PARAMS, "--steps", "5", "--runs", "2"], capsys)
    assert code == 2 and "window" in err


def test_unwritable_output_exits_3(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    code, _, _ = run(["graph-info", "--generate", "regular:10:2", "--out", str(blocker / "sub")], capsys)
    assert code == 3


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "pushpull", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and "pushpull" in res.stdout
