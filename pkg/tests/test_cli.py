from __future__ import annotations

import json
import math

import numpy as np
import pytest

import nmbqc
import nmbqc.channels
from nmbqc.channels import ADParams
from nmbqc.cli import main
from nmbqc.fidelity import resource_gate_fidelity
from nmbqc.mbqc import MeasurementSchedule, ResourceKind

FAST_GRID = ["--grid", "21x20"]


def run(tmp_path, *args, name="out.csv"):
    out = tmp_path / name
    code = main([*args, "--out", str(out)])
    return code, out


def columns(rows, k):
    return np.array([float(r[k]) for r in rows])


def test_gate_table(tmp_path, read_csv):
    code, out = run(tmp_path, "gate-table")
    assert code == 0
    header, cols, rows = read_csv(out)
    assert cols == ["code", "fidelity_ad", "fidelity_pd", "fidelity_ad_raw", "fidelity_pd_raw"]
    assert len(rows) == 15
    table = {r[0]: (float(r[3]), float(r[4])) for r in rows}
    for code_, (fa, fp) in {"1-1-1-1": (0.958, 0.928), "2-2-2-3": (0.501, 0.308), "3-3-3-3": (0.919, 0.868)}.items():
        assert table[code_][0] == pytest.approx(fa, abs=0.005)
        assert table[code_][1] == pytest.approx(fp, abs=0.005)
    assert all(r[1] == f"{float(r[3]):.3f}" for r in rows)


def test_gate_table_single_row_by_simulation(tmp_path, read_csv):
    code, out = run(tmp_path, "gate-table", "--schedule", "1-2-2-2", "--method", "simulate", *FAST_GRID)
    assert code == 0
    header, _, rows = read_csv(out)
    assert [r[0] for r in rows] == ["1-2-2-2"]
    assert header["method"] == "simulate"


def test_resource_table(tmp_path, read_csv):
    code, out = run(tmp_path, "resource-table", "--gate", "z")
    assert code == 0
    _, cols, rows = read_csv(out)
    assert cols[:3] == ["code", "fidelity_ad", "fidelity_pd"]
    assert len(rows) == 10
    ad = ADParams()
    sched = MeasurementSchedule.from_codes((1, 2, 3), ad)
    row = next(r for r in rows if r[0] == "1-2-3")
    assert float(row[3]) == resource_gate_fidelity(ResourceKind.Z, ad, sched).value


def test_cluster_curve_ad(tmp_path, read_csv):
    code, out = run(tmp_path, "cluster-curve", "--channel", "ad", *FAST_GRID)
    assert code == 0
    _, cols, rows = read_csv(out)
    assert cols == ["t", "fidelity"]
    t, f = columns(rows, 0), columns(rows, 1)
    assert t[0] == 0 and f[0] == pytest.approx(1.0, abs=1e-12)
    step = t[1] - t[0]
    peak = 2 * math.pi / ADParams().d
    i = np.argmin(np.abs(t - peak))
    assert abs(t[i] - peak) <= step
    assert f[i] > f[i - 1] and f[i] > f[i + 1]


def test_cluster_curve_pd(tmp_path, read_csv):
    code, out = run(tmp_path, "cluster-curve", "--channel", "pd", *FAST_GRID)
    assert code == 0
    _, _, rows = read_csv(out)
    t, f = columns(rows, 0), columns(rows, 1)
    i = np.argmin(np.abs(t - 1.5 * math.pi))
    assert abs(t[i] - 1.5 * math.pi) <= t[1] - t[0]
    assert f[i] < f[i - 1] and f[i] < f[i + 1]


def test_memory_curves(tmp_path, read_csv):
    code, out = run(tmp_path, "memory-curves")
    assert code == 0
    _, cols, rows = read_csv(out)
    assert cols == ["t", "L_tau30", "L_tau10", "L_tau5", "L_tau2"]
    assert [float(x) for x in rows[0][1:]] == [1.0] * 4
    t = columns(rows, 0)
    i = np.argmin(np.abs(t - 1.5 * math.pi))
    assert float(rows[i][1]) == pytest.approx(-0.92, abs=0.01)
    window = (t >= 1) & (t <= 10)
    assert np.abs(columns(rows, 4)[window]).max() < np.abs(columns(rows, 1)[window]).max()
    _, pcols, prow = read_csv(tmp_path / "out_p.csv")
    assert pcols == ["t", "p"] and float(prow[0][1]) == 1.0


def test_stddev_map(tmp_path, read_csv):
    code, out = run(tmp_path, "stddev-map")
    assert code == 0
    header, cols, rows = read_csv(out)
    assert cols == ["theta", "phi", "fidelity", "abs_deviation"]
    assert len(rows) == 10100
    assert header["channel"] == "pd"
    summary = json.loads((tmp_path / "out.summary.json").read_text())
    assert summary["max_dev"] == pytest.approx(0.055, abs=0.005)
    assert summary["mean_abs_dev"] == pytest.approx(0.019, abs=0.005)
    assert {"mean", "std_dev", "max_dev"} <= set(summary)


def test_json_format(tmp_path):
    code, out = run(tmp_path, "gate-table", "--format", "json", name="g.json")
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["columns"][0] == "code" and len(payload["rows"]) == 15
    assert payload["header"]["tool"] == f"nmbqc {nmbqc.__version__}"


@pytest.mark.parametrize(
    "args",
    [
        ["gate-table"],
        ["resource-table"],
        ["memory-curves", "--t-max", "1"],
        ["cluster-curve", "--t-max", "1", *FAST_GRID],
        ["stddev-map", *FAST_GRID],
    ],
)
def test_provenance_header_and_determinism(tmp_path, args):
    code_a, a = run(tmp_path, *args, name="a.csv")
    code_b, b = run(tmp_path, *args, name="b.csv")
    assert code_a == code_b == 0
    text = a.read_text()
    assert text.startswith("# tool=nmbqc ")
    for key in ("lambda", "gamma0", "a", "tau", "grid", "scheme", "branch_convention"):
        assert f"# {key}=" in text
    assert a.read_bytes() == b.read_bytes()


def test_verify_passes(capsys):
    assert main(["verify"]) == 0
    out = capsys.readouterr().out
    assert "max discrepancy" in out and out.strip().endswith("verify: PASS")


def test_verify_noiseless(capsys):
    assert main(["verify", "--noiseless", *FAST_GRID]) == 0
    rows = [line for line in capsys.readouterr().out.splitlines() if line.startswith("ok")]
    assert len(rows) == 30
    assert all("closed=1.000000000000" in r for r in rows)


def test_verify_catches_corrupted_decay(monkeypatch, capsys):
    real = nmbqc.channels.ad_p
    monkeypatch.setattr(nmbqc.channels, "ad_p", lambda t, params: -real(t, params))
    assert main(["verify", *FAST_GRID]) == 1
    assert "FAIL ad" in capsys.readouterr().out


def test_config_precedence(tmp_path, read_csv):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\ntau = 10\nbranch-convention = uniform\n")
    _, out = run(tmp_path, "gate-table", "--config", str(cfg))
    header, _, _ = read_csv(out)
    assert header["tau"] == "10.0" and header["branch_convention"] == "uniform"
    _, out = run(tmp_path, "gate-table", "--config", str(cfg), "--tau", "5")
    header, _, _ = read_csv(out)
    assert header["tau"] == "5.0"


@pytest.mark.parametrize(
    "args",
    [
        ["gate-table", "--grid", "3y3"],
        ["gate-table", "--schedule", "1-2-4-4"],
        ["stddev-map", "--schedule", "2-1-1-1"],
        ["gate-table", "--lambda", "5", "--gamma0", "1"],
    ],
)
def test_argument_errors(args):
    assert main(args) == 2


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["gate-table", "--channel", "xy"])
    assert exc.value.code == 2


def test_bad_config_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    assert main(["gate-table", "--config", str(cfg)]) == 2


def test_io_errors(tmp_path):
    assert main(["gate-table", "--out", str(tmp_path / "missing" / "x.csv")]) == 3
    assert main(["gate-table", "--config", str(tmp_path / "nope.cfg")]) == 3


def test_explicit_time_schedule(tmp_path, read_csv):
    code, out = run(tmp_path, "stddev-map", "--schedule", "1,1.5,1.5,1.5", *FAST_GRID)
    assert code == 0
    header, _, _ = read_csv(out)
    assert json.loads(header["schedule"].replace("'", '"')) == pytest.approx([math.pi, 1.5 * math.pi, 1.5 * math.pi, 1.5 * math.pi])


def test_help_lists_code_table(capsys):
    with pytest.raises(SystemExit):
        main(["gate-table", "--help"])
    out = capsys.readouterr().out
    assert "amplitude damping (pi/d)" in out and "3pi/2" in out
