import os
import subprocess
import sys

import pytest

from newtonres import ConvexProfile, GOLDEN_A
from newtonres.cli import FIG1_V, UsageError, main, parse_range


@pytest.fixture(autouse=True)
def _one_worker(monkeypatch):
    monkeypatch.setenv("NEWTONRES_WORKERS", "1")


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _value(out, key):
    for line in out.splitlines():
        if line.startswith(key):
            return line.split("=", 1)[1].split()[0]
    raise KeyError(key)


def test_parse_range():
    assert parse_range("0:1:0.25") == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert parse_range("0:0.95:0.25") == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert len(parse_range("0.1:0.3:0.1")) == 3
    assert parse_range("1,2.5") == [1.0, 2.5]
    for bad in ("1:0:0.1", "0:1:0", "0:1", "a,b"):
        with pytest.raises(UsageError):
            parse_range(bad)


def test_pressure_at_rest(capsys):
    code, out, _ = _run(capsys, "pressure", "--v", "0", "--u", "1.3")
    assert code == 0
    assert float(_value(out, "p+ ")) == 0.5 and float(_value(out, "p- ")) == -0.5


def test_pressure_matches_direct(capsys):
    from newtonres import front

    code, out, _ = _run(capsys, "pressure", "--v", "1", "--u", "0")
    assert code == 0
    assert float(_value(out, "p+ ")) == pytest.approx(front(1.0).eval_direct(0.0), rel=1e-5)


def test_pressure_newton_regime(capsys):
    code, out, _ = _run(capsys, "pressure", "--v", "20", "--u", "0")
    assert code == 0
    assert float(_value(out, "p+ ")) == pytest.approx(400, rel=0.05)


def test_pressure_range_csv(capsys, tmp_path):
    path = tmp_path / "p.csv"
    code, _, _ = _run(capsys, "pressure", "--v", "1", "--u", "0:2:0.5", "--out", str(path))
    assert code == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "V,u,p_plus,p_minus,dp_plus,dp_minus" and len(lines) == 6


def test_solve_examples(capsys, tmp_path):
    code, out, _ = _run(capsys, "solve", "--v", "0.01", "--h", "0.5", "--out-dir", str(tmp_path))
    assert code == 0 and "Trapezium" in out
    code, out, _ = _run(capsys, "solve", "--v", "20", "--h", "3", "--out-dir", str(tmp_path))
    # boundaries at V = 20 are about (1, 65.8, 103.9), so h = 3 is a triangle
    assert code == 0 and "regime = Triangle " in out
    front = ConvexProfile.from_csv((tmp_path / "front_profile.csv").read_text())
    rear = ConvexProfile.from_csv((tmp_path / "rear_profile.csv").read_text())
    assert front.height == 3.0 and rear.height == 0.0
    assert front.to_csv() == (tmp_path / "front_profile.csv").read_text()


def test_solve_rejects_zero_height(capsys, tmp_path):
    code, _, err = _run(capsys, "solve", "--v", "1", "--h", "0", "--out-dir", str(tmp_path))
    assert code == 2 and "height" in err


def test_bad_arguments_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["solve", "--v", "1"])
    assert info.value.code == 2
    code, _, _ = _run(capsys, "pressure", "--v", "50", "--u", "0")
    assert code == 2
    code, _, _ = _run(capsys, "pressure", "--v", "1", "--u", "0", "--tol", "-1")
    assert code == 2


def test_numerical_failure_exit_3(capsys):
    code, _, err = _run(capsys, "pressure", "--v", "1", "--u", "1", "--tol", "1e-20")
    assert code == 3 and "AccuracyError" in err


def test_sweep_and_boundaries(capsys, tmp_path):
    path = tmp_path / "s.csv"
    code, _, _ = _run(capsys, "sweep", "--v", "0.5,1", "--h", "0.5:2:0.5", "--out", str(path))
    assert code == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "V,h,regime,h_plus,h_minus,R,R_reduced" and len(lines) == 9
    code, out, _ = _run(capsys, "boundaries", "--v", "1")
    assert code == 0 and float(_value(out, "u*  ")) == pytest.approx(3.54264, abs=1e-5)


def test_figures_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert _run(capsys, "figures", "--out-dir", str(a), "--format", "both")[0] == 0
    assert _run(capsys, "figures", "--out-dir", str(b), "--format", "csv")[0] == 0
    for name in ("fig1.csv", "fig2.csv", "fig3.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    assert (a / "fig1.svg").read_text().startswith("<svg")
    assert not (b / "fig1.svg").exists()

    rows = [r.split(",") for r in (a / "fig1.csv").read_text().splitlines()[1:]]
    assert len(rows) == len(FIG1_V) and float(rows[0][0]) == pytest.approx(0.05)
    lo, mid, hi = (float(x) for x in rows[0][1:])
    # at the smallest speed the curves sit near (a, a, 2a)
    assert lo == pytest.approx(GOLDEN_A, abs=0.03)
    assert mid == pytest.approx(GOLDEN_A, abs=0.15)
    assert hi == pytest.approx(2 * GOLDEN_A, abs=0.16)

    lim = [r.split(",") for r in (a / "fig2.csv").read_text().splitlines() if r.startswith("inf")]
    for V, h, regime, R in lim:
        h, R = float(h), float(R)
        assert R == pytest.approx(1 - h / 2 if h <= 1 else 1 / (1 + h * h), rel=1e-15)
    assert any(r.startswith("inf") for r in (a / "fig3.csv").read_text().splitlines())


def test_csv_round_trip(capsys, tmp_path):
    import csv
    import io

    _run(capsys, "figures", "--out-dir", str(tmp_path), "--format", "csv")
    text = (tmp_path / "fig2.csv").read_text()
    rows = list(csv.reader(io.StringIO(text)))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(rows[0])
    for r in rows[1:]:
        w.writerow([f"{float(r[0]):.17g}", f"{float(r[1]):.17g}", r[2], f"{float(r[3]):.17g}"])
    assert buf.getvalue() == text


def test_unwritable_out_dir(capsys, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    code, _, err = _run(capsys, "figures", "--out-dir", str(blocker / "sub"))
    assert code == 4


def test_verify_default_and_seed_determinism(capsys):
    code, out, _ = _run(capsys, "verify", "--seed", "7")
    assert code == 0
    checks = [l for l in out.splitlines() if l.startswith("CHECK")]
    assert len(checks) >= 8 and all(" PASS " in l for l in checks)
    mc1 = [l for l in out.splitlines() if l.startswith("MC")]
    code, out, _ = _run(capsys, "verify", "--seed", "7")
    assert [l for l in out.splitlines() if l.startswith("MC")] == mc1


def test_verify_unattainable_tolerance(capsys):
    code, _, err = _run(capsys, "verify", "--tol", "1e-20")
    assert code == 3 and "AccuracyError" in err


def test_module_entry_point():
    env = dict(os.environ, NEWTONRES_WORKERS="1")
    proc = subprocess.run([sys.executable, "-m", "newtonres", "boundaries", "--v", "1"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 0 and "u0+" in proc.stdout
