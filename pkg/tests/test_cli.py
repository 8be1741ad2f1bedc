"""Command-line surface: determinism, formats, exit codes."""

import json
import math
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from ontoq import cli
from ontoq.automaton import explicit_map, random_map, save_map
from ontoq.prequantize import CircleGrid


def write_density(path, m=64):
    q = CircleGrid(m).points()
    w = np.abs(1 + 0.5 * np.exp(1j * q)) ** 2 / (2.5 * math.pi)
    rows = "\n".join(f"{float(qi)!r},{float(wi)!r}" for qi, wi in zip(q, w))
    path.write_text("q,W\n" + rows + "\n")
    return path


# ---------------------------------------------------------------- scalars


def test_classify_prints_label(capsys):
    assert cli.main(["classify", "--n1", "2", "--n2", "1"]) == 0
    assert capsys.readouterr().out == "p=5 q=3 n=0\n"


def test_compose_prints_fraction(capsys):
    assert cli.main(["compose", "--p1", "1/3", "--p2", "1/5"]) == 0
    assert capsys.readouterr().out == "1/8\n"


def test_vacuum_period_prints_value(capsys):
    assert cli.main(["vacuum-period", "--lambda", "1.11e-52",
                     "--volume", "1e-18"]) == 0
    out = capsys.readouterr().out.strip()
    assert 3e-7 < float(out) < 3e-6


def test_vacuum_period_flat_space(capsys):
    assert cli.main(["vacuum-period", "--lambda", "0", "--volume", "1e-18"]) == 0
    assert capsys.readouterr().out.strip() == "inf"


# ---------------------------------------------------------------- census


def test_census_json_document(tmp_path):
    out = tmp_path / "census.json"
    assert cli.main(["census", "--n-states", "256", "--num-maps", "20",
                     "--seed", "3", "--out", str(out)]) == 0
    doc = cli.read_census_json(str(out))
    assert doc["schema_version"] == 1
    assert doc["params"]["n_states"] == 256
    assert doc["params"]["num_maps"] == 20
    assert sum(r["count"] for r in doc["histogram"]) > 0
    assert doc["derived"]["recurrent_mean"] > 0


def test_census_reruns_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["census", "--n-states", "128", "--num-maps", "10", "--seed", "5"]
    assert cli.main(argv + ["--out", str(a)]) == 0
    assert cli.main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_census_workers_env_invisible(tmp_path, monkeypatch):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["census", "--n-states", "128", "--num-maps", "12", "--seed", "8"]
    monkeypatch.setenv("ONTOQ_WORKERS", "1")
    cli.main(argv + ["--out", str(a)])
    monkeypatch.setenv("ONTOQ_WORKERS", "3")
    cli.main(argv + ["--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_census_sampled_mode(tmp_path):
    out = tmp_path / "s.json"
    assert cli.main(["census", "--n-states", "256", "--num-maps", "5",
                     "--mode", "sampled", "--samples-per-map", "7",
                     "--seed", "1", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["params"]["samples_per_map"] == 7
    assert sum(r["count"] for r in doc["histogram"]) == 35


# ---------------------------------------------------------------- circle


def test_prequantize_round_trip(tmp_path):
    density = write_density(tmp_path / "w.csv")
    out = tmp_path / "wf.csv"
    report = tmp_path / "report.json"
    assert cli.main(["prequantize", "--density", str(density),
                     "--out", str(out), "--report", str(report)]) == 0

    first = out.read_text().splitlines()[0]
    assert first.startswith("# config:")
    assert json.loads(first[len("# config:"):])["zeros"] == 0

    q, w, alpha, beta, psi = cli.read_wavefunction_csv(str(out))
    assert np.abs(np.abs(psi) ** 2 - w).max() < 1e-10
    assert np.allclose(alpha, 0.5 * np.log(w))

    rep = json.loads(report.read_text())
    assert rep["spectrum_report"]["max_negative_mode_magnitude"] < 1e-9
    assert rep["spectrum_report"]["occupied_min_n"] == 0


def test_prequantize_output_reusable_as_density(tmp_path):
    density = write_density(tmp_path / "w.csv")
    out = tmp_path / "wf.csv"
    cli.main(["prequantize", "--density", str(density), "--out", str(out)])
    # the wavefunction CSV leads with (q, W), so it is itself a density file
    d = cli.read_density_csv(str(out))
    d0 = cli.read_density_csv(str(density))
    assert np.abs(d.w - d0.w).max() < 1e-15


def test_prequantize_mode_floor_flag(tmp_path):
    density = write_density(tmp_path / "w.csv")
    report = tmp_path / "r.json"
    cli.main(["prequantize", "--density", str(density), "--zeros", "2",
              "--out", str(tmp_path / "wf.csv"), "--report", str(report)])
    assert json.loads(report.read_text())["spectrum_report"]["occupied_min_n"] == 2


def test_prequantize_rejects_bad_density(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    q = CircleGrid(8).points()
    rows = "\n".join(f"{qi},{1.0 if i != 3 else -1.0}" for i, qi in enumerate(q))
    bad.write_text("q,W\n" + rows + "\n")
    assert cli.main(["prequantize", "--density", str(bad)]) == 1
    err = capsys.readouterr().err
    assert "error:" in err and "sample 3" in err


def test_prequantize_rejects_off_grid_samples(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("q,W\n0.0,1.0\n0.5,1.0\n1.0,1.0\n1.5,1.0\n")
    assert cli.main(["prequantize", "--density", str(bad)]) == 1
    assert "uniform grid" in capsys.readouterr().err


# ---------------------------------------------------------------- maps


def test_quotient_json(tmp_path):
    out = tmp_path / "q.json"
    assert cli.main(["quotient", "--n-states", "16", "--seed", "42",
                     "--out", str(out)]) == 0
    doc = cli.read_decomposition_json(str(out))
    assert doc["n_states"] == 16
    assert doc["params"]["seed"] == 42
    assert sum(c["basin"] for c in doc["cycles"]) == 16


def test_quotient_from_map_file_matches_seeded(tmp_path):
    m = random_map(64, 9)
    path = tmp_path / "m.omap"
    save_map(m, path)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    cli.main(["quotient", "--map", str(path), "--out", str(a)])
    cli.main(["quotient", "--n-states", "64", "--seed", "9", "--out", str(b)])
    da, db = json.loads(a.read_text()), json.loads(b.read_text())
    assert da["cycles"] == db["cycles"]
    assert da["checksum"] == db["checksum"]


def test_quotient_needs_a_source(capsys):
    assert cli.main(["quotient"]) == 1
    assert "provide either" in capsys.readouterr().err


def test_spectrum_csv(tmp_path):
    out = tmp_path / "spec.csv"
    assert cli.main(["spectrum", "--n-states", "32", "--seed", "7",
                     "--h", "2.0", "--out", str(out)]) == 0
    rows = cli.read_spectrum_csv(str(out))
    assert rows
    for cycle_id, period, k, phase, e, n, h_val, sector in rows:
        assert 0 <= k < period
        assert phase == pytest.approx(2 * math.pi * k / period)
        assert e == pytest.approx(2.0 / period)
        assert n == k
        sign = 1 if sector == "ket" else -1
        assert h_val == pytest.approx(sign * (n + 0.5) * e)


def test_pair_spectrum_csv(tmp_path):
    out = tmp_path / "pairs.csv"
    assert cli.main(["pair-spectrum", "--w1", "2/3", "--w2", "1/7",
                     "--n1-max", "2", "--n2-max", "1", "--out", str(out)]) == 0
    rows = cli.read_pair_spectrum_csv(str(out))
    assert len(rows) == 3 * 2
    for n1, n2, p, q, n, energy in rows:
        expect = (Fraction(2 * n1 + 1, 2) * Fraction(2, 3)
                  + Fraction(2 * n2 + 1, 2) * Fraction(1, 7))
        assert energy == expect
        assert (2 * n1 + 1) * q == (2 * n2 + 1) * p
    assert rows[0][:5] == (0, 0, 1, 1, 0)


# ---------------------------------------------------------------- plumbing


def test_usage_errors_exit_two():
    with pytest.raises(SystemExit) as err:
        cli.main([])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        cli.main(["census", "--n-states", "8"])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        cli.main(["no-such-command"])
    assert err.value.code == 2


def test_domain_errors_exit_one(capsys):
    assert cli.main(["census", "--n-states", "1", "--num-maps", "5"]) == 1
    assert "error:" in capsys.readouterr().err
    assert cli.main(["compose", "--p1", "0", "--p2", "1"]) == 1
    capsys.readouterr()
    assert cli.main(["quotient", "--map", "/no/such/file.omap"]) == 1
    assert "error:" in capsys.readouterr().err


def test_installed_entry_point():
    script = subprocess.run(["ontoq", "--help"], capture_output=True, text=True)
    assert script.returncode == 0
    assert "census" in script.stdout


def test_stdout_output(capsys):
    assert cli.main(["quotient", "--n-states", "4", "--seed", "42"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["n_states"] == 4
    # frozen map [1, 3, 2, 0]: one fixed point at 2, one 3-cycle (0 1 3)
    periods = sorted(c["period"] for c in doc["cycles"])
    assert periods == [1, 3]


def test_readers_reject_wrong_documents(tmp_path):
    j = tmp_path / "x.json"
    j.write_text(json.dumps({"foo": 1}))
    with pytest.raises(ValueError):
        cli.read_census_json(str(j))
    with pytest.raises(ValueError):
        cli.read_decomposition_json(str(j))
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(ValueError):
        cli.read_density_csv(str(empty))
