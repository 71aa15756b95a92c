"""End-to-end CLI behavior: formats, determinism, exit codes."""
import csv
import io
import json
import types

import pytest

from qnmrecover.cli import _shooting_config, dispatch

GOLDEN_BARRIER = [
    (1.2126639443596177, -0.4431851239244186),
    (2.2120405033234856, -1.1134553402437046),
    (3.4242386738928774, -1.4810036608844754),
    (4.650082751270582, -1.722993027647042),
]

RECORD_KEYS = ["lambda", "Lambda", "l", "k", "sign", "m_hat", "residual",
               "condition", "holder_N", "class"]


def run(capsys, *argv):
    code = dispatch(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_barrier_resonances_csv(capsys):
    code, out, err = run(capsys, "barrier", "resonances", "--L", "1.3")
    assert code == 0 and err == ""
    rows = rows_of(out)
    assert out.startswith("re,im,residual,multiplicity\n")
    assert len(rows) == 4
    for row, (re, im) in zip(rows, GOLDEN_BARRIER):
        assert abs(float(row["re"]) - re) < 1e-9
        assert abs(float(row["im"]) - im) < 1e-9
        assert float(row["residual"]) <= 1e-9
        assert row["multiplicity"] == "1"


def test_barrier_resonances_json(capsys):
    code, out, _ = run(capsys, "barrier", "resonances", "--L", "1.3",
                       "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert len(data) == 4
    assert abs(data[0]["lambda"]["re"] - GOLDEN_BARRIER[0][0]) < 1e-9
    assert data[0]["multiplicity"] == 1


def test_barrier_empty_window_still_has_header(capsys):
    code, out, _ = run(capsys, "barrier", "resonances", "--L", "1.3",
                       "--window", "10,11,-0.5,-0.01")
    assert code == 0
    assert out == "re,im,residual,multiplicity\n"


def test_barrier_recover(capsys):
    re, im = GOLDEN_BARRIER[1]
    code, out, _ = run(capsys, "barrier", "recover",
                       "--sigma", f"{re},{im}")
    assert code == 0
    assert abs(json.loads(out)["L"] - 1.3) < 1e-8


def test_byte_identical_reruns(capsys):
    _, first, _ = run(capsys, "barrier", "resonances", "--L", "1.3")
    _, second, _ = run(capsys, "barrier", "resonances", "--L", "1.3")
    assert first == second


def test_thread_env_does_not_change_output(capsys, monkeypatch):
    _, base, _ = run(capsys, "barrier", "resonances", "--L", "0.9")
    monkeypatch.setenv("QNM_THREADS", "4")
    _, threaded, _ = run(capsys, "barrier", "resonances", "--L", "0.9")
    assert base == threaded


def test_output_flag_writes_file(capsys, tmp_path):
    target = tmp_path / "out.csv"
    code, out, _ = run(capsys, "barrier", "resonances", "--L", "1.3",
                       "--output", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("re,im,residual,multiplicity\n")


def test_sds_horizons(capsys):
    code, out, _ = run(capsys, "sds", "horizons", "--m", "1", "--Lambda",
                       "0.04")
    assert code == 0
    got = {r["quantity"]: float(r["value"]) for r in rows_of(out)}
    assert abs(got["r_bH"] - 2.1285927458325955) < 1e-10
    assert abs(got["r_sI"] - 7.39748947238797) < 1e-10
    assert abs(got["r_0"] + 9.526082218220564) < 1e-10
    assert abs(got["beta_bH"] - 0.1923251214913109) < 1e-12
    assert abs(got["beta_sI"] + 0.08035929109472884) < 1e-12
    assert abs(got["lattice_scale"] - 0.1539600717839002) < 1e-12


def test_sds_lattice_default_grid(capsys):
    code, out, _ = run(capsys, "sds", "lattice", "--m", "1", "--Lambda",
                       "0.04")
    assert code == 0
    rows = rows_of(out)
    assert len(rows) == 36            # (5+1) l values x (2+1) k values x 2
    c = 0.1539600717839002
    first = rows[0]
    assert (first["l"], first["k"], first["sign"]) == ("0", "0", "1")
    assert abs(float(first["re"]) - 0.5 * c) < 1e-12
    assert abs(float(first["im"]) + 0.25 * c) < 1e-12
    assert all(float(r["im"]) < 0 for r in rows)


def test_sds_qnm_scan(capsys):
    code, out, _ = run(capsys, "sds", "qnm", "--m", "1", "--Lambda", "0.04",
                       "--l", "10", "--window", "1.55,1.68,-0.1,-0.05")
    assert code == 0
    rows = rows_of(out)
    assert len(rows) == 1
    assert abs(float(rows[0]["re"]) - 1.615480104962) < 1e-6
    assert abs(float(rows[0]["im"]) + 0.077052146226) < 1e-6
    assert float(rows[0]["residual"]) <= 1e-8


def test_recover_lattice_record(capsys):
    code, out, _ = run(capsys, "sds", "recover-lattice",
                       "--lambda", "0.23094010768,-0.038490017946",
                       "--Lambda", "0.04", "--l", "1", "--k", "0",
                       "--sign", "+")
    assert code == 0
    record = json.loads(out)
    assert list(record) == RECORD_KEYS
    assert abs(record["m_hat"] - 1.0) < 1e-9
    assert record["class"] == "usable"
    assert record["l"] == 1 and record["k"] == 0 and record["sign"] == 1
    assert record["holder_N"] == 1.0
    assert record["residual"] < 1e-9


def test_recover_numeric_record(capsys):
    code, out, _ = run(capsys, "sds", "recover-numeric",
                       "--lambda", "1.615480104962,-0.077052146226",
                       "--Lambda", "0.04", "--l", "10", "--m-init", "0.95")
    assert code == 0
    record = json.loads(out)
    assert list(record) == RECORD_KEYS
    assert abs(record["m_hat"] - 1.0) < 1e-6
    assert record["k"] == 0           # re-inferred damping index
    assert record["sign"] == 1
    assert record["class"] == "usable"
    assert record["residual"] <= 1e-8


def test_stability_record(capsys):
    code, out, _ = run(capsys, "sds", "stability", "--m-hat", "1.0",
                       "--Lambda", "0.04", "--l", "1", "--k", "0")
    assert code == 0
    record = json.loads(out)
    assert record["mode"] == "lattice"
    assert abs(record["condition"] - 2.7335) < 1e-3
    assert abs(record["holder_N"] - 1.0) < 0.05


def test_map_lattice_only(capsys):
    code, out, _ = run(capsys, "map", "--m", "1", "--Lambda", "0.04")
    assert code == 0
    rows = rows_of(out)
    assert len(rows) == 36
    assert {r["source"] for r in rows} == {"lattice"}
    assert {r["confidence"] for r in rows} == {"model"}


def test_map_shooting_rows_match_lattice(capsys):
    code, out, _ = run(capsys, "map", "--m", "1", "--Lambda", "0.04",
                       "--source", "both", "--l", "10",
                       "--l-max", "10", "--k-max", "0",
                       "--window", "1.55,1.68,-0.095,-0.02")
    assert code == 0
    rows = rows_of(out)
    shooting = [r for r in rows if r["source"] == "shooting"]
    lattice = [r for r in rows if r["source"] == "lattice"]
    assert len(shooting) == 1
    srow = shooting[0]
    assert srow["confidence"] == "high" and srow["k"] == "0"
    mates = [r for r in lattice if r["l"] == "10" and r["k"] == "0"]
    assert len(mates) == 1
    z = complex(float(srow["re"]), float(srow["im"]))
    mu = complex(float(mates[0]["re"]), float(mates[0]["im"]))
    assert abs(z - mu) / abs(mu) < 0.05


def test_map_shooting_without_window_is_invalid(capsys):
    code, _, err = run(capsys, "map", "--m", "1", "--Lambda", "0.04",
                       "--source", "shooting", "--l", "4")
    assert code == 2
    assert err.startswith("InvalidInput:")


def test_usage_errors_exit_1(capsys):
    assert run(capsys, "barrier", "resonances")[0] == 1          # missing --L
    assert run(capsys, "sds", "qnm", "--m", "1")[0] == 1
    assert run(capsys, "nonsense")[0] == 1
    assert run(capsys, "barrier", "recover", "--sigma", "1+2j")[0] == 1
    assert run(capsys, "sds", "qnm", "--m", "1", "--Lambda", "0.04",
               "--l", "2", "--window", "1,2,-0.1,-0.01",
               "--xmax-tol", "tiny")[0] == 1


def test_domain_errors_exit_2(capsys):
    code, _, err = run(capsys, "sds", "recover-lattice",
                       "--lambda", "0.23094010768,-0.038490017946",
                       "--Lambda", "0.04", "--l", "2", "--k", "1")
    assert code == 2
    assert err.startswith("InconsistentIndices:")
    assert "Remedy:" in err

    code, _, err = run(capsys, "sds", "recover-lattice",
                       "--lambda", "0,-0.5", "--Lambda", "0.04",
                       "--l", "1", "--k", "0")
    assert code == 2
    assert err.startswith("ExcludedResonance:")

    code, _, err = run(capsys, "sds", "horizons", "--m", "1",
                       "--Lambda", "-0.04")
    assert code == 2
    assert err.startswith("InadmissibleParams:")

    code, _, err = run(capsys, "barrier", "resonances", "--L", "-2")
    assert code == 2
    assert err.startswith("InvalidInput:")


def test_shooting_flag_mapping():
    args = types.SimpleNamespace(xmax_tol=1e-5, rtol=1e-9,
                                 match_point=0.5, damping_cap=0.3)
    cfg = _shooting_config(args)
    assert cfg.xmax_tol == 1e-5
    assert cfg.rtol == 1e-9 and cfg.atol == pytest.approx(1e-11)
    assert cfg.match_point == 0.5
    assert cfg.damping_cap == 0.3
    defaults = _shooting_config(types.SimpleNamespace())
    assert defaults.xmax_tol == 1e-6 and defaults.rtol == 1e-10
