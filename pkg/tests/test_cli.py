import csv
import io
import json
import subprocess
import sys

import pytest

from qclone.cli import main, parse_range


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    return json.loads(out)


def test_parse_range():
    assert parse_range("4") == [4]
    assert parse_range("3..6") == [3, 4, 5, 6]
    assert parse_range("8,16,32") == [8, 16, 32]


def test_fidelity_single(capsys):
    rep = run_json(capsys, "fidelity", "--n", "1", "--m", "2")
    (row,) = rep["rows"]
    assert row["F_exact"] == "5/6"
    assert row["F_float"] == 5 / 6
    assert abs(row["F_numeric"] - 5 / 6) < 1e-12


def test_fidelity_sweep(capsys):
    rep = run_json(capsys, "fidelity", "--n", "2", "--m", "3..6", "--trials", "50")
    values = [r["F_float"] for r in rep["rows"]]
    assert len(values) == 4
    assert all(a > b for a, b in zip(values, values[1:]))


def test_fidelity_large_m(capsys):
    rep = run_json(capsys, "fidelity", "--n", "1", "--m", "1000000", "--trials", "0")
    (row,) = rep["rows"]
    assert abs(row["F_float"] - 2 / 3) < 1e-6
    assert row["F_mc"] is None and row["F_numeric"] is None


def test_invalid_range_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["fidelity", "--m", "6..3"])
    assert exc.value.code != 0
    code, _, err = run(capsys, "fidelity", "--n", "5", "--m", "2")
    assert code == 2 and "usage error" in err


def test_ccm_table(capsys):
    rep = run_json(capsys, "ccm", "--m", "2,8,16,32,64,128", "--strict")
    row2 = rep["rows"][0]
    assert row2["m"] == 2 and row2["distance_exact"] == "1/18"
    assert abs(row2["distance_matrix"] - 1 / 18) < 1e-12
    assert -3.4 <= rep["summary"]["fitted_slope"] <= -2.6
    assert rep["summary"]["fit_excluded"] == [2]


def test_ccm_mc_column(capsys):
    rep = run_json(capsys, "ccm", "--m", "2..4", "--mc", "--trials", "20000", "--seed", "3")
    for row in rep["rows"]:
        assert row["distance_mc"] == pytest.approx(row["distance"], abs=5e-3)


def test_ccm_byte_identical(tmp_path):
    outs = []
    for name in ("a.json", "b.json"):
        path = tmp_path / name
        assert main(["ccm", "--m", "2..5", "--mc", "--trials", "2000", "--seed", "9",
                     "--out-file", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_bound(capsys):
    rep = run_json(capsys, "bound", "--n", "1", "--m", "2")
    (row,) = rep["rows"]
    assert row["lambda_max"] == pytest.approx(5 / 12, abs=1e-12)
    assert row["bound"] == pytest.approx(5 / 6, abs=1e-12)
    assert abs(row["gap"]) < 1e-12
    assert rep["metadata"]["quadrature"]["theta_nodes"] == 64


def test_bound_sweep_strict(capsys):
    rep = run_json(capsys, "bound", "--n", "1..7", "--m", "2..12", "--strict")
    assert len(rep["rows"]) == sum(12 - n for n in range(1, 8))
    assert all(abs(r["gap"]) < 1e-10 for r in rep["rows"])


def test_bound_perturb_is_validation_error(capsys):
    code, out, err = run(capsys, "bound", "--n", "1", "--m", "3", "--perturb", "1e-3")
    assert code == 3 and out == "" and "not Hermitian" in err


def test_clone_north_pole(capsys):
    rep = run_json(capsys, "clone", "--theta", "0", "--n", "1", "--m", "2")
    (row,) = rep["rows"]
    assert row["bloch_vector"] == pytest.approx([0, 0, 2 / 3], abs=1e-12)
    assert row["alpha_squared"] == ["2/3", "1/3"]


def test_clone_matches_fidelity_command(capsys):
    clone_rep = run_json(capsys, "clone", "--theta", "1.234", "--phi", "5.1", "--n", "2", "--m", "5")
    fid_rep = run_json(capsys, "fidelity", "--n", "2", "--m", "5", "--trials", "0")
    assert clone_rep["rows"][0]["fidelity"] == pytest.approx(fid_rep["rows"][0]["F_float"], abs=1e-12)


def test_clone_error_distribution_sums(capsys):
    rep = run_json(capsys, "clone", "--theta", "0.5", "--n", "1", "--m", "12")
    assert sum(rep["rows"][0]["error_distribution"]) == pytest.approx(1, abs=1e-14)


def test_clone_rejects_csv(capsys):
    code, _, _ = run(capsys, "clone", "--theta", "0", "--m", "2", "--out", "csv")
    assert code == 2


def test_json_and_csv_agree(capsys):
    args = ["fidelity", "--n", "1..2", "--m", "3..5", "--trials", "30", "--seed", "4"]
    rep = run_json(capsys, *args)
    code, out, _ = run(capsys, *args, "--out", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == len(rep["rows"])
    for js, cs in zip(rep["rows"], rows):
        for key, value in js.items():
            if value is None:
                assert cs[key] == ""
            elif isinstance(value, float):
                assert float(cs[key]) == value  # bit-exact
            else:
                assert cs[key] == str(value)


def test_json_roundtrip_is_lossless(capsys):
    from qclone.report import to_json
    from qclone.cli import build_parser, cmd_fidelity

    args = build_parser().parse_args(["fidelity", "--n", "1", "--m", "2..4", "--trials", "10"])
    report = cmd_fidelity(args)
    back = json.loads(to_json(report))
    for orig, row in zip(report.rows, back["rows"]):
        for key, value in orig.items():
            assert row[key] == value


def test_strict_turns_acceptance_into_exit_code(capsys):
    # a fit window with fewer than three points produces no slope check; force one that fails
    code, _, err = run(capsys, "ccm", "--m", "2,3,4", "--fit-min", "2", "--strict")
    assert code == 1 and "slope_in_range" in err
    code, _, _ = run(capsys, "ccm", "--m", "2,3,4", "--fit-min", "2")
    assert code == 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qclone", "fidelity", "--m", "3", "--trials", "0"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["rows"][0]["F_exact"] == "7/9"
