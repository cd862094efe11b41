import csv
import json

from diracl2.app import EXIT_CONFIG, EXIT_IO, EXIT_OK, attach_signed_values, build_parser, main
from diracl2.fields.grid import Grid
from diracl2.solver.ladder import SWEEP_COLUMNS
from diracl2.storage.field_writer import read_field_binary


def test_bad_invocations_exit_with_config_error(capsys):
    assert main(["verify", "--n", "99"]) == EXIT_CONFIG
    assert main(["frobnicate"]) == EXIT_CONFIG
    assert main(["solve", "--bogus"]) == EXIT_CONFIG
    assert main(["solve", "--n", "1", "--weight", "gaussian", "--grid", "9,9"]) == EXIT_CONFIG


def test_missing_config_file_exits_with_io_error(tmp_path):
    assert main(["verify", "--config", str(tmp_path / "absent.cfg")]) == EXIT_IO


def test_verify_report_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["verify", "--n", "2", "--trials", "10", "--seed", "3"]
    assert main(args + ["--output", str(a), "--workers", "1"]) == EXIT_OK
    assert main(args + ["--output", str(b), "--workers", "4"]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    report = json.loads(a.read_text())
    assert report["passed"]
    names = [s["identity"] for s in report["suites"]]
    assert "cross_term_cases" in names and "product_rule" in names


def test_solve_writes_report_and_snapshot(tmp_path):
    out, snap = tmp_path / "solve.json", tmp_path / "u.bin"
    code = main(["solve", "--n", "1", "--grid", "33,33", "--weight", "quadratic0", "--max-iter", "5000",
                 "--output", str(out), "--snapshot", str(snap)])
    assert code == EXIT_OK
    report = json.loads(out.read_text())
    assert report["passed"]
    assert report["report"]["converged"]
    assert report["report"]["bound_ratio_unscaled"] <= 1.0 + 1e-3
    assert report["report"]["slab"] is not None
    assert report["config"]["grid"] == [33, 33]
    assert read_field_binary(snap).grid == Grid.box(1, 33)


def test_sweep_writes_csv_and_sidecar(tmp_path):
    out = tmp_path / "sweep.csv"
    code = main(["sweep", "--n", "1", "--grid", "17,17", "--levels", "2", "--max-iter", "5000",
                 "--output", str(out)])
    assert code == EXIT_OK
    with out.open() as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == SWEEP_COLUMNS
    assert rows[0][2] == "defect_eq22"
    assert len(rows) == 3
    sidecar = json.loads(out.with_suffix(".json").read_text())
    assert sidecar["command"] == "sweep"


def test_kernel_command(tmp_path):
    out = tmp_path / "kernel.json"
    code = main(["kernel", "--n", "1", "--grid", "65,65", "--levels", "3", "--output", str(out)])
    report = json.loads(out.read_text())
    assert code == EXIT_OK
    assert len(report["annulus"]) == 3
    assert report["weak_defect"][-1]["passes"]


def test_stdout_report(capsys):
    assert main(["verify", "--n", "1", "--trials", "3"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["command"] == "verify"


def test_documented_solve_example_runs_with_space_separated_domain(tmp_path):
    out = tmp_path / "solve.json"
    code = main(["solve", "--n", "1", "--grid", "129,129", "--domain", "-1:1,-1:1", "--weight", "quadratic0",
                 "--rhs", "bump:e0", "--tol", "1e-10", "--output", str(out)])
    assert code == EXIT_OK
    report = json.loads(out.read_text())
    assert report["config"]["domain"] == [[-1.0, 1.0], [-1.0, 1.0]]
    assert report["report"]["converged"]
    assert report["report"]["bound_ratio"] <= 1.0


def test_negative_values_reach_their_flags():
    argv = ["solve", "--domain", "-2:1,-1:0.5", "--rhs-center", "-0.25,0", "--weight-params", "-1,0.5", "--n", "1"]
    assert attach_signed_values(argv) == ["solve", "--domain=-2:1,-1:0.5", "--rhs-center=-0.25,0",
                                          "--weight-params=-1,0.5", "--n", "1"]
    args = build_parser().parse_args(attach_signed_values(argv))
    assert args.domain == "-2:1,-1:0.5"
    assert args.rhs_center == "-0.25,0"
    assert args.weight_params == "-1,0.5"
    assert attach_signed_values(["solve", "--domain", "--n", "1"]) == ["solve", "--domain", "--n", "1"]


def test_sweep_is_identical_across_worker_counts(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["sweep", "--n", "1", "--grid", "17,17", "--levels", "2", "--max-iter", "5000"]
    assert main(args + ["--output", str(a), "--workers", "1"]) == EXIT_OK
    assert main(args + ["--output", str(b), "--workers", "2"]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    assert a.with_suffix(".json").read_bytes() == b.with_suffix(".json").read_bytes()
