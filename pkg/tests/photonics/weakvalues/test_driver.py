import csv
import json
import logging
import sys

import pytest
from photonics.weakvalues import driver
from photonics.weakvalues.config import ExitCode
from photonics.weakvalues.counting.fig2 import CSV_HEADER
from photonics.weakvalues.counting.fig2 import Fig2Table
from photonics.weakvalues.device.equivalence import GateVerificationReport
from photonics.weakvalues.runtimeconstants import WeakValuesRuntimeConstants
from photonics.weakvalues.utils.errors import InfeasibleTargetError


def _run_driver_with_args(monkeypatch, args) -> int:
    monkeypatch.setattr(driver, "configure_logging", lambda *args, **kwargs: None)
    monkeypatch.setattr(driver, "parse_log_level", lambda *_: logging.INFO)
    monkeypatch.setattr(driver, "get_human_readable_elapsed_since", lambda *_: "0s")
    monkeypatch.setattr(WeakValuesRuntimeConstants, "disable_progress", True)

    monkeypatch.setattr(sys, "argv", ["weak-values", *args])
    with pytest.raises(SystemExit) as excinfo:
        driver.run()
    return excinfo.value.code


def test_weak_value_prints_expected_value(monkeypatch, capsys):
    status = _run_driver_with_args(monkeypatch, ["weak-value", "--angle", "42", "--K", "0.006"])

    assert status == ExitCode.OK
    assert capsys.readouterr().out.strip() == "19.02"


def test_weak_value_with_imperfect_device(monkeypatch, capsys):
    status = _run_driver_with_args(monkeypatch, ["weak-value", "--visibility", "0.98", "--K", "1"])

    assert status == ExitCode.OK
    assert 0.09 < float(capsys.readouterr().out.strip()) < 0.1045


def test_povm_at_full_strength(monkeypatch, capsys):
    status = _run_driver_with_args(monkeypatch, ["povm", "--K", "1"])

    output = capsys.readouterr().out
    assert status == ExitCode.OK
    assert "Pi_H = diag(1, 0)" in output
    assert "Pi_V = diag(0, 1)" in output


def test_gate_verify(monkeypatch, capsys):
    status = _run_driver_with_args(monkeypatch, ["gate-verify", "--n-states", "3"])

    assert status == ExitCode.OK
    assert "max infidelity" in capsys.readouterr().out


def test_gate_verify_failure(monkeypatch):
    def _failing_report(**kwargs):
        return GateVerificationReport(
            (1.0,), 1, max_infidelity=1e-3, max_success_deviation=0.0, success_spread=0.0, tolerance=1e-10
        )

    monkeypatch.setattr(driver, "verify_gate", _failing_report)
    assert _run_driver_with_args(monkeypatch, ["gate-verify"]) == ExitCode.GATE_VERIFICATION_FAILED


def test_fig2_writes_csv_and_metadata(monkeypatch, tmp_path):
    output = tmp_path / "fig2.csv"
    args = ["fig2", "--k-grid", "0.006,0.125,0.5,1", "--seed", "7", "--output", str(output)]

    assert _run_driver_with_args(monkeypatch, args) == ExitCode.OK
    first_csv = output.read_bytes()
    first_json = (tmp_path / "fig2.json").read_bytes()

    assert _run_driver_with_args(monkeypatch, args) == ExitCode.OK
    assert output.read_bytes() == first_csv
    assert (tmp_path / "fig2.json").read_bytes() == first_json

    rows = list(csv.reader(output.read_text().splitlines()))
    assert rows[0] == list(CSV_HEADER)
    assert len(rows) == 5
    assert json.loads(first_json)["seed"] == 7


def test_fig2_defaults_to_output_dir(monkeypatch, tmp_path):
    monkeypatch.setattr(WeakValuesRuntimeConstants, "output_dir", str(tmp_path))

    assert _run_driver_with_args(monkeypatch, ["fig2", "--K", "0.5"]) == ExitCode.OK
    assert (tmp_path / "fig2.csv").exists()
    assert (tmp_path / "fig2.json").exists()


def test_tomo_writes_chi(monkeypatch, tmp_path):
    output = tmp_path / "chi.csv"

    status = _run_driver_with_args(monkeypatch, ["tomo", "--K", "1", "--output", str(output)])

    assert status == ExitCode.OK
    assert len(output.read_text().splitlines()) == 17
    metadata = json.loads((tmp_path / "chi.json").read_text())
    assert metadata["rank"] == 1
    assert metadata["trace"] == pytest.approx(1 / 9, abs=1e-9)


def test_undefined_weak_value(monkeypatch):
    assert _run_driver_with_args(monkeypatch, ["weak-value", "--K", "0"]) == ExitCode.UNDEFINED_QUANTITY


def test_conflicting_values(monkeypatch):
    args = ["fig2", "--K", "0.1", "--k-grid", "0.1,0.2"]
    assert _run_driver_with_args(monkeypatch, args) == ExitCode.CONFLICTING_VALUES


def test_usage_error(monkeypatch):
    assert _run_driver_with_args(monkeypatch, ["nonexistent"]) == ExitCode.USAGE


def test_library_error(monkeypatch, tmp_path):
    def _raise(*args, **kwargs):
        raise InfeasibleTargetError("no feasible visibility")

    monkeypatch.setattr(driver, "run_fig2", _raise)
    status = _run_driver_with_args(monkeypatch, ["fig2", "--output", str(tmp_path / "fig2.csv")])

    assert status == ExitCode.LIBRARY_ERROR
    assert list(tmp_path.iterdir()) == []


def test_invalid_argument_maps_to_usage(monkeypatch, tmp_path):
    def _raise(*args, **kwargs):
        raise ValueError("could not convert string to float")

    monkeypatch.setattr(driver, "run_fig2", _raise)
    status = _run_driver_with_args(monkeypatch, ["fig2", "--output", str(tmp_path / "fig2.csv")])

    assert status == ExitCode.USAGE
    assert list(tmp_path.iterdir()) == []


def test_partial_outputs_removed_on_write_failure(monkeypatch, tmp_path):
    def _raise(self, path):
        raise OSError("disk full")

    monkeypatch.setattr(Fig2Table, "to_metadata_json", _raise)
    status = _run_driver_with_args(monkeypatch, ["fig2", "--K", "0.5", "--output", str(tmp_path / "fig2.csv")])

    assert status == ExitCode.OUTPUT_ERROR
    assert list(tmp_path.iterdir()) == []
