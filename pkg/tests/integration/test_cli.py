"""End-to-end runs of the htmobility command line."""

from pathlib import Path

import pytest
import yaml

from src.main import main
from src.report import CohortReport, ComparisonDocument, ReportWriter, without_timestamp
from src.synth import CohortSpec


def write_spec(path: Path, spec: CohortSpec) -> Path:
    path.write_text(yaml.safe_dump(spec.model_dump(mode="json"), sort_keys=False))
    return path


def error_lines(err: str, code: str) -> list[str]:
    return [line for line in err.splitlines() if line.startswith(f"{code}:")]


@pytest.fixture
def cdr_dataset(tmp_path: Path, crisp_spec: CohortSpec) -> Path:
    spec = write_spec(tmp_path / "spec.yaml", crisp_spec.model_copy(update={"user_count": 25, "window_days": 60}))
    assert main(["synth", "--spec", str(spec), "--out-dir", str(tmp_path / "data")]) == 0
    return tmp_path / "data" / "events.csv"


def test_synth_analyze_compare_report(cdr_dataset: Path, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    out = tmp_path / "out"
    assert main(["analyze", "-i", str(cdr_dataset), "--out-dir", str(out)]) == 0
    printed = capsys.readouterr().out.splitlines()
    assert printed[0] == str(out / "report.yaml")

    report = ReportWriter().load(out / "report.yaml")
    assert isinstance(report, CohortReport)
    assert [(row.group, row.users) for row in report.groups] == [(3, 25)]
    assert report.dataset.users_after == 25
    assert report.dataset.days == 60
    assert report.comparison is not None and report.comparison.kmeans_coverage == 1.0
    assert ReportWriter.missing_curves(report, out) == []
    assert set(report.curves) >= {"rr_all", "rr_group3_class1", "poi_count_group3_class3"}

    assert main(["compare", "-i", str(cdr_dataset), "--out-dir", str(out), "--k", "3"]) == 0
    comparison = ReportWriter().load(out / "comparison.yaml")
    assert isinstance(comparison, ComparisonDocument)
    assert comparison.comparison.agreement is not None and comparison.comparison.agreement > 0.9

    again = tmp_path / "again"
    assert main(["report", "--report", str(out / "report.yaml"), "--out-dir", str(again)]) == 0
    for ref in report.curves.values():
        assert (again / ref.file).read_text() == (out / ref.file).read_text()


def test_analyze_is_deterministic(cdr_dataset: Path, tmp_path: Path) -> None:
    out = tmp_path / "out"
    args = ["analyze", "-i", str(cdr_dataset), "--out-dir", str(out), "--seed", "4"]

    assert main(args) == 0
    first = ReportWriter().load(out / "report.yaml")
    assert main(args) == 0
    second = ReportWriter().load(out / "report.yaml")

    assert without_timestamp(first) == without_timestamp(second)


def test_analyze_scores_synth_truth(cdr_dataset: Path, tmp_path: Path) -> None:
    truth = cdr_dataset.parent / "truth.csv"
    out = tmp_path / "out"
    args = ["analyze", "-i", str(cdr_dataset), "--truth", str(truth), "--out-dir", str(out), "--no-comparison"]
    assert main(args) == 0

    report = ReportWriter().load(out / "report.yaml")
    assert isinstance(report, CohortReport)
    assert report.recovery is not None
    assert report.recovery.users == 25
    assert report.recovery.ht_recovery == 1.0
    assert report.recovery.label_accuracy == 1.0
    assert report.config["truth"] == str(truth)


def test_analyze_without_truth_has_no_recovery(cdr_dataset: Path, tmp_path: Path) -> None:
    out = tmp_path / "out"
    assert main(["analyze", "-i", str(cdr_dataset), "--out-dir", str(out), "--no-comparison"]) == 0
    report = ReportWriter().load(out / "report.yaml")
    assert isinstance(report, CohortReport)
    assert report.recovery is None


def test_broken_truth_exit_3(cdr_dataset: Path, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    truth = tmp_path / "truth.csv"
    truth.write_text("user_id,place_id,tier\nu0000,p1,HOME\n")
    assert main(["analyze", "-i", str(cdr_dataset), "--truth", str(truth), "--out-dir", str(tmp_path / "out")]) == 3
    (line,) = error_lines(capsys.readouterr().err, "format_error")
    assert "unknown tier(s) HOME" in line


def test_workers_do_not_change_results(cdr_dataset: Path, tmp_path: Path) -> None:
    serial, parallel = tmp_path / "serial", tmp_path / "parallel"
    assert main(["analyze", "-i", str(cdr_dataset), "--out-dir", str(serial)]) == 0
    assert main(["analyze", "-i", str(cdr_dataset), "--out-dir", str(parallel), "--workers", "2"]) == 0

    one = ReportWriter().load(serial / "report.yaml")
    two = ReportWriter().load(parallel / "report.yaml")
    assert isinstance(one, CohortReport) and isinstance(two, CohortReport)
    assert one.groups == two.groups
    assert one.composition == two.composition
    assert one.comparison == two.comparison
    assert one.curves == two.curves


def test_config_file_and_reloaded_report(cdr_dataset: Path, tmp_path: Path) -> None:
    config = tmp_path / "run.yaml"
    config.write_text(f"inputs: [{cdr_dataset}]\nout_dir: {tmp_path / 'a'}\ncomparison: false\nhead_limit: 0.35\n")
    assert main(["analyze", "--config", str(config)]) == 0
    report = ReportWriter().load(tmp_path / "a" / "report.yaml")
    assert isinstance(report, CohortReport)
    assert report.comparison is None
    assert report.config["head_limit"] == 0.35

    # a saved report reproduces its run configuration
    assert main(["analyze", "--config", str(tmp_path / "a" / "report.yaml"), "--out-dir", str(tmp_path / "b")]) == 0
    rerun = ReportWriter().load(tmp_path / "b" / "report.yaml")
    assert isinstance(rerun, CohortReport)
    assert rerun.groups == report.groups
    assert rerun.config["head_limit"] == 0.35


def test_version(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["--version"]) == 0
    assert capsys.readouterr().out.startswith("htmobility ")


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", "--bogus"],
        ["analyze"],
        ["analyze", "-i", "x.csv", "--head-limit", "1.5"],
        ["analyze", "-i", "x.csv", "--timezone", "Nowhere/Land"],
        ["synth", "--workers", "0"],
        [],
    ],
)
def test_config_errors_exit_2(argv: list[str], capsys: pytest.CaptureFixture[str]) -> None:
    assert main(argv) == 2
    assert error_lines(capsys.readouterr().err, "config_error")


def test_missing_input_exit_3(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["analyze", "-i", str(tmp_path / "absent.csv"), "--out-dir", str(tmp_path)]) == 3
    assert error_lines(capsys.readouterr().err, "io_error")


def test_wifi_file_read_as_cdr_exit_3(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    wifi = tmp_path / "wifi.csv"
    wifi.write_text("user_id,ap_id,timestamp,kind\nd1,ap1,2024-03-04T10:00:00Z,assoc\n")

    assert main(["analyze", "-i", str(wifi), "--kind", "cdr", "--out-dir", str(tmp_path)]) == 3
    (line,) = error_lines(capsys.readouterr().err, "format_error")
    assert "lacks required column(s) place_id,channel" in line


def test_broken_report_exit_3(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    broken = tmp_path / "report.yaml"
    broken.write_text("schema_version: '0.9'\n")
    assert main(["report", "--report", str(broken), "--out-dir", str(tmp_path)]) == 3
    assert error_lines(capsys.readouterr().err, "format_error")


def test_nobody_active_exit_4(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    events = tmp_path / "events.csv"
    events.write_text(
        "user_id,timestamp,place_id,channel\n"
        "u1,2024-03-04T10:00:00Z,a,call\n"
        "u2,2024-03-06T10:00:00Z,a,sms\n"
    )
    assert main(["analyze", "-i", str(events), "--out-dir", str(tmp_path)]) == 4
    assert error_lines(capsys.readouterr().err, "contract_violation")


def test_header_only_file_exit_4(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    events = tmp_path / "events.csv"
    events.write_text("user_id,timestamp,place_id,channel\n")
    assert main(["analyze", "-i", str(events), "--out-dir", str(tmp_path)]) == 4
    assert error_lines(capsys.readouterr().err, "contract_violation")
