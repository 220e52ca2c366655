"""Tests for command routing."""

from pathlib import Path

import pytest
from pytest_mock import MockerFixture

from src.config.settings import RunConfig
from src.errors import ConfigError, FormatError
from src.handlers import Command, CommandHandler
from src.logger.types import Level
from src.report import ReportWriter
from tests.conftest import MemoryWriter
from tests.unit.test_report import cohort_report


def test_known_commands() -> None:
    assert CommandHandler().commands == ["analyze", "synth", "compare", "report"]


def test_unknown_command() -> None:
    with pytest.raises(ConfigError, match="unknown command"):
        CommandHandler().handle(Command("plot"))


def test_analyze_needs_config() -> None:
    with pytest.raises(ConfigError, match="needs a run configuration"):
        CommandHandler().handle(Command("analyze"))


def test_analyze_runs_pipeline(mocker: MockerFixture, tmp_path: Path) -> None:
    pipeline = mocker.Mock()
    pipeline.run.return_value = cohort_report()
    factory = mocker.Mock(return_value=pipeline)
    config = RunConfig(inputs=[tmp_path / "events.csv"], out_dir=tmp_path)

    result = CommandHandler(pipeline_factory=factory).handle(Command("analyze", config=config))

    factory.assert_called_once_with(config)
    assert result.outputs == [tmp_path / "report.yaml", tmp_path / "curves/rr_all.csv"]
    assert result.summary == {"users": 2, "groups": {2: 1, 3: 1}}


def test_compare_runs_pipeline(mocker: MockerFixture, tmp_path: Path) -> None:
    pipeline = mocker.Mock()
    pipeline.run_comparison.return_value.comparison = cohort_report().comparison
    config = RunConfig(out_dir=tmp_path)

    result = CommandHandler(pipeline_factory=mocker.Mock(return_value=pipeline)).handle(
        Command("compare", config=config)
    )

    assert result.outputs == [tmp_path / "comparison.yaml"]
    assert result.summary["agreement"] == 0.75


def test_failures_are_logged_and_reraised(mocker: MockerFixture, log_writer: MemoryWriter) -> None:
    pipeline = mocker.Mock()
    pipeline.run.side_effect = FormatError("events.csv: header lacks required column(s) channel")

    with pytest.raises(FormatError):
        CommandHandler(pipeline_factory=mocker.Mock(return_value=pipeline)).handle(
            Command("analyze", config=RunConfig())
        )
    assert "Command failed: analyze" in log_writer.messages(Level.ERROR)


def test_synth_writes_dataset(tmp_path: Path) -> None:
    spec = tmp_path / "spec.yaml"
    spec.write_text("user_count: 3\nwindow_days: 5\nplace_pool: 100\n")

    result = CommandHandler().handle(Command("synth", out_dir=tmp_path / "out", spec_file=spec, seed=2))

    assert [p.name for p in result.outputs] == ["events.csv", "truth.csv", "cohort.yaml"]
    assert all(p.is_file() for p in result.outputs)
    assert result.summary["seed"] == 2
    assert result.summary["groups"] == {3: 3}
    assert (tmp_path / "out" / "truth.csv").read_text().startswith("user_id,place_id,tier\n")


def test_synth_wifi(tmp_path: Path) -> None:
    spec = tmp_path / "spec.yaml"
    spec.write_text("mode: wifi\nuser_count: 2\nwindow_days: 3\nplace_pool: 100\n")

    result = CommandHandler().handle(Command("synth", out_dir=tmp_path, spec_file=spec))

    assert result.outputs[0].name == "wifi.csv"
    assert result.outputs[0].read_text().startswith("user_id,ap_id,timestamp,kind\n")


def test_report_rerenders_curves(tmp_path: Path, log_writer: MemoryWriter) -> None:
    saved = ReportWriter().write(cohort_report(), tmp_path / "run" / "report.yaml")

    result = CommandHandler().handle(Command("report", out_dir=tmp_path / "again", report_file=saved))

    assert result.outputs == [tmp_path / "again" / "curves" / "rr_all.csv"]
    assert result.outputs[0].read_text().splitlines() == ["x,p", "1e-05,0.75", "0.25,0.5", "1.0,0.0"]
    assert "Report references missing curve files" in log_writer.messages(Level.WARN)


def test_report_needs_file() -> None:
    with pytest.raises(ConfigError):
        CommandHandler().handle(Command("report"))
