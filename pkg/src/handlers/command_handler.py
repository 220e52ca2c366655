"""Command handlers behind the CLI subcommands."""

from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from src.config.settings import RunConfig
from src.errors import ConfigError, MobilityError
from src.logger.logger import get_logger
from src.logger.types import Category, param
from src.pipeline.processor import COMPARISON_FILE, REPORT_FILE, AnalysisPipeline
from src.report.schema import CohortReport
from src.report.writer import ReportWriter
from src.repository.dataset_repository import DatasetRepository
from src.synth import generate_cohort, load_cohort_spec, truth_histogram

COHORT_FILE = "cohort.yaml"
TRUTH_FILE = "truth.csv"


@dataclass(frozen=True)
class Command:
    """A parsed CLI invocation."""

    name: str
    config: RunConfig | None = None
    out_dir: Path = Path("out")
    spec_file: Path | None = None
    report_file: Path | None = None
    seed: int | None = None
    workers: int = 1


@dataclass
class CommandResult:
    """Files a command wrote plus a few headline numbers for stdout."""

    command: str
    outputs: list[Path] = field(default_factory=list)
    summary: dict[str, Any] = field(default_factory=dict)


class CommandHandler:
    """
    Routes CLI commands to their implementations.

    Commands: analyze, synth, compare, report.
    """

    def __init__(
        self,
        pipeline_factory: Callable[[RunConfig], AnalysisPipeline] = AnalysisPipeline,
        writer: ReportWriter | None = None,
    ) -> None:
        """
        Initialize CommandHandler.

        Args:
            pipeline_factory: Builds the analysis pipeline for a config
            writer: Report serialiser used by `report`
        """
        self.pipeline_factory = pipeline_factory
        self.writer = writer or ReportWriter()
        self.logger = get_logger().with_category(Category.CLI)

        # Маппинг command -> handler method
        self._handlers: dict[str, Callable[[Command], CommandResult]] = {
            "analyze": self.cmd_analyze,
            "synth": self.cmd_synth,
            "compare": self.cmd_compare,
            "report": self.cmd_report,
        }

    @property
    def commands(self) -> list[str]:
        return list(self._handlers)

    def handle(self, command: Command) -> CommandResult:
        """
        Run a command.

        Raises:
            ConfigError: Unknown command or missing arguments
            MobilityError: Whatever the command raised
        """
        handler = self._handlers.get(command.name)
        if handler is None:
            raise ConfigError(f"unknown command '{command.name}'")

        self.logger.info(f"Running command: {command.name}", param("command", command.name))
        try:
            result = handler(command)
        except MobilityError as e:
            self.logger.error(
                f"Command failed: {command.name}", e, param("command", command.name), param("code", e.code)
            )
            raise
        self.logger.info(
            f"Command finished: {command.name}",
            param("command", command.name),
            param("outputs", [str(p) for p in result.outputs]),
        )
        return result

    @staticmethod
    def _config(command: Command) -> RunConfig:
        if command.config is None:
            raise ConfigError(f"'{command.name}' needs a run configuration")
        return command.config

    def cmd_analyze(self, command: Command) -> CommandResult:
        """Full pipeline: report.yaml plus curves/*.csv in out_dir."""
        config = self._config(command)
        report = self.pipeline_factory(config).run()
        outputs = [config.out_dir / REPORT_FILE] + [config.out_dir / ref.file for ref in report.curves.values()]
        return CommandResult(
            "analyze",
            outputs,
            {
                "users": report.dataset.users_after,
                "groups": {row.group: row.users for row in report.groups},
            },
        )

    def cmd_compare(self, command: Command) -> CommandResult:
        """HTB versus K-means: comparison.yaml in out_dir."""
        config = self._config(command)
        document = self.pipeline_factory(config).run_comparison()
        comparison = document.comparison
        return CommandResult(
            "compare",
            [config.out_dir / COMPARISON_FILE],
            {
                "htb_coverage": comparison.htb_coverage,
                "kmeans_coverage": comparison.kmeans_coverage,
                "agreement": comparison.agreement,
            },
        )

    def cmd_synth(self, command: Command) -> CommandResult:
        """Generate a cohort: events.csv or wifi.csv, truth.csv and cohort.yaml."""
        spec = load_cohort_spec(command.spec_file, command.seed)
        cohort = generate_cohort(spec, workers=command.workers)
        repository = DatasetRepository(command.out_dir)

        outputs: list[Path] = []
        if cohort.event_log is not None:
            outputs.append(repository.write_events(cohort.event_log))
        if cohort.associations is not None:
            outputs.append(repository.write_wifi(cohort.associations))
        outputs.append(repository.write_truth(cohort.truth, TRUTH_FILE))
        outputs.append(repository.write_mapping(spec.model_dump(mode="json"), COHORT_FILE))
        return CommandResult(
            "synth",
            outputs,
            {"mode": spec.mode, "users": spec.user_count, "seed": spec.seed, "groups": truth_histogram(cohort.truth)},
        )

    def cmd_report(self, command: Command) -> CommandResult:
        """Validate a saved report and re-render its curve files into out_dir."""
        if command.report_file is None:
            raise ConfigError("'report' needs --report FILE")
        document = self.writer.load(command.report_file)
        if not isinstance(document, CohortReport):
            return CommandResult("report", [], {"command": document.command, "valid": True})

        missing = self.writer.missing_curves(document, command.report_file.parent)
        if missing:
            self.logger.warn("Report references missing curve files", param("missing", missing))

        repository = DatasetRepository(command.out_dir)
        outputs = [repository.write_curve(ref.to_curve(), ref.file) for ref in document.curves.values()]
        return CommandResult("report", outputs, {"curves": len(outputs), "valid": True})
