"""End-to-end cohort analysis: ingest → preprocess → relevance → HTB → analytics → report."""

from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import UTC, datetime
from pathlib import Path
from typing import TypeVar

from src import __version__
from src.analytics import (
    class_composition,
    class_rr_distributions,
    compare_htb_kmeans,
    distinct_poi_counts,
    group_members,
    kmeans_partitions,
    pause_time_analysis,
    pooled_rr_ccdf,
)
from src.config.settings import RunConfig
from src.domain.analytics import (
    CcdfCurve,
    ClassComposition,
    ComparisonReport,
    GroupCurves,
    PauseTimeReport,
    PoiCountDistribution,
)
from src.domain.classification import GroupDistribution, UserClassification
from src.domain.events import CDR_CHANNELS, Channel, DayWindow, Stay, local_day
from src.domain.relevance import RelevanceTable
from src.errors import ConfigError, ContractViolation
from src.htb import classify_cohort, group_cohort
from src.ingest import AssocBatch, EventBatch, EventLog, normalize, parse_raw_cdr, parse_raw_wifi
from src.logger.logger import get_logger
from src.logger.types import Category, param
from src.preprocess import extract_stays, filter_active_users, pair_sessions
from src.relevance import cohort_relevance
from src.report.schema import (
    CohortReport,
    ComparisonDocument,
    ComparisonSection,
    CompositionRow,
    CurveRef,
    DatasetSummary,
    GroupRow,
    PauseTimeSection,
    RecoverySection,
)
from src.report.writer import ReportWriter
from src.repository.dataset_repository import DatasetRepository
from src.synth import PlantedTruth, RecoveryMetrics, evaluate_recovery

REPORT_FILE = "report.yaml"
COMPARISON_FILE = "comparison.yaml"
CURVE_DIR = "curves"
PAUSE_GROUP = 3
MAX_READERS = 8

B = TypeVar("B", EventBatch, AssocBatch)


@dataclass
class Dataset:
    """Preprocessed input: an active-user event log (cdr/normalized) or significant stays (wifi)."""

    kind: str
    inputs: list[str]
    rows: int
    malformed: int
    records: int
    users_before: int
    event_log: EventLog | None = None
    stays: list[Stay] | None = None
    window: DayWindow | None = None  # configured window of a wifi dataset

    @property
    def source(self) -> EventLog | list[Stay]:
        if self.event_log is not None:
            return self.event_log
        return self.stays or []


@dataclass
class AnalysisResult:
    """Everything `analyze` computes before serialisation."""

    dataset: Dataset
    window: DayWindow | None
    tables: list[RelevanceTable]
    classifications: list[UserClassification]
    groups: GroupDistribution
    rr_all: CcdfCurve
    class_curves: dict[int, GroupCurves] = field(default_factory=dict)
    poi_counts: dict[int, PoiCountDistribution] = field(default_factory=dict)
    compositions: dict[int, ClassComposition] = field(default_factory=dict)
    pause_time: PauseTimeReport | None = None
    comparison: ComparisonReport | None = None
    recovery: RecoveryMetrics | None = None

class AnalysisPipeline:
    """Runs one configured analysis and writes its outputs."""

    def __init__(
        self,
        config: RunConfig,
        repository: DatasetRepository | None = None,
        writer: ReportWriter | None = None,
    ) -> None:
        """
        Initialize AnalysisPipeline.

        Args:
            config: Validated run configuration
            repository: File access (defaults to one rooted at config.out_dir)
            writer: Report serialiser
        """
        self.config = config
        self.repository = repository or DatasetRepository(config.out_dir)
        self.writer = writer or ReportWriter()
        self.logger = get_logger().with_category(Category.PIPELINE)

    # --- ingest -----------------------------------------------------------

    def _configured_window(self, observed: DayWindow | None) -> DayWindow | None:
        """Window from window_start/window_end; open ends are taken from the observed window."""
        start, end = self.config.window_start, self.config.window_end
        if start is None and end is None:
            return None
        if start is None or end is None:
            if observed is None:
                return None
            start = start or observed.first_day
            end = end or observed.last_day
            if start > end:
                raise ConfigError(
                    f"window {start}..{end} misses the observed days {observed.first_day}..{observed.last_day}"
                )
        return DayWindow(start, end)

    def _parse_all(self, parse: Callable[[Path], B]) -> list[B]:
        inputs = self.config.inputs
        with ThreadPoolExecutor(max_workers=min(len(inputs), MAX_READERS)) as pool:
            return list(pool.map(parse, inputs))

    def _parse_events(self, path: Path) -> EventBatch:
        cfg = self.config
        channels = CDR_CHANNELS | {Channel.WIFI} if cfg.kind == "normalized" else CDR_CHANNELS
        with self.repository.open_input(path) as stream:
            return parse_raw_cdr(
                stream,
                cfg.columns,
                cfg.timezone,
                channels=channels,
                max_malformed_fraction=cfg.max_malformed_fraction,
                source=str(path),
            )

    def _parse_wifi(self, path: Path) -> AssocBatch:
        cfg = self.config
        with self.repository.open_input(path) as stream:
            return parse_raw_wifi(
                stream,
                cfg.timezone,
                timestamp_format=cfg.columns.timestamp_format,
                delimiter=cfg.columns.delimiter,
                max_malformed_fraction=cfg.max_malformed_fraction,
                source=str(path),
            )

    def load(self) -> Dataset:
        """
        Parse and preprocess every input file.

        Raises:
            ConfigError: No input files configured
            InputError, FormatError: Unreadable or malformed inputs
            ContractViolation: Empty event log
        """
        cfg = self.config
        if not cfg.inputs:
            raise ConfigError("no input files given")
        inputs = [str(p) for p in cfg.inputs]

        if cfg.kind == "wifi":
            with self.logger.timed("ingest"):
                assoc = AssocBatch.concat(self._parse_all(self._parse_wifi))
            with self.logger.timed("preprocess"):
                return self._wifi_dataset(inputs, assoc)

        with self.logger.timed("ingest"):
            events = EventBatch.concat(self._parse_all(self._parse_events))

        with self.logger.timed("preprocess"):
            log = normalize(events, cfg.timezone)
            window = self._configured_window(log.window)
            if window is not None:
                log = normalize(log.events, cfg.timezone, window)
            log.require_window()
            users_before = log.user_count
            active = filter_active_users(log, cfg.active_mode, cfg.active_fraction)
        return Dataset(
            kind=cfg.kind,
            inputs=inputs,
            rows=events.rows,
            malformed=events.malformed,
            records=len(active),
            users_before=users_before,
            event_log=active,
        )

    def _wifi_dataset(self, inputs: list[str], assoc: AssocBatch) -> Dataset:
        cfg = self.config
        if not assoc:
            raise ContractViolation("association log is empty")
        days = [local_day(a.timestamp, cfg.zone) for a in assoc]
        window = self._configured_window(DayWindow(min(days), max(days)))
        window_end = window.end_instant(cfg.zone) if window is not None else None
        stays = extract_stays(pair_sessions(assoc, window_end), cfg.min_pause, cfg.merge_gap)
        if window is not None:
            stays = [s for s in stays if local_day(s.start, cfg.zone) in window]
        return Dataset(
            kind=cfg.kind,
            inputs=inputs,
            rows=assoc.rows,
            malformed=assoc.malformed,
            records=len(stays),
            users_before=len({a.user_id for a in assoc}),
            stays=stays,
            window=window,
        )

    # --- analysis ---------------------------------------------------------

    def classify(self, dataset: Dataset) -> tuple[list[RelevanceTable], list[UserClassification]]:
        """RR tables and HTB classifications of every retained user, ordered by user_id."""
        cfg = self.config
        with self.logger.timed("relevance"):
            window = dataset.event_log.window if dataset.event_log is not None else dataset.window
            tables = cohort_relevance(dataset.source, cfg.d_total_mode, cfg.timezone, window)
        if not tables:
            raise ContractViolation("no user passed preprocessing")
        with self.logger.timed("classification"):
            classifications = classify_cohort(tables, cfg.head_limit, cfg.workers)
        return tables, classifications

    def compare(self, classifications: Sequence[UserClassification]) -> ComparisonReport:
        cfg = self.config
        with self.logger.timed("comparison"):
            partitions = kmeans_partitions(classifications, cfg.kmeans, cfg.seed, cfg.workers)
            return compare_htb_kmeans(classifications, cfg.kmeans, cfg.seed, partitions=partitions)

    def score_recovery(self, classifications: Sequence[UserClassification], truth_path: Path) -> RecoveryMetrics:
        """
        Score classifications against a synth truth file.

        Truth users filtered out before classification are not scored.

        Raises:
            ContractViolation: A classified user is missing from the truth file
        """
        with self.logger.timed("recovery"):
            truth = self.repository.read_truth(truth_path)
            classified = {c.user_id for c in classifications}
            unscored = len(set(truth.tiers) - classified)
            if unscored:
                self.logger.warn("Truth users without a classification are not scored", param("users", unscored))
            scoped = PlantedTruth(
                tiers={u: t for u, t in truth.tiers.items() if u in classified},
                probabilities={},
                expected_ht={u: ht for u, ht in truth.expected_ht.items() if u in classified},
            )
            return evaluate_recovery(classifications, scoped)

    def analyze(self) -> AnalysisResult:
        """Run every stage and return the in-memory results."""
        cfg = self.config
        dataset = self.load()
        tables, classifications = self.classify(dataset)

        with self.logger.timed("analytics"):
            result = AnalysisResult(
                dataset=dataset,
                window=_result_window(dataset, cfg),
                tables=tables,
                classifications=classifications,
                groups=group_cohort(classifications),
                rr_all=pooled_rr_ccdf(tables),
            )
            for g in cfg.focus_groups:
                result.class_curves[g] = class_rr_distributions(classifications, g)
                result.poi_counts[g] = distinct_poi_counts(classifications, g)
                if group_members(classifications, g):
                    result.compositions[g] = class_composition(classifications, g, cfg.averaging)

            if dataset.stays is not None:
                pause_group = PAUSE_GROUP if PAUSE_GROUP in cfg.focus_groups else max(cfg.focus_groups, default=None)
                if pause_group is not None and group_members(classifications, pause_group):
                    result.pause_time = pause_time_analysis(dataset.stays, classifications, pause_group)

        if cfg.comparison:
            result.comparison = self.compare(classifications)
        if cfg.truth is not None:
            result.recovery = self.score_recovery(classifications, cfg.truth)
        return result

    # --- outputs ----------------------------------------------------------

    def summary(self, result: AnalysisResult) -> DatasetSummary:
        dataset = result.dataset
        window = result.window
        pois = len({r.place_id for t in result.tables for r in t.records})
        return DatasetSummary(
            kind=dataset.kind,
            inputs=dataset.inputs,
            rows=dataset.rows,
            malformed_rows=dataset.malformed,
            records=dataset.records,
            users_before=dataset.users_before,
            users_after=len(result.tables),
            days=window.days if window else 0,
            window_start=window.first_day.isoformat() if window else None,
            window_end=window.last_day.isoformat() if window else None,
            pois=pois,
        )

    def curves(self, result: AnalysisResult) -> dict[str, CcdfCurve]:
        """Named CCDF curves of an analysis, in report order."""
        named: dict[str, CcdfCurve] = {"rr_all": result.rr_all}
        for g, group_curves in result.class_curves.items():
            for c, curve in group_curves.curves.items():
                named[f"rr_group{g}_class{c}"] = curve
        for g, counts in result.poi_counts.items():
            for c, curve in counts.curves.items():
                named[f"poi_count_group{g}_class{c}"] = curve
        if result.pause_time is not None:
            g = result.pause_time.group
            for c, curve in result.pause_time.curves.items():
                named[f"pause_group{g}_class{c}"] = curve
        return named

    def build_report(self, result: AnalysisResult, generated_at: datetime | None = None) -> CohortReport:
        return CohortReport(
            tool_version=__version__,
            generated_at=generated_at or datetime.now(UTC),
            config=self.config.echo(),
            dataset=self.summary(result),
            groups=GroupRow.rows_of(result.groups),
            composition=[CompositionRow.of(c) for c in result.compositions.values()],
            pause_time=PauseTimeSection.of(result.pause_time) if result.pause_time else None,
            comparison=ComparisonSection.of(result.comparison) if result.comparison else None,
            recovery=RecoverySection.of(result.recovery) if result.recovery else None,
            curves={
                name: CurveRef.of(curve, f"{CURVE_DIR}/{name}.csv") for name, curve in self.curves(result).items()
            },
        )

    def write_report(self, report: CohortReport) -> Path:
        """Write the curve sidecars and then the report into out_dir."""
        with self.logger.timed("report"):
            for ref in report.curves.values():
                self.repository.write_curve(ref.to_curve(), ref.file)
            return self.writer.write(report, self.repository.path(REPORT_FILE))

    def run(self) -> CohortReport:
        """Analyze and write report.yaml plus curves/*.csv."""
        report = self.build_report(self.analyze())
        self.write_report(report)
        return report

    def run_comparison(self) -> ComparisonDocument:
        """Classify with both methods and write comparison.yaml."""
        dataset = self.load()
        tables, classifications = self.classify(dataset)
        comparison = self.compare(classifications)
        result = AnalysisResult(
            dataset=dataset,
            window=_result_window(dataset, self.config),
            tables=tables,
            classifications=classifications,
            groups=group_cohort(classifications),
            rr_all=pooled_rr_ccdf(tables),
        )
        document = ComparisonDocument(
            tool_version=__version__,
            generated_at=datetime.now(UTC),
            config=self.config.echo(),
            dataset=self.summary(result),
            comparison=ComparisonSection.of(comparison),
        )
        self.writer.write(document, self.repository.path(COMPARISON_FILE))
        return document


def _result_window(dataset: Dataset, config: RunConfig) -> DayWindow | None:
    """Log window, configured wifi window, or the days the stays cover."""
    if dataset.event_log is not None:
        return dataset.event_log.window
    if dataset.window is not None:
        return dataset.window
    if not dataset.stays:
        return None
    days = [day for s in dataset.stays for day in s.days(config.zone)]
    return DayWindow(min(days), max(days))
