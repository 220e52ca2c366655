"""File I/O for datasets, truth files and curve sidecars."""

from collections import defaultdict
from collections.abc import Iterable, Iterator, Mapping
from contextlib import contextmanager
from pathlib import Path
from typing import IO, Any

import polars as pl
import yaml

from src.domain.analytics import CcdfCurve
from src.domain.classification import PlaceLabel
from src.domain.events import AssocEvent
from src.errors import FormatError, InputError
from src.ingest.log import EventLog
from src.ingest.parser import WIFI_COLUMNS
from src.logger.logger import get_logger
from src.logger.types import Category, param
from src.synth.generator import PlantedTruth

TRUTH_COLUMNS: tuple[str, ...] = ("user_id", "place_id", "tier")
CURVE_COLUMNS: tuple[str, ...] = ("x", "p")
ISO_UTC = "%Y-%m-%dT%H:%M:%SZ"


class DatasetRepository:
    """Reads inputs and writes dataset artefacts under an output directory."""

    def __init__(self, out_dir: Path | None = None) -> None:
        """
        Initialize DatasetRepository.

        Args:
            out_dir: Directory for written files (created on first write)
        """
        self.out_dir = out_dir or Path(".")
        self.logger = get_logger().with_category(Category.REPORT)

    def path(self, name: str) -> Path:
        return self.out_dir / name

    @contextmanager
    def open_input(self, path: Path) -> Iterator[IO[bytes]]:
        """
        Open an input file for binary reading.

        Raises:
            InputError: Missing or unreadable file
        """
        try:
            stream = open(path, "rb")
        except OSError as e:
            raise InputError(f"cannot read input {path}: {e.strerror or e}") from e
        with stream:
            yield stream

    def _writer(self, name: str) -> Path:
        target = self.path(name)
        target.parent.mkdir(parents=True, exist_ok=True)
        return target

    def _write_frame(self, frame: pl.DataFrame, name: str) -> Path:
        target = self._writer(name)
        frame.write_csv(target, line_terminator="\n")
        self._written(target, frame.height)
        return target

    def write_events(self, log: EventLog, name: str = "events.csv") -> Path:
        """
        Write the normalized event file (ISO-8601 UTC timestamps), in log order.

        Returns:
            Path of the written file
        """
        frame = log.frame.select(
            "user_id",
            pl.from_epoch("ts", time_unit="s").dt.strftime(ISO_UTC).alias("timestamp"),
            "place_id",
            "channel",
        )
        return self._write_frame(frame, name)

    def write_wifi(self, records: Iterable[AssocEvent], name: str = "wifi.csv") -> Path:
        """Write an association log, ordered by (user, timestamp) as generated."""
        rows = [(r.user_id, r.ap_id, r.timestamp.strftime(ISO_UTC), r.kind.value) for r in records]
        frame = pl.DataFrame(rows, schema=_text_schema(WIFI_COLUMNS), orient="row")
        return self._write_frame(frame, name)

    def write_truth(self, truth: PlantedTruth, name: str = "truth.csv") -> Path:
        """One line per (user_id, place_id, tier), sorted by user then place."""
        rows = [(u, p, t.value) for u, p, t in truth.rows()]
        frame = pl.DataFrame(rows, schema=_text_schema(TRUTH_COLUMNS), orient="row")
        return self._write_frame(frame, name)

    def read_truth(self, path: Path) -> PlantedTruth:
        """
        Read a truth file back; a user's expected ht-index is its number of distinct tiers.

        Raises:
            InputError: Unreadable file
            FormatError: Bad header, missing cell or unknown tier
        """
        with self.open_input(path) as stream:
            try:
                frame = pl.read_csv(stream.read(), infer_schema=False)
            except pl.exceptions.PolarsError as e:
                raise FormatError(f"{path}: not a truth file ({e})") from e
        if tuple(frame.columns) != TRUTH_COLUMNS:
            raise FormatError(f"{path}: expected header {','.join(TRUTH_COLUMNS)}")
        if frame.null_count().sum_horizontal().item():
            raise FormatError(f"{path}: truth rows must have all three cells")
        unknown = set(frame["tier"].unique()) - set(PlaceLabel.__members__)
        if unknown:
            raise FormatError(f"{path}: unknown tier(s) {','.join(sorted(unknown))}")

        tiers: dict[str, dict[str, PlaceLabel]] = defaultdict(dict)
        for user_id, place_id, tier in frame.iter_rows():
            tiers[user_id][place_id] = PlaceLabel(tier)
        return PlantedTruth(
            tiers=dict(tiers),
            probabilities={},
            expected_ht={u: len(set(places.values())) for u, places in tiers.items()},
        )

    def write_mapping(self, data: Mapping[str, Any], name: str) -> Path:
        """YAML document in key order (cohort spec echo)."""
        target = self._writer(name)
        target.write_text(yaml.safe_dump(dict(data), sort_keys=False, allow_unicode=True), encoding="utf-8")
        self._written(target, len(data))
        return target

    def write_curve(self, curve: CcdfCurve, name: str) -> Path:
        """Two-column `x,p` file, one point per line, x ascending, values as Python reprs."""
        rows = [(repr(x), repr(p)) for x, p in curve.points]
        return self._write_frame(pl.DataFrame(rows, schema=_text_schema(CURVE_COLUMNS), orient="row"), name)

    def _written(self, target: Path, rows: int) -> None:
        self.logger.info("File written", param("path", str(target)), param("rows", rows))


def _text_schema(columns: tuple[str, ...]) -> dict[str, type[pl.String]]:
    return dict.fromkeys(columns, pl.String)
