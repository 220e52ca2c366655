"""YAML serialisation and validation of report documents."""

from pathlib import Path
from typing import Any

import yaml
from pydantic import TypeAdapter, ValidationError

from src.config.settings import validation_message
from src.errors import FormatError, InputError
from src.logger.logger import get_logger
from src.logger.types import Category, param
from src.report.schema import SCHEMA_VERSION, CohortReport, ComparisonDocument, Document

_DOCUMENT: TypeAdapter[CohortReport | ComparisonDocument] = TypeAdapter(Document)


class ReportWriter:
    """Writes and re-reads report documents."""

    def __init__(self) -> None:
        self.logger = get_logger().with_category(Category.REPORT)

    @staticmethod
    def dump(document: CohortReport | ComparisonDocument) -> str:
        """Render a document as YAML (field order as declared)."""
        data = document.model_dump(mode="json")
        return yaml.safe_dump(data, sort_keys=False, allow_unicode=True, default_flow_style=None)

    def write(self, document: CohortReport | ComparisonDocument, path: Path) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.dump(document), encoding="utf-8")
        self.logger.info("Report written", param("path", str(path)), param("command", document.command))
        return path

    def parse(self, text: str, source: str = "<report>") -> CohortReport | ComparisonDocument:
        """
        Validate a YAML report document.

        Raises:
            FormatError: Not YAML, wrong schema version or schema violation
        """
        try:
            data: Any = yaml.safe_load(text)
        except yaml.YAMLError as e:
            raise FormatError(f"{source}: report is not valid YAML: {e}") from e
        if not isinstance(data, dict):
            raise FormatError(f"{source}: report must be a mapping")
        version = data.get("schema_version")
        if version != SCHEMA_VERSION:
            raise FormatError(f"{source}: unsupported schema_version {version!r} (expected {SCHEMA_VERSION})")
        try:
            return _DOCUMENT.validate_python(data)
        except ValidationError as e:
            raise FormatError(f"{source}: {validation_message(e)}") from e

    def load(self, path: Path) -> CohortReport | ComparisonDocument:
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise InputError(f"cannot read report {path}: {e.strerror or e}") from e
        return self.parse(text, str(path))

    @staticmethod
    def missing_curves(report: CohortReport, base_dir: Path) -> list[str]:
        """Curve files referenced by the report that do not exist under base_dir."""
        return sorted(ref.file for ref in report.curves.values() if not (base_dir / ref.file).is_file())


def without_timestamp(document: CohortReport | ComparisonDocument) -> str:
    """YAML of a document with generated_at blanked, for run-to-run comparison."""
    data = document.model_dump(mode="json", exclude={"generated_at"})
    return yaml.safe_dump(data, sort_keys=False, allow_unicode=True)
