"""Census microdata ingestion: parse extracts, recode education, build tables.

Input files are UTF-8 CSVs with a header carrying at least
``year, age, edattain, edattain_mom, edattain_pop`` (plus an optional
``weight`` column), one row per respondent.  Education columns hold raw
attainment codes; :class:`RecodeConfig` maps codes to a 4-level ordinal
scale (1 below primary .. 4 completed tertiary) and defines the binary
classifications, by default "high_school" (level >= 3 is high) and
"college" (level >= 4 is high).

:func:`run_pipeline` drives the whole computation for a manifest of
per-census-year files: cohort filtering (ages 30-40 inclusive by
default), listwise deletion per parent line, aggregation into
:class:`~mobimetrics.measures.ContingencyTable` cells, and measure
evaluation into one :class:`~mobimetrics.report.SeriesPoint` per
(year, parent line, classification).  Cell-level failures (degenerate
margins, nothing usable) become gap points rather than aborting the run.
"""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import (
    DegenerateMarginsError,
    EmptyTableError,
    MobilityError,
    ParseError,
    SchemaError,
    UndefinedMeasureError,
)
from .measures import ContingencyTable, Mode, measure_set
from .report import PARENT_LINES, SeriesPoint

__all__ = [
    "REQUIRED_COLUMNS",
    "WEIGHT_COLUMN",
    "DEFAULT_CODE_TO_LEVEL",
    "DEFAULT_CLASSIFICATIONS",
    "PersonRecord",
    "RecodeConfig",
    "SchemaConfig",
    "IngestReport",
    "ParseIssue",
    "ParseResult",
    "ManifestEntry",
    "PipelineConfig",
    "PipelineResult",
    "parse_microdata",
    "recode",
    "binarize",
    "cohort_filter",
    "build_table",
    "run_pipeline",
    "load_config",
    "load_manifest",
]

REQUIRED_COLUMNS = ("year", "age", "edattain", "edattain_mom", "edattain_pop")
WEIGHT_COLUMN = "weight"

#: IPUMS-style 4-level attainment codes; 0 is "not in universe / unknown"
#: and 9 "missing", both treated as missing values.
DEFAULT_CODE_TO_LEVEL: dict[int, int | None] = {0: None, 1: 1, 2: 2, 3: 3, 4: 4, 9: None}

DEFAULT_CLASSIFICATIONS: dict[str, int] = {"high_school": 3, "college": 4}


@dataclass(frozen=True)
class PersonRecord:
    """One microdata row: respondent year, age, and raw education codes."""

    year: int
    age: int
    edattain: int
    edattain_mom: int
    edattain_pop: int
    weight: float = 1.0

    def __post_init__(self) -> None:
        if self.age < 0:
            raise ValueError(f"age must be non-negative, got {self.age}")
        if not self.weight > 0:
            raise ValueError(f"weight must be positive, got {self.weight}")


@dataclass(frozen=True)
class RecodeConfig:
    """Code-to-level map, binary classifications, and cohort age bounds."""

    code_to_level: Mapping[int, int | None] = field(
        default_factory=lambda: dict(DEFAULT_CODE_TO_LEVEL)
    )
    classifications: Mapping[str, int] = field(
        default_factory=lambda: dict(DEFAULT_CLASSIFICATIONS)
    )
    cohort_age_min: int = 30
    cohort_age_max: int = 40

    def __post_init__(self) -> None:
        for code, level in self.code_to_level.items():
            if level is not None and level not in (1, 2, 3, 4):
                raise ValueError(f"level for code {code} must be 1..4 or None, got {level}")
        for name, threshold in self.classifications.items():
            if threshold not in (2, 3, 4):
                raise ValueError(
                    f"classification {name!r} threshold must be in {{2, 3, 4}}, got {threshold}"
                )
        if self.cohort_age_min > self.cohort_age_max:
            raise ValueError(
                f"cohort_age_min ({self.cohort_age_min}) exceeds "
                f"cohort_age_max ({self.cohort_age_max})"
            )


@dataclass(frozen=True)
class SchemaConfig:
    """Input-file dialect; column names are fixed by the documented schema."""

    delimiter: str = ","


@dataclass
class IngestReport:
    """Bookkeeping for one pipeline run.

    ``rows_dropped_missing`` counts cohort rows lost to listwise deletion,
    keyed by the variable that was missing: a row with an unmapped child
    code counts once under ``edattain``; a row with the child present but
    a parent code missing counts under that parent's variable (possibly
    under both).  ``tables_built`` counts non-empty tables, degenerate or
    not.
    """

    rows_read: int = 0
    rows_in_cohort: int = 0
    rows_dropped_missing: dict[str, int] = field(
        default_factory=lambda: {"edattain": 0, "edattain_mom": 0, "edattain_pop": 0}
    )
    tables_built: int = 0
    parse_issues: int = 0

    def merge(self, other: "IngestReport") -> None:
        self.rows_read += other.rows_read
        self.rows_in_cohort += other.rows_in_cohort
        for key, count in other.rows_dropped_missing.items():
            self.rows_dropped_missing[key] = self.rows_dropped_missing.get(key, 0) + count
        self.tables_built += other.tables_built
        self.parse_issues += other.parse_issues

    def to_dict(self) -> dict:
        return {
            "rows_read": self.rows_read,
            "rows_in_cohort": self.rows_in_cohort,
            "rows_dropped_missing": dict(self.rows_dropped_missing),
            "tables_built": self.tables_built,
            "parse_issues": self.parse_issues,
        }


@dataclass(frozen=True)
class ParseIssue:
    """One malformed row, reported with its physical line number."""

    line: int
    message: str


@dataclass(frozen=True)
class ParseResult:
    records: tuple[PersonRecord, ...]
    issues: tuple[ParseIssue, ...]
    rows_read: int


def parse_microdata(
    source: "str | Path | io.TextIOBase",
    schema: SchemaConfig | None = None,
    max_errors: int = 100,
) -> ParseResult:
    """Parse one microdata CSV into person records.

    Malformed rows (non-numeric cells, missing fields, non-positive
    weights) are collected as :class:`ParseIssue` entries and skipped;
    once more than ``max_errors`` accumulate the whole parse fails with
    :class:`ParseError`.  A header missing a required column raises
    :class:`SchemaError` immediately.
    """
    schema = schema or SchemaConfig()
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as handle:
            return _parse_stream(handle, schema, max_errors)
    return _parse_stream(source, schema, max_errors)


def _parse_stream(handle, schema: SchemaConfig, max_errors: int) -> ParseResult:
    reader = csv.DictReader(handle, delimiter=schema.delimiter, restkey="_extra")
    header = reader.fieldnames
    if header is None:
        raise SchemaError("input has no header row")
    missing = [c for c in REQUIRED_COLUMNS if c not in header]
    if missing:
        raise SchemaError(f"input header is missing required columns: {', '.join(missing)}")
    has_weight = WEIGHT_COLUMN in header

    records: list[PersonRecord] = []
    issues: list[ParseIssue] = []
    rows_read = 0
    for row in reader:
        rows_read += 1
        line = reader.line_num
        try:
            weight = 1.0
            if has_weight:
                raw_weight = row.get(WEIGHT_COLUMN)
                if raw_weight not in (None, ""):
                    weight = float(raw_weight)
            records.append(
                PersonRecord(
                    year=_int_cell(row, "year"),
                    age=_int_cell(row, "age"),
                    edattain=_int_cell(row, "edattain"),
                    edattain_mom=_int_cell(row, "edattain_mom"),
                    edattain_pop=_int_cell(row, "edattain_pop"),
                    weight=weight,
                )
            )
        except (ValueError, TypeError) as exc:
            issues.append(ParseIssue(line=line, message=str(exc)))
            if len(issues) > max_errors:
                raise ParseError(
                    f"more than {max_errors} malformed rows; last issue at "
                    f"line {line}: {exc}"
                ) from exc
    return ParseResult(records=tuple(records), issues=tuple(issues), rows_read=rows_read)


def _int_cell(row: dict, column: str) -> int:
    value = row.get(column)
    if value is None or value == "":
        raise ValueError(f"column {column!r} is empty")
    try:
        return int(value)
    except ValueError:
        raise ValueError(f"column {column!r} has non-numeric value {value!r}") from None


def recode(code: int, config: RecodeConfig) -> int | None:
    """Map a raw attainment code to its ordinal level; unmapped codes are missing."""
    return config.code_to_level.get(code)


def binarize(level: int, threshold: int) -> bool:
    """True when the ordinal level clears the classification threshold (is "high")."""
    if level not in (1, 2, 3, 4):
        raise ValueError(f"level must be in 1..4, got {level}")
    return level >= threshold


def cohort_filter(
    records: Iterable[PersonRecord], census_year: int, config: RecodeConfig | None = None
) -> list[PersonRecord]:
    """Keep records from the given census year inside the cohort age band.

    Both age bounds are inclusive (ages 30 and 40 both belong to the
    default cohort).
    """
    config = config or RecodeConfig()
    lo, hi = config.cohort_age_min, config.cohort_age_max
    return [r for r in records if r.year == census_year and lo <= r.age <= hi]


def _parent_column(parent_line: str) -> str:
    if parent_line == "mother":
        return "edattain_mom"
    if parent_line == "father":
        return "edattain_pop"
    raise ValueError(f"parent_line must be one of {PARENT_LINES}, got {parent_line!r}")


def build_table(
    records: Iterable[PersonRecord],
    parent_line: str,
    classification: str,
    config: RecodeConfig | None = None,
    weighting: str = "counts",
    report: IngestReport | None = None,
) -> ContingencyTable:
    """Aggregate records into the 2x2 table for one parent line and classification.

    Records missing the child's or the selected parent's education are
    dropped (listwise per parent line) and, when a ``report`` is given,
    tallied under the variable that was missing.  With
    ``weighting="counts"`` every usable record adds 1 to its cell and the
    table is integer-mode; with ``"weights"`` it adds its person weight
    and the table is continuous-mode.  Raises :class:`EmptyTableError`
    when nothing usable remains; degenerate tables are returned as-is,
    the measure functions reject them downstream.
    """
    config = config or RecodeConfig()
    parent_column = _parent_column(parent_line)
    try:
        threshold = config.classifications[classification]
    except KeyError:
        known = ", ".join(sorted(config.classifications))
        raise ValueError(f"unknown classification {classification!r} (known: {known})") from None
    if weighting not in ("counts", "weights"):
        raise ValueError(f"weighting must be 'counts' or 'weights', got {weighting!r}")

    weighted = weighting == "weights"
    cells = {(False, False): 0.0, (False, True): 0.0, (True, False): 0.0, (True, True): 0.0}
    used = 0
    for record in records:
        child_level = recode(record.edattain, config)
        if child_level is None:
            if report is not None:
                report.rows_dropped_missing["edattain"] += 1
            continue
        parent_level = recode(getattr(record, parent_column), config)
        if parent_level is None:
            if report is not None:
                report.rows_dropped_missing[parent_column] += 1
            continue
        key = (binarize(child_level, threshold), binarize(parent_level, threshold))
        cells[key] += record.weight if weighted else 1
        used += 1
    if used == 0:
        raise EmptyTableError(
            f"no usable records for parent_line={parent_line!r}, "
            f"classification={classification!r}"
        )
    if weighted:
        return ContingencyTable(
            n_ll=cells[(False, False)],
            n_lh=cells[(False, True)],
            n_hl=cells[(True, False)],
            n_hh=cells[(True, True)],
            mode=Mode.CONTINUOUS,
        )
    return ContingencyTable(
        n_ll=int(cells[(False, False)]),
        n_lh=int(cells[(False, True)]),
        n_hl=int(cells[(True, False)]),
        n_hh=int(cells[(True, True)]),
        mode=Mode.INTEGER,
    )


# --------------------------------------------------------------------------
# Pipeline
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ManifestEntry:
    """One census extract: the year it covers and where the file lives."""

    year: int
    path: Path


@dataclass(frozen=True)
class PipelineConfig:
    recode: RecodeConfig = field(default_factory=RecodeConfig)
    weighting: str = "counts"
    schema: SchemaConfig = field(default_factory=SchemaConfig)
    max_parse_errors: int = 100
    manifest: tuple[ManifestEntry, ...] | None = None

    def __post_init__(self) -> None:
        if self.weighting not in ("counts", "weights"):
            raise ValueError(f"weighting must be 'counts' or 'weights', got {self.weighting!r}")


@dataclass(frozen=True)
class PipelineResult:
    points: tuple[SeriesPoint, ...]
    report: IngestReport


def load_manifest(path: "str | Path") -> list[ManifestEntry]:
    """Read a manifest JSON: {"files": [{"year": ..., "path": ...}, ...]}.

    A bare list of entries is also accepted.  Relative paths resolve
    against the manifest file's directory.
    """
    path = Path(path)
    data = json.loads(path.read_text(encoding="utf-8"))
    if isinstance(data, dict):
        entries = data.get("files")
        if entries is None:
            raise SchemaError(f"manifest {path} has no 'files' key")
    else:
        entries = data
    if not isinstance(entries, list):
        raise SchemaError(f"manifest {path} entries must be a list")
    out = []
    for entry in entries:
        try:
            year = int(entry["year"])
            file_path = Path(entry["path"])
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"manifest {path} entry {entry!r} is malformed: {exc}") from exc
        if not file_path.is_absolute():
            file_path = path.parent / file_path
        out.append(ManifestEntry(year=year, path=file_path))
    return out


_CONFIG_KEYS = {
    "code_to_level",
    "classifications",
    "cohort_age_min",
    "cohort_age_max",
    "weighting",
    "delimiter",
    "max_parse_errors",
    "manifest",
}


def load_config(path: "str | Path") -> PipelineConfig:
    """Read a pipeline config JSON; every key is optional.

    Keys: ``code_to_level`` (raw code -> level 1..4 or null),
    ``classifications`` (name -> threshold), ``cohort_age_min``,
    ``cohort_age_max``, ``weighting`` ("counts"/"weights"),
    ``delimiter``, ``max_parse_errors``, and an optional embedded
    ``manifest`` (same shape as a manifest file, paths relative to the
    config file).
    """
    path = Path(path)
    data = json.loads(path.read_text(encoding="utf-8"))
    if not isinstance(data, dict):
        raise SchemaError(f"config {path} must be a JSON object")
    unknown = set(data) - _CONFIG_KEYS
    if unknown:
        raise SchemaError(f"config {path} has unknown keys: {', '.join(sorted(unknown))}")

    recode_kwargs: dict = {}
    if "code_to_level" in data:
        try:
            recode_kwargs["code_to_level"] = {
                int(code): (None if level is None else int(level))
                for code, level in data["code_to_level"].items()
            }
        except (AttributeError, TypeError, ValueError) as exc:
            raise SchemaError(f"config {path}: bad code_to_level: {exc}") from exc
    if "classifications" in data:
        try:
            recode_kwargs["classifications"] = {
                str(name): int(threshold) for name, threshold in data["classifications"].items()
            }
        except (AttributeError, TypeError, ValueError) as exc:
            raise SchemaError(f"config {path}: bad classifications: {exc}") from exc
    for key in ("cohort_age_min", "cohort_age_max"):
        if key in data:
            recode_kwargs[key] = int(data[key])

    manifest = None
    if "manifest" in data:
        entries = []
        for entry in data["manifest"]:
            file_path = Path(entry["path"])
            if not file_path.is_absolute():
                file_path = path.parent / file_path
            entries.append(ManifestEntry(year=int(entry["year"]), path=file_path))
        manifest = tuple(entries)

    try:
        recode_config = RecodeConfig(**recode_kwargs)
    except ValueError as exc:
        raise SchemaError(f"config {path}: {exc}") from exc
    return PipelineConfig(
        recode=recode_config,
        weighting=str(data.get("weighting", "counts")),
        schema=SchemaConfig(delimiter=str(data.get("delimiter", ","))),
        max_parse_errors=int(data.get("max_parse_errors", 100)),
        manifest=manifest,
    )


def _thread_count(n_files: int) -> int:
    raw = os.environ.get("MOBIMETRICS_THREADS")
    if raw is not None:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ValueError(
                f"MOBIMETRICS_THREADS must be an integer, got {raw!r}"
            ) from None
    return max(1, min(n_files, os.cpu_count() or 1, 8))


def _gap_reason(exc: Exception) -> str:
    return type(exc).__name__.removesuffix("Error")


def _missingness_pass(
    cohort: Sequence[PersonRecord], config: RecodeConfig
) -> tuple[dict[str, list[PersonRecord]], dict[str, int]]:
    """Split the cohort into per-parent-line usable records and drop tallies.

    A row missing the child's level is unusable for every table and is
    tallied once, under ``edattain``.  A row missing one parent's level
    still feeds the other parent's tables.
    """
    usable: dict[str, list[PersonRecord]] = {line: [] for line in PARENT_LINES}
    drops = {"edattain": 0, "edattain_mom": 0, "edattain_pop": 0}
    for record in cohort:
        if recode(record.edattain, config) is None:
            drops["edattain"] += 1
            continue
        for parent_line in PARENT_LINES:
            column = _parent_column(parent_line)
            if recode(getattr(record, column), config) is None:
                drops[column] += 1
            else:
                usable[parent_line].append(record)
    return usable, drops


def _process_year(
    entry: ManifestEntry, config: PipelineConfig
) -> tuple[list[SeriesPoint], IngestReport]:
    report = IngestReport()
    classifications = list(config.recode.classifications)

    def year_gaps(reason: str) -> list[SeriesPoint]:
        return [
            SeriesPoint(
                year=entry.year,
                parent_line=parent_line,
                classification=classification,
                gap_reason=reason,
            )
            for parent_line in PARENT_LINES
            for classification in classifications
        ]

    try:
        parsed = parse_microdata(entry.path, config.schema, config.max_parse_errors)
    except (SchemaError, ParseError, UnicodeDecodeError) as exc:
        return year_gaps(_gap_reason(exc) if isinstance(exc, MobilityError) else "Encoding"), report

    report.rows_read = parsed.rows_read
    report.parse_issues = len(parsed.issues)
    cohort = cohort_filter(parsed.records, entry.year, config.recode)
    report.rows_in_cohort = len(cohort)
    usable, drops = _missingness_pass(cohort, config.recode)
    report.rows_dropped_missing = drops

    weighted = config.weighting == "weights"
    points: list[SeriesPoint] = []
    for parent_line in PARENT_LINES:
        for classification in classifications:
            try:
                table = build_table(
                    usable[parent_line],
                    parent_line,
                    classification,
                    config.recode,
                    weighting=config.weighting,
                )
            except EmptyTableError as exc:
                points.append(
                    SeriesPoint(
                        year=entry.year,
                        parent_line=parent_line,
                        classification=classification,
                        gap_reason=_gap_reason(exc),
                    )
                )
                continue
            report.tables_built += 1
            n_effective = float(table.total)
            try:
                measures = measure_set(table)
            except (DegenerateMarginsError, UndefinedMeasureError) as exc:
                points.append(
                    SeriesPoint(
                        year=entry.year,
                        parent_line=parent_line,
                        classification=classification,
                        n_effective=n_effective,
                        gap_reason=_gap_reason(exc),
                    )
                )
                continue
            points.append(
                SeriesPoint(
                    year=entry.year,
                    parent_line=parent_line,
                    classification=classification,
                    measures=measures,
                    n_effective=n_effective,
                )
            )
    return points, report


def run_pipeline(
    manifest: "Sequence[ManifestEntry] | None" = None,
    config: PipelineConfig | None = None,
) -> PipelineResult:
    """Compute the full measure series for a manifest of census extracts.

    Emits one point per (year, parent line, classification) in manifest
    order, mother before father, classifications in config order.  Output
    is deterministic for fixed inputs; files are processed in parallel up
    to the MOBIMETRICS_THREADS cap.  Missing manifest files fail fast;
    problems inside a file (schema, parse budget, degenerate or empty
    cells) become gap points with the reason attached.
    """
    config = config or PipelineConfig()
    entries = list(manifest) if manifest is not None else list(config.manifest or ())
    if not entries:
        raise ValueError("no manifest entries: pass a manifest or embed one in the config")
    missing = [str(e.path) for e in entries if not Path(e.path).is_file()]
    if missing:
        raise FileNotFoundError(f"manifest file(s) not found: {', '.join(missing)}")

    threads = _thread_count(len(entries))
    if threads == 1 or len(entries) == 1:
        results = [_process_year(entry, config) for entry in entries]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda e: _process_year(e, config), entries))

    points: list[SeriesPoint] = []
    report = IngestReport()
    for year_points, year_report in results:
        points.extend(year_points)
        report.merge(year_report)
    return PipelineResult(points=tuple(points), report=report)
