"""Measure series: the per-(year, parent, classification) data model,
CSV/JSON serialization, and ranking-reversal detection.

A series is what one census-pipeline run produces: one
:class:`SeriesPoint` per census year, parent line (mother/father), and
binary classification (high-school / college threshold).  A point holds
either a full :class:`~mobimetrics.measures.MeasureSet` or a gap reason;
gaps are data, not failures, so that one degenerate year cannot kill a
55-year run.

:func:`detect_reversals` answers the ranking question: for each (year,
parent line), does the Liu-Lu measure say inequality of opportunity is
higher for the high-school threshold while the persistence coefficient
(or phi) says the college threshold, or vice versa?
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .errors import SchemaError
from .measures import MeasureSet, RegressionFit

__all__ = [
    "PARENT_LINES",
    "CSV_COLUMNS",
    "SeriesPoint",
    "RankingRow",
    "RankingReport",
    "detect_reversals",
    "emit_series",
    "load_series",
    "TIE_TOLERANCE",
]

PARENT_LINES = ("mother", "father")

#: Stable column order of the emitted CSV; JSON rows mirror these fields.
CSV_COLUMNS = (
    "year",
    "parent_line",
    "classification",
    "liu_lu",
    "liu_lu_simplified",
    "igpc_beta",
    "igpc_alpha",
    "phi",
    "n_effective",
    "gap_reason",
)

#: Measure differences at or below this are ranked as ties (never reversals).
TIE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class SeriesPoint:
    """Measures of one (year, parent line, classification) cell.

    Exactly one of ``measures`` and ``gap_reason`` is set.  ``n_effective``
    is the (weighted) person count behind the table, 0 when nothing usable
    was found.
    """

    year: int
    parent_line: str
    classification: str
    measures: MeasureSet | None = None
    n_effective: float = 0.0
    gap_reason: str | None = None

    def __post_init__(self) -> None:
        if (self.measures is None) == (self.gap_reason is None):
            raise ValueError("exactly one of measures and gap_reason must be set")

    def is_gap(self) -> bool:
        return self.gap_reason is not None

    def to_row(self) -> dict:
        """Flat dict in CSV_COLUMNS order (None for absent values)."""
        ms = self.measures
        return {
            "year": self.year,
            "parent_line": self.parent_line,
            "classification": self.classification,
            "liu_lu": None if ms is None else ms.liu_lu,
            "liu_lu_simplified": None if ms is None else ms.liu_lu_simplified,
            "igpc_beta": None if ms is None else ms.igpc.beta,
            "igpc_alpha": None if ms is None else ms.igpc.alpha,
            "phi": None if ms is None else ms.phi,
            "n_effective": self.n_effective,
            "gap_reason": self.gap_reason,
        }

    @classmethod
    def from_row(cls, row: dict) -> "SeriesPoint":
        gap = row.get("gap_reason") or None
        if gap is not None:
            measures = None
        else:
            measures = MeasureSet(
                liu_lu=_required_float(row, "liu_lu"),
                igpc=RegressionFit(
                    alpha=_required_float(row, "igpc_alpha"),
                    beta=_required_float(row, "igpc_beta"),
                    residual_variance=None,  # not part of the series schema
                ),
                phi=_required_float(row, "phi"),
                liu_lu_simplified=_optional_float(row, "liu_lu_simplified"),
            )
        return cls(
            year=int(row["year"]),
            parent_line=str(row["parent_line"]),
            classification=str(row["classification"]),
            measures=measures,
            n_effective=_required_float(row, "n_effective"),
            gap_reason=gap,
        )


def _required_float(row: dict, key: str) -> float:
    value = row.get(key)
    if value is None or value == "":
        raise SchemaError(f"series row is missing a value for {key!r}: {row!r}")
    return float(value)


def _optional_float(row: dict, key: str) -> float | None:
    value = row.get(key)
    if value is None or value == "":
        return None
    return float(value)


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)  # shortest round-tripping decimal
    return str(value)


def emit_series(
    series: Iterable[SeriesPoint],
    fmt: str = "csv",
    destination: "str | Path | io.TextIOBase | None" = None,
) -> str:
    """Serialize a series to CSV or JSON.

    Returns the serialized text and, when ``destination`` is a path or
    open file, also writes it there.  Output bytes are deterministic for
    a fixed series.  IO failures surface with the path attached.
    """
    points = list(series)
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for point in points:
            row = point.to_row()
            writer.writerow([_format_cell(row[col]) for col in CSV_COLUMNS])
        text = buffer.getvalue()
    elif fmt == "json":
        text = json.dumps([p.to_row() for p in points], indent=2) + "\n"
    else:
        raise ValueError(f"unknown series format {fmt!r} (expected 'csv' or 'json')")
    if destination is not None:
        if isinstance(destination, (str, Path)):
            path = Path(destination)
            try:
                path.write_text(text, encoding="utf-8")
            except OSError as exc:
                raise OSError(f"cannot write series to {path}: {exc}") from exc
        else:
            destination.write(text)
    return text


def load_series(source: "str | Path | io.TextIOBase", fmt: str | None = None) -> list[SeriesPoint]:
    """Read a series back from CSV or JSON.

    ``fmt`` is sniffed from the file extension when omitted.  Regression
    fits come back without residual variance, which the series schema
    does not carry.
    """
    if isinstance(source, (str, Path)):
        path = Path(source)
        if fmt is None:
            suffix = path.suffix.lower().lstrip(".")
            fmt = suffix if suffix in ("csv", "json") else "csv"
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise OSError(f"cannot read series from {path}: {exc}") from exc
    else:
        text = source.read()
        if fmt is None:
            fmt = "json" if text.lstrip().startswith("[") else "csv"
    if fmt == "json":
        rows = json.loads(text)
    elif fmt == "csv":
        reader = csv.DictReader(io.StringIO(text))
        missing = [c for c in CSV_COLUMNS if c not in (reader.fieldnames or ())]
        if missing:
            raise SchemaError(f"series CSV is missing columns: {', '.join(missing)}")
        rows = list(reader)
    else:
        raise ValueError(f"unknown series format {fmt!r} (expected 'csv' or 'json')")
    return [SeriesPoint.from_row(row) for row in rows]


# --------------------------------------------------------------------------
# Ranking reversals
# --------------------------------------------------------------------------

#: Ranking codes: does the high-school or the college classification show
#: the larger measure?
HS_OVER_COL = "HS>COL"
COL_OVER_HS = "COL>HS"
TIE = "tie"


@dataclass(frozen=True)
class RankingRow:
    """Per-(year, parent line) measure rankings and reversal flags."""

    year: int
    parent_line: str
    ll_ranking: str
    igpc_ranking: str
    phi_ranking: str
    reversal_ll_igpc: bool
    reversal_ll_phi: bool

    def to_dict(self) -> dict:
        return {
            "year": self.year,
            "parent_line": self.parent_line,
            "ll_ranking": self.ll_ranking,
            "igpc_ranking": self.igpc_ranking,
            "phi_ranking": self.phi_ranking,
            "reversal_ll_igpc": self.reversal_ll_igpc,
            "reversal_ll_phi": self.reversal_ll_phi,
        }


@dataclass(frozen=True)
class RankingReport:
    """Reversal analysis of a full series."""

    rows: tuple[RankingRow, ...]
    notes: tuple[str, ...] = ()

    def reversal_years(self, kind: str = "igpc") -> list[tuple[int, str]]:
        """(year, parent_line) pairs flagged against the given measure."""
        if kind not in ("igpc", "phi"):
            raise ValueError(f"kind must be 'igpc' or 'phi', got {kind!r}")
        flag = "reversal_ll_igpc" if kind == "igpc" else "reversal_ll_phi"
        return [(r.year, r.parent_line) for r in self.rows if getattr(r, flag)]

    def to_dict(self) -> dict:
        return {"rows": [r.to_dict() for r in self.rows], "notes": list(self.notes)}


def _rank(value_hs: float, value_col: float, tolerance: float) -> str:
    if abs(value_hs - value_col) <= tolerance:
        return TIE
    return HS_OVER_COL if value_hs > value_col else COL_OVER_HS


def _opposed(ranking_a: str, ranking_b: str) -> bool:
    return (
        ranking_a != TIE
        and ranking_b != TIE
        and ranking_a != ranking_b
    )


def detect_reversals(
    series: Iterable[SeriesPoint],
    hs_classification: str = "high_school",
    col_classification: str = "college",
    tolerance: float = TIE_TOLERANCE,
) -> RankingReport:
    """Compare the measure rankings of the two classifications.

    For every (year, parent line) with a usable point under both
    classifications, ranks liu_lu, igpc beta, and phi across the two and
    flags the years where the Liu-Lu ranking and the conventional
    measure's ranking are strict and opposite.  Differences within
    ``tolerance`` are ties and never flag.  Pairs with a gap or a missing
    counterpart are skipped with a note.
    """
    by_cell: dict[tuple[int, str, str], SeriesPoint] = {}
    keys_seen: list[tuple[int, str]] = []
    for point in series:
        by_cell[(point.year, point.parent_line, point.classification)] = point
        key = (point.year, point.parent_line)
        if key not in keys_seen:
            keys_seen.append(key)

    rows: list[RankingRow] = []
    notes: list[str] = []
    for year, parent_line in keys_seen:
        pair = []
        skip = None
        for classification in (hs_classification, col_classification):
            point = by_cell.get((year, parent_line, classification))
            if point is None:
                skip = f"no {classification} point"
                break
            if point.is_gap():
                skip = f"{classification} is a gap ({point.gap_reason})"
                break
            pair.append(point.measures)
        if skip is not None:
            notes.append(
                f"MissingCounterpart: year={year} parent_line={parent_line}: {skip}"
            )
            continue
        ms_hs, ms_col = pair
        ll = _rank(ms_hs.liu_lu, ms_col.liu_lu, tolerance)
        beta = _rank(ms_hs.igpc.beta, ms_col.igpc.beta, tolerance)
        phi_rank = _rank(ms_hs.phi, ms_col.phi, tolerance)
        rows.append(
            RankingRow(
                year=year,
                parent_line=parent_line,
                ll_ranking=ll,
                igpc_ranking=beta,
                phi_ranking=phi_rank,
                reversal_ll_igpc=_opposed(ll, beta),
                reversal_ll_phi=_opposed(ll, phi_rank),
            )
        )
    return RankingReport(rows=tuple(rows), notes=tuple(notes))
