"""Association and mobility measures for 2x2 child-parent education tables.

The central object is :class:`ContingencyTable`, the matrix of young-adult
by parent education counts

    K = [[n_ll, n_lh],
         [n_hl, n_hh]]

with the first subscript the young adult's attainment (low/high) and the
second the parent's: rows are the child's level, columns the parent's.
From one table the module computes

* :func:`liu_lu` -- the scaled association measure of Liu and Lu (2006),
  originally built for marriage sorting and used here for child-parent
  education pairs because it is robust to shifts in the two marginal
  education distributions;
* :func:`liu_lu_simplified` -- its positive-association branch, identical
  to Coleman's (1958) "actual minus expected over maximum minus minimum"
  index;
* :func:`igpc` -- the intergenerational persistence coefficient: the OLS
  slope of the child's high-education indicator on the parent's;
* :func:`phi` -- the Pearson correlation of the two indicators.

plus the two benchmark constructions the Liu-Lu scaling is anchored to:
:func:`build_kp` (maximal inequality for the given margins) and
:func:`build_kr` (random allocation of credentials).

Counts may be integers (census counts) or non-negative reals (weighted
samples); :class:`Mode` selects how the expected high-high count ``Q`` is
discretised.  All internal arithmetic runs on exact rationals and results
are floated only on the way out, so the benchmark identities
``liu_lu(build_kp(m)) == 1.0`` and ``liu_lu(build_kr(m)) == 0.0`` hold
exactly rather than to rounding error.

All functions here are pure; values are immutable and safe to share
across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Union

from .errors import (
    BranchNotApplicableError,
    DegenerateMarginsError,
    UndefinedMeasureError,
)

__all__ = [
    "Mode",
    "ContingencyTable",
    "TableMargins",
    "RegressionFit",
    "MeasureSet",
    "margins",
    "liu_lu",
    "liu_lu_simplified",
    "igpc",
    "phi",
    "measure_set",
    "build_kp",
    "build_kr",
    "feasible_hh_range",
    "table_from_margins",
]

#: A cell count: integer, 64-bit real, or exact rational.
Count = Union[int, float, Fraction]

#: Exact rational, possibly simplified to int.
Exact = Union[int, Fraction]


class Mode(str, Enum):
    """How the expected high-high count ``Q`` is discretised.

    INTEGER implements the textbook definition on whole counts: ``Q-`` is
    the floor of ``Q`` and ``Q+`` its ceiling.  CONTINUOUS replaces both
    by ``Q`` itself, which is the natural limit for weighted (fractional)
    counts where flooring a non-integral expectation has no meaning.
    """

    INTEGER = "integer"
    CONTINUOUS = "continuous"


def _exact(value: Count, label: str) -> Exact:
    """Convert a count to an exact rational, rejecting NaN/inf/negatives."""
    if isinstance(value, bool):  # bool is an int subclass; never a count
        raise TypeError(f"{label} must be a number, got bool")
    if isinstance(value, int):
        out: Exact = value
    elif isinstance(value, Fraction):
        out = value
    elif isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"{label} must be finite, got {value!r}")
        out = Fraction(value)
    else:
        try:
            out = Fraction(value)
        except (TypeError, ValueError) as exc:
            raise TypeError(f"{label} must be a number, got {value!r}") from exc
    if out < 0:
        raise ValueError(f"{label} must be non-negative, got {value!r}")
    return _simplify(out)


def _simplify(value: Exact) -> Exact:
    """Collapse integral rationals to plain int (cleaner reprs, same math)."""
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    return value


def _is_whole(value: Exact) -> bool:
    return isinstance(value, int) or value.denominator == 1


@dataclass(frozen=True)
class ContingencyTable:
    """2x2 matrix of young-adult x parent education counts.

    Cell ``n_xy`` counts pairs where the young adult's level is ``x`` and
    the parent's is ``y`` (``l`` low, ``h`` high); rows are the child's
    level, columns the parent's.  Cells must be non-negative and sum to a
    positive total; in :attr:`Mode.INTEGER` mode every cell must be a
    whole number.
    """

    n_ll: Count
    n_lh: Count
    n_hl: Count
    n_hh: Count
    mode: Mode = Mode.INTEGER

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", Mode(self.mode))
        cells = self.exact_cells()
        if self.mode is Mode.INTEGER:
            for label, value in zip(self.cell_names(), cells):
                if not _is_whole(value):
                    raise ValueError(
                        f"integer-mode cell {label} must be a whole number, "
                        f"got {getattr(self, label)!r}"
                    )
        if sum(cells) <= 0:
            raise DegenerateMarginsError("table is empty (total count is 0)")

    @staticmethod
    def cell_names() -> tuple[str, str, str, str]:
        return ("n_ll", "n_lh", "n_hl", "n_hh")

    @classmethod
    def from_matrix(
        cls, rows: "list[list[Count]] | tuple", mode: Mode | str = Mode.INTEGER
    ) -> "ContingencyTable":
        """Build from ``[[n_ll, n_lh], [n_hl, n_hh]]`` (child rows, parent columns)."""
        (n_ll, n_lh), (n_hl, n_hh) = rows
        return cls(n_ll, n_lh, n_hl, n_hh, mode=Mode(mode))

    def exact_cells(self) -> tuple[Exact, Exact, Exact, Exact]:
        """Cells as exact rationals, in (n_ll, n_lh, n_hl, n_hh) order."""
        return (
            _exact(self.n_ll, "n_ll"),
            _exact(self.n_lh, "n_lh"),
            _exact(self.n_hl, "n_hl"),
            _exact(self.n_hh, "n_hh"),
        )

    def to_matrix(self) -> list[list[float]]:
        return [[float(self.n_ll), float(self.n_lh)], [float(self.n_hl), float(self.n_hh)]]

    def transposed(self) -> "ContingencyTable":
        """Swap the child and parent roles (mirror across the diagonal)."""
        return ContingencyTable(self.n_ll, self.n_hl, self.n_lh, self.n_hh, mode=self.mode)

    def scaled(self, factor: Count) -> "ContingencyTable":
        """Multiply every cell by ``factor > 0``; result is continuous-mode."""
        c = _exact(factor, "factor")
        if c == 0:
            raise ValueError("factor must be positive")
        ll, lh, hl, hh = self.exact_cells()
        return ContingencyTable(
            _simplify(ll * c), _simplify(lh * c), _simplify(hl * c), _simplify(hh * c),
            mode=Mode.CONTINUOUS,
        )

    @property
    def total(self) -> Count:
        return self.n_ll + self.n_lh + self.n_hl + self.n_hh

    def to_dict(self) -> dict:
        return {
            "n_ll": float(self.n_ll),
            "n_lh": float(self.n_lh),
            "n_hl": float(self.n_hl),
            "n_hh": float(self.n_hh),
            "mode": self.mode.value,
        }


@dataclass(frozen=True)
class TableMargins:
    """Row/column totals of a table plus the random-allocation quantities.

    ``q`` is the expected number of high-high pairs if credentials were
    allocated at random given the margins: ``n_h_row * n_h_col / n_total``.
    ``q_floor``/``q_ceil`` bracket it per the discretisation mode: floor
    and ceiling in integer mode, both equal to ``q`` in continuous mode.
    Values are exact (int or Fraction); use ``float()`` for display.
    """

    n_l_row: Exact  # young adults with low education
    n_h_row: Exact  # young adults with high education
    n_l_col: Exact  # young adults whose parent is low educated
    n_h_col: Exact  # young adults whose parent is high educated
    n_total: Exact
    q: Exact
    q_floor: Exact
    q_ceil: Exact
    mode: Mode = Mode.INTEGER

    @classmethod
    def from_totals(
        cls,
        n_l_row: Count,
        n_h_row: Count,
        n_l_col: Count,
        n_h_col: Count,
        mode: Mode | str = Mode.INTEGER,
    ) -> "TableMargins":
        """Build margins directly from the four totals.

        Argument order matches the (row low, row high, column low, column
        high) convention used throughout: young adults' totals first, then
        parents'.  Raises :class:`DegenerateMarginsError` if any total is
        zero and ``ValueError`` if the row and column sums disagree.
        """
        mode = Mode(mode)
        l_row = _exact(n_l_row, "n_l_row")
        h_row = _exact(n_h_row, "n_h_row")
        l_col = _exact(n_l_col, "n_l_col")
        h_col = _exact(n_h_col, "n_h_col")
        if min(l_row, h_row, l_col, h_col) == 0:
            raise DegenerateMarginsError(
                "margins are degenerate (a row or column total is 0): "
                f"rows ({n_l_row}, {n_h_row}), columns ({n_l_col}, {n_h_col})"
            )
        if l_row + h_row != l_col + h_col:
            raise ValueError(
                f"row totals sum to {l_row + h_row} but column totals to {l_col + h_col}"
            )
        if mode is Mode.INTEGER:
            for label, value in (
                ("n_l_row", l_row), ("n_h_row", h_row),
                ("n_l_col", l_col), ("n_h_col", h_col),
            ):
                if not _is_whole(value):
                    raise ValueError(f"integer-mode margin {label} must be whole, got {value}")
        total = _simplify(l_row + h_row)
        q = _simplify(Fraction(h_row) * Fraction(h_col) / Fraction(total))
        if mode is Mode.INTEGER:
            q_floor: Exact = math.floor(q)
            q_ceil: Exact = math.ceil(q)
        else:
            q_floor = q_ceil = q
        return cls(l_row, h_row, l_col, h_col, total, q, q_floor, q_ceil, mode)

    def as_tuple(self) -> tuple[Exact, Exact, Exact, Exact]:
        return (self.n_l_row, self.n_h_row, self.n_l_col, self.n_h_col)

    def to_dict(self) -> dict:
        return {
            "n_l_row": float(self.n_l_row),
            "n_h_row": float(self.n_h_row),
            "n_l_col": float(self.n_l_col),
            "n_h_col": float(self.n_h_col),
            "n_total": float(self.n_total),
            "q": float(self.q),
            "q_floor": float(self.q_floor),
            "q_ceil": float(self.q_ceil),
            "mode": self.mode.value,
        }


def margins(table: ContingencyTable) -> TableMargins:
    """Compute the margins and random-allocation quantities of a table.

    Raises :class:`DegenerateMarginsError` if any of the four margins is
    zero; the measures are not defined for degenerate education
    distributions.
    """
    ll, lh, hl, hh = table.exact_cells()
    return TableMargins.from_totals(
        _simplify(ll + lh), _simplify(hl + hh),
        _simplify(ll + hl), _simplify(lh + hh),
        mode=table.mode,
    )


def _determinant(table: ContingencyTable) -> Exact:
    ll, lh, hl, hh = table.exact_cells()
    return _simplify(hh * ll - lh * hl)


def _liu_lu_exact(table: ContingencyTable, m: TableMargins) -> Exact:
    """Both branches of the Liu-Lu measure on exact rationals."""
    hh = _exact(table.n_hh, "n_hh")
    if hh >= m.q:
        denom = min(m.n_h_row, m.n_h_col) - m.q_floor
        if denom == 0:
            raise UndefinedMeasureError(
                "high-association branch denominator is 0 "
                f"(min margin {min(m.n_h_row, m.n_h_col)} equals Q- {m.q_floor})"
            )
        return _simplify(Fraction(hh - m.q_floor) / Fraction(denom))
    floor_hh = max(0, m.n_h_row - m.n_l_col)
    denom = m.q_ceil - floor_hh
    if denom == 0:
        raise UndefinedMeasureError(
            f"low-association branch denominator is 0 (Q+ {m.q_ceil} equals "
            f"the lower feasibility bound {floor_hh})"
        )
    return _simplify(Fraction(hh - m.q_ceil) / Fraction(denom))


def liu_lu(table: ContingencyTable) -> float:
    """Liu-Lu relative mobility measure of a table, in [-1, 1].

    Above the random benchmark (``n_hh >= Q``) this is the share of the
    distance from the random to the maximally unequal allocation that the
    observed table has covered:

        (n_hh - Q-) / (min(n_h_row, n_h_col) - Q-)

    below it, the signed analogue over the distance from random down to
    the minimal feasible allocation:

        (n_hh - Q+) / (Q+ - max(0, n_h_row - n_l_col))

    In continuous mode ``Q-`` and ``Q+`` are both replaced by ``Q``.
    It equals 1 exactly on :func:`build_kp` output and 0 exactly on
    :func:`build_kr` output, and is invariant to margin changes along the
    benchmark interpolation family (see :mod:`mobimetrics.scenarios`).
    """
    return float(_liu_lu_exact(table, margins(table)))


def liu_lu_simplified(table: ContingencyTable) -> float:
    """Positive-association branch of :func:`liu_lu` (the Coleman index).

    Defined only when the observed high-high count reaches its random
    expectation (``n_hh >= Q``); raises
    :class:`BranchNotApplicableError` otherwise.  Where defined it equals
    :func:`liu_lu` and lies in [0, 1].
    """
    m = margins(table)
    hh = _exact(table.n_hh, "n_hh")
    if hh < m.q:
        raise BranchNotApplicableError(
            f"n_hh ({float(hh):g}) is below the random-allocation "
            f"expectation Q ({float(m.q):g})"
        )
    return float(_liu_lu_exact(table, m))


@dataclass(frozen=True)
class RegressionFit:
    """OLS fit of the child indicator on the parent indicator.

    ``beta`` is the intergenerational persistence coefficient; for binary
    indicators it equals the difference between the child's
    high-education rates under high- and low-educated parents, so
    ``beta`` lies in [-1, 1] and ``alpha`` (the low-educated-parent rate)
    in [0, 1].  ``residual_variance`` is the mean squared residual; it is
    None on fits reconstructed from serialized series, which do not carry
    it.
    """

    alpha: float
    beta: float
    residual_variance: float | None = None

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "residual_variance": self.residual_variance,
        }


def igpc(table: ContingencyTable) -> RegressionFit:
    """Intergenerational persistence coefficient of a table.

    OLS of the child's 0/1 high-education indicator on the parent's,
    computed in closed form from the table's sufficient statistics:
    ``beta = (n_hh - Q) * N / (n_h_col * n_l_col)`` and
    ``alpha = n_h_row / N - beta * n_h_col / N``.  Identical to running
    the regression on the fully expanded person-level data.

    Requires a non-degenerate parent margin (the regressor must vary);
    the child margin may be degenerate.
    """
    ll, lh, hl, hh = table.exact_cells()
    l_col = _simplify(ll + hl)
    h_col = _simplify(lh + hh)
    if l_col == 0 or h_col == 0:
        raise DegenerateMarginsError(
            "parent margin is degenerate (all parents in one education group); "
            "the regressor has zero variance"
        )
    h_row = _simplify(hl + hh)
    total = _simplify(ll + lh + hl + hh)
    det = _simplify(hh * ll - lh * hl)
    beta = Fraction(det) / Fraction(h_col * l_col)
    alpha = Fraction(h_row, 1) / total - beta * Fraction(h_col, 1) / total
    # Mean squared residual: within-parent-group Bernoulli variances,
    # weighted by group size.
    p_low = Fraction(hl, 1) / l_col
    p_high = Fraction(hh, 1) / h_col
    rss = l_col * p_low * (1 - p_low) + h_col * p_high * (1 - p_high)
    return RegressionFit(
        alpha=float(alpha),
        beta=float(beta),
        residual_variance=float(Fraction(rss) / Fraction(total)),
    )


def phi(table: ContingencyTable) -> float:
    """Phi coefficient: Pearson correlation of the two 0/1 indicators.

    Equals the table determinant over the geometric mean of the margin
    products, ``(n_hh*n_ll - n_lh*n_hl) / sqrt(n_h_row*n_l_row*n_h_col*n_l_col)``,
    and lies in [-1, 1].  Unlike the persistence coefficient it is
    symmetric in the child and parent roles.
    """
    m = margins(table)
    det = _determinant(table)
    if det == 0:
        return 0.0
    denom = math.sqrt(float(m.n_h_row * m.n_l_row * m.n_h_col * m.n_l_col))
    return max(-1.0, min(1.0, float(det) / denom))


@dataclass(frozen=True)
class MeasureSet:
    """All measures of one table.

    ``liu_lu_simplified`` is present only on the positive-association
    branch (``n_hh >= Q``).  All entries share the sign of the table
    determinant ``n_hh*n_ll - n_lh*n_hl``.
    """

    liu_lu: float
    igpc: RegressionFit
    phi: float
    liu_lu_simplified: float | None = None

    def to_dict(self) -> dict:
        return {
            "liu_lu": self.liu_lu,
            "liu_lu_simplified": self.liu_lu_simplified,
            "igpc": self.igpc.to_dict(),
            "phi": self.phi,
        }


def measure_set(table: ContingencyTable) -> MeasureSet:
    """Bundle all measures of one table, computed once."""
    m = margins(table)
    ll_value = float(_liu_lu_exact(table, m))
    simplified = ll_value if _exact(table.n_hh, "n_hh") >= m.q else None
    return MeasureSet(
        liu_lu=ll_value,
        igpc=igpc(table),
        phi=phi(table),
        liu_lu_simplified=simplified,
    )


def feasible_hh_range(m: TableMargins) -> tuple[Exact, Exact]:
    """Smallest and largest high-high cell compatible with the margins."""
    return (_simplify(max(0, m.n_h_row - m.n_l_col)), _simplify(min(m.n_h_row, m.n_h_col)))


def table_from_margins(
    m: TableMargins, n_hh: Count, mode: Mode | str | None = None
) -> ContingencyTable:
    """Reconstruct the unique table with margins ``m`` and the given ``n_hh``.

    Raises ``ValueError`` if ``n_hh`` is outside the feasible range.
    """
    hh = _exact(n_hh, "n_hh")
    lo, hi = feasible_hh_range(m)
    if not lo <= hh <= hi:
        raise ValueError(f"n_hh={n_hh} outside feasible range [{lo}, {hi}] for these margins")
    hl = _simplify(m.n_h_row - hh)
    lh = _simplify(m.n_h_col - hh)
    ll = _simplify(m.n_l_row - lh)
    return ContingencyTable(ll, lh, hl, hh, mode=Mode(mode) if mode is not None else m.mode)


def build_kp(m: TableMargins) -> ContingencyTable:
    """Maximally unequal benchmark table for the given margins.

    Children of low-educated parents obtain a degree only once every
    child of a high-educated parent has one, so the high-high cell is
    pushed to min(n_h_row, n_h_col).  The Liu-Lu measure of this table is
    exactly 1.
    """
    n_ll = min(m.n_l_row, m.n_l_col)
    n_hl = max(0, m.n_h_row - m.n_h_col)
    n_lh = max(0, m.n_h_col - m.n_h_row)
    n_hh = min(m.n_h_row, m.n_h_col)
    return ContingencyTable(
        _simplify(n_ll), _simplify(n_lh), _simplify(n_hl), _simplify(n_hh), mode=m.mode
    )


def build_kr(m: TableMargins) -> ContingencyTable:
    """Random-allocation benchmark table for the given margins.

    Cell (x, y) holds ``row_x * col_y / N``; cells are generally
    fractional, so the result is always continuous-mode.  The Liu-Lu
    measure of this table is exactly 0 (continuous mode).
    """
    total = Fraction(m.n_total)
    return ContingencyTable(
        _simplify(Fraction(m.n_l_row) * Fraction(m.n_l_col) / total),
        _simplify(Fraction(m.n_l_row) * Fraction(m.n_h_col) / total),
        _simplify(Fraction(m.n_h_row) * Fraction(m.n_l_col) / total),
        _simplify(Fraction(m.n_h_row) * Fraction(m.n_h_col) / total),
        mode=Mode.CONTINUOUS,
    )
