"""Benchmark interpolation, counterfactual demos, and brute-force oracles.

The one-parameter family ``lam * K_max + (1 - lam) * K_random`` connects
the two benchmark tables of :mod:`mobimetrics.measures` for a fixed set
of margins.  Along it the Liu-Lu measure equals ``lam`` exactly, for any
margins, which makes the family the natural test bed for the claim that
the measure controls for marginal (educational-expansion) variation: the
persistence coefficient and the phi correlation both move when the
margins move at fixed ``lam``, the Liu-Lu measure does not.

Also here: an exhaustive enumerator of all integer tables with given
margins and a textbook weighted OLS, both used as independent oracles by
the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DegenerateRegressorError, EnumerationTooLargeError
from .measures import (
    ContingencyTable,
    MeasureSet,
    Mode,
    RegressionFit,
    TableMargins,
    _exact,
    _is_whole,
    _simplify,
    build_kp,
    build_kr,
    feasible_hh_range,
    measure_set,
    table_from_margins,
)

__all__ = [
    "ScenarioSpec",
    "DemoResult",
    "FeasibleEntry",
    "interpolate",
    "shift_marginals_demo",
    "enumerate_feasible",
    "ols_oracle",
    "expand_table",
    "ENUMERATION_GUARD",
]

#: Maximum feasible-range width enumerate_feasible will walk.
ENUMERATION_GUARD = 10_000


@dataclass(frozen=True)
class ScenarioSpec:
    """A point on the benchmark interpolation family.

    ``lam`` is the weight on the maximal-inequality benchmark: 0 gives the
    random-allocation table, 1 the maximally unequal one.
    """

    margins: TableMargins
    lam: float
    mode: Mode = Mode.CONTINUOUS

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", Mode(self.mode))
        if not (isinstance(self.lam, (int, float)) and 0 <= self.lam <= 1):
            raise ValueError(f"lam must lie in [0, 1], got {self.lam!r}")


def interpolate(spec: ScenarioSpec) -> ContingencyTable:
    """Table at position ``lam`` between the random and maximal benchmarks.

    In continuous mode the cells are the exact convex combination
    ``lam * K_max + (1 - lam) * K_random`` and the margins are preserved
    exactly.  In integer mode the free high-high cell is rounded to the
    nearest integer (ties round down) and the remaining cells are filled
    in from the margins, so the margins are again preserved exactly and
    all rounding is confined to one cell.
    """
    m = spec.margins
    lam = Fraction(spec.lam)
    kp = build_kp(m)
    if spec.mode is Mode.INTEGER:
        if not all(_is_whole(_exact(v, "margin")) for v in m.as_tuple()):
            raise ValueError("integer-mode interpolation needs integral margins")
        target = lam * _exact(kp.n_hh, "n_hh") + (1 - lam) * m.q
        n_hh = math.ceil(target - Fraction(1, 2))  # nearest integer, ties down
        return table_from_margins(m, n_hh, mode=Mode.INTEGER)
    kr = build_kr(m)
    cells = [
        _simplify(lam * _exact(p, "cell") + (1 - lam) * _exact(r, "cell"))
        for p, r in zip(kp.exact_cells(), kr.exact_cells())
    ]
    return ContingencyTable(*cells, mode=Mode.CONTINUOUS)


@dataclass(frozen=True)
class DemoResult:
    """Same interpolation position evaluated under two margin sets."""

    table_a: ContingencyTable
    table_b: ContingencyTable
    measures_a: MeasureSet
    measures_b: MeasureSet

    def deltas(self) -> dict[str, float]:
        """Absolute measure differences between the two margin sets."""
        return {
            "liu_lu": abs(self.measures_a.liu_lu - self.measures_b.liu_lu),
            "igpc_beta": abs(self.measures_a.igpc.beta - self.measures_b.igpc.beta),
            "phi": abs(self.measures_a.phi - self.measures_b.phi),
        }

    def to_dict(self) -> dict:
        return {
            "table_a": self.table_a.to_dict(),
            "table_b": self.table_b.to_dict(),
            "measures_a": self.measures_a.to_dict(),
            "measures_b": self.measures_b.to_dict(),
            "deltas": self.deltas(),
        }


def shift_marginals_demo(
    lam: float, margins_a: TableMargins, margins_b: TableMargins, mode: Mode | str = Mode.CONTINUOUS
) -> DemoResult:
    """Move the margins while holding the interpolation position fixed.

    Builds the ``lam``-interpolated table under both margin sets and
    returns all measures side by side.  In continuous mode the two Liu-Lu
    values agree exactly whatever the margin shift; the persistence
    coefficient and phi generally do not, which is the point being
    demonstrated.  In integer mode agreement holds up to the one-cell
    rounding bound.
    """
    mode = Mode(mode)
    table_a = interpolate(ScenarioSpec(margins_a, lam, mode))
    table_b = interpolate(ScenarioSpec(margins_b, lam, mode))
    return DemoResult(
        table_a=table_a,
        table_b=table_b,
        measures_a=measure_set(table_a),
        measures_b=measure_set(table_b),
    )


@dataclass(frozen=True)
class FeasibleEntry:
    """One integral table compatible with a margin set, with its measures."""

    n_hh: int
    table: ContingencyTable
    measures: MeasureSet


def enumerate_feasible(m: TableMargins) -> list[FeasibleEntry]:
    """All integral tables with the given margins, in increasing n_hh order.

    A 2x2 table is pinned down by its margins plus the high-high cell, so
    the feasible set is a walk of ``n_hh`` over
    ``[max(0, n_h_row - n_l_col), min(n_h_row, n_h_col)]``.  Margins must
    be integral and non-degenerate.  Raises
    :class:`EnumerationTooLargeError` when the range is wider than
    ``ENUMERATION_GUARD``.
    """
    if not all(_is_whole(_exact(v, "margin")) for v in m.as_tuple()):
        raise ValueError("enumeration needs integral margins")
    lo, hi = feasible_hh_range(m)
    if hi - lo > ENUMERATION_GUARD:
        raise EnumerationTooLargeError(
            f"feasible range spans {hi - lo + 1} tables, guard is {ENUMERATION_GUARD + 1}"
        )
    entries = []
    for n_hh in range(int(lo), int(hi) + 1):
        table = table_from_margins(m, n_hh, mode=Mode.INTEGER)
        entries.append(FeasibleEntry(n_hh=n_hh, table=table, measures=measure_set(table)))
    return entries


def expand_table(table: ContingencyTable) -> list[tuple[int, int, float]]:
    """Person-level (parent, child, weight) rows equivalent to a table.

    Integer tables expand to one unit-weight row per person; continuous
    tables to one weighted row per cell.  Used to cross-check the
    closed-form measures against person-level computations.
    """
    cells = [
        (0, 0, table.n_ll),  # child low,  parent low
        (1, 0, table.n_lh),  # child low,  parent high
        (0, 1, table.n_hl),  # child high, parent low
        (1, 1, table.n_hh),  # child high, parent high
    ]
    rows: list[tuple[int, int, float]] = []
    for x, y, count in cells:
        if table.mode is Mode.INTEGER:
            rows.extend((x, y, 1.0) for _ in range(int(count)))
        elif count > 0:
            rows.append((x, y, float(count)))
    return rows


def ols_oracle(pairs: Iterable[Sequence[float]]) -> RegressionFit:
    """Textbook weighted OLS of y on x via accumulated moments.

    ``pairs`` yields (x, y, weight) triples; weight defaults to 1 when a
    pair has only two entries.  Serves as the independent reference for
    the closed-form persistence coefficient.  Raises
    :class:`DegenerateRegressorError` when x does not vary.
    """
    sw = swx = swy = swxx = swxy = swyy = 0.0
    for pair in pairs:
        x, y = float(pair[0]), float(pair[1])
        w = float(pair[2]) if len(pair) > 2 else 1.0
        sw += w
        swx += w * x
        swy += w * y
        swxx += w * x * x
        swxy += w * x * y
        swyy += w * y * y
    if sw <= 0:
        raise DegenerateRegressorError("no observations (total weight is 0)")
    mean_x = swx / sw
    mean_y = swy / sw
    var_x = swxx / sw - mean_x * mean_x
    if var_x <= 0:
        raise DegenerateRegressorError("regressor has zero variance")
    cov_xy = swxy / sw - mean_x * mean_y
    beta = cov_xy / var_x
    alpha = mean_y - beta * mean_x
    rss = (
        swyy
        - 2 * alpha * swy
        - 2 * beta * swxy
        + alpha * alpha * sw
        + 2 * alpha * beta * swx
        + beta * beta * swxx
    )
    return RegressionFit(alpha=alpha, beta=beta, residual_variance=max(0.0, rss / sw))
