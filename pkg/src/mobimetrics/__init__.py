"""mobimetrics: marginal-robust intergenerational mobility measurement.

Computes the Liu-Lu relative mobility measure and two conventional
measures (OLS persistence coefficient, phi correlation) from 2x2
young-adult x parent education tables, runs a census-microdata pipeline
producing per-year measure series, and builds benchmark counterfactuals
showing which measures survive shifts in the marginal education
distributions.
"""

from .errors import (
    BranchNotApplicableError,
    DegenerateMarginsError,
    DegenerateRegressorError,
    EmptyTableError,
    EnumerationTooLargeError,
    MobilityError,
    ParseError,
    SchemaError,
    UndefinedMeasureError,
)
from .measures import (
    ContingencyTable,
    MeasureSet,
    Mode,
    RegressionFit,
    TableMargins,
    build_kp,
    build_kr,
    feasible_hh_range,
    igpc,
    liu_lu,
    liu_lu_simplified,
    margins,
    measure_set,
    phi,
    table_from_margins,
)
from .scenarios import (
    DemoResult,
    FeasibleEntry,
    ScenarioSpec,
    enumerate_feasible,
    expand_table,
    interpolate,
    ols_oracle,
    shift_marginals_demo,
)
from .report import (
    CSV_COLUMNS,
    PARENT_LINES,
    RankingReport,
    RankingRow,
    SeriesPoint,
    detect_reversals,
    emit_series,
    load_series,
)
from .ingest import (
    DEFAULT_CLASSIFICATIONS,
    DEFAULT_CODE_TO_LEVEL,
    IngestReport,
    ManifestEntry,
    ParseIssue,
    ParseResult,
    PersonRecord,
    PipelineConfig,
    PipelineResult,
    RecodeConfig,
    SchemaConfig,
    binarize,
    build_table,
    cohort_filter,
    load_config,
    load_manifest,
    parse_microdata,
    recode,
    run_pipeline,
)
from .cli import cli_dispatch

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "MobilityError",
    "DegenerateMarginsError",
    "UndefinedMeasureError",
    "BranchNotApplicableError",
    "DegenerateRegressorError",
    "EnumerationTooLargeError",
    "EmptyTableError",
    "SchemaError",
    "ParseError",
    # measures
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
    # scenarios
    "ScenarioSpec",
    "DemoResult",
    "FeasibleEntry",
    "interpolate",
    "shift_marginals_demo",
    "enumerate_feasible",
    "ols_oracle",
    "expand_table",
    # series / reports
    "PARENT_LINES",
    "CSV_COLUMNS",
    "SeriesPoint",
    "RankingRow",
    "RankingReport",
    "detect_reversals",
    "emit_series",
    "load_series",
    # ingest
    "PersonRecord",
    "RecodeConfig",
    "SchemaConfig",
    "IngestReport",
    "ParseIssue",
    "ParseResult",
    "ManifestEntry",
    "PipelineConfig",
    "PipelineResult",
    "DEFAULT_CODE_TO_LEVEL",
    "DEFAULT_CLASSIFICATIONS",
    "parse_microdata",
    "recode",
    "binarize",
    "cohort_filter",
    "build_table",
    "run_pipeline",
    "load_config",
    "load_manifest",
    # cli
    "cli_dispatch",
]
