"""Tests for microdata parsing, recoding, aggregation, and the pipeline."""

import dataclasses
import io
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mobimetrics import (
    ContingencyTable,
    EmptyTableError,
    IngestReport,
    ManifestEntry,
    Mode,
    ParseError,
    PersonRecord,
    PipelineConfig,
    RecodeConfig,
    SchemaConfig,
    SchemaError,
    binarize,
    build_table,
    cohort_filter,
    emit_series,
    load_config,
    load_manifest,
    measure_set,
    parse_microdata,
    recode,
    run_pipeline,
)

HEADER = "year,age,edattain,edattain_mom,edattain_pop,weight\n"


def parse_text(text, **kwargs):
    return parse_microdata(io.StringIO(text), **kwargs)


# ------------------------------------------------------------------ #
# Parsing
# ------------------------------------------------------------------ #


class TestParseMicrodata:
    def test_field_mapping(self):
        result = parse_text(HEADER + "2010,35,4,3,2,1.0\n")
        assert result.records == (
            PersonRecord(year=2010, age=35, edattain=4, edattain_mom=3, edattain_pop=2, weight=1.0),
        )
        assert result.rows_read == 1
        assert result.issues == ()

    def test_empty_file_with_header(self):
        result = parse_text(HEADER)
        assert result.records == ()
        assert result.rows_read == 0

    def test_weight_column_optional(self):
        result = parse_text("year,age,edattain,edattain_mom,edattain_pop\n2010,35,4,3,2\n")
        assert result.records[0].weight == 1.0

    def test_malformed_cell_is_collected_not_fatal(self):
        text = HEADER + "2010,35,x,3,2,1.0\n2010,36,4,3,2,1.0\n"
        result = parse_text(text)
        assert len(result.records) == 1
        assert result.records[0].age == 36
        assert len(result.issues) == 1
        assert result.issues[0].line == 2
        assert "edattain" in result.issues[0].message

    def test_short_row_is_an_issue(self):
        result = parse_text(HEADER + "2010,35\n")
        assert len(result.issues) == 1

    def test_non_positive_weight_is_an_issue(self):
        result = parse_text(HEADER + "2010,35,4,3,2,0.0\n")
        assert len(result.issues) == 1

    def test_error_budget(self):
        bad_rows = "".join(f"2010,{age},x,3,2,1.0\n" for age in (30, 31, 32))
        with pytest.raises(ParseError, match="malformed rows"):
            parse_text(HEADER + bad_rows, max_errors=2)

    def test_missing_required_column(self):
        with pytest.raises(SchemaError, match="edattain_pop"):
            parse_text("year,age,edattain,edattain_mom\n2010,35,4,3\n")

    def test_totally_empty_file(self):
        with pytest.raises(SchemaError, match="no header"):
            parse_text("")

    def test_custom_delimiter(self):
        text = HEADER.replace(",", ";") + "2010;35;4;3;2;1.0\n"
        result = parse_text(text, schema=SchemaConfig(delimiter=";"))
        assert result.records[0].edattain == 4


# ------------------------------------------------------------------ #
# Recode / binarize / cohort
# ------------------------------------------------------------------ #


class TestRecodeAndBinarize:
    def test_default_map_is_identity_on_levels(self):
        config = RecodeConfig()
        assert recode(4, config) == 4
        assert recode(1, config) == 1

    def test_missing_codes(self):
        config = RecodeConfig()
        assert recode(0, config) is None  # not in universe
        assert recode(9, config) is None  # missing
        assert recode(99, config) is None  # unmapped

    def test_high_school_threshold(self):
        assert binarize(3, 3) is True  # completed high school is high
        assert binarize(2, 3) is False

    def test_college_threshold(self):
        assert binarize(3, 4) is False  # high school is low for college line
        assert binarize(4, 4) is True

    def test_level_4_high_everywhere(self):
        assert binarize(4, 3) and binarize(4, 4)

    def test_bad_level_rejected(self):
        with pytest.raises(ValueError):
            binarize(5, 3)

    def test_threshold_validation(self):
        with pytest.raises(ValueError, match="threshold"):
            RecodeConfig(classifications={"strange": 1})

    def test_age_bounds_validation(self):
        with pytest.raises(ValueError, match="cohort_age_min"):
            RecodeConfig(cohort_age_min=41, cohort_age_max=40)


class TestCohortFilter:
    def record(self, year=2010, age=35):
        return PersonRecord(year=year, age=age, edattain=4, edattain_mom=3, edattain_pop=2)

    def test_bounds_inclusive(self):
        records = [self.record(age=a) for a in (29, 30, 35, 40, 41)]
        kept = cohort_filter(records, 2010)
        assert [r.age for r in kept] == [30, 35, 40]

    def test_year_mismatch_dropped(self):
        records = [self.record(year=2010), self.record(year=2011)]
        assert len(cohort_filter(records, 2010)) == 1

    def test_custom_bounds(self):
        config = RecodeConfig(cohort_age_min=25, cohort_age_max=35)
        assert len(cohort_filter([self.record(age=26)], 2010, config)) == 1


# ------------------------------------------------------------------ #
# Table building
# ------------------------------------------------------------------ #


def make_records(levels, weight=1.0):
    """Records with (child, mom) level pairs; father fixed at level 2."""
    return [
        PersonRecord(year=2010, age=35, edattain=c, edattain_mom=m, edattain_pop=2, weight=weight)
        for c, m in levels
    ]


class TestBuildTable:
    CORNERS = [(4, 4), (4, 1), (1, 4), (1, 1)]

    def test_one_record_per_cell_college(self):
        table = build_table(make_records(self.CORNERS), "mother", "college")
        assert table.to_matrix() == [[1, 1], [1, 1]]
        assert table.mode is Mode.INTEGER

    def test_same_cells_under_high_school(self):
        # levels 1 and 4 straddle both thresholds identically
        table = build_table(make_records(self.CORNERS), "mother", "high_school")
        assert table.to_matrix() == [[1, 1], [1, 1]]

    def test_weighted_records_scale_the_table(self):
        table = build_table(
            make_records(self.CORNERS, weight=2.0), "mother", "college", weighting="weights"
        )
        assert table.to_matrix() == [[2, 2], [2, 2]]
        assert table.mode is Mode.CONTINUOUS

    def test_counts_mode_ignores_weights(self):
        table = build_table(make_records(self.CORNERS, weight=2.0), "mother", "college")
        assert table.to_matrix() == [[1, 1], [1, 1]]

    def test_father_line_uses_pop_column(self):
        table = build_table(make_records(self.CORNERS), "father", "high_school")
        # all fathers are level 2 (low); children split 2/2
        assert table.to_matrix() == [[2, 0], [2, 0]]

    def test_missing_parent_dropped_and_tallied(self):
        report = IngestReport()
        records = make_records(self.CORNERS) + [
            PersonRecord(year=2010, age=35, edattain=4, edattain_mom=0, edattain_pop=2)
        ]
        table = build_table(records, "mother", "college", report=report)
        assert float(table.total) == 4.0
        assert report.rows_dropped_missing["edattain_mom"] == 1

    def test_missing_child_dropped_and_tallied(self):
        report = IngestReport()
        records = [PersonRecord(year=2010, age=35, edattain=9, edattain_mom=3, edattain_pop=2)]
        with pytest.raises(EmptyTableError):
            build_table(records, "mother", "college", report=report)
        assert report.rows_dropped_missing["edattain"] == 1

    def test_unknown_classification(self):
        with pytest.raises(ValueError, match="unknown classification"):
            build_table(make_records(self.CORNERS), "mother", "phd")

    def test_unknown_parent_line(self):
        with pytest.raises(ValueError, match="parent_line"):
            build_table(make_records(self.CORNERS), "guardian", "college")

    def test_degenerate_table_is_returned_not_raised(self):
        table = build_table(make_records([(1, 1), (1, 2)]), "mother", "college")
        assert table.to_matrix() == [[2, 0], [0, 0]]

    @settings(max_examples=60)
    @given(
        st.lists(
            st.tuples(st.integers(1, 4), st.integers(1, 4)), min_size=1, max_size=40
        )
    )
    def test_classification_nesting(self, levels):
        """The college high margin can never exceed the high-school one."""
        records = make_records(levels)
        tables = {}
        for name in ("high_school", "college"):
            tables[name] = build_table(records, "mother", name)
        hs, col = tables["high_school"], tables["college"]
        assert col.n_lh + col.n_hh <= hs.n_lh + hs.n_hh  # parent high margin
        assert col.n_hl + col.n_hh <= hs.n_hl + hs.n_hh  # child high margin


# ------------------------------------------------------------------ #
# Config and manifest loading
# ------------------------------------------------------------------ #


class TestConfigLoading:
    def test_manifest_paths_resolve_relative(self, tmp_path):
        (tmp_path / "m.json").write_text(json.dumps({"files": [{"year": 1960, "path": "a.csv"}]}))
        entries = load_manifest(tmp_path / "m.json")
        assert entries == [ManifestEntry(year=1960, path=tmp_path / "a.csv")]

    def test_bare_list_manifest(self, tmp_path):
        (tmp_path / "m.json").write_text(json.dumps([{"year": 1960, "path": "/tmp/a.csv"}]))
        assert load_manifest(tmp_path / "m.json")[0].year == 1960

    def test_malformed_manifest(self, tmp_path):
        (tmp_path / "m.json").write_text(json.dumps({"files": [{"year": 1960}]}))
        with pytest.raises(SchemaError, match="malformed"):
            load_manifest(tmp_path / "m.json")

    def test_config_round_trip(self, tmp_path):
        (tmp_path / "c.json").write_text(
            json.dumps(
                {
                    "code_to_level": {"0": None, "1": 1, "2": 2, "3": 3, "4": 4, "9": None},
                    "classifications": {"high_school": 3, "college": 4},
                    "cohort_age_min": 28,
                    "cohort_age_max": 42,
                    "weighting": "weights",
                    "delimiter": ";",
                }
            )
        )
        config = load_config(tmp_path / "c.json")
        assert config.recode.cohort_age_min == 28
        assert config.weighting == "weights"
        assert config.schema.delimiter == ";"
        assert config.recode.code_to_level[9] is None

    def test_unknown_config_key_rejected(self, tmp_path):
        (tmp_path / "c.json").write_text(json.dumps({"weigthing": "counts"}))
        with pytest.raises(SchemaError, match="unknown keys"):
            load_config(tmp_path / "c.json")

    def test_embedded_manifest(self, tmp_path):
        (tmp_path / "c.json").write_text(
            json.dumps({"manifest": [{"year": 1960, "path": "a.csv"}]})
        )
        config = load_config(tmp_path / "c.json")
        assert config.manifest[0].path == tmp_path / "a.csv"


# ------------------------------------------------------------------ #
# Pipeline
# ------------------------------------------------------------------ #


def write_year_csv(path, rows):
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(HEADER)
        for row in rows:
            handle.write(",".join(str(v) for v in row) + "\n")


class TestRunPipeline:
    def test_fixture_run_shape_and_order(self, census_manifest_path, census_config_path):
        result = run_pipeline(
            load_manifest(census_manifest_path), load_config(census_config_path)
        )
        assert len(result.points) == 32
        first_four = [(p.parent_line, p.classification) for p in result.points[:4]]
        assert first_four == [
            ("mother", "high_school"),
            ("mother", "college"),
            ("father", "high_school"),
            ("father", "college"),
        ]
        years = [p.year for p in result.points[::4]]
        assert years == [1960, 1970, 1980, 1990, 2000, 2005, 2010, 2015]
        assert not any(p.is_gap() for p in result.points)

    def test_fixture_measures_match_planted_tables(
        self, census_manifest_path, census_config_path, planted
    ):
        result = run_pipeline(
            load_manifest(census_manifest_path), load_config(census_config_path)
        )
        for p in result.points:
            cells = planted["tables"][str(p.year)][p.parent_line][p.classification]["counts"]
            expected = measure_set(
                ContingencyTable(cells["n_ll"], cells["n_lh"], cells["n_hl"], cells["n_hh"])
            )
            assert p.measures.liu_lu == pytest.approx(expected.liu_lu, abs=1e-12)
            assert p.measures.igpc.beta == pytest.approx(expected.igpc.beta, abs=1e-12)
            assert p.measures.phi == pytest.approx(expected.phi, abs=1e-12)
            assert p.n_effective == float(sum(cells.values()))

    def test_weighted_mode_matches_planted_weighted_cells(
        self, census_manifest_path, census_config_path, planted
    ):
        config = dataclasses.replace(load_config(census_config_path), weighting="weights")
        result = run_pipeline(load_manifest(census_manifest_path), config)
        for p in result.points[:8]:
            cells = planted["tables"][str(p.year)][p.parent_line][p.classification]["weighted"]
            expected = measure_set(
                ContingencyTable(
                    cells["n_ll"], cells["n_lh"], cells["n_hl"], cells["n_hh"],
                    mode=Mode.CONTINUOUS,
                )
            )
            assert p.measures.liu_lu == pytest.approx(expected.liu_lu, abs=1e-12)

    def test_conservation_per_table(
        self, census_manifest_path, census_config_path, planted
    ):
        """cells + listwise drops = cohort rows, for each parent line."""
        result = run_pipeline(
            load_manifest(census_manifest_path), load_config(census_config_path)
        )
        for p in result.points:
            year = planted["tables"][str(p.year)]
            drops = year["drops"]
            parent_column = "edattain_mom" if p.parent_line == "mother" else "edattain_pop"
            assert p.n_effective + drops["edattain"] + drops[parent_column] == year["cohort_rows"]

    def test_report_counters(self, census_manifest_path, census_config_path, planted):
        result = run_pipeline(
            load_manifest(census_manifest_path), load_config(census_config_path)
        )
        report = result.report
        assert report.rows_read == sum(
            planted["tables"][str(y)]["rows_in_file"] for y in planted["years"]
        )
        assert report.rows_in_cohort == sum(
            planted["tables"][str(y)]["cohort_rows"] for y in planted["years"]
        )
        assert report.tables_built == 32
        for column in ("edattain", "edattain_mom", "edattain_pop"):
            assert report.rows_dropped_missing[column] == sum(
                planted["tables"][str(y)]["drops"][column] for y in planted["years"]
            )

    def test_determinism_byte_identical(self, census_manifest_path, census_config_path):
        manifest = load_manifest(census_manifest_path)
        config = load_config(census_config_path)
        first = emit_series(run_pipeline(manifest, config).points, "csv")
        second = emit_series(run_pipeline(manifest, config).points, "csv")
        assert first == second

    def test_thread_cap_respected_and_equivalent(
        self, census_manifest_path, census_config_path, monkeypatch
    ):
        manifest = load_manifest(census_manifest_path)
        config = load_config(census_config_path)
        baseline = run_pipeline(manifest, config).points
        monkeypatch.setenv("MOBIMETRICS_THREADS", "1")
        assert run_pipeline(manifest, config).points == baseline
        monkeypatch.setenv("MOBIMETRICS_THREADS", "3")
        assert run_pipeline(manifest, config).points == baseline
        monkeypatch.setenv("MOBIMETRICS_THREADS", "zebra")
        with pytest.raises(ValueError, match="MOBIMETRICS_THREADS"):
            run_pipeline(manifest, config)

    def test_degenerate_year_becomes_gap(self, tmp_path):
        # every parent is low educated: college tables lose the parent-high margin
        rows = [(2010, 35, 4, 2, 2, 1.0), (2010, 36, 1, 1, 1, 1.0), (2010, 37, 4, 2, 1, 1.0)]
        path = tmp_path / "census_2010.csv"
        write_year_csv(path, rows)
        result = run_pipeline([ManifestEntry(year=2010, path=path)], PipelineConfig())
        by_cell = {(p.parent_line, p.classification): p for p in result.points}
        assert by_cell[("mother", "college")].gap_reason == "DegenerateMargins"
        assert by_cell[("mother", "college")].n_effective == 3.0
        assert len(result.points) == 4

    def test_unusable_year_becomes_empty_table_gap(self, tmp_path):
        path = tmp_path / "census_2010.csv"
        write_year_csv(path, [(2010, 35, 9, 2, 2, 1.0)])
        result = run_pipeline([ManifestEntry(year=2010, path=path)], PipelineConfig())
        assert all(p.gap_reason == "EmptyTable" for p in result.points)

    def test_schema_problem_becomes_year_gaps(self, tmp_path):
        path = tmp_path / "census_2010.csv"
        path.write_text("year,age\n2010,35\n")
        result = run_pipeline([ManifestEntry(year=2010, path=path)], PipelineConfig())
        assert len(result.points) == 4
        assert all(p.gap_reason == "Schema" for p in result.points)

    def test_missing_file_fails_fast(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            run_pipeline([ManifestEntry(year=2010, path=tmp_path / "nope.csv")], PipelineConfig())

    def test_no_manifest_anywhere(self):
        with pytest.raises(ValueError, match="manifest"):
            run_pipeline(None, PipelineConfig())
