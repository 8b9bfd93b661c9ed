#!/usr/bin/env python3
"""Regenerate the bundled synthetic census extracts.

Writes one CSV per census year plus manifest.json, config.json, and
planted_counts.json into data/synthetic_census/.  The planted-counts file
is the ground truth the test suite checks the pipeline against: while
emitting rows the generator independently tallies, for every
(year, parent line, classification), the 2x2 cell counts (unweighted and
weighted) and the listwise-deletion drops, using nothing but the
documented threshold rules.

The data are synthetic but shaped like the real thing: education levels
drift upward across years (educational expansion), children's levels are
positively associated with their parents', a few percent of parent codes
are missing, and each file carries some rows outside the 30-40 cohort and
a few with a mismatched census year, all of which the pipeline must drop.

Deterministic: fixed seed, stable row order.  Run from the repo root:

    python data/make_synthetic_census.py
"""

from __future__ import annotations

import json
import random
from pathlib import Path

OUT_DIR = Path(__file__).resolve().parent / "synthetic_census"
SEED = 20250810

YEARS = [1960, 1970, 1980, 1990, 2000, 2005, 2010, 2015]
COHORT_ROWS = 1250
OUT_OF_AGE_ROWS = 40
WRONG_YEAR_ROWS = 5

# code -> ordinal level; 0 and 9 are missing
CODE_TO_LEVEL = {0: None, 1: 1, 2: 2, 3: 3, 4: 4, 9: None}
CLASSIFICATIONS = {"high_school": 3, "college": 4}
PARENT_COLUMNS = {"mother": "edattain_mom", "father": "edattain_pop"}
WEIGHTS = [0.5, 1.0, 1.0, 1.5, 2.0, 2.5]  # dyadic, so weighted sums are exact

CELL_KEYS = ("n_ll", "n_lh", "n_hl", "n_hh")


def parent_level_weights(year_index: int) -> list[float]:
    """Parent attainment distribution, expanding over the decades."""
    t = year_index / (len(YEARS) - 1)
    return [
        1.8 - 1.3 * t,  # below primary
        1.6 - 0.5 * t,  # primary
        0.9 + 1.0 * t,  # high school
        0.25 + 0.9 * t,  # college
    ]


def child_base_weights(year_index: int) -> list[float]:
    """Child attainment distribution; expands faster than the parents'."""
    t = year_index / (len(YEARS) - 1)
    return [
        1.1 - 0.9 * t,
        1.5 - 0.8 * t,
        1.3 + 0.9 * t,
        0.5 + 1.3 * t,
    ]


def draw_triple(rng: random.Random, year_index: int) -> tuple[int, int, int]:
    """(child, mom, pop) attainment levels with positive dependence."""
    parent_w = parent_level_weights(year_index)
    mom = rng.choices([1, 2, 3, 4], weights=parent_w)[0]
    # fathers track mothers (educational homogamy), with noise
    pop = mom if rng.random() < 0.55 else rng.choices([1, 2, 3, 4], weights=parent_w)[0]
    anchor = max(mom, pop)
    if rng.random() < 0.38:
        child = min(4, anchor + (1 if rng.random() < 0.3 else 0))
    else:
        child = rng.choices([1, 2, 3, 4], weights=child_base_weights(year_index))[0]
    return child, mom, pop


def maybe_missing(rng: random.Random, code: int, rate: float) -> int:
    if rng.random() < rate:
        return rng.choice([0, 9])
    return code


def blank_cells() -> dict:
    return {key: 0 for key in CELL_KEYS}


def cell_key(child_high: bool, parent_high: bool) -> str:
    return f"n_{'h' if child_high else 'l'}{'h' if parent_high else 'l'}"


def tally(tables: dict, row: dict, weight: float) -> None:
    """Independent re-derivation of the planted tables for one cohort row."""
    child_level = CODE_TO_LEVEL.get(row["edattain"])
    if child_level is None:
        tables["drops"]["edattain"] += 1
        return
    for parent, column in PARENT_COLUMNS.items():
        parent_level = CODE_TO_LEVEL.get(row[column])
        if parent_level is None:
            tables["drops"][column] += 1
            continue
        for name, threshold in CLASSIFICATIONS.items():
            key = cell_key(child_level >= threshold, parent_level >= threshold)
            tables[parent][name]["counts"][key] += 1
            tables[parent][name]["weighted"][key] += weight


def generate_year(rng: random.Random, year: int, year_index: int) -> tuple[list[dict], dict]:
    rows: list[dict] = []
    planted = {
        parent: {
            name: {"counts": blank_cells(), "weighted": blank_cells()}
            for name in CLASSIFICATIONS
        }
        for parent in PARENT_COLUMNS
    }
    planted["drops"] = {"edattain": 0, "edattain_mom": 0, "edattain_pop": 0}
    planted["cohort_rows"] = COHORT_ROWS

    for _ in range(COHORT_ROWS):
        child, mom, pop = draw_triple(rng, year_index)
        row = {
            "year": year,
            "age": rng.randint(30, 40),
            "edattain": maybe_missing(rng, child, 0.005),
            "edattain_mom": maybe_missing(rng, mom, 0.03),
            "edattain_pop": maybe_missing(rng, pop, 0.03),
            "weight": rng.choice(WEIGHTS),
        }
        rows.append(row)
        tally(planted, row, row["weight"])

    for _ in range(OUT_OF_AGE_ROWS):
        child, mom, pop = draw_triple(rng, year_index)
        age = rng.choice([rng.randint(20, 29), rng.randint(41, 60)])
        rows.append(
            {
                "year": year,
                "age": age,
                "edattain": child,
                "edattain_mom": mom,
                "edattain_pop": pop,
                "weight": rng.choice(WEIGHTS),
            }
        )

    for _ in range(WRONG_YEAR_ROWS):
        child, mom, pop = draw_triple(rng, year_index)
        rows.append(
            {
                "year": year + rng.choice([-1, 1]),
                "age": rng.randint(30, 40),
                "edattain": child,
                "edattain_mom": mom,
                "edattain_pop": pop,
                "weight": rng.choice(WEIGHTS),
            }
        )

    rng.shuffle(rows)
    planted["rows_in_file"] = len(rows)
    return rows, planted


def check_non_degenerate(planted_year: dict, year: int) -> None:
    for parent in PARENT_COLUMNS:
        for name in CLASSIFICATIONS:
            c = planted_year[parent][name]["counts"]
            row_l = c["n_ll"] + c["n_lh"]
            row_h = c["n_hl"] + c["n_hh"]
            col_l = c["n_ll"] + c["n_hl"]
            col_h = c["n_lh"] + c["n_hh"]
            assert min(row_l, row_h, col_l, col_h) > 0, (
                f"{year}/{parent}/{name} came out degenerate; adjust the distributions"
            )


def main() -> None:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    rng = random.Random(SEED)

    planted_all: dict = {"years": YEARS, "tables": {}}
    manifest = {"files": []}
    for index, year in enumerate(YEARS):
        rows, planted = generate_year(rng, year, index)
        check_non_degenerate(planted, year)
        name = f"census_{year}.csv"
        with open(OUT_DIR / name, "w", encoding="utf-8", newline="") as handle:
            handle.write("year,age,edattain,edattain_mom,edattain_pop,weight\n")
            for row in rows:
                handle.write(
                    f"{row['year']},{row['age']},{row['edattain']},"
                    f"{row['edattain_mom']},{row['edattain_pop']},{row['weight']}\n"
                )
        manifest["files"].append({"year": year, "path": name})
        planted_all["tables"][str(year)] = planted

    (OUT_DIR / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    (OUT_DIR / "config.json").write_text(
        json.dumps(
            {
                "code_to_level": {str(k): v for k, v in CODE_TO_LEVEL.items()},
                "classifications": CLASSIFICATIONS,
                "cohort_age_min": 30,
                "cohort_age_max": 40,
                "weighting": "counts",
            },
            indent=2,
        )
        + "\n"
    )
    (OUT_DIR / "planted_counts.json").write_text(json.dumps(planted_all, indent=2) + "\n")

    total_rows = sum(planted_all["tables"][str(y)]["rows_in_file"] for y in YEARS)
    print(f"wrote {len(YEARS)} extracts ({total_rows} rows) to {OUT_DIR}")


if __name__ == "__main__":
    main()
