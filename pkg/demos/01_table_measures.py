#!/usr/bin/env python3
# Walk through the measures on a single 2x2 child-parent education table.
#
# Table convention: rows are the young adult's education (low, high),
# columns the parent's.  n_hh young adults are highly educated AND have a
# highly educated parent.

from mobimetrics import (
    ContingencyTable,
    Mode,
    TableMargins,
    build_kp,
    build_kr,
    liu_lu,
    margins,
    measure_set,
)

# A population of 100: half the young adults are highly educated, 40 have
# highly educated parents, and education clusters in families.
table = ContingencyTable(40, 10, 20, 30)
print("table:", table.to_matrix())

m = margins(table)
print(f"margins: children low/high = {m.n_l_row}/{m.n_h_row}, "
      f"parents low/high = {m.n_l_col}/{m.n_h_col}")
print(f"expected high-high pairs under random allocation: Q = {float(m.q):g}")

# All four measures at once.  liu_lu = 0.5 reads: the observed sorting sits
# halfway between random allocation and the maximal inequality the margins
# allow.
ms = measure_set(table)
print(f"liu_lu              = {ms.liu_lu:.5f}")
print(f"liu_lu_simplified   = {ms.liu_lu_simplified:.5f}   (Coleman-style index)")
print(f"igpc alpha, beta    = {ms.igpc.alpha:.5f}, {ms.igpc.beta:.5f}")
print(f"phi                 = {ms.phi:.5f}")

# The two benchmarks the scaling is anchored to.
kp = build_kp(m)  # maximal inequality: low-parent children come last
kr = build_kr(m)  # random allocation: cells are margin products / N
print("\nmax-inequality benchmark:", kp.to_matrix(), "-> liu_lu", liu_lu(kp))
print("random benchmark:        ", kr.to_matrix(), "-> liu_lu", liu_lu(kr))

# Negative association uses the second branch and comes out negative.
inverted = ContingencyTable(10, 40, 30, 20)
print("\ninverted table:", inverted.to_matrix(), "-> liu_lu", liu_lu(inverted))

# Fractional Q exercises the floor/ceiling handling on integer counts.
small = ContingencyTable(3, 1, 1, 2)
sm = margins(small)
print(f"\nsmall table {small.to_matrix()}: Q = {float(sm.q):.4f}, "
      f"Q- = {sm.q_floor}, Q+ = {sm.q_ceil}, liu_lu = {liu_lu(small)}")

# Weighted (survey) counts: switch to continuous mode, where Q is used as-is.
weighted = ContingencyTable(40.5, 9.75, 20.25, 30.0, mode=Mode.CONTINUOUS)
print("weighted table liu_lu:", f"{liu_lu(weighted):.5f}")

# Margins can also be specified directly when no table is at hand.
direct = TableMargins.from_totals(20, 80, 40, 60)
print("\nbenchmarks for margins (20,80,40,60):",
      build_kp(direct).to_matrix(), build_kr(direct).to_matrix())
