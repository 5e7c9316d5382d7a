"""Randomized checks of three cell-counting inequalities for polygons.

A1: a perturbation below one row height keeps at least half the cells.
A2: f + g meets at least N(g) / (2 n_f) cells.
A3: slopes bounded by k meet at most ceil(k) + 1 rows per column.

Every trial has its own generator, so a failing trial can be replayed from
its seed, suite and index alone.
"""

from gboxdim.lemmas import SUITES, TrialConfig, run_suite

config = TrialConfig(seed=7, trials=500)
for suite in SUITES:
    rep = run_suite(suite, config)
    print(f"{suite:11s} passes={rep.passes:4d} skips={rep.skips:3d} failures={rep.failures}")
