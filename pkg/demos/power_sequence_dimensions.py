"""How fast do the points n^-p pile up near zero?

For X = {n^-p} the ordinary box count grows like m^(1/(1+p)), while the
graph count g_m (each box contributes at most m cells) grows like
m^(2/(1+p)) once that exponent exceeds one. This script prints both series
and compares the fitted slopes with those rates.
"""

from fractions import Fraction

from gboxdim import PowerSet, estimate_dimension, ratio_series
from gboxdim.analysis import geometric_schedule

schedule = geometric_schedule(2, 16, 2 ** 20)

for p in (Fraction(1, 2), Fraction(1), Fraction(2)):
    X = PowerSet(p)
    box = estimate_dimension(ratio_series(X, schedule, "box"))
    graph = estimate_dimension(ratio_series(X, schedule, "gm"))
    expect_box = 1 / (1 + p)
    expect_graph = max(1, 2 / (1 + p))
    print(f"p = {p}")
    print(f"  box count slope   {box.slope:.4f}   (rate {float(expect_box):.4f})")
    print(f"  graph count slope {graph.slope:.4f}   (rate {float(expect_graph):.4f})")
