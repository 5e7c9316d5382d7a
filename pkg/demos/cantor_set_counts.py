"""Middle-thirds Cantor endpoints at finite depth.

At triadic scales m = 3^j a depth-16 construction has many points in every
occupied box, so g_m is close to m times the box count. The printout shows
where that breaks: right endpoints of an interval sit exactly on the next
box boundary and land alone in a box of their own.
"""

import math
from fractions import Fraction

from gboxdim import cantor_set, occupancy
from gboxdim.analysis import gm, log_log_slope

X = cantor_set(Fraction(1, 3), 16)
print(f"{len(X)} points")

scales, gs = [], []
for j in range(1, 7):
    m = 3 ** j
    prof = occupancy(X, m, cap=None)
    thin = sum(1 for c in prof.counts if c < m)
    g = gm(X, m)
    scales.append(m)
    gs.append(g)
    print(f"m={m:4d}  boxes={len(prof):4d}  boxes with < m points={thin:4d}  "
          f"g={g:7d}  m*N={m * len(prof):7d}")

print(f"slope of log g against log m: {log_log_slope(scales, gs):.4f}")
print(f"1 + log 2 / log 3          : {1 + math.log(2) / math.log(3):.4f}")
