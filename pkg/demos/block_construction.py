"""A set whose graph dimension exceeds twice its box dimension.

Blocks of x_n^c consecutive points are placed just below i/x_n at a
rapidly growing gap sequence x_n. The report checks the placement rules
block by block and then looks at the special scales where the clustering
pays off.
"""

from fractions import Fraction

from gboxdim import PaperSetParams, construction_report, paper_set

params = PaperSetParams(a=Fraction(1, 2), c=Fraction(1, 3), levels=3)
X = paper_set(params)
print(f"{len(X)} points, gaps {X.metadata['gaps'][:4]}")

report = construction_report(X)
print(f"blocks checked: {report.blocks}, all placement rules hold: {report.ok}")
for s in report.special:
    status = "measured" if s.feasible else "beyond the generated levels"
    line = f"  level {s.level}: m={s.m} ({status})"
    if s.feasible:
        line += f" g={s.g} log g/log m={s.ratio:.4f} lower bound holds: {s.bound_ok}"
    print(line)
print(f"predicted graph dimension: {float(report.predicted_gdim):.4f}")
