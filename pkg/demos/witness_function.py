"""A polygon through chosen points of X whose graph fills many cells.

Points of each box are stacked at heights 1/(2m), 3/(2m), ... so they fall
in different rows. With height cap h, at most floor(h m) points per box are
used, and the graph must meet at least sum_k min(h m, #(X in B_k)) cells.
"""

from fractions import Fraction

from gboxdim import PowerSet, build_witness

X = PowerSet(Fraction(1, 2))
for m in (16, 64, 256):
    for h in (Fraction(1, 4), Fraction(1)):
        w = build_witness(X, m, h)
        print(f"m={m:4d} h={str(h):4s} vertices={len(w.function):5d} "
              f"bound={w.bound:6d} achieved={w.achieved:6d} sup={float(w.function.sup_norm):.4f}")

w = build_witness(X, 8, Fraction(1, 2))
print("\nfirst rows of the m=8 witness table:")
print("".join(w.to_csv().splitlines(keepends=True)[:6]))
