"""Certificate thresholds and the o(k) ratio for n = 2, as CSV on stdout."""

import sys
from fractions import Fraction

from loctree.bounds import find_threshold, recursive_upper_bound

print("k,certificate_threshold(n_max=10000)")
for k in range(4, 9):
    print(f"{k},{find_threshold(k, 10_000)}")
print()
print("n,k,overall,best_t,recursive,realized,ratio")
for e in range(1, 7):
    k = 10**e
    r = recursive_upper_bound(2, k)
    print(f"2,{k},{r.overall},{r.best_t},{r.recursive_bound},{r.realized_constructive_bound},"
          f"{float(Fraction(r.overall, k)):.6f}")
sys.stdout.flush()
