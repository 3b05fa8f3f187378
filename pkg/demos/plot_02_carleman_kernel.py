"""
Rows and columns of the sinc kernel
===================================

K(t, x) = sum w Phi(u) sinc(t/u - x).  Every row has L2 norm at most the
L1 norm of Phi (equal for a single atom), and every column is bounded by
the sqrt(u)-weighted norm.
A step sum is exact for these band-limited squares, so the only error left
is cutting the grid off; the truncation bounds say how much that can be.
"""

import numpy as np

from hausdorff_lab import GridSpec, Measure, kernel_col_norm, kernel_row_norm, power
from hausdorff_lab import weighted_symbol_norm
from hausdorff_lab.pw import col_truncation_bound, row_truncation_bound

phi = power(-0.5, 1.3)
mu = Measure.atomic([(1.2, 0.4), (2.5, 0.9), (4.0, 0.3)])
l1 = weighted_symbol_norm(phi, mu, 0.0)
half = weighted_symbol_norm(phi, mu, 0.5)
print(f"||Phi||_L1 = {l1:.6f}   int |Phi| sqrt(u) = {half:.6f}")

for W in (50.0, 400.0):
    g = GridSpec(W, 0.25)
    rows = [kernel_row_norm(phi, mu, t, g) for t in (-7.5, 0.0, 3.3)]
    slack = row_truncation_bound(phi, mu, 3.3, g)
    print(f"W={W:5.0f} rows", np.round(rows, 6), f"truncation <= {slack:.1e}")

g = GridSpec(3000.0, 0.5)
cols = [kernel_col_norm(phi, mu, x, g) for x in (-2.0, 0.0, 5.0)]
print("columns", np.round(cols, 6), f"truncation <= {col_truncation_bound(phi, mu, 5.0, g):.1e}")
