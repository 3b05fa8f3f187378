"""
Dilation on the Paley-Wiener space
==================================

With Phi = 1 and a single atom at u = 2 the Hausdorff operator is the plain
dilation f(t) -> f(t/2).  Its norm on PW is sqrt(2), and the largest
singular value of the truncated sinc matrix climbs to that value.
"""

import math

import numpy as np

from hausdorff_lab import Measure, atom, build_sinc_matrix, constant, operator_norm_sweep

# The identity first: a single atom at u = 1 gives exactly the identity matrix.
M = build_sinc_matrix(constant(1), atom(1, 1), 8).entries
print("identity error:", np.max(np.abs(M - np.eye(17))))

# Now the dilation.  Row m of the matrix holds the samples sinc(m/2 - n).
sweep = operator_norm_sweep(constant(1), atom(2, 1), [4, 8, 16, 32, 64])
for N, s in zip(sweep.N_list, sweep.sigma_max):
    print(f"N={N:3d}  sigma_max={s:.12f}")
print("bound int Phi sqrt(u) dmu =", sweep.bound, " sqrt(2) =", math.sqrt(2))

# Two atoms: the bound is the weighted sum of sqrt(u), and it is not always attained.
mu = Measure.atomic([(1.0, 0.5), (3.0, 0.5)])
sweep = operator_norm_sweep(constant(1), mu, [16, 32, 64, 128])
print("two atoms:", [f"{s:.6f}" for s in sweep.sigma_max], "bound", f"{sweep.bound:.6f}")
