"""
Moments, boundedness and compactness in a Fock model
====================================================

On a radial Fock-type space the monomials are orthogonal eigenfunctions, so
the operator is the diagonal sequence of moments lambda_n = int Phi(u) u^-n dmu.
The verdicts below read everything off that sequence.
"""

import math

import numpy as np

from hausdorff_lab import (FockWeight, Measure, atom, boundedness_verdict, compactness_verdict,
                           constant, moment_profile)

# Monomial norms for phi(r) = r^2 are pi n!.
w = FockWeight.gaussian(n_max=10).monomial_norms
print("w_n / (pi n!):", np.round(w / [math.pi * math.factorial(n) for n in range(11)], 12))

cases = {
    "atom at 2": atom(2, 1),
    "atom at 1": atom(1, 1),
    "atom at 1/2": atom(0.5, 1),
    "uniform on [1.5, 3]": Measure.density(1.5, 3.0),
}
for name, mu in cases.items():
    prof = moment_profile(constant(1), mu, 64)
    b = boundedness_verdict(constant(1), mu, profile=prof)
    c = compactness_verdict(prof)
    print(f"{name:22s} sup|lambda|={b.sup_abs:.3g}  {b.verdict:10s} {c.verdict:12s}"
          f" gap={b.support_gap}")
