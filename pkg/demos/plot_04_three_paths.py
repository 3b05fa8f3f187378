"""
Three ways to apply the same operator
=====================================

Direct quadrature of the defining integral, the sinc matrix, and the
diagonal action on Taylor coefficients should all agree.  cross_validate
runs the comparison on random inputs and reports the worst gaps.
"""

from hausdorff_lab import Measure, constant, power
from hausdorff_lab.oracle import cross_validate

for phi, mu in [(constant(1), Measure.atomic([(1.0, 0.5), (2.0, 0.5)])),
                (power(0.5), Measure.atomic([(1.5, 1.0), (3.5, 0.2)])),
                (constant(1), Measure.atomic([(0.5, 1.0), (2.0, 1.0)]))]:
    rep = cross_validate(phi, mu, N=32)
    print(f"{mu.label or 'mu'}: regime={rep.regime:9s} matrix {rep.matrix_max_abs:.1e}"
          f"  polynomial {rep.poly_max_rel:.1e}  pass={rep.passed}")
    for note in rep.notes:
        print("   note:", note)
