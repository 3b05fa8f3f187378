import numpy as np
import pytest

from hausdorff_lab import Measure, Symbol, constant, power


def make_battery(seed=2024, count=5):
    """Seeded (Phi, mu) pairs with atoms in [1, 5]; the first two are single atoms."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n_atoms = 1 if i < 2 else int(rng.integers(2, 5))
        atoms = [(float(rng.uniform(1, 5)), float(rng.uniform(0.2, 1.5))) for _ in range(n_atoms)]
        if i % 3 == 0:
            phi = constant(float(rng.uniform(0.5, 2)))
        elif i % 3 == 1:
            phi = power(float(rng.uniform(-1, 1)), float(rng.uniform(0.5, 2)))
        else:
            a = float(rng.uniform(0.5, 2))
            phi = Symbol(lambda u, a=a: np.cos(a * u), label=f"cos({a:.3f}u)")
        out.append((phi, Measure.atomic(atoms)))
    return out


@pytest.fixture(scope="session")
def battery():
    return make_battery()
