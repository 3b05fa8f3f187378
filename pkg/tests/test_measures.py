import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hausdorff_lab import (IndeterminateMomentError, Measure, MomentSequence, Symbol, atom,
                           constant, indicator, moment, moment_profile, power,
                           support_gap_verdict, tabulated, weighted_symbol_norm, zero)

ramp = Symbol(lambda u: np.maximum(u - 1, 0), nonnegative=True, label="max(u-1,0)")


def test_moment_examples():
    assert moment(constant(1), atom(2, 1), 3) == 0.125
    assert moment(constant(1), atom(0.5, 1), 4) == 16
    assert moment(constant(1), Measure.density(1, 2), 1) == pytest.approx(math.log(2), rel=1e-14)


def test_moment_density_closed_form():
    mu = Measure.density(1, 2)
    for n in range(2, 12):
        exact = (1 - 2.0 ** (1 - n)) / (n - 1)
        assert moment(constant(1), mu, n) == pytest.approx(exact, rel=1e-13)


def test_moment_log_space_fallback():
    # 1e-300 * 1e-3^{-200} is 1e300: representable, though u^{-n} alone overflows
    mu = Measure.atomic([(1e-3, 1e-300)])
    assert moment(constant(1), mu, 200) == pytest.approx(1e300, rel=1e-10)
    assert moment(constant(1), atom(0.5), 2000) == math.inf
    assert moment(constant(-1), atom(0.5), 2000) == -math.inf


def test_moment_sign_indefinite_overflow():
    phi = Symbol(lambda u: np.where(u < 0.3, 1.0, -1.0))
    with pytest.raises(IndeterminateMomentError):
        moment(phi, Measure.atomic([(0.2, 1), (0.4, 1)]), 1000)


def test_weighted_symbol_norm_examples():
    assert weighted_symbol_norm(constant(1), atom(2, 1), 0.5) == pytest.approx(math.sqrt(2), rel=1e-15)
    assert weighted_symbol_norm(constant(1), atom(2, 1), 0) == 1
    assert weighted_symbol_norm(power(1), Measure.density(1, 2), -1) == pytest.approx(1, rel=1e-14)
    assert weighted_symbol_norm(constant(-3), atom(4, 1), 0.5) == 6


def test_moment_profile_decay():
    p = moment_profile(constant(1), atom(2, 1), 8)
    np.testing.assert_array_equal(p.values, 2.0 ** -np.arange(9))
    assert p.sup_abs == 1
    assert p.root_growth_A == pytest.approx(0.5, rel=1e-14)
    assert p.decays_to_zero == "yes"
    assert not p.growing


def test_moment_profile_growth():
    p = moment_profile(constant(1), atom(0.5, 1), 8)
    np.testing.assert_array_equal(p.values, 2.0 ** np.arange(9))
    assert p.sup_abs == pytest.approx(256, rel=1e-14)
    assert p.growing
    assert p.root_growth_A == pytest.approx(2, rel=1e-14)
    assert p.decays_to_zero == "no"


def test_moment_profile_unit_atom():
    p = moment_profile(constant(1), atom(1, 1), 8)
    np.testing.assert_array_equal(p.values, np.ones(9))
    assert p.sup_abs == 1 and p.decays_to_zero == "no" and not p.growing


def test_moment_profile_rejects_small_nmax():
    with pytest.raises(ValueError):
        moment_profile(constant(1), atom(2), 1)


def test_moment_profile_records_errors():
    phi = Symbol(lambda u: np.where(u < 0.3, 1.0, -1.0))
    p = moment_profile(phi, Measure.atomic([(0.2, 1), (0.4, 1)]), 1000)
    assert 1000 in p.errors and 0 not in p.errors
    assert np.isnan(p.values[1000]) and np.isfinite(p.values[5])


def test_from_values_quartile_rule():
    assert MomentSequence.from_values(1 / (np.arange(65) + 1)).decays_to_zero == "yes"
    assert MomentSequence.from_values(np.zeros(20)).decays_to_zero == "yes"
    assert MomentSequence.from_values(np.ones(20)).decays_to_zero == "no"
    # last quartile about 0.6 of the first: neither clearly decaying nor growing
    v = np.concatenate([np.ones(5), np.full(10, 0.8), np.full(5, 0.6)])
    assert MomentSequence.from_values(v).decays_to_zero == "inconclusive"


def test_support_gap_examples():
    assert support_gap_verdict(constant(1), atom(2, 1), 1) == "not-applicable"
    assert support_gap_verdict(constant(1), atom(0.5, 1), 1) == "fails"
    assert support_gap_verdict(ramp, Measure.density(0.5, 2), 1) == "holds"
    with pytest.raises(ValueError):
        support_gap_verdict(ramp, atom(2), 0)


def test_nonnegative_flag_checked_at_pairing():
    liar = Symbol(lambda u: u - 1, nonnegative=True, label="liar")
    with pytest.raises(ValueError, match="flagged nonnegative"):
        moment(liar, atom(0.5), 0)


def test_builtin_symbols():
    u = np.array([0.5, 1.0, 2.0, 3.0])
    np.testing.assert_array_equal(indicator(1, 2)(u), [0, 1, 1, 0])
    np.testing.assert_allclose(tabulated([[1, 0], [3, 2]])(u), [0, 0, 1, 2])
    np.testing.assert_array_equal(zero()(u), 0)
    np.testing.assert_allclose(power(2, 3)(u), 3 * u ** 2)
    with pytest.raises(ValueError):
        tabulated([[2, 0], [1, 1]])


def test_measure_invariants():
    for atoms in ([], [(0, 1)], [(-1, 1)], [(1, 0)], [(1, -2)]):
        with pytest.raises(ValueError):
            Measure.atomic(atoms)
    with pytest.raises(ValueError):
        Measure.density(0, 1)
    with pytest.raises(ValueError):
        Measure.density(1, 2, lambda u: -u)
    mu = Measure.atomic([(3, 1), (1, 2)])
    assert list(mu.nodes) == [1, 3]


@settings(max_examples=40)
@given(st.floats(0.1, 10), st.floats(0.1, 10), st.floats(0.1, 5), st.integers(0, 60))
def test_moment_recursion_single_atom(u0, w, c, n):
    mu = atom(u0, w)
    lam_n = moment(constant(c), mu, n)
    lam_next = moment(constant(c), mu, n + 1)
    assert lam_next * u0 == pytest.approx(lam_n, rel=1e-13)


@settings(max_examples=30)
@given(st.lists(st.tuples(st.floats(0.1, 5), st.floats(0.01, 3)), min_size=1, max_size=6))
def test_zeroth_moment_is_l1_norm(atoms):
    mu = Measure.atomic(atoms)
    phi = power(0.7, 2.0)
    assert moment(phi, mu, 0) == pytest.approx(weighted_symbol_norm(phi, mu, 0), rel=1e-14)


@settings(max_examples=30)
@given(st.lists(st.tuples(st.floats(0.1, 5), st.floats(0.01, 3)), min_size=1, max_size=6),
       st.integers(0, 30))
def test_moment_lower_bound_chain(atoms, n):
    mu = Measure.atomic(atoms)
    phi = power(0.5)
    lam = moment(phi, mu, n)
    for b in mu.nodes:
        below = mu.nodes <= b
        mass = float(np.sum(phi(mu.nodes[below]) * mu.weights[below]))
        assert lam >= b ** (-n) * mass * (1 - 1e-12)


@pytest.mark.parametrize("u0, w, c", [(2.0, 1.0, 1.0), (0.5, 0.5, 1.0), (3.0, 0.5, 1.6)])
def test_root_growth_converges(u0, w, c):
    # c*w <= 1, where the sup over n of (c w)^{1/n}/u0 is approached from below
    p = moment_profile(constant(c), atom(u0, w), 40)
    assert p.root_growth_A == pytest.approx(1 / u0, rel=0.02)
    assert p.liminf_root == pytest.approx(1 / u0, rel=0.05)
    assert p.liminf_window == (20, 40)
