import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hausdorff_lab import (FockWeight, MomentSequence, TaylorVector, atom, constant,
                           apply_diagonal, boundedness_verdict, compactness_verdict,
                           diagonal_norm, fock_norm, moment_profile, truncation_tail)
from hausdorff_lab.fock import TailConditionError, monomial_norms, suggest_r_max
from hausdorff_lab.oracle import fock_norm_quadrature


@pytest.fixture(scope="module")
def gauss():
    return FockWeight.gaussian(n_max=40)


def gamma_norm(n, alpha=2.0):
    # 2 pi int r^(2n+1) exp(-r^alpha) dr = (2 pi / alpha) Gamma((2n+2)/alpha)
    return 2 * math.pi / alpha * math.gamma((2 * n + 2) / alpha)


def random_taylor(rng, k):
    return TaylorVector(rng.standard_normal(k) + 1j * rng.standard_normal(k))


def test_monomial_norms_gaussian(gauss):
    w = gauss.monomial_norms
    assert w[0] == pytest.approx(math.pi, rel=1e-12)
    assert w[3] == pytest.approx(6 * math.pi, rel=1e-12)
    for n in range(11):
        assert w[n] == pytest.approx(math.pi * math.factorial(n), rel=1e-8)
    ratios = w[1:] / w[:-1]
    np.testing.assert_allclose(ratios, np.arange(1, len(w)), rtol=1e-9)


@pytest.mark.parametrize("alpha", [1.0, 1.5, 3.0])
def test_monomial_norms_power_weight(alpha):
    weight = FockWeight.power(alpha, n_max=12)
    expect = [gamma_norm(n, alpha) for n in range(13)]
    np.testing.assert_allclose(weight.monomial_norms, expect, rtol=1e-9)


def test_cached_norms_match_recomputation(gauss):
    again = monomial_norms(gauss.phi_radial, gauss.n_max, gauss.r_max, gauss.quad)
    np.testing.assert_allclose(gauss.monomial_norms, again, rtol=1e-12)
    assert np.all(gauss.monomial_norms > 0)
    with pytest.raises(ValueError):
        gauss.monomial_norms[0] = 1.0


def test_tail_condition_enforced():
    with pytest.raises(TailConditionError, match="r_max"):
        monomial_norms(lambda r: r * r, 10, r_max=2.0)
    R = suggest_r_max(lambda r: r * r, 10)
    monomial_norms(lambda r: r * r, 10, R)


def test_fock_norm_examples(gauss):
    assert fock_norm(TaylorVector([1, 0, 0]), gauss) == pytest.approx(math.sqrt(math.pi))
    assert fock_norm(TaylorVector([0, 0, 0]), gauss) == 0
    assert fock_norm(TaylorVector([0, 1]), gauss) == pytest.approx(math.sqrt(math.pi))
    with pytest.raises(ValueError, match="degree"):
        fock_norm(TaylorVector(np.ones(50)), gauss)


def test_fock_norm_matches_polar_quadrature(gauss):
    rng = np.random.default_rng(5)
    for _ in range(5):
        f = random_taylor(rng, 8)
        assert fock_norm(f, gauss) == pytest.approx(fock_norm_quadrature(f, gauss), rel=1e-10)


@pytest.mark.parametrize("n,m", [(0, 1), (2, 7), (5, 11)])
def test_monomials_orthogonal(gauss, n, m):
    f = TaylorVector.monomial(n, m + 1) - TaylorVector.monomial(m)
    w = gauss.monomial_norms
    assert fock_norm(f, gauss) ** 2 == pytest.approx(w[n] + w[m], rel=1e-12)
    # the polar quadrature sees the cross term vanish too
    assert fock_norm_quadrature(f, gauss) ** 2 == pytest.approx(w[n] + w[m], rel=1e-10)


def test_apply_diagonal_examples():
    half = moment_profile(constant(1), atom(2, 1), 4)
    out = apply_diagonal(half, TaylorVector([1, 1, 1]))
    np.testing.assert_array_equal(out.coeffs, [1, 0.5, 0.25])
    ident = moment_profile(constant(1), atom(1, 1), 4)
    f = TaylorVector([1 + 2j, -3, 0.5j])
    np.testing.assert_array_equal(apply_diagonal(ident, f).coeffs, f.coeffs)
    with pytest.raises(ValueError, match="moments"):
        apply_diagonal(half, TaylorVector(np.ones(6)))


def test_eigen_relation_exact():
    prof = moment_profile(constant(0.7), atom(3, 1.3), 10)
    for n in range(11):
        e = TaylorVector.monomial(n, 11)
        expect = np.zeros(11, dtype=complex)
        expect[n] = prof.values[n]
        np.testing.assert_array_equal(apply_diagonal(prof, e).coeffs, expect)


def test_diagonal_norm_examples():
    n = np.arange(9)
    assert diagonal_norm(MomentSequence.from_values(0.5 ** n)) == 1
    grow = MomentSequence.from_values(2.0 ** n)
    assert diagonal_norm(grow) == 256 and grow.growing
    assert diagonal_norm(MomentSequence.from_values(np.zeros(9))) == 0
    assert diagonal_norm(MomentSequence.from_values([0.0, np.inf])) == math.inf


def test_truncation_tail_examples():
    n = np.arange(17)
    assert truncation_tail(0.5 ** n, 4) == 0.0625
    assert truncation_tail(np.ones(17), 9) == 1
    assert truncation_tail(1 / (n + 1), 9) == pytest.approx(0.1)
    with pytest.raises(ValueError):
        truncation_tail(np.ones(5), 5)


def test_norm_bound_and_argmax_equality(gauss):
    rng = np.random.default_rng(9)
    profiles = [moment_profile(constant(1), atom(2, 1), 20).values,
                np.cos(np.arange(21)), 1 / (np.arange(21) + 1.0),
                rng.uniform(-3, 3, 21)]
    for lam in profiles:
        C = diagonal_norm(lam)
        for _ in range(50):
            f = random_taylor(rng, 21)
            assert fock_norm(apply_diagonal(lam, f), gauss) <= C * fock_norm(f, gauss) + 1e-10
        n = int(np.argmax(np.abs(lam)))
        e = TaylorVector.monomial(n, 21)
        ratio = fock_norm(apply_diagonal(lam, e), gauss) / fock_norm(e, gauss)
        assert ratio == pytest.approx(C, abs=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 19), st.integers(0, 2**31 - 1))
def test_tail_bound(k, seed):
    weight = FockWeight.gaussian(n_max=20)
    rng = np.random.default_rng(seed)
    lam = rng.uniform(-2, 2, 21)
    f = random_taylor(rng, 21)
    gap = apply_diagonal(lam, f) - apply_diagonal(lam, f.truncated(k))
    assert fock_norm(gap, weight) <= truncation_tail(lam, k) * fock_norm(f, weight) + 1e-10


def test_boundedness_examples():
    v = boundedness_verdict(constant(1), atom(2, 1), 32)
    assert v.verdict == "bounded" and v.sup_abs == 1 and v.bound_above_one == 1
    v = boundedness_verdict(constant(1), atom(0.5, 1), 32)
    assert v.verdict == "unbounded" and v.support_gap == "fails"
    v = boundedness_verdict(constant(1), atom(1, 1), 32)
    assert v.verdict == "bounded"
    assert compactness_verdict(moment_profile(constant(1), atom(1, 1), 32)).verdict == "not-compact"


def test_boundedness_overflow_guard():
    # Phi >= 0 flag unset, so only the overflow guard can declare unboundedness
    from hausdorff_lab import Symbol
    phi = Symbol(lambda u: np.ones_like(u), nonnegative=False)
    v = boundedness_verdict(phi, atom(0.01, 1), 64)
    assert v.support_gap is None and v.overflow and v.verdict == "unbounded"


def test_compactness_examples():
    n = np.arange(33)
    c = compactness_verdict(MomentSequence.from_values(0.5 ** n))
    assert c.verdict == "compact"
    assert c.tail_profile[4] == 0.0625
    assert compactness_verdict(np.ones(33)).verdict == "not-compact"
    assert compactness_verdict(1 / (n + 1.0)).verdict == "compact"
