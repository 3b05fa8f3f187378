"""Diagonal model of the Hausdorff operator on a radial Fock-type space.

Monomials z^n are orthogonal in F_phi with squared norms
w_n = 2 pi int_0^inf r^(2n+1) exp(-phi(r)) dr, and H z^n = lambda_n z^n, so
H acts on Taylor coefficients by multiplication with the moment sequence.
All norms and bounds here are in the F_phi norm.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core_math import QuadratureSpec, ordered_sum
from .measures import (MomentSequence, Measure, Symbol, mass_below, moment_profile,
                       support_gap_verdict, weighted_symbol_norm)

OVERFLOW_GUARD = 1e100
TAIL_RATIO = 1e-16


class TailConditionError(ValueError):
    """The radial integrand has not decayed enough at r_max."""


@dataclass
class TaylorVector:
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        if self.coeffs.ndim != 1 or len(self.coeffs) == 0:
            raise ValueError("TaylorVector needs a nonempty 1-D coefficient array")
        if not np.all(np.isfinite(self.coeffs)):
            raise ValueError("Taylor coefficients must be finite")

    @property
    def k(self) -> int:
        return len(self.coeffs)

    @classmethod
    def monomial(cls, n: int, k: int | None = None) -> "TaylorVector":
        c = np.zeros(max(n + 1, k or 0), dtype=complex)
        c[n] = 1.0
        return cls(c)

    def truncated(self, k: int) -> "TaylorVector":
        c = self.coeffs.copy()
        c[k:] = 0
        return TaylorVector(c)

    def __call__(self, z):
        # Horner, highest degree first
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for a in self.coeffs[::-1]:
            out = out * z + a
        return out

    def __sub__(self, other: "TaylorVector") -> "TaylorVector":
        n = max(self.k, other.k)
        a = np.pad(self.coeffs, (0, n - self.k))
        b = np.pad(other.coeffs, (0, n - other.k))
        return TaylorVector(a - b)


def _log_radial(phi_radial, r, n):
    with np.errstate(divide="ignore"):
        return (2 * n + 1) * np.log(r) - np.asarray(phi_radial(r), dtype=float)


def monomial_norms(phi_radial: Callable, n_max: int, r_max: float,
                   quad: QuadratureSpec = QuadratureSpec(order=24, panels=40)) -> np.ndarray:
    """w_n = 2 pi int_0^r_max r^(2n+1) exp(-phi(r)) dr for n = 0..n_max."""
    r, w = quad.nodes_weights(0.0, r_max)
    peak = np.max(_log_radial(phi_radial, r, n_max))
    at_end = _log_radial(phi_radial, np.array([r_max]), n_max)[0]
    if at_end - peak > math.log(TAIL_RATIO):
        raise TailConditionError(
            f"r^(2n+1) exp(-phi(r)) at r_max={r_max} is {math.exp(at_end - peak):.3g} "
            f"of its maximum for n={n_max}; increase r_max"
        )
    out = np.empty(n_max + 1)
    for n in range(n_max + 1):
        out[n] = 2 * np.pi * float(ordered_sum(w * np.exp(_log_radial(phi_radial, r, n))))
    return out


def suggest_r_max(phi_radial: Callable, n_max: int, start: float = 1.0) -> float:
    """Smallest r_max on a doubling-then-bisecting search meeting the tail condition."""
    def ok(R):
        r = np.linspace(R / 4000, R, 4000)
        v = _log_radial(phi_radial, r, n_max)
        return v[-1] - v.max() <= math.log(TAIL_RATIO) - 1.0
    hi = start
    while not ok(hi):
        hi *= 2
        if hi > 1e8:
            raise TailConditionError("no admissible r_max found")
    return float(hi)


@dataclass
class FockWeight:
    phi_radial: Callable
    n_max: int
    r_max: float | None = None
    quad: QuadratureSpec = field(default_factory=lambda: QuadratureSpec(order=24, panels=40))
    label: str = "phi"
    monomial_norms: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.r_max is None:
            self.r_max = suggest_r_max(self.phi_radial, self.n_max)
        self.monomial_norms = monomial_norms(self.phi_radial, self.n_max, self.r_max, self.quad)
        self.monomial_norms.setflags(write=False)

    @classmethod
    def gaussian(cls, n_max: int = 64, **kw) -> "FockWeight":
        """phi(r) = r^2, the classical Bargmann-Fock weight; w_n = pi n!."""
        return cls(lambda r: r * r, n_max, label="r^2", **kw)

    @classmethod
    def power(cls, alpha: float, n_max: int = 64, **kw) -> "FockWeight":
        if not alpha > 0:
            raise ValueError("alpha must be > 0")
        return cls(lambda r: r ** float(alpha), n_max, label=f"r^{alpha}", **kw)


def fock_norm(f: TaylorVector, weight: FockWeight) -> float:
    if f.k > weight.n_max + 1:
        raise ValueError(f"need monomial norms up to degree {f.k - 1}, have {weight.n_max}")
    w = weight.monomial_norms[: f.k]
    return math.sqrt(float(np.sum(np.abs(f.coeffs) ** 2 * w)))


def _lambda_array(lambdas) -> np.ndarray:
    if isinstance(lambdas, MomentSequence):
        return lambdas.values
    return np.asarray(lambdas, dtype=float)


def apply_diagonal(lambdas, f: TaylorVector) -> TaylorVector:
    lam = _lambda_array(lambdas)
    if f.k > len(lam):
        raise ValueError(f"f has {f.k} coefficients but only {len(lam)} moments are stored")
    return TaylorVector(lam[: f.k] * f.coeffs)


def diagonal_norm(lambdas) -> float:
    """sup |lambda_n| over the stored range; inf means unbounded."""
    if isinstance(lambdas, MomentSequence):
        return lambdas.sup_abs
    return float(np.max(np.abs(_lambda_array(lambdas))))


def truncation_tail(lambdas, k: int) -> float:
    """sup_{k <= n <= n_max} |lambda_n|, bounding ||H - H^(k)|| on the stored range."""
    lam = _lambda_array(lambdas)
    if not 0 <= k < len(lam):
        raise ValueError(f"k must lie in [0, {len(lam) - 1}]")
    return float(np.max(np.abs(lam[k:])))


@dataclass
class BoundednessVerdict:
    verdict: str
    sup_abs: float
    l1_norm: float
    support_gap: str | None
    gap_mass: float
    growing: bool
    overflow: bool
    bound_above_one: float | None
    root_growth_A: float
    liminf_root: float
    gap_at_inverse_A: str | None
    notes: list = field(default_factory=list)


def boundedness_verdict(phi: Symbol, mu: Measure, n_max: int = 64,
                        profile: MomentSequence | None = None) -> BoundednessVerdict:
    prof = profile or moment_profile(phi, mu, n_max)
    l1 = weighted_symbol_norm(phi, mu, 0.0)
    gap = support_gap_verdict(phi, mu, 1.0) if phi.nonnegative else None
    gap_mass = mass_below(phi, mu, 1.0)
    overflow = prof.sup_abs > OVERFLOW_GUARD or bool(prof.errors)
    notes = []

    gap_inv_A = None
    if phi.nonnegative and np.isfinite(prof.root_growth_A) and prof.root_growth_A > 0:
        gap_inv_A = support_gap_verdict(phi, mu, 1.0 / prof.root_growth_A)

    bound = None
    if gap == "fails" or overflow:
        verdict = "unbounded"
        if gap == "fails":
            notes.append("Phi >= 0 carries mass below 1")
        if overflow:
            notes.append(f"|lambda_n| exceeds {OVERFLOW_GUARD:g}")
    elif prof.growing:
        verdict = "inconclusive"
        notes.append("trailing moments nondecreasing; finite range may understate the sup")
    else:
        verdict = "bounded"
        if phi.nonnegative:
            above = mu.nodes >= 1.0
            bound = float(ordered_sum(mu.weights[above] * phi.on(mu)[above])) if above.any() else 0.0
            notes.append("H(E) bound holds up to the unknown norm-equivalence constant b/a")
    return BoundednessVerdict(verdict, prof.sup_abs, l1, gap, gap_mass, prof.growing, overflow,
                              bound, prof.root_growth_A, prof.liminf_root, gap_inv_A, notes)


@dataclass
class CompactnessVerdict:
    verdict: str
    decays_to_zero: str
    tail_profile: list


def compactness_verdict(lambdas: MomentSequence) -> CompactnessVerdict:
    if not isinstance(lambdas, MomentSequence):
        lambdas = MomentSequence.from_values(lambdas)
    absv = lambdas.abs_values
    # suffix maxima: tail[k] = sup_{n >= k} |lambda_n|
    tails = np.maximum.accumulate(absv[::-1])[::-1]
    verdict = "compact" if lambdas.decays_to_zero == "yes" else "not-compact"
    return CompactnessVerdict(verdict, lambdas.decays_to_zero, [float(x) for x in tails])
