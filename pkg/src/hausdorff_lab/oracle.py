"""Brute-force reference path: (H F)(z) = sum over nodes of w Phi(u) F(z/u).

No basis, no kernel.  Reference functions are closed-form, and sinc here is
numpy's own, so the oracle shares no evaluation code with the sinc-matrix path.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .fock import FockWeight, TaylorVector, apply_diagonal
from .measures import Measure, Symbol, moment, moment_profile
from .pw import PWVector, apply_operator, build_sinc_matrix, regime


@dataclass(frozen=True)
class ReferenceFunction:
    kind: str
    x0: float = 0.0
    n: int = 0
    samples: tuple = ()
    coeffs: tuple = ()

    @classmethod
    def sinc_shift(cls, x0: float) -> "ReferenceFunction":
        return cls("sinc_shift", x0=float(x0))

    @classmethod
    def monomial(cls, n: int) -> "ReferenceFunction":
        return cls("monomial", n=int(n))

    @classmethod
    def sinc_combo(cls, f: PWVector) -> "ReferenceFunction":
        return cls("finite_sinc_combo", samples=tuple(np.asarray(f.samples, float).tolist()))

    @classmethod
    def polynomial(cls, f: TaylorVector) -> "ReferenceFunction":
        return cls("polynomial", coeffs=tuple(complex(c) for c in f.coeffs))

    def __call__(self, z):
        z = np.asarray(z)
        if self.kind == "sinc_shift":
            return np.sinc(z - self.x0)
        if self.kind == "monomial":
            return z ** self.n
        if self.kind == "finite_sinc_combo":
            c = np.asarray(self.samples)
            N = (len(c) - 1) // 2
            shifts = np.arange(-N, N + 1)
            return np.sum(c * np.sinc(z[..., None] - shifts), axis=-1)
        if self.kind == "polynomial":
            # explicit power sum, deliberately not Horner
            c = np.asarray(self.coeffs)
            z = z.astype(complex)
            return np.sum(c * z[..., None] ** np.arange(len(c)), axis=-1)
        raise ValueError(f"unknown reference function kind {self.kind!r}")


def hausdorff_eval(phi: Symbol, mu: Measure, f: ReferenceFunction, z):
    """Direct quadrature of H f at z (scalar or array, real or complex)."""
    z = np.asarray(z)
    c = mu.weights * phi.on(mu)
    out = None
    for u, cj in zip(mu.nodes, c):
        term = cj * f(z / u)
        out = term if out is None else out + term
    return out if np.ndim(out) else out.item()


def eigen_residual(phi: Symbol, mu: Measure, n: int, z_samples: Sequence[float],
                   lam: float | None = None) -> float:
    """Max relative gap between H z^n and lambda_n z^n over ``z_samples``.

    ``lam`` substitutes a closed-form lambda_n for the computed moment.
    Falls back to the absolute gap where lambda_n z^n vanishes.
    """
    lam = moment(phi, mu, n) if lam is None else lam
    z = np.asarray(z_samples, dtype=float)
    if n >= 1 and np.any(z == 0):
        raise ValueError("z samples must be nonzero for n >= 1")
    direct = np.asarray(hausdorff_eval(phi, mu, ReferenceFunction.monomial(n), z))
    expect = lam * z ** n
    gap = np.abs(direct - expect)
    scale = np.abs(expect)
    rel = np.where(scale > 0, gap / np.where(scale > 0, scale, 1.0), gap)
    return float(np.max(rel))


def fock_norm_quadrature(f: TaylorVector, weight: FockWeight, n_theta: int = 256) -> float:
    """||f||_{F_phi} by direct polar quadrature of |f(r e^{i theta})|^2 e^{-phi(r)}.

    Trapezoid in theta (exact for trigonometric polynomials of degree < n_theta)
    and the weight's radial rule in r.
    """
    r, w = weight.quad.nodes_weights(0.0, weight.r_max)
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    zz = r[:, None] * np.exp(1j * theta[None, :])
    vals = np.abs(f(zz)) ** 2
    m2 = vals.mean(axis=1)
    with np.errstate(over="ignore"):
        radial = r * np.exp(-np.asarray(weight.phi_radial(r), dtype=float))
    return math.sqrt(2 * np.pi * float(np.sum(w * m2 * radial)))


@dataclass
class DiscrepancyReport:
    regime: str
    N: int
    matrix_max_abs: float
    matrix_indices: int
    poly_max_rel: float
    matrix_tol: float = 1e-8
    poly_tol: float = 1e-10
    notes: list = field(default_factory=list)

    @property
    def matrix_pass(self) -> bool:
        return self.matrix_max_abs <= self.matrix_tol

    @property
    def poly_pass(self) -> bool:
        return self.poly_max_rel <= self.poly_tol

    @property
    def passed(self) -> bool:
        return self.matrix_pass and self.poly_pass

    def to_dict(self) -> dict:
        return {"regime": self.regime, "N": self.N, "matrix_max_abs": self.matrix_max_abs,
                "matrix_indices": self.matrix_indices, "poly_max_rel": self.poly_max_rel,
                "matrix_tol": self.matrix_tol, "poly_tol": self.poly_tol,
                "matrix_pass": self.matrix_pass, "poly_pass": self.poly_pass,
                "notes": list(self.notes)}


def cross_validate(phi: Symbol, mu: Measure, N: int = 32, n_vectors: int = 5,
                   degree: int = 6, n_points: int = 10, seed: int = 0) -> DiscrepancyReport:
    """Compare the sinc-matrix and diagonal realizations with direct quadrature.

    Matrix leg: random sinc combinations with samples in [-N/2, N/2], compared
    at integer points (interior points |m| <= N/2 only in the sampled regime).
    Polynomial leg: random polynomials of degree <= ``degree`` at complex
    points with |z| <= 2.
    """
    rng = np.random.default_rng(seed)
    reg = regime(mu)
    notes = []
    mat = build_sinc_matrix(phi, mu, N)
    idx = np.arange(-N, N + 1)
    half = N // 2
    keep = np.abs(idx) <= half if reg == "sampled" else np.ones_like(idx, dtype=bool)
    if reg == "sampled":
        notes.append("measure has mass below 1: matrix leg compares interior indices only")
    mat_err = 0.0
    for _ in range(n_vectors):
        s = np.zeros(2 * N + 1)
        s[np.abs(idx) <= half] = rng.standard_normal(2 * half + 1)
        f = PWVector(s)
        via_matrix = apply_operator(mat, f).samples
        direct = np.asarray(hausdorff_eval(phi, mu, ReferenceFunction.sinc_combo(f),
                                           idx.astype(float)))
        mat_err = max(mat_err, float(np.max(np.abs(via_matrix - direct)[keep])))

    prof = moment_profile(phi, mu, max(degree, 2))
    poly_err = 0.0
    for _ in range(n_vectors):
        a = TaylorVector(rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1))
        z = 2 * np.sqrt(rng.uniform(0, 1, n_points)) * np.exp(2j * np.pi * rng.uniform(0, 1, n_points))
        diag = apply_diagonal(prof, a)(z)
        direct = np.asarray(hausdorff_eval(phi, mu, ReferenceFunction.polynomial(a), z))
        # condition scale sum |lambda_n a_n| |z|^n, robust near zeros of H F
        terms = np.abs(prof.values[: degree + 1] * a.coeffs)
        scale = np.sum(terms * np.abs(z)[:, None] ** np.arange(degree + 1), axis=-1)
        gap = np.abs(diag - direct)
        rel = np.where(scale > 0, gap / np.where(scale > 0, scale, 1.0), gap)
        poly_err = max(poly_err, float(np.max(rel)))
    return DiscrepancyReport(reg, N, mat_err, int(keep.sum()), poly_err, notes=notes)
