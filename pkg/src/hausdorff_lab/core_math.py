"""Special functions and the measure-integration engine.

Everything here is a pure function of immutable inputs.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .measures import Measure

# |pi z| below this switches sinc to its Taylor polynomial
SINC_TAYLOR_THRESHOLD = 1e-4


class IntegrationError(ValueError):
    """Raised when an integrand is not finite at a node of the measure."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Composite Gauss-Legendre rule: ``panels`` equal panels of ``order`` nodes."""

    order: int = 16
    panels: int = 4
    abs_tol: float = 0.0

    def __post_init__(self):
        if int(self.order) != self.order or self.order < 2:
            raise ValueError(f"quadrature order must be an integer >= 2, got {self.order}")
        if int(self.panels) != self.panels or self.panels < 1:
            raise ValueError(f"quadrature panels must be an integer >= 1, got {self.panels}")
        if not self.abs_tol >= 0:
            raise ValueError("abs_tol must be >= 0")

    def nodes_weights(self, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
        """Nodes (ascending) and weights of the composite rule on [a, b]."""
        return composite_gauss_legendre(float(a), float(b), int(self.order), int(self.panels))


@dataclass(frozen=True)
class EFamilyParams:
    """Parameters of E(z) = c z^m exp(-p z^2) exp(-i a z)."""

    m: int = 0
    a: float = np.pi
    p: float = 0.0
    c: complex = 1.0

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 0:
            raise ValueError("m must be a nonnegative integer")
        if not self.a > 0:
            raise ValueError("a must be > 0")
        if not self.p >= 0:
            raise ValueError("p must be >= 0")
        if self.c == 0:
            raise ValueError("c must be nonzero")


@lru_cache(maxsize=64)
def _leggauss(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def composite_gauss_legendre(a: float, b: float, order: int, panels: int):
    if not (np.isfinite(a) and np.isfinite(b) and b > a):
        raise ValueError(f"need finite a < b, got [{a}, {b}]")
    x, w = _leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def sinc(z):
    """Normalized sinc, sin(pi z) / (pi z), vectorized.

    The sine is evaluated on the argument reduced to [-1/2, 1/2], so integer
    arguments give exact zeros and large arguments keep full accuracy.
    """
    z = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(z)):
        raise ValueError("sinc requires finite input")
    k = np.round(z)
    r = z - k
    sign = np.where(np.mod(k, 2) == 0, 1.0, -1.0)
    x = np.pi * z
    small = np.abs(x) < SINC_TAYLOR_THRESHOLD
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = sign * np.sin(np.pi * r) / x
    x2 = x * x
    taylor = 1.0 - x2 / 6.0 + x2 * x2 / 120.0
    out = np.where(small, taylor, direct)
    return out if out.ndim else float(out)


def eval_E(params: EFamilyParams, z) -> complex:
    z = np.asarray(z, dtype=complex)
    out = params.c * z ** params.m * np.exp(-params.p * z * z) * np.exp(-1j * params.a * z)
    return out if out.ndim else complex(out)


def dilation_weight(m: int, u: float) -> float:
    """The constant v(u)^{-1} = u^m making E_{m,a,0}(u y) dominate E_{m,a,0}(y)."""
    if not u > 0:
        raise ValueError(f"dilation weight needs u > 0, got {u}")
    return float(u) ** int(m)


def ordered_sum(terms: np.ndarray) -> np.ndarray:
    """Sum along the last axis strictly left to right.

    Vectorized over leading axes; no pairwise reduction, so results are
    bit-reproducible regardless of array size.
    """
    terms = np.asarray(terms)
    acc = np.zeros(terms.shape[:-1], dtype=terms.dtype)
    for j in range(terms.shape[-1]):
        acc = acc + terms[..., j]
    return acc


def integrate(f: Callable, measure: "Measure", quad: QuadratureSpec | None = None) -> float:
    """Integrate ``f`` against ``measure``.

    Atomic measures give the exact weighted sum over atoms; density measures
    use composite Gauss-Legendre of f * rho.  ``quad`` overrides the rule a
    density measure was built with.
    """
    if quad is not None and measure.kind == "density":
        measure = measure.with_quadrature(quad)
    u = measure.nodes
    vals = np.broadcast_to(np.asarray(f(u), dtype=float), u.shape)
    bad = ~np.isfinite(vals)
    if bad.any():
        j = int(np.argmax(bad))
        raise IntegrationError(
            f"integrand not finite at node u={float(u[j])!r} (value {float(vals[j])!r})")
    return float(ordered_sum(measure.weights * vals))
