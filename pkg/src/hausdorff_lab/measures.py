"""Symbols Phi, positive measures mu, and the scalar quantities built from them."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .core_math import IntegrationError, QuadratureSpec, integrate, ordered_sum

ZERO_TOL = 1e-12
DECAY_TOL = 1e-10
_LOG_MAX = math.log(np.finfo(float).max)


class IndeterminateMomentError(ArithmeticError):
    """A moment overflowed and Phi changes sign, so no log-space fallback exists."""


@dataclass(frozen=True)
class Symbol:
    """The function Phi in the Hausdorff operator, evaluated vectorized on (0, inf)."""

    eval: Callable[[np.ndarray], np.ndarray]
    nonnegative: bool = False
    support_lo: float = float(np.finfo(float).tiny)
    support_hi: float = math.inf
    label: str = "phi"

    def __post_init__(self):
        if not (0 < self.support_lo <= self.support_hi):
            raise ValueError("symbol support needs 0 < support_lo <= support_hi")

    def __call__(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        return np.broadcast_to(np.asarray(self.eval(u), dtype=float), u.shape)

    def on(self, mu: "Measure") -> np.ndarray:
        """Values at the nodes of ``mu``; checks the nonnegativity flag."""
        vals = self(mu.nodes)
        if not np.all(np.isfinite(vals)):
            j = int(np.argmax(~np.isfinite(vals)))
            raise IntegrationError(f"symbol {self.label!r} not finite at node u={float(mu.nodes[j])!r}")
        if self.nonnegative and np.any(vals < 0):
            j = int(np.argmax(vals < 0))
            raise ValueError(
                f"symbol {self.label!r} flagged nonnegative but is {float(vals[j])!r} at u={float(mu.nodes[j])!r}"
            )
        return vals

    def scaled(self, alpha: float) -> "Symbol":
        return Symbol(lambda u: alpha * self(u), self.nonnegative and alpha >= 0,
                      self.support_lo, self.support_hi, f"{alpha}*{self.label}")


# -- built-in symbol library -------------------------------------------------

def constant(value: float = 1.0) -> Symbol:
    return Symbol(lambda u: np.full_like(u, float(value)), nonnegative=value >= 0,
                  label=f"constant({value})")


def zero() -> Symbol:
    return Symbol(np.zeros_like, nonnegative=True, label="zero")


def power(alpha: float, coef: float = 1.0) -> Symbol:
    return Symbol(lambda u: coef * u ** float(alpha), nonnegative=coef >= 0,
                  label=f"{coef}*u^{alpha}")


def indicator(lo: float, hi: float) -> Symbol:
    if not 0 < lo <= hi:
        raise ValueError("indicator needs 0 < lo <= hi")
    return Symbol(lambda u: ((u >= lo) & (u <= hi)).astype(float), nonnegative=True,
                  support_lo=lo, support_hi=hi, label=f"1[{lo},{hi}]")


def tabulated(points: Sequence[Sequence[float]]) -> Symbol:
    """Piecewise-linear interpolant of (u, value) pairs, zero outside their range."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
        raise ValueError("tabulated symbol needs at least two (u, value) pairs")
    if np.any(np.diff(pts[:, 0]) <= 0) or pts[0, 0] <= 0:
        raise ValueError("tabulated abscissae must be positive and strictly increasing")
    x, y = pts[:, 0].copy(), pts[:, 1].copy()
    return Symbol(lambda u: np.interp(u, x, y, left=0.0, right=0.0),
                  nonnegative=bool(np.all(y >= 0)), support_lo=float(x[0]),
                  support_hi=float(x[-1]), label="tabulated")


# -- measures ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Measure:
    """Finite atomic measure or a density on a compact [a, b] with a > 0.

    ``nodes``/``weights`` realize integration against the measure; ``mass``
    holds the local mass indicator used by the node-wise support tests (atom
    weights, or rho at the quadrature nodes).
    """

    kind: str
    nodes: np.ndarray
    weights: np.ndarray
    mass: np.ndarray
    label: str = "mu"
    a: float | None = None
    b: float | None = None
    rho: Callable | None = None
    quad: QuadratureSpec | None = None

    @classmethod
    def atomic(cls, atoms: Sequence[tuple[float, float]], label: str | None = None) -> "Measure":
        atoms = sorted((float(u), float(w)) for u, w in atoms)
        if not atoms:
            raise ValueError("atomic measure needs at least one atom")
        for u, w in atoms:
            if not (np.isfinite(u) and u > 0):
                raise ValueError(f"atom position must be finite and > 0, got {u}")
            if not (np.isfinite(w) and w > 0):
                raise ValueError(f"atom weight must be finite and > 0, got {w}")
        u = np.array([p[0] for p in atoms])
        w = np.array([p[1] for p in atoms])
        if label is None:
            label = "atoms{" + ", ".join(f"({x:g},{y:g})" for x, y in atoms) + "}"
        return cls("atomic", u, w, w.copy(), label)

    @classmethod
    def density(cls, a: float, b: float, rho: Callable | float = 1.0,
                quad: QuadratureSpec | None = None, label: str | None = None) -> "Measure":
        a, b = float(a), float(b)
        if not (0 < a < b and np.isfinite(b)):
            raise ValueError(f"density support needs 0 < a < b < inf, got [{a}, {b}]")
        quad = quad or QuadratureSpec()
        if not callable(rho):
            c = float(rho)
            rho_fn = lambda u: np.full_like(u, c)
        else:
            rho_fn = rho
        x, w = quad.nodes_weights(a, b)
        r = np.broadcast_to(np.asarray(rho_fn(x), dtype=float), x.shape).copy()
        if not np.all(np.isfinite(r)) or np.any(r < 0):
            raise ValueError("density must be finite and nonnegative at every node")
        return cls("density", x, w * r, r, label or f"density[{a:g},{b:g}]",
                   a=a, b=b, rho=rho_fn, quad=quad)

    def with_quadrature(self, quad: QuadratureSpec) -> "Measure":
        if self.kind != "density":
            return self
        return Measure.density(self.a, self.b, self.rho, quad, self.label)

    @property
    def support(self) -> tuple[float, float]:
        if self.kind == "density":
            return self.a, self.b
        return float(self.nodes[0]), float(self.nodes[-1])

    @property
    def total_mass(self) -> float:
        return float(ordered_sum(self.weights))


def atom(u: float, w: float = 1.0) -> Measure:
    return Measure.atomic([(u, w)])


# -- moments ---------------------------------------------------------------

def _log_moment(vals: np.ndarray, mu: Measure, n: int) -> tuple[float, float]:
    """(sign, log|lambda_n|) for sign-definite Phi, summed in log space."""
    nz = vals != 0
    if not nz.any():
        return 0.0, -math.inf
    sign = float(np.sign(vals[nz][0]))
    logs = np.log(np.abs(vals[nz])) + np.log(mu.weights[nz]) - n * np.log(mu.nodes[nz])
    top = logs.max()
    return sign, float(top + math.log(ordered_sum(np.exp(logs - top))))


def _moment(phi: Symbol, mu: Measure, n: int) -> tuple[float, float, float]:
    """(value, sign, log|value|); value is +-inf past the floating range."""
    vals = phi.on(mu)
    with np.errstate(over="ignore", invalid="ignore"):
        terms = vals * mu.weights * mu.nodes ** (-float(n))
        total = float(ordered_sum(terms)) if np.all(np.isfinite(terms)) else math.inf
    if np.isfinite(total):
        if total == 0:
            return 0.0, 0.0, -math.inf
        return total, math.copysign(1.0, total), math.log(abs(total))
    if np.all(vals >= 0) or np.all(vals <= 0):
        sign, logabs = _log_moment(vals, mu, n)
        value = sign * math.exp(logabs) if logabs <= _LOG_MAX else sign * math.inf
        return value, sign, logabs
    raise IndeterminateMomentError(
        f"moment n={n} of sign-indefinite {phi.label!r} overflows; no meaningful value"
    )


def moment(phi: Symbol, mu: Measure, n: int) -> float:
    """lambda_n = integral of Phi(u) u^{-n} d mu(u); +-inf past the floating range."""
    if int(n) != n or n < 0:
        raise ValueError("moment index must be a nonnegative integer")
    return _moment(phi, mu, int(n))[0]


def weighted_symbol_norm(phi: Symbol, mu: Measure, s: float) -> float:
    """Integral of |Phi(u)| u^s d mu(u)."""
    vals = np.abs(phi.on(mu))
    return integrate(lambda u: vals * u ** float(s), mu)


@dataclass(frozen=True)
class MomentSequence:
    """lambda_0..lambda_{n_max} with growth and decay diagnostics."""

    values: np.ndarray
    signs: np.ndarray
    log_abs: np.ndarray
    n_max: int
    sup_abs: float
    root_growth_A: float
    liminf_root: float
    liminf_window: tuple[int, int]
    decays_to_zero: str
    growing: bool
    errors: dict = field(default_factory=dict)

    @classmethod
    def from_values(cls, values: Sequence[float], errors: dict | None = None) -> "MomentSequence":
        v = np.asarray(values, dtype=float)
        with np.errstate(divide="ignore"):
            log_abs = np.log(np.abs(v))
        return cls._build(v, np.sign(v), log_abs, errors or {})

    @classmethod
    def _build(cls, values, signs, log_abs, errors) -> "MomentSequence":
        n_max = len(values) - 1
        ok = ~np.isnan(log_abs)
        absv = cls._abs(values, log_abs)
        sup_abs = float(absv.max())

        idx = np.arange(1, n_max + 1)
        roots = np.array([log_abs[n] / n if ok[n] else np.nan for n in idx])
        good = ~np.isnan(roots)
        A = float(math.exp(np.max(roots[good]))) if good.any() else math.nan
        lo = max(1, n_max // 2)
        window = roots[lo - 1:]
        window = window[~np.isnan(window)]
        liminf = float(math.exp(window.min())) if window.size else math.nan

        q = max(1, (n_max + 1) // 4)
        first, last = absv[:q].max(), absv[-q:].max()
        if last < DECAY_TOL or last < 0.5 * first:
            decays = "yes"
        elif last >= first:
            decays = "no"
        else:
            decays = "inconclusive"

        tail = log_abs[lo:][np.isfinite(log_abs[lo:])]
        growing = bool(tail.size >= 2 and np.all(np.diff(tail) >= 0) and tail[-1] > tail[0])
        return cls(values, signs, log_abs, n_max, sup_abs, A, liminf, (lo, n_max),
                   decays, growing, dict(errors))

    @staticmethod
    def _abs(values, log_abs) -> np.ndarray:
        # |value| where it is finite, exp(log_abs) for overflowed entries, 0 for errors
        with np.errstate(over="ignore"):
            big = np.exp(np.where(np.isnan(log_abs), -math.inf, log_abs))
        v = np.asarray(values, dtype=float)
        return np.where(np.isfinite(v), np.abs(np.nan_to_num(v)), big)

    @property
    def abs_values(self) -> np.ndarray:
        return self._abs(self.values, self.log_abs)

    @property
    def sup_is_infinite(self) -> bool:
        return math.isinf(self.sup_abs)


def moment_profile(phi: Symbol, mu: Measure, n_max: int) -> MomentSequence:
    if n_max < 2:
        raise ValueError("moment_profile needs n_max >= 2")
    values = np.full(n_max + 1, np.nan)
    signs = np.full(n_max + 1, np.nan)
    log_abs = np.full(n_max + 1, np.nan)
    errors = {}
    for n in range(n_max + 1):
        try:
            values[n], signs[n], log_abs[n] = _moment(phi, mu, n)
        except (IndeterminateMomentError, IntegrationError) as exc:
            errors[n] = str(exc)
    return MomentSequence._build(values, signs, log_abs, errors)


def mass_below(phi: Symbol, mu: Measure, cutoff: float) -> float:
    """max over nodes u < cutoff of |Phi(u)| * local mass; 0 when no node lies below."""
    below = mu.nodes < cutoff
    if not below.any():
        return 0.0
    return float(np.max(np.abs(phi.on(mu)[below]) * mu.mass[below]))


def support_gap_verdict(phi: Symbol, mu: Measure, cutoff: float) -> str:
    """Node-wise surrogate for "Phi = 0 mu-a.e. on (0, cutoff)".

    Returns ``"holds"``, ``"fails"``, or ``"not-applicable"`` (no node below
    the cutoff, so the condition holds vacuously).
    """
    if not cutoff > 0:
        raise ValueError("cutoff must be > 0")
    if not np.any(mu.nodes < cutoff):
        return "not-applicable"
    return "holds" if mass_below(phi, mu, cutoff) <= ZERO_TOL else "fails"
