"""The Hausdorff operator on PW = PW_pi through its sinc kernel.

The kernel is K(t, x) = sum over nodes u of w(u) Phi(u) sinc(t/u - x).  Its
samples at integer pairs give the matrix of the operator in the orthonormal
basis {sinc(. - n)} when every node satisfies u >= 1.  Nodes with u < 1 push
the dilated function out of PW_pi; the same samples are then only the integer
samples of H f (regime ``"sampled"``), and :func:`build_compression_matrix`
gives the orthogonal compression onto PW instead.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .core_math import sinc
from .measures import Measure, Symbol, weighted_symbol_norm

# 2N+1 at or below this uses a dense SVD instead of power iteration
DENSE_LIMIT = 512


class ConvergenceError(RuntimeError):
    def __init__(self, message, last_value=None):
        super().__init__(message)
        self.last_value = last_value


@dataclass(frozen=True)
class GridSpec:
    """Symmetric grid [-half_width, half_width] with the given spacing."""

    half_width: float = 50.0
    spacing: float = 0.25

    def __post_init__(self):
        if not self.spacing > 0:
            raise ValueError("grid spacing must be > 0")
        if self.spacing > 0.5:
            raise ValueError(f"grid too coarse: spacing {self.spacing} > 0.5")
        if not self.half_width > 0:
            raise ValueError("grid half_width must be > 0")

    def points(self) -> np.ndarray:
        k = int(math.floor(self.half_width / self.spacing + 1e-9))
        return np.arange(-k, k + 1) * self.spacing


@dataclass
class PWVector:
    """Samples f(-N)..f(N), which are also the coefficients of f in the sinc basis."""

    samples: np.ndarray

    def __post_init__(self):
        self.samples = np.asarray(self.samples)
        if self.samples.ndim != 1 or len(self.samples) % 2 != 1:
            raise ValueError("PWVector needs an odd-length 1-D sample array")
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("PWVector entries must be finite")

    @property
    def N(self) -> int:
        return (len(self.samples) - 1) // 2

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.N, self.N + 1)

    @classmethod
    def basis(cls, N: int, n: int) -> "PWVector":
        v = np.zeros(2 * N + 1)
        v[n + N] = 1.0
        return cls(v)

    def norm(self) -> float:
        return float(np.linalg.norm(self.samples))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return sinc(t[..., None] - self.indices) @ self.samples


@dataclass
class SincMatrix:
    N: int
    entries: np.ndarray
    regime: str
    provenance: dict = field(default_factory=dict)

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.N, self.N + 1)


@dataclass
class BoundRecord:
    bound_name: str
    anchor: str
    computed_lhs: float
    computed_rhs: float
    tolerance: float
    verdict: str = ""

    def __post_init__(self):
        passed = self.computed_lhs <= self.computed_rhs + self.tolerance
        self.verdict = "pass" if passed else "fail"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


@dataclass
class BoundLedger:
    records: list = field(default_factory=list)

    def add(self, record: BoundRecord) -> BoundRecord:
        self.records.append(record)
        return record

    def extend(self, records):
        self.records.extend(records)

    @property
    def all_pass(self) -> bool:
        return all(r.passed for r in self.records)

    def to_records(self) -> list[dict]:
        return [asdict(r) for r in self.records]

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)


def regime(mu: Measure) -> str:
    """``"operator"`` when supp mu lies in [1, inf), else ``"sampled"``."""
    return "operator" if mu.support[0] >= 1.0 else "sampled"


def _coefficients(phi: Symbol, mu: Measure) -> np.ndarray:
    return mu.weights * phi.on(mu)


def kernel_values(phi: Symbol, mu: Measure, t, x) -> np.ndarray:
    """K(t, x) on broadcast arrays ``t`` and ``x``; node sum in ascending order."""
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    c = _coefficients(phi, mu)
    out = np.zeros(np.broadcast_shapes(t.shape, x.shape))
    for u, cj in zip(mu.nodes, c):
        if cj != 0:
            out = out + cj * sinc(t / u - x)
    return out


def kernel_eval(phi: Symbol, mu: Measure, t: float, x: float) -> float:
    return float(kernel_values(phi, mu, t, x))


def kernel_row_norm(phi: Symbol, mu: Measure, t: float, x_grid: GridSpec = GridSpec()) -> float:
    """(integral of |K(t, x)|^2 dx)^(1/2) by a step sum on ``x_grid``.

    The step sum of a band-limited square is exact for spacing < 1, so the
    only error is grid truncation; see :func:`row_truncation_bound`.
    """
    x = x_grid.points()
    k = kernel_values(phi, mu, t, x)
    return math.sqrt(x_grid.spacing * float(np.sum(k * k)))


def kernel_col_norm(phi: Symbol, mu: Measure, x: float, t_grid: GridSpec = GridSpec()) -> float:
    """(integral of |K(t, x)|^2 dt)^(1/2) by a step sum on ``t_grid``.

    Exact up to truncation when the spacing is below the smallest node.
    """
    t = t_grid.points()
    k = kernel_values(phi, mu, t, x)
    return math.sqrt(t_grid.spacing * float(np.sum(k * k)))


def _sinc_tail(center: np.ndarray, w: float) -> np.ndarray:
    # integral over |s| > w of 1/(pi (s - c))^2, an upper bound for the sinc^2 tail
    c = np.abs(center)
    with np.errstate(divide="ignore"):
        out = (1.0 / (w - c) + 1.0 / (w + c)) / np.pi ** 2
    return np.where(c < w, out, np.inf)


def row_truncation_bound(phi: Symbol, mu: Measure, t: float, x_grid: GridSpec) -> float:
    """Upper bound on the L2 mass of K(t, .) lost outside the x grid."""
    c = np.abs(_coefficients(phi, mu))
    return float(np.sum(c * np.sqrt(_sinc_tail(t / mu.nodes, x_grid.half_width))))


def col_truncation_bound(phi: Symbol, mu: Measure, x: float, t_grid: GridSpec) -> float:
    """Upper bound on the L2 mass of K(., x) lost outside the t grid."""
    c = np.abs(_coefficients(phi, mu))
    u = mu.nodes
    return float(np.sum(c * np.sqrt(u * _sinc_tail(np.full_like(u, x), t_grid.half_width / u))))


def build_sinc_matrix(phi: Symbol, mu: Measure, N: int) -> SincMatrix:
    """M[m, n] = K(m, n) for m, n in [-N, N]."""
    if N < 1:
        raise ValueError("N must be >= 1")
    idx = np.arange(-N, N + 1, dtype=float)
    entries = kernel_values(phi, mu, idx[:, None], idx[None, :])
    return SincMatrix(N, entries, regime(mu),
                      _provenance(phi, mu, "kernel samples"))


def build_compression_matrix(phi: Symbol, mu: Measure, N: int) -> SincMatrix:
    """Matrix of P_PW H restricted to span{sinc(. - n) : |n| <= N}.

    Per node: sinc(m/u - n) for u >= 1 and u sinc(u n - m) for u < 1 (the
    reproducing identity applied to whichever factor lies in PW).  Agrees
    with :func:`build_sinc_matrix` when every node is >= 1.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    idx = np.arange(-N, N + 1, dtype=float)
    m, n = idx[:, None], idx[None, :]
    c = _coefficients(phi, mu)
    entries = np.zeros((2 * N + 1, 2 * N + 1))
    for u, cj in zip(mu.nodes, c):
        if cj == 0:
            continue
        entries = entries + (cj * sinc(m / u - n) if u >= 1 else cj * u * sinc(u * n - m))
    return SincMatrix(N, entries, "compression", _provenance(phi, mu, "orthogonal compression"))


def _provenance(phi: Symbol, mu: Measure, kind: str) -> dict:
    prov = {"symbol": phi.label, "measure": mu.label, "entries": kind}
    if mu.quad is not None:
        prov["quadrature"] = {"order": mu.quad.order, "panels": mu.quad.panels}
    return prov


def apply_operator(mat: SincMatrix, f: PWVector) -> PWVector:
    if f.N != mat.N:
        raise ValueError(f"dimension mismatch: matrix N={mat.N}, vector N={f.N}")
    return PWVector(mat.entries @ f.samples)


def _start_vector(n: int) -> np.ndarray:
    # alternating signs alone are flip-symmetric and miss every odd singular vector
    i = np.arange(n)
    v = np.where(i % 2 == 0, 1.0, -1.0) * (1.0 + (i + 1) / n)
    return v / np.linalg.norm(v)


def power_iteration(A: np.ndarray, tol: float = 1e-10, max_iter: int = 10_000,
                    x0: np.ndarray | None = None,
                    exclude: np.ndarray | None = None) -> tuple[float, np.ndarray]:
    """Largest singular value of ``A`` by power iteration on A^T A.

    ``exclude`` holds orthonormal rows (earlier right singular vectors) that
    are projected out at every step.  Raises :class:`ConvergenceError`
    carrying the last estimate if the relative change never drops below ``tol``.
    """
    def project(v):
        if exclude is not None and len(exclude):
            v = v - exclude.T @ (exclude @ v)
        return v

    x = project(_start_vector(A.shape[1]) if x0 is None else np.asarray(x0, float))
    x = x / np.linalg.norm(x)
    sigma_old = math.inf
    for _ in range(max_iter):
        y = A @ x
        sigma = float(np.linalg.norm(y))
        if sigma == 0.0:
            return 0.0, x
        z = project(A.T @ y)
        x = z / np.linalg.norm(z)
        if abs(sigma - sigma_old) <= tol * sigma:
            return float(np.linalg.norm(A @ x)), x
        sigma_old = sigma
    raise ConvergenceError(f"power iteration did not converge in {max_iter} steps", sigma)


def sigma_max(A: np.ndarray, method: str = "auto") -> float:
    if method == "auto":
        method = "svd" if A.shape[0] <= DENSE_LIMIT else "power"
    if method == "svd":
        return float(np.linalg.svd(A, compute_uv=False)[0])
    return power_iteration(A)[0]


@dataclass
class NormSweep:
    N_list: list
    sigma_max: list
    bound: float
    extrapolated: float
    converged: bool
    regime: str
    errors: dict = field(default_factory=dict)


def operator_norm_sweep(phi: Symbol, mu: Measure, N_list: Sequence[int],
                        method: str = "auto", compression: bool = False) -> NormSweep:
    """Largest singular value of the N-truncations, with the sqrt(u)-weighted bound."""
    N_list = list(N_list)
    if len(N_list) < 2 or any(b <= a for a, b in zip(N_list, N_list[1:])):
        raise ValueError("N_list needs at least two ascending entries")
    build = build_compression_matrix if compression else build_sinc_matrix
    sigmas, errors = [], {}
    for N in N_list:
        mat = build(phi, mu, N)
        try:
            sigmas.append(sigma_max(mat.entries, method))
        except ConvergenceError as exc:
            errors[N] = str(exc)
            sigmas.append(exc.last_value)
    s1, s2 = sigmas[-2], sigmas[-1]
    converged = abs(s2 - s1) <= 1e-4 * max(abs(s2), 1e-300) or s2 == s1
    # Richardson-style guess assuming geometric convergence; falls back to last value
    extrap = s2
    if len(sigmas) >= 3:
        d1, d2 = sigmas[-2] - sigmas[-3], sigmas[-1] - sigmas[-2]
        if d1 > 0 and 0 <= d2 < d1:
            extrap = s2 + d2 * d2 / (d1 - d2)
    return NormSweep(N_list, sigmas, weighted_symbol_norm(phi, mu, 0.5), extrap, converged,
                     "compression" if compression else regime(mu), errors)


def row_energy(phi: Symbol, mu: Measure, t) -> np.ndarray:
    """sum over all integers n of K(t, n)^2, in closed form.

    Uses sum_n sinc(a - n) sinc(b - n) = sinc(a - b), so the full integer
    row never needs to be materialized.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    c = _coefficients(phi, mu)
    keep = c != 0
    c, u = c[keep], mu.nodes[keep]
    out = np.zeros(t.shape)
    for j in range(len(u)):
        for k in range(len(u)):
            out = out + c[j] * c[k] * sinc(t / u[j] - t / u[k])
    return out


@dataclass
class HSDiagnostic:
    N_list: list
    frobenius: list
    frobenius_square: list
    slope: float
    verdict: str


def hs_diagnostic(phi: Symbol, mu: Measure, N_list: Sequence[int],
                  slope_tol: float = 0.5, cauchy_tol: float = 1e-3) -> HSDiagnostic:
    """Hilbert-Schmidt evidence from Frobenius norms of row truncations.

    For each N the rows |m| <= N are summed over every integer column, so
    frobenius[i]^2 = sum_{|m| <= N} ||K(m, .)||^2.  ``frobenius_square`` is
    the plain (2N+1)-square truncation, kept for comparison.
    """
    N_list = list(N_list)
    if len(N_list) < 2:
        raise ValueError("N_list needs at least two entries")
    energies = row_energy(phi, mu, np.arange(-N_list[-1], N_list[-1] + 1))
    mid = N_list[-1]
    frob2 = [float(np.sum(energies[mid - N: mid + N + 1])) for N in N_list]
    frob = [math.sqrt(max(f, 0.0)) for f in frob2]
    square = [float(np.linalg.norm(build_sinc_matrix(phi, mu, N).entries)) for N in N_list]
    slope = float(np.polyfit(np.asarray(N_list, float), np.asarray(frob2), 1)[0])
    a, b = frob[-2], frob[-1]
    cauchy = (a == b) or abs(b - a) <= cauchy_tol * max(abs(a), abs(b))
    if slope > slope_tol:
        verdict = "not-HS"
    elif cauchy:
        verdict = "HS-plausible"
    else:
        verdict = "inconclusive"
    return HSDiagnostic(N_list, frob, square, slope, verdict)


@dataclass
class Spectrum:
    values: np.ndarray
    trace_partial: float
    failed: list = field(default_factory=list)


def singular_spectrum(mat: SincMatrix, k: int, method: str = "auto") -> Spectrum:
    """Top-k singular values (descending) and their partial sum."""
    A = mat.entries
    n = A.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}]")
    if method == "auto":
        method = "svd" if n <= DENSE_LIMIT else "power"
    failed = []
    if method == "svd":
        vals = np.linalg.svd(A, compute_uv=False)[:k]
    else:
        vals = np.empty(k)
        found = np.empty((0, n))
        for i in range(k):
            try:
                s, v = power_iteration(A, tol=1e-14, exclude=found)
            except ConvergenceError as exc:
                failed.append(i)
                vals[i:] = exc.last_value
                break
            vals[i] = s
            if s == 0:
                vals[i:] = 0.0
                break
            found = np.vstack([found, v])
    return Spectrum(np.asarray(vals), float(np.sum(vals)), failed)


def linf_bound_check(phi: Symbol, mu: Measure, f: PWVector,
                     t_grid: GridSpec = GridSpec(), tol: float = 1e-6) -> BoundRecord:
    """sup over the grid of |(H f)(t)| against ||Phi||_{L1(mu)} ||f||."""
    if not np.any(f.samples):
        raise ValueError("f must be nonzero")
    t = t_grid.points()
    K = kernel_values(phi, mu, t[:, None], f.indices[None, :].astype(float))
    lhs = float(np.max(np.abs(K @ f.samples)))
    rhs = weighted_symbol_norm(phi, mu, 0.0) * f.norm()
    return BoundRecord("PW to L-infinity", ANCHORS["linf"], lhs, rhs, tol)


ANCHORS = {
    "prop_pw": "PW boundedness: Phi(u) sqrt(u) mu-integrable",
    "carleman": "Carleman row estimate: ||K(t,.)|| = ||Phi||_L1(mu)",
    "semi_carleman": "semi-Carleman column estimate: ||K(.,x)|| <= int |Phi| sqrt(u) dmu",
    "linf": "PW to L-infinity estimate: ||H|| <= ||Phi||_L1",
    "est_fock": "Fock diagonal estimate: ||H F|| <= sup|lambda_n| ||F||",
    "tail_fock": "finite-rank truncation tail: ||H - H^(k)|| <= sup_{n>=k}|lambda_n|",
    "gap": "support gap: Phi = 0 mu-a.e. on (0, 1)",
    "l1": "necessity of Phi in L1(mu)",
    "three_path": "agreement of quadrature, sinc-kernel and diagonal realizations",
}
