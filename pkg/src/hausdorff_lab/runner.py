"""Declarative experiment runner and report emission.

A config is a JSON object::

    {
      "symbol":  {"kind": "constant", "value": 1.0},
      "measure": {"kind": "atomic", "atoms": [[2.0, 1.0]]},
      "space":   {"kind": "pw"},
      "diagnostics": ["moments", "norm_sweep"],
      "knobs":   {"N_list": [16, 32, 64]},
      "seed":    0
    }

Unknown keys anywhere are rejected before any computation.
"""
from __future__ import annotations

import copy
import csv
import hashlib
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .core_math import QuadratureSpec
from .fock import (FockWeight, TaylorVector, apply_diagonal, boundedness_verdict,
                   compactness_verdict, diagonal_norm, fock_norm, truncation_tail)
from .measures import (ZERO_TOL, Measure, constant, indicator, moment_profile, power,
                       tabulated, weighted_symbol_norm, zero)
from .oracle import cross_validate
from .pw import (ANCHORS, BoundLedger, BoundRecord, GridSpec, PWVector,
                 build_sinc_matrix, col_truncation_bound, hs_diagnostic, kernel_col_norm,
                 kernel_row_norm, kernel_values, linf_bound_check, operator_norm_sweep, regime,
                 row_truncation_bound, singular_spectrum)

DIAGNOSTICS = ("moments", "bounds", "norm_sweep", "hs", "spectrum", "verdicts", "cross_validate")
PW_ONLY = {"norm_sweep", "hs", "spectrum"}

DEFAULT_KNOBS = {
    "n_max": 64,
    "N_list": [16, 32, 64],
    "grid": {"half_width": 50.0, "spacing": 0.25},
    "col_grid": {"half_width": 500.0, "spacing": 0.25},
    "spectrum_k": 10,
    "n_samples": 20,
    "cross_validate_N": 32,
    "kernel_grid": None,
}


class ConfigError(ValueError):
    """Invalid config; the message names the offending field."""


# -- config parsing ------------------------------------------------------------

def _check_keys(obj, allowed, required, where):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object, got {type(obj).__name__}")
    for k in obj:
        if k not in allowed:
            raise ConfigError(f"{where}: unknown key {k!r} (allowed: {', '.join(sorted(allowed))})")
    for k in required:
        if k not in obj:
            raise ConfigError(f"{where}: missing required key {k!r}")


def _num(obj, key, where, positive=False, nonneg=False, integer=False):
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{where}.{key}: expected a number, got {v!r}")
    if integer and int(v) != v:
        raise ConfigError(f"{where}.{key}: expected an integer, got {v!r}")
    if not math.isfinite(v):
        raise ConfigError(f"{where}.{key}: must be finite")
    if positive and not v > 0:
        raise ConfigError(f"{where}.{key}: must be > 0")
    if nonneg and not v >= 0:
        raise ConfigError(f"{where}.{key}: must be >= 0")
    return int(v) if integer else float(v)


_SYMBOL_KEYS = {
    "constant": ({"value"}, {"value"}),
    "zero": (set(), set()),
    "power": ({"alpha", "coef"}, {"alpha"}),
    "indicator": ({"lo", "hi"}, {"lo", "hi"}),
    "tabulated": ({"points"}, {"points"}),
}


def build_symbol(spec: dict, where: str = "symbol"):
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError(f"{where}: needs a 'kind' field")
    kind = spec["kind"]
    if kind not in _SYMBOL_KEYS:
        raise ConfigError(f"{where}.kind: unknown symbol {kind!r} (known: {', '.join(_SYMBOL_KEYS)})")
    allowed, required = _SYMBOL_KEYS[kind]
    _check_keys(spec, allowed | {"kind"}, required, where)
    try:
        if kind == "constant":
            return constant(_num(spec, "value", where))
        if kind == "zero":
            return zero()
        if kind == "power":
            coef = _num(spec, "coef", where) if "coef" in spec else 1.0
            return power(_num(spec, "alpha", where), coef)
        if kind == "indicator":
            return indicator(_num(spec, "lo", where, positive=True),
                             _num(spec, "hi", where, positive=True))
        return tabulated(spec["points"])
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{where}: {exc}") from None


def build_measure(spec: dict, where: str = "measure") -> Measure:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError(f"{where}: needs a 'kind' field")
    kind = spec["kind"]
    try:
        if kind == "atomic":
            _check_keys(spec, {"kind", "atoms"}, {"atoms"}, where)
            atoms = spec["atoms"]
            if not isinstance(atoms, list) or not all(
                    isinstance(p, list) and len(p) == 2 for p in atoms):
                raise ConfigError(f"{where}.atoms: expected a list of [u, w] pairs")
            return Measure.atomic([(p[0], p[1]) for p in atoms])
        if kind == "density":
            _check_keys(spec, {"kind", "a", "b", "rho", "order", "panels"}, {"a", "b"}, where)
            rho = build_symbol(spec["rho"], f"{where}.rho") if "rho" in spec else constant(1.0)
            quad = QuadratureSpec(
                order=_num(spec, "order", where, integer=True) if "order" in spec else 16,
                panels=_num(spec, "panels", where, integer=True) if "panels" in spec else 4)
            return Measure.density(_num(spec, "a", where), _num(spec, "b", where), rho, quad)
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{where}: {exc}") from None
    raise ConfigError(f"{where}.kind: unknown measure {kind!r} (known: atomic, density)")


def build_weight(spec: dict, n_max: int, where: str = "space") -> FockWeight:
    phi = spec.get("phi", {"kind": "gaussian"})
    _check_keys(phi, {"kind", "alpha"}, {"kind"}, f"{where}.phi")
    r_max = _num(spec, "r_max", where, positive=True) if "r_max" in spec else None
    try:
        if phi["kind"] == "gaussian":
            return FockWeight.gaussian(n_max, r_max=r_max)
        if phi["kind"] == "power":
            return FockWeight.power(_num(phi, "alpha", f"{where}.phi", positive=True), n_max,
                                    r_max=r_max)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None
    raise ConfigError(f"{where}.phi.kind: unknown weight {phi['kind']!r} (known: gaussian, power)")


@dataclass
class ExperimentConfig:
    raw: dict
    symbol: object
    measure: Measure
    space: str
    diagnostics: list
    knobs: dict
    seed: int

    @property
    def echo(self) -> dict:
        return copy.deepcopy(self.raw)

    @property
    def digest(self) -> str:
        text = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(f"{__version__}\n{text}".encode()).hexdigest()


def _parse_grid(obj, where):
    _check_keys(obj, {"half_width", "spacing"}, {"half_width", "spacing"}, where)
    try:
        return GridSpec(_num(obj, "half_width", where, positive=True),
                        _num(obj, "spacing", where, positive=True))
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def parse_config(doc: dict, seed: int | None = None) -> ExperimentConfig:
    """Validate ``doc`` strictly and fill knob defaults into the echoed copy."""
    _check_keys(doc, {"symbol", "measure", "space", "diagnostics", "knobs", "seed"},
                {"symbol", "measure", "space", "diagnostics"}, "config")
    raw = copy.deepcopy(doc)
    if seed is not None:
        raw["seed"] = int(seed)
    raw.setdefault("seed", 0)
    if isinstance(raw["seed"], bool) or not isinstance(raw["seed"], int):
        raise ConfigError("config.seed: expected an integer")

    diags = raw["diagnostics"]
    if not isinstance(diags, list) or not diags:
        raise ConfigError("config.diagnostics: expected a nonempty list")
    for d in diags:
        if d not in DIAGNOSTICS:
            raise ConfigError(f"config.diagnostics: unknown diagnostic {d!r} "
                              f"(known: {', '.join(DIAGNOSTICS)})")

    knobs = copy.deepcopy(DEFAULT_KNOBS)
    user = raw.get("knobs", {})
    _check_keys(user, set(DEFAULT_KNOBS), set(), "config.knobs")
    knobs.update(copy.deepcopy(user))
    raw["knobs"] = copy.deepcopy(knobs)

    if _num(knobs, "n_max", "knobs", integer=True) < 2:
        raise ConfigError("knobs.n_max: must be >= 2")
    Nl = knobs["N_list"]
    if (not isinstance(Nl, list) or len(Nl) < 2 or any(isinstance(n, bool) or not isinstance(n, int) or n < 1 for n in Nl)
            or any(b <= a for a, b in zip(Nl, Nl[1:]))):
        raise ConfigError("knobs.N_list: expected >= 2 ascending positive integers")
    knobs["grid"] = _parse_grid(knobs["grid"], "knobs.grid")
    knobs["col_grid"] = _parse_grid(knobs["col_grid"], "knobs.col_grid")
    for key in ("spectrum_k", "n_samples", "cross_validate_N"):
        if _num(knobs, key, "knobs", integer=True) < 1:
            raise ConfigError(f"knobs.{key}: must be >= 1")
    if knobs["spectrum_k"] > 2 * Nl[0] + 1:
        raise ConfigError(f"knobs.spectrum_k: must be <= 2*N_list[0]+1 = {2 * Nl[0] + 1}")
    kg = knobs["kernel_grid"]
    if kg is not None:
        _check_keys(kg, {"t", "x"}, {"t", "x"}, "knobs.kernel_grid")
        for axis in ("t", "x"):
            if not isinstance(kg[axis], list) or not kg[axis]:
                raise ConfigError(f"knobs.kernel_grid.{axis}: expected a nonempty list of numbers")

    space = raw["space"]
    if not isinstance(space, dict) or space.get("kind") not in ("pw", "fock"):
        raise ConfigError("config.space: expected {'kind': 'pw'} or {'kind': 'fock', ...}")
    if space["kind"] == "pw":
        _check_keys(space, {"kind"}, {"kind"}, "space")
    else:
        _check_keys(space, {"kind", "phi", "r_max"}, {"kind"}, "space")

    symbol = build_symbol(raw["symbol"])
    measure = build_measure(raw["measure"])
    try:
        symbol.on(measure)
    except (ValueError, ArithmeticError) as exc:
        raise ConfigError(f"symbol/measure pairing: {exc}") from None
    return ExperimentConfig(raw, symbol, measure, space["kind"], list(diags), knobs, raw["seed"])


def load_config(path, seed: int | None = None) -> ExperimentConfig:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return parse_config(doc, seed)


# -- running ------------------------------------------------------------------------

@dataclass
class Report:
    config: dict
    config_hash: str
    regime: str
    ledger: BoundLedger = field(default_factory=BoundLedger)
    moments: list = field(default_factory=list)
    moment_summary: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)
    skipped: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    @property
    def all_pass(self) -> bool:
        return self.ledger.all_pass

    def to_dict(self) -> dict:
        """JSON-compatible content; wall-clock timings are kept out so runs compare byte-for-byte."""
        return _jsonable({
            "tool": "hausdorff_lab", "version": __version__,
            "config": self.config, "config_hash": self.config_hash, "regime": self.regime,
            "ledger": self.ledger.to_records(), "moments": self.moments,
            "moment_summary": self.moment_summary, "tables": self.tables,
            "verdicts": self.verdicts, "errors": self.errors, "skipped": self.skipped,
        })


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def _unit_taylor_vectors(rng, weight: FockWeight, count: int) -> list[TaylorVector]:
    k = weight.n_max + 1
    scale = 1.0 / np.sqrt(weight.monomial_norms)
    out = []
    for _ in range(count):
        c = (rng.standard_normal(k) + 1j * rng.standard_normal(k)) * scale
        f = TaylorVector(c)
        out.append(TaylorVector(c / fock_norm(f, weight)))
    return out


class _Context:
    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        self.phi, self.mu, self.knobs = cfg.symbol, cfg.measure, cfg.knobs
        self._profile = None
        self._weight = None

    @property
    def profile(self):
        if self._profile is None:
            self._profile = moment_profile(self.phi, self.mu, self.knobs["n_max"])
        return self._profile

    @property
    def weight(self):
        if self._weight is None:
            self._weight = build_weight(self.cfg.raw["space"], self.knobs["n_max"])
        return self._weight

    def rng(self, salt: int):
        return np.random.default_rng([self.cfg.seed, salt])


def _diag_moments(ctx: _Context, report: Report):
    p = ctx.profile
    report.moments = [
        {"n": n, "lambda_n": float(p.values[n]), "log_abs": float(p.log_abs[n]),
         "sign": float(p.signs[n])} for n in range(p.n_max + 1)]
    report.moment_summary = {
        "n_max": p.n_max, "sup_abs": p.sup_abs, "root_growth_A": p.root_growth_A,
        "liminf_root": p.liminf_root, "liminf_window": list(p.liminf_window),
        "decays_to_zero": p.decays_to_zero, "growing": p.growing,
        "errors": {str(k): v for k, v in p.errors.items()}}


def _diag_bounds(ctx: _Context, report: Report):
    phi, mu, kn = ctx.phi, ctx.mu, ctx.knobs
    if ctx.cfg.space == "fock":
        w = ctx.weight
        p = ctx.profile
        vecs = _unit_taylor_vectors(ctx.rng(1), w, kn["n_samples"])
        C = diagonal_norm(p)
        lhs = max(fock_norm(apply_diagonal(p, f), w) for f in vecs)
        report.ledger.add(BoundRecord("Fock diagonal norm bound", ANCHORS["est_fock"], lhs, C,
                                      1e-10 * max(1.0, C)))
        k = max(1, p.n_max // 4)
        tail = truncation_tail(p, k)
        lhs = max(fock_norm(apply_diagonal(p, f) - apply_diagonal(p, f.truncated(k)), w)
                  for f in vecs)
        report.ledger.add(BoundRecord(f"truncation tail k={k}", ANCHORS["tail_fock"], lhs, tail,
                                      1e-10 * max(1.0, tail)))
        return
    rng = ctx.rng(2)
    grid, cgrid = kn["grid"], kn["col_grid"]
    l1 = weighted_symbol_norm(phi, mu, 0.0)
    half = weighted_symbol_norm(phi, mu, 0.5)
    ts = rng.uniform(-10, 10, kn["n_samples"])
    rows = [kernel_row_norm(phi, mu, t, grid) for t in ts]
    report.ledger.add(BoundRecord("Carleman row bound", ANCHORS["carleman"], max(rows), l1, 1e-3))
    xs = rng.uniform(-10, 10, kn["n_samples"])
    cols = [kernel_col_norm(phi, mu, x, cgrid) for x in xs]
    report.ledger.add(BoundRecord("semi-Carleman column bound", ANCHORS["semi_carleman"],
                                  max(cols), half, 1e-3))
    report.tables["kernel_norms"] = {
        "t": ts, "row_norm": rows, "x": xs, "col_norm": cols,
        "row_truncation_bound": [row_truncation_bound(phi, mu, t, grid) for t in ts],
        "col_truncation_bound": [col_truncation_bound(phi, mu, x, cgrid) for x in xs]}
    N = kn["N_list"][0]
    s = rng.standard_normal(2 * N + 1)
    f = PWVector(s / np.linalg.norm(s))
    report.ledger.add(linf_bound_check(phi, mu, f, grid))


def _diag_norm_sweep(ctx: _Context, report: Report):
    phi, mu = ctx.phi, ctx.mu
    sweep = operator_norm_sweep(phi, mu, ctx.knobs["N_list"])
    table = {"N": sweep.N_list, "sigma_max": sweep.sigma_max, "regime": sweep.regime,
             "bound": sweep.bound, "extrapolated": sweep.extrapolated,
             "converged": sweep.converged, "errors": sweep.errors}
    checked = sweep
    if sweep.regime == "sampled":
        checked = operator_norm_sweep(phi, mu, ctx.knobs["N_list"], compression=True)
        table["sigma_max_compression"] = checked.sigma_max
    report.tables["norm_sweep"] = table
    for N, s in zip(checked.N_list, checked.sigma_max):
        report.ledger.add(BoundRecord(f"PW norm bound N={N}", ANCHORS["prop_pw"], s,
                                      checked.bound, 1e-8))


def _diag_hs(ctx: _Context, report: Report):
    hs = hs_diagnostic(ctx.phi, ctx.mu, ctx.knobs["N_list"])
    report.tables["hs"] = {"N": hs.N_list, "frobenius": hs.frobenius,
                           "frobenius_square_truncation": hs.frobenius_square,
                           "slope": hs.slope}
    report.verdicts["hilbert_schmidt"] = hs.verdict


def _diag_spectrum(ctx: _Context, report: Report):
    rows, traces = [], {}
    k = ctx.knobs["spectrum_k"]
    for N in ctx.knobs["N_list"]:
        sp = singular_spectrum(build_sinc_matrix(ctx.phi, ctx.mu, N), k)
        rows.extend({"N": N, "index": i, "sigma": float(v)} for i, v in enumerate(sp.values))
        traces[N] = sp.trace_partial
    report.tables["singular_values"] = rows
    report.tables["trace_partial"] = traces


def _diag_verdicts(ctx: _Context, report: Report):
    phi, mu = ctx.phi, ctx.mu
    if ctx.cfg.space == "fock":
        b = boundedness_verdict(phi, mu, profile=ctx.profile)
        c = compactness_verdict(ctx.profile)
        report.verdicts["boundedness"] = {
            "verdict": b.verdict, "sup_abs": b.sup_abs, "l1_norm": b.l1_norm,
            "support_gap": b.support_gap, "growing": b.growing, "overflow": b.overflow,
            "bound_above_one": b.bound_above_one, "root_growth_A": b.root_growth_A,
            "liminf_root": b.liminf_root, "gap_at_inverse_A": b.gap_at_inverse_A,
            "notes": b.notes,
            "note_spectral_radius": "tested as |lambda_n| <= r(H) (non-strict)"}
        report.verdicts["compactness"] = {"verdict": c.verdict,
                                          "decays_to_zero": c.decays_to_zero,
                                          "tail_profile": c.tail_profile}
        if phi.nonnegative:
            report.ledger.add(BoundRecord("support gap on (0,1)", ANCHORS["gap"], b.gap_mass,
                                          0.0, ZERO_TOL))
        return
    l1 = weighted_symbol_norm(phi, mu, 0.0)
    half = weighted_symbol_norm(phi, mu, 0.5)
    report.verdicts["pw"] = {
        "verdict": "bounded" if math.isfinite(half) else "inconclusive",
        "regime": regime(mu), "l1_norm": l1, "sqrt_weighted_norm": half,
        "carleman": "yes" if math.isfinite(l1) else "no",
        "closable": "yes (every Carleman operator is closable)" if math.isfinite(l1) else "unknown",
        "pw_to_linf_bound": l1}


def _diag_cross_validate(ctx: _Context, report: Report):
    rep = cross_validate(ctx.phi, ctx.mu, N=ctx.knobs["cross_validate_N"], seed=ctx.cfg.seed)
    report.tables["cross_validate"] = rep.to_dict()
    report.ledger.add(BoundRecord("matrix vs direct quadrature", ANCHORS["three_path"],
                                  rep.matrix_max_abs, 0.0, rep.matrix_tol))
    report.ledger.add(BoundRecord("diagonal vs direct quadrature", ANCHORS["three_path"],
                                  rep.poly_max_rel, 0.0, rep.poly_tol))


_RUNNERS = {
    "moments": _diag_moments, "bounds": _diag_bounds, "norm_sweep": _diag_norm_sweep,
    "hs": _diag_hs, "spectrum": _diag_spectrum, "verdicts": _diag_verdicts,
    "cross_validate": _diag_cross_validate,
}


def run_experiment(config: ExperimentConfig | dict, out_dir=None, fmt: str = "csv") -> Report:
    """Run the diagnostics in declared order; failures are recorded, not raised."""
    cfg = config if isinstance(config, ExperimentConfig) else parse_config(config)
    report = Report(cfg.echo, cfg.digest, regime(cfg.measure))
    ctx = _Context(cfg)
    for name in cfg.diagnostics:
        if cfg.space == "fock" and name in PW_ONLY:
            report.skipped[name] = "PW-only diagnostic; space is fock"
            continue
        start = time.perf_counter()
        try:
            _RUNNERS[name](ctx, report)
        except Exception as exc:  # noqa: BLE001 - recorded per diagnostic
            report.errors[name] = f"{type(exc).__name__}: {exc}"
        report.timings[name] = time.perf_counter() - start
    kg = cfg.knobs["kernel_grid"]
    if kg is not None:
        t = np.asarray(kg["t"], float)
        x = np.asarray(kg["x"], float)
        K = kernel_values(cfg.symbol, cfg.measure, t[:, None], x[None, :])
        report.tables["kernel_grid"] = [{"t": float(a), "x": float(b), "K": float(K[i, j])}
                                        for i, a in enumerate(t) for j, b in enumerate(x)]
    if out_dir is not None:
        if fmt == "json":
            emit_json(report, out_dir)
        else:
            emit_csv(report, out_dir)
    return report


# -- emission -------------------------------------------------------------------------

def _write_csv(path: Path, header, rows):
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in r])


def emit_csv(report: Report, dest) -> list[Path]:
    """Write moments/singular_values/bounds (and kernel_grid when present) CSV files."""
    dest = Path(dest)
    dest.mkdir(parents=True, exist_ok=True)
    paths = []
    p = dest / "moments.csv"
    _write_csv(p, ["n", "lambda_n", "log_abs", "sign"],
               [(m["n"], m["lambda_n"], m["log_abs"], m["sign"]) for m in report.moments])
    paths.append(p)
    p = dest / "singular_values.csv"
    _write_csv(p, ["N", "index", "sigma"],
               [(r["N"], r["index"], r["sigma"]) for r in report.tables.get("singular_values", [])])
    paths.append(p)
    p = dest / "bounds.csv"
    _write_csv(p, ["bound_name", "anchor", "lhs", "rhs", "verdict"],
               [(r.bound_name, r.anchor, r.computed_lhs, r.computed_rhs, r.verdict)
                for r in report.ledger])
    paths.append(p)
    if "kernel_grid" in report.tables:
        p = dest / "kernel_grid.csv"
        _write_csv(p, ["t", "x", "K"],
                   [(r["t"], r["x"], r["K"]) for r in report.tables["kernel_grid"]])
        paths.append(p)
    paths.append(emit_json(report, dest))
    return paths


def emit_json(report: Report, dest) -> Path:
    dest = Path(dest)
    dest.mkdir(parents=True, exist_ok=True)
    p = dest / "report.json"
    p.write_text(report_json(report))
    (dest / "timings.json").write_text(json.dumps(report.timings, indent=2, sort_keys=True) + "\n")
    return p


def report_json(report: Report) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
