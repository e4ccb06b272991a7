"""Command-line front end.

    mdcavity [options] {bands,dispersion,zones,dos,energy,force,figure} ...

Output is CSV with ``#`` metadata lines (or JSON with ``--format json``).
Numbers are written with 17 significant digits.  Failures exit nonzero and
print ``{"error": <category>, "message": ...}`` on stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from importlib import metadata

import numpy as np

from . import _kernels
from .casimir import (
    BREAKDOWN_COLUMNS,
    ForcePoint,
    PERFECT_ETA,
    casimir_force,
    energy_breakdown,
    eta_bulk,
    eta_polariton,
    eta_polariton_asymptotic,
    eta_total_imaginary_freq,
    eta_total_real_freq,
    polariton_energy,
    sign_changes,
)
from .errors import CavityError, ConfigError
from .materials import DEFAULT_CHI_EPS, DEFAULT_CHI_MU, CavityModel, eval_magnetodielectric, refractive_index
from .optics import dos_grid
from .polaritons import ModeLabel, trace_mode
from .spectrum import Branch, band_limit_curve, band_limits_at_k, classify_zones

THREADS_ENV = "MDCAVITY_THREADS"

EXIT_CODES = {
    "usage": 2,
    "config": 2,
    "domain": 3,
    "pole": 3,
    "boundary": 3,
    "no-root": 4,
    "spurious-root": 4,
    "tracking": 4,
    "nonconvergence": 5,
    "error": 1,
}

FIGURES = (
    "fig2_index",
    "fig3a_bands_dos",
    "fig3b_dispersion",
    "fig_force",
    "fig4_eta",
    "fig5_asymptotes",
    "fig6_bulk",
    "fig7_per_polarization",
)

# per-figure defaults; sweep bounds are in W_r
FIGURE_DEFAULTS = {
    "fig2_index": {"omega_r": 1.0, "n": 501},
    "fig3a_bands_dos": {"omega_r": 0.1, "n": 121},
    "fig3b_dispersion": {"omega_r": 0.1, "n": 300},
    "fig_force": {"omega_r_min": 0.5, "omega_r_max": 10.0, "count": 40, "geometric": True},
    "fig4_eta": {"omega_r_min": 0.01, "omega_r_max": 20.0, "count": 30, "geometric": True},
    "fig5_asymptotes": {"omega_r_min": 0.01, "omega_r_max": 0.5, "count": 15, "geometric": True},
    "fig6_bulk": {"omega_r_min": 0.05, "omega_r_max": 10.0, "count": 16, "geometric": True},
    "fig7_per_polarization": {"omega_r_min": 0.05, "omega_r_max": 5.0, "count": 12, "geometric": True},
}


class UsageError(CavityError):
    category = "usage"


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:  # pragma: no cover
        return "0+unknown"


# ---------------------------------------------------------------------------
# configuration


@dataclass
class RunConfig:
    command: str = ""
    figure: str | None = None
    chi_eps: float = DEFAULT_CHI_EPS
    chi_mu: float = DEFAULT_CHI_MU
    omega_r: float | None = None
    omega_p: float | None = None
    omega_r_min: float | None = None
    omega_r_max: float | None = None
    count: int | None = None
    geometric: bool = False
    lambda_r_nm: float | None = None
    k_max: float = 3.0
    omega_max: float = 2.0
    n: int | None = None
    labels: list = field(default_factory=lambda: [m.value for m in ModeLabel])
    bulk_form: str = "z"
    real_totals: bool = False
    ratio: bool = False
    polaritons: bool = False
    epsrel: float | None = None
    tail_rtol: float | None = None
    threads: int | None = None
    output: str | None = None
    format: str = "csv"
    no_timestamp: bool = False

    def validate(self) -> None:
        if self.omega_p is not None:
            raise ConfigError("omega_p: a plasma frequency distinct from omega_r is not implemented")
        for name in ("chi_eps", "chi_mu", "k_max", "omega_max"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ConfigError(f"{name}: expected a finite number, got {v!r}")
        CavityModel(self.chi_eps, self.chi_mu, 1.0)
        sweep = [self.omega_r_min, self.omega_r_max, self.count]
        if any(v is not None for v in sweep):
            if any(v is None for v in sweep):
                raise ConfigError("omega_r_min/omega_r_max/count: a sweep needs all three")
            if self.omega_r is not None:
                raise ConfigError("omega_r: give either omega_r or a sweep range, not both")
            if not 0.0 < self.omega_r_min <= self.omega_r_max:
                raise ConfigError("omega_r_min: need 0 < omega_r_min <= omega_r_max")
            if int(self.count) < 1:
                raise ConfigError("count: must be at least 1")
        if self.omega_r is not None and not (math.isfinite(self.omega_r) and self.omega_r > 0):
            raise ConfigError("omega_r: must be positive")
        if self.lambda_r_nm is not None and not self.lambda_r_nm > 0:
            raise ConfigError("lambda_r_nm: must be positive")
        if self.n is not None and self.n < 2:
            raise ConfigError("n: need at least 2 grid points")
        if self.format not in ("csv", "json"):
            raise ConfigError("format: csv or json")
        if self.bulk_form not in ("z", "k"):
            raise ConfigError("bulk_form: z or k")
        if self.threads is not None and self.threads < 1:
            raise ConfigError("threads: must be at least 1")
        for lab in self.labels:
            try:
                ModeLabel(lab)
            except ValueError:
                raise ConfigError(f"labels: unknown mode label {lab!r}") from None
        if self.figure is not None and self.figure not in FIGURES:
            raise ConfigError(f"figure: unknown figure id {self.figure!r}")

    def grid(self, default: float = 1.0) -> np.ndarray:
        if self.omega_r_min is not None:
            n = int(self.count)
            if self.geometric:
                return np.geomspace(self.omega_r_min, self.omega_r_max, n)
            return np.linspace(self.omega_r_min, self.omega_r_max, n)
        return np.array([self.omega_r if self.omega_r is not None else default])

    def model(self, omega_r: float | None = None) -> CavityModel:
        wr = omega_r if omega_r is not None else (self.omega_r if self.omega_r is not None else 1.0)
        return CavityModel(self.chi_eps, self.chi_mu, float(wr))

    def n_threads(self) -> int:
        if self.threads is not None:
            return self.threads
        env = os.environ.get(THREADS_ENV)
        if env:
            try:
                v = int(env)
            except ValueError:
                raise ConfigError(f"{THREADS_ENV}: expected an integer, got {env!r}") from None
            if v < 1:
                raise ConfigError(f"{THREADS_ENV}: must be at least 1")
            return v
        return os.cpu_count() or 1


_FIELDS = {f.name for f in fields(RunConfig)}
_FILE_KEYS = _FIELDS - {"command", "figure"}


def _add_common(p: argparse.ArgumentParser) -> None:
    # defaults are SUPPRESS so that only explicit flags override the file
    S = argparse.SUPPRESS
    g = p.add_argument_group("model and sweep")
    g.add_argument("--config", default=S, help="JSON file with RunConfig keys")
    g.add_argument("--chi-eps", type=float, default=S)
    g.add_argument("--chi-mu", type=float, default=S)
    g.add_argument("--omega-r", type=float, default=S, help="W_r = 2 pi a / lambda_r")
    g.add_argument("--omega-p", type=float, default=S, help="reserved; rejected")
    g.add_argument("--omega-r-min", type=float, default=S)
    g.add_argument("--omega-r-max", type=float, default=S)
    g.add_argument("--count", type=int, default=S)
    g.add_argument("--geometric", action="store_true", default=S)
    g.add_argument("--lambda-r-nm", type=float, default=S, help="adds the gap width a in nm")
    g = p.add_argument_group("grids and numerics")
    g.add_argument("--k-max", type=float, default=S, help="K range in units of W_r")
    g.add_argument("--omega-max", type=float, default=S, help="W range in units of W_r")
    g.add_argument("--n", type=int, default=S, help="points per grid axis")
    g.add_argument("--labels", nargs="+", default=S)
    g.add_argument("--bulk-form", choices=("z", "k"), default=S)
    g.add_argument("--real-totals", action="store_true", default=S)
    g.add_argument("--ratio", action="store_true", default=S, help="append eta_total / eta_perfect")
    g.add_argument("--polaritons", action="store_true", default=S, help="force: add the polariton-only force")
    g.add_argument("--epsrel", type=float, default=S)
    g.add_argument("--tail-rtol", type=float, default=S)
    g = p.add_argument_group("output")
    g.add_argument("--threads", type=int, default=S, help=f"worker processes (env {THREADS_ENV})")
    g.add_argument("-o", "--output", default=S)
    g.add_argument("--format", choices=("csv", "json"), default=S)
    g.add_argument("--no-timestamp", action="store_true", default=S)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: D401
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mdcavity", description="Mode structure and Casimir energy of a metal / magneto-dielectric cavity.")
    p.add_argument("--version", action="version", version=f"mdcavity {_version()}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "bands": "band limits W(K)",
        "dispersion": "polariton dispersion curves",
        "zones": "zone map on a (K, W) grid",
        "dos": "spectral density D_s, D_p on a (K, W) grid",
        "energy": "energy breakdown at one W_r or a sweep",
        "force": "Casimir force over a W_r sweep",
        "figure": "dataset behind one figure",
    }
    for name, h in helps.items():
        sp = sub.add_parser(name, help=h)
        if name == "figure":
            sp.add_argument("figure", help="one of: " + ", ".join(FIGURES) + " (prefix accepted)")
        _add_common(sp)
    return p


def _resolve_figure(name: str) -> str:
    if name in FIGURES:
        return name
    hits = [f for f in FIGURES if f.startswith(name + "_") or f == name]
    if len(hits) == 1:
        return hits[0]
    raise ConfigError(f"figure: unknown or ambiguous figure id {name!r}")


def parse_config(argv: list[str]) -> RunConfig:
    """Flags override values from ``--config``; unknown file keys are errors."""
    ns = vars(build_parser().parse_args(argv))
    values: dict = {}
    path = ns.pop("config", None)
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"config: cannot read {path}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config: top level must be an object")
        for k, v in data.items():
            key = k.replace("-", "_")
            if key not in _FILE_KEYS:
                raise ConfigError(f"config: unknown key {k!r}")
            values[key] = v
    values.update(ns)
    if values.get("figure") is not None:
        values["figure"] = _resolve_figure(values["figure"])
        sweep_keys = ("omega_r_min", "omega_r_max", "count", "geometric")
        single = "omega_r" in values and not any(k in values for k in sweep_keys)
        for k, v in FIGURE_DEFAULTS[values["figure"]].items():
            if single and k in sweep_keys:
                continue
            values.setdefault(k, v)
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# output


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def _json_value(v):
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, np.integer):
        return int(v)
    return v


@dataclass
class Table:
    columns: list
    rows: list
    summary: dict = field(default_factory=dict)


def _metadata(cfg: RunConfig, argv: list[str]) -> dict:
    params = {k: getattr(cfg, k) for k in ("chi_eps", "chi_mu", "omega_r", "omega_r_min", "omega_r_max", "count", "geometric", "lambda_r_nm")}
    tol = {k: getattr(cfg, k) for k in ("epsrel", "tail_rtol", "bulk_form", "real_totals")}
    meta = {
        "program": "mdcavity",
        "version": _version(),
        "backend": _kernels.BACKEND,
        "command": " ".join(["mdcavity", *argv]),
        "parameters": params,
        "tolerances": tol,
        "eta_perfect": PERFECT_ETA,
    }
    if not cfg.no_timestamp:
        meta["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    return meta


def render(table: Table, cfg: RunConfig, argv: list[str]) -> str:
    meta = _metadata(cfg, argv)
    if cfg.format == "json":
        doc = {
            "metadata": meta,
            "columns": table.columns,
            "rows": [[_json_value(v) for v in r] for r in table.rows],
            "summary": {k: _json_value(v) if not isinstance(v, list) else [_json_value(x) for x in v] for k, v in table.summary.items()},
        }
        return json.dumps(doc, indent=1, sort_keys=False) + "\n"
    lines = [f"# {k}: {json.dumps(v, sort_keys=True)}" for k, v in meta.items()]
    if table.summary:
        lines.append(f"# summary: {json.dumps({k: _json_value(v) if not isinstance(v, list) else [_json_value(x) for x in v] for k, v in table.summary.items()}, sort_keys=True)}")
    lines.append(",".join(table.columns))
    lines.extend(",".join(_fmt(v) for v in r) for r in table.rows)
    return "\n".join(lines) + "\n"


def _pmap(fn, items, cfg: RunConfig) -> list:
    """Ordered map over worker processes (serial for one thread or one item)."""
    items = list(items)
    n = min(cfg.n_threads(), len(items))
    if n <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))


# ---------------------------------------------------------------------------
# commands


def cmd_bands(cfg: RunConfig) -> Table:
    m = cfg.model()
    wr = m.omega_r
    k = np.linspace(0.0, cfg.k_max * wr, cfg.n or 301)
    rows = []
    for kk in k:
        b = band_limits_at_k(m, float(kk))
        rows.append([kk, b["plus"], b["minus_evanescent"], b["minus_propagating"], b["metal"], kk])
    return Table(["K", "omega_plus", "omega_minus_evanescent", "omega_minus_propagating", "omega_metal", "light_cone"], rows)


def _dispersion_rows(m: CavityModel, labels, n: int, k_max: float | None):
    rows = []
    for lab in labels:
        c = trace_mode(m, lab, n=n)
        order = np.argsort(c.z)
        for z, w, r in zip(c.z[order], c.omega[order], (c.residual[order] if c.residual is not None else [None] * len(order))):
            k = math.sqrt(max(z + w * w, 0.0))
            if k_max is None or k <= k_max:
                rows.append([lab, z, k, w, r])
    return rows


def cmd_dispersion(cfg: RunConfig) -> Table:
    m = cfg.model()
    rows = _dispersion_rows(m, cfg.labels, cfg.n or 400, None)
    return Table(["label", "z", "K", "omega", "residual"], rows)


def _kw_grid(cfg: RunConfig, m: CavityModel, n_default: int):
    n = cfg.n or n_default
    wr = m.omega_r
    k = np.linspace(0.0, cfg.k_max * wr, n)
    w = np.linspace(cfg.omega_max * wr / n, cfg.omega_max * wr, n)
    return k, w


def cmd_zones(cfg: RunConfig) -> Table:
    m = cfg.model()
    k, w = _kw_grid(cfg, m, 101)
    W, K = np.meshgrid(w, k)
    z = classify_zones(m, W, K)
    rows = [[K[i, j], W[i, j], z[i, j].value if z[i, j] is not None else "boundary"] for i in range(k.size) for j in range(w.size)]
    return Table(["K", "omega", "zone"], rows)


def cmd_dos(cfg: RunConfig) -> Table:
    m = cfg.model()
    k, w = _kw_grid(cfg, m, 101)
    ds, dp, zones = dos_grid(m, w, k)
    rows = []
    for i, kk in enumerate(k):
        for j, ww in enumerate(w):
            zn = zones[i, j]
            rows.append([kk, ww, ds[i, j], dp[i, j], zn.value if zn is not None else "boundary"])
    return Table(["K", "omega", "D_s", "D_p", "zone"], rows)


def _energy_task(args):
    cfg, wr = args
    m = cfg.model(wr)
    b = energy_breakdown(m, bulk_form=cfg.bulk_form, with_force=True, real_totals=cfg.real_totals)
    row = b.row()
    extra = [b.bulk_s.eta_0, b.bulk_s.eta_gt, b.bulk_s.eta_lt, b.bulk_p.eta_0, b.bulk_p.eta_gt, b.bulk_p.eta_lt]
    return [row[c] for c in BREAKDOWN_COLUMNS] + extra + ([b.eta_total / PERFECT_ETA] if cfg.ratio else [])


def cmd_energy(cfg: RunConfig) -> Table:
    rows = _pmap(_energy_task, [(cfg, float(w)) for w in cfg.grid()], cfg)
    cols = list(BREAKDOWN_COLUMNS) + ["eta_0_s", "eta_gt_s", "eta_lt_s", "eta_0_p", "eta_gt_p", "eta_lt_p"]
    if cfg.ratio:
        cols.append("eta_total_ratio")
    return Table(cols, rows)


def _force_task(args):
    cfg, wr, with_pol = args
    m = cfg.model(wr)
    total = casimir_force(m, [wr])[0]
    row = [wr, total.force_norm, total.eta, total.deta, 1.0 / wr**4]
    if with_pol:
        pf = casimir_force(m, [wr], energy=polariton_energy)[0]
        row += [pf.force_norm, pf.eta]
    return row


def cmd_force(cfg: RunConfig, with_pol: bool | None = None) -> Table:
    with_pol = cfg.polaritons if with_pol is None else with_pol
    grid = cfg.grid()
    rows = _pmap(_force_task, [(cfg, float(w), with_pol) for w in grid], cfg)
    cols = ["omega_r", "force_norm", "eta_total", "deta_total", "force_perfect"]
    if with_pol:
        cols += ["force_polaritons", "eta_polaritons"]
    pts = [ForcePoint(r[0], r[1], r[2], r[3]) for r in rows]
    summary = {"sign_changes": sign_changes(pts), "repulsive": [r[0] for r in rows if r[1] < 0]}
    if with_pol:
        ppts = [ForcePoint(r[0], r[5], r[6], math.nan) for r in rows]
        summary["polariton_sign_changes"] = sign_changes(ppts)
        summary["polariton_repulsive"] = [r[0] for r in rows if r[5] < 0]
    summary["repulsive"] = [min(summary["repulsive"]), max(summary["repulsive"])] if summary["repulsive"] else []
    if with_pol:
        pr = summary["polariton_repulsive"]
        summary["polariton_repulsive"] = [min(pr), max(pr)] if pr else []
    return Table(cols, rows, summary)


# figure recipes


def fig2_index(cfg: RunConfig) -> Table:
    m = cfg.model()
    wr = m.omega_r
    n = cfg.n or 501
    x = np.linspace(2.5 / n, 2.5, n)
    x = x[np.abs(x - 1.0) > 1e-6]
    w = x * wr
    nr = refractive_index(m, w)
    eps, mu = eval_magnetodielectric(m, w)
    rows = [[a, b, c.real, c.imag, e, u] for a, b, c, e, u in zip(x, w, nr, eps, mu)]
    return Table(["omega_over_omega_r", "omega", "re_n", "im_n", "eps_R", "mu_R"], rows)


def fig3a_bands_dos(cfg: RunConfig) -> Table:
    m = cfg.model()
    k, w = _kw_grid(cfg, m, 121)
    rows = []
    for br in (Branch.PLUS, Branch.MINUS_EVANESCENT, Branch.MINUS_PROPAGATING, Branch.METAL):
        c = band_limit_curve(m, br, k=k)
        rows += [["band", br.value, kk, ww, None, None, None] for kk, ww in zip(k, c.omega)]
    ds, dp, zones = dos_grid(m, w, k)
    for i, kk in enumerate(k):
        for j, ww in enumerate(w):
            zn = zones[i, j]
            rows.append(["dos", "", kk, ww, ds[i, j], dp[i, j], zn.value if zn is not None else "boundary"])
    return Table(["dataset", "label", "K", "omega", "D_s", "D_p", "zone"], rows)


def fig3b_dispersion(cfg: RunConfig) -> Table:
    m = cfg.model()
    kmax = cfg.k_max * m.omega_r
    rows = [["mode", *r] for r in _dispersion_rows(m, cfg.labels, cfg.n or 300, kmax)]
    k = np.linspace(0.0, kmax, cfg.n or 300)
    for br in (Branch.PLUS, Branch.MINUS_EVANESCENT):
        c = band_limit_curve(m, br, k=k)
        rows += [["band", br.value, kk * kk - ww * ww, kk, ww, None] for kk, ww in zip(k, c.omega)]
    return Table(["dataset", "label", "z", "K", "omega", "residual"], rows)


def fig_force(cfg: RunConfig) -> Table:
    return cmd_force(cfg, with_pol=True)


def _eta_task(args):
    cfg, wr = args
    m = cfg.model(wr)
    es, ep, em = (eta_polariton(m, lab) for lab in ("s+", "p+", "p-"))
    ts, tp = eta_total_imaginary_freq(m, 0), eta_total_imaginary_freq(m, 1)
    return [wr, es, ep, em, ts, tp, ts + tp, es / wr, ep / wr, em / wr, ts / wr, tp / wr, (ts + tp) / wr]


def fig4_eta(cfg: RunConfig) -> Table:
    rows = _pmap(_eta_task, [(cfg, float(w)) for w in cfg.grid()], cfg)
    cols = ["omega_r", "eta_s_plus", "eta_p_plus", "eta_p_minus", "eta_total_s", "eta_total_p", "eta_total"]
    cols += [c + "_over_omega_r" for c in cols[1:]]
    return Table(cols, rows)


def _asym_task(args):
    import warnings

    cfg, wr = args
    m = cfg.model(wr)
    out = [wr]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        for lab in ("s+", "p+", "p-"):
            out += [eta_polariton(m, lab), eta_polariton_asymptotic(m, lab)]
    return out


def fig5_asymptotes(cfg: RunConfig) -> Table:
    rows = _pmap(_asym_task, [(cfg, float(w)) for w in cfg.grid()], cfg)
    return Table(["omega_r", "eta_s_plus", "eta_s_plus_asymptote", "eta_p_plus", "eta_p_plus_asymptote", "eta_p_minus", "eta_p_minus_asymptote"], rows)


def _bulk_task(args):
    cfg, wr = args
    m = cfg.model(wr)
    kw = {} if cfg.epsrel is None else {"epsrel": cfg.epsrel}
    bs, bp = eta_bulk(m, 0, cfg.bulk_form, **kw), eta_bulk(m, 1, cfg.bulk_form, **kw)
    return [wr, bs.eta_0, bs.eta_gt, bs.eta_lt, bs.eta_bulk, bp.eta_0, bp.eta_gt, bp.eta_lt, bp.eta_bulk]


def fig6_bulk(cfg: RunConfig) -> Table:
    rows = _pmap(_bulk_task, [(cfg, float(w)) for w in cfg.grid()], cfg)
    return Table(["omega_r", "eta_0_s", "eta_gt_s", "eta_lt_s", "eta_bulk_s", "eta_0_p", "eta_gt_p", "eta_lt_p", "eta_bulk_p"], rows)


def _pol_task(args):
    cfg, wr = args
    m = cfg.model(wr)
    es, ep, em = (eta_polariton(m, lab) for lab in ("s+", "p+", "p-"))
    bs, bp = eta_bulk(m, 0, cfg.bulk_form).eta_bulk, eta_bulk(m, 1, cfg.bulk_form).eta_bulk
    total = eta_total_real_freq if cfg.real_totals else eta_total_imaginary_freq
    ts, tp = total(m, 0), total(m, 1)
    return [wr, ts, es, bs, es + bs, tp, ep + em, bp, ep + em + bp]


def fig7_per_polarization(cfg: RunConfig) -> Table:
    rows = _pmap(_pol_task, [(cfg, float(w)) for w in cfg.grid()], cfg)
    return Table(
        ["omega_r", "eta_total_s", "eta_s_plus", "eta_bulk_s", "eta_modes_s", "eta_total_p", "eta_p_polaritons", "eta_bulk_p", "eta_modes_p"],
        rows,
    )


RECIPES = {name: globals()[name] for name in FIGURES}
COMMANDS = {
    "bands": cmd_bands,
    "dispersion": cmd_dispersion,
    "zones": cmd_zones,
    "dos": cmd_dos,
    "energy": cmd_energy,
    "force": cmd_force,
}


def run(cfg: RunConfig) -> Table:
    if cfg.command == "figure":
        return RECIPES[cfg.figure](cfg)
    return COMMANDS[cfg.command](cfg)


def _with_length(table: Table, cfg: RunConfig) -> Table:
    """Append the gap width in nm when a resonance wavelength is given."""
    if cfg.lambda_r_nm is None or "omega_r" not in table.columns:
        return table
    i = table.columns.index("omega_r")
    rows = [list(r) + [r[i] * cfg.lambda_r_nm / (2.0 * math.pi)] for r in table.rows]
    return Table(table.columns + ["a_nm"], rows, table.summary)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        cfg = parse_config(argv)
        table = _with_length(run(cfg), cfg)
        text = render(table, cfg, argv)
        if cfg.output:
            with open(cfg.output, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
            if table.summary:
                sys.stdout.write(json.dumps({"summary": json.loads(json.dumps(table.summary, default=float))}, sort_keys=True) + "\n")
        else:
            sys.stdout.write(text)
        return 0
    except CavityError as exc:
        sys.stderr.write(json.dumps({"error": exc.category, "message": str(exc)}) + "\n")
        return EXIT_CODES.get(exc.category, 1)
    except KeyboardInterrupt:  # pragma: no cover
        return 130


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
