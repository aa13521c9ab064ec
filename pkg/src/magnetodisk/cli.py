"""Command-line driver: magnetodisk <eigen|minimize|sweep|fields|verify>.

Exit codes: 0 success, 1 numerical failure, 2 invalid input.  Output files
carry a metadata header with the package version and a hash of the resolved
configuration; reruns with identical configuration and seed are bit-identical.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np

from . import __version__
from .bifurcation import amplitude_fit_slope, detected_threshold, trace_branches
from .eigen import smallest_eigenpair
from .fields import check_reduction_identity, magnetization_grid, reconstruct_w
from .grid import build_grid, integrate, l2_norm
from .operators import ModelParams, Profile, energy, fold, gradient, nonlinear_split
from .solver import minimize, random_profile

__all__ = ["RunConfig", "main"]


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    n: int = 512
    grading: float = 2.0
    mu: float | None = None
    mu_range: tuple[float, float, int] | None = None
    lam: float | None = None
    seed: int = 0
    tol: float = 1e-8
    max_iter: int = 500
    init_eps: float = 0.1
    out: str = "."
    format: str = "csv"
    samples: int = 41
    inject_sign_error: bool = False


_CONFIG_KEYS = {
    "n", "grading", "mu", "mu_range", "lam", "seed", "tol",
    "max_iter", "init_eps", "out", "format", "samples",
}


def _parse_mu_range(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"mu range must look like LO:HI:STEPS, got {text!r}")
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"bad mu range {text!r}: {exc}") from exc
    return lo, hi, steps


def _load_config_file(path: str) -> dict:
    import json

    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "mu_range" in raw and raw["mu_range"] is not None:
        rng = raw["mu_range"]
        if isinstance(rng, str):
            raw["mu_range"] = _parse_mu_range(rng)
        elif isinstance(rng, (list, tuple)) and len(rng) == 3:
            raw["mu_range"] = (float(rng[0]), float(rng[1]), int(rng[2]))
        else:
            raise ConfigError(f"mu_range must be [lo, hi, steps], got {rng!r}")
    return raw


def resolve_config(args: argparse.Namespace) -> RunConfig:
    merged: dict = {}
    if args.config is not None:
        merged.update(_load_config_file(args.config))
    for key in _CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    merged.setdefault("inject_sign_error", getattr(args, "inject_sign_error", False))

    cfg = RunConfig(command=args.command, **merged)

    if int(cfg.n) != cfg.n or cfg.n < 2:
        raise ConfigError(f"n must be an integer >= 2, got {cfg.n}")
    cfg = replace(cfg, n=int(cfg.n))
    if not np.isfinite(cfg.grading) or cfg.grading < 1.0:
        raise ConfigError(f"grading must be >= 1, got {cfg.grading}")
    if cfg.format not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {cfg.format!r}")
    if cfg.tol <= 0.0 or cfg.max_iter < 1 or cfg.init_eps <= 0.0 or cfg.samples < 2:
        raise ConfigError("tol, max_iter, init_eps, and samples must be positive")

    if cfg.mu is not None and cfg.mu_range is not None:
        raise ConfigError("give either mu or mu_range, not both")
    if cfg.lam is not None:
        lam_mu = cfg.lam**2 / 2.0
        if cfg.mu is None:
            cfg = replace(cfg, mu=lam_mu)
        elif abs(cfg.mu - lam_mu) > 1e-12 * max(1.0, abs(cfg.mu)):
            raise ConfigError(
                f"inconsistent parameters: mu={cfg.mu} but lambda^2/2={lam_mu}"
            )
    if cfg.mu is not None and cfg.mu < 0.0:
        raise ConfigError(f"mu must be >= 0, got {cfg.mu}")

    if cfg.command in ("minimize", "fields") and cfg.mu is None:
        raise ConfigError(f"{cfg.command} requires mu (or lambda)")
    if cfg.command == "sweep":
        if cfg.mu_range is None:
            raise ConfigError("sweep requires mu_range LO:HI:STEPS")
        lo, hi, steps = cfg.mu_range
        if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi) or steps < 2:
            raise ConfigError(f"bad mu_range {cfg.mu_range}")
        if lo < 0.0:
            raise ConfigError("mu_range must stay nonnegative")
    return cfg


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _json_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(
            f'{pad}  "{k}": {_json_text(v, indent + 1)}' for k, v in obj.items()
        )
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = ", ".join(_json_text(v, indent) for v in obj)
        return "[" + items + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return _fmt(x) if np.isfinite(x) else "null"
    if obj is None:
        return "null"
    if isinstance(obj, str):
        import json

        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj)}")


def _config_hash(cfg: RunConfig) -> str:
    # The destination directory does not influence any computed value, so it
    # stays out of the run identity.
    payload = _json_text(
        {k: v for k, v in sorted(asdict(cfg).items()) if k != "out"}
    )
    return hashlib.sha256(payload.encode()).hexdigest()[:12]


class _Writer:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.out = Path(cfg.out)
        self.meta = {"version": __version__, "config_hash": _config_hash(cfg)}

    def json(self, name: str, payload: dict) -> Path:
        self.out.mkdir(parents=True, exist_ok=True)
        path = self.out / name
        body = dict(payload)
        body["meta"] = self.meta
        path.write_text(_json_text(body) + "\n")
        return path

    def table(self, stem: str, columns: list[str], rows) -> Path:
        self.out.mkdir(parents=True, exist_ok=True)
        if self.cfg.format == "csv":
            path = self.out / f"{stem}.csv"
            lines = [
                f"# magnetodisk={self.meta['version']} config_hash={self.meta['config_hash']}",
                ",".join(columns),
            ]
            for row in rows:
                lines.append(",".join(_fmt(x) if isinstance(x, (float, np.floating)) else str(x)
                                      for x in row))
            path.write_text("\n".join(lines) + "\n")
        else:
            path = self.out / f"{stem}.json"
            payload = {
                "meta": self.meta,
                "columns": columns,
                "rows": [list(row) for row in rows],
            }
            path.write_text(_json_text(payload) + "\n")
        return path


def _params(cfg: RunConfig) -> ModelParams:
    return ModelParams(mu=cfg.mu, lam=cfg.lam, tol=cfg.tol, max_iter=cfg.max_iter)


def cmd_eigen(cfg: RunConfig) -> int:
    grid = build_grid(cfg.n, cfg.grading)
    pair = smallest_eigenpair(grid)
    writer = _Writer(cfg)
    writer.json(
        "eigen.json",
        {
            "gamma0": pair.gamma0,
            "n": cfg.n,
            "grading": cfg.grading,
            "residual": pair.residual,
            "iterations": pair.iterations,
        },
    )
    writer.table(
        "phi0", ["r", "phi0"],
        zip(grid.nodes.tolist(), pair.phi0.values.tolist()),
    )
    return 0


def cmd_minimize(cfg: RunConfig) -> int:
    grid = build_grid(cfg.n, cfg.grading)
    params = _params(cfg)
    pair = smallest_eigenpair(grid)
    report = minimize(grid, params, eigenpair=pair, init_eps=cfg.init_eps)
    w = reconstruct_w(report.minimizer, params.lam)
    writer = _Writer(cfg)
    writer.json(
        "report.json",
        {
            "mu": params.mu,
            "lambda": params.lam,
            "energy": report.energy,
            "residual": report.residual,
            "iterations": report.iterations,
            "converged": report.converged,
            "fold_applied": report.fold_applied,
            "bc_residual": report.bc_residual,
            "trivial": report.trivial,
        },
    )
    writer.table(
        "profile", ["r", "h", "w"],
        zip(grid.nodes.tolist(), report.minimizer.values.tolist(), w.values.tolist()),
    )
    if report.diverged or not report.converged:
        print(f"minimize did not converge at mu={params.mu}", file=sys.stderr)
        return 1
    return 0


def cmd_sweep(cfg: RunConfig) -> int:
    grid = build_grid(cfg.n, cfg.grading)
    lo, hi, steps = cfg.mu_range
    params = ModelParams(mu=lo, tol=cfg.tol, max_iter=cfg.max_iter)
    diagram = trace_branches(grid, params, lo, hi, steps, init_eps=cfg.init_eps)
    writer = _Writer(cfg)
    writer.table(
        "diagram", ["mu", "branch", "beta", "energy"],
        ((q.mu, q.branch, q.beta, q.energy) for q in diagram.points),
    )
    writer.json(
        "summary.json",
        {
            "gamma0": diagram.gamma0,
            "cbar": diagram.cbar,
            "threshold": detected_threshold(diagram),
            "slope": amplitude_fit_slope(diagram),
            "mu_step": diagram.mu_step,
            "truncated_at": diagram.truncated_at,
        },
    )
    if diagram.truncated_at is not None:
        print(f"continuation failed at mu={diagram.truncated_at}", file=sys.stderr)
        return 1
    return 0


def cmd_fields(cfg: RunConfig) -> int:
    grid = build_grid(cfg.n, cfg.grading)
    params = _params(cfg)
    pair = smallest_eigenpair(grid)
    report = minimize(grid, params, eigenpair=pair, init_eps=cfg.init_eps)
    w = reconstruct_w(report.minimizer, params.lam)

    from scipy.interpolate import PchipInterpolator

    w_of_r = PchipInterpolator(grid.nodes, w.values, extrapolate=False)
    axis = np.linspace(-1.0, 1.0, cfg.samples)
    xg, yg = np.meshgrid(axis, axis)
    xs, ys = xg.ravel(), yg.ravel()
    keep = xs**2 + ys**2 <= 1.0
    xs, ys = xs[keep], ys[keep]
    m = magnetization_grid(report.minimizer, xs, ys)
    wvals = w_of_r(np.hypot(xs, ys))

    writer = _Writer(cfg)
    writer.table(
        "fields", ["x", "y", "m1", "m2", "m3", "w"],
        zip(xs.tolist(), ys.tolist(), m[:, 0].tolist(), m[:, 1].tolist(),
            m[:, 2].tolist(), wvals.tolist()),
    )
    if report.diverged or not report.converged:
        print(f"minimize did not converge at mu={params.mu}", file=sys.stderr)
        return 1
    return 0


def _verify_checks(cfg: RunConfig) -> dict:
    grid = build_grid(cfg.n, cfg.grading)
    rng = np.random.default_rng(cfg.seed)
    checks: dict[str, dict] = {}
    skipped = "skipped (insufficient resolution)"

    worst_rel = 0.0
    p = ModelParams(mu=1.3)
    for _ in range(5):
        h = random_profile(grid, rng, amplitude=1.0)
        v = random_profile(grid, rng, amplitude=1.0)
        g = gradient(h, p).values
        if cfg.inject_sign_error:
            g = -g
        directional = 2.0 * np.pi * integrate(grid, g * v.values)
        t = 1e-5
        plus = energy(Profile(grid, h.values + t * v.values), p)
        minus = energy(Profile(grid, h.values - t * v.values), p)
        fd = (plus - minus) / (2.0 * t)
        worst_rel = max(worst_rel, abs(directional - fd) / max(1.0, abs(fd)))
    checks["gradient_consistency"] = {
        "status": "pass" if worst_rel < 1e-6 else "fail",
        "worst_relative_error": worst_rel,
    }

    worst_slack = np.inf
    for _ in range(20):
        mu = rng.uniform(0.0, 4.0)
        h = random_profile(grid, rng, amplitude=np.pi)
        slack = energy(h, ModelParams(mu=mu)) + np.pi * mu / 4.0
        worst_slack = min(worst_slack, slack)
    checks["energy_lower_bound"] = {
        "status": "pass" if worst_slack >= -1e-6 else "fail",
        "worst_slack": worst_slack,
    }

    worst_sym = 0.0
    p_sym = ModelParams(mu=2.0)
    for sign in (-1.0, 1.0):
        for _ in range(5):
            h = random_profile(grid, rng, amplitude=np.pi / 2)
            one_branch = Profile(grid, sign * np.abs(h.values))
            e0 = energy(one_branch, p_sym)
            worst_sym = max(worst_sym, abs(energy(fold(one_branch), p_sym) - e0))
            negated = Profile(grid, -one_branch.values)
            worst_sym = max(worst_sym, abs(energy(negated, p_sym) - e0))
    checks["fold_odd_symmetry"] = {
        "status": "pass" if worst_sym <= 1e-10 else "fail",
        "worst_mismatch": worst_sym,
    }

    if cfg.n < 64:
        checks["cubic_remainder_decay"] = {"status": skipped}
        checks["reduction_identity"] = {"status": skipped}
        return checks

    pair = smallest_eigenpair(grid)
    p_thr = ModelParams(mu=pair.gamma0 / 2.0)
    rates = []
    prev = None
    for eps in (0.1, 0.05, 0.025):
        scaled = Profile(grid, eps * pair.phi0.values)
        _, _, rem = nonlinear_split(scaled, p_thr)
        q = l2_norm(grid, rem.values) / eps**3
        if prev is not None:
            rates.append(prev / q)
        prev = q
    checks["cubic_remainder_decay"] = {
        "status": "pass" if all(rate >= 3.0 for rate in rates) else "fail",
        "decay_factors": rates,
    }

    p_min = ModelParams(mu=2.0, tol=cfg.tol, max_iter=cfg.max_iter)
    report = minimize(grid, p_min, eigenpair=pair)
    err = check_reduction_identity(report.minimizer, samples=100, step=1e-4,
                                   seed=cfg.seed)
    checks["reduction_identity"] = {
        "status": "pass" if (report.converged and err <= 1e-4) else "fail",
        "max_error": err,
    }
    return checks


def cmd_verify(cfg: RunConfig) -> int:
    checks = _verify_checks(cfg)
    passed = all(c["status"] != "fail" for c in checks.values())
    writer = _Writer(cfg)
    writer.json("verify.json", {"checks": checks, "passed": passed})
    return 0 if passed else 1


_COMMANDS = {
    "eigen": cmd_eigen,
    "minimize": cmd_minimize,
    "sweep": cmd_sweep,
    "fields": cmd_fields,
    "verify": cmd_verify,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="magnetodisk",
        description="Radial magneto-elastic disk: threshold eigenpair, energy "
                    "minimization, branch tracing, and field reconstruction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    descriptions = {
        "eigen": "solve the threshold eigenproblem",
        "minimize": "minimize the energy at fixed mu",
        "sweep": "trace solution branches over a mu range",
        "fields": "reconstruct magnetization and displacement on the disk",
        "verify": "run the built-in invariant suite",
    }
    for name, text in descriptions.items():
        sp = sub.add_parser(name, help=text)
        sp.add_argument("--config", help="JSON config file")
        sp.add_argument("--n", type=int, help="mesh cells (default 512)")
        sp.add_argument("--grading", type=float, help="mesh grading (default 2)")
        sp.add_argument("--mu", type=float, help="field strength parameter")
        sp.add_argument("--mu-range", dest="mu_range", type=_parse_mu_range,
                        metavar="LO:HI:STEPS", help="sweep range")
        sp.add_argument("--lambda", dest="lam", type=float,
                        help="coupling; must satisfy mu = lambda^2/2")
        sp.add_argument("--out", help="output directory (default .)")
        sp.add_argument("--format", choices=("csv", "json"),
                        help="table format (default csv)")
        sp.add_argument("--seed", type=int, help="RNG seed (default 0)")
        sp.add_argument("--tol", type=float, help="solver residual tolerance")
        sp.add_argument("--max-iter", dest="max_iter", type=int,
                        help="solver iteration cap")
        sp.add_argument("--init-eps", dest="init_eps", type=float,
                        help="seed amplitude for the default start")
        sp.add_argument("--samples", type=int,
                        help="lattice points per axis for fields output")
        if name == "verify":
            sp.add_argument("--inject-sign-error", action="store_true",
                            help=argparse.SUPPRESS)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return _COMMANDS[cfg.command](cfg)
    except (RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
