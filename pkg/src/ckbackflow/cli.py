"""Command-line interface: export the built-in scans as flat tables.

    backflow <scenario|preset> [--config FILE] [--out PATH] [--format csv|ndjson]
             [--raw] [--validate] [--threads N] [parameter overrides...]

Presets fig1..fig5 bind the standard parameter sets; scenarios run with
defaults unless overridden.  Precedence: flags > config file > preset
defaults.  Every run writes a manifest (resolved config, tool
version, wall time, output list) next to the data files.  Numbers are
serialized with 17 significant digits, so identical runs produce
byte-identical data files.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import dataclasses
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .config import SCENARIOS, RunConfig, builtin_presets, preset_by_name
from .dynamics import (
    CKParams,
    GaussianPacket,
    SuperposedState,
    current_density,
    left_probability,
    negative_momentum_probability,
    superposed_amplitude,
)
from .backflow import (
    FidelityScanBase,
    current_sign_map,
    fidelity_backflow_scan,
)
from .two_particle import (
    TwoParticleState,
    at_least_one_negative_probability,
    fidelity,
    two_particle_amplitude,
)

_FMT = "%.17g"


# ----------------------------------------------------------------------
# output writers
# ----------------------------------------------------------------------

def _format_row(values) -> list[str]:
    return [_FMT % v for v in values]

def _write_rows(path: Path, columns: list[str], rows: np.ndarray, fmt: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        if fmt == "csv":
            fh.write(",".join(columns) + "\n")
            for row in rows:
                fh.write(",".join(_format_row(row)) + "\n")
        else:
            for row in rows:
                body = ", ".join(
                    f'"{c}": {v}' for c, v in zip(columns, _format_row(row))
                )
                fh.write("{" + body + "}\n")


def _ext(fmt: str) -> str:
    return "csv" if fmt == "csv" else "ndjson"


def _gamma_tag(gamma: float) -> str:
    return ("%g" % gamma).replace(".", "p")


# ----------------------------------------------------------------------
# scenario builders
# ----------------------------------------------------------------------

def _packets(cfg: RunConfig, eta: float | None = None):
    eta = cfg.eta if eta is None else eta
    a = GaussianPacket(cfg.x0, cfg.p0a, cfg.sigma_p, eta)
    b = GaussianPacket(cfg.x0, cfg.p0b, cfg.sigma_p, eta)
    return a, b


def _params(cfg: RunConfig, gamma: float) -> CKParams:
    return CKParams(gamma=gamma, g=0.0, mass=cfg.mass, hbar=cfg.hbar)


def _thread_count(cfg: RunConfig) -> int:
    return max(1, int(cfg.threads))


def _map_ordered(fn, items, n_threads: int):
    if n_threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with concurrent.futures.ThreadPoolExecutor(max_workers=n_threads) as pool:
        return list(pool.map(fn, items))


def _run_current_map(cfg: RunConfig, stem: Path) -> list[Path]:
    a, b = _packets(cfg)
    thetas = np.linspace(0.0, 2.0 * np.pi, cfg.n_theta)
    times = np.linspace(0.0, cfg.t_max, cfg.n_time)
    j_col = "j" if cfg.raw else "j_times_1000"
    scale = 1.0 if cfg.raw else 1000.0

    def one_gamma(gamma: float):
        grid = current_sign_map(
            lambda th: SuperposedState(a, b, cfg.alpha, th),
            _params(cfg, gamma),
            thetas,
            times,
        )
        n_rows = thetas.size * times.size
        rows = np.empty((n_rows, 3))
        rows[:, 0] = np.repeat(grid.theta_values, times.size)
        rows[:, 1] = np.tile(grid.time_values, thetas.size)
        rows[:, 2] = scale * grid.current_values.ravel()
        return gamma, rows

    results = _map_ordered(one_gamma, list(cfg.gamma_values), _thread_count(cfg))
    written = []
    for gamma, rows in results:
        path = stem.with_name(f"{stem.name}_gamma{_gamma_tag(gamma)}.{_ext(cfg.format)}")
        _write_rows(path, ["theta", "t", j_col], rows, cfg.format)
        written.append(path)
    return written


def _run_left_prob(cfg: RunConfig, stem: Path) -> list[Path]:
    times = np.linspace(0.0, cfg.t_max, cfg.n_time)
    blocks = []
    for gamma in cfg.gamma_values:
        params = _params(cfg, gamma)
        for eta in cfg.eta_values:
            a, b = _packets(cfg, eta)
            state = SuperposedState(a, b, cfg.alpha, cfg.theta)
            probs = np.asarray(left_probability(state, params, times))
            block = np.column_stack(
                [np.full_like(times, gamma), np.full_like(times, eta), times, probs]
            )
            blocks.append(block)
    rows = np.vstack(blocks)
    path = stem.with_name(f"{stem.name}.{_ext(cfg.format)}")
    _write_rows(path, ["gamma", "eta", "t", "P"], rows, cfg.format)
    return [path]


def _pair_state(cfg: RunConfig) -> tuple[SuperposedState, SuperposedState]:
    a, b = _packets(cfg)
    chi = SuperposedState(a, b, cfg.alpha, cfg.theta_chi)
    phi = SuperposedState(a, b, cfg.alpha, cfg.theta_phi)
    return chi, phi


def _run_two_particle(cfg: RunConfig, stem: Path) -> list[Path]:
    chi, phi = _pair_state(cfg)
    boson = TwoParticleState(chi, phi, 1)
    fermion = TwoParticleState(chi, phi, -1)
    times = np.linspace(0.0, cfg.t_max, cfg.n_time)

    def one_gamma(gamma: float):
        params = _params(cfg, gamma)
        p_plus = np.asarray(at_least_one_negative_probability(boson, params, times))
        p_minus = np.asarray(at_least_one_negative_probability(fermion, params, times))
        return gamma, np.column_stack([times, p_plus, p_minus])

    results = _map_ordered(one_gamma, list(cfg.gamma_values), _thread_count(cfg))
    written = []
    for gamma, rows in results:
        path = stem.with_name(f"{stem.name}_gamma{_gamma_tag(gamma)}.{_ext(cfg.format)}")
        _write_rows(path, ["t", "P_plus", "P_minus"], rows, cfg.format)
        written.append(path)
    return written


def _run_fidelity_scan(cfg: RunConfig, stem: Path) -> list[Path]:
    a, b = _packets(cfg)
    chi = SuperposedState(a, b, cfg.alpha_chi, cfg.theta)
    alphas = np.linspace(cfg.alpha_phi_min, cfg.alpha_phi_max, cfg.n_alpha_phi)
    rows = np.empty((alphas.size, 2))
    for i, alpha_phi in enumerate(alphas):
        phi = SuperposedState(a, b, float(alpha_phi), cfg.theta)
        rows[i] = (alpha_phi, fidelity(chi, phi))
    path = stem.with_name(f"{stem.name}.{_ext(cfg.format)}")
    _write_rows(path, ["alpha_phi", "fidelity"], rows, cfg.format)
    return [path]


def _run_fidelity_backflow(cfg: RunConfig, stem: Path) -> list[Path]:
    a, b = _packets(cfg)
    chi = SuperposedState(a, b, cfg.alpha_chi, cfg.theta)
    params = _params(cfg, cfg.gamma_values[0])
    base = FidelityScanBase(chi=chi, params=params, t_max=cfg.t_max)
    records = fidelity_backflow_scan(cfg.alpha_phi_values, base)
    summary = np.array(
        [(r.alpha_phi, r.fidelity, r.backflow_amount) for r in records]
    )
    summary_path = stem.with_name(f"{stem.name}_summary.{_ext(cfg.format)}")
    _write_rows(
        summary_path, ["alpha_phi", "fidelity", "backflow_amount"], summary, cfg.format
    )

    times = np.linspace(0.0, cfg.t_max, cfg.n_time)
    blocks = []
    for alpha_phi in cfg.alpha_phi_values:
        phi = SuperposedState(a, b, alpha_phi, cfg.theta)
        boson = TwoParticleState(chi, phi, 1)
        probs = np.asarray(at_least_one_negative_probability(boson, params, times))
        blocks.append(
            np.column_stack([np.full_like(times, alpha_phi), times, probs])
        )
    curves_path = stem.with_name(f"{stem.name}_curves.{_ext(cfg.format)}")
    _write_rows(curves_path, ["alpha_phi", "t", "P_plus"], np.vstack(blocks), cfg.format)
    return [summary_path, curves_path]


# ----------------------------------------------------------------------
# oracle validation suite
# ----------------------------------------------------------------------

# Frozen arbitrary-precision reference values for the kernel spot check
# (computed once with mpmath at 40 digits; see tests/fixtures).
_ERFC_REFERENCE = (
    (0.0 + 0.0j, 1.0 + 0.0j),
    (1.0 + 0.0j, 0.157299207050285130659 + 0.0j),
    (1.0 + 1.0j, -0.31615128169794764488 - 0.190453469237834686284j),
    (-2.0 + 3.0j, -19.8294614276145683891 - 8.68731827147016314443j),
    (5.5 - 2.25j, 1.08216145101941712886e-12 - 4.18845436091146195518e-15j),
    (0.25 + 12.0j, 4.58479203933294997309e60 - 1.46057495067209355872e61j),
)


def _oracle_checks(cfg: RunConfig):
    """Yield (name, passed, detail) for the cross-validation suite."""
    from .oracle import (
        GridSpec,
        adaptive_quadrature,
        propagate_ck,
        quadrant_quadrature_2d,
    )
    from .special_functions import erfc_complex

    worst = 0.0
    for z, ref in _ERFC_REFERENCE:
        got = erfc_complex(z)
        worst = max(worst, abs(got - ref) / max(abs(ref), 1e-300))
    yield ("erfc kernel vs frozen references", worst < 1e-13, f"max rel err {worst:.2e}")

    a, b = _packets(cfg)
    state = SuperposedState(a, b, cfg.alpha, math.pi)
    params = CKParams(gamma=0.3, mass=cfg.mass, hbar=cfg.hbar)

    worst = 0.0
    for t in (0.0, 5.0, 10.0):
        val, _ = adaptive_quadrature(
            lambda x: abs(superposed_amplitude(state, params, x, t)) ** 2,
            -np.inf, np.inf, abs_tol=1e-10, points=(-50.0, 0.0, 50.0),
        )
        worst = max(worst, abs(val - 1.0))
    yield ("superposition norm = 1 (quadrature)", worst < 1e-9, f"max dev {worst:.2e}")

    worst = 0.0
    for t in (0.5, 3.0, 8.0):
        analytic = left_probability(state, params, t)
        quad = left_probability(state, params, t, method="quadrature")
        worst = max(worst, abs(analytic - quad))
    yield ("left probability: closed form vs quadrature", worst < 1e-10,
           f"max dev {worst:.2e}")

    pr = negative_momentum_probability(state)
    pr_quad = negative_momentum_probability(state, method="quadrature")
    dev = abs(pr - pr_quad)
    yield ("negative-momentum probability vs quadrature", dev < 1e-10,
           f"dev {dev:.2e}")

    grid = GridSpec(-400.0, 400.0, 1 << 14, 1e-2)
    worst = 0.0
    for gamma in (0.0, 0.3):
        pg = CKParams(gamma=gamma, mass=cfg.mass, hbar=cfg.hbar)
        prop = propagate_ck(
            lambda x: superposed_amplitude(state, pg, x, 0.0), pg, grid, 5.0
        )
        exact = superposed_amplitude(state, pg, prop.x, 5.0)
        l2 = float(np.sqrt(np.sum(np.abs(prop.values - exact) ** 2) * grid.dx))
        worst = max(worst, l2)
    yield ("analytic state vs grid propagator (L2, t=5)", worst < 1e-8,
           f"max L2 {worst:.2e}")

    chi, phi = _pair_state(cfg)
    worst = 0.0
    for sym in (1, -1):
        pair = TwoParticleState(chi, phi, sym)
        pars0 = CKParams(mass=cfg.mass, hbar=cfg.hbar)
        t_probe = 2.5
        pp = 1.0 - float(
            np.asarray(at_least_one_negative_probability(pair, pars0, t_probe))
        )
        span = max(abs(cfg.p0a), abs(cfg.p0b)) * t_probe / cfg.mass + 15.0 * (
            cfg.hbar / (2.0 * cfg.sigma_p)
        ) * 2.0
        direct = quadrant_quadrature_2d(
            lambda x1, x2: np.abs(
                two_particle_amplitude(pair, pars0, x1, x2, t_probe)
            ) ** 2,
            span, span, n_nodes=400,
        )
        worst = max(worst, abs(pp - direct))
    yield ("two-particle pp: factorized vs 2-D quadrature", worst < 1e-8,
           f"max dev {worst:.2e}")

    worst = 0.0
    h = 1e-5
    for t in (0.4, 1.7, 4.0, 6.3, 9.1):
        dp = (
            left_probability(state, params, t + h)
            - left_probability(state, params, t - h)
        ) / (2.0 * h)
        resid = abs(dp + current_density(state, params, 0.0, t))
        worst = max(worst, resid)
    yield ("continuity: dP/dt = -j(0,t)", worst < 1e-6, f"max resid {worst:.2e}")


def _run_validate(cfg: RunConfig) -> bool:
    all_ok = True
    print("oracle validation suite")
    print("-" * 72)
    for name, ok, detail in _oracle_checks(cfg):
        status = "PASS" if ok else "FAIL"
        all_ok = all_ok and ok
        print(f"{status}  {name:<48} {detail}")
    print("-" * 72)
    print("all checks passed" if all_ok else "SOME CHECKS FAILED")
    return all_ok


# ----------------------------------------------------------------------
# driver
# ----------------------------------------------------------------------

_RUNNERS = {
    "current-map": _run_current_map,
    "left-prob": _run_left_prob,
    "two-particle": _run_two_particle,
    "fidelity-scan": _run_fidelity_scan,
    "fidelity-backflow": _run_fidelity_backflow,
}


def run(config: RunConfig, also_validate: bool = False) -> int:
    """Execute a resolved configuration; returns the process exit status."""
    started = time.perf_counter()
    if config.scenario == "validate":
        return 0 if _run_validate(config) else 1

    stem = Path(config.out)
    try:
        written = _RUNNERS[config.scenario](config, stem)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    wall = time.perf_counter() - started
    manifest = {
        "tool": "backflow",
        "version": __version__,
        "config": dataclasses.asdict(config),
        "outputs": [str(p) for p in written],
        "wall_time_s": wall,
    }
    manifest_path = stem.with_name(f"{stem.name}.manifest.json")
    manifest_path.parent.mkdir(parents=True, exist_ok=True)
    manifest_path.write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    for p in written:
        print(f"wrote {p}")
    print(f"wrote {manifest_path}")

    if also_validate:
        return 0 if _run_validate(config) else 1
    return 0


_COLUMN_DOC = """\
output columns per scenario:
  current-map       theta,t,j_times_1000   (j with --raw); one file per gamma
  left-prob         gamma,eta,t,P
  two-particle      t,P_plus,P_minus       one file per gamma
  fidelity-scan     alpha_phi,fidelity
  fidelity-backflow alpha_phi,fidelity,backflow_amount (summary)
                    alpha_phi,t,P_plus                 (curves)
  validate          no data files; prints a pass/fail table
presets: fig1 (current-map), fig2 (left-prob), fig3 (two-particle),
         fig4 (fidelity-scan), fig5 (fidelity-backflow)
"""


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="backflow",
        description="Damped wave-packet backflow scans as machine-readable tables.",
        epilog=_COLUMN_DOC,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument(
        "target",
        help="scenario (%s) or preset (fig1..fig5)" % ", ".join(SCENARIOS),
    )
    parser.add_argument("--config", help="JSON config file (fields of RunConfig)")
    parser.add_argument("--out", help="output path stem")
    parser.add_argument("--format", choices=("csv", "ndjson"))
    parser.add_argument("--raw", action="store_true", default=None,
                        help="write raw current values instead of x1000")
    parser.add_argument("--validate", action="store_true",
                        help="run the oracle validation suite after the scenario")
    parser.add_argument("--threads", type=int,
                        help="worker threads (default: BACKFLOW_THREADS or 1)")
    grid = parser.add_argument_group("parameter overrides")
    grid.add_argument("--gamma", type=float, action="append", dest="gamma_values",
                      metavar="G", help="damping constant (repeatable)")
    grid.add_argument("--eta", type=float, action="append", dest="eta_values",
                      metavar="E", help="stretching parameter (repeatable)")
    grid.add_argument("--alpha-phi", type=float, action="append",
                      dest="alpha_phi_values", metavar="A",
                      help="scanned amplitude ratio (repeatable)")
    for name in ("sigma-p", "x0", "p0a", "p0b", "alpha", "theta", "theta-chi",
                 "theta-phi", "alpha-chi", "alpha-phi-min", "alpha-phi-max",
                 "t-max", "mass", "hbar"):
        grid.add_argument(f"--{name}", type=float, dest=name.replace("-", "_"))
    for name in ("n-theta", "n-time", "n-alpha-phi"):
        grid.add_argument(f"--{name}", type=int, dest=name.replace("-", "_"))
    return parser


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    preset = preset_by_name(args.target)
    if preset is not None:
        base = preset
    elif args.target in SCENARIOS:
        base = RunConfig(scenario=args.target)
    else:
        raise ValueError(
            f"unknown target {args.target!r}: expected a scenario "
            f"({', '.join(SCENARIOS)}) or a preset (fig1..fig5)"
        )

    merged = dataclasses.asdict(base)
    if args.config:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise ValueError(f"cannot read config file: {exc}") from exc
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(
                f"config parse error at line {exc.lineno}, column {exc.colno}: "
                f"{exc.msg}"
            ) from exc
        if not isinstance(data, dict):
            raise ValueError("config file must contain a JSON object")
        unknown = set(data) - set(merged)
        if unknown:
            raise ValueError(f"unknown config fields: {', '.join(sorted(unknown))}")
        if "scenario" in data and data["scenario"] != merged["scenario"]:
            raise ValueError(
                "config scenario does not match the requested target "
                f"({data['scenario']!r} vs {merged['scenario']!r})"
            )
        merged.update(data)

    override_fields = (
        "out", "format", "raw", "threads", "gamma_values", "eta_values",
        "alpha_phi_values", "sigma_p", "x0", "p0a", "p0b", "alpha", "theta",
        "theta_chi", "theta_phi", "alpha_chi", "alpha_phi_min", "alpha_phi_max",
        "t_max", "mass", "hbar", "n_theta", "n_time", "n_alpha_phi",
    )
    for name in override_fields:
        value = getattr(args, name, None)
        if value is not None:
            merged[name] = value
    if getattr(args, "threads", None) is None and "BACKFLOW_THREADS" in os.environ:
        try:
            merged["threads"] = int(os.environ["BACKFLOW_THREADS"])
        except ValueError as exc:
            raise ValueError("BACKFLOW_THREADS must be an integer") from exc

    return RunConfig.from_dict(merged)


def main(argv=None) -> None:
    args = _build_parser().parse_args(argv)
    try:
        config = _resolve_config(args)
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        sys.exit(2)
    sys.exit(run(config, also_validate=args.validate))


if __name__ == "__main__":
    main()
