"""Command-line interface.

Subcommands: simulate, fixed-points, cesaro, attractor, sweep, li-yorke,
tensor-check.  Exit codes: 0 success, 2 validation/configuration error,
3 numeric failure.  All randomness derives from --seed through the
package's portable generator, so identical invocations write byte-identical
files.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import attractor as att
from . import dynamics as dyn
from . import fixed_points as fp
from . import io as qio
from . import operators as ops
from .config import RunConfig, apply_config_file, parse_grid, parse_start
from .errors import (
    ConfigError,
    NotAFixedPointError,
    NumericOverflowError,
    QsoError,
    SamplesEmptyError,
)
from .rng import SplitMix64
from .simplex import make_point

VALIDATION_EXIT = 2
NUMERIC_EXIT = 3

_NUMERIC_ERRORS = (NumericOverflowError, NotAFixedPointError)


def build_operator(cfg: RunConfig) -> ops.OperatorSpec:
    fam = cfg.family.lower()
    if cfg.tensor_in or fam == "generic":
        if not cfg.tensor_in:
            raise ConfigError("generic family needs --tensor")
        with open(cfg.tensor_in) as fh:
            return ops.generic(ops.HeredityTensor.from_json(fh.read()))
    if fam == "v":
        if cfg.alpha is None:
            raise ConfigError("family V needs --alpha")
        return ops.v_alpha(cfg.alpha)
    if fam == "w":
        if cfg.alpha is None:
            raise ConfigError("family W needs --alpha")
        return ops.w_alpha(cfg.alpha)
    if fam in ("two-allele", "two_allele", "2"):
        if None in (cfg.alpha, cfg.beta, cfg.p_het):
            raise ConfigError("two-allele needs --alpha, --beta and --p-het")
        return ops.two_allele(cfg.alpha, cfg.beta, cfg.p_het)
    raise ConfigError(f"unknown family {cfg.family!r}")


def _require(cfg: RunConfig, attr: str, flag: str):
    value = getattr(cfg, attr)
    if value is None:
        raise ConfigError(f"missing required {flag}")
    return value


def cmd_simulate(cfg: RunConfig) -> None:
    spec = build_operator(cfg)
    start = make_point(_require(cfg, "start", "--start"))
    steps = _require(cfg, "steps", "--steps")
    if steps < 0:
        raise ConfigError("--steps must be non-negative")
    out = _require(cfg, "out", "--out")
    if steps == 0:
        points = start.array[None, :]
        traj = None
    else:
        traj = dyn.iterate(spec, start, steps)
        points = traj.points
    qio.write_trajectory_csv(out, points)
    if cfg.lyapunov:
        if traj is None:
            raise ConfigError("lyapunov trace needs at least one step")
        kind = (dyn.LyapunovKind.PHI_PRODUCT if cfg.lyapunov == "product"
                else dyn.LyapunovKind.PHI_QUADRATIC)
        trace = dyn.lyapunov_trace(spec, traj, kind)
        qio.write_json(_require(cfg, "lyapunov_out", "--lyapunov-out"),
                       trace.to_dict())
    if cfg.cycle_out:
        if traj is None:
            raise ConfigError("cycle trace needs at least one step")
        qio.write_json(cfg.cycle_out, dyn.cycle_trace(spec, traj).to_dict())


def cmd_fixed_points(cfg: RunConfig) -> None:
    spec = build_operator(cfg)
    seeds = fp.triangular_lattice(cfg.lattice)
    seeds.append(make_point((1.0, 1.0, 1.0)))
    reports = fp.find_fixed_points(spec, seeds, cfg.max_iter, cfg.tol)
    qio.write_json(_require(cfg, "out", "--out"),
                   [r.to_dict() for r in reports])


def cmd_cesaro(cfg: RunConfig) -> None:
    spec = build_operator(cfg)
    start = make_point(_require(cfg, "start", "--start"))
    steps = _require(cfg, "steps", "--steps")
    prefix = _require(cfg, "out_prefix", "--out-prefix")
    table = dyn.cesaro(spec, start, cfg.order, steps)
    for k in range(cfg.order + 1):
        qio.write_trajectory_csv(f"{prefix}_order{k}.csv", table.rows(k))
    if cfg.verdict_out:
        v = dyn.verdict(table.rows(cfg.order), cfg.window, cfg.tol_conv,
                        cfg.p_max)
        qio.write_json(cfg.verdict_out, v.to_dict())


def cmd_attractor(cfg: RunConfig) -> None:
    spec = build_operator(cfg)
    start = make_point(_require(cfg, "start", "--start"))
    samples = cfg.samples
    if cfg.steps is not None:
        samples = cfg.steps - cfg.burn_in
        if samples < 1:
            raise SamplesEmptyError(
                f"burn-in {cfg.burn_in} leaves no samples of {cfg.steps} steps")
    cloud = att.sample_attractor(spec, start, cfg.burn_in, samples)
    eps = cfg.epsilon
    if eps is None:
        eps = att.calibrate_epsilon(cloud.samples, cfg.epsilon_multiplier)
    report = att.count_components(cloud.samples, eps)
    if cfg.out:
        qio.write_cloud_csv(cfg.out, cloud.samples)
    if cfg.out_svg:
        qio.write_svg(cfg.out_svg, cloud.samples)
    if cfg.out_report:
        payload = report.to_dict()
        payload.update({
            "orientation": cloud.orientation.value,
            "angle_sum": cloud.angle_sum,
            "mean_step_angle": cloud.mean_step_angle,
            "min_coordinate_seen": cloud.min_coordinate_seen,
            "burn_in": cloud.burn_in,
            "n_samples": cloud.n_samples,
        })
        qio.write_json(cfg.out_report, payload)


def cmd_sweep(cfg: RunConfig) -> None:
    grid = parse_grid(_require(cfg, "grid", "--grid"))
    start = make_point(cfg.start) if cfg.start else att.DEFAULT_SWEEP_START
    rows = att.sweep(
        cfg.family, grid, start=start, burn_in=cfg.burn_in,
        n_samples=cfg.samples, lyap_steps=cfg.lyap_steps,
        epsilon_multiplier=cfg.epsilon_multiplier)
    qio.write_sweep_csv(_require(cfg, "out", "--out"), rows)


def cmd_li_yorke(cfg: RunConfig) -> None:
    spec = build_operator(cfg)
    gen = SplitMix64(cfg.rng_seed)
    seeds = [make_point(gen.simplex_point(spec.m))
             for _ in range(2 * cfg.pairs)]
    report = att.li_yorke_scan(spec, seeds, cfg.horizon, cfg.delta_low,
                               cfg.delta_high)
    qio.write_json(_require(cfg, "out", "--out"), report.to_dict())


def cmd_tensor_check(cfg: RunConfig) -> None:
    if cfg.tensor_in:
        with open(cfg.tensor_in) as fh:
            tensor = ops.HeredityTensor.from_json(fh.read())
    else:
        tensor = build_operator(cfg).tensor
    sums = np.abs(tensor.P.sum(axis=2) - 1.0).max()
    sym = np.abs(tensor.P - tensor.P.transpose(1, 0, 2)).max()
    print(f"m={tensor.m} max|row-sum - 1|={sums:.3e} max|asymmetry|={sym:.3e}")
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(tensor.to_json() + "\n")


_COMMANDS = {
    "simulate": cmd_simulate,
    "fixed-points": cmd_fixed_points,
    "cesaro": cmd_cesaro,
    "attractor": cmd_attractor,
    "sweep": cmd_sweep,
    "li-yorke": cmd_li_yorke,
    "tensor-check": cmd_tensor_check,
}


def _add_operator_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", default="V",
                   help="V, W, two-allele, or generic")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--p-het", dest="p_het", type=float, default=None)
    p.add_argument("--tensor", dest="tensor_in", default=None,
                   help="JSON heredity tensor (generic family)")
    p.add_argument("--config", dest="config_path", default=None,
                   help="JSON file whose entries override flags")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qso",
        description="Simulate and analyze quadratic stochastic operators "
                    "on the simplex.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="iterate an orbit to CSV")
    _add_operator_flags(p)
    p.add_argument("--start", type=parse_start, required=False)
    p.add_argument("--steps", type=int)
    p.add_argument("--out")
    p.add_argument("--lyapunov", choices=["product", "quadratic"])
    p.add_argument("--lyapunov-out", dest="lyapunov_out")
    p.add_argument("--cycle-out", dest="cycle_out")

    p = sub.add_parser("fixed-points", help="Newton census with spectra")
    _add_operator_flags(p)
    p.add_argument("--lattice", type=int, default=15,
                   help="seed lattice points per edge")
    p.add_argument("--max-iter", dest="max_iter", type=int, default=60)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--out")

    p = sub.add_parser("cesaro", help="iterated running averages to CSV")
    _add_operator_flags(p)
    p.add_argument("--start", type=parse_start)
    p.add_argument("--steps", type=int)
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--out-prefix", dest="out_prefix")
    p.add_argument("--verdict-out", dest="verdict_out")
    p.add_argument("--window", type=int, default=None)
    p.add_argument("--tol-conv", dest="tol_conv", type=float, default=1e-9)
    p.add_argument("--p-max", dest="p_max", type=int, default=12)

    p = sub.add_parser("attractor", help="tail cloud, components, SVG")
    _add_operator_flags(p)
    p.add_argument("--start", type=parse_start)
    p.add_argument("--burn-in", dest="burn_in", type=int, default=100_000)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--steps", type=int, default=None,
                   help="total steps; samples become steps - burn_in")
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--epsilon-multiplier", dest="epsilon_multiplier",
                   type=float, default=3.0)
    p.add_argument("--out", help="cloud CSV")
    p.add_argument("--out-svg", dest="out_svg")
    p.add_argument("--out-report", dest="out_report")

    p = sub.add_parser("sweep", help="per-alpha diagnostics to CSV")
    _add_operator_flags(p)
    p.add_argument("--grid", help="comma list or start:stop:step")
    p.add_argument("--start", type=parse_start)
    p.add_argument("--burn-in", dest="burn_in", type=int, default=100_000)
    p.add_argument("--samples", type=int, default=20_000)
    p.add_argument("--lyap-steps", dest="lyap_steps", type=int,
                   default=100_000)
    p.add_argument("--epsilon-multiplier", dest="epsilon_multiplier",
                   type=float, default=3.0)
    p.add_argument("--out")

    p = sub.add_parser("li-yorke", help="scrambled-pair evidence scan")
    _add_operator_flags(p)
    p.add_argument("--pairs", type=int, default=50)
    p.add_argument("--horizon", type=int, default=10_000)
    p.add_argument("--delta-low", dest="delta_low", type=float, default=1e-3)
    p.add_argument("--delta-high", dest="delta_high", type=float,
                   default=0.1)
    p.add_argument("--seed", dest="rng_seed", type=int, default=20240901)
    p.add_argument("--out")

    p = sub.add_parser("tensor-check", help="validate or export a tensor")
    _add_operator_flags(p)
    p.add_argument("--in", dest="tensor_in_file", default=None,
                   help="JSON tensor to validate")
    p.add_argument("--out", help="write the tensor JSON here")

    return parser


def _namespace_to_config(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    for key, value in vars(ns).items():
        if key == "config_path":
            continue
        if key == "tensor_in_file":
            if value is not None:
                cfg.tensor_in = value
            continue
        if hasattr(cfg, key) and value is not None:
            setattr(cfg, key, value)
        elif hasattr(cfg, key) and key in ("start", "steps", "out",
                                           "out_prefix", "window",
                                           "epsilon", "grid"):
            setattr(cfg, key, value)
    cfg.command = ns.command
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = _namespace_to_config(ns)
        if getattr(ns, "config_path", None):
            apply_config_file(cfg, ns.config_path)
        _COMMANDS[cfg.command](cfg)
    except _NUMERIC_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return NUMERIC_EXIT
    except QsoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return VALIDATION_EXIT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return VALIDATION_EXIT
    return 0


if __name__ == "__main__":
    sys.exit(main())
