"""Command line front end.

Subcommands mirror the library surface: ``dk`` tabulates moment kernels,
``solve`` evaluates the disk solution, ``density`` tabulates the wrapped
marginal density, ``moments`` runs the Laplace-vs-MC convention report,
``mixed`` evaluates two-time mixed moments, ``ctrw`` runs the scaled
random-walk convergence report.

Conventions shared by all subcommands:

* options may come from a JSON config file (``--config``); explicit flags
  override config values, and unknown config keys are rejected,
* CSV output uses a header row and 17 significant digits; the fully
  resolved option set is written next to the file as ``<out>.meta.json``
  (or to stderr when writing CSV to stdout),
* JSON output embeds the resolved option set under the ``"config"`` key,
* exit status 0 on success, 2 for bad input or configuration, 3 when a
  numerical routine fails to converge,
* stochastic subcommands take ``--seed``; without one the seed comes from
  ``FRACDISK_SEED`` or is freshly generated, and is always echoed on
  stderr so runs can be reproduced,
* ``FRACDISK_THREADS`` caps the BLAS thread pool.
"""

import argparse
import json
import os
import secrets
import sys

import numpy as np

from .bernstein import BernsteinSpec
from .ctrw import convergence_report, report_to_json
from .errors import DomainError, FracdiskError
from .kernels import build_table, dk_value
from .moments import (circular_moment, convention_report, mixed_moment_integral,
                      mixed_moment_mc, mixed_moment_stable)
from .solver import TaylorCoeffs, dump_solution_csv, evaluate_solution
from .subsim import RngStream
from .wrapped import dump_density_csv, wrapped_density

_EXIT_CONFIG = 2
_EXIT_NUMERICS = 3


class _CliError(Exception):
    """Bad usage or configuration; maps to exit status 2."""


def _float_list(text):
    try:
        vals = [float(tok) for tok in str(text).split(",") if tok.strip()]
    except ValueError as exc:
        raise _CliError(f"not a comma-separated float list: {text!r}") from exc
    if not vals:
        raise _CliError(f"empty list: {text!r}")
    return vals


def _complex_list(text):
    try:
        vals = [complex(tok.replace(" ", "")) for tok in str(text).split(",") if tok.strip()]
    except ValueError as exc:
        raise _CliError(f"not a comma-separated complex list: {text!r}") from exc
    if not vals:
        raise _CliError(f"empty list: {text!r}")
    return vals


def _spec_from(opts):
    alpha = opts["alpha"]
    if alpha is None:
        raise _CliError("--alpha is required")
    mu = opts.get("mu") or 0.0
    b = opts.get("drift_b") or 0.0
    opts.update(mu=mu, drift_b=b)
    if mu == 0.0:
        return BernsteinSpec.stable(alpha, drift_b=b)
    return BernsteinSpec.tempered(alpha, mu, drift_b=b)


def _resolve_seed(opts):
    """Explicit --seed, else FRACDISK_SEED, else a fresh one; always echoed."""
    seed = opts.get("seed")
    if seed is None:
        env = os.environ.get("FRACDISK_SEED")
        seed = int(env) if env else secrets.randbits(32)
    seed = int(seed)
    opts["seed"] = seed
    print(f"fracdisk: seed = {seed}", file=sys.stderr)
    return seed


def _emit_csv(opts, out_path, writer):
    """Write CSV via writer(fileobj); resolved opts go to a sidecar file."""
    meta = json.dumps(opts, indent=2, sort_keys=True)
    if out_path:
        with open(out_path, "w", newline="") as fh:
            writer(fh)
        with open(out_path + ".meta.json", "w") as fh:
            fh.write(meta + "\n")
    else:
        writer(sys.stdout)
        print(meta, file=sys.stderr)


def _emit_json(opts, out_path, payload):
    payload = dict(payload)
    payload["config"] = opts
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# --- subcommand bodies; each takes the resolved option dict ---------------


def _cmd_dk(opts):
    spec = _spec_from(opts)
    if opts["k_max"] is None or opts["times"] is None:
        raise _CliError("dk requires --k-max and --times")
    k_max = int(opts["k_max"])
    if k_max < 0:
        raise _CliError("--k-max must be >= 0")
    times = _float_list(opts["times"])
    method = opts["method"] or "auto"
    opts.update(k_max=k_max, method=method)

    def write(fh):
        fh.write("k,t,value\r\n")
        for k in range(k_max + 1):
            for t in times:
                val = dk_value(spec, float(k * k), t, method=method)
                fh.write(f"{k},{t:.17g},{val:.17g}\r\n")

    _emit_csv(opts, opts["out"], write)


def _cmd_solve(opts):
    spec = _spec_from(opts)
    if opts["coeffs"] is None or opts["times"] is None:
        raise _CliError("solve requires --coeffs and --times")
    f = TaylorCoeffs(_complex_list(opts["coeffs"]))
    rs = _float_list(opts["r"] or "0.5")
    phis = _float_list(opts["phi"] or "0.0")
    times = _float_list(opts["times"])
    opts.update(r=",".join(map(str, rs)), phi=",".join(map(str, phis)))
    table = build_table(spec, f.degree, times)
    rows = []
    for r in rs:
        for phi in phis:
            z = r * np.exp(1j * phi)
            for t in times:
                rows.append((r, phi, t, evaluate_solution(spec, f, z, t, table)))
    _emit_csv(opts, opts["out"], lambda fh: dump_solution_csv(rows, fh))


def _cmd_density(opts):
    spec = _spec_from(opts)
    if opts["t"] is None:
        raise _CliError("density requires --t")
    t = float(opts["t"])
    n_phi = int(opts["n_phi"] or 256)
    if n_phi < 2:
        raise _CliError("--n-phi must be >= 2")
    k_cap = int(opts["k_cap"] or 512)
    opts.update(t=t, n_phi=n_phi, k_cap=k_cap)
    phis = np.linspace(0.0, 2.0 * np.pi, n_phi, endpoint=False)
    table = build_table(spec, k_cap, [t])
    dens = wrapped_density(spec, phis, t, table, k_cap=k_cap)
    _emit_csv(opts, opts["out"], lambda fh: dump_density_csv(phis, dens, fh))


def _cmd_moments(opts):
    spec = _spec_from(opts)
    if opts["t"] is None:
        raise _CliError("moments requires --t")
    rs = [int(r) for r in _float_list(opts["rs"] or "1,2,3")]
    n_paths = int(opts["n_paths"] or 10 ** 5)
    step_dt = float(opts["step_dt"] or 1e-3)
    opts.update(rs=",".join(map(str, rs)), n_paths=n_paths, step_dt=step_dt)
    seed = _resolve_seed(opts)
    reports = convention_report(
        spec, float(opts["t"]), rs=rs, N=n_paths, step_dt=step_dt,
        rng=RngStream(seed).clock())
    payload = {"reports": [
        {"quantity": r.quantity, "params": r.params, "analytic": r.analytic,
         "mc": r.mc, "se": r.se, "pass": r.passed} for r in reports]}
    _emit_json(opts, opts["out"], payload)


def _cmd_mixed(opts):
    spec = _spec_from(opts)
    if opts["s"] is None or opts["t"] is None:
        raise _CliError("mixed requires --s and --t")
    s, t = float(opts["s"]), float(opts["t"])
    n_paths = int(opts["n_paths"] or 10 ** 5)
    step_dt = float(opts["step_dt"] or 1e-3)
    opts.update(n_paths=n_paths, step_dt=step_dt)
    seed = _resolve_seed(opts)
    rep = mixed_moment_mc(spec, s, t, N=n_paths, step_dt=step_dt,
                          rng=RngStream(seed).clock())
    stable = spec.mu == 0.0
    payload = {
        "series": mixed_moment_stable(spec.alpha, s, t) if stable else None,
        "integral": mixed_moment_integral(spec, s, t) if stable else None,
        "mc": rep.mc, "se": rep.se, "pass": rep.passed,
    }
    _emit_json(opts, opts["out"], payload)


def _cmd_ctrw(opts):
    spec = _spec_from(opts)
    if spec.mu != 0.0:
        raise _CliError("ctrw requires a stable clock (mu = 0)")
    if opts["t"] is None:
        raise _CliError("ctrw requires --t")
    scales = _float_list(opts["scales"] or "100,1000,10000")
    k_max = int(opts["k_max"] or 3)
    n_paths = int(opts["n_paths"] or 10 ** 5)
    jump_mode = opts["jump_mode"] or "exact_stable"
    y_mode = opts["y_mode"] or "rademacher"
    rao_blackwell = opts["rao_blackwell"] is not False
    opts.update(scales=",".join(map(str, scales)), k_max=k_max, n_paths=n_paths,
                jump_mode=jump_mode, y_mode=y_mode, rao_blackwell=rao_blackwell)
    seed = _resolve_seed(opts)
    report = convergence_report(
        spec, float(opts["t"]), k_max=k_max, scales=scales, N=n_paths,
        rng=np.random.default_rng(seed), jump_mode=jump_mode, y_mode=y_mode,
        rao_blackwell=rao_blackwell)
    _emit_json(opts, opts["out"], json.loads(report_to_json(report)))


_COMMANDS = {
    "dk": _cmd_dk,
    "solve": _cmd_solve,
    "density": _cmd_density,
    "moments": _cmd_moments,
    "mixed": _cmd_mixed,
    "ctrw": _cmd_ctrw,
}


def _add_spec_opts(sub):
    sub.add_argument("--alpha", type=float, default=None, help="stability index in (0, 1]")
    sub.add_argument("--mu", type=float, default=None, help="tempering rate (default 0: stable)")
    sub.add_argument("--drift-b", type=float, default=None, dest="drift_b",
                     help="drift coefficient of the Bernstein function")


def _add_common_opts(sub):
    sub.add_argument("--config", default=None, help="JSON file with option defaults")
    sub.add_argument("--out", default=None, help="output file (default: stdout)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fracdisk",
        description="Time-fractional heat semigroups on the unit circle.")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("dk", help="tabulate moment kernels d_k(t) as CSV")
    _add_spec_opts(p)
    _add_common_opts(p)
    p.add_argument("--k-max", type=int, default=None, dest="k_max")
    p.add_argument("--times", default=None, help="comma-separated times")
    p.add_argument("--method", default=None,
                   choices=["auto", "stable", "tempered", "invert"])

    p = subs.add_parser("solve", help="evaluate the series solution on a polar grid")
    _add_spec_opts(p)
    _add_common_opts(p)
    p.add_argument("--coeffs", default=None, help="Taylor coefficients a_0,a_1,...")
    p.add_argument("--r", default=None, help="comma-separated radii (default 0.5)")
    p.add_argument("--phi", default=None, help="comma-separated angles (default 0)")
    p.add_argument("--times", default=None, help="comma-separated times")

    p = subs.add_parser("density", help="tabulate the wrapped marginal density")
    _add_spec_opts(p)
    _add_common_opts(p)
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--n-phi", type=int, default=None, dest="n_phi")
    p.add_argument("--k-cap", type=int, default=None, dest="k_cap")

    p = subs.add_parser("moments", help="circular moments: Laplace analytics vs MC")
    _add_spec_opts(p)
    _add_common_opts(p)
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--rs", default=None, help="comma-separated moment orders (default 1,2,3)")
    p.add_argument("--n-paths", type=int, default=None, dest="n_paths")
    p.add_argument("--step-dt", type=float, default=None, dest="step_dt")
    p.add_argument("--seed", type=int, default=None)

    p = subs.add_parser("mixed", help="two-time mixed moment (series, integral, MC)")
    _add_spec_opts(p)
    _add_common_opts(p)
    p.add_argument("--s", type=float, default=None)
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--n-paths", type=int, default=None, dest="n_paths")
    p.add_argument("--step-dt", type=float, default=None, dest="step_dt")
    p.add_argument("--seed", type=int, default=None)

    p = subs.add_parser("ctrw", help="scaled random-walk convergence report")
    _add_spec_opts(p)
    _add_common_opts(p)
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--k-max", type=int, default=None, dest="k_max")
    p.add_argument("--scales", default=None, help="comma-separated scales c (default 100,1000,10000)")
    p.add_argument("--n-paths", type=int, default=None, dest="n_paths")
    p.add_argument("--jump-mode", default=None, dest="jump_mode",
                   choices=["exact_stable", "pareto"])
    p.add_argument("--y-mode", default=None, dest="y_mode",
                   choices=["rademacher", "gaussian"])
    p.add_argument("--no-rao-blackwell", action="store_const", const=False,
                   default=None, dest="rao_blackwell")
    p.add_argument("--seed", type=int, default=None)
    return parser


def _resolve_opts(args):
    """Merge config file and flags; flags win, unknown config keys fail."""
    opts = {k: v for k, v in vars(args).items() if k != "command"}
    if opts.get("config"):
        try:
            with open(opts["config"]) as fh:
                cfg = json.load(fh)
        except OSError as exc:
            raise _CliError(f"cannot read config: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise _CliError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(cfg, dict):
            raise _CliError("config must be a JSON object")
        unknown = sorted(set(cfg) - set(opts))
        if unknown:
            raise _CliError(f"unknown config keys: {', '.join(unknown)}")
        for key, val in cfg.items():
            if opts[key] is None:
                opts[key] = val
    opts.pop("config", None)
    return opts


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    threads = os.environ.get("FRACDISK_THREADS")
    try:
        opts = _resolve_opts(args)
        opts["command"] = args.command
        if threads is not None:
            import threadpoolctl

            with threadpoolctl.threadpool_limits(limits=int(threads)):
                _COMMANDS[args.command](opts)
        else:
            _COMMANDS[args.command](opts)
    except (_CliError, DomainError) as exc:
        print(f"fracdisk: error: {exc}", file=sys.stderr)
        return _EXIT_CONFIG
    except FracdiskError as exc:
        print(f"fracdisk: numerical failure: {exc}", file=sys.stderr)
        return _EXIT_NUMERICS
    return 0


if __name__ == "__main__":
    sys.exit(main())
