"""Command-line interface: ``hypk {kernel,exit,simulate,validate}``.

Exit statuses: 0 success, 1 usage error, 2 validation failure, 3 too many
truncated simulation paths.  CSV output uses 17 significant digits and is
accompanied by ``<out>.manifest.json``; JSON output embeds its manifest.
Set ``SOURCE_DATE_EPOCH`` to pin the manifest timestamp.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from datetime import datetime, timezone

import numpy as np

from hypk import __version__, exitprob, kernels
from hypk.errors import HypkError, TruncationError
from hypk.geometry import PolarPoint, SpherePoint

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_TRUNCATION = 0, 1, 2, 3

KERNEL_MODELS = ("h2", "hn", "d2", "sphere", "h2-boundary", "cauchy", "euclidean-nd")
EXIT_GEOMETRIES = ("h2", "hn", "d2", "sphere", "euclidean")
SIM_MODELS = ("h2", "hn", "sphere")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; this CLI reserves 2 for
    # validation failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return format(float(v), ".17g")


def _timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    now = datetime.fromtimestamp(int(epoch), timezone.utc) if epoch else datetime.now(timezone.utc)
    return now.strftime("%Y-%m-%dT%H:%M:%SZ")


def make_manifest(command: str, args: argparse.Namespace, seed: int | None = None) -> dict:
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "command", "out", "format")}
    return {
        "command": command,
        "parameters": params,
        "seed": seed,
        "tool_version": __version__,
        "timestamp": _timestamp(),
    }


def _emit(args, header, rows, manifest, extra=None):
    """Write rows as CSV (plus manifest sidecar) or as JSON with the manifest inside."""
    if args.format == "json":
        doc = {"manifest": manifest}
        if extra:
            doc.update(extra)
        doc["columns"] = list(header)
        doc["rows"] = [[None if v is None else (int(v) if isinstance(v, (int, np.integer)) else float(v)) for v in r]
                       for r in rows]
        text = json.dumps(doc, indent=2, allow_nan=False) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(v) for v in r])
        text = buf.getvalue()
    _write(args.out, text)
    if args.format == "csv" and args.out:
        _write(args.out + ".manifest.json", json.dumps(manifest, indent=2) + "\n")


def _write(path, text):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise UsageError(f"model {args.model!r} requires {flags}")


# --------------------------------------------------------------------------
# kernel


def cmd_kernel(args) -> int:
    if args.grid < 2:
        raise UsageError("--grid must be at least 2")
    m = args.model
    trunc = None
    if m in ("h2", "h2-boundary", "d2", "sphere"):
        ang = np.linspace(-math.pi, math.pi, args.grid)
    elif m in ("hn", "euclidean-nd"):
        ang = np.linspace(0.0, math.pi, args.grid)
    if m == "h2":
        _need(args, "eta", "eta_bar")
        name, dens = "alpha", kernels.poisson_h2(args.eta, ang, args.eta_bar)
    elif m == "h2-boundary":
        _need(args, "eta")
        name, dens = "alpha", kernels.poisson_h2_boundary(args.eta, ang)
    elif m == "d2":
        _need(args, "r", "r_bar")
        name, dens = "theta", kernels.poisson_d2(args.r, ang, args.r_bar)
    elif m == "sphere":
        _need(args, "theta", "theta_bar")
        name, dens = "phi", kernels.poisson_sphere(args.theta, ang, args.theta_bar)
    elif m == "hn":
        _need(args, "dim", "eta", "eta_bar")
        ev = kernels.poisson_hn(args.dim, args.eta, args.eta_bar, ang)
        name, dens, trunc = "psi", ev.density, np.broadcast_to(ev.truncation_error_bound, ang.shape)
    elif m == "euclidean-nd":
        _need(args, "dim", "r")
        name, dens = "psi", kernels.euclidean_poisson_nd(args.dim, args.r, ang)
    else:  # cauchy
        _need(args, "x", "y")
        ang = np.linspace(args.x - args.span * args.y, args.x + args.span * args.y, args.grid)
        name, dens = "x_bar", kernels.cauchy_hitting_density(args.x, args.y, ang)
    dens = np.broadcast_to(dens, ang.shape)
    if trunc is None:
        header, rows = (name, "density"), zip(ang, dens)
    else:
        header, rows = (name, "density", "truncation_bound"), zip(ang, dens, trunc)
    _emit(args, header, list(rows), make_manifest("kernel", args))
    return EXIT_OK


# --------------------------------------------------------------------------
# exit


def exit_probability(geometry: str, n: int | None, eta1: float, eta: float, eta2: float | None) -> float:
    """Probability of reaching radius ``eta1`` before ``eta2`` (None: before infinity)."""
    if geometry == "sphere":
        if eta2 is None:
            raise UsageError("the sphere has no escape probability; pass --eta2")
        if eta1 > eta:
            return exitprob.exit_prob_sphere(eta, eta1, eta2)
        return 1.0 - exitprob.exit_prob_sphere(eta, eta2, eta1)
    if geometry == "d2":
        return exitprob.hit_prob_d2(eta, eta1) if eta2 is None else exitprob.exit_prob_d2(eta, eta1, eta2)
    if geometry == "h2":
        return exitprob.hit_prob_h2(eta, eta1) if eta2 is None else exitprob.exit_prob_h2(eta, eta1, eta2)
    if n is None:
        raise UsageError(f"geometry {geometry!r} requires --dim")
    if geometry == "hn":
        return exitprob.hit_prob_hn(n, eta, eta1) if eta2 is None else exitprob.exit_prob_hn(n, eta, eta1, eta2)
    return exitprob.hit_prob_euclidean(n, eta, eta1) if eta2 is None else exitprob.exit_prob_euclidean(n, eta, eta1, eta2)


def cmd_exit(args) -> int:
    n = 2 if args.geometry in ("h2", "d2", "sphere") else args.dim
    p = exit_probability(args.geometry, n, args.eta1, args.eta, args.eta2)
    record = {
        "geometry": args.geometry,
        "n": n,
        "eta1": args.eta1,
        "eta": args.eta,
        "eta2": args.eta2,
        "probability": p,
        "manifest": make_manifest("exit", args),
    }
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(["geometry", "n", "eta1", "eta", "eta2", "probability"])
        w.writerow([args.geometry, n, _fmt(args.eta1), _fmt(args.eta), _fmt(args.eta2), _fmt(p)])
        _write(args.out, buf.getvalue())
        if args.out:
            _write(args.out + ".manifest.json", json.dumps(record["manifest"], indent=2) + "\n")
    else:
        _write(args.out, json.dumps(record, indent=2) + "\n")
    return EXIT_OK


# --------------------------------------------------------------------------
# simulate


def _sim_config(args, dimension):
    from hypk.sim import SimConfig

    return SimConfig(dimension=dimension, step=args.step, num_paths=args.paths, seed=args.seed,
                     max_steps=args.max_steps, step_max=args.step_max, backend=args.backend)


def cmd_simulate(args) -> int:
    from hypk.sim import EmpiricalDistribution, first_hit_sphere, first_hit_spherical_circle

    try:
        if args.model == "sphere":
            _need(args, "theta", "theta_bar")
            cfg = _sim_config(args, 2)
            s = first_hit_spherical_circle(cfg, SpherePoint(args.theta, args.phi), args.theta_bar)
            header = ("path_index", "dphi", "steps", "overshoot")
            cols = (s.path_index, s.dphi, s.steps_taken, s.overshoot)
            values, lo = s.dphi, -math.pi
        else:
            _need(args, "eta", "eta_bar")
            n = 2 if args.model == "h2" else args.dim
            if n is None:
                raise UsageError("model 'hn' requires --dim")
            cfg = _sim_config(args, n)
            start = PolarPoint(args.eta, (0.0,) * (n - 2) + (args.alpha,))
            s = first_hit_sphere(cfg, start, args.eta_bar)
            if n == 2:
                header = ("path_index", "psi", "signed_angle", "steps", "overshoot")
                cols = (s.path_index, s.psi, s.signed_angle, s.steps_taken, s.overshoot)
                values, lo = s.signed_angle, -math.pi
            else:
                header = ("path_index", "psi", "steps", "overshoot")
                cols = (s.path_index, s.psi, s.steps_taken, s.overshoot)
                values, lo = s.psi, 0.0
    except TruncationError as exc:
        sys.stderr.write(f"hypk simulate: {exc} (truncated {exc.truncated} of {exc.total})\n")
        return EXIT_TRUNCATION

    manifest = make_manifest("simulate", args, seed=args.seed)
    if args.bins:
        hist = EmpiricalDistribution.from_samples(values, args.bins, lo, math.pi)
        rows = [(float(a), float(b), int(c)) for a, b, c in zip(hist.bin_edges[:-1], hist.bin_edges[1:], hist.counts)]
        _emit(args, ("bin_low", "bin_high", "count"), rows, manifest)
    else:
        rows = [tuple(int(v) if isinstance(v, np.integer) else float(v) for v in r) for r in zip(*cols)]
        _emit(args, header, rows, manifest)
    return EXIT_OK


# --------------------------------------------------------------------------
# validate


def cmd_validate(args) -> int:
    from dataclasses import replace

    from hypk.validation import Budget, run_suite

    budget = Budget.fast(args.backend) if args.fast else Budget(backend=args.backend)
    if args.paths:
        budget = replace(budget, kernel_paths=args.paths, exit_paths=args.paths)
    if args.seed is not None:
        budget = replace(budget, seed=args.seed)
    checks = run_suite(args.suite, budget)
    ok = all(c.passed for c in checks)
    report = {
        "suite": args.suite,
        "passed": ok,
        "checks": [c.as_dict() for c in checks],
        "manifest": make_manifest("validate", args, seed=budget.seed),
    }
    _write(args.out, json.dumps(report, indent=2, allow_nan=False) + "\n")
    return EXIT_OK if ok else EXIT_VALIDATION


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hypk", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"hypk {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def output(sp, default="csv"):
        sp.add_argument("--out", help="output file (default: stdout)")
        sp.add_argument("--format", choices=("csv", "json"), default=default)

    k = sub.add_parser("kernel", help="tabulate a hitting density on an angular grid")
    k.add_argument("--model", choices=KERNEL_MODELS, required=True)
    k.add_argument("--dim", type=int)
    k.add_argument("--eta", type=float)
    k.add_argument("--eta-bar", type=float)
    k.add_argument("--r", type=float, help="disc radius, or rho for euclidean-nd")
    k.add_argument("--r-bar", type=float)
    k.add_argument("--theta", type=float)
    k.add_argument("--theta-bar", type=float)
    k.add_argument("--x", type=float, help="start abscissa (cauchy)")
    k.add_argument("--y", type=float, help="start height (cauchy)")
    k.add_argument("--span", type=float, default=10.0, help="cauchy grid half-width in units of y")
    k.add_argument("--grid", type=int, default=101)
    output(k)
    k.set_defaults(func=cmd_kernel)

    e = sub.add_parser("exit", help="exit or escape probability of an annulus")
    e.add_argument("--geometry", choices=EXIT_GEOMETRIES, required=True)
    e.add_argument("--dim", type=int)
    e.add_argument("--eta1", type=float, required=True, help="radius to be reached first")
    e.add_argument("--eta", type=float, required=True, help="start radius")
    e.add_argument("--eta2", type=float, help="competing radius; omit for the escape problem")
    output(e, "json")
    e.set_defaults(func=cmd_exit)

    s = sub.add_parser("simulate", help="simulate first exits and write the samples")
    s.add_argument("--model", choices=SIM_MODELS, required=True)
    s.add_argument("--dim", type=int)
    s.add_argument("--eta", type=float)
    s.add_argument("--alpha", type=float, default=0.0, help="start azimuth")
    s.add_argument("--eta-bar", type=float)
    s.add_argument("--theta", type=float)
    s.add_argument("--phi", type=float, default=0.0)
    s.add_argument("--theta-bar", type=float)
    s.add_argument("--paths", type=int, default=10_000)
    s.add_argument("--step", type=float, default=1e-4)
    s.add_argument("--step-max", type=float, help="enable adaptive steps up to this size")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-steps", type=int, default=10_000_000)
    s.add_argument("--bins", type=int, help="write a histogram with this many bins instead of samples")
    s.add_argument("--backend", choices=("numba", "numpy"))
    output(s)
    s.set_defaults(func=cmd_simulate)

    v = sub.add_parser("validate", help="run the acceptance checks")
    v.add_argument("--suite", choices=("kernels", "exits", "all"), default="all")
    v.add_argument("--fast", action="store_true", help="smaller Monte Carlo budgets")
    v.add_argument("--paths", type=int, help="override Monte Carlo path counts")
    v.add_argument("--seed", type=int)
    v.add_argument("--backend", choices=("numba", "numpy"))
    v.add_argument("--out", help="report file (default: stdout)")
    v.set_defaults(func=cmd_validate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, HypkError, ValueError) as exc:
        sys.stderr.write(f"hypk {args.command}: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
