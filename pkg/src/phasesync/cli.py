"""Command line entry point: ``phasesync {gen,solve,certify,sweep,plot}``.

Exit codes: 0 success, 1 validation error, 2 solver failure, 3 I/O error.
"""
import argparse
import json
import logging
import os
import sys

import numpy as np

from . import __version__
from ._backend import BACKEND
from .certificate import verify_optimality
from .errors import ConvergenceError, ValidationError
from .gpm import GPMConfig, run_gpm
from .harness.config import ESTIMATORS, ExperimentConfig, sigma_scale
from .harness.instance import read_candidate, read_instance, write_candidate, write_instance
from .harness.plots import emit_plots
from .harness.runner import run_sweep
from .metrics import aligned_linf, d2
from .model import NOISE_KINDS, sample_model
from .spectral import eigenvector_estimator, projected_estimator

EXIT_OK, EXIT_VALIDATION, EXIT_SOLVER, EXIT_IO = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which would collide with solver failures.
    def error(self, message):
        raise ValidationError(f"{self.prog}: {message}")


def _emit(obj):
    json.dump(obj, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def cmd_gen(args):
    sigma = args.sigma * sigma_scale(args.n) if args.relative else args.sigma
    model = sample_model(args.n, sigma, args.kind, args.seed)
    write_instance(args.output, model.C, sigma, args.kind, args.seed)
    print(f"wrote {args.output} (n={args.n}, sigma={sigma:.6g})", file=sys.stderr)
    return EXIT_OK


def cmd_solve(args):
    inst = read_instance(args.instance)
    z = inst.truth()
    report = {"estimator": args.estimator, "n": inst.n, "sigma": inst.sigma}
    status = EXIT_OK
    if args.estimator == "gpm":
        trace = run_gpm(inst.C, cfg=GPMConfig(max_iter=args.max_iter, capture_trace=False))
        x = trace.x
        report.update(iterations=trace.iterations, converged=trace.converged,
                      fixed_point_residual=trace.fixed_point_residual)
        if not trace.converged:
            status = EXIT_SOLVER
    else:
        x = eigenvector_estimator(inst.C, z, max_iter=args.max_iter)
        if args.estimator == "projected-eig":
            x = projected_estimator(x)
    report["objective"] = float(np.vdot(x, inst.C @ x).real)
    if z is not None:
        report["l2_err"] = d2(x, z)
        report["linf_err"] = aligned_linf(x, z)
    if args.out:
        write_candidate(args.out, x)
        report["candidate"] = args.out
    _emit(report)
    return status


def cmd_certify(args):
    inst = read_instance(args.instance)
    x = read_candidate(args.candidate)
    if x.shape[0] != inst.n:
        raise ValidationError(f"candidate has {x.shape[0]} entries, instance n={inst.n}")
    report = verify_optimality(inst.C, x, psd_tol=args.psd_tol, kernel_tol=args.kernel_tol)
    d = report.to_dict()
    if not args.mu:
        del d["mu"]
    _emit(d)
    return EXIT_OK


def cmd_sweep(args):
    cfg = ExperimentConfig.from_file(args.config)
    overrides = {}
    if args.output_dir:
        overrides["output_dir"] = args.output_dir
    if args.workers:
        overrides["workers"] = args.workers
    if args.no_plots:
        overrides["plots"] = False
    if overrides:
        cfg = ExperimentConfig.from_dict({**cfg.to_dict(), **overrides})
    summary = run_sweep(cfg)
    failures = sum(c["failures"] for c in summary["cells"])
    print(f"{len(summary['cells'])} cells written to {cfg.output_dir}"
          f" ({failures} solver failures)", file=sys.stderr)
    return EXIT_OK


def cmd_plot(args):
    out = args.out_dir or os.path.join(os.path.dirname(os.path.abspath(args.records)), "plots")
    for path in emit_plots(None, args.records, out):
        print(path)
    return EXIT_OK


def build_parser():
    p = _Parser(prog="phasesync", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND})")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="sample an instance and write it to a file")
    g.add_argument("-n", type=int, required=True)
    g.add_argument("--sigma", type=float, required=True)
    g.add_argument("--relative", action="store_true",
                   help="read --sigma as a multiple of sqrt(n / log n)")
    g.add_argument("--kind", choices=NOISE_KINDS, default="complex-gaussian")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="run one estimator on an instance file")
    s.add_argument("instance")
    s.add_argument("--estimator", choices=ESTIMATORS, default="gpm")
    s.add_argument("--max-iter", type=int, default=None)
    s.add_argument("--out", help="write the estimate as a candidate file")
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("certify", help="certificate report for a candidate")
    c.add_argument("instance")
    c.add_argument("candidate")
    c.add_argument("--psd-tol", type=float, default=None)
    c.add_argument("--kernel-tol", type=float, default=None)
    c.add_argument("--mu", action="store_true", help="include the |Cx| vector")
    c.set_defaults(func=cmd_certify)

    w = sub.add_parser("sweep", help="Monte Carlo sweep from a TOML or JSON config")
    w.add_argument("config")
    w.add_argument("--output-dir", default=None)
    w.add_argument("--workers", type=int, default=None)
    w.add_argument("--no-plots", action="store_true")
    w.set_defaults(func=cmd_sweep)

    q = sub.add_parser("plot", help="SVG figures from a records.csv")
    q.add_argument("records")
    q.add_argument("--out-dir", default=None)
    q.set_defaults(func=cmd_plot)
    return p


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ConvergenceError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
