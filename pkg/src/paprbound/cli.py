"""Command-line entry point: ``paprbound <generate|bound|optimize|ccdf|verify|run>``."""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

import numpy as np

from .bound import bound_sweep, build_spectral_pair
from .constellation import ConstellationSpec, Kind, generate_codebook
from .experiment import (CCDF_HEADER, ExperimentConfig, _ccdf_rows, default_gamma_grid,
                         empirical_ccdf, run_experiment)
from .io import (ensure_dir, read_codebook, read_ensemble, write_bound_sweep, write_codebook,
                 write_csv, write_ensemble, write_trace)
from .optimizer import OptimizerConfig, Projection, ProjectionError, auto_epsilon, optimize
from .verify import verify_suite


def _int_list(text: str) -> list:
    return [int(x) for x in text.replace(",", " ").split()]


def _float_list(text: str) -> list:
    return [float(x) for x in text.replace(",", " ").split()]


def _epsilon(text: str):
    return text if text == "auto" else float(text)


def _add_gamma_args(p):
    p.add_argument("--gamma", type=_float_list, default=None,
                   help="explicit comma-separated gamma values (linear scale)")
    p.add_argument("--gamma-min", type=float, default=2.0)
    p.add_argument("--gamma-max", type=float, default=None, help="defaults to K")
    p.add_argument("--gamma-points", type=int, default=40)


def _gammas(args, K: int) -> np.ndarray:
    if args.gamma is not None:
        return np.asarray(args.gamma)
    hi = args.gamma_max if args.gamma_max is not None else default_gamma_grid(K)[-1]
    return np.linspace(args.gamma_min, hi, args.gamma_points)


def _add_codebook_args(p, seed_required: bool):
    p.add_argument("--K", type=int, default=128, help="subcarriers per codeword")
    p.add_argument("--M", type=int, default=2000, help="codewords")
    p.add_argument("--N", type=int, default=50, help="subsets (must divide M)")
    p.add_argument("--constellation", choices=[k.value for k in Kind], default="QAM16")
    p.add_argument("--raw", action="store_true", help="keep integer-grid points (no unit-energy scaling)")
    p.add_argument("--seed", type=int, required=seed_required, default=None if seed_required else 0)


def _constellation(args) -> str:
    return ConstellationSpec(Kind(args.constellation), not args.raw).label


def _out(path):
    return sys.stdout if path in (None, "-") else path


def cmd_generate(args) -> int:
    spec = ConstellationSpec.from_label(_constellation(args))
    book = generate_codebook(spec, args.K, args.M, args.N, args.seed)
    write_codebook(args.out, book)
    print(f"wrote {args.out}: K={book.K} M={book.M} N={book.N} p_av={book.p_av:.6g}", file=sys.stderr)
    return 0


def cmd_bound(args) -> int:
    book = read_codebook(args.codebook)
    ensemble = read_ensemble(args.ensemble) if args.ensemble else None
    reports = bound_sweep(book, build_spectral_pair(book.K), _gammas(args, book.K), ensemble)
    write_bound_sweep(_out(args.out), reports)
    return 0


def cmd_optimize(args) -> int:
    book = read_codebook(args.codebook)
    eps = auto_epsilon(book.K, book.M, book.N) if args.epsilon == "auto" else args.epsilon
    config = OptimizerConfig(eps, args.iterations, args.stop_tol, args.projection,
                             tuple(args.snapshots) + (0,))
    ensemble, trace = optimize(book, build_spectral_pair(book.K), config)
    out = ensure_dir(args.out_dir)
    for it, snap in sorted(trace.snapshots.items()):
        write_ensemble(out / f"ensemble_iter{it:04d}.txt", snap)
    write_ensemble(out / "ensemble_final.txt", ensemble)
    write_trace(out / "trace.csv", trace)
    print(f"f: {trace.initial_objective:.6g} -> {trace.objective[-1]:.6g} after "
          f"{trace.iterations} iterations", file=sys.stderr)
    return 0


def cmd_ccdf(args) -> int:
    book = read_codebook(args.codebook)
    ensemble = read_ensemble(args.ensemble) if args.ensemble else None
    gammas = _gammas(args, book.K)
    curve = empirical_ccdf(book, ensemble, args.J, gammas, iteration=args.iteration)
    reports = bound_sweep(book, build_spectral_pair(book.K), gammas, ensemble)
    write_csv(_out(args.out), CCDF_HEADER, _ccdf_rows(curve, reports))
    return 0


def cmd_verify(args) -> int:
    builder = build_spectral_pair
    if args.corrupt_vhat:
        def builder(K):
            pair = build_spectral_pair(K)
            return dataclasses.replace(pair, Vhat=pair.Vhat.conj())
    report = verify_suite(args.K, args.seeds, pair_builder=builder)
    for line in report.lines():
        print(line)
    if not report.passed:
        failed = [c.name for c in report.checks.values() if not c.passed]
        print(f"verify: invariant failure in {', '.join(failed)}", file=sys.stderr)
        return 1
    return 0


def cmd_run(args) -> int:
    config = ExperimentConfig(
        K=args.K, M=args.M, N=args.N, J=args.J, constellation=_constellation(args),
        seed=args.seed, epsilon=args.epsilon, iterations=args.iterations,
        snapshot_iters=args.snapshots,
        gamma_grid=None if args.gamma is None else list(args.gamma),
        projection=args.projection, stop_tol=args.stop_tol, output_dir=args.out_dir,
        fresh_eval=args.fresh_eval,
    )
    manifest = run_experiment(config)
    print(f"wrote {args.out_dir}: snapshots {manifest['snapshots']}, "
          f"f {manifest['initial_objective']} -> {manifest['final_objective']}", file=sys.stderr)
    return 0


def _add_optimizer_args(p):
    p.add_argument("--epsilon", type=_epsilon, default="auto", help="step size or 'auto' (= N/M/K^2)")
    p.add_argument("--iterations", type=int, default=100)
    p.add_argument("--stop-tol", type=float, default=1e-6)
    p.add_argument("--projection", choices=[p.value for p in Projection], default="symmetric")
    p.add_argument("--snapshots", type=_int_list, default=[], help="iterations to snapshot, e.g. 10,20,50")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="paprbound", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a random codebook")
    _add_codebook_args(p, seed_required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bound", help="sweep the CCDF upper/lower bound over gamma")
    p.add_argument("--codebook", required=True)
    p.add_argument("--ensemble")
    _add_gamma_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("optimize", help="find one unitary matrix per subset")
    p.add_argument("--codebook", required=True)
    _add_optimizer_args(p)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("ccdf", help="empirical PMEPR CCDF next to the bound")
    p.add_argument("--codebook", required=True)
    p.add_argument("--ensemble")
    p.add_argument("--J", type=int, default=16, help="oversampling factor")
    p.add_argument("--iteration", type=int, default=0, help="label for the iteration column")
    _add_gamma_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_ccdf)

    p = sub.add_parser("verify", help="run the invariant suite")
    p.add_argument("--K", type=_int_list, default=[1, 4, 8, 32])
    p.add_argument("--seeds", type=_int_list, default=[0, 1, 2])
    p.add_argument("--corrupt-vhat", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("run", help="full experiment into an output directory")
    _add_codebook_args(p, seed_required=True)
    p.add_argument("--J", type=int, default=16, help="oversampling factor")
    _add_optimizer_args(p)
    p.add_argument("--gamma", type=_float_list, default=None)
    p.add_argument("--fresh-eval", action="store_true", help="also evaluate on a held-out codebook")
    p.add_argument("--out-dir", type=str, default=str(Path("results")))
    p.set_defaults(func=cmd_run)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, ProjectionError) as exc:
        print(f"paprbound {args.command}: error: {exc}", file=sys.stderr)
        return 2
