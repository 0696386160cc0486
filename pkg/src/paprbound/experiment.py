"""End-to-end experiments: optimize, measure the empirical CCDF, sweep bounds."""

from __future__ import annotations

import json
import subprocess
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .bound import bound_sweep, build_spectral_pair
from .constellation import Codebook, ConstellationSpec, generate_codebook
from .io import ensure_dir, write_bound_sweep, write_codebook, write_csv, write_ensemble, write_trace
from .optimizer import OptimizerConfig, Projection, auto_epsilon, identity_ensemble, optimize
from .signal import pmepr, to_db


def default_gamma_grid(K: int, points: int = 40) -> np.ndarray:
    """``points`` values from 2 to K (to 4 when K < 4), linear scale."""
    return np.linspace(2.0, float(max(K, 4)), points)


def _check_grid(gammas) -> np.ndarray:
    g = np.asarray(gammas, dtype=float).ravel()
    if g.size == 0 or np.any(g <= 0) or np.any(np.diff(g) <= 0):
        raise ValueError("gamma grid must be positive and strictly increasing")
    return g


@dataclass(frozen=True)
class CcdfCurve:
    gamma: np.ndarray
    gamma_db: np.ndarray
    prob: np.ndarray
    iteration: int = 0


def transmitted(book: Codebook, ensemble=None) -> np.ndarray:
    """Codewords after applying their subset's matrix, in codebook order."""
    if ensemble is None:
        return np.asarray(book.symbols)
    mats = list(ensemble)
    if len(mats) != book.N:
        raise ValueError(f"ensemble has {len(mats)} matrices for {book.N} subsets")
    out = np.empty_like(book.symbols)
    for n, W in enumerate(mats):
        if np.shape(W) != (book.K, book.K):
            raise ValueError(f"matrix {n} has shape {np.shape(W)}, expected {(book.K, book.K)}")
        out[book.partition[n]] = book.subset(n) @ np.asarray(W).T
    return out


def codebook_pmepr(book: Codebook, ensemble=None, J: int = 16) -> np.ndarray:
    return pmepr(transmitted(book, ensemble), J, book.p_av)


def empirical_ccdf(book: Codebook, ensemble=None, J: int = 16, gamma_grid=None,
                   iteration: int = 0) -> CcdfCurve:
    """Fraction of codewords whose PMEPR exceeds each gamma."""
    g = _check_grid(default_gamma_grid(book.K) if gamma_grid is None else gamma_grid)
    values = np.sort(codebook_pmepr(book, ensemble, J))
    exceed = values.size - np.searchsorted(values, g, side="right")
    return CcdfCurve(g, to_db(g), exceed / values.size, iteration)


@dataclass
class ExperimentConfig:
    K: int = 128
    M: int = 2000
    N: int = 50
    J: int = 16
    constellation: str = "QAM16"
    seed: int = 0
    epsilon: float | str = "auto"
    iterations: int = 100
    snapshot_iters: list = field(default_factory=list)
    gamma_grid: list | None = None
    projection: str = "symmetric"
    stop_tol: float = 1e-6
    output_dir: str = "results"
    fresh_eval: bool = False

    def __post_init__(self):
        if min(self.K, self.M, self.N, self.J) < 1:
            raise ValueError("K, M, N and J must all be >= 1")
        if self.M % self.N:
            raise ValueError(f"N={self.N} does not divide M={self.M}")
        if self.gamma_grid is not None:
            self.gamma_grid = [float(x) for x in _check_grid(self.gamma_grid)]
        Projection(self.projection)
        ConstellationSpec.from_label(self.constellation)

    @property
    def step(self) -> float:
        if self.epsilon == "auto":
            return auto_epsilon(self.K, self.M, self.N)
        return float(self.epsilon)

    @property
    def gammas(self) -> np.ndarray:
        return default_gamma_grid(self.K) if self.gamma_grid is None else np.asarray(self.gamma_grid)

    def snapshots(self) -> list:
        """Requested snapshot iterations plus the start and the last iteration."""
        return sorted({0, self.iterations, *(int(i) for i in self.snapshot_iters)})


def _git_describe() -> str | None:
    try:
        out = subprocess.run(["git", "describe", "--always", "--dirty", "--tags"],
                             cwd=Path(__file__).parent, capture_output=True, text=True, timeout=5)
    except (OSError, subprocess.SubprocessError):
        return None
    if out.returncode != 0:
        return None
    return out.stdout.strip() or None


def _ccdf_rows(curve: CcdfCurve, reports):
    for g, gdb, p, r in zip(curve.gamma, curve.gamma_db, curve.prob, reports):
        yield curve.iteration, g, gdb, p, r.upper, r.lower


CCDF_HEADER = ["iteration", "gamma", "gamma_db", "ccdf", "upper", "lower"]


def run_experiment(config: ExperimentConfig) -> dict:
    """Generate, optimize, evaluate and write every artifact into ``output_dir``.

    Data files depend only on the configuration; timings live in the
    ``timing`` block of ``manifest.json``.
    """
    t0 = time.perf_counter()
    out = ensure_dir(config.output_dir)
    spec = ConstellationSpec.from_label(config.constellation)
    book = generate_codebook(spec, config.K, config.M, config.N, config.seed)
    pair = build_spectral_pair(config.K)
    gammas = config.gammas
    snaps = config.snapshots()

    write_codebook(out / "codebook.txt", book)
    opt_config = OptimizerConfig(epsilon=config.step, max_iters=max(config.iterations, 1),
                                 stop_tol=config.stop_tol, projection=config.projection,
                                 snapshot_iters=snaps)
    t1 = time.perf_counter()
    if config.iterations == 0:
        final = identity_ensemble(book.N, book.K)
        trace = None
        snapshots = {0: final}
    else:
        final, trace = optimize(book, pair, opt_config)
        snapshots = dict(trace.snapshots)
        snapshots[trace.iterations] = final
    t2 = time.perf_counter()

    fresh = None
    if config.fresh_eval:
        fresh = generate_codebook(spec, config.K, config.M, config.N, config.seed, stream=1)

    ccdf_rows, fresh_rows = [], []
    for it in sorted(snapshots):
        ens = snapshots[it]
        write_ensemble(out / f"ensemble_iter{it:04d}.txt", ens)
        curve = empirical_ccdf(book, ens, config.J, gammas, iteration=it)
        ccdf_rows.extend(_ccdf_rows(curve, bound_sweep(book, pair, gammas, ens)))
        if fresh is not None:
            curve = empirical_ccdf(fresh, ens, config.J, gammas, iteration=it)
            fresh_rows.extend(_ccdf_rows(curve, bound_sweep(fresh, pair, gammas, ens)))
    write_csv(out / "ccdf.csv", CCDF_HEADER, ccdf_rows)
    if fresh is not None:
        write_csv(out / "ccdf_fresh.csv", CCDF_HEADER, fresh_rows)

    write_bound_sweep(out / "bound_identity.csv", bound_sweep(book, pair, gammas))
    write_bound_sweep(out / "bound_final.csv", bound_sweep(book, pair, gammas, final))
    if trace is not None:
        write_trace(out / "trace.csv", trace)

    cfg = asdict(config)
    cfg["epsilon_value"] = config.step
    cfg["gamma_grid"] = [float(g) for g in gammas]
    manifest = {
        "config": cfg,
        "version": __version__,
        "git": _git_describe(),
        "p_av": book.p_av,
        "snapshots": sorted(snapshots),
        "initial_objective": None if trace is None else trace.initial_objective,
        "final_objective": None if trace is None else trace.objective[-1],
        "iterations_run": 0 if trace is None else trace.iterations,
        "converged": False if trace is None else trace.converged,
        "timing": {
            "started": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
            "optimize_seconds": t2 - t1,
            "total_seconds": time.perf_counter() - t0,
        },
    }
    with open(out / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2)
    return manifest
