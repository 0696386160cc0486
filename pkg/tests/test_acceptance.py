"""Exit criteria. Each test records one PASS/FAIL line shown in the terminal summary."""

import contextlib
import filecmp
import json

import numpy as np
import pytest

from conftest import (ACCEPTANCE_LINES, dense_dft, fd_gradient, oracle_gradient, qam16,
                      random_unitary)
from paprbound.bound import (build_spectral_pair, ccdf_upper_bound, eigendecomposition_error,
                             expansion_identity_check, jensen_floor, lower_bound, quartic_sums)
from paprbound.cli import main
from paprbound.constellation import ConstellationSpec, generate_codebook
from paprbound.experiment import codebook_pmepr, default_gamma_grid, empirical_ccdf
from paprbound.optimizer import (OptimizerConfig, auto_epsilon, gradient, objective_subset,
                                 optimize, project_gram_schmidt, project_symmetric)
from paprbound.bound import unitarity_error
from paprbound.signal import aperiodic_autocorr, autocorr_peak_bound, peak_envelope_power

QAM16 = ConstellationSpec()


@contextlib.contextmanager
def criterion(number, title):
    detail = {}
    try:
        yield detail
    except BaseException:
        ACCEPTANCE_LINES.append(f"[FAIL] {number:>2}. {title} {_fmt(detail)}")
        raise
    ACCEPTANCE_LINES.append(f"[PASS] {number:>2}. {title} {_fmt(detail)}")


def _fmt(detail):
    return " ".join(f"{k}={v:.3g}" if isinstance(v, float) else f"{k}={v}" for k, v in detail.items())


def test_01_eigendecomposition_identity():
    with criterion(1, "eigendecomposition identity, K in {2,4,8,64,128}, tol 1e-10") as d:
        worst = 0.0
        for K in (2, 4, 8, 64, 128):
            pair = build_spectral_pair(K)
            V, Vh = dense_dft(K)
            assert np.max(np.abs(pair.V - V)) < 1e-12 and np.max(np.abs(pair.Vhat - Vh)) < 1e-12
            worst = max(worst, eigendecomposition_error(pair))
        d["worst"] = worst
        assert worst < 1e-10


def test_02_expansion_identity():
    with criterion(2, "expansion identity, 200 codewords at K in {4,16,64}, tol 1e-9 rel") as d:
        rng = np.random.default_rng(2)
        worst = 0.0
        for K in (4, 16, 64):
            pair = build_spectral_pair(K)
            for c in qam16(rng, (200, K)):
                worst = max(worst, expansion_identity_check(c, pair))
        d["worst"] = worst
        assert worst < 1e-9

        ones = np.ones(4)
        rho = aperiodic_autocorr(ones)
        rho_form = 7 * (abs(rho[0]) ** 2 + 2 * np.sum(np.abs(rho[1:]) ** 2))
        qa, qb = quartic_sums(ones, build_spectral_pair(4))
        d["rho_form"] = float(rho_form)
        d["quartic_form"] = float(14 * (qa + qb))
        assert rho_form == pytest.approx(308, abs=1e-12)
        assert (qa, qb) == (pytest.approx(16, abs=1e-12), pytest.approx(6, abs=1e-12))
        assert 14 * (qa + qb) == pytest.approx(308, abs=1e-11)


def test_03_bound_chain_ordering():
    with criterion(3, "bound chain, 1000 codewords K=32 J=64, zero violations") as d:
        rng = np.random.default_rng(3)
        K = 32
        pair = build_spectral_pair(K)
        X = qam16(rng, (1000, K))
        peak = peak_envelope_power(X, 64)
        acb = np.array([autocorr_peak_bound(aperiodic_autocorr(c)) for c in X])
        qa, qb = quartic_sums(X, pair)
        quartic = K * (2 * K - 1) / 2 * (qa + qb)
        v1 = int(np.sum(peak > acb))
        v2 = int(np.sum(peak ** 2 > quartic))
        d["violations_autocorr"] = v1
        d["violations_quartic"] = v2
        d["max_peak_over_autocorr"] = float(np.max(peak / acb))
        assert v1 == 0 and v2 == 0


def test_04_markov_validity():
    with criterion(4, "Markov validity, K=16 M=2000, default gamma grid, zero violations") as d:
        book = generate_codebook(QAM16, 16, 2000, 1, seed=4)
        pair = build_spectral_pair(16)
        grid = default_gamma_grid(16)
        curve = empirical_ccdf(book, None, 16, grid)
        upper = np.array([ccdf_upper_bound(book, pair, None, g).upper for g in grid])
        violations = int(np.sum(curve.prob > upper))
        d["violations"] = violations
        d["min_gap"] = float(np.min(upper - curve.prob))
        assert violations == 0


def test_05_jensen_floor():
    with criterion(5, "Jensen floor <= upper; M=20000 K=8 floor within 10% of closed form") as d:
        rng = np.random.default_rng(5)
        pair8 = build_spectral_pair(8)
        for N in (1, 10, 100):
            book = generate_codebook(QAM16, 8, 1000, N, seed=50 + N)
            for ens in (None, [random_unitary(rng, 8) for _ in range(N)]):
                assert jensen_floor(book, pair8, 3.0, ens) <= ccdf_upper_bound(book, pair8, ens, 3.0).upper

        book = generate_codebook(QAM16, 8, 20000, 1, seed=5)
        gamma = 4.0
        floor = jensen_floor(book, pair8, gamma)
        closed = float(lower_bound(8, book.p_av, gamma))
        upper = ccdf_upper_bound(book, pair8, None, gamma).upper
        d["floor"] = floor
        d["closed_form"] = closed
        d["rel_gap"] = abs(floor - closed) / closed
        assert floor <= upper
        assert abs(floor - closed) / closed < 0.10


def test_06_gradient_correctness():
    with criterion(6, "gradient vs finite differences (1e-5 rel) and dense form (1e-10 rel)") as d:
        rng = np.random.default_rng(6)
        pair = build_spectral_pair(4)
        worst_fd = worst_dense = 0.0
        for _ in range(3):
            X = qam16(rng, (5, 4))
            W = random_unitary(rng, 4)
            assert np.max(np.abs(W - np.eye(4))) > 0.1
            G = gradient(W, X, pair)
            F = fd_gradient(lambda Z: objective_subset(Z, X, pair), W, h=1e-6)
            for part in (np.real, np.imag):
                rel = np.abs(part(G) - part(F)) / np.abs(part(G))
                worst_fd = max(worst_fd, float(np.max(rel)))
            D = oracle_gradient(W, X)
            worst_dense = max(worst_dense, float(np.max(np.abs(G - D)) / np.max(np.abs(D))))
        d["worst_fd"] = worst_fd
        d["worst_dense"] = worst_dense
        assert worst_fd < 1e-5
        assert worst_dense < 1e-10


def test_07_projection_correctness():
    with criterion(7, "projections: polar factor, unitarity, fixed points, tol 1e-10") as d:
        rng = np.random.default_rng(7)
        polar = unit = fixed = 0.0
        for _ in range(10):
            A = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
            U, _, Vh = np.linalg.svd(A)
            polar = max(polar, float(np.max(np.abs(project_symmetric(A) - U @ Vh))))
            unit = max(unit, unitarity_error(project_symmetric(A)), unitarity_error(project_gram_schmidt(A)))
            Q = random_unitary(rng, 8)
            fixed = max(fixed, float(np.max(np.abs(project_symmetric(Q) - Q))),
                        float(np.max(np.abs(project_gram_schmidt(Q) - Q))))
        d["polar"] = polar
        d["unitarity"] = unit
        d["fixed_point"] = fixed
        assert polar < 1e-10 and unit < 1e-10 and fixed < 1e-10


def test_08_optimization_efficacy():
    with criterion(8, "desk run K=16 M=200 N=10: f drops, median PMEPR drops, unitary") as d:
        K, M, N = 16, 200, 10
        book = generate_codebook(QAM16, K, M, N, seed=8)
        pair = build_spectral_pair(K)
        config = OptimizerConfig(auto_epsilon(K, M, N), 50, projection="symmetric", snapshot_iters=(0, 50))
        Ws, trace = optimize(book, pair, config)
        med0 = float(np.median(codebook_pmepr(book, trace.snapshots[0], 16)))
        med50 = float(np.median(codebook_pmepr(book, trace.snapshots[50], 16)))
        d["f0"] = trace.initial_objective
        d["f50"] = trace.objective[-1]
        d["median0"] = med0
        d["median50"] = med50
        d["max_unitarity"] = max(trace.unitarity_error)
        assert trace.iterations == 50
        assert trace.objective[-1] < trace.initial_objective
        assert med50 < med0
        assert max(trace.unitarity_error) < 1e-8


def test_09_subset_count_trend():
    with criterion(9, "K=16 M=400: N=40 ends with lower f than N=8") as d:
        K, M = 16, 400
        pair = build_spectral_pair(K)
        finals = {}
        for N in (8, 40):
            book = generate_codebook(QAM16, K, M, N, seed=9)
            _, trace = optimize(book, pair, OptimizerConfig(auto_epsilon(K, M, N), 50))
            finals[N] = trace.objective[-1]
        d["f_N8"] = finals[8]
        d["f_N40"] = finals[40]
        assert finals[40] < finals[8]


def test_10_determinism(tmp_path):
    with criterion(10, "two identical `run` invocations give byte-identical data files") as d:
        args = ["run", "--K", "16", "--M", "200", "--N", "10", "--J", "16", "--seed", "10",
                "--iterations", "30", "--snapshots", "10,20", "--fresh-eval"]
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(args + ["--out-dir", str(a)]) == 0
        assert main(args + ["--out-dir", str(b)]) == 0
        names = sorted(p.name for p in a.iterdir())
        assert names == sorted(p.name for p in b.iterdir())
        data = [n for n in names if n != "manifest.json"]
        _, mismatch, errors = filecmp.cmpfiles(a, b, data, shallow=False)
        d["files"] = len(data)
        d["mismatched"] = len(mismatch) + len(errors)
        assert not mismatch and not errors
        ma, mb = (json.loads((p / "manifest.json").read_text()) for p in (a, b))
        ma.pop("timing"), mb.pop("timing")
        ma["config"].pop("output_dir"), mb["config"].pop("output_dir")
        assert ma == mb
