"""Plain-text file formats for codebooks, ensembles, traces and curves.

Floats are written with 17 significant digits so every file round-trips
exactly and identical inputs give byte-identical files.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .constellation import Codebook, block_partition


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _interleave(Z: np.ndarray) -> np.ndarray:
    Z = np.atleast_2d(Z)
    out = np.empty((Z.shape[0], 2 * Z.shape[1]))
    out[:, 0::2] = Z.real
    out[:, 1::2] = Z.imag
    return out


def _deinterleave(R: np.ndarray) -> np.ndarray:
    R = np.atleast_2d(R)
    return R[:, 0::2] + 1j * R[:, 1::2]


def _write_rows(fh, rows):
    for row in rows:
        fh.write(" ".join(_fmt(v) for v in row))
        fh.write("\n")


def write_codebook(path, book: Codebook) -> None:
    """Header of ``# key=value`` lines, then M rows of K interleaved (re, im) pairs."""
    expected = block_partition(book.M, book.N)
    if any(not np.array_equal(a, b) for a, b in zip(book.partition, expected)):
        raise ValueError("only consecutive block partitions can be serialized")
    with open(path, "w") as fh:
        fh.write(f"# K={book.K}\n# M={book.M}\n# N={book.N}\n")
        fh.write(f"# constellation={book.constellation}\n# seed={book.seed}\n")
        fh.write(f"# p_av={_fmt(book.p_av)}\n")
        _write_rows(fh, _interleave(book.symbols))


def _read_header(path) -> dict:
    header = {}
    with open(path) as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            key, _, value = line[1:].strip().partition("=")
            header[key.strip()] = value.strip()
    return header


def read_codebook(path) -> Codebook:
    header = _read_header(path)
    try:
        K, M, N = int(header["K"]), int(header["M"]), int(header["N"])
    except KeyError as exc:
        raise ValueError(f"{path}: missing header field {exc}") from None
    data = np.loadtxt(path, comments="#", ndmin=2)
    if data.shape != (M, 2 * K):
        raise ValueError(f"{path}: expected {M} rows of {2 * K} values, got {data.shape}")
    seed = header.get("seed", "None")
    return Codebook(
        _deinterleave(data),
        block_partition(M, N),
        p_av=float(header["p_av"]),
        constellation=header.get("constellation", "custom"),
        seed=None if seed == "None" else int(seed),
    )


def write_ensemble(path, ensemble) -> None:
    """One block per matrix: a ``# n=<index> K=<K>`` line, then K row-major rows."""
    with open(path, "w") as fh:
        for n, W in enumerate(ensemble):
            W = np.asarray(W)
            fh.write(f"# n={n} K={W.shape[0]}\n")
            _write_rows(fh, _interleave(W))


def read_ensemble(path) -> list:
    mats, rows, K = [], [], None
    with open(path) as fh:
        for line in fh:
            if line.startswith("#"):
                if rows:
                    mats.append(_deinterleave(np.array(rows)))
                    rows = []
                fields = dict(f.split("=") for f in line[1:].split())
                K = int(fields["K"])
            elif line.strip():
                rows.append([float(v) for v in line.split()])
    if rows:
        mats.append(_deinterleave(np.array(rows)))
    for W in mats:
        if W.shape != (K, K):
            raise ValueError(f"{path}: malformed block of shape {W.shape}")
    return mats


def write_csv(path, header, rows) -> None:
    """Write rows to ``path``, or to an already-open text stream."""
    if hasattr(path, "write"):
        _csv_rows(path, header, rows)
        return
    with open(path, "w", newline="") as fh:
        _csv_rows(fh, header, rows)


def _csv_rows(fh, header, rows):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([v if isinstance(v, (int, np.integer, str)) else _fmt(v) for v in row])


def read_csv(path) -> dict:
    """Columns of a CSV written by :func:`write_csv` as float arrays."""
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r)
        data = [list(map(float, row)) for row in r]
    arr = np.array(data).reshape(-1, len(header))
    return {name: arr[:, i] for i, name in enumerate(header)}


def write_trace(path, trace) -> None:
    write_csv(path, ["iter", "f", "max_unitarity_err", "max_dW"], trace.rows())


def write_bound_sweep(path, reports) -> None:
    write_csv(path, ["gamma", "upper", "lower", "quartic_total"],
              ((r.gamma, r.upper, r.lower, r.quartic_total) for r in reports))


def ensure_dir(path) -> Path:
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p
