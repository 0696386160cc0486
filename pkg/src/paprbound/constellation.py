"""Random QAM/PSK codebooks partitioned into consecutive subsets."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class Kind(str, Enum):
    QAM16 = "QAM16"
    QAM4 = "QAM4"
    BPSK = "BPSK"


_RAW_POINTS = {
    Kind.QAM16: np.array([a + 1j * b for a in (-3, -1, 1, 3) for b in (-3, -1, 1, 3)]),
    Kind.QAM4: np.array([a + 1j * b for a in (-1, 1) for b in (-1, 1)]),
    Kind.BPSK: np.array([-1.0 + 0j, 1.0 + 0j]),
}


@dataclass(frozen=True)
class ConstellationSpec:
    """Symbol alphabet. ``normalized`` scales the points to unit mean energy."""

    kind: Kind = Kind.QAM16
    normalized: bool = True

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))

    def points(self) -> np.ndarray:
        pts = _RAW_POINTS[self.kind].astype(complex)
        if self.normalized:
            pts = pts / np.sqrt(np.mean(np.abs(pts) ** 2))
        return pts

    @property
    def label(self) -> str:
        return self.kind.value + ("" if self.normalized else "-raw")

    @classmethod
    def from_label(cls, label: str) -> "ConstellationSpec":
        if label.endswith("-raw"):
            return cls(Kind(label[:-4]), normalized=False)
        return cls(Kind(label), normalized=True)


def as_codeword(c) -> np.ndarray:
    """Validate and return ``c`` as a 1-D complex array."""
    c = np.asarray(c, dtype=complex)
    if c.ndim != 1 or c.size < 1:
        raise ValueError(f"codeword must be a non-empty vector, got shape {c.shape}")
    if not np.all(np.isfinite(c)):
        raise ValueError("codeword has non-finite entries")
    return c


def codeword_power(c) -> float:
    c = np.asarray(c, dtype=complex)
    return float(np.sum(c.real ** 2 + c.imag ** 2))


@dataclass(frozen=True)
class Codebook:
    """M codewords of length K stored row-wise, split into N index blocks.

    The symbol array is made read-only on construction.
    """

    symbols: np.ndarray
    partition: tuple = field(default=())
    p_av: float = 0.0
    constellation: str = "custom"
    seed: int | None = None

    def __post_init__(self):
        sym = np.array(self.symbols, dtype=complex)
        if sym.ndim != 2 or sym.shape[0] < 1 or sym.shape[1] < 1:
            raise ValueError(f"symbols must be an (M, K) array, got shape {sym.shape}")
        if not np.all(np.isfinite(sym)):
            raise ValueError("codebook has non-finite entries")
        sym.setflags(write=False)
        object.__setattr__(self, "symbols", sym)

        M = sym.shape[0]
        parts = self.partition if len(self.partition) else (np.arange(M),)
        parts = tuple(np.asarray(p, dtype=np.intp) for p in parts)
        joined = np.sort(np.concatenate(parts)) if parts else np.array([], dtype=np.intp)
        if joined.size != M or not np.array_equal(joined, np.arange(M)):
            raise ValueError("partition must split 0..M-1 into disjoint sets")
        for p in parts:
            p.setflags(write=False)
        object.__setattr__(self, "partition", parts)

        if not self.p_av:
            object.__setattr__(self, "p_av", mean_power(sym))

    @property
    def K(self) -> int:
        return self.symbols.shape[1]

    @property
    def M(self) -> int:
        return self.symbols.shape[0]

    @property
    def N(self) -> int:
        return len(self.partition)

    def subset(self, n: int) -> np.ndarray:
        """Codewords of subset ``n`` (0-based) as an (m, K) array."""
        if not 0 <= n < self.N:
            raise IndexError(f"subset index {n} outside 0..{self.N - 1}")
        return self.symbols[self.partition[n]]


def mean_power(symbols: np.ndarray) -> float:
    sym = np.asarray(symbols)
    return float(np.mean(np.sum(sym.real ** 2 + sym.imag ** 2, axis=1)))


def block_partition(M: int, N: int) -> tuple:
    """Consecutive blocks of size M/N; block n holds codewords n*M/N .. (n+1)*M/N - 1."""
    if M < 1 or N < 1 or N > M:
        raise ValueError(f"need 1 <= N <= M, got M={M}, N={N}")
    if M % N:
        raise ValueError(f"N={N} does not divide M={M}")
    size = M // N
    return tuple(np.arange(n * size, (n + 1) * size) for n in range(N))


def generate_codeword(spec: ConstellationSpec, K: int, seed: int, index: int,
                      stream: int = 0) -> np.ndarray:
    """Codeword ``index`` of the stream keyed by ``(seed, stream)``.

    Each codeword owns its own child seed, so it can be regenerated
    without producing the ones before it.
    """
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(stream, index))
    rng = np.random.Generator(np.random.PCG64(ss))
    pts = spec.points()
    return pts[rng.integers(0, pts.size, size=K)]


def generate_codebook(spec: ConstellationSpec, K: int, M: int, N: int, seed: int,
                      stream: int = 0) -> Codebook:
    """Draw M codewords with i.i.d. uniform symbols and split them into N blocks.

    ``stream`` selects an independent family of codewords for the same seed,
    used for held-out evaluation sets.
    """
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    partition = block_partition(M, N)
    symbols = np.empty((M, K), dtype=complex)
    for i in range(M):
        symbols[i] = generate_codeword(spec, K, seed, i, stream)
    return Codebook(symbols, partition, constellation=spec.label, seed=seed)
