"""Deterministic chunked Monte Carlo.

Samples are split into fixed-size chunks. Chunk ``k`` draws from a Philox
stream keyed by ``(master_seed, k)``, so its output does not depend on which
worker runs it or when. Per-chunk results are merged in chunk order: exact
integer addition for categorical kernels, ``math.fsum`` plus Chan's pairwise
variance update for real-valued kernels. The result is bit-identical for any
worker count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ParameterError

DEFAULT_SAMPLES = 10**7
DEFAULT_CHUNK = 2**20

Kernel = Callable[[np.random.Generator, int], np.ndarray]


def default_samples() -> int:
    value = os.environ.get("ROC_DEFAULT_SAMPLES")
    if value is None:
        return DEFAULT_SAMPLES
    try:
        samples = int(value)
    except ValueError:
        raise ParameterError(f"ROC_DEFAULT_SAMPLES must be an integer, got {value!r}") from None
    if samples < 1:
        raise ParameterError("ROC_DEFAULT_SAMPLES must be >= 1")
    return samples


@dataclass(frozen=True)
class McConfig:
    master_seed: int = 0
    samples: int = DEFAULT_SAMPLES
    chunk_size: int = DEFAULT_CHUNK
    workers: int = 1

    def __post_init__(self):
        if not 0 <= self.master_seed < 2**64:
            raise ParameterError("master_seed must fit in an unsigned 64-bit integer")
        for name in ("samples", "chunk_size", "workers"):
            if int(getattr(self, name)) < 1:
                raise ParameterError(f"{name} must be >= 1, got {getattr(self, name)!r}")

    @property
    def n_chunks(self) -> int:
        return -(-self.samples // self.chunk_size)

    def chunk_lengths(self) -> list[int]:
        full, rest = divmod(self.samples, self.chunk_size)
        return [self.chunk_size] * full + ([rest] if rest else [])


@dataclass(frozen=True)
class Estimate:
    mean: float
    std_error: float
    samples: int
    master_seed: int

    def within(self, value: float, k: float = 4.0) -> bool:
        return abs(self.mean - value) <= k * self.std_error


@dataclass(frozen=True)
class CountTable:
    counts: np.ndarray
    samples: int
    master_seed: int

    @property
    def frequencies(self) -> np.ndarray:
        return self.counts / self.samples

    @property
    def std_errors(self) -> np.ndarray:
        p = self.frequencies
        return np.sqrt(p * (1.0 - p) / self.samples)


def chunk_rng(master_seed: int, chunk: int) -> np.random.Generator:
    """Counter-based stream for one chunk."""
    seq = np.random.SeedSequence(entropy=master_seed, spawn_key=(chunk,))
    return np.random.Generator(np.random.Philox(seq))


def _map_chunks(fn, cfg: McConfig) -> list:
    jobs = list(enumerate(cfg.chunk_lengths()))
    if cfg.workers == 1 or len(jobs) == 1:
        return [fn(k, m) for k, m in jobs]
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        # map preserves submission order, so merging below is order-fixed
        return list(pool.map(lambda job: fn(*job), jobs))


def run_chunked(kernel: Kernel, cfg: McConfig, categories: int | None = None) -> Estimate | CountTable:
    """Evaluate ``kernel(rng, m)`` over all chunks and reduce.

    The kernel returns ``m`` per-sample values. With ``categories`` set they
    must be integer codes in ``[0, categories)`` and a :class:`CountTable`
    is returned; otherwise they are reals and an :class:`Estimate` is returned.
    """
    if categories is not None:
        def count(k, m):
            codes = np.asarray(kernel(chunk_rng(cfg.master_seed, k), m))
            if codes.shape != (m,):
                raise ParameterError(f"kernel returned shape {codes.shape}, expected ({m},)")
            return np.bincount(codes, minlength=categories).astype(np.int64)

        counts = np.zeros(categories, dtype=np.int64)
        for part in _map_chunks(count, cfg):
            if part.shape[0] != categories:
                raise ParameterError("kernel produced a category code out of range")
            counts += part
        return CountTable(counts, cfg.samples, cfg.master_seed)

    def moments(k, m):
        values = np.asarray(kernel(chunk_rng(cfg.master_seed, k), m), dtype=float)
        if values.shape != (m,):
            raise ParameterError(f"kernel returned shape {values.shape}, expected ({m},)")
        total = math.fsum(values)
        mean = total / m
        return m, total, math.fsum((values - mean) ** 2)

    parts = _map_chunks(moments, cfg)
    count, total, m2 = 0, 0.0, 0.0
    sums = []
    for m, s, q in parts:
        if count:
            delta = s / m - total / count
            m2 = m2 + q + delta * delta * count * m / (count + m)
        else:
            m2 = q
        count += m
        sums.append(s)
        total = math.fsum(sums)
    mean = total / count
    var = m2 / (count - 1) if count > 1 else 0.0
    return Estimate(mean, math.sqrt(var / count), count, cfg.master_seed)
