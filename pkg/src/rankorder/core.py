"""Channel parameters, latency noise models and permutation utilities.

Neurons are indexed 0..n-1 in code (neuron ``i`` is intended to fire at
``i*alpha``). The 1-based index used by :func:`exp_latency_pdf` follows the
usual mathematical convention for the delay densities.
"""

from __future__ import annotations

import math
import string
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import DataError, ParameterError

LETTERS = string.ascii_uppercase


@dataclass(frozen=True)
class ChannelParams:
    """Exponential-delay channel: ``n`` neurons spaced ``alpha`` seconds apart,
    each delayed by an Exp(``lam``) random amount."""

    n: int
    alpha: float
    lam: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ParameterError(f"n must be an integer >= 2, got {self.n!r}")
        if not (math.isfinite(self.alpha) and self.alpha >= 0):
            raise ParameterError(f"alpha must be finite and >= 0, got {self.alpha!r}")
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise ParameterError(f"lam must be finite and > 0, got {self.lam!r}")

    @property
    def x(self) -> float:
        return self.lam * self.alpha

    @classmethod
    def from_x(cls, n: int, x: float, lam: float = 1.0) -> "ChannelParams":
        return cls(n, x / lam, lam)


@dataclass(frozen=True)
class GaussianNoiseParams:
    n: int
    alpha: float
    sigma: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ParameterError(f"n must be an integer >= 2, got {self.n!r}")
        if not (math.isfinite(self.alpha) and self.alpha >= 0):
            raise ParameterError(f"alpha must be finite and >= 0, got {self.alpha!r}")
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise ParameterError(f"sigma must be finite and > 0, got {self.sigma!r}")

    @property
    def ratio(self) -> float:
        """alpha/sigma, the dimensionless separation."""
        return self.alpha / self.sigma


@dataclass(frozen=True)
class Permutation:
    """An arrival order: ``order[k]`` is the neuron that fired k-th."""

    order: tuple[int, ...]

    def __post_init__(self):
        order = tuple(int(v) for v in self.order)
        if sorted(order) != list(range(len(order))):
            raise ParameterError(f"{self.order!r} is not a permutation of 0..{len(order) - 1}")
        object.__setattr__(self, "order", order)

    @property
    def n(self) -> int:
        return len(self.order)

    @property
    def rank(self) -> int:
        return perm_to_index(self.order)

    @property
    def label(self) -> str:
        return "".join(LETTERS[i] for i in self.order)

    @classmethod
    def from_label(cls, label: str) -> "Permutation":
        return cls(tuple(LETTERS.index(c) for c in label.upper()))

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for pos, neuron in enumerate(self.order):
            inv[neuron] = pos
        return Permutation(tuple(inv))

    def __len__(self):
        return self.n

    def __str__(self):
        return self.label


def exp_latency_pdf(i: int, z: float, p: ChannelParams) -> float:
    """Density of the delayed spike time of neuron ``i`` (1-based)."""
    if not 1 <= i <= p.n:
        raise ParameterError(f"neuron index {i} outside 1..{p.n}")
    shift = (i - 1) * p.alpha
    if z < shift:
        return 0.0
    return p.lam * math.exp(-p.lam * (z - shift))


def sample_latencies(p: ChannelParams, rng: np.random.Generator, size: int | None = None,
                     order: Sequence[int] | None = None) -> np.ndarray:
    """Draw spike times ``Z_i = offset_i + Exp(lam)``.

    ``order`` is the intended firing order (defaults to the identity); neuron
    ``order[k]`` gets offset ``k*alpha``. Returns shape ``(n,)`` or ``(size, n)``.
    """
    offsets = _offsets(p.n, p.alpha, order)
    shape = (p.n,) if size is None else (size, p.n)
    return offsets + rng.exponential(1.0 / p.lam, size=shape)


def sample_gaussian_latencies(g: GaussianNoiseParams, rng: np.random.Generator,
                              size: int | None = None,
                              order: Sequence[int] | None = None) -> np.ndarray:
    offsets = _offsets(g.n, g.alpha, order)
    shape = (g.n,) if size is None else (size, g.n)
    return offsets + g.sigma * rng.standard_normal(size=shape)


def _offsets(n: int, alpha: float, order: Sequence[int] | None) -> np.ndarray:
    slots = np.arange(n) * alpha
    if order is None:
        return slots
    perm = Permutation(tuple(order))
    if perm.n != n:
        raise ParameterError(f"input order has {perm.n} entries, expected {n}")
    offsets = np.empty(n)
    offsets[list(perm.order)] = slots
    return offsets


def arrival_order(z: Sequence[float]) -> Permutation:
    """Neurons listed by increasing spike time; ties go to the lower index."""
    z = np.asarray(z, dtype=float)
    if np.isnan(z).any():
        raise DataError("latency vector contains NaN")
    return Permutation(tuple(np.argsort(z, kind="stable")))


def arrival_ranks(z: np.ndarray) -> np.ndarray:
    """Lexicographic rank of the arrival order of each row of ``z``."""
    z = np.asarray(z, dtype=float)
    if np.isnan(z).any():
        raise DataError("latency array contains NaN")
    return orders_to_ranks(np.argsort(z, axis=-1, kind="stable"))


def orders_to_ranks(orders: np.ndarray) -> np.ndarray:
    """Vectorised Lehmer-code ranking of permutations stored row-wise."""
    orders = np.asarray(orders)
    n = orders.shape[-1]
    weights = _factorials(n)
    rank = np.zeros(orders.shape[:-1], dtype=np.int64)
    for i in range(n - 1):
        smaller_after = np.zeros(orders.shape[:-1], dtype=np.int64)
        for j in range(i + 1, n):
            smaller_after += orders[..., j] < orders[..., i]
        rank += smaller_after * weights[i]
    return rank


@lru_cache(maxsize=None)
def _factorials(n: int) -> tuple[int, ...]:
    # weight of position i in the Lehmer code
    return tuple(math.factorial(n - 1 - i) for i in range(n))


def perm_to_index(p: Permutation | Sequence[int]) -> int:
    order = p.order if isinstance(p, Permutation) else tuple(p)
    n = len(order)
    remaining = sorted(order)
    if remaining != list(range(n)):
        raise ParameterError(f"{order!r} is not a permutation")
    weights = _factorials(n)
    rank = 0
    for i, v in enumerate(order):
        pos = remaining.index(v)
        rank += pos * weights[i]
        remaining.pop(pos)
    return rank


def index_to_perm(k: int, n: int) -> Permutation:
    total = math.factorial(n)
    if not 0 <= k < total:
        raise ParameterError(f"rank {k} outside [0, {n}!)")
    remaining = list(range(n))
    order = []
    for w in _factorials(n):
        pos, k = divmod(k, w)
        order.append(remaining.pop(pos))
    return Permutation(tuple(order))


@lru_cache(maxsize=None)
def all_permutations(n: int) -> tuple[Permutation, ...]:
    return tuple(index_to_perm(k, n) for k in range(math.factorial(n)))


def labels(n: int) -> list[str]:
    return [p.label for p in all_permutations(n)]
