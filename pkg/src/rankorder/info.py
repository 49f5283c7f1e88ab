"""Entropy, mutual information and channel performance measures."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ParameterError, ValidationError
from .transition import TransitionMatrix, TransitionRow

LN2 = math.log(2.0)
_NEG_CLAMP = 1e-12
_SUM_TOL = 1e-9


def log2(v):
    """Base-2 logarithm used everywhere in the package."""
    return np.log(v) / LN2


def _clean(dist) -> np.ndarray:
    p = np.asarray(dist, dtype=float)
    if np.isnan(p).any():
        raise ValidationError("distribution contains NaN")
    if np.any(p < -_NEG_CLAMP):
        raise ValidationError(f"distribution has a negative entry {p.min():.3g}")
    p = np.where(p < 0, 0.0, p)
    if abs(p.sum() - 1.0) > _SUM_TOL:
        raise ValidationError(f"distribution sums to {p.sum():.15g}, not 1")
    return p


def entropy(dist: Sequence[float]) -> float:
    """Shannon entropy in bits, with 0 log 0 = 0."""
    p = _clean(dist)
    nz = p[p > 0]
    return float(-np.sum(nz * log2(nz)))


def mutual_information(p_x: Sequence[float], m: TransitionMatrix | np.ndarray) -> float:
    """I(X;Y) = H(Y) - H(Y|X) in bits."""
    rows = m.rows if isinstance(m, TransitionMatrix) else np.asarray(m, dtype=float)
    p = _clean(p_x)
    if rows.ndim != 2 or rows.shape[0] != p.shape[0]:
        raise ValidationError(f"input distribution of length {p.shape[0]} does not match matrix {rows.shape}")
    p_y = p @ rows
    conditional = sum(px * entropy(row) for px, row in zip(p, rows) if px > 0)
    return entropy(p_y / p_y.sum()) - conditional


def capacity_symmetric(row: TransitionRow) -> float:
    """log2(n!) - H(row): the capacity of a symmetric channel."""
    # a uniform row can round H a few ulps above log2(n!)
    return max(0.0, math.log2(math.factorial(row.n)) - entropy(row.probs))


def efficiency(capacity: float, n: int) -> float:
    """Bits per neuron."""
    if capacity < 0:
        raise ParameterError("capacity must be >= 0")
    return capacity / n


def efficiency_asymptote(n: int) -> float:
    return math.log2(math.factorial(n)) / n


def rate(capacity: float, mean_duration: float) -> float:
    """Bits per second given bits/symbol and seconds/symbol."""
    if not mean_duration > 0:
        raise ParameterError(f"mean duration must be > 0, got {mean_duration!r}")
    return capacity / mean_duration


def rate_coding_bound(n: int) -> float:
    """Efficiency ceiling of population rate coding, log2(n+1)/n."""
    if n < 1:
        raise ParameterError("n must be >= 1")
    return math.log2(n + 1) / n


@dataclass(frozen=True)
class PerformanceReport:
    n: int
    x: float
    capacity_bits_per_symbol: float
    efficiency_bits_per_neuron: float
    mean_duration_sec: float
    rate_bits_per_sec: float
    rate_scaled: float
