"""First/last spike order statistics and the mean symbol duration.

Closed forms cover n = 2, 3, 4; :func:`mc_duration` works for any n.
Means are stored in scaled form (``lam * E[...]`` as a function of
``x = lam*alpha``) and divided by ``lam`` on evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction as F

import numpy as np

from .core import ChannelParams, sample_latencies
from .errors import CapabilityError, ParameterError
from .expsum import ExpSum
from .mc import Estimate, McConfig, run_chunked

_S = ExpSum.of

SUPPORTED = (2, 3, 4)

_SCALED_MEAN_MIN = {
    2: _S((0, 1), (1, F(-1, 2))),
    3: _S((0, 1), (1, F(-1, 2)), (3, F(-1, 6))),
    4: _S((0, 1), (1, F(-1, 2)), (3, F(-1, 6)), (6, F(-1, 12))),
}

_SCALED_MEAN_MAX = {
    2: _S((0, 1), (1, F(1, 2)), slope=1),
    3: _S((0, 1), (1, F(1, 2)), (2, F(1, 2)), (3, F(-1, 6)), slope=2),
    4: _S((0, 1), (1, F(1, 2)), (2, F(1, 2)), (3, F(1, 3)), (4, F(-1, 6)), (5, F(-1, 6)),
          (6, F(1, 12)), slope=3),
}

# lam*T_bar written out directly from the boxed duration results; tests check
# it equals the difference of the two mean tables above.
SCALED_DURATION = {
    2: _S((1, 1), slope=1),
    3: _S((1, 1), (2, F(1, 2)), slope=2),
    4: _S((1, 1), (2, F(1, 2)), (3, F(1, 2)), (4, F(-1, 6)), (5, F(-1, 6)), (6, F(1, 6)), slope=3),
}


def _check_n(n: int):
    if n not in SUPPORTED:
        raise CapabilityError(f"order-statistic closed forms exist only for n in {SUPPORTED}; use mc_duration for n={n}")


def _min_piece(k: int, lam: float, alpha: float):
    # k spikes can be the minimum on [(k-1)alpha, k*alpha)
    def f(z):
        return k * lam * np.exp(-k * lam * (z - (k - 1) * alpha / 2.0))
    return f


def _max_expr(n: int, lam: float, a: float):
    E = np.exp
    l = lam
    if n == 2:
        return lambda z: l * E(-l * z) + l * E(-l * (z - a)) - 2 * l * E(-2 * l * (z - a / 2))
    if n == 3:
        return lambda z: (l * E(-l * (z - a)) + l * E(-l * z) - 2 * l * E(-l * (2 * z - a))
                          + l * E(-l * (z - 2 * a)) - 2 * l * E(-l * (2 * z - 3 * a))
                          - 2 * l * E(-2 * l * (z - a)) + 3 * l * E(-3 * l * (z - a)))
    return lambda z: (l * E(-l * (z - a)) + l * E(-l * z) - 2 * l * E(-l * (2 * z - a))
                      + l * E(-l * (z - 2 * a)) - 4 * l * E(-l * (2 * z - 3 * a))
                      - 2 * l * E(-2 * l * (z - a)) + 3 * l * E(-3 * l * (z - a))
                      - 2 * l * E(-2 * l * (z - 2 * a)) + 3 * l * E(-l * (3 * z - 4 * a))
                      - 2 * l * E(-l * (2 * z - 5 * a)) + 3 * l * E(-3 * l * (z - 2 * a))
                      + 3 * l * E(-l * (3 * z - 5 * a)) - 4 * l * E(-2 * l * (2 * z - 3 * a))
                      + l * E(-l * (z - 3 * a)))


@dataclass(frozen=True)
class OrderStatPdf:
    """Piecewise density of the first (``minimum``) or last (``maximum``) spike.

    Each piece owns its left endpoint: ``[lo, hi)``.
    """

    n: int
    which: str
    params: ChannelParams
    pieces: tuple

    @property
    def support_start(self) -> float:
        return 0.0 if self.which == "minimum" else (self.n - 1) * self.params.alpha

    def breakpoints(self) -> list[float]:
        return sorted({lo for (lo, _hi), _ in self.pieces if math.isfinite(lo)})

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        out = np.zeros_like(z)
        for (lo, hi), expr in self.pieces:
            mask = (z >= lo) & (z < hi)
            if mask.any():
                out[mask] = expr(z[mask])
        return out if out.ndim else float(out)


def order_stat_density(which: str, n: int, p: ChannelParams) -> OrderStatPdf:
    _check_n(n)
    if p.n != n:
        raise ParameterError(f"params are for n={p.n}, requested n={n}")
    lam, a = p.lam, p.alpha
    if which in ("min", "minimum"):
        pieces = [((k - 1) * a, k * a if k < n else math.inf) for k in range(1, n + 1)]
        pieces = tuple((iv, _min_piece(k, lam, a)) for k, iv in enumerate(pieces, start=1) if iv[1] > iv[0])
        return OrderStatPdf(n, "minimum", p, pieces)
    if which in ("max", "maximum"):
        return OrderStatPdf(n, "maximum", p, ((((n - 1) * a, math.inf), _max_expr(n, lam, a)),))
    raise ParameterError(f"which must be 'minimum' or 'maximum', got {which!r}")


def order_stat_pdf(which: str, n: int, z, p: ChannelParams):
    return order_stat_density(which, n, p)(z)


def order_stat_mean(which: str, n: int, p: ChannelParams) -> float:
    _check_n(n)
    if which in ("min", "minimum"):
        table = _SCALED_MEAN_MIN
    elif which in ("max", "maximum"):
        table = _SCALED_MEAN_MAX
    else:
        raise ParameterError(f"which must be 'minimum' or 'maximum', got {which!r}")
    return table[n](p.x) / p.lam


def scaled_duration(n: int) -> ExpSum:
    """``lam * T_bar`` as a function of x."""
    _check_n(n)
    return SCALED_DURATION[n]


def mean_duration_analytic(n: int, p: ChannelParams) -> float:
    """Mean time from first to last spike, E[Z_(n)] - E[Z_(1)]."""
    _check_n(n)
    return SCALED_DURATION[n](p.x) / p.lam


def mc_duration(p: ChannelParams, cfg: McConfig) -> Estimate:
    def kernel(rng, m):
        z = sample_latencies(p, rng, size=m)
        return z.max(axis=1) - z.min(axis=1)

    return run_chunked(kernel, cfg)
