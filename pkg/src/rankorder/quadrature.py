"""Iterated adaptive quadrature for ordered-region probabilities.

``P(Z_a < Z_b < ... < Z_z)`` for independent spike times is computed by the
recursion

    G_1(t) = integral_{-inf}^t f_a,   G_k(t) = integral_{-inf}^t f_k(s) G_{k-1}(s) ds

and the probability is ``G_n(upper)``. Each ``G_k`` is stored as a piecewise
Chebyshev series on panels whose edges include every density breakpoint, so
the integrand is smooth inside each panel. Panels are bisected until the
trailing Chebyshev coefficients fall below the tolerance.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import Chebyshev

from .errors import ParameterError

Density = Callable[[np.ndarray], np.ndarray]

_DEGREE = 24
_MAX_DEPTH = 30


class PiecewiseCheb:
    """Continuous function on [edges[0], edges[-1]], constant beyond the right
    edge and zero before the left edge."""

    def __init__(self, edges: Sequence[float], pieces: Sequence[Chebyshev]):
        self.edges = np.asarray(edges, dtype=float)
        self.pieces = list(pieces)
        self.end_value = float(self.pieces[-1](self.edges[-1])) if self.pieces else 0.0

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        if not self.pieces:
            return out
        idx = np.searchsorted(self.edges, t, side="right") - 1
        out[t >= self.edges[-1]] = self.end_value
        inside = (idx >= 0) & (t < self.edges[-1])
        for j in np.unique(idx[inside]):
            mask = inside & (idx == j)
            out[mask] = self.pieces[j](t[mask])
        return out


def cumulative_integral(integrand: Density, breakpoints: Sequence[float], tol: float) -> PiecewiseCheb:
    """Antiderivative of ``integrand`` starting from zero at ``breakpoints[0]``.

    ``integrand`` must be smooth on every interval between consecutive
    breakpoints and vanish to the left of the first one.
    """
    edges: list[float] = [breakpoints[0]]
    pieces: list[Chebyshev] = []
    running = 0.0
    for a, b in zip(breakpoints[:-1], breakpoints[1:]):
        if b <= a:
            continue
        for lo, hi, series in _adaptive_fit(integrand, a, b, tol):
            anti = series.integ(lbnd=lo) + running
            running = float(anti(hi))
            pieces.append(anti)
            edges.append(hi)
    return PiecewiseCheb(edges, pieces)


def _adaptive_fit(fn: Density, a: float, b: float, tol: float, depth: int = 0):
    series = Chebyshev.interpolate(fn, _DEGREE, domain=[a, b])
    tail = np.max(np.abs(series.coef[-4:]))
    # coefficient error bounds the sup-norm error; scale to integral error
    if tail * (b - a) <= tol or depth >= _MAX_DEPTH:
        yield a, b, series
        return
    mid = 0.5 * (a + b)
    yield from _adaptive_fit(fn, a, mid, tol, depth + 1)
    yield from _adaptive_fit(fn, mid, b, tol, depth + 1)


def ordered_probability(densities: Sequence[Density], breakpoints: Sequence[float], tol: float) -> float:
    """Probability that independent variables with the given densities arrive
    in list order (first density smallest)."""
    g: Callable[[np.ndarray], np.ndarray] = lambda t: np.ones_like(t)
    for f in densities:
        prev = g
        g = cumulative_integral(lambda t, f=f, prev=prev: f(t) * prev(t), breakpoints, tol)
    return float(g.end_value)


def exponential_breakpoints(n: int, alpha: float, lam: float, panel: float | None = None) -> list[float]:
    """Panel edges for the exponential-delay model, truncated at
    ``(n-1)*alpha + 40/lam``."""
    if lam <= 0:
        raise ParameterError("lam must be > 0")
    panel = 1.0 / lam if panel is None else panel
    upper = (n - 1) * alpha + 40.0 / lam
    edges = {i * alpha for i in range(n)}
    edges.add(upper)
    # cap panel width so one series never spans many decay lengths
    pts = sorted(edges)
    out = [pts[0]]
    for a, b in zip(pts[:-1], pts[1:]):
        if b <= a:
            continue
        m = max(1, int(np.ceil((b - a) / panel)))
        out.extend(np.linspace(a, b, m + 1)[1:].tolist())
    return out
