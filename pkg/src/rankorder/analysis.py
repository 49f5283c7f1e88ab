"""Parameter sweeps, atypical-error detection and the rate/efficiency trade-off."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

from .core import ChannelParams, GaussianNoiseParams, Permutation, labels
from .duration import mc_duration, scaled_duration
from .errors import CapabilityError, ParameterError
from .info import PerformanceReport, capacity_symmetric, log2
from .mc import McConfig
from .transition import CLOSED_FORMS, TransitionRow, analytic_row, mc_row, mc_row_gaussian

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(f: Callable[[float], float], a: float, b: float, tol: float = 1e-10,
                       max_iter: int = 500) -> tuple[float, float]:
    """Maximise a unimodal ``f`` on [a, b]; returns the final bracket."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return a, b


def _refine_peak(f, df, lo: float, hi: float) -> float:
    """Golden-section bracket, then the derivative root inside it.

    Function values alone cannot place a smooth maximum closer than about
    sqrt(machine eps); the derivative sign is resolvable to full precision.
    """
    a, b = golden_section_max(f, lo, hi, tol=1e-7)
    a, b = max(lo, a - 1e-7), min(hi, b + 1e-7)
    da, db = df(a), df(b)
    if da > 0 > db:
        return brentq(df, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    x, _ = golden_section_max(f, a, b, tol=1e-12)
    return x


@dataclass(frozen=True)
class AtypicalFinding:
    n: int
    symbol_index: int
    label: str
    peak_x: float
    peak_value: float
    rising_range: tuple[float, float]


@dataclass(frozen=True)
class SweepRecord:
    x: float
    capacity: float
    efficiency: float
    scaled_duration: float
    scaled_rate: float


def _check_grid(x_grid: Sequence[float], min_points: int = 2) -> np.ndarray:
    grid = np.asarray(x_grid, dtype=float)
    if grid.ndim != 1 or grid.size < min_points:
        raise ParameterError(f"grid needs at least {min_points} points")
    if not np.all(np.isfinite(grid)) or grid[0] < 0:
        raise ParameterError("grid values must be finite and >= 0")
    if np.any(np.diff(grid) <= 0):
        raise ParameterError("grid must be strictly increasing")
    return grid


def scan_atypical(n: int, x_grid: Sequence[float]) -> list[AtypicalFinding]:
    """Error probabilities that increase with x somewhere on the grid."""
    if n not in CLOSED_FORMS:
        raise CapabilityError(f"atypical scan needs closed forms (n in 2, 3, 4), got n={n}")
    grid = _check_grid(x_grid, 3)
    identity = Permutation.identity(n).label
    findings = []
    for index, label in enumerate(labels(n)):
        if label == identity:
            continue
        form = CLOSED_FORMS[n][label]
        v = form(grid)
        d = np.diff(v)
        thr = 64 * np.finfo(float).eps * np.maximum(np.abs(v[:-1]), np.abs(v[1:]))
        up = d > thr
        down = d < -thr
        if not (up.any() and down.any()):
            continue
        start = int(np.argmax(up))
        falls = np.nonzero(down[start:])[0]
        if falls.size == 0:
            continue
        top = start + int(falls[0])  # grid index of the local maximum
        lo = grid[max(top - 1, 0)]
        hi = grid[min(top + 1, grid.size - 1)]
        peak = _refine_peak(form, form.derivative(), lo, hi)
        findings.append(AtypicalFinding(n, index, label, float(peak), float(form(peak)),
                                        (float(grid[start]), float(peak))))
    return findings


def _analytic_record(n: int, x: float) -> SweepRecord:
    c = capacity_symmetric(analytic_row(n, x))
    t = float(scaled_duration(n)(x))
    return SweepRecord(float(x), c, c / n, t, c / t)


def sweep(n: int, x_grid: Sequence[float], method: str = "analytic",
          cfg: McConfig | None = None) -> list[SweepRecord]:
    grid = _check_grid(x_grid, 1)
    if method == "analytic":
        if n not in CLOSED_FORMS:
            raise CapabilityError(f"analytic sweep needs n in (2, 3, 4), got n={n}; use method='mc'")
        return [_analytic_record(n, x) for x in grid]
    if method in ("mc", "monte_carlo"):
        cfg = cfg or McConfig()
        records = []
        for x in grid:
            p = ChannelParams.from_x(n, float(x))
            c = capacity_symmetric(mc_row(p, cfg))
            t = mc_duration(p, cfg).mean
            records.append(SweepRecord(float(x), c, c / n, t, c / t))
        return records
    raise ParameterError(f"unknown sweep method {method!r}")


def tradeoff_curve(n: int, x_grid: Sequence[float]) -> list[tuple[float, float]]:
    """(efficiency, R/lam) pairs ordered by x."""
    return [(r.efficiency, r.scaled_rate) for r in sweep(n, x_grid)]


def scaled_rate(n: int, x: float) -> float:
    return _analytic_record(n, x).scaled_rate


def _scaled_rate_derivative(n: int) -> Callable[[float], float]:
    forms = [CLOSED_FORMS[n][lab] for lab in labels(n)]
    dforms = [f.derivative() for f in forms]
    t_form = scaled_duration(n)
    dt_form = t_form.derivative()
    log2_size = math.log2(math.factorial(n))

    def deriv(x: float) -> float:
        p = np.array([f(x) for f in forms])
        dp = np.array([f(x) for f in dforms])
        nz = p > 0
        cap = log2_size + float(np.sum(p[nz] * log2(p[nz])))
        dcap = float(np.sum(dp[nz] * log2(p[nz])))
        t, dt = t_form(x), dt_form(x)
        return (dcap * t - cap * dt) / (t * t)

    return deriv


def optimal_point(n: int, x_max: float = 20.0, grid_points: int = 2000) -> tuple[float, float]:
    """x maximising R/lam, and the maximum."""
    if n not in CLOSED_FORMS:
        raise CapabilityError(f"optimal point needs closed forms (n in 2, 3, 4), got n={n}")
    grid = np.linspace(0.0, x_max, grid_points)
    values = np.array([scaled_rate(n, x) for x in grid])
    i = int(np.argmax(values))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    x_star = _refine_peak(lambda x: scaled_rate(n, x), _scaled_rate_derivative(n), lo, hi)
    return float(x_star), scaled_rate(n, x_star)


def performance(p: ChannelParams) -> PerformanceReport:
    rec = _analytic_record(p.n, p.x)
    t = rec.scaled_duration / p.lam
    return PerformanceReport(p.n, p.x, rec.capacity, rec.efficiency, t, rec.capacity / t, rec.scaled_rate)


def gaussian_sweep(n: int, sigma: float, alphas: Sequence[float], cfg: McConfig) -> list[TransitionRow]:
    return [mc_row_gaussian(GaussianNoiseParams(n, float(a), sigma), cfg) for a in alphas]


def detect_rise_fall(values: Sequence[float], std_errors: Sequence[float], k: float = 4.0) -> bool:
    """True when some point exceeds an earlier and a later point, each by more
    than ``k`` combined standard errors."""
    v = np.asarray(values, dtype=float)
    s = np.asarray(std_errors, dtype=float)
    for j in range(1, v.size - 1):
        left = v[j] - v[:j] > k * np.hypot(s[j], s[:j])
        right = v[j] - v[j + 1:] > k * np.hypot(s[j], s[j + 1:])
        if left.any() and right.any():
            return True
    return False

