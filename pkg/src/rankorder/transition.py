"""Transition probabilities of the rank-order channel.

Three independent routes produce the identity-input row:

* ``analytic_row``   closed forms for n = 2, 3, 4
* ``mc_row``         event counting over simulated latencies (any n)
* ``quadrature_row`` nested integrals of the delay densities (n <= 5)

Rows are indexed by lexicographic permutation rank (ABC=0, ACB=1, BAC=2, ...).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction as F
from typing import Sequence

import numpy as np

from .core import (ChannelParams, GaussianNoiseParams, Permutation, all_permutations,
                   arrival_ranks, labels, perm_to_index, sample_gaussian_latencies,
                   sample_latencies)
from .errors import CapabilityError, ParameterError, ValidationError
from .expsum import ExpSum
from .mc import McConfig, run_chunked
from .quadrature import exponential_breakpoints, ordered_probability

METHODS = ("analytic", "monte_carlo", "quadrature")

_S = ExpSum.of

# Identity-input rows keyed by received order; value is sum_k c_k exp(-k x).
CLOSED_FORMS: dict[int, dict[str, ExpSum]] = {
    2: {
        "AB": _S((0, 1), (1, F(-1, 2))),
        "BA": _S((1, F(1, 2))),
    },
    3: {
        "ABC": _S((0, 1), (1, -1), (3, F(1, 6))),
        "BAC": _S((1, F(1, 2)), (2, F(-1, 2)), (3, F(1, 6))),
        "ACB": _S((1, F(1, 2)), (3, F(-1, 3))),
        "CAB": _S((3, F(1, 6))),
        "BCA": _S((2, F(1, 2)), (3, F(-1, 3))),
        "CBA": _S((3, F(1, 6))),
    },
    4: {
        "ABCD": _S((0, 1), (1, F(-3, 2)), (2, F(1, 4)), (3, F(1, 3)), (6, F(-1, 24))),
        "BACD": _S((1, F(1, 2)), (2, F(-3, 4)), (3, F(1, 6)), (4, F(1, 6)), (6, F(-1, 24))),
        "ACBD": _S((1, F(1, 2)), (2, F(-1, 2)), (3, F(-1, 6)), (4, F(1, 4)), (6, F(-1, 24))),
        "CABD": _S((3, F(1, 6)), (4, F(-1, 4)), (5, F(1, 6)), (6, F(-1, 24))),
        "BCAD": _S((2, F(1, 2)), (3, F(-5, 6)), (4, F(5, 12)), (6, F(-1, 24))),
        "CBAD": _S((3, F(1, 6)), (4, F(-1, 4)), (5, F(1, 6)), (6, F(-1, 24))),
        "ABDC": _S((1, F(1, 2)), (2, F(-1, 4)), (3, F(-1, 3)), (6, F(1, 8))),
        "BADC": _S((2, F(1, 4)), (4, F(-1, 3)), (6, F(1, 8))),
        "ADBC": _S((3, F(1, 6)), (6, F(-1, 8))),
        "DABC": _S((6, F(1, 24))),
        "BDAC": _S((4, F(1, 6)), (6, F(-1, 8))),
        "DBAC": _S((6, F(1, 24))),
        "ACDB": _S((2, F(1, 2)), (3, F(-1, 3)), (4, F(-1, 4)), (6, F(1, 8))),
        "CADB": _S((4, F(1, 4)), (5, F(-1, 3)), (6, F(1, 8))),
        "ADCB": _S((3, F(1, 6)), (6, F(-1, 8))),
        "DACB": _S((6, F(1, 24))),
        # the printed differentials for this entry repeat dz1; the limits
        # define the region Z3 < Z4 < Z1 < Z2
        "CDAB": _S((5, F(1, 6)), (6, F(-1, 8))),
        "DCAB": _S((6, F(1, 24))),
        "BCDA": _S((3, F(1, 2)), (4, F(-7, 12)), (6, F(1, 8))),
        "CBDA": _S((4, F(1, 4)), (5, F(-1, 3)), (6, F(1, 8))),
        "BDCA": _S((4, F(1, 6)), (6, F(-1, 8))),
        "DBCA": _S((6, F(1, 24))),
        "CDBA": _S((5, F(1, 6)), (6, F(-1, 8))),
        "DCBA": _S((6, F(1, 24))),
    },
}


def closed_form(n: int, label: str) -> ExpSum:
    if n not in CLOSED_FORMS:
        raise CapabilityError(f"closed forms exist only for n in (2, 3, 4); use mc_row or quadrature_row for n={n}")
    return CLOSED_FORMS[n][label]


@dataclass(frozen=True)
class TransitionRow:
    n: int
    x: float
    probs: np.ndarray
    method: str
    stderr: np.ndarray | None = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ParameterError(f"unknown method {self.method!r}")
        if len(self.probs) != math.factorial(self.n):
            raise ValidationError(f"row has {len(self.probs)} entries, expected {self.n}!")

    @property
    def labels(self) -> list[str]:
        return labels(self.n)

    def __getitem__(self, key: str | int | Permutation) -> float:
        if isinstance(key, str):
            key = Permutation.from_label(key)
        if isinstance(key, Permutation):
            key = key.rank
        return float(self.probs[key])

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.labels, map(float, self.probs)))

    def validate(self, tol: float | None = None) -> "TransitionRow":
        if tol is None:
            tol = 1e-9 if self.method == "monte_carlo" else 1e-12
        p = self.probs
        if np.any(p < -tol) or np.any(p > 1 + tol):
            raise ValidationError("row entries must lie in [0, 1]")
        if abs(p.sum() - 1.0) > tol:
            raise ValidationError(f"row sums to {p.sum():.15g}, not 1")
        return self


@dataclass(frozen=True)
class TransitionMatrix:
    n: int
    x: float
    rows: np.ndarray
    method: str

    def row(self, source: Permutation | str | int) -> np.ndarray:
        if isinstance(source, str):
            source = Permutation.from_label(source)
        if isinstance(source, Permutation):
            source = source.rank
        return self.rows[source]

    def entry(self, received, sent) -> float:
        if isinstance(received, str):
            received = Permutation.from_label(received)
        if isinstance(received, Permutation):
            received = received.rank
        return float(self.row(sent)[received])


@dataclass(frozen=True)
class AcbDecomposition:
    """Split of p(ACB|ABC) at the 2*alpha boundary."""

    x: float
    concave_part: float
    convex_part: float
    factor_i: float
    factor_ii: float

    @property
    def total(self) -> float:
        return self.concave_part + self.convex_part


def analytic_row(n: int, x: float) -> TransitionRow:
    if n not in CLOSED_FORMS:
        raise CapabilityError(f"closed forms exist only for n in (2, 3, 4); use mc_row or quadrature_row for n={n}")
    if not (math.isfinite(x) and x >= 0):
        raise ParameterError(f"x must be finite and >= 0, got {x!r}")
    forms = CLOSED_FORMS[n]
    probs = np.array([forms[label](x) for label in labels(n)])
    return TransitionRow(n, float(x), probs, "analytic")


def _exponential_kernel(p: ChannelParams, order: Sequence[int] | None):
    def kernel(rng, m):
        return arrival_ranks(sample_latencies(p, rng, size=m, order=order))
    return kernel


def _row_from_counts(n: int, x: float, table) -> TransitionRow:
    return TransitionRow(n, x, table.frequencies, "monte_carlo", table.std_errors)


def mc_row(p: ChannelParams, cfg: McConfig, input_order: Permutation | Sequence[int] | None = None) -> TransitionRow:
    """Empirical distribution of received orders.

    With ``input_order`` the spikes are scheduled in that order instead of the
    identity; the result is then the row of the full matrix for that input.
    """
    order = _as_order(input_order)
    table = run_chunked(_exponential_kernel(p, order), cfg, categories=math.factorial(p.n))
    return _row_from_counts(p.n, p.x, table)


def mc_row_gaussian(g: GaussianNoiseParams, cfg: McConfig,
                    input_order: Permutation | Sequence[int] | None = None) -> TransitionRow:
    """As :func:`mc_row` with Gaussian jitter; ``x`` holds alpha/sigma."""
    order = _as_order(input_order)

    def kernel(rng, m):
        return arrival_ranks(sample_gaussian_latencies(g, rng, size=m, order=order))

    table = run_chunked(kernel, cfg, categories=math.factorial(g.n))
    return _row_from_counts(g.n, g.ratio, table)


def _as_order(order):
    if order is None:
        return None
    return order.order if isinstance(order, Permutation) else tuple(order)


def quadrature_row(n: int, x: float, tol: float = 1e-9) -> TransitionRow:
    """Each entry as a nested integral over its ordered region (lam = 1, alpha = x).

    No renormalisation is applied.
    """
    if n > 5:
        raise CapabilityError(f"quadrature_row supports n <= 5 (cost grows as n!), got n={n}")
    if n < 2:
        raise ParameterError("n must be >= 2")
    if not 1e-12 <= tol <= 1e-3:
        raise ParameterError(f"tol must lie in [1e-12, 1e-3], got {tol!r}")
    if not (math.isfinite(x) and x >= 0):
        raise ParameterError(f"x must be finite and >= 0, got {x!r}")
    alpha = float(x)
    breaks = exponential_breakpoints(n, alpha, 1.0)
    densities = [_exp_density(i * alpha) for i in range(n)]
    # per-panel tolerance well below the entry tolerance
    panel_tol = tol * 1e-3
    probs = np.array([
        ordered_probability([densities[i] for i in perm.order], breaks, panel_tol)
        for perm in all_permutations(n)
    ])
    return TransitionRow(n, float(x), probs, "quadrature")


def _exp_density(shift: float):
    def f(t):
        t = np.asarray(t, dtype=float)
        return np.where(t >= shift, np.exp(-(t - shift)), 0.0)
    return f


def relabel(received: Permutation, sent: Permutation) -> Permutation:
    """Express ``received`` in the coordinates of ``sent`` (sent -> identity)."""
    pos = sent.inverse().order
    return Permutation(tuple(pos[v] for v in received.order))


def build_matrix(row: TransitionRow) -> TransitionMatrix:
    perms = all_permutations(row.n)
    size = len(perms)
    rows = np.empty((size, size))
    for s, sent in enumerate(perms):
        pos = sent.inverse().order
        for r, received in enumerate(perms):
            rows[s, r] = row.probs[perm_to_index([pos[v] for v in received.order])]
    return TransitionMatrix(row.n, row.x, rows, row.method)


def decompose_acb(x: float) -> AcbDecomposition:
    if not math.isfinite(x):
        raise ParameterError(f"x must be finite, got {x!r}")
    factor_i = 0.5 * math.exp(-x)
    factor_ii = -math.expm1(-2.0 * x)
    return AcbDecomposition(float(x), factor_i * factor_ii, math.exp(-3.0 * x) / 6.0, factor_i, factor_ii)
