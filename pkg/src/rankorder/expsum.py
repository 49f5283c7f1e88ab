"""Finite sums of decaying exponentials in the noise-spacing product x.

Every closed form in this package (transition probabilities, scaled
order-statistic means, scaled symbol durations) has the shape

    a*x + sum_k c_k * exp(-k*x)

with small integer k and rational c_k. Keeping them in this form gives exact
coefficients, cheap derivatives and vectorised evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np


@dataclass(frozen=True)
class ExpSum:
    terms: Mapping[int, Fraction]
    slope: Fraction = field(default=Fraction(0))

    @classmethod
    def of(cls, *pairs: tuple[int, Fraction | int], slope: Fraction | int = 0) -> "ExpSum":
        terms: dict[int, Fraction] = {}
        for k, c in pairs:
            terms[k] = terms.get(k, Fraction(0)) + Fraction(c)
        return cls({k: c for k, c in sorted(terms.items()) if c != 0}, Fraction(slope))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = float(self.slope) * x
        for k, c in self.terms.items():
            if k == 0:
                out = out + float(c)
            else:
                out = out + float(c) * np.exp(-k * x)
        return out if out.ndim else float(out)

    def derivative(self) -> "ExpSum":
        pairs = [(0, self.slope)] if self.slope else []
        pairs += [(k, -k * c) for k, c in self.terms.items() if k != 0]
        return ExpSum.of(*pairs)

    def __add__(self, other: "ExpSum") -> "ExpSum":
        return ExpSum.of(*self.terms.items(), *other.terms.items(), slope=self.slope + other.slope)

    def __neg__(self) -> "ExpSum":
        return ExpSum.of(*((k, -c) for k, c in self.terms.items()), slope=-self.slope)

    def __sub__(self, other: "ExpSum") -> "ExpSum":
        return self + (-other)

    def limit(self) -> float:
        """Value as x -> infinity (only meaningful when slope is zero)."""
        if self.slope:
            return float("inf") if self.slope > 0 else float("-inf")
        return float(self.terms.get(0, Fraction(0)))
