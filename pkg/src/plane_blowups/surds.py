"""Exact numbers of the form c / sqrt(r) with c rational and r a positive integer."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import total_ordering


def _squarefree_split(r: int) -> tuple[int, int]:
    """r = s^2 * k with k squarefree; returns (s, k)."""
    s, k = 1, r
    f = 2
    while f * f <= k:
        while k % (f * f) == 0:
            k //= f * f
            s *= f
        f += 1
    return s, k


@total_ordering
class Surd:
    __slots__ = ("coeff", "radicand")

    def __init__(self, p, q=1, r=1):
        """The number (p/q) / sqrt(r)."""
        if not isinstance(r, int) or r < 1:
            raise ValueError("radicand must be a positive integer")
        s, k = _squarefree_split(r)
        self.coeff = Fraction(p) / Fraction(q) / s
        self.radicand = k

    @property
    def is_rational(self) -> bool:
        return self.radicand == 1

    def exact(self):
        """Fraction when rational, else self."""
        return self.coeff if self.is_rational else self

    def _sq(self) -> Fraction:
        # signed square, monotone in the value
        v = self.coeff * self.coeff / self.radicand
        return v if self.coeff >= 0 else -v

    @staticmethod
    def _signed_sq(x) -> Fraction:
        if isinstance(x, Surd):
            return x._sq()
        x = Fraction(x)
        return x * x if x >= 0 else -x * x

    def __eq__(self, other):
        if isinstance(other, (Surd, int, Fraction)):
            return self._sq() == Surd._signed_sq(other)
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, (Surd, int, Fraction)):
            return self._sq() < Surd._signed_sq(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeff) if self.is_rational else hash((self.coeff, self.radicand))

    def __mul__(self, k):
        if isinstance(k, (int, Fraction)):
            out = Surd(1)
            out.coeff, out.radicand = self.coeff * k, self.radicand
            return out
        if isinstance(k, Surd):
            # (a/sqrt(r)) (b/sqrt(s)) = ab sqrt(rs) / (rs)
            n = self.radicand * k.radicand
            return Surd(self.coeff * k.coeff * n, n, n).exact_or_surd()
        return NotImplemented

    __rmul__ = __mul__

    def __rtruediv__(self, x):
        # x / (c / sqrt(r)) = (x r / c) / sqrt(r)
        if isinstance(x, (int, Fraction)):
            out = Surd(1)
            out.coeff, out.radicand = Fraction(x) * self.radicand / self.coeff, self.radicand
            return out.exact_or_surd()
        return NotImplemented

    def exact_or_surd(self):
        return self.exact()

    def __float__(self):
        return float(self.coeff) / math.sqrt(self.radicand)

    def __repr__(self):
        return f"Surd({self.coeff}/sqrt({self.radicand}))"

    def __str__(self):
        if self.is_rational:
            return str(self.coeff)
        c = self.coeff / self.radicand
        if c.denominator == 1 or self.coeff.numerator % self.radicand == 0:
            return f"sqrt({self.radicand})" if c == 1 else f"{c}*sqrt({self.radicand})"
        return f"{self.coeff}/sqrt({self.radicand})"


def inverse_sqrt(r: int):
    """1/sqrt(r) exactly: a Fraction for perfect squares, a Surd otherwise."""
    return Surd(1, 1, r).exact()


def encode(x) -> str:
    return str(x)
