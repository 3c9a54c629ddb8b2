"""Divisor class lattice of the plane blown up at r points.

Classes are stored as ``(d, m_1, ..., m_r)`` meaning ``d*L - sum(m_i * E_i)``.
With this convention fat-point multiplicities are non-negative and the
intersection form reads ``a.d*b.d - sum(a.m_i*b.m_i)``.

Coordinates are exact: Python ints when integral, ``Fraction`` otherwise.
Floats are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence


class LatticeError(ValueError):
    """Raised for dimension mismatches and precondition violations."""


def _exact(x) -> int | Fraction:
    if isinstance(x, bool):
        raise LatticeError("booleans are not lattice coordinates")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, Rational):
        return _exact(Fraction(x.numerator, x.denominator))
    if isinstance(x, str):
        return _exact(Fraction(x.strip()))
    raise LatticeError(f"coordinate {x!r} is not an exact rational")


@dataclass(frozen=True)
class LatticeContext:
    r: int

    def __post_init__(self):
        if not isinstance(self.r, int) or self.r < 0:
            raise LatticeError(f"r must be a non-negative integer, got {self.r!r}")

    @property
    def rank(self) -> int:
        return self.r + 1

    @property
    def labels(self) -> tuple[str, ...]:
        return ("L",) + tuple(f"E_{i}" for i in range(1, self.r + 1))

    def gram(self) -> list[list[int]]:
        n = self.r + 1
        return [[(1 if i == 0 else -1) if i == j else 0 for j in range(n)] for i in range(n)]

    def signature(self) -> tuple[int, int]:
        # the basis is already orthogonal, so read it off the diagonal
        diag = [row[i] for i, row in enumerate(self.gram())]
        return sum(1 for x in diag if x > 0), sum(1 for x in diag if x < 0)

    def canonical(self) -> "DivisorClass":
        return DivisorClass(-3, (-1,) * self.r)

    def line(self) -> "DivisorClass":
        return DivisorClass(1, (0,) * self.r)

    def exceptional(self, i: int) -> "DivisorClass":
        """E_i with 1-based index."""
        if not 1 <= i <= self.r:
            raise LatticeError(f"E_{i} does not exist for r={self.r}")
        m = [0] * self.r
        m[i - 1] = -1
        return DivisorClass(0, tuple(m))

    def zero(self) -> "DivisorClass":
        return DivisorClass(0, (0,) * self.r)

    def uniform(self, d, m) -> "DivisorClass":
        return DivisorClass(d, (m,) * self.r)

    def check(self, c: "DivisorClass") -> "DivisorClass":
        if c.r != self.r:
            raise LatticeError(f"class has {c.r} exceptional coordinates, context has r={self.r}")
        return c


@dataclass(frozen=True, init=False)
class DivisorClass:
    d: int | Fraction
    m: tuple

    def __init__(self, d, m: Iterable = ()):
        object.__setattr__(self, "d", _exact(d))
        object.__setattr__(self, "m", tuple(_exact(x) for x in m))

    @classmethod
    def from_vector(cls, v: Sequence) -> "DivisorClass":
        v = list(v)
        if not v:
            raise LatticeError("empty coordinate vector")
        return cls(v[0], v[1:])

    @property
    def r(self) -> int:
        return len(self.m)

    @property
    def vector(self) -> tuple:
        return (self.d,) + self.m

    @property
    def integral(self) -> bool:
        return all(isinstance(x, int) for x in self.vector)

    def require_integral(self, what: str = "operation") -> "DivisorClass":
        if not self.integral:
            raise LatticeError(f"{what} requires an integral class, got {self}")
        return self

    def _same(self, other: "DivisorClass"):
        if not isinstance(other, DivisorClass):
            return NotImplemented
        if other.r != self.r:
            raise LatticeError(f"dimension mismatch: r={self.r} vs r={other.r}")
        return other

    def __add__(self, other):
        if self._same(other) is NotImplemented:
            return NotImplemented
        return DivisorClass(self.d + other.d, (a + b for a, b in zip(self.m, other.m)))

    def __sub__(self, other):
        if self._same(other) is NotImplemented:
            return NotImplemented
        return DivisorClass(self.d - other.d, (a - b for a, b in zip(self.m, other.m)))

    def __neg__(self):
        return DivisorClass(-self.d, (-a for a in self.m))

    def __mul__(self, k):
        k = _exact(k)
        return DivisorClass(self.d * k, (a * k for a in self.m))

    __rmul__ = __mul__

    def dot(self, other: "DivisorClass") -> int | Fraction:
        self._same(other)
        return _exact(self.d * other.d - sum(a * b for a, b in zip(self.m, other.m)))

    def square(self) -> int | Fraction:
        return self.dot(self)

    @property
    def mult_sum(self) -> int | Fraction:
        return _exact(sum(self.m, 0))

    def permuted(self, perm: Sequence[int]) -> "DivisorClass":
        return DivisorClass(self.d, (self.m[i] for i in perm))

    def to_json(self) -> list[str]:
        return [str(x) for x in self.vector]

    @classmethod
    def from_json(cls, data) -> "DivisorClass":
        if isinstance(data, str):
            import json

            data = json.loads(data)
        if not isinstance(data, list):
            raise LatticeError("a class must be a JSON array [d, m_1, ..., m_r]")
        return cls.from_vector(data)

    def __str__(self) -> str:
        d = self.d
        parts = [] if d == 0 else ["L" if d == 1 else "-L" if d == -1 else f"{d}L"]
        for i, a in enumerate(self.m, 1):
            if a:
                sign = "-" if a > 0 else "+"
                mag = abs(a)
                parts.append(f"{sign}{'' if mag == 1 else mag}E{i}")
        if not parts:
            return "0"
        out = "".join(parts)
        return out[1:] if out.startswith("+") else out


def intersect(a: DivisorClass, b: DivisorClass, ctx: LatticeContext | None = None):
    if ctx is not None:
        ctx.check(a)
        ctx.check(b)
    return a.dot(b)


def canonical_class(ctx: LatticeContext) -> DivisorClass:
    return ctx.canonical()


def adjunction_genus(c: DivisorClass, ctx: LatticeContext | None = None):
    """Arithmetic genus (C^2 + C.K)/2 + 1."""
    c.require_integral("adjunction_genus")
    k = DivisorClass(-3, (-1,) * c.r)
    if ctx is not None:
        ctx.check(c)
    return _exact(Fraction(c.square() + c.dot(k), 2) + 1)


def riemann_roch_chi(c: DivisorClass, ctx: LatticeContext | None = None):
    """Euler characteristic (D^2 - K.D)/2 + 1."""
    c.require_integral("riemann_roch_chi")
    k = DivisorClass(-3, (-1,) * c.r)
    if ctx is not None:
        ctx.check(c)
    return _exact(Fraction(c.square() - c.dot(k), 2) + 1)


def average_class(c: DivisorClass, ctx: LatticeContext | None = None) -> DivisorClass:
    if ctx is not None:
        ctx.check(c)
    if c.r == 0:
        raise LatticeError("averaging needs at least one exceptional class")
    mean = Fraction(c.mult_sum) / c.r
    return DivisorClass(c.d, (mean,) * c.r)


def is_abnormal(c: DivisorClass, ctx: LatticeContext | None = None) -> bool:
    """True iff d^2 r < (sum m)^2, i.e. the averaged class has negative square."""
    if ctx is not None:
        ctx.check(c)
    c.require_integral("is_abnormal")
    if any(a < 0 for a in c.m):
        raise LatticeError("abnormality is defined for non-negative multiplicities")
    s = c.mult_sum
    if s <= 0:
        raise LatticeError("abnormality needs a positive multiplicity sum")
    if c.d <= 0:
        raise LatticeError("abnormality needs positive degree")
    return c.d * c.d * c.r < s * s
