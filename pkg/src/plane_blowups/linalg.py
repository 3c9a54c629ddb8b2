"""Exact fields and canonical row reduction.

``RationalField`` does fraction-free elimination on integer rows and only
normalises pivots to 1 at the end. ``PrimeField`` hands int64 matrices to the
compiled kernel (or its NumPy fallback).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _backend

# large enough for interpolation ranks, small enough that products fit in int64
DEFAULT_PRIME = 2147483647


class FieldError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    # deterministic Miller-Rabin for p < 3.3e24
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if a % p == 0:
            continue
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class RationalField:
    characteristic: int = 0

    @property
    def name(self) -> str:
        return "Q"

    def element(self, x) -> Fraction:
        if isinstance(x, float):
            raise FieldError("floating point coordinates are not exact")
        return Fraction(x)

    def encode(self, x) -> str:
        return str(Fraction(x))

    def to_json(self):
        return "Q"

    def integer_rows(self, rows):
        """Scale each row to a primitive integer vector (same row space)."""
        out = []
        for row in rows:
            row = [Fraction(x) for x in row]
            den = math.lcm(*(x.denominator for x in row)) if row else 1
            ints = [int(x * den) for x in row]
            g = math.gcd(*ints)
            if g:
                out.append([v // g for v in ints])
        return out

    def rref(self, rows, ncols: int):
        mat = [r for r in self.integer_rows(rows) if any(r)]
        pivots = []
        rank = 0
        for c in range(ncols):
            cand = [i for i in range(rank, len(mat)) if mat[i][c]]
            if not cand:
                continue
            p = min(cand, key=lambda i: abs(mat[i][c]))
            mat[rank], mat[p] = mat[p], mat[rank]
            pr = mat[rank]
            a = pr[c]
            for i in range(len(mat)):
                if i == rank or not mat[i][c]:
                    continue
                b = mat[i][c]
                row = [a * x - b * y for x, y in zip(mat[i], pr)]
                g = math.gcd(*row)
                mat[i] = [x // g for x in row] if g > 1 else row
            pivots.append(c)
            rank += 1
        out = []
        for i, c in enumerate(pivots):
            a = mat[i][c]
            out.append(tuple(Fraction(x, a) for x in mat[i]))
        return out, pivots

    def rank(self, rows, ncols: int) -> int:
        return len(self.rref(rows, ncols)[1])


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not _is_prime(self.p):
            raise FieldError(f"{self.p!r} is not a prime")
        if self.p >= 2**31:
            raise FieldError("F_p kernels need p < 2^31 so products fit in int64")

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def name(self) -> str:
        return f"F_{self.p}"

    def element(self, x) -> int:
        if isinstance(x, float):
            raise FieldError("floating point coordinates are not exact")
        f = Fraction(x)
        if f.denominator % self.p == 0:
            raise FieldError(f"{x} has no image in F_{self.p}")
        return f.numerator * pow(f.denominator, -1, self.p) % self.p

    def encode(self, x) -> str:
        return str(int(x) % self.p)

    def to_json(self):
        return {"Fp": self.p}

    def _array(self, rows, ncols):
        a = np.zeros((len(rows), ncols), dtype=np.int64)
        for i, row in enumerate(rows):
            a[i] = [int(x) % self.p for x in row]
        return a

    def rref(self, rows, ncols: int):
        if not rows:
            return [], []
        a = self._array(rows, ncols)
        pivots = _backend.rref_modp(a, self.p)
        return [tuple(int(x) for x in a[i]) for i in range(len(pivots))], list(pivots)

    def rank(self, rows, ncols: int) -> int:
        if not rows:
            return 0
        return _backend.rank_modp(self._array(rows, ncols), self.p)

    def rank_array(self, a: np.ndarray) -> int:
        """Rank of an int64 array already reduced mod p (destroyed)."""
        if a.shape[0] == 0:
            return 0
        return _backend.rank_modp(np.ascontiguousarray(a), self.p)


Field = RationalField | PrimeField


def parse_field(spec) -> Field:
    """``"Q"``, ``{"Fp": p}``, ``"Fp:p"`` or an int p."""
    if isinstance(spec, (RationalField, PrimeField)):
        return spec
    if spec in ("Q", "QQ", "q", None):
        return RationalField()
    if isinstance(spec, dict) and set(spec) == {"Fp"}:
        return PrimeField(int(spec["Fp"]))
    if isinstance(spec, int):
        return PrimeField(spec)
    if isinstance(spec, str):
        s = spec.replace("F_", "Fp:").replace("GF", "Fp:").replace("::", ":")
        if s.startswith("Fp:"):
            return PrimeField(int(s[3:]))
        if s.isdigit():
            return PrimeField(int(s))
    raise FieldError(f"unrecognised field {spec!r}")


def nullspace(field: Field, rows, ncols: int):
    """Canonical (reduced echelon) basis of {v : M v = 0}."""
    red, pivots = field.rref(rows, ncols)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [0] * ncols
        v[f] = 1
        for row, c in zip(red, pivots):
            v[c] = -row[f]
        basis.append(v)
    return field.rref(basis, ncols)[0]


def in_rowspace(field: Field, basis_rows, vec, ncols: int) -> bool:
    base = field.rank(list(basis_rows), ncols)
    return field.rank(list(basis_rows) + [list(vec)], ncols) == base
