"""Fat-point ideals in P^n by exact interpolation linear algebra.

A homogeneous form f of degree t lies in I(p)^mu iff every Taylor coefficient
of order < mu of f around p vanishes. We take those coefficients in the affine
chart where p has first nonzero coordinate 1; the coefficient for a monomial
x^a and a derivative index b is prod_j binom(a_j, b_j) * p_j^(a_j - b_j).
These are Hasse derivatives, so the encoding is valid in every
characteristic, not only when t < p.

Degree-t components are stored as canonical reduced row echelon matrices over
the monomials of degree t in graded reverse lexicographic order.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import numpy as np

from .linalg import DEFAULT_PRIME, Field, PrimeField, RationalField, nullspace, parse_field
from .surds import Surd


class FatPointError(ValueError):
    pass


# monomials


@lru_cache(maxsize=None)
def monomials(t: int, nvars: int) -> tuple:
    """Exponent vectors of degree t, grevlex descending (x0 > x1 > ...)."""
    if t < 0:
        return ()
    out = []
    for cut in itertools.combinations(range(t + nvars - 1), nvars - 1):
        prev, exps = -1, []
        for c in cut:
            exps.append(c - prev - 1)
            prev = c
        exps.append(t + nvars - 2 - prev)
        out.append(tuple(exps))
    return tuple(sorted(out, key=lambda e: e[::-1]))


@lru_cache(maxsize=None)
def monomial_index(t: int, nvars: int) -> dict:
    return {e: i for i, e in enumerate(monomials(t, nvars))}


def num_monomials(t: int, n: int) -> int:
    return math.comb(t + n, n) if t >= 0 else 0


# schemes


def _normalize(point, fld: Field) -> tuple:
    pt = [fld.element(x) for x in point]
    lead = next((x for x in pt if x != 0), None)
    if lead is None:
        raise FatPointError("the zero vector is not a projective point")
    if isinstance(fld, PrimeField):
        inv = pow(int(lead), -1, fld.p)
        return tuple(int(x) * inv % fld.p for x in pt)
    return tuple(Fraction(x) / lead for x in pt)


@dataclass(frozen=True)
class FatPointScheme:
    n: int
    points: tuple
    multiplicities: tuple
    field: Field = field(default_factory=RationalField)

    def __post_init__(self):
        if self.n < 1:
            raise FatPointError("ambient dimension must be at least 1")
        fld = parse_field(self.field)
        object.__setattr__(self, "field", fld)
        pts = tuple(_normalize(p, fld) for p in self.points)
        if any(len(p) != self.n + 1 for p in pts):
            raise FatPointError(f"points in P^{self.n} need {self.n + 1} coordinates")
        if len(set(pts)) != len(pts):
            raise FatPointError("points must be pairwise distinct")
        mults = tuple(int(m) for m in self.multiplicities)
        if len(mults) != len(pts):
            raise FatPointError("one multiplicity per point is required")
        if any(m < 0 for m in mults):
            raise FatPointError("multiplicities must be non-negative")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "multiplicities", mults)

    @classmethod
    def reduced(cls, points, n: int | None = None, field=None) -> "FatPointScheme":
        points = list(points)
        n = len(points[0]) - 1 if n is None else n
        return cls(n, tuple(points), (1,) * len(points), parse_field(field))

    @property
    def is_reduced(self) -> bool:
        return all(m == 1 for m in self.multiplicities)

    @property
    def degree(self) -> int:
        return sum(math.comb(m + self.n - 1, self.n) for m in self.multiplicities)

    def scaled(self, m: int) -> "FatPointScheme":
        return FatPointScheme(self.n, self.points, tuple(m * k for k in self.multiplicities), self.field)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "field": self.field.to_json(),
            "points": [[self.field.encode(x) for x in p] for p in self.points],
            "multiplicities": list(self.multiplicities),
        }

    @classmethod
    def from_json(cls, data) -> "FatPointScheme":
        try:
            fld = parse_field(data.get("field", "Q"))
            pts = [tuple(Fraction(str(x)) for x in p) for p in data["points"]]
            n = int(data.get("n", len(pts[0]) - 1))
            mults = data.get("multiplicities", [1] * len(pts))
        except (KeyError, TypeError, ValueError, ZeroDivisionError, IndexError) as exc:
            raise FatPointError(f"malformed point configuration: {exc}") from exc
        return cls(n, tuple(pts), tuple(mults), fld)


def load_config(path) -> FatPointScheme:
    with open(Path(path)) as fh:
        return FatPointScheme.from_json(json.load(fh))


def random_points(count: int, n: int = 2, field=None, seed: int | None = 0) -> FatPointScheme:
    """Distinct uniformly random points of P^n(F_p); reduced scheme."""
    fld = parse_field(field if field is not None else {"Fp": DEFAULT_PRIME})
    if not isinstance(fld, PrimeField):
        raise FatPointError("random points are drawn over a prime field")
    total = (fld.p ** (n + 1) - 1) // (fld.p - 1)
    if count > total:
        raise FatPointError(f"P^{n}(F_{fld.p}) has only {total} points")
    rng = random.Random(seed)
    seen: list = []
    while len(seen) < count:
        v = [rng.randrange(fld.p) for _ in range(n + 1)]
        if not any(v):
            continue
        pt = _normalize(v, fld)
        if pt not in seen:
            seen.append(pt)
    return FatPointScheme(n, tuple(seen), (1,) * count, fld)


def coordinate_points(n: int, count: int, field=None) -> FatPointScheme:
    """The first ``count`` coordinate vertices of P^n."""
    if count > n + 1:
        raise FatPointError("not enough coordinate vertices")
    pts = [tuple(1 if i == j else 0 for j in range(n + 1)) for i in range(count)]
    return FatPointScheme(n, tuple(pts), (1,) * count, parse_field(field))


# interpolation conditions


def _point_rows(point, mu: int, t: int, n: int, fld: Field) -> list:
    if mu <= 0:
        return []
    chart = next(i for i, x in enumerate(point) if x != 0)
    others = [j for j in range(n + 1) if j != chart]
    monos = monomials(t, n + 1)
    p = fld.p if isinstance(fld, PrimeField) else None
    rows = []
    for k in range(min(mu, t + 1)):
        for b in monomials(k, n):
            row = []
            for a in monos:
                v = 1
                for bj, j in zip(b, others):
                    aj = a[j]
                    if aj < bj:
                        v = 0
                        break
                    v *= math.comb(aj, bj) * point[j] ** (aj - bj)
                    if p is not None:
                        v %= p
                row.append(v)
            rows.append(row)
    return rows


def conditions_matrix(z: FatPointScheme, t: int) -> list:
    """Rows whose common kernel is I(Z)_t."""
    rows = []
    for pt, mu in zip(z.points, z.multiplicities):
        rows += _point_rows(pt, mu, t, z.n, z.field)
    return rows


@dataclass(frozen=True)
class ComponentBasis:
    degree: int
    n: int
    field: Field
    rows: tuple

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return num_monomials(self.degree, self.n)

    def contains(self, other: "ComponentBasis") -> bool:
        if not other.rows:
            return True
        base = self.field.rank(list(self.rows), self.ncols)
        return self.field.rank(list(self.rows) + list(other.rows), self.ncols) == base

    def encoded_rows(self) -> list:
        return [[self.field.encode(x) for x in row] for row in self.rows]


@lru_cache(maxsize=4096)
def _component(z: FatPointScheme, t: int) -> ComponentBasis:
    if t < 0:
        return ComponentBasis(t, z.n, z.field, ())
    cols = num_monomials(t, z.n)
    rows = conditions_matrix(z, t)
    if not rows:
        basis = [tuple(1 if i == j else 0 for j in range(cols)) for i in range(cols)]
        basis = z.field.rref(basis, cols)[0]
    else:
        basis = nullspace(z.field, rows, cols)
    return ComponentBasis(t, z.n, z.field, tuple(basis))


@lru_cache(maxsize=4096)
def _condition_rank(z: FatPointScheme, t: int) -> int:
    if t < 0:
        return 0
    rows = conditions_matrix(z, t)
    return z.field.rank(rows, num_monomials(t, z.n)) if rows else 0


def symbolic_component(z: FatPointScheme, m: int, t: int) -> ComponentBasis:
    """Basis of I(mZ)_t, the degree-t piece of the m-th symbolic power."""
    if m < 1:
        raise FatPointError("symbolic powers start at m = 1")
    return _component(z.scaled(m), t)


def component_dim(z: FatPointScheme, m: int, t: int) -> int:
    zz = z.scaled(m)
    return num_monomials(t, z.n) - _condition_rank(zz, t)


def alpha_symbolic(z: FatPointScheme, m: int = 1) -> int:
    """Least t with I(mZ)_t nonzero.

    A product of one linear form through each point, raised to the scaled
    multiplicity, lies in I(mZ), so t <= m * sum(m_i) bounds the search.
    """
    bound = m * sum(z.multiplicities)
    for t in range(bound + 1):
        if component_dim(z, m, t) > 0:
            return t
    raise FatPointError("alpha search exceeded its a-priori bound")  # pragma: no cover


def hilbert_function(z: FatPointScheme, t: int) -> int:
    """dim (R/I(Z))_t; zero for t < 0."""
    if t < 0:
        return 0
    return _condition_rank(z, t)


def regularity(z: FatPointScheme) -> int:
    """Least t >= 0 with HF(t) == HF(t-1)."""
    t = 0
    while True:
        if hilbert_function(z, t) == hilbert_function(z, t - 1):
            return t
        t += 1


# ordinary powers


def _integer_rows(fld: Field, rows) -> list:
    if isinstance(fld, RationalField):
        return fld.integer_rows(rows)
    return [[int(x) for x in row] for row in rows]


@lru_cache(maxsize=None)
def _product_table(a: int, b: int, nvars: int) -> np.ndarray:
    """table[i, j] = index of monomial_i(a) * monomial_j(b) in degree a + b."""
    idx = monomial_index(a + b, nvars)
    ma, mb = monomials(a, nvars), monomials(b, nvars)
    return np.array(
        [[idx[tuple(x + y for x, y in zip(u, v))] for v in mb] for u in ma], dtype=np.int64
    )


def _multiply_all(fld: Field, left, right, a: int, b: int, nvars: int) -> list:
    """All products of rows of ``left`` (degree a) with rows of ``right`` (degree b)."""
    table = _product_table(a, b, nvars)
    size = num_monomials(a + b, nvars - 1)
    out = []
    if isinstance(fld, PrimeField):
        p = fld.p
        L = np.array(left, dtype=np.int64).reshape(len(left), -1) % p
        R = np.array(right, dtype=np.int64).reshape(len(right), -1) % p
        for u in L:
            iu = np.flatnonzero(u)
            for v in R:
                iv = np.flatnonzero(v)
                terms = np.outer(u[iu], v[iv]) % p
                acc = np.zeros(size, dtype=np.int64)
                np.add.at(acc, table[np.ix_(iu, iv)].ravel(), terms.ravel())
                out.append(acc % p)
        return out
    for u in left:
        nu = [(i, x) for i, x in enumerate(u) if x]
        for v in right:
            acc = [0] * size
            for j, y in enumerate(v):
                if not y:
                    continue
                col = table[:, j]
                for i, x in nu:
                    acc[col[i]] += x * y
            out.append(acc)
    return out


@lru_cache(maxsize=256)
def generator_degrees(z: FatPointScheme, extra: int = 0) -> tuple:
    """Degrees alpha(I) .. reg(I) + 1 (+ extra) used to generate I(Z)."""
    return tuple(range(alpha_symbolic(z, 1), regularity(z) + 2 + extra))


@lru_cache(maxsize=256)
def minimal_generators(z: FatPointScheme, extra: int = 0) -> tuple:
    """(degree, rows) pairs: for each degree a complement of R_1 * I_{t-1} in I_t."""
    fld = z.field
    nv = z.n + 1
    out = []
    for t in generator_degrees(z, extra):
        comp = _component(z, t)
        cols = comp.ncols
        prev = _component(z, t - 1)
        lifted = []
        if prev.rows:
            linear = [[1 if i == j else 0 for j in range(nv)] for i in range(nv)]
            lifted = _multiply_all(fld, _integer_rows(fld, prev.rows), linear, t - 1, 1, nv)
        base = fld.rank(lifted, cols) if lifted else 0
        chosen = [list(x) for x in lifted]
        new = []
        for row in _integer_rows(fld, comp.rows):
            if fld.rank(chosen + [row], cols) > base:
                chosen.append(row)
                base += 1
                new.append(row)
        if new:
            out.append((t, tuple(tuple(r) for r in new)))
    return tuple(out)


@lru_cache(maxsize=2048)
def _power(z: FatPointScheme, r: int, t: int, extra: int) -> ComponentBasis:
    fld = z.field
    cols = num_monomials(t, z.n)
    if r == 1:
        return _component(z, t)
    products = []
    for b, gens in minimal_generators(z, extra):
        a = t - b
        if a < 0:
            continue
        lower = _power(z, r - 1, a, extra)
        if not lower.rows:
            continue
        products += _multiply_all(fld, _integer_rows(fld, lower.rows), list(gens), a, b, z.n + 1)
    rows = fld.rref(products, cols)[0] if products else []
    return ComponentBasis(t, z.n, fld, tuple(rows))


def power_component(z: FatPointScheme, r: int, t: int, extra_generator_degrees: int = 0) -> ComponentBasis:
    """Basis of (I(Z)^r)_t from products of generators."""
    if r < 1:
        raise FatPointError("powers start at r = 1")
    return _power(z, r, t, extra_generator_degrees)


# containment


@dataclass(frozen=True)
class ContainmentResult:
    contained: bool
    m: int
    r: int
    rule: str
    degrees_checked: tuple
    failing_degree: int | None = None
    witness: tuple | None = None


def contains_symbolic_in_power(z: FatPointScheme, m: int, r: int) -> ContainmentResult:
    """Decide I^(m) in I^r degree by degree.

    Degrees t >= r * reg(I) need no check when m >= r: there
    (I^r)_t = (I^(r))_t, which contains I^(m)_t. When m < r containment fails,
    and a witness turns up by degree r * reg(I) at the latest.
    """
    if m < 1 or r < 1:
        raise FatPointError("need m, r >= 1")
    reg = regularity(z)
    top = r * reg if m < r else r * reg - 1
    start = alpha_symbolic(z, m)
    checked = []
    for t in range(start, top + 1):
        checked.append(t)
        sym = symbolic_component(z, m, t)
        if not sym.rows:
            continue
        pw = power_component(z, r, t)
        if pw.dim >= sym.dim and pw.contains(sym):
            continue
        for row in sym.rows:
            if not pw.contains(ComponentBasis(t, z.n, z.field, (row,))):
                return ContainmentResult(False, m, r, "direct", tuple(checked), t, row)
    if m < r:  # pragma: no cover - guaranteed witness above
        raise FatPointError("no witness found below r * reg(I) although m < r")
    return ContainmentResult(True, m, r, "direct", tuple(checked))


@dataclass(frozen=True)
class BHVerdict:
    verdict: str  # fails_by_alpha | holds_by_reg | indeterminate
    alpha_m: int
    alpha: int
    reg: int
    alpha_equals_reg: bool


def bh_criteria(z: FatPointScheme, m: int, r: int) -> BHVerdict:
    am, a, reg = alpha_symbolic(z, m), alpha_symbolic(z, 1), regularity(z)
    if am < r * a:
        v = "fails_by_alpha"
    elif r * reg <= am:
        v = "holds_by_reg"
    else:
        v = "indeterminate"
    return BHVerdict(v, am, a, reg, a == reg)


# Waldschmidt constant and resurgence


@dataclass(frozen=True)
class WaldschmidtEstimate:
    sequence: tuple  # (m, d_m, d_m / m)
    lower: object
    upper: Fraction
    lower_sources: tuple

    @property
    def pinned(self) -> bool:
        return self.lower == self.upper

    @property
    def value(self):
        return self.upper if self.pinned else None


def waldschmidt_estimate(z: FatPointScheme, m_max: int, epsilon=None, nef_certificate=None) -> WaldschmidtEstimate:
    """Bounds on gamma(I) = lim d_m / m.

    Upper bound: min d_m / m. Lower bounds: 1, alpha(I)/n, r * epsilon when
    an epsilon is supplied (planar), and sum(b_i)/a for a supplied class
    aL - sum b_i E_i known to be nef for this configuration.
    """
    if not z.is_reduced:
        raise FatPointError("the Waldschmidt estimate is for reduced schemes")
    if m_max < 1:
        raise FatPointError("m_max must be at least 1")
    seq = []
    for m in range(1, m_max + 1):
        d = alpha_symbolic(z, m)
        seq.append((m, d, Fraction(d, m)))
    upper = min(q for _, _, q in seq)
    lows = [(Fraction(1), "gamma>=1"), (Fraction(seq[0][1], z.n), "alpha/n")]
    if epsilon is not None:
        if z.n != 2:
            raise FatPointError("the r*epsilon bound is for points in the plane")
        lows.append((epsilon * len(z.points), "r*epsilon"))
    if nef_certificate is not None:
        cert = nef_certificate
        if cert.r != len(z.points) or cert.d <= 0:
            raise FatPointError("nef certificate does not match the configuration")
        lows.append((Fraction(cert.mult_sum) / cert.d, "nef_class"))
    lower = max(v for v, _ in lows)
    sources = tuple(s for v, s in lows if v == lower)
    if lower > upper:
        raise FatPointError(f"inconsistent bounds: lower {lower} > upper {upper}")
    return WaldschmidtEstimate(tuple(seq), lower, upper, sources)


def resurgence_bounds(z: FatPointScheme, gamma_interval=None, m_max: int = 6):
    """alpha(I)/gamma <= rho(I) <= reg(I)/gamma over a gamma interval."""
    if gamma_interval is None:
        est = waldschmidt_estimate(z, m_max)
        gamma_interval = (est.lower, est.upper)
    g_lo, g_hi = gamma_interval
    if not g_lo > 0:
        raise FatPointError("gamma interval must be positive")
    a, reg = alpha_symbolic(z, 1), regularity(z)
    return _div(a, g_hi), _div(reg, g_lo)


def _div(x: int, g):
    if isinstance(g, Surd):
        return x / g
    return Fraction(x) / Fraction(g)


def frobenius_containment_check(z: FatPointScheme, q: int) -> bool:
    """Check I^(qn - (n-1)) in I^q for q a power of the characteristic."""
    fld = z.field
    if not isinstance(fld, PrimeField):
        raise FatPointError("Frobenius containment needs a field of positive characteristic")
    p, k = fld.p, q
    while k > 1 and k % p == 0:
        k //= p
    if q < 1 or k != 1:
        raise FatPointError(f"q={q} is not a power of the characteristic {p}")
    n = z.n
    return contains_symbolic_in_power(z, q * n - (n - 1), q).contained


def alpha_question_checks(z: FatPointScheme, r: int = 2) -> dict:
    """Experimental inequalities on initial degrees of symbolic powers."""
    n = z.n
    a = alpha_symbolic(z, 1)
    a_n1 = alpha_symbolic(z, n + 1)
    a_r = alpha_symbolic(z, r * n - n + 1)
    return {
        "alpha": a,
        "alpha_n_plus_1": a_n1,
        "two_alpha_bound": a_n1 >= 2 * a,
        "alpha_rn_minus_n_plus_1": a_r,
        "r_alpha_plus_n_minus_1_bound": a_r >= r * a + n - 1,
    }


# planar interpolation used by the Seshadri module


def class_sections(d: int, mults, points, fld: Field) -> int:
    """dim of degree-d forms with the given multiplicities at the given planar points."""
    if d < 0:
        return 0
    cols = num_monomials(d, 2)
    rows = []
    for pt, mu in zip(points, mults):
        if mu > 0:
            rows += _point_rows(pt, mu, d, 2, fld)
    if not rows:
        return cols
    return cols - fld.rank(rows, cols)
