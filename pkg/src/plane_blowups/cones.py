"""Effective and nef cones for configurations with finitely generated EFF.

Supported configuration kinds:

- ``collinear(r)``: r points on a line.
- ``conic(r)``: r >= 3 points on a smooth conic.
- ``cubic_chain(r)``: r >= 3 infinitely near points along a smooth cubic,
  each lying on the exceptional curve of the previous blow-up.
- ``generic(r)``: r <= 8 general points (del Pezzo range).
- ``three_collinear_plus_one``: 4 points, the first three on a line.

Membership in EFF is decided by forced subtraction: if ``C.P < 0`` for a
prime generator ``P`` then ``P`` is a component of every member of ``|C|``.
What is left pairs non-negatively with every generator, so it is nef. Each
kind supplies a recipe that writes such a class in the generators.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .lattice import DivisorClass, LatticeContext, LatticeError

KINDS = ("collinear", "conic", "cubic_chain", "generic", "three_collinear_plus_one")

# dual-cone enumeration is skipped above this many generator subsets
DUAL_RAY_LIMIT = 2000


class UnsupportedConfiguration(LatticeError):
    pass


@dataclass(frozen=True)
class ConfigurationTag:
    kind: str
    r: int

    def __post_init__(self):
        kind = self.kind.replace("-", "_")
        object.__setattr__(self, "kind", kind)
        r = self.r
        if kind not in KINDS:
            raise UnsupportedConfiguration(f"unknown configuration kind {self.kind!r}")
        if not isinstance(r, int) or r < 0:
            raise UnsupportedConfiguration(f"r must be a non-negative integer, got {r!r}")
        if kind == "collinear" and r < 1:
            raise UnsupportedConfiguration("collinear configurations need r >= 1")
        if kind in ("conic", "cubic_chain") and r < 3:
            raise UnsupportedConfiguration(f"{kind} configurations need r >= 3")
        if kind == "generic" and r >= 9:
            raise UnsupportedConfiguration(
                "EFF is not finitely generated for r >= 9 general points: "
                "there are infinitely many (-1)-curves"
            )
        if kind == "three_collinear_plus_one" and r != 4:
            raise UnsupportedConfiguration("three_collinear_plus_one has exactly 4 points")

    @property
    def ctx(self) -> LatticeContext:
        return LatticeContext(self.r)

    @property
    def symmetric(self) -> bool:
        """True when the point labels are interchangeable."""
        return self.kind in ("collinear", "conic", "generic")

    def __str__(self) -> str:
        return f"{self.kind}({self.r})"


def parse_tag(text: str, r: int | None = None) -> ConfigurationTag:
    """Accepts ``conic``, ``conic(10)`` or ``conic:10``."""
    text = text.strip().replace("-", "_")
    for sep in ("(", ":"):
        if sep in text:
            kind, rest = text.split(sep, 1)
            return ConfigurationTag(kind, int(rest.rstrip(")")))
    if text == "three_collinear_plus_one":
        return ConfigurationTag(text, 4 if r is None else r)
    if r is None:
        raise UnsupportedConfiguration(f"tag {text!r} needs a point count")
    return ConfigurationTag(text, r)


@dataclass(frozen=True)
class ConeDescription:
    tag: ConfigurationTag
    eff_generators: tuple
    nef_generators: tuple
    finitely_generated: bool = True
    nef_complete: bool = True
    # classes F must pair non-negatively with, beyond the eff generators' duality
    extra_nef_constraints: tuple = field(default=())

    @property
    def negative_generators(self) -> tuple:
        return tuple(g for g in self.eff_generators if g.square() < 0)


def _cls(d, m):
    return DivisorClass(d, m)


def _e(r, i):
    m = [0] * r
    m[i] = -1
    return _cls(0, m)


def _sorted(classes):
    return tuple(sorted(set(classes), key=lambda c: c.vector))


# (-1)-classes


def _distinct_permutations(values):
    counts = Counter(values)
    keys = sorted(counts)
    n = len(values)
    out = []

    def rec(prefix):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for k in keys:
            if counts[k]:
                counts[k] -= 1
                prefix.append(k)
                rec(prefix)
                prefix.pop()
                counts[k] += 1

    rec([])
    return out


def _sum_square_multisets(k, total, sq, hi):
    """Non-increasing integer k-tuples with entries <= hi, given sum and sum of squares."""
    if k == 0:
        if total == 0 and sq == 0:
            yield ()
        return
    if sq < 0 or total * total > k * sq:
        return
    bound = math.isqrt(sq)
    for a in range(min(hi, bound), -bound - 1, -1):
        # remaining entries are all <= a
        if total - a > (k - 1) * a:
            break
        for tail in _sum_square_multisets(k - 1, total - a, sq - a * a, a):
            yield (a,) + tail


@lru_cache(maxsize=None)
def _neg_one_cached(r: int) -> tuple:
    out = []
    d = 0
    while True:
        if d > 3 and (9 - r) * d * d - 6 * d + 1 - r > 0:
            break
        for ms in _sum_square_multisets(r, 3 * d - 1, d * d + 1, d * d + 1):
            for perm in _distinct_permutations(ms):
                out.append(_cls(d, perm))
        d += 1
    return _sorted(out)


def enumerate_neg_one_classes(r: int) -> list[DivisorClass]:
    """All classes E with E^2 = E.K = -1 and d >= 0 for r <= 8 points.

    Degree is bounded by Cauchy-Schwarz on the two constraints
    ``sum m = 3d - 1`` and ``sum m^2 = d^2 + 1``.
    """
    if not isinstance(r, int) or r < 0:
        raise LatticeError("r must be a non-negative integer")
    if r >= 9:
        raise UnsupportedConfiguration(
            f"r={r}: the (-1)-classes are infinite in number once r >= 9"
        )
    return list(_neg_one_cached(r))


# generators


def _collinear(r):
    eff = [_cls(1, [1] * r)] + [_e(r, i) for i in range(r)]
    nef = [_cls(1, [0] * r)]
    for i in range(r):
        m = [0] * r
        m[i] = 1
        nef.append(_cls(1, m))
    return eff, nef


def _line_through(r, idx):
    m = [0] * r
    for i in idx:
        m[i] = 1
    return _cls(1, m)


def _conic(r):
    eff = [_e(r, i) for i in range(r)]
    eff += [_line_through(r, p) for p in itertools.combinations(range(r), 2)]
    eff.append(_cls(2, [1] * r))
    return eff


def _cubic_ladder(r):
    lad = [_cls(1, [0] * r), _cls(1, [1] + [0] * (r - 1)), _cls(2, [1, 1] + [0] * (r - 2))]
    for j in range(3, r + 1):
        lad.append(_cls(3, [1] * j + [0] * (r - j)))
    return lad


def _cubic_chain(r):
    eff = [_e(r, r - 1)]
    for i in range(r - 1):
        m = [0] * r
        m[i], m[i + 1] = -1, 1
        eff.append(_cls(0, m))
    eff.append(_cls(1, [1, 1, 1] + [0] * (r - 3)))
    eff.append(_cls(3, [1] * r))
    return eff


def _generic(r):
    eff = list(enumerate_neg_one_classes(r))
    if r == 0:
        eff.append(_cls(1, []))
    elif r == 1:
        eff.append(_cls(1, [1]))
    elif r == 8:
        # the anticanonical pencil: square 1, not a (-1)-class but needed to span
        eff.append(_cls(3, [1] * 8))
    return eff


def _three_collinear_plus_one():
    r = 4
    eff = [_e(r, i) for i in range(r)]
    eff.append(_line_through(r, (0, 1, 2)))
    eff += [_line_through(r, (i, 3)) for i in range(3)]
    return eff


def dual_extreme_rays(gens, r: int, limit: int = DUAL_RAY_LIMIT):
    """Extreme rays of {F : F.G >= 0 for all G in gens}, or None if too costly.

    Each ray is orthogonal to r independent generators; we try every
    r-subset, so the cost is binomial(len(gens), r).
    """
    n = r + 1
    gens = list(gens)
    if math.comb(len(gens), n - 1) > limit:
        return None
    # pairing F.G = F.d*G.d - sum F.m_i*G.m_i; as a linear form in (F.d, F.m)
    rows = [[g.d] + [-x for x in g.m] for g in gens]
    rays = set()
    for sub in itertools.combinations(range(len(gens)), n - 1):
        v = _nullvector([rows[i] for i in sub], n)
        if v is None:
            continue
        for sgn in (1, -1):
            w = [sgn * x for x in v]
            if all(sum(a * b for a, b in zip(row, w)) >= 0 for row in rows):
                rays.add(tuple(w))
    return _sorted(_cls(v[0], v[1:]) for v in rays)


def _nullvector(rows, n):
    """Primitive integer generator of a one-dimensional kernel, else None."""
    mat = [[Fraction(x) for x in row] for row in rows]
    piv_cols = []
    rank = 0
    for c in range(n):
        p = next((i for i in range(rank, len(mat)) if mat[i][c] != 0), None)
        if p is None:
            continue
        mat[rank], mat[p] = mat[p], mat[rank]
        inv = 1 / mat[rank][c]
        mat[rank] = [x * inv for x in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[rank])]
        piv_cols.append(c)
        rank += 1
    free = [c for c in range(n) if c not in piv_cols]
    if len(free) != 1:
        return None
    fc = free[0]
    v = [Fraction(0)] * n
    v[fc] = Fraction(1)
    for i, c in enumerate(piv_cols):
        v[c] = -mat[i][fc]
    den = math.lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = math.gcd(*ints)
    return [x // g for x in ints]


@lru_cache(maxsize=None)
def cone_generators(tag: ConfigurationTag) -> ConeDescription:
    r = tag.r
    extra = ()
    complete = True
    if tag.kind == "collinear":
        eff, nef = _collinear(r)
    elif tag.kind == "cubic_chain":
        eff = _cubic_chain(r)
        extra = (_cls(3, [1] * r),)
        if r <= 9:
            nef = _cubic_ladder(r)
        else:
            nef = dual_extreme_rays(eff, r)
            if nef is None:
                nef, complete = [g for g in _cubic_ladder(r) if all(g.dot(e) >= 0 for e in eff)], False
    else:
        eff = {
            "conic": lambda: _conic(r),
            "generic": lambda: _generic(r),
            "three_collinear_plus_one": _three_collinear_plus_one,
        }[tag.kind]()
        nef = dual_extreme_rays(eff, r)
        if nef is None:
            nef, complete = [], False
    return ConeDescription(tag, _sorted(eff), _sorted(nef), True, complete, extra)


# membership


def is_nef(f: DivisorClass, tag: ConfigurationTag) -> bool:
    tag.ctx.check(f)
    f.require_integral("is_nef")
    desc = cone_generators(tag)
    if tag.kind == "cubic_chain":
        c = cubic_ladder_coefficients(f)
        return all(x >= 0 for x in c) and f.dot(desc.extra_nef_constraints[0]) >= 0
    return all(f.dot(g) >= 0 for g in desc.eff_generators)


def cubic_ladder_coefficients(f: DivisorClass) -> list:
    """Coefficients of f in the ladder L, L-E1, 2L-E1-E2, 3L-E1-..-Ej (j >= 3)."""
    m = list(f.m) + [0]
    r = f.r
    c = [m[j] - m[j + 1] for j in range(r)]
    c0 = f.d - c[0] - 2 * c[1] - 3 * m[2]
    return [c0] + c


def _functional(tag: ConfigurationTag, gens) -> DivisorClass:
    """A class strictly positive on every eff generator; bounds subtraction loops."""
    r = tag.r
    if tag.kind == "cubic_chain":
        w = [r + 1 - i for i in range(1, r + 1)]
    else:
        w = [1] * r
    n = 1
    while True:
        a = _cls(n, w)
        if all(a.dot(g) > 0 for g in gens):
            return a
        n += 1
        if n > 10_000:
            raise LatticeError("no positive functional found")


@lru_cache(maxsize=None)
def _functional_cached(tag):
    return _functional(tag, cone_generators(tag).eff_generators)


def _forced_subtraction(c: DivisorClass, tag: ConfigurationTag):
    """Strip forced components. Returns (remainder, used) or None if not effective."""
    desc = cone_generators(tag)
    neg = desc.negative_generators
    a = _functional_cached(tag)
    used: list[DivisorClass] = []
    while True:
        if a.dot(c) < 0:
            return None
        p = next((g for g in neg if c.dot(g) < 0), None)
        if p is None:
            break
        c = c - p
        used.append(p)
    if any(c.dot(g) < 0 for g in desc.eff_generators):
        return None
    return c, used


def is_effective(c: DivisorClass, tag: ConfigurationTag) -> bool:
    tag.ctx.check(c)
    c.require_integral("is_effective")
    return _forced_subtraction(c, tag) is not None


def _collect(pieces):
    acc: dict = {}
    for g, k in pieces:
        if k:
            acc[g] = acc.get(g, 0) + k
    return sorted(acc.items(), key=lambda t: t[0].vector)


def _nef_collinear(f, r):
    lam = _cls(1, [1] * r)
    out = [(lam, f.d)]
    out += [(_e(r, i), f.d - f.m[i]) for i in range(r)]
    return out


def _nef_conic(f, r):
    order = sorted(range(r), key=lambda i: (-f.m[i], i))
    a = [f.m[i] for i in order] + [0]
    a0 = f.d

    def line(i, j):
        return _line_through(r, (order[i], order[j]))

    def e(i):
        return _e(r, order[i])

    l12 = line(0, 1)
    out = []
    # L = L12 + E1 + E2
    k = a0 - a[0] - a[2]
    out += [(l12, k), (e(0), k), (e(1), k)]
    # L - E1 = L12 + E2
    k = a[0] - a[1]
    out += [(l12, k), (e(1), k)]
    out.append((l12, a[1] - a[2]))
    # 2L - E1 - ... - Ei = D + E_{i+1} + ... + E_r
    d = _cls(2, [1] * r)
    for i in range(2, r):
        k = a[i] - a[i + 1]
        out.append((d, k))
        out += [(e(j), k) for j in range(i + 1, r)]
    return out


def _nef_cubic_chain(f, r):
    c = cubic_ladder_coefficients(f)
    t = _cls(1, [1, 1, 1] + [0] * (r - 3))
    minus_k = _cls(3, [1] * r)
    steps = [_e(r, r - 1)]
    for i in range(r - 1):
        m = [0] * r
        m[i], m[i + 1] = -1, 1
        steps.append(_cls(0, m))
    # E_i = (E_i - E_{i+1}) + ... + (E_{r-1} - E_r) + E_r
    def exc(i):
        return [(steps[0], 1)] + [(steps[k + 1], 1) for k in range(i, r - 1)]

    def scale(pieces, k):
        return [(g, k * n) for g, n in pieces]

    expansions = [
        [(t, 1)] + exc(0) + exc(1) + exc(2),
        [(t, 1)] + exc(1) + exc(2),
        [(t, 2)] + exc(0) + exc(1) + scale(exc(2), 2),
    ]
    for j in range(3, r + 1):
        expansions.append([(minus_k, 1)] + [p for i in range(j, r) for p in exc(i)])
    out = []
    for coeff, exp in zip(c, expansions):
        out += scale(exp, coeff)
    return out


def _nef_greedy(f, tag):
    desc = cone_generators(tag)
    a = _functional_cached(tag)
    out = []
    zero = tag.ctx.zero()
    while f != zero:
        for g in sorted(desc.eff_generators, key=lambda g: (-a.dot(g), g.vector)):
            res = _forced_subtraction(f - g, tag)
            if res is not None:
                out.append((g, 1))
                out += [(p, 1) for p in res[1]]
                f = res[0]
                break
        else:
            raise LatticeError(f"nef class {f} did not decompose in {tag}")
    return out


def decompose_effective(c: DivisorClass, tag: ConfigurationTag):
    """Certificate [(generator, multiplicity), ...] for C in EFF, or None."""
    tag.ctx.check(c)
    c.require_integral("decompose_effective")
    res = _forced_subtraction(c, tag)
    if res is None:
        return None
    f, used = res
    r = tag.r
    if tag.kind == "collinear":
        pieces = _nef_collinear(f, r)
    elif tag.kind == "conic":
        pieces = _nef_conic(f, r)
    elif tag.kind == "cubic_chain":
        pieces = _nef_cubic_chain(f, r)
    else:
        pieces = _nef_greedy(f, tag)
    pieces = pieces + [(p, 1) for p in used]
    if any(k < 0 for _, k in pieces):
        raise LatticeError(f"negative coefficient while decomposing {c} in {tag}")
    cert = _collect(pieces)
    if recombine(cert, r) != c:
        raise LatticeError(f"certificate for {c} in {tag} does not recombine")
    return cert


def recombine(cert, r: int) -> DivisorClass:
    total = LatticeContext(r).zero()
    for g, k in cert:
        total = total + g * k
    return total
