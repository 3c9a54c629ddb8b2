"""Multipoint Seshadri constants, Waldschmidt constants and nefness proofs.

For a configuration with a finitely generated effective cone, epsilon is the
least ratio d / sum(m_i) over effective generators with positive multiplicity
sum. The uniform class bL - a*sum(E_i) with a/b = epsilon is then nef and
orthogonal to the minimising generator, and that pair certifies the value.

``prove_nef`` tests a class F for general points by listing the only classes
that could be primes meeting F negatively, then ruling each one out.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import cones
from .cones import ConfigurationTag, UnsupportedConfiguration
from .fatpoints import class_sections
from .lattice import DivisorClass, LatticeContext, riemann_roch_chi
from .linalg import DEFAULT_PRIME, PrimeField
from .surds import Surd, inverse_sqrt


class SeshadriError(ValueError):
    pass


@dataclass(frozen=True)
class SeshadriResult:
    value: object  # Fraction, Surd or None when only bounds are known
    lower: object
    upper: object
    certificate: str  # orthogonal_pair | abnormal_class | generator_table | unloading | nagata_theorem | none
    data: dict = field(default_factory=dict)
    notes: tuple = ()

    @property
    def exact(self) -> bool:
        return self.value is not None

    def to_json(self) -> dict:
        out = {
            "value": None if self.value is None else str(self.value),
            "lower": str(self.lower),
            "upper": str(self.upper),
            "certificate": self.certificate,
            "certificate_data": _jsonify(self.data),
        }
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _jsonify(x):
    if isinstance(x, DivisorClass):
        return x.to_json()
    if isinstance(x, dict):
        return {k: _jsonify(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonify(v) for v in x]
    if isinstance(x, (Fraction, Surd)):
        return str(x)
    return x


def _is_square(r: int) -> bool:
    return math.isqrt(r) ** 2 == r


def _resolve(tag, r=None):
    if isinstance(tag, ConfigurationTag):
        return tag
    if isinstance(tag, str):
        kind = tag.replace("-", "_")
        if kind == "generic" and r is not None and r >= 9:
            return ("generic", r)
        return cones.parse_tag(kind, r)
    if isinstance(tag, tuple) and tag[0] == "generic":
        return tag
    raise SeshadriError(f"unrecognised configuration {tag!r}")


def _cone_epsilon(tag: ConfigurationTag) -> SeshadriResult:
    desc = cones.cone_generators(tag)
    best = None
    for g in desc.eff_generators:
        s = g.mult_sum
        if s > 0:
            q = Fraction(g.d, s)
            if best is None or q < best[0]:
                best = (q, g)
    if best is None:
        raise SeshadriError(f"{tag}: no effective class has positive multiplicity sum")
    eps, c = best
    f = tag.ctx.uniform(eps.denominator, eps.numerator)
    if not cones.is_nef(f, tag) or f.dot(c) != 0:
        raise SeshadriError(f"orthogonal pair check failed for {tag}")  # pragma: no cover
    return SeshadriResult(
        eps, eps, eps, "orthogonal_pair",
        {"F": f, "C": c, "C_decomposition": [[c, 1]]},
    )


def epsilon_exact(tag, r: int | None = None) -> SeshadriResult:
    """Exact epsilon where the configuration allows, else an interval."""
    t = _resolve(tag, r)
    if isinstance(t, tuple):
        return _generic_large(t[1])
    if t.kind == "cubic_chain":
        lo = Fraction(1, t.r)
        return SeshadriResult(None, lo, inverse_sqrt(t.r), "none", {},
                              ("infinitely near points: only the general bounds are reported",))
    return _cone_epsilon(t)


def _generic_large(r: int) -> SeshadriResult:
    ctx = LatticeContext(r)
    if r == 9:
        k = -ctx.canonical()
        return SeshadriResult(Fraction(1, 3), Fraction(1, 3), Fraction(1, 3), "orthogonal_pair",
                              {"F": k, "C": k, "C_decomposition": [[k, 1]]},
                              ("-K is the unique cubic through the points, a prime of square 0",))
    if _is_square(r):
        s = math.isqrt(r)
        v = Surd(1, 1, r)
        return SeshadriResult(v, v.exact(), v.exact(), "nagata_theorem",
                              {"F": ctx.uniform(s, 1)},
                              (f"1/sqrt({r}) = 1/{s}: no abnormal curves for a square number of general points",))
    low = epsilon_lower_unloading(r)
    return SeshadriResult(None, low.lower, inverse_sqrt(r), "unloading", low.data,
                          ("exact value unknown; upper bound 1/sqrt(r) from F^2 >= 0",))


def lambda_L(tag, r: int | None = None) -> Fraction:
    """min C^2 / (C.L)^2 over the negative prime generators of positive degree."""
    t = _resolve(tag, r)
    if isinstance(t, tuple):
        raise UnsupportedConfiguration("lambda_L needs a finite list of negative primes")
    desc = cones.cone_generators(t)
    vals = [Fraction(g.square(), g.d * g.d) for g in desc.eff_generators if g.d > 0 and g.square() < 0]
    if vals:
        return min(vals)
    if any(g.d > 0 and g.square() == 0 for g in desc.eff_generators):
        return Fraction(0)
    raise UnsupportedConfiguration(f"{t}: no generator of positive degree and non-positive square")


def _inv_square(eps) -> Fraction:
    if isinstance(eps, Surd):
        return eps.radicand / (eps.coeff * eps.coeff)
    return 1 / (Fraction(eps) ** 2)


def check_lambda_epsilon_inequality(lam, eps) -> bool:
    """lambda >= 1 - 1/epsilon, exactly."""
    if not eps > 0:
        raise SeshadriError("epsilon must be positive")
    lam = Fraction(lam)
    if isinstance(eps, Surd) and not eps.is_rational:
        gap = 1 - lam  # need gap <= 1/eps
        return gap <= 0 or gap * gap <= _inv_square(eps)
    return lam >= 1 - 1 / Fraction(eps.exact() if isinstance(eps, Surd) else eps)


def gamma_epsilon_sandwich(r: int, eps, gamma) -> bool:
    """r*eps <= gamma and gamma^2 <= r."""
    if not (eps > 0 and gamma > 0 and r > 0):
        raise SeshadriError("inputs must be positive")
    g_sq = Surd._signed_sq(gamma)
    return eps * r <= gamma and g_sq <= r


@dataclass(frozen=True)
class GammaResult:
    value: object
    certificate: str
    data: dict = field(default_factory=dict)

    def to_json(self):
        return {"gamma": str(self.value), "certificate": self.certificate,
                "certificate_data": _jsonify(self.data)}


def gamma_exact(tag, r: int | None = None) -> GammaResult:
    """Waldschmidt constant of the points from the cones.

    gamma is the least d/m over uniform effective classes dL - m*sum(E_i),
    equivalently the largest sum(b_i)/a over nef classes aL - sum(b_i E_i).
    When the labels are interchangeable, averaging a minimiser for epsilon
    over all permutations gives gamma = r * epsilon.
    """
    t = _resolve(tag, r)
    if isinstance(t, tuple) or t.symmetric:
        n = t[1] if isinstance(t, tuple) else t.r
        eps = epsilon_exact(t if not isinstance(t, tuple) else "generic", n)
        if eps.value is None:
            raise SeshadriError(f"gamma unknown: epsilon is only bracketed for {n} points")
        return GammaResult(eps.value * n, "symmetric_average", {"epsilon": eps.value})
    if t.kind == "cubic_chain":
        raise UnsupportedConfiguration("gamma is defined for distinct points")
    desc = cones.cone_generators(t)
    if not desc.nef_complete:
        raise SeshadriError(f"nef rays unavailable for {t}")
    best = None
    for h in desc.nef_generators:
        if h.d > 0:
            q = Fraction(h.mult_sum, h.d)
            if best is None or q > best[0]:
                best = (q, h)
    gamma, h = best
    # witness: a uniform effective class with d/m = gamma
    u = t.ctx.uniform(gamma.numerator, gamma.denominator)
    cert = cones.decompose_effective(u, t)
    if cert is None or u.dot(h) != 0:
        raise SeshadriError("gamma witness failed")  # pragma: no cover
    return GammaResult(gamma, "nef_ray", {"H": h, "uniform_effective": u, "decomposition": [[g, k] for g, k in cert]})


# candidate boxes


def au_coordinates(c: DivisorClass):
    """(d, m, k) with c = dL - m*sum(E_i) - k*E_1, or None if not of that shape."""
    m = c.m
    r = len(m)
    if r == 0:
        return (c.d, 0, 0)
    if r == 1:
        return (c.d, m[0], 0)
    rest = m[1:]
    if all(x == rest[0] for x in rest):
        return (c.d, rest[0], m[0] - rest[0])
    return None


def au_class(d, m, k, r: int) -> DivisorClass:
    return DivisorClass(d, [m + k] + [m] * (r - 1))


def almost_uniform_filter(candidates, ctx: LatticeContext | None = None) -> list:
    """Classes with all but at most one multiplicity equal, exception moved to E_1."""
    out = []
    seen = set()
    for c in candidates:
        if ctx is not None:
            ctx.check(c)
        vals = list(c.m)
        if not vals:
            norm = c
        else:
            counts: dict = {}
            for v in vals:
                counts[v] = counts.get(v, 0) + 1
            if len(counts) > 2:
                continue
            if len(counts) == 1:
                norm = c
            else:
                (a, na), (b, nb) = sorted(counts.items(), key=lambda t: (t[1], t[0]))
                if na != 1:
                    continue
                # a is the odd value out (for r=2 the smaller value is taken as exceptional)
                norm = DivisorClass(c.d, [a] + [b] * (len(vals) - 1))
        if norm not in seen:
            seen.add(norm)
            out.append(norm)
    return out


@dataclass(frozen=True)
class CandidateBox:
    F: DivisorClass
    spanning_nef: tuple
    s: int
    s_source: str  # riemann_roch | caller
    almost_uniform: bool
    box: tuple  # every class in the dot-product box
    candidates: tuple  # the box classes with C.F < 0
    cap_classes: tuple = ()
    sides: tuple = ()

    def triples(self, classes=None):
        return [au_coordinates(c) for c in (self.candidates if classes is None else classes)]


def minimal_effective_multiple(f: DivisorClass, limit: int = 1000) -> int:
    for s in range(1, limit + 1):
        if riemann_roch_chi(f * s) >= 1:
            return s
    raise SeshadriError("no multiple with positive Euler characteristic found")


def _solve(rows, rhs):
    """Solve a square system exactly; None if singular."""
    n = len(rows)
    a = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return None
        a[c], a[p] = a[p], a[c]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [a[i][n] / a[i][i] for i in range(n)]


def _rank(rows) -> int:
    a = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    ncols = len(a[0]) if a else 0
    for c in range(ncols):
        p = next((i for i in range(rank, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[rank], a[p] = a[p], a[rank]
        for i in range(len(a)):
            if i != rank and a[i][c] != 0:
                f = a[i][c] / a[rank][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


def _polytope_bbox(planes, dim):
    """Bounding box of {x : w.x >= b for (w, b) in planes}, which must be bounded."""
    lo = [None] * dim
    hi = [None] * dim
    for sub in itertools.combinations(planes, dim):
        x = _solve([w for w, _ in sub], [b for _, b in sub])
        if x is None:
            continue
        if all(sum(wi * xi for wi, xi in zip(w, x)) >= b for w, b in planes):
            for i in range(dim):
                lo[i] = x[i] if lo[i] is None else min(lo[i], x[i])
                hi[i] = x[i] if hi[i] is None else max(hi[i], x[i])
    if lo[0] is None:
        return None
    return [math.ceil(v) for v in lo], [math.floor(v) for v in hi]


def _recession_is_trivial(rows, dim) -> bool:
    """True iff {x : g.x >= 0 for g in rows} is {0}."""
    if _rank(rows) < dim:
        return False
    for sub in itertools.combinations(rows, dim - 1):
        if _rank(sub) < dim - 1:
            continue
        v = cones._nullvector([list(g) for g in sub], dim)
        if v is None:  # pragma: no cover - rank dim-1 leaves a line
            continue
        for ray in (v, [-x for x in v]):
            if all(sum(a * b for a, b in zip(g, ray)) >= 0 for g in rows):
                return False
    return True


def candidate_negative_classes(
    F: DivisorClass,
    spanning_nef=None,
    s: int | None = None,
    ctx: LatticeContext | None = None,
    almost_uniform: bool | None = None,
    cap_classes=(),
    sides=None,
) -> CandidateBox:
    """Every prime C with C.F < 0 satisfies 0 <= C.H <= sF.H for nef H.

    ``spanning_nef`` defaults to L, L - E_1, ..., L - E_r. With
    ``almost_uniform`` the search runs over classes dL - m*sum(E_i) - k*E_1,
    which is enough for general points and a uniform F.

    Two relaxations keep the result a superset of the full box. ``sides``
    gives per class "both", "lower" (only C.H >= 0) or "upper" (only
    C.H <= sF.H). ``cap_classes`` are nef classes that only bound the
    multiplicity coordinates, through the polytope they cut out together
    with the other constraints.

    Classes with C.E_i < 0 are never primes other than E_i, so the box keeps
    only C.E_i >= 0; callers handle the E_i themselves.
    """
    r = F.r
    ctx = ctx or LatticeContext(r)
    ctx.check(F)
    F.require_integral("candidate_negative_classes")
    if F.square() <= 0:
        raise SeshadriError("the candidate box needs F^2 > 0")
    if F.d <= 0:
        raise SeshadriError("the candidate box needs F.L > 0")
    if spanning_nef is None:
        spanning_nef = [ctx.line()] + [ctx.line() - ctx.exceptional(i) for i in range(1, r + 1)]
    spanning_nef = tuple(ctx.check(h) for h in spanning_nef)
    sides = ["both"] * len(spanning_nef) if sides is None else list(sides)
    if len(sides) != len(spanning_nef) or set(sides) - {"both", "lower", "upper"}:
        raise SeshadriError("sides must give 'both', 'lower' or 'upper' for each nef class")
    if s is None:
        s, source = minimal_effective_multiple(F), "riemann_roch"
    else:
        if s < 1:
            raise SeshadriError("s must be positive")
        source = "riemann_roch" if riemann_roch_chi(F * s) >= 1 else "caller"
    uniform = len(set(F.m)) <= 1
    if almost_uniform is None:
        almost_uniform = uniform and r >= 3
    if almost_uniform and not uniform:
        raise SeshadriError("the almost-uniform search needs a uniform F")
    sf = F * s

    if almost_uniform:
        def row(h):  # C.H as a linear form in (d, m, k)
            return (h.d, -sum(h.m), -h.m[0]) if r else (h.d, 0, 0)
        dim, prime_rows = 3, [(0, 1, 0), (0, 1, 1)]
    else:
        def row(h):
            return (h.d,) + tuple(-x for x in h.m)
        dim = r + 1
        prime_rows = [tuple(1 if j == i + 1 else 0 for j in range(dim)) for i in range(r)]

    # (w, lo, hi) meaning lo <= w.x <= hi, None for a dropped side
    cons = []
    for h, side in zip(spanning_nef, sides):
        ub = sf.dot(h)
        cons.append((row(h), 0 if side != "upper" else None, ub if side != "lower" else None))
    caps = [(row(ctx.check(h)), 0, sf.dot(h)) for h in cap_classes]
    planes = [(g, 0) for g in prime_rows]
    for w, lo, hi in cons + caps:
        if lo is not None:
            planes.append((w, lo))
        if hi is not None:
            planes.append((tuple(-x for x in w), -hi))
    if not _recession_is_trivial([w for w, _ in planes], dim):
        raise SeshadriError("the nef classes do not bound the search: the box would be infinite")
    bbox = _polytope_bbox(planes, dim)
    box = []
    if bbox is not None:
        lo, hi = bbox
        for x in _lattice_points(cons, lo, hi, dim, per_point_d=bool(caps)):
            if any(sum(a * b for a, b in zip(g, x)) < 0 for g in prime_rows):
                continue
            if all(_within(w, x, a, b) for w, a, b in cons):
                box.append(au_class(x[0], x[1], x[2], r) if almost_uniform else DivisorClass(x[0], x[1:]))
    box.sort(key=lambda c: (c.d, c.vector))
    cands = tuple(c for c in box if c.dot(F) < 0)
    return CandidateBox(F, spanning_nef, s, source, almost_uniform, tuple(box), cands, tuple(cap_classes), tuple(sides))


def _within(w, x, lo, hi) -> bool:
    v = sum(a * b for a, b in zip(w, x))
    return (lo is None or v >= lo) and (hi is None or v <= hi)


def _lattice_points(cons, lo, hi, dim, per_point_d: bool):
    """Integer points of the bounding box, with d re-derived per point when caps are in play."""
    if not per_point_d:
        yield from (x for x in itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)]) if any(x))
        return
    # caps bound the multiplicities only; d comes from the spanning constraints
    for rest in itertools.product(*[range(a, b + 1) for a, b in zip(lo[1:], hi[1:])]):
        d_lo, d_hi = None, None
        for w, a, b in cons:
            if w[0] == 0:
                continue
            off = sum(c * v for c, v in zip(w[1:], rest))
            bounds = [None if t is None else Fraction(t - off, w[0]) for t in (a, b)]
            if w[0] < 0:
                bounds.reverse()
            if bounds[0] is not None:
                d_lo = math.ceil(bounds[0]) if d_lo is None else max(d_lo, math.ceil(bounds[0]))
            if bounds[1] is not None:
                d_hi = math.floor(bounds[1]) if d_hi is None else min(d_hi, math.floor(bounds[1]))
        if d_lo is None or d_hi is None:
            raise SeshadriError("the spanning classes do not bound the degree")
        for d in range(d_lo, d_hi + 1):
            x = (d,) + rest
            if any(x):
                yield x


# nefness proofs


def default_prime_hints(r: int) -> list:
    """Classes of curves that are prime for general points."""
    ctx = LatticeContext(r)
    if r <= 8:
        return list(cones.enumerate_neg_one_classes(r))
    hints = [ctx.exceptional(i) for i in range(1, r + 1)]
    for pair in itertools.combinations(range(r), 2):
        hints.append(DivisorClass(1, [1 if i in pair else 0 for i in range(r)]))
    for five in itertools.combinations(range(r), 5):
        hints.append(DivisorClass(2, [1 if i in five else 0 for i in range(r)]))
    return hints


def _manifest_non_effective(c: DivisorClass):
    if c.d < 0:
        return f"{c} has negative degree"
    for i, a in enumerate(c.m, 1):
        if a > c.d:
            return f"{c} pairs negatively with the nef class L-E{i}"
    return None


def _simple_points_non_effective(c: DivisorClass):
    pos = [a for a in c.m if a > 0]
    if pos and all(a == 1 for a in pos) and math.comb(c.d + 2, 2) <= len(pos):
        return f"{len(pos)} general simple points impose independent conditions on the {math.comb(c.d + 2, 2)} forms of degree {c.d}"
    return None


def chain_summary(chain) -> str:
    """Text like 'C - 3*(2L-E2-E3) = -L' for a reduction chain."""
    parts, last = [], None
    for step in chain:
        p = step["subtract"]
        if parts and parts[-1][0] == p:
            parts[-1][1] += 1
        else:
            parts.append([p, 1])
        last = step["remainder"]
    terms = " - ".join(f"{k}*({p})" if k > 1 else f"({p})" for p, k in parts)
    return f"C - {terms} = {last}"


class HintTable:
    """Known prime classes, sorted, with a pairing matrix for fast lookups."""

    def __init__(self, hints):
        self.hints = sorted(set(hints), key=lambda h: h.vector)
        rows = [(h.d,) + tuple(-x for x in h.m) for h in self.hints]
        self.gram = np.array(rows, dtype=np.int64).reshape(len(rows), -1)

    def most_negative(self, c: DivisorClass):
        """The hint meeting c most negatively (ties: smallest vector), or None."""
        if not self.hints:
            return None
        vals = self.gram @ np.array(c.vector, dtype=np.int64)
        i = int(np.argmin(vals))
        return self.hints[i] if vals[i] < 0 else None


def reduce_by_primes(c: DivisorClass, hints, max_steps: int = 10_000):
    """Subtract forced prime components until the class is visibly not effective.

    Returns (verdict, chain, reason) with verdict 'non_effective',
    'not_prime' or None.
    """
    table = hints if isinstance(hints, HintTable) else HintTable(hints)
    chain = []
    start = c
    for _ in range(max_steps):
        reason = _manifest_non_effective(c) or (None if table.most_negative(c) else _simple_points_non_effective(c))
        if reason:
            if chain:
                reason = f"{chain_summary(chain)} is not effective: {reason}"
            return "non_effective", chain, reason
        p = table.most_negative(c)
        if p is None:
            break
        chain.append({"subtract": p, "pairing": c.dot(p), "remainder": c - p})
        c = c - p
    if chain and chain[0]["subtract"] != start:
        p = chain[0]["subtract"]
        return "not_prime", chain[:1], f"meets the prime {p} negatively and differs from it"
    return None, chain, None


def interpolation_trials(c: DivisorClass, trials: int = 3, seed: int = 0, p: int = DEFAULT_PRIME):
    """Sections of c at random points of P^2(F_p), one count per trial."""
    fld = PrimeField(p)
    rng = random.Random(seed)
    mults = [max(a, 0) for a in c.m]
    dims = []
    for _ in range(trials):
        pts = []
        while len(pts) < c.r:
            v = (1, rng.randrange(p), rng.randrange(p))
            if v not in pts:
                pts.append(v)
        dims.append(class_sections(c.d, mults, pts, fld))
    return dims


@dataclass
class NefProof:
    F: DivisorClass
    status: str  # nef | not_nef | unresolved
    box: CandidateBox | None
    log: list
    post_filter: list
    unresolved: list
    witness: DivisorClass | None = None

    def to_json(self) -> dict:
        out = {
            "F": self.F.to_json(),
            "status": self.status,
            "log": _jsonify(self.log),
            "post_filter": [c.to_json() for c in self.post_filter],
            "unresolved": [c.to_json() for c in self.unresolved],
        }
        if self.box is not None:
            out["s"] = self.box.s
            out["s_source"] = self.box.s_source
            out["spanning_nef"] = [h.to_json() for h in self.box.spanning_nef]
            out["box_size"] = len(self.box.box)
            out["sides"] = list(self.box.sides)
            out["cap_classes"] = [h.to_json() for h in self.box.cap_classes]
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


def prove_nef(
    F: DivisorClass,
    r: int | None = None,
    hints=None,
    spanning_nef=None,
    s: int | None = None,
    cap_classes=(),
    sides=None,
    almost_uniform: bool | None = None,
    trials: int = 3,
    seed: int = 0,
    p: int = DEFAULT_PRIME,
) -> NefProof:
    """Try to show F is nef on the blow-up at r general points.

    Each box class is ruled out by, in order: (i) F.C >= 0; (ii) arithmetic
    genus below zero; (iii) subtracting forced prime components down to a
    visibly non-effective class; (iv) full interpolation rank at random
    points of P^2(F_p) in every trial. One full-rank trial already proves
    non-effectivity for general points by semicontinuity; we ask for all.
    """
    r = F.r if r is None else r
    ctx = LatticeContext(r)
    ctx.check(F)
    hints = default_prime_hints(r) if hints is None else list(hints)
    table = HintTable(hints)
    log: list = []
    for ph in hints:
        if F.dot(ph) < 0:
            log.append({"class": ph, "step": "precheck", "reason": f"F meets the prime {ph} negatively"})
            return NefProof(F, "not_nef", None, log, [], [], ph)
    box = candidate_negative_classes(F, spanning_nef, s, ctx, almost_uniform, cap_classes, sides)
    k_cls = ctx.canonical()
    post = []
    for c in box.box:
        entry = {"class": c}
        if box.almost_uniform:
            entry["dmk"] = list(au_coordinates(c))
        fc = F.dot(c)
        if fc >= 0:
            entry.update(step="i", reason=f"F.C = {fc} >= 0")
            log.append(entry)
            continue
        adj = c.square() + c.dot(k_cls)
        if adj < -2:
            entry.update(step="ii", reason=f"C^2 + C.K = {adj} < -2")
            # cheap corroboration: record a reduction chain too when one exists
            verdict, chain, why = reduce_by_primes(c, table)
            if verdict == "non_effective" and chain:
                entry["also"] = {"step": "iii", "reason": why, "chain": chain}
            log.append(entry)
            continue
        post.append((c, entry))
    unresolved = []
    for c, entry in post:
        verdict, chain, reason = reduce_by_primes(c, table)
        if verdict is not None:
            entry.update(step="iii", reason=reason, chain=chain)
            log.append(entry)
            continue
        dims = interpolation_trials(c, trials, seed, p)
        entry["interpolation"] = dims
        if all(x == 0 for x in dims):
            entry.update(step="iv", reason=f"no sections at random points in {trials} trials")
        else:
            entry.update(step="unresolved", reason=f"section counts {dims}")
            unresolved.append(c)
        log.append(entry)
    status = "nef" if not unresolved else "unresolved"
    return NefProof(F, status, box, log, [c for c, _ in post], unresolved)


# unloading


def epsilon_lower_unloading(n: int, search_bound: int = 10) -> SeshadriResult:
    """Best lower bound over pairs (d, r) with r <= n.

    If r^2 < d^2 n the bound is r/(nd); if r^2 > d^2 n it is d/r.
    Ties go to the smaller d, then the first kind, then the smaller r.
    """
    if n < 1:
        raise SeshadriError("n must be positive")
    best = None
    for d in range(1, search_bound + 1):
        for r in range(1, n + 1):
            if r * r < d * d * n:
                cand = (Fraction(r, n * d), "r2_lt_d2n")
            elif r * r > d * d * n:
                cand = (Fraction(d, r), "r2_gt_d2n")
            else:
                continue
            key = (cand[0], -d, cand[1] == "r2_lt_d2n", -r)
            if best is None or key > best[0]:
                best = (key, cand[0], d, r, cand[1])
    _, val, d, r, kind = best
    return SeshadriResult(None, val, inverse_sqrt(n), "unloading", {"d": d, "r": r, "n": n, "kind": kind})


def ampleness_evidence(A: DivisorClass, nef_uniform: DivisorClass, degree_bound: int = 30) -> dict:
    """Evidence that A is ample from a nef uniform class D.

    If kA = D + jL with k, j > 0, then A.C > 0 for every prime C: equality
    would need D.C = L.C = 0, forcing C = E_i, and A.E_i > 0. We also list
    almost-uniform prime-shaped classes with D.C >= 0 up to the degree bound
    and check A.C > 0 on each.
    """
    r = A.r
    if len(set(A.m)) > 1 or len(set(nef_uniform.m)) > 1:
        raise SeshadriError("ampleness evidence expects uniform classes")
    a_d, a_m = A.d, A.m[0]
    n_d, n_m = nef_uniform.d, nef_uniform.m[0]
    # k * (a_d, a_m) = (n_d + j, n_m)
    k = Fraction(n_m, a_m)
    j = k * a_d - n_d
    split_ok = k > 0 and j > 0
    checked, worst = 0, None
    for d in range(1, degree_bound + 1):
        for m in range(0, d + 1):
            for kk in range(-m, d - m + 1):
                c = au_class(d, m, kk, r)
                if nef_uniform.dot(c) < 0:
                    continue
                if c.square() + c.dot(LatticeContext(r).canonical()) < -2:
                    continue
                checked += 1
                v = A.dot(c)
                if worst is None or v < worst[0]:
                    worst = (v, c)
    exc = min(A.dot(LatticeContext(r).exceptional(i)) for i in range(1, r + 1))
    return {
        "A": A, "nef_class": nef_uniform, "k": k, "j": j, "split_ok": split_ok,
        "A_squared": A.square(), "A_dot_E": exc, "candidates_checked": checked,
        "min_pairing": None if worst is None else worst[0],
        "min_pairing_class": None if worst is None else worst[1],
        "ample": split_ok and exc > 0 and A.square() > 0 and (worst is None or worst[0] > 0),
    }


# abnormal-curve search


@dataclass
class NagataSearch:
    r: int
    degree_bound: int
    survivors: list
    examined: int
    short_circuit: str | None = None
    log: list = field(default_factory=list)

    def to_json(self):
        return {"r": self.r, "degree_bound": self.degree_bound,
                "survivors": [c.to_json() for c in self.survivors], "examined": self.examined,
                "short_circuit": self.short_circuit, "log": _jsonify(self.log)}


def nagata_search(r: int, degree_bound: int, trials: int = 3, seed: int = 0, p: int = DEFAULT_PRIME) -> NagataSearch:
    """Abnormal almost-uniform classes that survive genus and interpolation filters."""
    if r <= 9:
        raise SeshadriError("the search is for r > 9")
    if _is_square(r):
        return NagataSearch(r, degree_bound, [], 0, "nagata_theorem")
    ctx = LatticeContext(r)
    kc = ctx.canonical()
    survivors, log, examined = [], [], 0
    for d in range(1, degree_bound + 1):
        for m in range(0, d + 1):
            for k in range(-m, d - m + 1):
                total = r * m + k
                if total <= 0 or d * d * r >= total * total:
                    continue
                c = au_class(d, m, k, r)
                examined += 1
                if c.square() + c.dot(kc) < -2:
                    continue
                dims = interpolation_trials(c, trials, seed, p)
                if all(x == 0 for x in dims):
                    log.append({"class": c, "dmk": [d, m, k], "step": "iv", "interpolation": dims})
                    continue
                log.append({"class": c, "dmk": [d, m, k], "step": "survivor", "interpolation": dims})
                survivors.append(c)
    return NagataSearch(r, degree_bound, survivors, examined, None, log)
