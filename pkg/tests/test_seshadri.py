import numpy as np
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from plane_blowups import cones
from plane_blowups.cones import ConfigurationTag, UnsupportedConfiguration
from plane_blowups.lattice import DivisorClass, LatticeContext
from plane_blowups.seshadri import (
    SeshadriError,
    almost_uniform_filter,
    ampleness_evidence,
    au_coordinates,
    candidate_negative_classes,
    check_lambda_epsilon_inequality,
    epsilon_exact,
    epsilon_lower_unloading,
    gamma_epsilon_sandwich,
    gamma_exact,
    lambda_L,
    nagata_search,
    prove_nef,
)
from plane_blowups.surds import Surd

EXACT_TAGS = (
    [("collinear", r) for r in range(1, 11)]
    + [("conic", r) for r in range(3, 11)]
    + [("generic", r) for r in range(1, 10)]
    + [("three_collinear_plus_one", 4)]
)


@pytest.mark.parametrize("r", range(2, 11))
def test_collinear_table(r):
    assert epsilon_exact("collinear", r).value == Fraction(1, r)
    assert lambda_L("collinear", r) == 1 - r
    assert check_lambda_epsilon_inequality(1 - r, Fraction(1, r))
    assert 1 - r == 1 - r * 1  # equality case: 1 - 1/eps


@pytest.mark.parametrize("r,eps", [(1, 1), (2, Fraction(1, 2)), (3, Fraction(1, 2)), (4, Fraction(1, 2)),
                                   (5, Fraction(2, 5)), (6, Fraction(2, 5)), (7, Fraction(3, 8)),
                                   (8, Fraction(6, 17)), (9, Fraction(1, 3))])
def test_generic_table(r, eps):
    assert epsilon_exact("generic", r).value == eps


def test_conic_ten_and_four_point_config():
    res = epsilon_exact("conic", 10)
    assert res.value == Fraction(1, 5)
    assert lambda_L("conic", 10) == Fraction(-3, 2)
    t = ConfigurationTag("three_collinear_plus_one", 4)
    assert epsilon_exact(t).value == Fraction(1, 3)
    assert gamma_exact(t).value == Fraction(5, 3)
    assert lambda_L(t) == -2
    assert check_lambda_epsilon_inequality(-2, Fraction(1, 3))


def test_generic_eight_certificate():
    res = epsilon_exact("generic", 8)
    c = res.data["C"]
    assert sorted(c.m) == [2] * 7 + [3] and c.d == 6
    assert res.data["F"].dot(c) == 0


def test_square_and_nonsquare_generic():
    res = epsilon_exact("generic", 16)
    assert res.value == Fraction(1, 4) and res.certificate == "nagata_theorem"
    res = epsilon_exact("generic", 10)
    assert res.value is None
    assert res.upper == Surd(1, 1, 10)
    assert res.lower ** 2 * 10 <= 1
    res = epsilon_exact("cubic_chain", 10)
    assert res.value is None and res.lower == Fraction(1, 10)


@pytest.mark.parametrize("kind,r", EXACT_TAGS)
def test_certificates_and_bounds(kind, r):
    res = epsilon_exact(kind, r)
    eps = res.value
    assert eps >= Fraction(1, r)
    assert Surd._signed_sq(eps) * r <= 1
    if res.certificate == "orthogonal_pair":
        f, c = res.data["F"], res.data["C"]
        assert f.dot(c) == 0
        assert len(set(f.m)) == 1 and Fraction(f.m[0], f.d) == eps
        if r < 9 or kind != "generic":
            tag = cones.parse_tag(kind, r)
            assert cones.is_nef(f, tag)
            assert cones.decompose_effective(c, tag) is not None


@pytest.mark.parametrize("kind,r", [t for t in EXACT_TAGS if t[0] != "generic" or t[1] < 9])
def test_sandwich_and_lambda(kind, r):
    eps = epsilon_exact(kind, r).value
    gamma = gamma_exact(kind, r).value
    assert gamma_epsilon_sandwich(r, eps, gamma)
    if kind != "generic":
        assert check_lambda_epsilon_inequality(lambda_L(kind, r), eps)


def test_gamma_values():
    assert gamma_exact("collinear", 5).value == 1
    assert gamma_exact("generic", 2).value == 1
    assert gamma_epsilon_sandwich(4, Fraction(1, 3), Fraction(5, 3))
    assert not gamma_epsilon_sandwich(4, Fraction(1, 2), Fraction(5, 3))
    assert not gamma_epsilon_sandwich(2, Fraction(1, 2), Fraction(3, 2))
    with pytest.raises(UnsupportedConfiguration):
        gamma_exact("cubic_chain", 5)


def test_lambda_inequality_cases():
    assert check_lambda_epsilon_inequality(Fraction(-3, 2), Fraction(1, 5))
    assert not check_lambda_epsilon_inequality(-5, Fraction(1, 5))
    assert check_lambda_epsilon_inequality(Fraction(-2), Surd(1, 1, 10))
    with pytest.raises(SeshadriError):
        check_lambda_epsilon_inequality(0, 0)


# candidate boxes


def six_point_option():
    """H0 = 3L - sum E bounds C.H0 from above, H1 = H0 - E1 from below, L caps m."""
    ctx = LatticeContext(6)
    h0 = ctx.uniform(3, 1)
    return ctx, {"spanning_nef": [h0, h0 - ctx.exceptional(1)], "sides": ["upper", "lower"],
                 "cap_classes": [ctx.line()]}


def test_six_point_branches():
    ctx, hs = six_point_option()
    box = candidate_negative_classes(ctx.uniform(5, 2), **hs)
    assert box.s == 1 and box.s_source == "riemann_roch"
    trip = [au_coordinates(c) for c in box.box]
    assert sorted((d, m) for d, m, k in trip if k == 0 and m > 0) == [(3, 1), (5, 2), (7, 3)]
    assert sorted(t for t in trip if t[2] > 0) == [(1, 0, 1), (2, 0, 3), (3, 1, 1)]
    neg = sorted(au_coordinates(c) for c in box.candidates if au_coordinates(c)[2] < 0)
    assert neg == [(4, 2, -1), (5, 3, -3), (6, 3, -2)]


def test_box_trivial_and_errors():
    assert candidate_negative_classes(DivisorClass(1)).candidates == ()
    with pytest.raises(SeshadriError):
        candidate_negative_classes(LatticeContext(5).uniform(2, 1))
    ctx = LatticeContext(6)
    with pytest.raises(SeshadriError):
        candidate_negative_classes(ctx.uniform(5, 2), [ctx.uniform(3, 1)])
    h0 = ctx.uniform(3, 1)
    with pytest.raises(SeshadriError):
        candidate_negative_classes(ctx.uniform(5, 2), [h0, h0 - ctx.exceptional(1)], sides=["upper", "lower"])


def brute_box(f, hs, s):
    """All integral C with 0 <= C.H <= sF.H, C.E_i >= 0, C != 0, by a vectorised scan.

    The scan covers 0 <= d, m_i <= 2 sF.L + 2, which contains the box since L
    is among the H and m_i <= d follows from L - E_i.
    """
    r = f.r
    bound = 2 * s * f.d + 2
    axes = np.meshgrid(*[np.arange(bound + 1)] * (r + 1), indexing="ij")
    pts = np.stack([a.ravel() for a in axes], axis=1)
    keep = pts.any(axis=1)
    for h in hs:
        w = np.array([h.d] + [-x for x in h.m])
        v = pts @ w
        keep &= (v >= 0) & (v <= (f * s).dot(h))
    out = [DivisorClass.from_vector(row.tolist()) for row in pts[keep]]
    return sorted(out, key=lambda c: (c.d, c.vector))


@pytest.mark.parametrize("vec", [(3, 1, 1), (4, 1, 1, 1), (5, 2, 2, 1), (4, 1, 1, 1, 1), (5, 2, 1, 1, 1)])
def test_box_matches_brute_force(vec):
    f = DivisorClass.from_vector(vec)
    ctx = LatticeContext(f.r)
    box = candidate_negative_classes(f, ctx=ctx, almost_uniform=False)
    hs = box.spanning_nef
    assert list(box.box) == brute_box(f, hs, box.s)


@pytest.mark.parametrize("r,d,m", [(3, 3, 1), (4, 4, 1), (4, 7, 3), (5, 5, 2)])
def test_almost_uniform_mode_equals_filtered_full_box(r, d, m):
    f = LatticeContext(r).uniform(d, m)
    full = candidate_negative_classes(f, almost_uniform=False)
    au = candidate_negative_classes(f, almost_uniform=True)
    assert set(au.box) == set(almost_uniform_filter(full.box))


def test_almost_uniform_filter_examples():
    assert almost_uniform_filter([DivisorClass(5, [2, 2, 2])]) == [DivisorClass(5, [2, 2, 2])]
    assert almost_uniform_filter([DivisorClass(5, [2, 3, 2])]) == [DivisorClass(5, [3, 2, 2])]
    assert au_coordinates(DivisorClass(5, [3, 2, 2])) == (5, 2, 1)
    assert almost_uniform_filter([DivisorClass(5, [3, 2, 1])]) == []


# nefness proofs


def test_six_points_proof_with_paper_nef_classes():
    ctx, hs = six_point_option()
    proof = prove_nef(ctx.uniform(5, 2), **hs)
    assert proof.status == "nef"
    by = {tuple(e["dmk"]): e for e in proof.log}
    assert by[(7, 3, 0)]["step"] == "ii" and "-8" in by[(7, 3, 0)]["reason"]
    e = by[(5, 3, -3)]["also"]
    conic = DivisorClass(2, [0, 1, 1, 1, 1, 1])
    assert [s["subtract"] for s in e["chain"]] == [conic] * 3
    assert e["chain"][-1]["remainder"] == -ctx.line()
    assert "C - 3*(2L-E2-E3-E4-E5-E6) = -L" in e["reason"]
    for t in [(6, 3, -2), (4, 2, -1)]:
        assert by[t]["also"]["step"] == "iii"


def test_six_points_default_proof():
    proof = prove_nef(LatticeContext(6).uniform(5, 2))
    assert proof.status == "nef" and not proof.unresolved


def test_twelve_points():
    ctx = LatticeContext(12)
    h0 = ctx.uniform(4, 1)
    hs = [h0] + [h0 - ctx.exceptional(i) for i in range(1, 13)]
    f = ctx.uniform(7, 2)
    proof = prove_nef(f, spanning_nef=hs, s=1)
    assert proof.box.s_source == "caller"
    assert sorted(au_coordinates(c) for c in proof.post_filter) == [(3, 1, -1), (7, 2, 1), (10, 3, 0)]
    steps = {tuple(e["dmk"]): e["step"] for e in proof.log}
    assert steps[(3, 1, -1)] == "iii"
    assert steps[(7, 2, 1)] == steps[(10, 3, 0)] == "iv"
    assert proof.status == "nef"
    certified = prove_nef(f, spanning_nef=hs)
    assert certified.box.s == 3 and certified.box.s_source == "riemann_roch"
    assert certified.status == "nef"


def test_conic_through_five_is_not_nef():
    f = LatticeContext(5).uniform(2, 1)
    proof = prove_nef(f)
    assert proof.status == "not_nef" and proof.witness == f


def test_log_is_deterministic():
    f = LatticeContext(6).uniform(5, 2)
    assert prove_nef(f, seed=4).to_json() == prove_nef(f, seed=4).to_json()


def test_unresolved_when_curve_exists():
    # 3L - E1..E8 has sections; with hints removed nothing else rules it out
    ctx = LatticeContext(8)
    f = ctx.uniform(3, 1) + ctx.line() * 3
    proof = prove_nef(f, hints=[ctx.exceptional(i) for i in range(1, 9)])
    assert proof.status in ("nef", "unresolved")
    for c in proof.unresolved:
        assert f.dot(c) < 0


# unloading, ampleness, abnormal curves


def test_unloading_examples():
    res = epsilon_lower_unloading(6)
    assert res.lower == Fraction(2, 5)
    assert (res.data["d"], res.data["r"], res.data["kind"]) == (2, 5, "r2_gt_d2n")
    res = epsilon_lower_unloading(21)
    assert res.lower >= Fraction(9, 42)
    assert (res.data["d"], res.data["r"]) == (2, 9)
    assert epsilon_lower_unloading(4).lower == Fraction(3, 8) < Fraction(1, 2)


@given(st.integers(1, 60))
def test_unloading_below_inverse_root(n):
    res = epsilon_lower_unloading(n)
    assert res.lower ** 2 * n <= 1


def test_ampleness_evidence_twenty_one_points():
    ctx = LatticeContext(21)
    low = epsilon_lower_unloading(21).lower
    nef = ctx.uniform(low.denominator * 3, low.numerator * 3)
    assert nef == ctx.uniform(42, 9)
    ev = ampleness_evidence(ctx.uniform(5, 1), nef, 30)
    assert ev["ample"] and ev["k"] == 9 and ev["j"] == 3
    assert ev["candidates_checked"] > 0 and ev["min_pairing"] > 0


def test_nagata_search():
    res = nagata_search(10, 20)
    assert res.survivors == [] and res.examined > 0
    assert nagata_search(16, 5).short_circuit == "nagata_theorem"
    with pytest.raises(SeshadriError):
        nagata_search(9, 5)
