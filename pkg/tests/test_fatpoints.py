import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plane_blowups import fatpoints as fp
from plane_blowups.fatpoints import FatPointError, FatPointScheme
from plane_blowups.lattice import DivisorClass

THREE = fp.coordinate_points(2, 3)
ONE = fp.coordinate_points(2, 1)
FOUR_CONFIG = FatPointScheme.reduced([(1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1)])
COLLINEAR = FatPointScheme.reduced([(1, 0, 0), (0, 1, 0), (1, 1, 0), (1, 2, 0)])


def alpha_law(m):
    s, i = divmod(m, 2)
    return 3 * s + 2 * i


def test_monomial_order():
    assert fp.monomials(2, 3) == ((2, 0, 0), (1, 1, 0), (0, 2, 0), (1, 0, 1), (0, 1, 1), (0, 0, 2))
    assert len(fp.monomials(5, 3)) == fp.num_monomials(5, 2) == 21


def test_three_points_components():
    assert fp.symbolic_component(THREE, 1, 1).dim == 0
    assert fp.symbolic_component(THREE, 2, 3).dim == 1
    assert fp.alpha_symbolic(THREE, 1) == 2
    assert fp.regularity(THREE) == 2
    assert [fp.hilbert_function(THREE, t) for t in range(4)] == [1, 3, 3, 3]


@pytest.mark.parametrize("m", range(1, 10))
def test_alpha_law(m):
    assert fp.alpha_symbolic(THREE, m) == alpha_law(m)


@pytest.mark.parametrize("n,m", [(2, 1), (2, 3), (3, 2), (1, 4)])
def test_single_point_component(n, m):
    z = fp.coordinate_points(n, 1)
    assert fp.symbolic_component(z, m, m).dim == math.comb(m + n, n) - math.comb(m + n - 1, n)
    assert fp.alpha_symbolic(z, m) == m
    assert fp.regularity(z) == 1


def test_random_points():
    z5 = fp.random_points(5, seed=1)
    assert fp.alpha_symbolic(z5, 1) == 2
    z6 = fp.random_points(6, seed=2)
    assert fp.alpha_symbolic(z6, 1) == fp.regularity(z6) == 3


def test_power_components():
    assert fp.power_component(ONE, 2, 2).dim == 3
    for t in range(0, 4):
        assert fp.power_component(THREE, 2, t).dim == 0
    # I is generated by xy, xz, yz; their six products are six distinct quartic monomials
    products = {tuple(a + b for a, b in zip(u, v))
                for u in [(1, 1, 0), (1, 0, 1), (0, 1, 1)] for v in [(1, 1, 0), (1, 0, 1), (0, 1, 1)]}
    assert len(products) == 6
    assert fp.power_component(THREE, 2, 4).dim == 6


@pytest.mark.parametrize("z", [THREE, FOUR_CONFIG, fp.random_points(4, seed=3)], ids=["three", "four", "random4"])
def test_power_alpha_is_multiplicative(z):
    a = fp.alpha_symbolic(z, 1)
    for r in (1, 2, 3):
        assert fp.power_component(z, r, r * a - 1).dim == 0
        assert fp.power_component(z, r, r * a).dim > 0


def test_generator_range_is_stable():
    for z in (THREE, FOUR_CONFIG, fp.random_points(5, seed=4)):
        for t in range(0, 9):
            a = fp.power_component(z, 2, t)
            b = fp.power_component(z, 2, t, extra_generator_degrees=1)
            assert a.rows == b.rows


def test_ordinary_power_inside_symbolic_iff_r_at_least_m():
    for r in range(1, 4):
        for m in range(1, 4):
            ok = all(fp.symbolic_component(THREE, m, t).contains(fp.power_component(THREE, r, t))
                     for t in range(0, 2 * r + 3))
            assert ok == (r >= m)


@pytest.mark.parametrize("r", range(1, 6))
def test_containment_law_three_points(r):
    for m in range(r, 9):
        res = fp.contains_symbolic_in_power(THREE, m, r)
        assert res.contained == (3 * m >= 4 * r - 1)
        bh = fp.bh_criteria(THREE, m, r)
        if bh.verdict == "fails_by_alpha":
            assert not res.contained
        if bh.verdict == "holds_by_reg":
            assert res.contained


def test_containment_examples():
    assert fp.contains_symbolic_in_power(THREE, 3, 2).contained
    res = fp.contains_symbolic_in_power(THREE, 2, 2)
    assert not res.contained and res.failing_degree == 3
    assert fp.bh_criteria(THREE, 2, 2).verdict == "fails_by_alpha"
    assert fp.bh_criteria(THREE, 4, 3).verdict == "holds_by_reg"
    assert not fp.contains_symbolic_in_power(THREE, 1, 2).contained
    for z in (THREE, FOUR_CONFIG, COLLINEAR, fp.random_points(5, seed=5)):
        assert fp.contains_symbolic_in_power(z, 4, 2).contained


def test_bh_never_contradicts_on_four_points():
    for z in (FOUR_CONFIG, fp.random_points(4, seed=6)):
        for r in range(1, 4):
            for m in range(1, 6):
                res = fp.contains_symbolic_in_power(z, m, r).contained
                v = fp.bh_criteria(z, m, r).verdict
                assert not (v == "fails_by_alpha" and res)
                assert not (v == "holds_by_reg" and not res)


def test_alpha_equals_reg_never_indeterminate():
    z = fp.random_points(6, seed=7)
    for r in range(1, 4):
        for m in range(1, 7):
            assert fp.bh_criteria(z, m, r).verdict != "indeterminate"


def test_waldschmidt_three_points():
    est = fp.waldschmidt_estimate(THREE, 6, epsilon=Fraction(1, 2))
    assert [q for _, _, q in est.sequence][:4] == [2, Fraction(3, 2), Fraction(5, 3), Fraction(3, 2)]
    assert est.pinned and est.value == Fraction(3, 2)
    assert "r*epsilon" in est.lower_sources


def test_waldschmidt_other_configs():
    est = fp.waldschmidt_estimate(COLLINEAR, 5)
    assert [d for _, d, _ in est.sequence] == [1, 2, 3, 4, 5]
    assert est.value == 1
    est = fp.waldschmidt_estimate(FOUR_CONFIG, 6, nef_certificate=DivisorClass(3, [1, 1, 1, 2]))
    assert est.value == Fraction(5, 3)


def test_resurgence():
    est = fp.waldschmidt_estimate(THREE, 6, epsilon=Fraction(1, 2))
    assert fp.resurgence_bounds(THREE, (est.lower, est.upper)) == (Fraction(4, 3), Fraction(4, 3))
    assert fp.resurgence_bounds(THREE) == (Fraction(4, 3), 2)
    assert fp.resurgence_bounds(ONE) == (1, 1)
    z = fp.random_points(6, seed=8)
    lo, hi = fp.resurgence_bounds(z)
    assert lo <= hi and lo >= 1


def test_frobenius():
    assert fp.frobenius_containment_check(fp.random_points(4, field=2, seed=1), 2)
    assert fp.frobenius_containment_check(fp.coordinate_points(2, 3, 3), 3)
    assert fp.frobenius_containment_check(fp.random_points(3, field=5, seed=1), 1)
    with pytest.raises(FatPointError):
        fp.frobenius_containment_check(THREE, 2)
    with pytest.raises(FatPointError):
        fp.frobenius_containment_check(fp.random_points(3, field=3, seed=1), 2)


def test_small_characteristic_matches_rationals():
    # with binomial-coefficient conditions the dimension is right even when t >= p
    for p in (2, 3):
        z = fp.coordinate_points(2, 3, p)
        for m in range(1, 5):
            for t in range(0, 9):
                assert fp.component_dim(z, m, t) == fp.component_dim(THREE, m, t)


def test_canonical_bases_are_order_independent():
    pts = [(1, 2, 3), (0, 1, 5), (1, 0, 7)]
    a = FatPointScheme.reduced(pts)
    b = FatPointScheme.reduced(pts[::-1])
    for t in range(2, 5):
        assert fp.symbolic_component(a, 2, t).encoded_rows() == fp.symbolic_component(b, 2, t).encoded_rows()


def test_scheme_validation_and_json(tmp_path):
    with pytest.raises(FatPointError):
        FatPointScheme.reduced([(1, 0, 0), (2, 0, 0)])
    with pytest.raises(FatPointError):
        FatPointScheme.reduced([(0, 0, 0)])
    with pytest.raises(ValueError):
        FatPointScheme.reduced([(0.5, 1, 0)])
    z = FatPointScheme(2, ((1, Fraction(1, 2), 0), (0, 1, 1)), (2, 1))
    path = tmp_path / "z.json"
    path.write_text(__import__("json").dumps(z.to_json()))
    assert fp.load_config(path) == z
    assert z.degree == 3 + 1
    zp = fp.random_points(3, seed=0)
    assert FatPointScheme.from_json(zp.to_json()) == zp


def small_schemes():
    coords = st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)).filter(any)
    return st.lists(coords, min_size=1, max_size=4).map(_dedupe).filter(bool).map(FatPointScheme.reduced)


def _dedupe(pts):
    seen, out = set(), []
    for p in pts:
        lead = next(x for x in p if x)
        key = tuple(Fraction(x, lead) for x in p)
        if key not in seen:
            seen.add(key)
            out.append(p)
    return out


@settings(max_examples=25)
@given(small_schemes())
def test_hilbert_function_properties(z):
    hf = [fp.hilbert_function(z, t) for t in range(0, fp.regularity(z) + 3)]
    assert all(a <= b for a, b in zip(hf, hf[1:]))
    assert hf[-1] == z.degree


@settings(max_examples=20)
@given(small_schemes())
def test_waldschmidt_sequence_properties(z):
    d = {m: fp.alpha_symbolic(z, m) for m in range(1, 7)}
    for m, v in d.items():
        assert v >= m  # d_m / m >= 1
    for a in (1, 2, 3):
        for b in (1, 2):
            if a * b <= 6:
                assert d[a * b] <= a * d[b]
    est = fp.waldschmidt_estimate(z, 6)
    assert all(q >= est.lower for _, _, q in est.sequence)
