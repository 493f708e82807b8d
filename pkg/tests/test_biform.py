"""Exact polynomial containers: arithmetic identities, JSON, evaluation.

Expected values are hand-expanded products of small polynomials, so every
assertion is checkable by eye.
"""

from fractions import Fraction

import pytest

from minsos.biform import (
    Biform,
    BinaryForm,
    TermPoly,
    bihomogenize,
    binary_gcd,
    biform_to_termpoly,
)
from minsos.errors import DegreeMismatch


# ---------------------------------------------------------------- BinaryForm


def test_binary_mul_difference_of_squares():
    # (s + t)(s - t) = s^2 - t^2
    f = BinaryForm([1, 1], 1) * BinaryForm([-1, 1], 1)
    assert f.coeffs == [-1, 0, 1]
    assert f.deg == 2


def test_binary_add_sub_neg_roundtrip():
    f = BinaryForm([1, 2, 3], 2)
    g = BinaryForm([5, -1, 0], 2)
    assert (f + g) - g == f
    assert -(-f) == f
    assert (f - f).is_zero()


def test_binary_eval_exact_and_float():
    # f(s, t) = s^2 + 5 s t + 4 t^2 at (2, 3): 4 + 30 + 36 = 70
    f = BinaryForm([4, 5, 1], 2)
    assert f.eval(2, 3) == 70
    assert f.eval(Fraction(1, 2), 1) == Fraction(1, 4) + Fraction(5, 2) + 4
    assert f.eval(2.0, 3.0) == pytest.approx(70.0)


def test_binary_diff_s():
    # d/ds (s^3 + 2 s t^2) = 3 s^2 + 2 t^2
    f = BinaryForm([0, 2, 0, 1], 3)
    assert f.diff_s().coeffs == [2, 0, 3]


def test_binary_t_valuation_and_divide():
    # s^2 t^2 + s t^3 = t^2 (s^2 + s t)
    f = BinaryForm([0, 1, 1, 0, 0], 4)
    assert f.t_valuation() == 2
    g = f.divide_t_power(2)
    assert g.deg == 2 and g.coeffs == [0, 1, 1]


def test_binary_scale_and_max_abs_coeff():
    f = BinaryForm([1, -7, 2], 2)
    assert f.max_abs_coeff() == 7
    assert f.scale(Fraction(1, 2)).coeffs == [Fraction(1, 2), Fraction(-7, 2), 1]


def test_binary_degree_mismatch_raises():
    with pytest.raises(DegreeMismatch):
        BinaryForm([1], 0) + BinaryForm([1, 1], 1)


def test_binary_json_roundtrip_exact():
    f = BinaryForm([Fraction(1, 3), -2, 1], 2)
    g = BinaryForm.from_json(f.to_json())
    assert g == f and g.field == f.field


def test_binary_json_roundtrip_complex():
    f = BinaryForm([1 + 2j, 0, -1j], 2)
    g = BinaryForm.from_json(f.to_json())
    assert g.field == f.field
    assert all(abs(a - b) == 0 for a, b in zip(g.coeffs, f.coeffs))


def test_binary_gcd_shared_factor():
    # gcd((s+t)(s-t), (s+t)(s+2t)) is proportional to s+t
    common = BinaryForm([1, 1], 1)
    f = common * BinaryForm([-1, 1], 1)
    g = common * BinaryForm([2, 1], 1)
    h = binary_gcd(f, g)
    assert h.deg == 1
    # proportionality: h(1, -1) = 0 identifies the root of s + t
    assert h.eval(-1, 1) == 0 and h.eval(1, 1) != 0


def test_binary_to_complex():
    # coeffs are indexed by s-power: t + 2s evaluates to 7 at (3, 1)
    f = BinaryForm([1, 2], 1)
    fc = f.to_complex()
    assert all(isinstance(c, complex) for c in fc.coeffs)
    assert fc.eval(3, 1) == 7 + 0j


# ------------------------------------------------------------------- Biform


def _square(deg_st, deg_xy, terms):
    f = Biform(deg_st, deg_xy, terms)
    return f * f


def test_biform_product_bidegrees_add():
    f = Biform(1, 1, {(0, 1, 0, 1): 1})  # t y
    g = Biform(1, 1, {(1, 0, 1, 0): 1})  # s x
    fg = f * g
    assert fg.bidegree == (2, 2)
    assert fg.coeff((1, 1, 1, 1)) == 1


def test_biform_square_hand_expansion():
    # (s y + t x)^2 = s^2 y^2 + 2 s t x y + t^2 x^2
    f = Biform(1, 1, {(1, 0, 0, 1): 1, (0, 1, 1, 0): 1})
    sq = f * f
    assert sq.coeff((2, 0, 0, 2)) == 1
    assert sq.coeff((1, 1, 1, 1)) == 2
    assert sq.coeff((0, 2, 2, 0)) == 1
    assert sq.bidegree == (2, 2)


def test_biform_add_requires_matching_bidegree():
    f = Biform(2, 1, {(2, 0, 1, 0): 1})
    g = Biform(2, 2, {(2, 0, 2, 0): 1})
    with pytest.raises(DegreeMismatch):
        f + g


def test_biform_eval_matches_term_sum():
    f = Biform(2, 2, {(2, 0, 2, 0): 3, (0, 2, 0, 2): Fraction(1, 2)})
    # at (s,t,x,y) = (1,2,3,4): 3*1*9 + 1/2*4*16 = 27 + 32 = 59
    assert f.eval((1, 2, 3, 4)) == 59


def test_biform_diff_matches_hand_derivative():
    f = Biform(2, 1, {(2, 0, 1, 0): 1, (1, 1, 0, 1): 4})
    ds = f.diff("s")
    assert ds.coeff((1, 0, 1, 0)) == 2
    assert ds.coeff((0, 1, 0, 1)) == 4


def test_biform_xy_blocks_reconstruct():
    # f = a(s,t) x^2 + 2 b(s,t) x y + c(s,t) y^2 with hand-chosen blocks
    f = Biform(
        2,
        2,
        {
            (2, 0, 2, 0): 1,  # a = s^2
            (1, 1, 1, 1): 6,  # 2b = 6 s t, so b = 3 s t
            (0, 2, 0, 2): 5,  # c = 5 t^2
        },
    )
    a, b, c = f.xy_blocks()  # blocks are binary forms in (s, t)
    assert a.coeffs == [0, 0, 1]  # s^2
    assert b.coeffs == [0, 3, 0]  # 3 s t
    assert c.coeffs == [5, 0, 0]  # 5 t^2


def test_biform_json_roundtrip():
    f = Biform(2, 2, {(2, 0, 0, 2): Fraction(-3, 7), (0, 2, 2, 0): 2})
    g = Biform.from_json(f.to_json())
    assert g == f


def test_biform_zero_and_scale():
    z = Biform.zero(2, 2)
    assert z.is_zero()
    f = Biform(2, 2, {(2, 0, 2, 0): 4})
    assert f.scale(Fraction(1, 4)).coeff((2, 0, 2, 0)) == 1


def test_bihomogenize_balances_degrees():
    # x s (affine) inside bidegree (2, 2): becomes s t x y
    f = bihomogenize({(1, 1): 1}, (2, 2))
    assert f.coeff((1, 1, 1, 1)) == 1


def test_biform_to_complex_preserves_values():
    f = Biform(2, 2, {(2, 0, 2, 0): 3})
    fc = f.to_complex()
    assert fc.eval((1.0, 0.0, 2.0, 0.0)) == pytest.approx(12.0)


# ----------------------------------------------------------------- TermPoly


def test_termpoly_mul_and_eval():
    # (x0 + x1)^2 at (1, 2) = 9
    f = TermPoly(2, {(1, 0): 1, (0, 1): 1})
    sq = f * f
    assert sq.eval((1, 2)) == 9
    assert sq.terms[(1, 1)] == 2


def test_termpoly_json_roundtrip():
    f = TermPoly(3, {(2, 0, 0): Fraction(1, 2), (0, 1, 1): -3})
    g = TermPoly.from_json(f.to_json())
    assert g == f


def test_termpoly_to_complex():
    f = TermPoly(2, {(1, 1): 2})
    fc = f.to_complex()
    assert fc.eval((1 + 1j, 1 - 1j)) == pytest.approx(4.0 + 0j)


def test_biform_to_termpoly_values_agree():
    f = Biform(2, 2, {(2, 0, 2, 0): 1, (0, 2, 0, 2): 2, (1, 1, 1, 1): -1})
    g = biform_to_termpoly(f)
    pt = (Fraction(1), Fraction(2), Fraction(-1), Fraction(3))
    assert f.eval(pt) == g.eval(pt)
