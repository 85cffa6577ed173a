import pytest
from hypothesis import given, strategies as st

from crossing_forge.weights import (
    ONE, ZERO, Color, Ordering, WeightPoly, color_weight, compare_symbolic, g_weight, s_weight, w,
)

coeffs = st.lists(st.integers(0, 50), min_size=0, max_size=6)
polys = coeffs.map(WeightPoly.from_array)


@given(polys, polys, polys)
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a + ZERO == a and a * ONE == a


@given(polys, polys, st.integers(2, 10**6))
def test_eval_is_homomorphic(a, b, omega):
    assert (a + b).eval(omega) == a.eval(omega) + b.eval(omega)
    assert (a * b).eval(omega) == a.eval(omega) * b.eval(omega)


@given(polys, polys)
def test_compare_symbolic_agrees_with_eval(a, b):
    omega = 1000  # above every coefficient the strategy draws
    x, y = a.eval(omega), b.eval(omega)
    want = Ordering.LESS if x < y else Ordering.GREATER if x > y else Ordering.EQUAL
    assert compare_symbolic(a, b, omega) is want


@given(polys)
def test_array_and_text_roundtrip(p):
    assert WeightPoly.from_array(p.to_array()) == p
    assert WeightPoly.parse(str(p)) == p


def test_checked_sub_rejects_negative():
    with pytest.raises(ValueError):
        w(2).checked_sub(w(3))
    assert (w(3, 2) - w(3)) == w(3)


def test_base_weights():
    assert color_weight(Color.HB) == w(8)
    assert color_weight(Color.LB) == w(6)
    assert color_weight(Color.R_STAIR) == w(3)
    assert color_weight(Color.B_STAIR) == w(3)
    assert color_weight(Color.C) == w(2)
    assert color_weight(Color.G) == ONE


@pytest.mark.parametrize("j", range(1, 12))
def test_path_weights(j):
    assert g_weight(j) == w(4) + w(1, j * (j + 1))
    assert s_weight(j) == w(4) + w(1, j * (j + 2))
    assert color_weight(Color.R, j) == g_weight(j)
    assert color_weight(Color.B, j) == s_weight(j)
