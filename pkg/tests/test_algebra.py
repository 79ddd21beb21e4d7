from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from ihq.algebra import (
    POINT,
    LaurentElement,
    NonInvertibleEuler,
    RingError,
    RingPresentation,
    integrate_coefficients,
    invert_euler,
    laurent_multiply,
    residue_integral,
    ring_multiply,
)


def sphere_ring():
    return RingPresentation({0: 1, 2: 1}, labels={2: ["h"]}, integral=[1])


def cp2_ring():
    return RingPresentation({0: 1, 2: 1, 4: 1}, {((2, 0), (2, 0)): {4: [1]}}, integral=[1])


def torus_ring():
    return RingPresentation({0: 1, 1: 2, 2: 1}, {((1, 0), (1, 1)): {2: [1]}}, integral=[1])


def test_unit_acts_trivially():
    r = cp2_ring()
    for i in range(r.size):
        x = r.basis_element(r.degrees[i], i - r.offsets[r.degrees[i]])
        assert ring_multiply(r, r.unit(), x) == x
        assert ring_multiply(r, x, r.unit()) == x


def test_sphere_class_squares_to_zero():
    r = sphere_ring()
    h = r.basis_element(2, 0)
    assert ring_multiply(r, h, h) == r.zero()


def test_cp2_hyperplane_squared():
    r = cp2_ring()
    h = r.basis_element(2, 0)
    assert ring_multiply(r, h, h) == r.basis_element(4, 0)


def test_koszul_sign_in_odd_degree():
    r = torus_ring()
    a, b, w = r.basis_element(1, 0), r.basis_element(1, 1), r.basis_element(2, 0)
    assert ring_multiply(r, a, b) == w
    assert ring_multiply(r, b, a) == tuple(-x for x in w)
    assert ring_multiply(r, a, a) == r.zero()


def test_mismatched_element_rejected():
    with pytest.raises(RingError):
        ring_multiply(sphere_ring(), POINT.unit(), POINT.unit())


def test_rejects_broken_commutativity():
    with pytest.raises(RingError):
        RingPresentation({0: 1, 1: 2, 2: 1},
                         {((1, 0), (1, 1)): {2: [1]}, ((1, 1), (1, 0)): {2: [1]}}, integral=[1])


def test_rejects_odd_square():
    with pytest.raises(RingError):
        RingPresentation({0: 1, 1: 1, 2: 1}, {((1, 0), (1, 0)): {2: [1]}}, integral=[1])


def test_associativity_checked_on_triples():
    # a*a = c and c*b != 0 while a*b = 0, so (a*a)*b != a*(a*b)
    with pytest.raises(RingError, match="associativity"):
        RingPresentation({0: 1, 2: 2, 4: 1, 6: 1},
                         {((2, 0), (2, 0)): {4: [1]}, ((4, 0), (2, 1)): {6: [1]}}, integral=[1])


def test_rejects_zero_integral_and_bad_unit():
    with pytest.raises(RingError):
        RingPresentation({0: 1, 2: 1}, integral=[0])
    with pytest.raises(RingError):
        RingPresentation({0: 2}, integral=[1, 1])


def test_laurent_scalar_products():
    a = LaurentElement.scalar(POINT, 3)
    b = LaurentElement.scalar(POINT, Fraction(1, 2))
    assert laurent_multiply(a, b) == LaurentElement.scalar(POINT, Fraction(3, 2))
    inv_t = LaurentElement.scalar(POINT, 1, -1)
    assert inv_t * LaurentElement.scalar(POINT, 1, 1) == LaurentElement.scalar(POINT, 1)


def test_laurent_difference_of_squares_on_sphere():
    r = sphere_ring()
    h = r.basis_element(2, 0)
    one = LaurentElement.scalar(r, 1)
    ht = LaurentElement.monomial(r, -1, h)
    assert (one + ht) * (one - ht) == one


def test_laurent_ring_mismatch():
    with pytest.raises(RingError):
        LaurentElement.scalar(POINT, 1) * LaurentElement.scalar(sphere_ring(), 1)


def test_invert_point_classes():
    assert invert_euler(LaurentElement.scalar(POINT, 1, 2)) == LaurentElement.scalar(POINT, 1, -2)
    assert invert_euler(LaurentElement.scalar(POINT, -1, 2)) == LaurentElement.scalar(POINT, -1, -2)


def test_invert_sphere_euler_against_series():
    # oracle: expand 1/(2t + h) in sympy and truncate h^2
    T, H = sympy.symbols("t h")
    series = sympy.series(1 / (2 * T + H), H, 0, 2).removeO()
    want_const = series.coeff(H, 0)
    want_h = series.coeff(H, 1)
    assert want_const == 1 / (2 * T)
    assert sympy.simplify(want_h + 1 / (4 * T**2)) == 0

    r = sphere_ring()
    h = r.basis_element(2, 0)
    e = LaurentElement.make(r, {1: r.scalar(2), 0: h})
    inv = invert_euler(e)
    expected = LaurentElement.make(r, {-1: r.scalar(Fraction(1, 2)), -2: tuple(-Fraction(1, 4) * x for x in h)})
    assert inv == expected
    assert e * inv == LaurentElement.scalar(r, 1)


def test_invert_rejects_non_scalar_leading_term():
    r = sphere_ring()
    with pytest.raises(NonInvertibleEuler):
        invert_euler(LaurentElement.monomial(r, 0, r.basis_element(2, 0)))
    with pytest.raises(NonInvertibleEuler):
        invert_euler(LaurentElement.zero(POINT))


def test_residue_examples():
    a = LaurentElement.make(POINT, {2: [3], 1: [5], 0: [7]})
    assert residue_integral(a) == 0
    assert residue_integral(LaurentElement.scalar(POINT, Fraction(-4, 3), -1)) == Fraction(-4, 3)
    r = sphere_ring()
    assert residue_integral(LaurentElement.monomial(r, -1, r.basis_element(2, 0))) == 1
    # only the top-degree part of the t^-1 coefficient counts
    assert residue_integral(LaurentElement.scalar(r, 5, -1)) == 0


def test_homogeneity():
    r = cp2_ring()
    h = r.basis_element(2, 0)
    e = LaurentElement.make(r, {2: r.scalar(3), 1: h})
    assert e.degree() == 4 and e.is_homogeneous(4)
    mixed = LaurentElement.make(r, {2: r.scalar(3), 0: h})
    assert mixed.degree() is None


# -- properties ------------------------------------------------------------

coeff = st.integers(-4, 4).map(Fraction)


@st.composite
def torus_laurent(draw):
    r = torus_ring()
    terms = {}
    for j in draw(st.lists(st.integers(-3, 3), max_size=4)):
        terms[j] = [draw(coeff) for _ in range(r.size)]
    return LaurentElement.make(r, terms)


@st.composite
def cp2_euler(draw):
    r = cp2_ring()
    lam = draw(st.integers(1, 5)) * draw(st.sampled_from([1, -1]))
    a, b = draw(coeff), draw(coeff)
    return LaurentElement.make(r, {2: r.scalar(lam), 1: r.element({2: [a]}), 0: r.element({4: [b]})})


@settings(max_examples=100, deadline=None)
@given(torus_laurent(), torus_laurent(), torus_laurent())
def test_laurent_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=100, deadline=None)
@given(cp2_euler())
def test_euler_inverse_property(e):
    inv = invert_euler(e)
    assert e * inv == LaurentElement.scalar(e.ring, 1)
    assert inv * e == LaurentElement.scalar(e.ring, 1)
    assert inv.degree() == -e.degree()


@settings(max_examples=100, deadline=None)
@given(torus_laurent(), torus_laurent(), coeff, coeff)
def test_residue_linear(a, b, x, y):
    assert residue_integral(a.scale(x) + b.scale(y)) == x * residue_integral(a) + y * residue_integral(b)


def test_integrate_coefficients_drops_zero():
    r = sphere_ring()
    a = LaurentElement.make(r, {1: r.basis_element(2, 0), 0: r.scalar(1)})
    assert integrate_coefficients(a) == {1: 1}
