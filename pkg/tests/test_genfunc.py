import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import linear_family
from families import geometric, not_minimal, poly_coeffs, two_param
from idealclose.family import bound, param_ring
from idealclose.genfunc import (
    RationalGF,
    assemble_numerator,
    falling_factorial_gf,
    falling_factorial_value,
    family_gf,
    series_match,
    stirling2,
    to_falling_factorial,
)
from idealclose.polyring import Polynomial


@pytest.mark.parametrize("n, k, expected", [(0, 0, 1), (7, 0, 1), (4, 2, 12), (3, 5, 0), (5, 5, 120)])
def test_falling_factorial_value(n, k, expected):
    assert falling_factorial_value(n, k) == expected


def test_stirling_row():
    assert [stirling2(3, k) for k in range(4)] == [0, 1, 3, 1]
    assert [stirling2(5, k) for k in range(6)] == [0, 1, 15, 25, 10, 1]


def test_to_falling_factorial_examples():
    P = param_ring(["n"])
    n, = P.gens
    assert to_falling_factorial(n**2).coefficients == {(2,): 1, (1,): 1}
    assert to_falling_factorial(P.one).coefficients == {(0,): 1}
    cube = to_falling_factorial(n**3)
    assert cube.coefficients == {(3,): 1, (2,): 3, (1,): 1}
    for v in range(5):
        assert cube.evaluate((v,)) == v**3
        assert to_falling_factorial(n**2).evaluate((v,)) == v**2


@pytest.mark.parametrize("k, T, expected", [
    (0, 3, [1, 1, 1, 1]),
    (2, 4, [0, 0, 2, 6, 12]),
    (1, 2, [0, 1, 2]),
])
def test_falling_factorial_gf(k, T, expected):
    series = falling_factorial_gf(k, T)
    assert [series[n] for n in range(T + 1)] == expected
    assert all(series[n] == falling_factorial_value(n, k) for n in range(T + 1))


def test_falling_factorial_gf_needs_truncation_at_least_k():
    with pytest.raises(ValueError):
        falling_factorial_gf(3, 2)


def test_geometric_family_closed_form():
    gf = family_gf(geometric)
    x, y, z, w = geometric.ring.gens
    assert gf.numerator == {(0,): x * y + z * w, (1,): -(x * w + y * z) * y * w}
    assert [(f.base, f.param, f.multiplicity) for f in gf.denominator_factors] == [(y**2, 0, 1), (w**2, 0, 1)]
    assert gf.numerator_text() == "(x*y + z*w) - (x*w + y*z)*y*w*t"
    assert gf.denominator_text() == "(1 - y^2*t)*(1 - w^2*t)"


def test_constant_family():
    fam = linear_family("x", ["n"], [(1, [[0]], [1])])
    gf = family_gf(fam)
    x, = fam.ring.gens
    assert gf.numerator == {(0,): x}
    assert gf.denominator_text() == "(1 - t)"
    assert gf.numerator_text() == "x"


def test_polynomial_coefficient_degree():
    gf = family_gf(poly_coeffs)
    assert bound(poly_coeffs) == (5,)
    assert gf.numerator_degrees()[0] <= 5
    assert gf.denominator_degrees() == (6,)
    assert series_match(gf, poly_coeffs, (8,))


def test_series_match_examples():
    gf = family_gf(geometric)
    assert series_match(gf, geometric, (6,))
    bumped = dict(gf.numerator)
    bumped[(0,)] = bumped[(0,)] + 1
    perturbed = RationalGF(gf.ring, gf.num_params, bumped, gf.denominator_factors)
    assert not series_match(perturbed, geometric, (6,))


def test_zero_family():
    # f_n = x^n - x^n is identically zero, though each term is well formed
    fam = linear_family("x", ["n"], [(1, [[1]], [0]), (-1, [[1]], [0])])
    gf = family_gf(fam)
    assert gf.numerator == {}
    assert gf.numerator_text() == "0"
    assert series_match(gf, fam, (4,))


@pytest.mark.parametrize("fam", [geometric, poly_coeffs, not_minimal, two_param],
                         ids=["geometric", "poly_coeffs", "not_minimal", "two_param"])
def test_numerator_routes_agree(fam):
    gf = family_gf(fam)
    assert assemble_numerator(fam) == gf.numerator
    ell = bound(fam)
    assert all(d <= l for d, l in zip(gf.numerator_degrees(), ell))
    # expanding the closed form past the bound reproduces the family
    assert series_match(gf, fam, tuple(l + 2 for l in ell))


@settings(max_examples=60, deadline=None)
@given(st.dictionaries(st.integers(0, 5), st.integers(-20, 20), min_size=1, max_size=4))
def test_falling_factorial_round_trip(coeffs):
    P = param_ring(["n"])
    c = Polynomial(P, {(e,): v for e, v in coeffs.items()})
    form = to_falling_factorial(c)
    deg = max(coeffs)
    for v in range(deg + 3):
        assert form.evaluate((v,)) == c.evaluate_int((v,))
    assert all(isinstance(g, (int, Fraction)) and g == int(g) for g in form.coefficients.values())


def test_falling_factorial_round_trip_two_params():
    rnd = random.Random(5)
    P = param_ring(["n", "m"])
    for _ in range(10):
        c = Polynomial(P, {(rnd.randint(0, 3), rnd.randint(0, 3)): rnd.randint(-9, 9) for _ in range(4)})
        form = to_falling_factorial(c)
        for n in range(5):
            for m in range(5):
                assert form.evaluate((n, m)) == c.evaluate_int((n, m))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 6), st.integers(0, 10))
def test_ffgf_coefficients(k, extra):
    series = falling_factorial_gf(k, k + extra)
    for n in range(k + extra + 1):
        assert series[n] == falling_factorial_value(n, k)


def test_extended_ring_avoids_name_clash():
    fam = linear_family(["t", "x"], ["n"], [(1, [[1], [0]], [0, 1])])
    gf = family_gf(fam)
    assert gf.t_names() == ["t_"]
    assert gf.denominator_text() == "(1 - t*t_)"
