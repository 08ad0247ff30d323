import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from families import cubes_outer, cubic2_outer, fermat, geometric, poly_coeffs, two_param
from conftest import linear_family
from idealclose.family import (
    BaseFactor,
    FamilyTerm,
    IllFormedFamilyError,
    LatticeTooLargeError,
    ParametricFamily,
    bound,
    finite_generators,
    instantiate,
    param_ring,
    shift,
    shift_all,
)
from idealclose.groebner import buchberger, is_member
from idealclose.polyring import RingContext


def base_point_family():
    # f_n = x^(2n+1) + y^(2n+1) + z^(n+2) + 2^(n+2) x^2
    R = RingContext("xyz")
    P = param_ring(["n"])
    one = P.one
    return ParametricFamily(R, ("n",), [
        FamilyTerm(one, [[2], [0], [0]], [1, 0, 0]),
        FamilyTerm(one, [[0], [2], [0]], [0, 1, 0]),
        FamilyTerm(one, [[0], [0], [1]], [0, 0, 2]),
        FamilyTerm(one, [[0], [0], [0]], [2, 0, 0], (BaseFactor(R.constant(2), (1,), 2),)),
    ])


@pytest.mark.parametrize("fam, expected", [
    (base_point_family(), (3,)),
    (poly_coeffs, (5,)),
    (two_param, (10, 7)),
    (geometric, (1,)),
    (fermat, (2,)),
])
def test_bound_values(fam, expected):
    assert bound(fam) == expected


def test_zero_coefficient_is_ill_formed():
    P = param_ring(["n"])
    with pytest.raises(IllFormedFamilyError):
        bound(ParametricFamily(RingContext("x"), ("n",), [FamilyTerm(P.zero, [[1]], [0])]))


def test_negative_exponent_data_rejected():
    P = param_ring(["n"])
    with pytest.raises(IllFormedFamilyError):
        FamilyTerm(P.one, [[-1]], [0])
    with pytest.raises(IllFormedFamilyError):
        FamilyTerm(P.one, [[1]], [-2])


def test_name_clash_rejected():
    P = param_ring(["x"])
    with pytest.raises(IllFormedFamilyError):
        ParametricFamily(RingContext("xy"), ("x",), [FamilyTerm(P.one, [[1], [0]], [0, 0])])


def test_instantiate_examples():
    R = cubic2_outer.ring
    x, y, z, w = R.gens
    assert instantiate(cubic2_outer, (0,)) == 3 * x * y**2 + z**2 + w**2
    X, Y, Z = fermat.ring.gens
    assert instantiate(fermat, (3,)) == X**3 + Y**3 - Z**3
    a, b, c = two_param.ring.gens
    assert instantiate(two_param, (1, 1)) == 2 * a**4 * c**5 + 2 * b**7
    u, v, s = base_point_family().ring.gens
    assert instantiate(base_point_family(), (1,)) == u**3 + v**3 + s**3 + 8 * u**2
    with pytest.raises(ValueError):
        instantiate(two_param, (1,))


def test_instantiate_against_independent_evaluation():
    # evaluate the two-parameter family directly from its written formula
    a, b, c = two_param.ring.gens
    for n in range(4):
        for m in range(4):
            want = ((n**2 - m) * a ** (n + m + 2) + (n * m**4 + m**2) * a ** (2 * n + m + 1) * c ** (m + n + 3)
                    + (n**5 + n**2) * b ** (4 * n + m + 2))
            assert two_param(n, m) == want


def test_finite_generators_counts():
    assert finite_generators(base_point_family()) == [instantiate(base_point_family(), (n,)) for n in range(4)]
    gens = finite_generators(two_param)
    # one generator per lattice point 0 <= n <= 10, 0 <= m <= 7; all values distinct
    assert len(gens) == 88
    assert gens[0] == instantiate(two_param, (0, 0))
    const = linear_family("x", ["n"], [(1, [[0]], [1])])
    assert bound(const) == (0,)
    assert finite_generators(const) == [const.ring.gens[0]]
    with pytest.raises(LatticeTooLargeError):
        finite_generators(two_param, cap=50)


def test_two_param_lattice_has_88_points():
    from idealclose.family import lattice_points, lattice_size
    assert lattice_size(bound(two_param)) == 88
    assert len(list(lattice_points(bound(two_param)))) == 88


def test_shift_examples():
    s = shift(cubes_outer, 0, 1, 27)
    x, y, z, w = s.ring.gens
    assert s(0) == x * y**28 + z**28 + w**28
    s3 = shift(cubes_outer, 0, 3, 9)
    for n in range(5):
        assert s3(n) == cubes_outer(3 * n + 9)
    assert shift(cubes_outer, 0, 1, 0) is cubes_outer
    with pytest.raises(ValueError):
        shift(cubes_outer, 0, 0, 1)


def test_shift_keeps_bound_of_affine_coefficients_degree():
    # shifting cannot change the coefficient degree, so the bound is invariant
    assert bound(shift_all(two_param, (6, 2), (7, 3))) == bound(two_param)
    assert bound(shift(base_point_family(), 0, 2, 5)) == (3,)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(0, 6), st.integers(1, 3), st.integers(0, 4), st.integers(0, 3), st.integers(0, 3))
def test_shift_correctness(d1, s1, d2, s2, n, m):
    shifted = shift_all(two_param, (d1, d2), (s1, s2))
    assert shifted(n, m) == two_param(d1 * n + s1, d2 * m + s2)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 3), st.integers(0, 5))
def test_shift_base_point(d, s):
    fam = base_point_family()
    sh = shift(fam, 0, d, s)
    for n in range(3):
        assert sh(n) == fam(d * n + s)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 4), st.integers(0, 4))
def test_bound_monotone_under_added_term(e1, e2):
    fam = two_param
    P = fam.param_ring
    n, m = P.gens
    extra = FamilyTerm(n**e1 * m**e2 + 1, [[1, 0], [0, 1], [0, 0]], [0, 0, 1])
    bigger = ParametricFamily(fam.ring, fam.param_names, list(fam.terms) + [extra])
    assert bound(bigger) == (bound(fam)[0] + e1 + 1, bound(fam)[1] + e2 + 1)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 5), st.integers(0, 5))
def test_instantiate_of_sum_is_sum_of_instantiates(n, m):
    a = ParametricFamily(two_param.ring, two_param.param_names, two_param.terms[:1])
    b = ParametricFamily(two_param.ring, two_param.param_names, two_param.terms[1:])
    assert instantiate(two_param, (n, m)) == instantiate(a, (n, m)) + instantiate(b, (n, m))


@pytest.mark.parametrize("fam", [geometric, base_point_family(), fermat, cubic2_outer],
                         ids=["geometric", "base_point", "fermat", "cubic2"])
def test_brute_force_generation(fam):
    gb = buchberger(finite_generators(fam))
    ell = bound(fam)
    for n in range(ell[0] + 6):
        assert is_member(instantiate(fam, (n,)), gb)


def test_brute_force_generation_poly_coeffs():
    gb = buchberger(finite_generators(poly_coeffs))
    for n in range(5 + 6):
        assert is_member(poly_coeffs(n), gb)


def test_brute_force_generation_random_two_param():
    rnd = random.Random(11)
    R = RingContext("xy")
    P = param_ring(["a", "b"])
    a, b = P.gens
    terms = []
    for _ in range(2):
        coeff = rnd.randint(1, 3) * a ** rnd.randint(0, 1) + rnd.randint(1, 2)
        matrix = [[rnd.randint(0, 2), rnd.randint(0, 1)] for _ in range(2)]
        terms.append(FamilyTerm(coeff, matrix, [rnd.randint(0, 2) for _ in range(2)]))
    fam = ParametricFamily(R, ("a", "b"), terms)
    ell = bound(fam)
    gb = buchberger(finite_generators(fam))
    for n in range(ell[0] + 3):
        for m in range(ell[1] + 3):
            assert is_member(fam(n, m), gb)
