import dataclasses
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import PROBLEMS
from families import cubes_outer, fermat, pair_outer, parabola_outer
from idealclose.certify import (
    Certificate,
    ComposedFamily,
    CoverageError,
    MembershipLattice,
    ResidueCoverageError,
    ResidueFact,
    ShiftCertificate,
    SubstitutionMap,
    certify_equal,
    check_certificate,
    coverage_gaps,
    default_scan_box,
    find_shift_certificates,
    residue_coverage,
    residue_image,
    scan,
    verify_shift_certificate,
)
from idealclose.dsl import parse_problem
from idealclose.family import instantiate, lattice_points, param_ring
from idealclose.groebner import buchberger, is_member


def phi(names, build):
    P = param_ring(names)
    return SubstitutionMap(build(*P.gens))


cubes = ComposedFamily(cubes_outer, phi(["n"], lambda n: [n**3]))
squares = ComposedFamily(cubes_outer, phi(["n"], lambda n: [n**2]))


@pytest.fixture(scope="module")
def squares_lattice():
    gens = [squares.instantiate((n,)) for n in range(4)]
    return scan(cubes_outer, gens, (30,))


def test_scan_fermat():
    gens = [instantiate(fermat, (n,)) for n in (3, 4, 5)]
    lattice = scan(fermat, gens, (30,))
    assert all(lattice[n] for n in range(3, 31))
    assert not lattice[1] and not lattice[2]


def test_scan_squares_pattern(squares_lattice):
    members = {m[0] for m in squares_lattice.members()}
    assert {m for m in range(9, 31) if m % 3 != 2} <= members
    # the generators themselves, g_0, g_1, g_4, g_9
    assert {0, 1, 4, 9} <= members
    assert all(m not in members for m in range(9, 31) if m % 3 == 2)
    assert 2 not in members


def test_scan_unit_ideal_marks_everything():
    lattice = scan(fermat, [fermat.ring.one], (5,))
    assert all(lattice.entries.values())


def test_scan_is_deterministic(squares_lattice):
    gens = [squares.instantiate((n,)) for n in reversed(range(4))]
    assert scan(cubes_outer, gens, (30,)) == squares_lattice


def test_shift_certificates_squares(squares_lattice):
    certs = find_shift_certificates(squares_lattice, cubes_outer, 3)
    key = {(c.strides, c.offsets) for c in certs}
    assert ((3,), (9,)) in key and ((3,), (10,)) in key
    for c in certs:
        assert verify_shift_certificate(c, cubes_outer, squares_lattice) is None
        if c.strides == (3,):
            assert c.verified_bound == (2,)


def test_shift_certificates_cubes():
    gens = [cubes.instantiate((n,)) for n in range(4)]
    lattice = scan(cubes_outer, gens, (29,))
    certs = find_shift_certificates(lattice, cubes_outer, 1)
    assert [(c.strides, c.offsets, c.verified_bound) for c in certs] == [((1,), (27,), (2,))]


def test_shift_certificates_all_false():
    lattice = MembershipLattice((10,), {(m,): False for m in range(11)})
    assert find_shift_certificates(lattice, cubes_outer, 6) == []


def test_verify_shift_certificate_rejects_wrong_bound(squares_lattice):
    bad = ShiftCertificate((3,), (9,), (1,))
    assert "bound" in verify_shift_certificate(bad, cubes_outer, squares_lattice)
    outside = ShiftCertificate((3,), (11,), (2,))
    assert "not recorded" in verify_shift_certificate(outside, cubes_outer, squares_lattice)


def test_residue_coverage_examples():
    sq = phi(["n"], lambda n: [n**2])
    assert residue_coverage(sq, 3, [(0,), (1,)]).modulus == 3
    parity = phi(["n", "m"], lambda n, m: [n**2 + m**2, n + m**3])
    fact = residue_coverage(parity, 2, [(0, 0), (1, 1)])
    assert fact.covered_residues == frozenset({(0, 0), (1, 1)})
    ident = phi(["n"], lambda n: [n])
    with pytest.raises(ResidueCoverageError) as info:
        residue_coverage(ident, 2, [(0,)])
    assert info.value.witnesses == [(1,)]


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 7), st.integers(0, 3), st.integers(1, 3))
def test_residue_witness_is_genuine(d, c, e):
    P = param_ring(["n"])
    n, = P.gens
    f = SubstitutionMap([n**e + c])
    image = residue_image(f, d)
    covered = sorted(image)[1:]
    with pytest.raises(ResidueCoverageError) as info:
        residue_coverage(f, d, covered)
    (rho,) = info.value.witnesses
    assert tuple(v % d for v in f(rho)) not in set(covered)


def test_substitution_map_rejects_negative_coefficients():
    P = param_ring(["n"])
    n, = P.gens
    with pytest.raises(ValueError):
        SubstitutionMap([n**2 - n])


def test_coverage_gaps_squares(squares_lattice):
    certs = [c for c in find_shift_certificates(squares_lattice, cubes_outer, 3) if c.strides == (3,)]
    small, gaps = coverage_gaps(squares.map, certs, 3, (3,))
    assert small == [(0,), (1,), (2,)]
    assert gaps == []
    _, gaps = coverage_gaps(squares.map, certs, 3, (2,))
    assert gaps  # 2^2 = 4 is below every certified offset


def test_default_scan_box():
    # phi(k0 + 1) = 64, outer bound 2, margin 2
    assert default_scan_box(cubes, (3,)) == (68,)


@pytest.fixture(scope="module")
def squares_certificate():
    return certify_equal(squares, 3, 30, max_stride=3)


def test_certify_squares(squares_certificate):
    cert = squares_certificate
    assert cert.j_indices == ((0,), (1,), (2,), (3,))
    assert cert.modulus == 3
    assert cert.residue_facts[0].covered_residues == frozenset({(0,), (1,)})
    assert {(c.strides, c.offsets) for c in cert.shift_certs} == {((3,), (9,)), ((3,), (10,))}
    assert check_certificate(cert, squares)


def test_certificate_json_round_trip(squares_certificate):
    text = squares_certificate.to_json()
    back = Certificate.from_json(text)
    assert back == squares_certificate
    assert back.to_json() == text
    assert check_certificate(back, squares)
    doc = json.loads(text)
    assert set(doc) >= {"problem_hash", "j_indices", "lattice", "shift_certificates", "residue_facts", "small_cases"}


def test_tampered_lattice_rejected(squares_certificate):
    doc = json.loads(squares_certificate.to_json())
    bits = doc["lattice"]["bitmap"]
    doc["lattice"]["bitmap"] = ("0" if bits[2] == "1" else "1").join([bits[:2], bits[3:]])
    result = check_certificate(Certificate.from_json(json.dumps(doc)), squares)
    assert not result and "lattice entry" in result.reason


def test_tampered_residue_modulus_rejected(squares_certificate):
    cert = squares_certificate
    fact = cert.residue_facts[0]
    altered = dataclasses.replace(cert, residue_facts=(ResidueFact(5, fact.covered_residues),))
    assert not check_certificate(altered, squares)


def test_tampered_small_cases_and_hash(squares_certificate):
    cert = squares_certificate
    assert not check_certificate(dataclasses.replace(cert, small_cases=cert.small_cases[:-1]), squares)
    assert not check_certificate(dataclasses.replace(cert, problem_hash="0" * 64), squares)
    assert not check_certificate(cert, cubes)


def test_certify_fails_on_small_box():
    with pytest.raises(CoverageError):
        certify_equal(squares, 3, 12, max_stride=3)


def test_certify_two_params_sum_of_squares():
    comp = ComposedFamily(pair_outer, phi(["n", "m"], lambda n, m: [n**2 + m**2, m**3]))
    cert = certify_equal(comp, (3, 2), (6, 6), max_stride=2)
    assert check_certificate(cert, comp)


def test_certify_parabola_progressions():
    comp = ComposedFamily(parabola_outer, phi(["n"], lambda n: [n**2, n]))
    gens = [comp.instantiate((n,)) for n in range(5)]
    lattice = scan(parabola_outer, gens, (24, 8))
    certs = find_shift_certificates(lattice, parabola_outer, 6)
    assert {(c.strides, c.offsets) for c in certs} >= {
        ((6, 2), (7, 3)), ((6, 2), (9, 3)), ((6, 2), (10, 4)), ((6, 2), (12, 4))
    }


# -- soundness spot check ---------------------------------------------------

# Margin 3 above k0 in every direction, except that I4's second component m^3
# makes f(n, 5) = g(n^2 + 25, 125) very expensive to reduce (minutes per
# point); there the second direction gets margin 1.
SOUNDNESS_CASES = [
    ("cubes", (3,)),
    ("cubic2", (3,)),
    ("squares", (3,)),
    ("two_param_sum_of_squares", (3, 1)),
    ("two_param_parity", (3, 3)),
]


@pytest.mark.parametrize("name, margin", SOUNDNESS_CASES, ids=[c[0] for c in SOUNDNESS_CASES])
def test_soundness_margin(name, margin):
    spec = parse_problem((PROBLEMS / f"{name}.prob").read_text())
    comp = spec.composed
    p = comp.num_params
    k0 = spec.k0 if len(spec.k0) == p else spec.k0 * p
    cert = certify_equal(comp, k0, spec.k1, spec.stride_max)
    assert check_certificate(cert, comp)
    gb = buchberger(list(cert.generators))
    for n in lattice_points(tuple(k + e for k, e in zip(k0, margin))):
        assert is_member(comp.instantiate(n), gb), n
