"""Finite generating sets for ideals spanned by parametric polynomial families."""

from .polyring import (
    MonomialOrder,
    Polynomial,
    RingContext,
    compare_monomials,
    grevlex,
    grlex,
    lex,
)
from .groebner import (
    DivisionResult,
    GroebnerBasis,
    buchberger,
    divide,
    ideals_equal,
    is_member,
    s_polynomial,
)
from .family import (
    BaseFactor,
    FamilyTerm,
    ParametricFamily,
    bound,
    finite_generators,
    instantiate,
    shift,
)
from .genfunc import (
    RationalGF,
    falling_factorial_gf,
    falling_factorial_value,
    family_gf,
    series_match,
    to_falling_factorial,
)
from .certify import (
    Certificate,
    ComposedFamily,
    MembershipLattice,
    ShiftCertificate,
    SubstitutionMap,
    certify_equal,
    check_certificate,
    find_shift_certificates,
    residue_coverage,
    scan,
)
from .dsl import ProblemSpec, format_problem, parse_problem

__all__ = [
    "MonomialOrder",
    "Polynomial",
    "RingContext",
    "compare_monomials",
    "grevlex",
    "grlex",
    "lex",
    "DivisionResult",
    "GroebnerBasis",
    "buchberger",
    "divide",
    "ideals_equal",
    "is_member",
    "s_polynomial",
    "BaseFactor",
    "FamilyTerm",
    "ParametricFamily",
    "bound",
    "finite_generators",
    "instantiate",
    "shift",
    "RationalGF",
    "falling_factorial_gf",
    "falling_factorial_value",
    "family_gf",
    "series_match",
    "to_falling_factorial",
    "Certificate",
    "ComposedFamily",
    "MembershipLattice",
    "ShiftCertificate",
    "SubstitutionMap",
    "certify_equal",
    "check_certificate",
    "find_shift_certificates",
    "residue_coverage",
    "scan",
    "ProblemSpec",
    "format_problem",
    "parse_problem",
]

__version__ = "0.1.0"
