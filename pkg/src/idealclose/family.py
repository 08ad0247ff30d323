"""Parametric families f_n = sum_k c_k(n) x^(A_k n + b_k) with linear exponents.

Coefficients ``c_k`` are integer polynomials in the parameters; exponents
are affine in the parameters with non-negative integer data. A term may also
carry *base factors* ``u^(a.n + s)`` for a fixed ring element ``u`` (e.g. the
constant 2 in ``2^(n+2) x^2``), which behave exactly like an extra variable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce
from operator import mul
from typing import Iterator, List, Sequence, Tuple

from .polyring import MAX_EXPONENT, ExponentOverflowError, Polynomial, RingContext

#: Default cap on the number of lattice points :func:`finite_generators` instantiates.
LATTICE_CAP = 10_000


class IllFormedFamilyError(ValueError):
    pass


class LatticeTooLargeError(RuntimeError):
    pass


def param_ring(names: Sequence[str]) -> RingContext:
    return RingContext(names)


def check_integer_polynomial(c: Polynomial, what: str = "coefficient") -> Polynomial:
    if not c.is_integral():
        raise IllFormedFamilyError(f"{what} {c} must have integer coefficients")
    return c


@dataclass(frozen=True)
class BaseFactor:
    """``base ** (row . n + offset)`` for a fixed ring element ``base``."""

    base: Polynomial
    row: Tuple[int, ...]
    offset: int = 0


@dataclass(frozen=True)
class FamilyTerm:
    coefficient: Polynomial
    exponent_matrix: Tuple[Tuple[int, ...], ...]
    exponent_offset: Tuple[int, ...]
    bases: Tuple[BaseFactor, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "exponent_matrix", tuple(tuple(int(a) for a in row) for row in self.exponent_matrix))
        object.__setattr__(self, "exponent_offset", tuple(int(b) for b in self.exponent_offset))
        object.__setattr__(self, "bases", tuple(self.bases))
        check_integer_polynomial(self.coefficient)
        p = self.coefficient.ring.dimension
        entries = [a for row in self.exponent_matrix for a in row] + list(self.exponent_offset)
        for b in self.bases:
            if len(b.row) != p:
                raise IllFormedFamilyError(f"base factor row {b.row} does not match {p} parameters")
            entries += list(b.row) + [b.offset]
        if any(a < 0 for a in entries):
            raise IllFormedFamilyError("exponent data must be non-negative")
        if any(len(row) != p for row in self.exponent_matrix):
            raise IllFormedFamilyError(f"exponent matrix rows must have {p} entries")
        if len(self.exponent_matrix) != len(self.exponent_offset):
            raise IllFormedFamilyError("exponent matrix and offset disagree on the number of variables")

    def column(self, j: int) -> Tuple[int, ...]:
        """Exponent vector multiplying the j-th parameter."""
        return tuple(row[j] for row in self.exponent_matrix)

    def exponents_at(self, n: Sequence[int]) -> Tuple[int, ...]:
        return tuple(
            sum(a * k for a, k in zip(row, n)) + b
            for row, b in zip(self.exponent_matrix, self.exponent_offset)
        )


@dataclass(frozen=True)
class ParametricFamily:
    ring: RingContext
    param_names: Tuple[str, ...]
    terms: Tuple[FamilyTerm, ...]

    def __post_init__(self):
        object.__setattr__(self, "param_names", tuple(self.param_names))
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise IllFormedFamilyError("a family needs at least one term")
        clash = set(self.param_names) & set(self.ring.variable_names)
        if clash:
            raise IllFormedFamilyError(f"names used both as parameter and variable: {sorted(clash)}")
        pring = self.param_ring
        for t in self.terms:
            if t.coefficient.ring != pring:
                raise IllFormedFamilyError(f"coefficient {t.coefficient} is not over parameters {self.param_names}")
            if len(t.exponent_offset) != self.ring.dimension:
                raise IllFormedFamilyError(f"exponent data must have {self.ring.dimension} rows")
            for b in t.bases:
                if b.base.ring != self.ring:
                    raise IllFormedFamilyError(f"base {b.base} is not in {self.ring}")

    @property
    def num_params(self) -> int:
        return len(self.param_names)

    @property
    def param_ring(self) -> RingContext:
        return RingContext(self.param_names)

    def __call__(self, *n: int) -> Polynomial:
        return instantiate(self, n)


def make_term(fam_params: Sequence[str], coefficient, matrix, offset, bases=()) -> FamilyTerm:
    """Convenience constructor accepting an int coefficient."""
    pring = RingContext(fam_params)
    if not isinstance(coefficient, Polynomial):
        coefficient = pring.constant(coefficient)
    return FamilyTerm(coefficient, matrix, offset, bases)


def bound(fam: ParametricFamily) -> Tuple[int, ...]:
    """Bound vector l with l_j = sum_k (deg_{n_j} c_k + 1) - 1."""
    for k, t in enumerate(fam.terms):
        if t.coefficient.is_zero():
            raise IllFormedFamilyError(f"term {k + 1} has identically zero coefficient")
    return tuple(
        sum(t.coefficient.degree_in(j) + 1 for t in fam.terms) - 1
        for j in range(fam.num_params)
    )


def instantiate(fam: ParametricFamily, n: Sequence[int]) -> Polynomial:
    """The member f_n as an explicit polynomial."""
    n = tuple(n)
    if len(n) != fam.num_params:
        raise ValueError(f"expected {fam.num_params} parameter values, got {len(n)}")
    if any(not isinstance(k, int) or k < 0 for k in n):
        raise ValueError(f"parameter values must be non-negative integers, got {n}")
    ring = fam.ring
    total = ring.zero
    for t in fam.terms:
        c = t.coefficient.evaluate_int(n)
        if not c:
            continue
        exps = t.exponents_at(n)
        if any(e > MAX_EXPONENT for e in exps):
            raise ExponentOverflowError(f"exponent overflow instantiating at {n}")
        term = ring.monomial(exps, c)
        for b in t.bases:
            term = term * b.base ** (sum(a * k for a, k in zip(b.row, n)) + b.offset)
        total = total + term
    return total


def lattice_points(box: Sequence[int]) -> Iterator[Tuple[int, ...]]:
    """All n with 0 <= n <= box componentwise, lexicographically."""
    return itertools.product(*(range(b + 1) for b in box))


def lattice_size(box: Sequence[int]) -> int:
    return reduce(mul, (b + 1 for b in box), 1)


def finite_generators(fam: ParametricFamily, cap: int = LATTICE_CAP) -> List[Polynomial]:
    """Members f_n for n <= bound(fam), duplicates removed, lexicographic in n."""
    ell = bound(fam)
    size = lattice_size(ell)
    if size > cap:
        raise LatticeTooLargeError(f"bound {ell} needs {size} instantiations (cap {cap})")
    seen = set()
    out = []
    for n in lattice_points(ell):
        f = instantiate(fam, n)
        if f not in seen:
            seen.add(f)
            out.append(f)
    return out


def shift(fam: ParametricFamily, j: int, stride: int, offset: int) -> ParametricFamily:
    """Reparametrize n_j -> stride * n_j + offset."""
    if stride < 1 or offset < 0:
        raise ValueError(f"need stride >= 1 and offset >= 0, got {stride}, {offset}")
    if not 0 <= j < fam.num_params:
        raise IndexError(f"parameter index {j} out of range")
    if stride == 1 and offset == 0:
        return fam
    pring = fam.param_ring
    images = list(pring.gens)
    images[j] = images[j] * stride + offset
    terms = []
    for t in fam.terms:
        matrix = tuple(
            tuple(a * stride if i == j else a for i, a in enumerate(row))
            for row in t.exponent_matrix
        )
        offs = tuple(b + row[j] * offset for row, b in zip(t.exponent_matrix, t.exponent_offset))
        bases = tuple(
            BaseFactor(
                b.base,
                tuple(a * stride if i == j else a for i, a in enumerate(b.row)),
                b.offset + b.row[j] * offset,
            )
            for b in t.bases
        )
        terms.append(FamilyTerm(t.coefficient.compose(images), matrix, offs, bases))
    return ParametricFamily(fam.ring, fam.param_names, terms)


def shift_all(fam: ParametricFamily, strides: Sequence[int], offsets: Sequence[int]) -> ParametricFamily:
    """Apply :func:`shift` to every parameter at once."""
    for j, (d, s) in enumerate(zip(strides, offsets)):
        fam = shift(fam, j, d, s)
    return fam


def _affine_text(row: Sequence[int], offset: int, names: Sequence[str]) -> str:
    parts = []
    for a, name in zip(row, names):
        if a == 1:
            parts.append(name)
        elif a:
            parts.append(f"{a}*{name}")
    if offset or not parts:
        parts.append(str(offset))
    return " + ".join(parts)


def canonical_text(fam: ParametricFamily) -> str:
    """Deterministic one-line description, used for hashing problems."""
    pieces = []
    for t in fam.terms:
        exps = ", ".join(
            _affine_text(row, b, fam.param_names) for row, b in zip(t.exponent_matrix, t.exponent_offset)
        )
        bases = "".join(
            f" * ({b.base})^({_affine_text(b.row, b.offset, fam.param_names)})" for b in t.bases
        )
        pieces.append(f"[{t.coefficient}] * x^({exps}){bases}")
    return f"{fam.ring}; params({', '.join(fam.param_names)}); " + " + ".join(pieces)
