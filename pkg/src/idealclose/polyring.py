"""Exact sparse multivariate polynomials over the rationals.

Monomials are plain tuples of non-negative exponents. A :class:`Polynomial`
maps monomials to nonzero :class:`fractions.Fraction` coefficients and is
immutable once built, so structural equality is mathematical equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, Dict, Iterable, Iterator, Mapping, Sequence, Tuple

Monomial = Tuple[int, ...]

#: Per-variable exponent cap; anything larger raises :class:`ExponentOverflowError`.
MAX_EXPONENT = 2**31 - 1


class RingMismatchError(ValueError):
    """Operands live in different polynomial rings."""


class ExponentOverflowError(OverflowError):
    """An exponent exceeded :data:`MAX_EXPONENT`."""


def _check_exponents(mono: Monomial) -> Monomial:
    for e in mono:
        if e < 0:
            raise ValueError(f"negative exponent in monomial {mono}")
        if e > MAX_EXPONENT:
            raise ExponentOverflowError(f"exponent {e} exceeds {MAX_EXPONENT}")
    return mono


def monomial_mul(u: Monomial, v: Monomial) -> Monomial:
    return tuple(a + b for a, b in zip(u, v))


def monomial_div(u: Monomial, v: Monomial) -> Monomial:
    """Return u / v; assumes v divides u."""
    return tuple(a - b for a, b in zip(u, v))


def monomial_divides(v: Monomial, u: Monomial) -> bool:
    """True if v divides u."""
    return all(b <= a for a, b in zip(u, v))


def monomial_lcm(u: Monomial, v: Monomial) -> Monomial:
    return tuple(max(a, b) for a, b in zip(u, v))


def monomial_gcd(u: Monomial, v: Monomial) -> Monomial:
    return tuple(min(a, b) for a, b in zip(u, v))


# Sort keys: a larger key means a larger monomial.
def _lex_key(m: Monomial) -> tuple:
    return m


def _grlex_key(m: Monomial) -> tuple:
    return (sum(m),) + m


def _grevlex_key(m: Monomial) -> tuple:
    return (sum(m),) + tuple(-e for e in reversed(m))


_ORDER_KEYS: Dict[str, Callable[[Monomial], tuple]] = {
    "lex": _lex_key,
    "grlex": _grlex_key,
    "grevlex": _grevlex_key,
}


@dataclass(frozen=True)
class MonomialOrder:
    """A named monomial order (``lex``, ``grlex`` or ``grevlex``).

    Variables are ranked by their position in the ring, first is largest.
    """

    kind: str = "grevlex"

    def __post_init__(self):
        if self.kind not in _ORDER_KEYS:
            raise ValueError(
                f"unknown monomial order {self.kind!r}; expected one of {sorted(_ORDER_KEYS)}"
            )

    @property
    def key(self) -> Callable[[Monomial], tuple]:
        return _ORDER_KEYS[self.kind]

    def heap_key(self, m: Monomial) -> tuple:
        """Key for :mod:`heapq` that pops the largest monomial first."""
        return tuple(-k for k in self.key(m))

    def __str__(self):
        return self.kind


lex = MonomialOrder("lex")
grlex = MonomialOrder("grlex")
grevlex = MonomialOrder("grevlex")

DEFAULT_ORDER = grevlex


def as_order(order: MonomialOrder | str | None) -> MonomialOrder:
    if order is None:
        return DEFAULT_ORDER
    if isinstance(order, MonomialOrder):
        return order
    return MonomialOrder(order)


def compare_monomials(order: MonomialOrder | str, u: Monomial, v: Monomial) -> int:
    """Return -1, 0 or 1 as ``u`` is smaller than, equal to or larger than ``v``."""
    if len(u) != len(v):
        raise ValueError(f"monomial dimension mismatch: {len(u)} vs {len(v)}")
    key = as_order(order).key
    ku, kv = key(u), key(v)
    return (ku > kv) - (ku < kv)


def to_rational(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"cannot use {type(c).__name__} as an exact rational coefficient")


@dataclass(frozen=True)
class RingContext:
    """The ring Q[x_1, ..., x_r] identified by its ordered variable names."""

    variable_names: Tuple[str, ...]

    def __init__(self, variable_names: Iterable[str]):
        names = tuple(variable_names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        for name in names:
            if not name.isidentifier():
                raise ValueError(f"invalid variable name {name!r}")
        object.__setattr__(self, "variable_names", names)

    @property
    def dimension(self) -> int:
        return len(self.variable_names)

    @property
    def gens(self) -> Tuple["Polynomial", ...]:
        return tuple(self.variable(i) for i in range(self.dimension))

    @property
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    @property
    def one(self) -> "Polynomial":
        return self.constant(1)

    def index(self, name: str) -> int:
        try:
            return self.variable_names.index(name)
        except ValueError:
            raise KeyError(f"{name!r} is not a variable of {self}") from None

    def variable(self, which: int | str) -> "Polynomial":
        i = self.index(which) if isinstance(which, str) else which
        mono = tuple(1 if k == i else 0 for k in range(self.dimension))
        return Polynomial(self, {mono: Fraction(1)})

    def constant(self, c) -> "Polynomial":
        return Polynomial(self, {(0,) * self.dimension: c})

    def monomial(self, exponents: Sequence[int], coeff=1) -> "Polynomial":
        return Polynomial(self, {tuple(exponents): coeff})

    def __call__(self, terms: Mapping[Sequence[int], object] | int | Fraction) -> "Polynomial":
        if isinstance(terms, Mapping):
            return Polynomial(self, terms)
        return self.constant(terms)

    def __str__(self):
        return "Q[" + ",".join(self.variable_names) + "]"


class Polynomial:
    """An immutable polynomial in a :class:`RingContext`.

    Supports ``+``, ``-``, ``*`` and non-negative integer ``**``; scalars
    (``int`` or ``Fraction``) are promoted to constants.
    """

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: RingContext, terms: Mapping[Sequence[int], object] = ()):
        self.ring = ring
        clean: Dict[Monomial, Fraction] = {}
        r = ring.dimension
        for mono, c in dict(terms).items():
            mono = tuple(mono)
            if len(mono) != r:
                raise ValueError(f"monomial {mono} has length {len(mono)}, ring has {r} variables")
            _check_exponents(mono)
            c = to_rational(c)
            if c:
                clean[mono] = clean.get(mono, 0) + c
                if not clean[mono]:
                    del clean[mono]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring: RingContext, terms: Dict[Monomial, Fraction]) -> "Polynomial":
        # Trusted constructor: terms already canonical.
        p = cls.__new__(cls)
        p.ring = ring
        p._terms = terms
        p._hash = None
        return p

    # -- inspection -----------------------------------------------------
    @property
    def terms_dict(self) -> Mapping[Monomial, Fraction]:
        return self._terms

    def terms(self, order: MonomialOrder | str | None = None) -> list:
        """(monomial, coefficient) pairs in descending ``order``."""
        key = as_order(order).key
        return sorted(self._terms.items(), key=lambda mc: key(mc[0]), reverse=True)

    def monomials(self, order=None) -> list:
        return [m for m, _ in self.terms(order)]

    def coefficient(self, mono: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(mono), Fraction(0))

    def __len__(self):
        return len(self._terms)

    def __iter__(self) -> Iterator[Tuple[Monomial, Fraction]]:
        return iter(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get((0,) * self.ring.dimension, Fraction(0))

    def leading_term(self, order: MonomialOrder | str | None = None) -> Tuple[Monomial, Fraction]:
        if not self._terms:
            raise ValueError("the zero polynomial has no leading term")
        key = as_order(order).key
        m = max(self._terms, key=key)
        return m, self._terms[m]

    def leading_monomial(self, order=None) -> Monomial:
        return self.leading_term(order)[0]

    def leading_coefficient(self, order=None) -> Fraction:
        return self.leading_term(order)[1]

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def degree_in(self, var: int | str) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        i = self.ring.index(var) if isinstance(var, str) else var
        return max((m[i] for m in self._terms), default=-1)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._terms.values())

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatchError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction, Rational)):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.ring, {m: -c for m, c in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    del out[m]
        for m in out:
            if m and max(m) > MAX_EXPONENT:
                raise ExponentOverflowError(f"exponent overflow in product: {max(m)}")
        return Polynomial._raw(self.ring, out)

    __rmul__ = __mul__

    def scale(self, c) -> "Polynomial":
        c = to_rational(c)
        if not c:
            return self.ring.zero
        return Polynomial._raw(self.ring, {m: v * c for m, v in self._terms.items()})

    def mul_term(self, mono: Monomial, coeff=1) -> "Polynomial":
        """Multiply by the single term ``coeff * x**mono``."""
        coeff = to_rational(coeff)
        if not coeff:
            return self.ring.zero
        mono = _check_exponents(tuple(mono))
        out = {monomial_mul(m, mono): c * coeff for m, c in self._terms.items()}
        for m in out:
            if m and max(m) > MAX_EXPONENT:
                raise ExponentOverflowError(f"exponent overflow: {max(m)}")
        return Polynomial._raw(self.ring, out)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError(f"polynomial powers must be non-negative integers, got {k!r}")
        if len(self._terms) == 1:
            (m, c), = self._terms.items()
            big = [e * k for e in m]
            if big and max(big) > MAX_EXPONENT:
                raise ExponentOverflowError(f"exponent {max(big)} exceeds {MAX_EXPONENT}")
            return Polynomial._raw(self.ring, {tuple(big): c**k})
        result = self.ring.one
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def monic(self, order=None) -> "Polynomial":
        if not self._terms:
            return self
        return self.scale(1 / self.leading_coefficient(order))

    # -- substitution ---------------------------------------------------
    def evaluate(self, values: Sequence) -> Fraction:
        """Value at a point given as one number per variable."""
        if len(values) != self.ring.dimension:
            raise ValueError(f"expected {self.ring.dimension} values, got {len(values)}")
        total = Fraction(0)
        for m, c in self._terms.items():
            t = c
            for v, e in zip(values, m):
                if e:
                    t *= v**e
            total += t
        return total

    def evaluate_int(self, values: Sequence[int]) -> int:
        v = self.evaluate(values)
        if v.denominator != 1:
            raise ValueError(f"{self} is not integral at {tuple(values)}")
        return int(v)

    def compose(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute ``images[i]`` for the i-th variable; images share one ring."""
        if len(images) != self.ring.dimension:
            raise ValueError(f"expected {self.ring.dimension} images, got {len(images)}")
        if not images:
            return self
        target = images[0].ring
        result = target.zero
        powers: Dict[Tuple[int, int], Polynomial] = {}
        for m, c in self._terms.items():
            t = target.constant(c)
            for i, e in enumerate(m):
                if e:
                    if (i, e) not in powers:
                        powers[(i, e)] = images[i] ** e
                    t = t * powers[(i, e)]
            result = result + t
        return result

    # -- comparison / display -------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({self.ring}, {self})"

    def __str__(self):
        return format_polynomial(self)


def format_monomial(names: Sequence[str], mono: Monomial) -> str:
    parts = []
    for name, e in zip(names, mono):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_polynomial(p: Polynomial, order: MonomialOrder | str | None = "lex") -> str:
    """Render ``p`` as e.g. ``3*x*y^2 + z^2 + w^2``.

    Terms are listed in descending ``order``; lex by default, so the text
    does not depend on the order used for computation.
    """
    if p.is_zero():
        return "0"
    out = []
    for i, (m, c) in enumerate(p.terms(order)):
        mono = format_monomial(p.ring.variable_names, m)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not mono:
            body = _format_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_format_coeff(a)}*{mono}"
        if i == 0:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f" {sign} {body}")
    return "".join(out)
