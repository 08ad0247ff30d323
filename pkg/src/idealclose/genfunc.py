"""Falling factorials and rational generating functions of linear families.

The generating function of a family with linear exponents has the form
``g(t) / prod (1 - u t_j)^e`` where every ``u`` is a monomial (times base
factors) and the numerator has t_j-degree at most the family bound l_j.
Since the denominator has constant term 1 it is invertible as a power
series, so the coefficients of ``g`` generate the same ideal as the family.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Dict, List, Sequence, Tuple

from .family import ParametricFamily, bound, instantiate, lattice_points
from .polyring import Polynomial, RingContext, format_monomial, format_polynomial, monomial_gcd

Index = Tuple[int, ...]


class DegreeBoundViolation(AssertionError):
    """The computed numerator exceeds the family bound; indicates a bug."""


def falling_factorial_value(n: int, k: int) -> int:
    """[n]_k = n (n - 1) ... (n - k + 1); [n]_0 = 1."""
    out = 1
    for i in range(k):
        out *= n - i
    return out


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    """Stirling numbers of the second kind via S(n,k) = k S(n-1,k) + S(n-1,k-1)."""
    if n == k:
        return 1
    if n == 0 or k == 0:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


@dataclass(frozen=True)
class FallingFactorialForm:
    """c(n) = sum_m gamma_m prod_j [n_j]_{m_j}."""

    num_params: int
    coefficients: Dict[Index, Fraction]

    def evaluate(self, n: Sequence[int]) -> Fraction:
        total = Fraction(0)
        for m, g in self.coefficients.items():
            v = g
            for nj, mj in zip(n, m):
                v *= falling_factorial_value(nj, mj)
            total += v
        return total


def to_falling_factorial(c: Polynomial) -> FallingFactorialForm:
    """Rewrite ``c`` in the falling-factorial basis, one variable at a time."""
    out: Dict[Index, Fraction] = {}
    for mono, coeff in c.terms_dict.items():
        for m in itertools.product(*(range(e + 1) for e in mono)):
            s = 1
            for e, k in zip(mono, m):
                s *= stirling2(e, k)
            if s:
                out[m] = out.get(m, 0) + coeff * s
    return FallingFactorialForm(
        c.ring.dimension,
        {m: int(g) if g.denominator == 1 else g for m, g in out.items() if g},
    )


@dataclass(frozen=True)
class TruncatedSeries:
    """Power series coefficients on the box ``index <= truncation``."""

    truncation: Index
    coefficients: Dict[Index, object]

    def __getitem__(self, n) -> object:
        if isinstance(n, int):
            n = (n,)
        return self.coefficients.get(tuple(n), 0)


def falling_factorial_gf(k: int, truncation: int) -> TruncatedSeries:
    """Expansion of k! t^k / (1 - t)^(k+1) through t^truncation."""
    if truncation < k:
        raise ValueError(f"truncation {truncation} must be at least k = {k}")
    kf = factorial(k)
    coeffs = {}
    for n in range(truncation + 1):
        # t^k (1-t)^-(k+1) contributes C(n, k) at t^n.
        coeffs[(n,)] = kf * comb(n, k)
    return TruncatedSeries((truncation,), coeffs)


@dataclass(frozen=True)
class DenominatorFactor:
    """The factor ``(1 - base * t_param) ** multiplicity``."""

    base: Polynomial
    param: int
    multiplicity: int


@dataclass(frozen=True)
class RationalGF:
    """``numerator(t) / prod(factors)`` with numerator coefficients in the ambient ring."""

    ring: RingContext
    num_params: int
    numerator: Dict[Index, Polynomial]
    denominator_factors: Tuple[DenominatorFactor, ...]

    def t_names(self) -> List[str]:
        return _t_names(self.ring, self.num_params)

    def numerator_degrees(self) -> Index:
        return tuple(
            max((m[j] for m in self.numerator), default=-1) for j in range(self.num_params)
        )

    def denominator_degrees(self) -> Index:
        deg = [0] * self.num_params
        for f in self.denominator_factors:
            deg[f.param] += f.multiplicity
        return tuple(deg)

    def expand(self, truncation: Sequence[int]) -> TruncatedSeries:
        """Series expansion on the box ``<= truncation``, using
        (1 - u t)^-e = sum_i C(i + e - 1, e - 1) u^i t^i."""
        truncation = tuple(truncation)
        series = {m: c for m, c in self.numerator.items() if _within(m, truncation)}
        for f in self.denominator_factors:
            j, e = f.param, f.multiplicity
            inverse = []
            power = self.ring.one
            for i in range(truncation[j] + 1):
                inverse.append(power.scale(comb(i + e - 1, e - 1)))
                power = power * f.base
            nxt: Dict[Index, Polynomial] = {}
            for m, c in series.items():
                for i in range(truncation[j] - m[j] + 1):
                    idx = m[:j] + (m[j] + i,) + m[j + 1:]
                    nxt[idx] = nxt.get(idx, self.ring.zero) + c * inverse[i]
            series = {m: c for m, c in nxt.items() if c}
        return TruncatedSeries(truncation, series)

    def numerator_text(self) -> str:
        return format_numerator(self)

    def denominator_text(self) -> str:
        names = self.t_names()
        parts = []
        for f in self.denominator_factors:
            body = f"(1 - {_product_text(f.base, names[f.param])})"
            parts.append(body if f.multiplicity == 1 else f"{body}^{f.multiplicity}")
        return "*".join(parts) if parts else "1"


def _within(m: Index, box: Index) -> bool:
    return all(a <= b for a, b in zip(m, box))


def _t_names(ring: RingContext, p: int) -> List[str]:
    stem = "t"
    while any(v == stem or v.startswith(stem) and v[len(stem):].isdigit() for v in ring.variable_names):
        stem += "_"
    return [stem] if p == 1 else [f"{stem}{j + 1}" for j in range(p)]


def _product_text(base: Polynomial, t: str) -> str:
    if len(base) == 1:
        (m, c), = base.terms_dict.items()
        mono = format_monomial(base.ring.variable_names, m)
        if c == 1:
            return f"{mono}*{t}" if mono else t
        if not mono:
            return f"{c}*{t}"
    return f"({base})*{t}"


def _t_monomial(m: Index, names: Sequence[str]) -> str:
    return format_monomial(names, m)


def _factored_coefficient(c: Polynomial) -> Tuple[int, str]:
    """Sign and text of ``c`` with its monomial content pulled out,
    e.g. ``-(x*y*w^2 + y^2*z*w)`` -> (-1, ``(x*w + y*z)*y*w``)."""
    terms = c.terms("lex")
    sign = -1 if terms[0][1] < 0 else 1
    if sign < 0:
        c = -c
    content = terms[0][0]
    for m, _ in terms[1:]:
        content = monomial_gcd(content, m)
    if len(c) == 1:
        return sign, format_polynomial(c)
    cofactor = Polynomial(c.ring, {tuple(a - b for a, b in zip(m, content)): v for m, v in c.terms_dict.items()})
    text = f"({cofactor})"
    mono = format_monomial(c.ring.variable_names, content)
    if mono:
        text += f"*{mono}"
    return sign, text


def format_numerator(gf: RationalGF) -> str:
    """E.g. ``(x*y + z*w) - (x*w + y*z)*y*w*t``; t-powers ascending."""
    names = gf.t_names()
    out = []
    for idx in sorted(gf.numerator, key=lambda m: (sum(m), tuple(-a for a in m))):
        sign, text = _factored_coefficient(gf.numerator[idx])
        tm = _t_monomial(idx, names)
        if tm:
            text = tm if text == "1" else f"{text}*{tm}"
        if not out:
            out.append(text if sign > 0 else f"-{text}")
        else:
            out.append(f" {'+' if sign > 0 else '-'} {text}")
    return "".join(out) if out else "0"


def _extended_ring(ring: RingContext, p: int) -> Tuple[RingContext, List[Polynomial]]:
    ext = RingContext(list(ring.variable_names) + _t_names(ring, p))
    return ext, list(ext.gens[ring.dimension:])


def _embed(f: Polynomial, ext: RingContext, p: int) -> Polynomial:
    return Polynomial._raw(ext, {m + (0,) * p: c for m, c in f.terms_dict.items()})


def _split_t(f: Polynomial, ring: RingContext, p: int) -> Dict[Index, Polynomial]:
    r = ring.dimension
    out: Dict[Index, dict] = {}
    for m, c in f.terms_dict.items():
        out.setdefault(m[r:], {})[m[:r]] = c
    return {idx: Polynomial._raw(ring, d) for idx, d in out.items()}


def term_ratio(fam: ParametricFamily, k: int, j: int) -> Polynomial:
    """Ring element u with x^(A_k (n + e_j) + b_k) = u * x^(A_k n + b_k) (times base factors)."""
    t = fam.terms[k]
    u = fam.ring.monomial(t.column(j))
    for b in t.bases:
        if b.row[j]:
            u = u * b.base ** b.row[j]
    return u


def denominator_factors(fam: ParametricFamily) -> Tuple[DenominatorFactor, ...]:
    """prod_k prod_j (1 - u_{kj} t_j)^(deg_{n_j} c_k + 1), equal bases merged."""
    merged: Dict[Tuple[Polynomial, int], int] = {}
    order: List[Tuple[Polynomial, int]] = []
    for k, t in enumerate(fam.terms):
        for j in range(fam.num_params):
            key = (term_ratio(fam, k, j), j)
            if key not in merged:
                merged[key] = 0
                order.append(key)
            merged[key] += t.coefficient.degree_in(j) + 1
    return tuple(DenominatorFactor(u, j, merged[(u, j)]) for u, j in order)


def _denominator_poly(factors, ext, ts, ring, p) -> Polynomial:
    d = ext.one
    for f in factors:
        d = d * (ext.one - _embed(f.base, ext, p) * ts[f.param]) ** f.multiplicity
    return d


def family_gf(fam: ParametricFamily) -> RationalGF:
    """Closed form of sum_n f_n t^n.

    The numerator is obtained by multiplying the truncated series by the
    denominator; the window between the bound and the truncation must then
    vanish, otherwise :class:`DegreeBoundViolation` is raised.
    """
    ell = bound(fam)
    p = fam.num_params
    factors = denominator_factors(fam)
    ext, ts = _extended_ring(fam.ring, p)
    denom = _denominator_poly(factors, ext, ts, fam.ring, p)
    dd = [denom.degree_in(fam.ring.dimension + j) for j in range(p)]
    trunc = tuple(l + d for l, d in zip(ell, dd))

    by_t = _split_t(denom, fam.ring, p)
    numerator: Dict[Index, Polynomial] = {}
    for n in lattice_points(trunc):
        fn = instantiate(fam, n)
        if fn.is_zero():
            continue
        for idx, dc in by_t.items():
            m = tuple(a + b for a, b in zip(n, idx))
            if _within(m, trunc):
                numerator[m] = numerator.get(m, fam.ring.zero) + fn * dc
    numerator = {m: c for m, c in numerator.items() if c}
    for m in numerator:
        if not _within(m, ell):
            raise DegreeBoundViolation(
                f"numerator has a t^{m} term beyond the bound {ell}: {numerator[m]}"
            )
    return RationalGF(fam.ring, p, numerator, factors)


def assemble_numerator(fam: ParametricFamily) -> Dict[Index, Polynomial]:
    """Numerator built term by term from the falling-factorial expansion.

    Each term contributes gamma_m m! x^b (u t)^m / prod_j (1 - u_j t_j)^(m_j+1);
    bringing everything over the denominator of :func:`denominator_factors`
    gives a polynomial in t. Independent of :func:`family_gf`'s series route.
    """
    p = fam.num_params
    factors = denominator_factors(fam)
    ext, ts = _extended_ring(fam.ring, p)
    full = {(f.base, f.param): f.multiplicity for f in factors}
    total = ext.zero
    for k, t in enumerate(fam.terms):
        ff = to_falling_factorial(t.coefficient)
        head = fam.ring.monomial(t.exponent_offset)
        for b in t.bases:
            head = head * b.base ** b.offset
        head = _embed(head, ext, p)
        ratios = [term_ratio(fam, k, j) for j in range(p)]
        for m, gamma in ff.coefficients.items():
            mf = 1
            for mj in m:
                mf *= factorial(mj)
            num = head.scale(gamma * mf)
            for j, mj in enumerate(m):
                num = num * (_embed(ratios[j], ext, p) * ts[j]) ** mj
            # Multiply by the full denominator divided by this term's own factors.
            for (u, j), e in full.items():
                own = m[j] + 1 if u == ratios[j] else 0
                num = num * (ext.one - _embed(u, ext, p) * ts[j]) ** (e - own)
            total = total + num
    return {idx: c for idx, c in _split_t(total, fam.ring, p).items() if c}


def series_match(gf: RationalGF, fam: ParametricFamily, truncation: Sequence[int]) -> bool:
    """Whether the expansion of ``gf`` agrees with sum f_n t^n on the box."""
    truncation = tuple(truncation)
    expanded = gf.expand(truncation)
    for n in lattice_points(truncation):
        want = instantiate(fam, n)
        got = expanded.coefficients.get(n, fam.ring.zero)
        if got != want:
            return False
    return True
