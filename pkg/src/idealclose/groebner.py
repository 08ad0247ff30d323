"""Division algorithm and Buchberger's algorithm over Q.

Bases are returned reduced and monic, sorted by increasing leading monomial,
so two ideals are equal exactly when their bases compare equal.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .polyring import (
    Monomial,
    MonomialOrder,
    Polynomial,
    RingMismatchError,
    as_order,
    monomial_divides,
    monomial_lcm,
)

#: Default cap on S-pairs processed by :func:`buchberger`.
MAX_PAIRS = 200_000


class ZeroIdealError(ValueError):
    """Raised when a basis is requested for the zero ideal."""


class ResourceLimitError(RuntimeError):
    """Buchberger's algorithm exceeded its configured work limit."""


@dataclass(frozen=True)
class DivisionResult:
    quotients: Tuple[Polynomial, ...]
    remainder: Polynomial


def _common_ring(polys: Sequence[Polynomial]):
    ring = polys[0].ring
    for p in polys[1:]:
        if p.ring != ring:
            raise RingMismatchError(f"ring mismatch: {ring} vs {p.ring}")
    return ring


def _reduce(f: Polynomial, divisors: Sequence[Polynomial], order: MonomialOrder,
            quotients: bool = True, stop_at_remainder: bool = False):
    """Core division loop.

    Returns ``(quotient dicts or None, remainder dict, complete)``; with
    ``stop_at_remainder`` the loop exits as soon as one irreducible term
    is found and ``complete`` is False.
    """
    hkey = order.heap_key
    lead = []
    for d in divisors:
        m, c = d.leading_term(order)
        tail = [(mm, cc) for mm, cc in d.terms_dict.items() if mm != m]
        lead.append((m, c, tail))

    work: Dict[Monomial, Fraction] = dict(f.terms_dict)
    heap = [(hkey(m), m) for m in work]
    heapq.heapify(heap)
    rem: Dict[Monomial, Fraction] = {}
    quots = [dict() for _ in divisors] if quotients else None

    while heap:
        _, m = heapq.heappop(heap)
        c = work.pop(m, None)
        if c is None:
            continue
        for i, (lm, lc, tail) in enumerate(lead):
            if all(b <= a for a, b in zip(m, lm)):
                q = c / lc
                shift = tuple(a - b for a, b in zip(m, lm))
                if quots is not None:
                    quots[i][shift] = quots[i].get(shift, 0) + q
                for tm, tc in tail:
                    nm = tuple(a + b for a, b in zip(tm, shift))
                    old = work.get(nm)
                    if old is None:
                        work[nm] = -q * tc
                        heapq.heappush(heap, (hkey(nm), nm))
                    else:
                        nc = old - q * tc
                        if nc:
                            work[nm] = nc
                        else:
                            del work[nm]
                break
        else:
            rem[m] = c
            if stop_at_remainder:
                return quots, rem, False
    return quots, rem, True


def divide(f: Polynomial, divisors: Sequence[Polynomial],
           order: MonomialOrder | str | None = None) -> DivisionResult:
    """Multivariate division of ``f`` by an ordered list of divisors.

    When several leading monomials divide the current term, the divisor with
    the lowest index is used.
    """
    order = as_order(order)
    _common_ring([f, *divisors])
    if any(d.is_zero() for d in divisors):
        raise ZeroDivisionError("division by the zero polynomial")
    quots, rem, _ = _reduce(f, divisors, order)
    ring = f.ring
    return DivisionResult(
        tuple(Polynomial._raw(ring, q) for q in quots),
        Polynomial._raw(ring, rem),
    )


def normal_form(f: Polynomial, divisors: Sequence[Polynomial],
                order: MonomialOrder | str | None = None) -> Polynomial:
    """Remainder of ``f`` on division by ``divisors`` (quotients discarded)."""
    order = as_order(order)
    if not divisors:
        return f
    _, rem, _ = _reduce(f, divisors, order, quotients=False)
    return Polynomial._raw(f.ring, rem)


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder | str | None = None) -> Polynomial:
    order = as_order(order)
    if f.is_zero() or g.is_zero():
        raise ValueError("S-polynomial of the zero polynomial")
    _common_ring([f, g])
    mf, cf = f.leading_term(order)
    mg, cg = g.leading_term(order)
    lcm = monomial_lcm(mf, mg)
    a = f.mul_term(tuple(x - y for x, y in zip(lcm, mf)), 1 / cf)
    b = g.mul_term(tuple(x - y for x, y in zip(lcm, mg)), 1 / cg)
    return a - b


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced monic Gröbner basis of the ideal spanned by ``source_ideal_generators``."""

    order: MonomialOrder
    generators: Tuple[Polynomial, ...]
    source_ideal_generators: Tuple[Polynomial, ...] = field(default=(), compare=False)

    @property
    def ring(self):
        return self.generators[0].ring

    def is_unit_ideal(self) -> bool:
        return len(self.generators) == 1 and self.generators[0].is_constant()

    def reduce(self, f: Polynomial) -> Polynomial:
        return normal_form(f, self.generators, self.order)

    def contains(self, f: Polynomial) -> bool:
        return is_member(f, self)

    def leading_monomials(self) -> List[Monomial]:
        return [g.leading_monomial(self.order) for g in self.generators]

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)


class _PairQueue:
    """S-pair bookkeeping with the Gebauer-Möller criteria."""

    def __init__(self, order: MonomialOrder):
        self.order = order
        self.leads: List[Monomial] = []
        self.pairs: Set[Tuple[int, int]] = set()

    def _lcm(self, i, j):
        return monomial_lcm(self.leads[i], self.leads[j])

    def add(self, lm: Monomial) -> None:
        new = len(self.leads)
        self.leads.append(lm)
        # Chain criterion on existing pairs: drop (i, j) when the new lead
        # divides lcm(i, j) strictly on both sides.
        kept = set()
        for i, j in self.pairs:
            l_ij = self._lcm(i, j)
            if (monomial_divides(lm, l_ij)
                    and l_ij != monomial_lcm(self.leads[i], lm)
                    and l_ij != monomial_lcm(self.leads[j], lm)):
                continue
            kept.add((i, j))
        self.pairs = kept

        # Among new pairs keep one per minimal lcm; skip classes that contain
        # a coprime pair (product criterion).
        groups: Dict[Monomial, List[int]] = {}
        for i in range(new):
            groups.setdefault(monomial_lcm(self.leads[i], lm), []).append(i)
        key = self.order.key
        minimal: List[Monomial] = []
        for l in sorted(groups, key=lambda m: (sum(m), key(m))):
            if all(not monomial_divides(prev, l) for prev in minimal):
                minimal.append(l)
        for l in minimal:
            idx = groups[l]
            coprime = any(
                all(a + b == c for a, b, c in zip(self.leads[i], lm, l)) for i in idx
            )
            if not coprime:
                self.pairs.add((min(idx), new))

    def pop(self) -> Tuple[int, int]:
        # Normal strategy: smallest lcm first, ties by index.
        key = self.order.key
        best = min(self.pairs, key=lambda p: (key(self._lcm(*p)), p))
        self.pairs.remove(best)
        return best

    def __bool__(self):
        return bool(self.pairs)


def _interreduce(basis: List[Polynomial], order: MonomialOrder) -> List[Polynomial]:
    key = order.key
    basis = sorted(basis, key=lambda g: key(g.leading_monomial(order)))
    minimal: List[Polynomial] = []
    for g in basis:
        lm = g.leading_monomial(order)
        if all(not monomial_divides(h.leading_monomial(order), lm) for h in minimal):
            minimal.append(g)
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        lm, lc = g.leading_term(order)
        tail = Polynomial._raw(g.ring, {m: c for m, c in g.terms_dict.items() if m != lm})
        r = normal_form(tail, others, order) if others else tail
        reduced.append((r + g.ring.monomial(lm, lc)).monic(order))
    return sorted(reduced, key=lambda g: key(g.leading_monomial(order)))


def buchberger(generators: Sequence[Polynomial], order: MonomialOrder | str | None = None,
               max_pairs: Optional[int] = MAX_PAIRS) -> GroebnerBasis:
    """Reduced Gröbner basis of ``<generators>``.

    Uses the normal selection strategy with the Gebauer-Möller pair
    criteria. Raises :class:`ZeroIdealError` if every generator is zero and
    :class:`ResourceLimitError` after ``max_pairs`` S-pair reductions.
    """
    order = as_order(order)
    generators = tuple(generators)
    if not generators:
        raise ZeroIdealError("zero ideal: no generators")
    _common_ring(generators)
    nonzero = [g for g in generators if not g.is_zero()]
    if not nonzero:
        raise ZeroIdealError("zero ideal: all generators are zero")
    ring = nonzero[0].ring

    if any(g.is_constant() for g in nonzero):
        return GroebnerBasis(order, (ring.one,), generators)

    basis: List[Polynomial] = []
    queue = _PairQueue(order)
    # Seed with inter-reduced input, smallest leading monomial first.
    key = order.key
    for g in sorted(nonzero, key=lambda p: key(p.leading_monomial(order))):
        r = normal_form(g, basis, order) if basis else g
        if r.is_zero():
            continue
        r = r.monic(order)
        if r.is_constant():
            return GroebnerBasis(order, (ring.one,), generators)
        basis.append(r)
        queue.add(r.leading_monomial(order))

    steps = 0
    while queue:
        steps += 1
        if max_pairs is not None and steps > max_pairs:
            raise ResourceLimitError(
                f"Buchberger exceeded {max_pairs} S-pair reductions (basis size {len(basis)})"
            )
        i, j = queue.pop()
        s = s_polynomial(basis[i], basis[j], order)
        r = normal_form(s, basis, order)
        if r.is_zero():
            continue
        r = r.monic(order)
        if r.is_constant():
            return GroebnerBasis(order, (ring.one,), generators)
        basis.append(r)
        queue.add(r.leading_monomial(order))

    return GroebnerBasis(order, tuple(_interreduce(basis, order)), generators)


def is_member(f: Polynomial, gb: GroebnerBasis) -> bool:
    """Ideal membership: ``f`` reduces to zero modulo the basis."""
    if f.ring != gb.ring:
        raise RingMismatchError(f"ring mismatch: {f.ring} vs {gb.ring}")
    if f.is_zero() or gb.is_unit_ideal():
        return True
    _, _, complete = _reduce(f, gb.generators, gb.order, quotients=False, stop_at_remainder=True)
    return complete


def ideals_equal(a: Sequence[Polynomial], b: Sequence[Polynomial],
                 order: MonomialOrder | str | None = None) -> bool:
    order = as_order(order)
    _common_ring([*a, *b])
    a_zero = all(p.is_zero() for p in a)
    b_zero = all(p.is_zero() for p in b)
    if a_zero or b_zero:
        return a_zero and b_zero
    return buchberger(a, order).generators == buchberger(b, order).generators


def is_groebner(gb: GroebnerBasis | Sequence[Polynomial], order: MonomialOrder | str | None = None) -> bool:
    """Buchberger's criterion: every S-polynomial reduces to zero."""
    if isinstance(gb, GroebnerBasis):
        order, gens = gb.order, list(gb.generators)
    else:
        order, gens = as_order(order), list(gb)
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if not normal_form(s_polynomial(gens[i], gens[j], order), gens, order).is_zero():
                return False
    return True


def is_reduced(gb: GroebnerBasis) -> bool:
    """Monic, and no term of any element is divisible by another element's leading monomial."""
    order = gb.order
    leads = [g.leading_monomial(order) for g in gb.generators]
    for i, g in enumerate(gb.generators):
        if g.leading_coefficient(order) != 1:
            return False
        for m in g.terms_dict:
            if any(j != i and monomial_divides(leads[j], m) for j in range(len(leads))):
                return False
    return True
