"""Certified finite generation for families with polynomial exponents.

A composed family ``f_n = g_{phi(n)}`` is built from a linear family ``g``
and a substitution ``phi`` with non-negative integer coefficients. Given a
candidate ``J = <f_n : n <= k0>``, the membership of ``g_m`` in ``J`` is
scanned over a box of outer indices. Every arithmetic progression
``m = d*k + s`` whose bound box is fully inside ``J`` lies in ``J`` entirely
(the shifted family is again linear), and a residue/lower-bound argument
shows that ``phi(n)`` lands in such a progression for all ``n`` outside a
finite set of small cases, which are checked directly.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .family import (
    ParametricFamily,
    bound,
    canonical_text,
    instantiate,
    lattice_points,
    shift_all,
)
from .groebner import GroebnerBasis, buchberger, is_member
from .polyring import MonomialOrder, Polynomial, RingContext, as_order

Index = Tuple[int, ...]

#: Largest uniform frontier tried by :func:`certify_equal`.
MAX_FRONTIER = 10


class CoverageError(RuntimeError):
    """The certificate argument does not close; ``witnesses`` lists what is uncovered."""

    def __init__(self, message: str, witnesses: Sequence = ()):
        super().__init__(message)
        self.witnesses = list(witnesses)


class ResidueCoverageError(CoverageError):
    pass


class NotInIdealError(CoverageError):
    """A family member was found outside J, so I != J."""


@dataclass(frozen=True)
class SubstitutionMap:
    """phi: Z>=0^p -> Z>=0^q given by integer polynomials with non-negative coefficients."""

    components: Tuple[Polynomial, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if not self.components:
            raise ValueError("a substitution map needs at least one component")
        ring = self.components[0].ring
        for c in self.components:
            if c.ring != ring:
                raise ValueError("substitution components must share one parameter ring")
            for _, v in c:
                if v.denominator != 1 or v < 0:
                    raise ValueError(f"substitution component {c} must have non-negative integer coefficients")

    @property
    def inner_ring(self) -> RingContext:
        return self.components[0].ring

    @property
    def inner_param_count(self) -> int:
        return self.inner_ring.dimension

    @property
    def outer_param_count(self) -> int:
        return len(self.components)

    def __call__(self, n: Sequence[int]) -> Index:
        return tuple(c.evaluate_int(n) for c in self.components)

    @classmethod
    def identity(cls, names: Sequence[str]) -> "SubstitutionMap":
        return cls(RingContext(names).gens)


@dataclass(frozen=True)
class ComposedFamily:
    outer: ParametricFamily
    map: SubstitutionMap

    def __post_init__(self):
        if self.map.outer_param_count != self.outer.num_params:
            raise ValueError(
                f"substitution has {self.map.outer_param_count} components, "
                f"outer family has {self.outer.num_params} parameters"
            )

    @property
    def num_params(self) -> int:
        return self.map.inner_param_count

    def instantiate(self, n: Sequence[int]) -> Polynomial:
        return instantiate(self.outer, self.map(n))

    def outer_index(self, n: Sequence[int]) -> Index:
        return self.map(n)

    def problem_hash(self) -> str:
        text = canonical_text(self.outer) + " ; phi = (" + ", ".join(
            f"{c}" for c in self.map.components
        ) + ") over " + str(self.map.inner_ring)
        return hashlib.sha256(text.encode()).hexdigest()


@dataclass(frozen=True)
class MembershipLattice:
    box: Index
    entries: Dict[Index, bool]

    def __getitem__(self, m) -> bool:
        if isinstance(m, int):
            m = (m,)
        return self.entries[tuple(m)]

    def get(self, m, default=False) -> bool:
        return self.entries.get(tuple(m), default)

    def members(self) -> List[Index]:
        return [m for m in lattice_points(self.box) if self.entries[m]]

    def bitmap(self) -> str:
        return "".join("1" if self.entries[m] else "0" for m in lattice_points(self.box))

    @classmethod
    def from_bitmap(cls, box: Sequence[int], bits: str) -> "MembershipLattice":
        box = tuple(box)
        points = list(lattice_points(box))
        if len(points) != len(bits) or set(bits) - {"0", "1"}:
            raise ValueError("bitmap does not match the lattice box")
        return cls(box, {m: b == "1" for m, b in zip(points, bits)})


@dataclass(frozen=True)
class ShiftCertificate:
    """g_{d*k + s} in J for all k >= 0, by the bound applied to the shifted family."""

    strides: Index
    offsets: Index
    verified_bound: Index

    def required_points(self) -> List[Index]:
        return [
            tuple(d * k + s for d, k, s in zip(self.strides, ks, self.offsets))
            for ks in lattice_points(self.verified_bound)
        ]

    def contains(self, m: Sequence[int]) -> bool:
        return all(x >= s and (x - s) % d == 0 for x, d, s in zip(m, self.strides, self.offsets))

    def residue_matches(self, residue: Sequence[int]) -> bool:
        """Whether a residue vector (mod a multiple of every stride) lies in this progression's class."""
        return all((r - s) % d == 0 for r, d, s in zip(residue, self.strides, self.offsets))

    def subsumes(self, other: "ShiftCertificate") -> bool:
        return all(
            d2 % d1 == 0 and s2 >= s1 and (s2 - s1) % d1 == 0
            for d1, s1, d2, s2 in zip(self.strides, self.offsets, other.strides, other.offsets)
        )

    def describe(self, names: Sequence[str] = ()) -> str:
        ks = [f"k{j + 1}" for j in range(len(self.strides))] if len(self.strides) > 1 else ["k"]
        parts = []
        for d, s, k in zip(self.strides, self.offsets, ks):
            lead = k if d == 1 else f"{d}*{k}"
            parts.append(f"{lead} + {s}" if s else lead)
        return f"g({', '.join(parts)})"


@dataclass(frozen=True)
class ResidueFact:
    """The image of phi modulo ``modulus`` lies in ``covered_residues``."""

    modulus: int
    covered_residues: FrozenSet[Index]


@dataclass(frozen=True)
class Certificate:
    problem_hash: str
    j_indices: Tuple[Index, ...]
    lattice: MembershipLattice
    shift_certs: Tuple[ShiftCertificate, ...]
    residue_facts: Tuple[ResidueFact, ...]
    small_cases: Tuple[Index, ...]
    frontier: Index
    modulus: int
    order: str = "grevlex"
    generators: Tuple[Polynomial, ...] = field(default=(), compare=False, repr=False)

    def to_json(self, indent: Optional[int] = 2) -> str:
        doc = {
            "problem_hash": self.problem_hash,
            "order": self.order,
            "j_indices": [list(n) for n in self.j_indices],
            "lattice": {"box": list(self.lattice.box), "bitmap": self.lattice.bitmap()},
            "shift_certificates": [
                {"strides": list(c.strides), "offsets": list(c.offsets), "bound": list(c.verified_bound)}
                for c in self.shift_certs
            ],
            "residue_facts": [
                {"modulus": f.modulus, "covered": sorted(list(r) for r in f.covered_residues)}
                for f in self.residue_facts
            ],
            "frontier": list(self.frontier),
            "modulus": self.modulus,
            "small_cases": [list(n) for n in self.small_cases],
        }
        return json.dumps(doc, indent=indent)

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        doc = json.loads(text)
        return cls(
            problem_hash=doc["problem_hash"],
            j_indices=tuple(tuple(n) for n in doc["j_indices"]),
            lattice=MembershipLattice.from_bitmap(doc["lattice"]["box"], doc["lattice"]["bitmap"]),
            shift_certs=tuple(
                ShiftCertificate(tuple(c["strides"]), tuple(c["offsets"]), tuple(c["bound"]))
                for c in doc["shift_certificates"]
            ),
            residue_facts=tuple(
                ResidueFact(f["modulus"], frozenset(tuple(r) for r in f["covered"]))
                for f in doc["residue_facts"]
            ),
            small_cases=tuple(tuple(n) for n in doc["small_cases"]),
            frontier=tuple(doc["frontier"]),
            modulus=doc["modulus"],
            order=doc.get("order", "grevlex"),
        )


# -- scanning -------------------------------------------------------------

def scan(outer: ParametricFamily, j_generators: Sequence[Polynomial], box: Sequence[int],
         order: MonomialOrder | str | None = None, basis: Optional[GroebnerBasis] = None) -> MembershipLattice:
    """Membership of g_m in J for every m <= box."""
    box = tuple(box)
    if len(box) != outer.num_params or any(b < 0 for b in box):
        raise ValueError(f"scan box {box} must be {outer.num_params} non-negative integers")
    gb = basis if basis is not None else buchberger(j_generators, as_order(order))
    entries = {m: is_member(instantiate(outer, m), gb) for m in lattice_points(box)}
    return MembershipLattice(box, entries)


# -- shift certificates ---------------------------------------------------

def _prune(certs: List[ShiftCertificate]) -> List[ShiftCertificate]:
    kept: List[ShiftCertificate] = []
    for c in certs:
        if any(k.subsumes(c) for k in kept):
            continue
        kept = [k for k in kept if not c.subsumes(k)]
        kept.append(c)
    return kept


def find_shift_certificates(lattice: MembershipLattice, outer: ParametricFamily,
                            max_stride: int) -> List[ShiftCertificate]:
    """Progressions whose bound box is inside the lattice and entirely in J.

    Progressions contained in another certified one are dropped.
    """
    if max_stride < 1:
        raise ValueError("max_stride must be at least 1")
    q = outer.num_params
    box = lattice.box
    found = []
    bounds: Dict[Index, Index] = {}
    for strides in itertools.product(range(1, max_stride + 1), repeat=q):
        for offsets in lattice_points(box):
            if not lattice.entries[offsets]:
                continue
            if strides not in bounds:
                # Coefficient degrees, hence the bound, do not depend on the offset.
                bounds[strides] = bound(shift_all(outer, strides, (0,) * q))
            ell = bounds[strides]
            if any(d * l + s > b for d, l, s, b in zip(strides, ell, offsets, box)):
                continue
            cert = ShiftCertificate(strides, offsets, ell)
            if all(lattice.entries[m] for m in cert.required_points()):
                found.append(cert)
    found.sort(key=lambda c: (c.strides, c.offsets))
    return sorted(_prune(found), key=lambda c: (c.strides, c.offsets))


def verify_shift_certificate(cert: ShiftCertificate, outer: ParametricFamily,
                             lattice: MembershipLattice) -> Optional[str]:
    """None if sound, else the reason it fails."""
    shifted = shift_all(outer, cert.strides, cert.offsets)
    ell = bound(shifted)
    if ell != tuple(cert.verified_bound):
        return f"{cert.describe()}: bound is {ell}, certificate claims {cert.verified_bound}"
    for m in cert.required_points():
        if not lattice.get(m):
            return f"{cert.describe()}: g{m} is not recorded as a member of J"
    return None


# -- residue facts --------------------------------------------------------

def residue_image(phi: SubstitutionMap, d: int) -> FrozenSet[Index]:
    return frozenset(
        tuple(v % d for v in phi(rho)) for rho in itertools.product(range(d), repeat=phi.inner_param_count)
    )


def residue_coverage(phi: SubstitutionMap, d: int, covered: Iterable[Sequence[int]]) -> ResidueFact:
    """Check by enumeration that phi(n) mod d always lies in ``covered``.

    Raises :class:`ResidueCoverageError` with a witness residue tuple otherwise.
    """
    if d < 1:
        raise ValueError("modulus must be positive")
    covered = frozenset(tuple(c) for c in covered)
    for rho in itertools.product(range(d), repeat=phi.inner_param_count):
        image = tuple(v % d for v in phi(rho))
        if image not in covered:
            raise ResidueCoverageError(
                f"n = {rho} (mod {d}) maps to {image} (mod {d}), outside the covered residues",
                [rho],
            )
    return ResidueFact(d, covered)


# -- coverage argument ----------------------------------------------------

def _cells(frontier: Index) -> Iterable[Tuple[Optional[int], ...]]:
    """Split Z>=0^p into cells: each coordinate is a fixed value below the
    frontier, or free (None) meaning ">= frontier"."""
    return itertools.product(*([None] + list(range(f)) for f in frontier))


def _smallest_at_least(lo: int, residue: int, modulus: int) -> int:
    return lo + (residue - lo) % modulus


def coverage_gaps(phi: SubstitutionMap, certs: Sequence[ShiftCertificate], modulus: int,
                  frontier: Index) -> Tuple[List[Index], List[tuple]]:
    """Run the covering argument.

    For every cell with a free coordinate and every residue class of the free
    coordinates mod ``modulus``, phi(n) has a fixed residue and, phi being
    monotone, is bounded below by phi at the smallest point of the class.
    The class is covered when some certificate matches that residue with
    offsets below the bound. Returns (small cases, uncovered classes).
    """
    small: List[Index] = []
    gaps: List[tuple] = []
    for cell in _cells(frontier):
        free = [j for j, v in enumerate(cell) if v is None]
        if not free:
            small.append(tuple(cell))
            continue
        for rho in itertools.product(range(modulus), repeat=len(free)):
            point = list(cell)
            for j, r in zip(free, rho):
                point[j] = _smallest_at_least(frontier[j], r, modulus)
            point = tuple(point)
            low = phi(point)
            residue = tuple(v % modulus for v in low)
            if not any(
                c.residue_matches(residue) and all(s <= v for s, v in zip(c.offsets, low))
                for c in certs
            ):
                gaps.append((cell, point, low))
    return small, gaps


def _covered_residues(certs: Sequence[ShiftCertificate], modulus: int, q: int) -> FrozenSet[Index]:
    return frozenset(
        r for r in itertools.product(range(modulus), repeat=q)
        if any(c.residue_matches(r) for c in certs)
    )


def default_scan_box(composed: ComposedFamily, k0: Sequence[int]) -> Index:
    """phi(k0 + 1) + l + 2, componentwise."""
    top = composed.map(tuple(k + 1 for k in k0))
    ell = bound(composed.outer)
    return tuple(v + l + 2 for v, l in zip(top, ell))


def _vector(v, p: int, what: str) -> Index:
    if isinstance(v, int):
        return (v,) * p
    v = tuple(v)
    if len(v) != p:
        raise ValueError(f"{what} must have {p} entries, got {v}")
    return v


def certify_equal(composed: ComposedFamily, k0, k1=None, max_stride: int = 6,
                  order: MonomialOrder | str | None = None,
                  max_frontier: int = MAX_FRONTIER) -> Certificate:
    """Prove <f_n : all n> = <f_n : n <= k0> or raise :class:`CoverageError`."""
    order = as_order(order)
    p, q = composed.num_params, composed.outer.num_params
    k0 = _vector(k0, p, "k0")
    k1 = default_scan_box(composed, k0) if k1 is None else _vector(k1, q, "k1")

    j_indices = tuple(lattice_points(k0))
    generators = tuple(composed.instantiate(n) for n in j_indices)
    gb = buchberger(generators, order)
    lattice = scan(composed.outer, generators, k1, order, basis=gb)
    certs = find_shift_certificates(lattice, composed.outer, max_stride)
    if not certs:
        raise CoverageError(
            f"no certified progression inside the scan box {k1}; try a larger k1 or k0",
            [],
        )

    strides = sorted({d for c in certs for d in c.strides})
    full = math.lcm(*strides)
    moduli = [m for m in range(1, full + 1) if full % m == 0]
    last_gaps: List[tuple] = []
    member_cache: Dict[Index, bool] = {}

    for f in range(max_frontier + 1):
        frontier = (f,) * p
        for modulus in moduli:
            usable = [c for c in certs if all(modulus % d == 0 for d in c.strides)]
            if not usable:
                continue
            small, gaps = coverage_gaps(composed.map, usable, modulus, frontier)
            if gaps:
                last_gaps = gaps
                continue
            outside = []
            for n in small:
                if n not in member_cache:
                    member_cache[n] = _member_of_j(n, k0, composed, gb)
                if not member_cache[n]:
                    outside.append(n)
            if outside:
                raise NotInIdealError(
                    f"f{outside[0]} is not in J, so the ideal is not generated by n <= {k0}",
                    outside,
                )
            fact = residue_coverage(composed.map, modulus, _covered_residues(usable, modulus, q))
            return Certificate(
                problem_hash=composed.problem_hash(),
                j_indices=j_indices,
                lattice=lattice,
                shift_certs=tuple(usable),
                residue_facts=(fact,),
                small_cases=tuple(small),
                frontier=frontier,
                modulus=modulus,
                order=order.kind,
                generators=generators,
            )
    witnesses = [point for _, point, _ in last_gaps]
    raise CoverageError(
        f"coverage argument does not close up to frontier {max_frontier}; "
        f"e.g. n = {witnesses[0] if witnesses else '?'} is not covered. "
        f"Try larger k0, k1 or stride_max.",
        witnesses,
    )


def _member_of_j(n: Index, k0: Index, composed: ComposedFamily, gb: GroebnerBasis) -> bool:
    return is_member(composed.instantiate(n), gb)


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


def check_certificate(cert: Certificate, composed: ComposedFamily,
                      order: MonomialOrder | str | None = None) -> CheckResult:
    """Re-verify a certificate from scratch.

    Rebuilds J and its basis, recomputes every lattice entry, each shift
    certificate's bound, each residue fact and the covering argument.
    """
    order = as_order(order if order is not None else cert.order)
    p, q = composed.num_params, composed.outer.num_params
    if cert.problem_hash != composed.problem_hash():
        return CheckResult(False, "problem hash does not match this family")
    if not cert.j_indices or any(len(n) != p for n in cert.j_indices):
        return CheckResult(False, "malformed J indices")
    if len(cert.lattice.box) != q or len(cert.frontier) != p or cert.modulus < 1:
        return CheckResult(False, "malformed lattice box, frontier or modulus")

    gb = buchberger([composed.instantiate(n) for n in cert.j_indices], order)
    for m in lattice_points(cert.lattice.box):
        if is_member(instantiate(composed.outer, m), gb) != cert.lattice.entries[m]:
            return CheckResult(False, f"lattice entry g{m} is wrong")

    for c in cert.shift_certs:
        if any(cert.modulus % d for d in c.strides):
            return CheckResult(False, f"stride {c.strides} does not divide modulus {cert.modulus}")
        problem = verify_shift_certificate(c, composed.outer, cert.lattice)
        if problem:
            return CheckResult(False, problem)

    for fact in cert.residue_facts:
        try:
            residue_coverage(composed.map, fact.modulus, fact.covered_residues)
        except (ResidueCoverageError, ValueError) as exc:
            return CheckResult(False, f"residue fact mod {fact.modulus} fails: {exc}")
        expected = _covered_residues(cert.shift_certs, fact.modulus, q) if fact.modulus == cert.modulus else None
        if expected is not None and not fact.covered_residues <= expected:
            return CheckResult(False, f"residue fact mod {fact.modulus} claims residues no certificate covers")
    if not any(f.modulus == cert.modulus for f in cert.residue_facts):
        return CheckResult(False, f"no residue fact for modulus {cert.modulus}")

    small, gaps = coverage_gaps(composed.map, cert.shift_certs, cert.modulus, cert.frontier)
    if gaps:
        return CheckResult(False, f"coverage gap at n = {gaps[0][1]}")
    if sorted(small) != sorted(cert.small_cases):
        return CheckResult(False, "small cases do not match the frontier")
    for n in small:
        if not is_member(composed.instantiate(n), gb):
            return CheckResult(False, f"small case f{n} is not in J")
    return CheckResult(True, "ok")
