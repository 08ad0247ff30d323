"""Problem files (``.prob``): parsing and canonical printing.

Example::

    ring Q[x, y, z, w]
    param n
    family g(n) = (2n^2 + 3)*x*y^(n + 2) + (n + 1)*z^(n + 2) + w^(n + 2)
    compose f(n) = g(n^3)
    k0 = 3

Statements are separated by newlines or ``;``. ``#`` starts a comment.
Coefficients are integer polynomials in the parameters; exponents must be
affine in the parameters with non-negative coefficients. A fixed ring
element raised to a parameter-dependent power is written ``(base 2)^(n+2)``.
Other statements: ``ideal = g(3), g(4)`` (explicit J), ``k0 = (3, 2)``,
``k1 = 30``, ``stride_max = 6``, ``order = grevlex``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from .certify import ComposedFamily, SubstitutionMap
from .family import BaseFactor, FamilyTerm, IllFormedFamilyError, ParametricFamily
from .polyring import MonomialOrder, Polynomial, RingContext, format_polynomial

Index = Tuple[int, ...]


class DSLError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0, token: str = ""):
        self.message = message
        self.line = line
        self.column = column
        self.token = token
        where = f"line {line}, column {column}: " if line else ""
        near = f" (at {token!r})" if token else ""
        super().__init__(f"{where}{message}{near}")


# -- tokens ---------------------------------------------------------------

class Token(NamedTuple):
    kind: str  # NUM, ID, OP, SEP, EOF
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(r"\s*(?:(?P<num>\d+)|(?P<id>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^()\[\],=;]))")


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    depth = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        pos = 0
        while pos < len(line):
            if line[pos:].strip() == "":
                break
            m = _TOKEN_RE.match(line, pos)
            if not m or m.end() == pos:
                col = pos + len(line[pos:]) - len(line[pos:].lstrip()) + 1
                raise DSLError("unexpected character", lineno, col, line[col - 1])
            col = m.start(m.lastgroup) + 1
            if m.group("num"):
                tokens.append(Token("NUM", m.group("num"), lineno, col))
            elif m.group("id"):
                tokens.append(Token("ID", m.group("id"), lineno, col))
            else:
                op = m.group("op")
                if op in "([":
                    depth += 1
                elif op in ")]":
                    depth -= 1
                tokens.append(Token("SEP" if op == ";" else "OP", op, lineno, col))
            pos = m.end()
        if depth <= 0:
            tokens.append(Token("SEP", "\n", lineno, len(raw) + 1))
    last = tokens[-1].line if tokens else 1
    tokens.append(Token("EOF", "", last + 1, 1))
    return tokens


# -- expression AST -------------------------------------------------------

class Node(NamedTuple):
    kind: str  # num, name, add, sub, neg, mul, pow, base
    args: tuple
    tok: Token


class _Parser:
    def __init__(self, tokens: List[Token]):
        self.toks = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, message: str, tok: Optional[Token] = None) -> DSLError:
        tok = tok or self.tok
        return DSLError(message, tok.line, tok.col, tok.text if tok.text != "\n" else "end of line")

    def expect(self, text: str) -> Token:
        if self.tok.text != text:
            raise self.error(f"expected {text!r}")
        return self.next()

    def ident(self) -> Token:
        if self.tok.kind != "ID":
            raise self.error("expected an identifier")
        return self.next()

    def ident_list(self, closer: Optional[str] = None) -> List[Token]:
        names = [self.ident()]
        while self.tok.text == ",":
            self.next()
            names.append(self.ident())
        if closer:
            self.expect(closer)
        return names

    def at_end_of_statement(self) -> bool:
        return self.tok.kind in ("SEP", "EOF")

    # expr := term (('+'|'-') term)*
    def expr(self) -> Node:
        node = self.term()
        while self.tok.text in ("+", "-"):
            op = self.next()
            rhs = self.term()
            node = Node("add" if op.text == "+" else "sub", (node, rhs), op)
        return node

    def term(self) -> Node:
        node = self.unary()
        while True:
            if self.tok.text == "*":
                op = self.next()
                node = Node("mul", (node, self.unary()), op)
            elif self.tok.kind in ("ID", "NUM") or self.tok.text == "(":
                # implicit multiplication, e.g. 2n^2
                op = self.tok
                node = Node("mul", (node, self.power()), op)
            else:
                return node

    def unary(self) -> Node:
        if self.tok.text == "-":
            op = self.next()
            return Node("neg", (self.unary(),), op)
        if self.tok.text == "+":
            self.next()
            return self.unary()
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.tok.text == "^":
            op = self.next()
            return Node("pow", (base, self.unary()), op)
        return base

    def atom(self) -> Node:
        t = self.tok
        if t.kind == "NUM":
            self.next()
            return Node("num", (int(t.text),), t)
        if t.kind == "ID":
            self.next()
            return Node("name", (t.text,), t)
        if t.text == "(":
            self.next()
            if self.tok.kind == "ID" and self.tok.text == "base":
                kw = self.next()
                inner = self.expr()
                self.expect(")")
                return Node("base", (inner,), kw)
            inner = self.expr()
            self.expect(")")
            return inner
        raise self.error("expected a number, name or '('")


# -- semantic evaluation --------------------------------------------------

Affine = Tuple[Tuple[int, ...], int]  # (coefficients per parameter, constant)


@dataclass
class _Mono:
    coef: Polynomial
    exps: List[Affine]
    bases: Dict[Polynomial, Affine] = field(default_factory=dict)


def _collect(monos: List[_Mono]) -> List[_Mono]:
    """Merge terms with identical exponent data, keeping first-seen order."""
    merged: Dict[tuple, _Mono] = {}
    for m in monos:
        key = (tuple(m.exps), frozenset(m.bases.items()))
        if key in merged:
            prev = merged[key]
            merged[key] = _Mono(prev.coef + m.coef, prev.exps, prev.bases)
        else:
            merged[key] = m
    return [m for m in merged.values() if not m.coef.is_zero()]


def _affine_add(a: Affine, b: Affine) -> Affine:
    return tuple(x + y for x, y in zip(a[0], b[0])), a[1] + b[1]


def _affine_scale(a: Affine, k: int) -> Affine:
    return tuple(x * k for x in a[0]), a[1] * k


class _Evaluator:
    def __init__(self, ring: RingContext, params: RingContext, declared: Sequence[str]):
        self.ring = ring
        self.params = params
        self.declared = set(declared)

    def zero_affine(self) -> Affine:
        return (0,) * self.params.dimension, 0

    def param_poly(self, node: Node, what: str = "expression") -> Polynomial:
        """Evaluate an integer polynomial in the parameters."""
        k, a, tok = node
        P = self.params
        if k == "num":
            return P.constant(a[0])
        if k == "name":
            name = a[0]
            if name in P.variable_names:
                return P.variable(name)
            if name in self.ring.variable_names:
                raise DSLError(f"ring variable not allowed in {what}", tok.line, tok.col, name)
            raise self._unknown(tok)
        if k == "add":
            return self.param_poly(a[0], what) + self.param_poly(a[1], what)
        if k == "sub":
            return self.param_poly(a[0], what) - self.param_poly(a[1], what)
        if k == "neg":
            return -self.param_poly(a[0], what)
        if k == "mul":
            return self.param_poly(a[0], what) * self.param_poly(a[1], what)
        if k == "pow":
            return self.param_poly(a[0], what) ** self._const_exponent(a[1])
        raise DSLError(f"'base' is not allowed in {what}", tok.line, tok.col, tok.text)

    def ring_poly(self, node: Node) -> Polynomial:
        """Evaluate a fixed ring element (no parameters), for ``base``."""
        k, a, tok = node
        R = self.ring
        if k == "num":
            return R.constant(a[0])
        if k == "name":
            if a[0] in R.variable_names:
                return R.variable(a[0])
            if a[0] in self.params.variable_names:
                raise DSLError("a base must not depend on parameters", tok.line, tok.col, a[0])
            raise self._unknown(tok)
        if k in ("add", "sub", "mul"):
            x, y = self.ring_poly(a[0]), self.ring_poly(a[1])
            return x + y if k == "add" else x - y if k == "sub" else x * y
        if k == "neg":
            return -self.ring_poly(a[0])
        if k == "pow":
            return self.ring_poly(a[0]) ** self._const_exponent(a[1])
        raise DSLError("nested 'base'", tok.line, tok.col, tok.text)

    def _unknown(self, tok: Token) -> DSLError:
        if tok.text in self.declared:
            return DSLError(f"parameter {tok.text!r} is not an argument here", tok.line, tok.col, tok.text)
        return DSLError("unknown identifier", tok.line, tok.col, tok.text)

    def _const_exponent(self, node: Node) -> int:
        e = self.param_poly(node, "a constant exponent")
        if not e.is_constant():
            raise DSLError("exponent must be a constant here", node.tok.line, node.tok.col, node.tok.text)
        v = e.constant_value()
        if v < 0:
            raise DSLError("negative exponent", node.tok.line, node.tok.col, node.tok.text)
        return int(v)

    def affine(self, node: Node) -> Affine:
        e = self.param_poly(node, "an exponent")
        tok = node.tok
        if e.degree() > 1:
            raise DSLError(
                "exponent must be affine in the parameters (use 'compose' for higher degree)",
                tok.line, tok.col, tok.text,
            )
        p = self.params.dimension
        coeffs = []
        for j in range(p):
            unit = tuple(1 if i == j else 0 for i in range(p))
            coeffs.append(e.coefficient(unit))
        const = e.coefficient((0,) * p)
        if any(c < 0 for c in coeffs) or const < 0:
            raise DSLError("negative coefficient in exponent form", tok.line, tok.col, tok.text)
        return tuple(int(c) for c in coeffs), int(const)

    def monos(self, node: Node) -> List[_Mono]:
        k, a, tok = node
        R, P = self.ring, self.params
        r = R.dimension
        if k == "num":
            return [_Mono(P.constant(a[0]), [self.zero_affine()] * r)]
        if k == "name":
            name = a[0]
            if name in P.variable_names:
                return [_Mono(P.variable(name), [self.zero_affine()] * r)]
            if name in R.variable_names:
                i = R.index(name)
                exps = [self.zero_affine()] * r
                exps[i] = ((0,) * P.dimension, 1)
                return [_Mono(P.one, exps)]
            raise self._unknown(tok)
        if k == "add":
            return _collect(self.monos(a[0]) + self.monos(a[1]))
        if k == "sub":
            return _collect(self.monos(a[0]) + [self._neg(m) for m in self.monos(a[1])])
        if k == "neg":
            return [self._neg(m) for m in self.monos(a[0])]
        if k == "mul":
            return _collect([self._mul(x, y) for x in self.monos(a[0]) for y in self.monos(a[1])])
        if k == "base":
            base = self.ring_poly(a[0])
            return [_Mono(P.one, [self.zero_affine()] * r, {base: ((0,) * P.dimension, 1)})]
        if k == "pow":
            return self._pow(a[0], a[1], tok)
        raise AssertionError(k)

    def _neg(self, m: _Mono) -> _Mono:
        return _Mono(-m.coef, m.exps, m.bases)

    def _mul(self, x: _Mono, y: _Mono) -> _Mono:
        bases = dict(x.bases)
        for b, e in y.bases.items():
            bases[b] = _affine_add(bases[b], e) if b in bases else e
        return _Mono(x.coef * y.coef, [_affine_add(u, v) for u, v in zip(x.exps, y.exps)], bases)

    def _pow(self, base_node: Node, exp_node: Node, tok: Token) -> List[_Mono]:
        exp_poly = self.param_poly(exp_node, "an exponent")
        if exp_poly.is_constant():
            k = self._const_exponent(exp_node)
            out = [_Mono(self.params.one, [self.zero_affine()] * self.ring.dimension)]
            base = self.monos(base_node)
            for _ in range(k):
                out = [self._mul(x, y) for x in out for y in base]
            return out
        aff = self.affine(exp_node)
        base = self.monos(base_node)
        if len(base) != 1:
            raise DSLError("only a monomial or a (base ...) can have a parameter-dependent exponent",
                           tok.line, tok.col, tok.text)
        m = base[0]
        if not m.coef.is_constant() or any(any(row) for row, _ in m.exps) or any(any(row) for row, _ in m.bases.values()):
            raise DSLError("a parameter-dependent exponent needs a constant base",
                           tok.line, tok.col, tok.text)
        exps = [_affine_scale(aff, c) for _, c in m.exps]
        bases = {b: _affine_scale(aff, c) for b, (_, c) in m.bases.items()}
        c = m.coef.constant_value()
        if c != 1:
            if c.denominator != 1:
                raise DSLError("base must be an integer", tok.line, tok.col, tok.text)
            key = self.ring.constant(c)
            bases[key] = _affine_add(bases[key], aff) if key in bases else aff
        return [_Mono(self.params.one, exps, bases)]

    def family_terms(self, node: Node) -> List[FamilyTerm]:
        terms = []
        monos = self.monos(node)
        if not monos:
            raise DSLError("family is identically zero", node.tok.line, node.tok.col, node.tok.text)
        for m in monos:
            if m.coef.is_zero():
                raise DSLError("term with zero coefficient", node.tok.line, node.tok.col, node.tok.text)
            if not m.coef.is_integral():
                raise DSLError("coefficients must be integers", node.tok.line, node.tok.col, node.tok.text)
            terms.append(FamilyTerm(
                m.coef,
                tuple(row for row, _ in m.exps),
                tuple(c for _, c in m.exps),
                tuple(BaseFactor(b, row, c) for b, (row, c) in m.bases.items()),
            ))
        return terms


# -- problem spec ---------------------------------------------------------

@dataclass(frozen=True)
class ProblemSpec:
    ring: RingContext
    params: Tuple[str, ...]
    family_name: str
    family: ParametricFamily
    compose_name: Optional[str] = None
    compose_params: Tuple[str, ...] = ()
    substitution: Optional[SubstitutionMap] = None
    ideal: Optional[Tuple[Tuple[str, Index], ...]] = None
    k0: Optional[Index] = None
    k1: Optional[Index] = None
    stride_max: Optional[int] = None
    order: Optional[str] = None

    @property
    def composed(self) -> Optional[ComposedFamily]:
        if self.substitution is None:
            return None
        return ComposedFamily(self.family, self.substitution)


_KEYWORDS = {"ring", "param", "family", "compose", "ideal", "base", "k0", "k1", "stride_max", "order"}


def parse_problem(text: str) -> ProblemSpec:
    """Parse a ``.prob`` document; raises :class:`DSLError` with line and column."""
    ps = _Parser(tokenize(text))
    ring: Optional[RingContext] = None
    params: List[str] = []
    fields: Dict[str, object] = {}

    while ps.tok.kind != "EOF":
        if ps.tok.kind == "SEP":
            ps.next()
            continue
        head = ps.ident()
        word = head.text
        if word == "ring":
            if ring is not None:
                raise ps.error("ring declared twice", head)
            field_tok = ps.ident()
            if field_tok.text != "Q":
                raise ps.error("only the rational field Q is supported", field_tok)
            ps.expect("[")
            names = ps.ident_list("]")
            _check_names(names, set(params), "variable")
            ring = RingContext(t.text for t in names)
        elif word == "param":
            names = ps.ident_list()
            _check_names(names, set(params) | set(ring.variable_names if ring else ()), "parameter")
            params += [t.text for t in names]
        elif word == "family":
            if ring is None:
                raise ps.error("declare the ring before the family", head)
            if "family" in fields:
                raise ps.error("only one family per problem", head)
            name = ps.ident()
            ps.expect("(")
            args = ps.ident_list(")")
            fam_params = _declared(args, params)
            ps.expect("=")
            body = ps.expr()
            ev = _Evaluator(ring, RingContext(fam_params), params)
            try:
                fam = ParametricFamily(ring, fam_params, ev.family_terms(body))
            except IllFormedFamilyError as exc:
                raise DSLError(str(exc), body.tok.line, body.tok.col, body.tok.text) from None
            fields.update(family=fam, family_name=name.text)
        elif word == "compose":
            if "family" not in fields:
                raise ps.error("define the family before composing it", head)
            name = ps.ident()
            ps.expect("(")
            args = ps.ident_list(")")
            inner = _declared(args, params)
            ps.expect("=")
            callee = ps.ident()
            if callee.text != fields["family_name"]:
                raise ps.error("unknown family", callee)
            ps.expect("(")
            ev = _Evaluator(ring, RingContext(inner), params)
            comps = [ev.param_poly(ps.expr(), "a substitution")]
            while ps.tok.text == ",":
                ps.next()
                comps.append(ev.param_poly(ps.expr(), "a substitution"))
            close = ps.expect(")")
            fam = fields["family"]
            if len(comps) != fam.num_params:
                raise ps.error(f"{callee.text} takes {fam.num_params} argument(s), got {len(comps)}", close)
            for c in comps:
                if any(v < 0 for _, v in c):
                    raise ps.error("substitution must have non-negative coefficients", callee)
            fields.update(compose_name=name.text, compose_params=tuple(inner),
                          substitution=SubstitutionMap(comps))
        elif word == "ideal":
            ps.expect("=")
            items = [_call(ps, fields)]
            while ps.tok.text == ",":
                ps.next()
                items.append(_call(ps, fields))
            fields["ideal"] = tuple(items)
        elif word in ("k0", "k1"):
            ps.expect("=")
            fields[word] = _int_vector(ps)
        elif word == "stride_max":
            ps.expect("=")
            (v,) = _int_vector(ps, allow_tuple=False)
            if v < 1:
                raise ps.error("stride_max must be at least 1", head)
            fields["stride_max"] = v
        elif word == "order":
            ps.expect("=")
            t = ps.ident()
            try:
                MonomialOrder(t.text)
            except ValueError:
                raise ps.error("unknown monomial order", t) from None
            fields["order"] = t.text
        else:
            raise ps.error("unknown statement", head)
        if not ps.at_end_of_statement():
            raise ps.error("unexpected text after statement")

    if ring is None or "family" not in fields:
        raise DSLError("a problem needs a 'ring' and a 'family' statement")
    spec = ProblemSpec(ring=ring, params=tuple(params), **fields)
    _validate_dimensions(spec)
    return spec


def _check_names(names: Sequence[Token], taken: set, what: str) -> None:
    seen = set()
    for t in names:
        if t.text in _KEYWORDS:
            raise DSLError(f"{t.text!r} is reserved", t.line, t.col, t.text)
        if t.text in taken or t.text in seen:
            raise DSLError(f"{what} name clashes with an existing name", t.line, t.col, t.text)
        seen.add(t.text)


def _declared(args: Sequence[Token], params: Sequence[str]) -> List[str]:
    out = []
    for t in args:
        if t.text not in params:
            raise DSLError("undeclared parameter", t.line, t.col, t.text)
        if t.text in out:
            raise DSLError("repeated parameter", t.line, t.col, t.text)
        out.append(t.text)
    return out


def _call(ps: _Parser, fields) -> Tuple[str, Index]:
    name = ps.ident()
    if name.text not in (fields.get("family_name"), fields.get("compose_name")):
        raise ps.error("unknown family", name)
    ps.expect("(")
    vals = [_nonneg_int(ps)]
    while ps.tok.text == ",":
        ps.next()
        vals.append(_nonneg_int(ps))
    ps.expect(")")
    return name.text, tuple(vals)


def _nonneg_int(ps: _Parser) -> int:
    if ps.tok.kind != "NUM":
        raise ps.error("expected a non-negative integer")
    return int(ps.next().text)


def _int_vector(ps: _Parser, allow_tuple: bool = True) -> Index:
    if allow_tuple and ps.tok.text == "(":
        ps.next()
        vals = [_nonneg_int(ps)]
        while ps.tok.text == ",":
            ps.next()
            vals.append(_nonneg_int(ps))
        ps.expect(")")
        return tuple(vals)
    return (_nonneg_int(ps),)


def _validate_dimensions(spec: ProblemSpec) -> None:
    q = spec.family.num_params
    p = spec.substitution.inner_param_count if spec.substitution else q
    if spec.k0 is not None and len(spec.k0) not in (1, p):
        raise DSLError(f"k0 must have 1 or {p} entries")
    if spec.k1 is not None and len(spec.k1) not in (1, q):
        raise DSLError(f"k1 must have 1 or {q} entries")
    for name, idx in spec.ideal or ():
        want = q if name == spec.family_name else p
        if len(idx) != want:
            raise DSLError(f"{name}{idx} needs {want} index value(s)")


# -- printing -------------------------------------------------------------

def _affine_text(row: Sequence[int], const: int, names: Sequence[str]) -> str:
    parts = [name if a == 1 else f"{a}*{name}" for a, name in zip(row, names) if a]
    if const or not parts:
        parts.append(str(const))
    return " + ".join(parts)


def _power_text(base: str, row: Sequence[int], const: int, names: Sequence[str]) -> str:
    if not any(row):
        return base if const == 1 else f"{base}^{const}"
    text = _affine_text(row, const, names)
    if sum(1 for a in row if a) == 1 and not const and all(a in (0, 1) for a in row):
        return f"{base}^{text}"
    return f"{base}^({text})"


def _term_text(t: FamilyTerm, ring: RingContext, names: Sequence[str]) -> Tuple[int, str]:
    """Sign and unsigned text of one family term."""
    factors = []
    for var, row, const in zip(ring.variable_names, t.exponent_matrix, t.exponent_offset):
        if any(row) or const:
            factors.append(_power_text(var, row, const, names))
    for b in t.bases:
        factors.append(_power_text(f"(base {format_polynomial(b.base)})", b.row, b.offset, names))

    c = t.coefficient
    sign = 1
    if len(c) == 1:
        (_, v), = c.terms_dict.items()
        if v < 0:
            sign, c = -1, -c
    if c.is_constant() and c.constant_value() == 1 and factors:
        coef = []
    elif len(c) == 1:
        coef = [format_polynomial(c)]
    else:
        coef = [f"({format_polynomial(c)})"]
    return sign, "*".join(coef + factors)


def format_family(fam: ParametricFamily) -> str:
    out = []
    for i, t in enumerate(fam.terms):
        sign, text = _term_text(t, fam.ring, fam.param_names)
        if i == 0:
            out.append(text if sign > 0 else f"-{text}")
        else:
            out.append(f" {'+' if sign > 0 else '-'} {text}")
    return "".join(out)


def _vector_text(v: Index) -> str:
    return str(v[0]) if len(v) == 1 else "(" + ", ".join(map(str, v)) + ")"


def format_problem(spec: ProblemSpec) -> str:
    """Canonical text; ``parse_problem(format_problem(s)) == s``."""
    lines = [f"ring Q[{', '.join(spec.ring.variable_names)}]"]
    if spec.params:
        lines.append(f"param {', '.join(spec.params)}")
    fam = spec.family
    lines.append(f"family {spec.family_name}({', '.join(fam.param_names)}) = {format_family(fam)}")
    if spec.substitution is not None:
        comps = ", ".join(format_polynomial(c) for c in spec.substitution.components)
        lines.append(f"compose {spec.compose_name}({', '.join(spec.compose_params)}) = {spec.family_name}({comps})")
    if spec.ideal:
        items = ", ".join(f"{name}({', '.join(map(str, idx))})" for name, idx in spec.ideal)
        lines.append(f"ideal = {items}")
    for key in ("k0", "k1"):
        v = getattr(spec, key)
        if v is not None:
            lines.append(f"{key} = {_vector_text(v)}")
    if spec.stride_max is not None:
        lines.append(f"stride_max = {spec.stride_max}")
    if spec.order is not None:
        lines.append(f"order = {spec.order}")
    return "\n".join(lines) + "\n"
