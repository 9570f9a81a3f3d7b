"""Expression parsing, canonical printing, and the certificate file format.

The grammar is deliberately small and unambiguous (explicit ``*``, no
juxtaposition):

    expr   := ['-'] term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := base ('^' ['-'] integer)?
    base   := rational | 't' | x<i> | d<i> | '(' expr ')' | 'O(x^' integer ')'

``rational`` is ``p`` or ``p/q`` in lowest terms; ``x``/``d`` without an
index mean ``x1``/``d1``; ``t`` is the parameter of the Q(t) coefficient
field; ``O(x^N)`` is a precision annotation (exponent bound for univariate
Laurent scalars, total-degree bound for multivariate series).

Printing is canonical: operator terms by descending derivation exponent
(reverse-lex for tuples), coefficients by ascending exponent, rationals in
lowest terms, one trailing ``O(x^P)`` where P is the least guaranteed
precision of the element (the printer normalizes everything to that uniform
precision first, see :func:`normalize`).  ``parse(print(e)) == e`` holds on
normalized elements.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .fields import FIELDS, QQ, QQT, RatFunc
from .ore import DiffOp, IntOre, OreOp
from .series import INF, Laurent, MSeries


class ExprError(ValueError):
    """Syntax or evaluation error, with a column when known."""

    def __init__(self, message, col=None):
        if col is not None:
            message = f"{message} (column {col})"
        super().__init__(message)
        self.col = col


@dataclass(frozen=True)
class RingSpec:
    """Target ring of an expression: arity and coefficient field."""

    nvars: int
    field: object

    @classmethod
    def parse(cls, text):
        parts = text.split(",")
        if len(parts) != 2:
            raise ExprError(f"ring spec {text!r} is not 'n,field'")
        try:
            n = int(parts[0])
        except ValueError:
            raise ExprError(f"bad arity in ring spec {text!r}") from None
        fname = parts[1].strip()
        if n < 1 or fname not in FIELDS:
            raise ExprError(f"unsupported ring spec {text!r}")
        return cls(n, FIELDS[fname])

    def describe(self):
        return f"{self.nvars},{self.field.name}"


# ---------------------------------------------------------------------------
# lexer / parser
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z]\d*)|([+\-*^()]))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise ExprError(f"unexpected character {text[pos]!r}", pos + 1)
        num, name, op = m.groups()
        col = m.start(m.lastindex) + 1
        if num is not None:
            tokens.append(("num", num, col))
        elif name is not None:
            tokens.append(("name", name, col))
        else:
            tokens.append(("op", op, col))
        pos = m.end()
    tokens.append(("end", "", len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val, col = self.next()
        if kind != "op" or val != op:
            raise ExprError(f"expected {op!r}, found {val or 'end of input'!r}",
                            col)

    def parse(self):
        ast = self.expr()
        kind, val, col = self.peek()
        if kind != "end":
            raise ExprError(f"unexpected trailing {val!r}", col)
        return ast

    def expr(self):
        parts = []
        sign = 1
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.next()
            sign = -1
        parts.append((sign, self.term()))
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                parts.append((1 if val == "+" else -1, self.term()))
            else:
                break
        if len(parts) == 1 and parts[0][0] == 1:
            return parts[0][1]
        return ("sum", parts)

    def term(self):
        factors = [self.factor()]
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.next()
                factors.append(self.factor())
            else:
                break
        if len(factors) == 1:
            return factors[0]
        return ("mul", factors)

    def factor(self):
        b = self.base()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.next()
            n = self.integer()
            return ("pow", b, n)
        return b

    def integer(self):
        sign = 1
        kind, val, col = self.next()
        if kind == "op" and val == "-":
            sign = -1
            kind, val, col = self.next()
        if kind != "num" or "/" in val:
            raise ExprError("expected an integer exponent", col)
        return sign * int(val)

    def base(self):
        kind, val, col = self.next()
        if kind == "num":
            if "/" in val:
                p, q = val.split("/")
                return ("rat", Fraction(int(p), int(q)))
            return ("rat", Fraction(int(val)))
        if kind == "name":
            if val == "t":
                return ("t",)
            if val == "O":
                self.expect_op("(")
                k2, v2, c2 = self.next()
                if k2 != "name" or not v2.startswith("x"):
                    raise ExprError("expected x inside O(...)", c2)
                self.expect_op("^")
                n = self.integer()
                self.expect_op(")")
                return ("prec", n)
            if val[0] in "xd":
                idx = int(val[1:]) if len(val) > 1 else 1
                if idx < 1:
                    raise ExprError(f"bad index in {val!r}", col)
                return (val[0], idx)
            raise ExprError(f"unknown symbol {val!r}", col)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise ExprError(f"expected a value, found {val or 'end of input'!r}",
                        col)


def parse_ast(text):
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def _eval(ast, ring):
    n, field = ring.nvars, ring.field
    head = ast[0]
    if head == "rat":
        if n == 1:
            return OreOp.from_scalar(field.coerce(ast[1]), field)
        return DiffOp.from_series(MSeries.const(ast[1], n, field))
    if head == "t":
        if field is not QQT:
            raise ExprError("symbol t needs the QQt coefficient field")
        if n == 1:
            return OreOp.from_scalar(QQT.t, field)
        return DiffOp.from_series(MSeries.const(QQT.t, n, field))
    if head == "x":
        i = ast[1]
        if i > n:
            raise ExprError(f"variable x{i} outside arity {n}")
        if n == 1:
            return OreOp.x_pow(1, field)
        return DiffOp.from_series(MSeries.var(i - 1, n, field))
    if head == "d":
        i = ast[1]
        if i > n:
            raise ExprError(f"symbol d{i} outside arity {n}")
        if n == 1:
            return OreOp.d_pow(1, field)
        return DiffOp.d_monomial(tuple(int(j == i - 1) for j in range(n)),
                                 n, field)
    if head == "prec":
        N = ast[1]
        if n == 1:
            return OreOp.from_scalar(Laurent.zero(field, N), field)
        return ("prec-marker", N)
    if head == "sum":
        acc = None
        cap = INF
        for sign, sub in ast[1]:
            v = _eval(sub, ring)
            if isinstance(v, tuple) and v[0] == "prec-marker":
                cap = min(cap, v[1])
                continue
            if sign < 0:
                v = -v
            acc = v if acc is None else acc + v
        if acc is None:
            acc = (OreOp.zero(field) if n == 1
                   else DiffOp.zero(n, field))
        if cap != INF:
            acc = acc.truncate(cap)
        return acc
    if head == "mul":
        acc = None
        for sub in ast[1]:
            v = _eval(sub, ring)
            if isinstance(v, tuple) and v[0] == "prec-marker":
                raise ExprError("O(...) may only appear as an added term")
            acc = v if acc is None else acc * v
        return acc
    if head == "pow":
        base = _eval(ast[1], ring)
        if isinstance(base, tuple):
            raise ExprError("O(...) cannot be raised to a power")
        e = ast[2]
        if e >= 0:
            out = (OreOp.from_scalar(1, field) if n == 1
                   else DiffOp.from_series(MSeries.one(n, field)))
            for _ in range(e):
                out = out * base
            return out
        # negative powers: series-valued subterms only
        if n == 1:
            if base.order != 0:
                raise ExprError("negative power of a non-scalar operator")
            s = base.as_scalar().invert()
            out = Laurent.one(field)
            for _ in range(-e):
                out = out * s
            return OreOp.from_scalar(out, field)
        if base.order() != 0:
            raise ExprError("negative power of a non-scalar operator")
        s = base.terms[(0,) * n].invert()
        out = MSeries.one(n, field)
        for _ in range(-e):
            out = out * s
        return DiffOp.from_series(out)
    raise ExprError(f"malformed expression node {head!r}")


def normalize(el):
    """Truncate every coefficient to the element's least guaranteed
    precision, so printing and re-parsing round-trips exactly."""
    if isinstance(el, Laurent):
        return el
    if isinstance(el, MSeries):
        return el
    if isinstance(el, OreOp):
        p = el.min_known_prec()
        if p == INF:
            return el
        return OreOp(el.field, [c.truncate(p) for c in el.coeffs], p)
    if isinstance(el, DiffOp):
        p = el.min_known_prec()
        if p == INF:
            return el
        return el.truncate(p)
    raise TypeError(f"cannot normalize {type(el).__name__}")


def parse_element(text, ring):
    """Parse and evaluate to a normalized ring element."""
    v = _eval(parse_ast(text), ring)
    if isinstance(v, tuple) and v[0] == "prec-marker":
        n, field = ring.nvars, ring.field
        v = (OreOp.from_scalar(Laurent.zero(field, v[1]), field) if n == 1
             else DiffOp.zero(n, field))
    return normalize(v)


def parse_intore(text):
    """Parse an integer-coefficient polynomial operator."""
    op = parse_element(text, RingSpec(1, QQ))
    terms = {}
    for i, c in enumerate(op.coeffs):
        for e, q in c.items():
            if e < 0 or q.denominator != 1:
                raise ExprError("not an integer polynomial operator")
            terms[(e, i)] = int(q)
    return IntOre(terms)


# ---------------------------------------------------------------------------
# canonical printing
# ---------------------------------------------------------------------------

def _poly_str(coeffs):
    """Ascending-degree polynomial in t with signs folded into the joins."""
    parts = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        mag = abs(c)
        mono = []
        if mag != 1 or i == 0:
            mono.append(str(mag))
        if i == 1:
            mono.append("t")
        elif i > 1:
            mono.append(f"t^{i}")
        piece = "*".join(mono)
        if not parts:
            parts.append(("-" if c < 0 else "") + piece)
        else:
            parts.append(("- " if c < 0 else "+ ") + piece)
    return " ".join(parts) if parts else "0"


def _coeff_factors(c):
    """(negative?, list of factor strings) for a field coefficient."""
    if isinstance(c, RatFunc):
        if c.is_rational():
            c = c.as_rational()
        else:
            nz = [(i, q) for i, q in enumerate(c.num) if q != 0]
            factors = []
            neg = False
            if len(nz) == 1:
                # monomial numerator: fold the sign out, skip parentheses
                i, q = nz[0]
                neg = q < 0
                mag = abs(q)
                if mag != 1 or i == 0 and c.den == (Fraction(1),):
                    factors.append(str(mag))
                if i == 1:
                    factors.append("t")
                elif i > 1:
                    factors.append(f"t^{i}")
            else:
                factors.append(f"({_poly_str(c.num)})")
            if c.den != (Fraction(1),):
                factors.append(f"({_poly_str(c.den)})^-1")
            return neg, factors
    neg = c < 0
    mag = abs(c)
    return neg, ([] if mag == 1 else [str(mag)])


def _join_terms(pieces):
    out = []
    for neg, factors in pieces:
        body = "*".join(factors) if factors else "1"
        if not out:
            out.append(("-" + body) if neg else body)
        else:
            out.append(("- " if neg else "+ ") + body)
    return " ".join(out)


def _print_ore(op):
    p = op.min_known_prec()
    tail = "" if p == INF else f"O(x^{p})"
    pieces = []
    for i in range(op.order, -1, -1):
        c = op.coeff(i)
        for e, q in sorted(c.items()):
            if e >= p:
                continue
            neg, factors = _coeff_factors(q)
            if e == 1:
                factors.append("x1")
            elif e != 0:
                factors.append(f"x1^{e}")
            if i == 1:
                factors.append("d1")
            elif i != 0:
                factors.append(f"d1^{i}")
            pieces.append((neg, factors))
    if not pieces:
        return tail or "0"
    body = _join_terms(pieces)
    return f"{body} + {tail}" if tail else body


def _print_diff(op):
    p = op.min_known_prec()
    tail = "" if p == INF else f"O(x^{p})"
    pieces = []
    for dexp in sorted(op.terms, reverse=True):
        series = op.terms[dexp]
        for exps in sorted(series.coeffs):
            if sum(exps) >= p:
                continue
            q = series.coeffs[exps]
            neg, factors = _coeff_factors(q)
            for j, k in enumerate(exps):
                if k == 1:
                    factors.append(f"x{j+1}")
                elif k:
                    factors.append(f"x{j+1}^{k}")
            for j, k in enumerate(dexp):
                if k == 1:
                    factors.append(f"d{j+1}")
                elif k:
                    factors.append(f"d{j+1}^{k}")
            pieces.append((neg, factors))
    if not pieces:
        return tail or "0"
    body = _join_terms(pieces)
    return f"{body} + {tail}" if tail else body


def print_element(el):
    """Deterministic canonical text for any ring element."""
    if isinstance(el, Laurent):
        el = OreOp(el.field, [el])
    if isinstance(el, MSeries):
        el = DiffOp.from_series(el) if not el.is_zero else el
        if isinstance(el, MSeries):   # zero series
            return "0" if el.prec == INF else f"O(x^{el.prec})"
    if isinstance(el, IntOre):
        el = el.to_ore(QQ)
    if isinstance(el, OreOp):
        return _print_ore(normalize(el))
    if isinstance(el, DiffOp):
        return _print_diff(normalize(el))
    raise TypeError(f"cannot print {type(el).__name__}")


# ---------------------------------------------------------------------------
# certificate files
# ---------------------------------------------------------------------------

FORMAT_LINE = "orecert certificate format 1"


def rolling_digest(data):
    """Checksum h -> (h*131 + byte) mod 2^64 over the bytes, as 16 hex digits."""
    h = 0
    for b in data:
        h = (h * 131 + b) % (1 << 64)
    return f"{h:016x}"


def write_certificates(certs):
    """Serialize a full certificate batch (one block per basis target)."""
    if not certs:
        raise ValueError("no certificates to write")
    ctx = certs[0].context
    field = ctx.field
    ring = RingSpec(1, field)
    lines = [FORMAT_LINE,
             f"ring = {ring.describe()}",
             f"precision = {certs[0].precision}",
             f"m = {ctx.rank}",
             f"alpha = {print_element(ctx.alpha)}"]
    for i, d in enumerate(ctx.deltas):
        lines.append(f"delta.{i+1} = {print_element(d)}")
    for cert in certs:
        t = cert.target + 1
        lines.append(f"target.{t}.slack = {cert.slack}")
        lines.append(f"target.{t}.terms = {len(cert.terms)}")
        for j, term in enumerate(cert.terms):
            lines.append(f"target.{t}.term.{j+1}.s = {print_element(term.s)}")
            lines.append(f"target.{t}.term.{j+1}.f = {print_element(term.f)}")
    body = "\n".join(lines) + "\n"
    return body + f"digest = {rolling_digest(body.encode('utf-8'))}\n"


class CertificateFileError(ValueError):
    """Malformed or tampered certificate file."""


def read_certificates(text):
    """Parse a certificate file back into Certificate objects.

    Verifies the trailing digest over the preceding bytes before trusting
    any content.
    """
    from .certify import Certificate, CertificateTerm, SpanGeneratorSet
    lines = text.splitlines()
    if not lines or lines[0] != FORMAT_LINE:
        raise CertificateFileError("unrecognized certificate format line")
    if not lines[-1].startswith("digest = "):
        raise CertificateFileError("missing digest line")
    body = "\n".join(lines[:-1]) + "\n"
    want = lines[-1][len("digest = "):]
    got = rolling_digest(body.encode("utf-8"))
    if want != got:
        raise CertificateFileError(f"digest mismatch: file {want}, data {got}")
    kv = {}
    for ln in lines[1:-1]:
        if " = " not in ln:
            raise CertificateFileError(f"malformed line {ln!r}")
        key, _, val = ln.partition(" = ")
        kv[key] = val
    try:
        ring = RingSpec.parse(kv["ring"])
        precision = int(kv["precision"])
        m = int(kv["m"])
        alpha = parse_element(kv["alpha"], ring)
        deltas = tuple(parse_element(kv[f"delta.{i+1}"], ring)
                       for i in range(m))
        ctx = SpanGeneratorSet(alpha=alpha, deltas=deltas)
        certs = []
        for t in range(1, m + 1):
            slack = int(kv[f"target.{t}.slack"])
            nterms = int(kv[f"target.{t}.terms"])
            terms = tuple(
                CertificateTerm(
                    s=parse_element(kv[f"target.{t}.term.{j}.s"], ring),
                    f=parse_intore(kv[f"target.{t}.term.{j}.f"]))
                for j in range(1, nterms + 1))
            certs.append(Certificate(target=t - 1, terms=terms, context=ctx,
                                     precision=precision, slack=slack))
    except KeyError as exc:
        raise CertificateFileError(f"missing field {exc.args[0]}") from None
    return certs
