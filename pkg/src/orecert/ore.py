"""Noncommutative differential-operator arithmetic.

Three operator types share the normal form "series coefficients to the left
of derivation monomials":

* :class:`OreOp` -- univariate operators with Laurent-series scalars, the
  right-Euclidean ring all module linear algebra runs over;
* :class:`DiffOp` -- multivariate operators with power-series coefficients;
* :class:`IntOre` -- exact integer-coefficient polynomial operators, the
  probe elements fed into span generators.

Multiplication uses the Leibniz normalization  d*p = p*d + p'  (iterated),
so products always come out in normal form.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .fields import QQ
from .series import (INF, Laurent, MSeries, PrecisionInsufficient,
                     RingMismatch, _check_fields)


class OreOp:
    """Operator sum_i c_i(x) d^i with univariate Laurent coefficients.

    ``coeffs[i]`` is the Laurent coefficient of ``d^i``.  A coefficient that
    is zero at working precision is treated as zero; its lost guarantee is
    folded into the operator-level cap ``prec``.
    """

    __slots__ = ("field", "coeffs", "prec")

    def __init__(self, field, coeffs, prec=INF):
        coeffs = [c.truncate(prec) if prec != INF else c for c in coeffs]
        while coeffs and coeffs[-1].is_zero:
            top = coeffs.pop()
            prec = min(prec, top.prec)
        self.field = field
        self.coeffs = tuple(coeffs)
        self.prec = prec

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, field=QQ):
        return cls(field, [])

    @classmethod
    def from_scalar(cls, c, field=QQ):
        if not isinstance(c, Laurent):
            c = Laurent.const(c, field)
        return cls(c.field, [c])

    @classmethod
    def d_pow(cls, k, field=QQ, scalar=1):
        cs = [Laurent.zero(field)] * k + [Laurent.const(scalar, field)]
        return cls(field, cs)

    @classmethod
    def x_pow(cls, k, field=QQ):
        return cls(field, [Laurent.x_pow(k, field)])

    @classmethod
    def from_coeffs(cls, coeffs, field=QQ):
        return cls(field, list(coeffs))

    # -- structure ------------------------------------------------------

    @property
    def order(self):
        """d-order; -1 for the zero operator."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self):
        return not self.coeffs

    def lead(self):
        if self.is_zero:
            if self.prec != INF:
                raise PrecisionInsufficient(
                    "leading coefficient zero at working precision")
            raise ValueError("zero operator has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, i):
        if 0 <= i <= self.order:
            return self.coeffs[i]
        return Laurent.zero(self.field, self.prec)

    def as_scalar(self):
        """The order-<=0 operator as a Laurent scalar."""
        if self.order > 0:
            raise ValueError("operator has positive d-order")
        return self.coeffs[0] if self.coeffs else Laurent.zero(self.field, self.prec)

    def min_known_prec(self):
        precs = [self.prec] + [c.prec for c in self.coeffs]
        return min(precs)

    # -- ring operations --------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, OreOp):
            return other
        if isinstance(other, Laurent):
            return OreOp(other.field, [other])
        return OreOp.from_scalar(other, self.field)

    def __add__(self, other):
        other = self._coerce(other)
        _check_fields(self, other)
        n = max(len(self.coeffs), len(other.coeffs))
        cs = [self.coeff(i) + other.coeff(i) for i in range(n)]
        return OreOp(self.field, cs, min(self.prec, other.prec))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __neg__(self):
        return OreOp(self.field, [-c for c in self.coeffs], self.prec)

    def __mul__(self, other):
        """Product in normal form via the Leibniz rule."""
        other = self._coerce(other)
        _check_fields(self, other)
        if self.is_zero or other.is_zero:
            return OreOp(self.field, [], min(self.prec, other.prec))
        out = {}
        for i, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            for j, b in enumerate(other.coeffs):
                if b.is_zero:
                    continue
                # d^i * b = sum_w C(i,w) b^(w) d^(i-w)
                for w in range(i + 1):
                    c = a * b.derivative(w)
                    if math.comb(i, w) != 1:
                        c = c.scale(math.comb(i, w))
                    k = i - w + j
                    out[k] = out.get(k, Laurent.zero(self.field)) + c
        n = max(out) + 1
        cs = [out.get(i, Laurent.zero(self.field)) for i in range(n)]
        return OreOp(self.field, cs, min(self.prec, other.prec))

    def __rmul__(self, other):
        return self._coerce(other) * self

    def scale(self, c):
        """Left multiplication by a field constant or Laurent scalar."""
        if isinstance(c, Laurent):
            return OreOp(self.field, [c * a for a in self.coeffs],
                         min(self.prec, c.prec if not c.is_exact else INF))
        return OreOp(self.field, [a.scale(c) for a in self.coeffs], self.prec)

    def rmul_x(self):
        """Right multiplication by x:  (c d^i) x = c x d^i + i c d^(i-1)."""
        n = len(self.coeffs)
        out = [Laurent.zero(self.field) for _ in range(n)]
        x = Laurent.x_pow(1, self.field)
        for i, c in enumerate(self.coeffs):
            out[i] = out[i] + c * x
            if i > 0:
                out[i - 1] = out[i - 1] + c.scale(i)
        return OreOp(self.field, out, self.prec)

    def rmul_d(self):
        """Right multiplication by d (shift of d-powers)."""
        return OreOp(self.field,
                     [Laurent.zero(self.field)] + list(self.coeffs), self.prec)

    def apply(self, f):
        """Action on a Laurent series, d acting as d/dx."""
        if not isinstance(f, Laurent):
            f = Laurent.const(f, self.field)
        _check_fields(self, f)
        out = Laurent.zero(self.field, INF)
        for i, c in enumerate(self.coeffs):
            out = out + c * f.derivative(i)
        return out.truncate(self.prec)

    # -- commutators ------------------------------------------------------

    def comm_x(self, nu):
        """nu-fold commutator with x:  A -> A x - x A, iterated."""
        if nu < 1:
            raise ValueError("nu must be >= 1")
        a = self
        x = OreOp.x_pow(1, self.field)
        for _ in range(nu):
            a = a.rmul_x() - x * a
        return a

    def comm_d(self, nu):
        """nu-fold commutator with d:  A -> A d - d A, iterated."""
        if nu < 1:
            raise ValueError("nu must be >= 1")
        a = self
        d = OreOp.d_pow(1, self.field)
        for _ in range(nu):
            a = a.rmul_d() - d * a
        return a

    def dpoly_derivative(self, nu):
        """Coefficientwise nu-th derivative in d: c_j d^j -> c_j j!/(j-nu)! d^(j-nu).

        Independent closed form for :meth:`comm_x`.
        """
        cs = [self.coeffs[j].scale(math.perm(j, nu))
              for j in range(nu, len(self.coeffs))]
        return OreOp(self.field, cs, self.prec)

    # -- Euclidean structure ------------------------------------------------

    def divmod_right(self, other):
        """Right division: self = q * other + r with ord(r) < ord(other)."""
        other = self._coerce(other)
        _check_fields(self, other)
        if other.is_zero:
            if other.prec != INF:
                raise PrecisionInsufficient("divisor zero at working precision")
            raise ZeroDivisionError("division by the zero operator")
        lead_inv = other.lead().invert()
        k = other.order
        r = self
        q = OreOp.zero(self.field)
        while not r.is_zero and r.order >= k:
            c = r.lead() * lead_inv
            t = OreOp(self.field,
                      [Laurent.zero(self.field)] * (r.order - k) + [c])
            q = q + t
            r2 = r - t * other
            if not r2.is_zero and r2.order >= r.order:
                raise PrecisionInsufficient("division failed to reduce order")
            r = r2
        return q, r

    def normalize_monic(self):
        """Return (unit, monic) with self = unit * monic, unit a Laurent scalar."""
        unit = self.lead()
        inv = unit.invert()
        return unit, self.scale(inv)

    def truncate(self, upto):
        return OreOp(self.field, list(self.coeffs), min(self.prec, upto))

    def equal_mod(self, other, upto):
        other = self._coerce(other)
        if upto > self.prec or upto > other.prec:
            raise PrecisionInsufficient(
                f"operator congruence mod x^{upto} exceeds precision cap")
        n = max(len(self.coeffs), len(other.coeffs))
        return all(self.coeff(i).equal_mod(other.coeff(i), upto) for i in range(n))

    def __eq__(self, other):
        if not isinstance(other, (OreOp, Laurent, int, Fraction)):
            return NotImplemented
        other = self._coerce(other)
        return (self.field is other.field and self.coeffs == other.coeffs
                and self.prec == other.prec)

    def __hash__(self):
        return hash((self.coeffs, self.prec))

    def __repr__(self):
        parts = [f"({c!r})*d^{i}" for i, c in enumerate(self.coeffs)
                 if not c.is_zero]
        return "OreOp[" + (" + ".join(parts) or "0") + "]"


def gcrd_bezout(a, b):
    """Greatest common right divisor with Bezout data.

    Returns (g, u, v) with u*a + v*b = g, g monic, and g right-dividing both
    inputs with zero remainder at precision.
    """
    field = a.field
    one = OreOp.from_scalar(1, field)
    zero = OreOp.zero(field)
    r0, r1 = a, b
    u0, v0 = one, zero
    u1, v1 = zero, one
    if r0.is_zero and r1.is_zero:
        raise ValueError("gcrd of two zero operators")
    while not r1.is_zero:
        q, r2 = r0.divmod_right(r1)
        r0, r1 = r1, r2
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    unit, g = r0.normalize_monic()
    w = unit.invert()
    return g, u0.scale(w), v0.scale(w)


def lclm(a, b):
    """Least common left multiple with cofactors.

    Returns (m, s, t) monic with m = s*a = t*b of minimal d-order.
    """
    if a.is_zero or b.is_zero:
        raise ValueError("lclm needs nonzero operators")
    field = a.field
    one = OreOp.from_scalar(1, field)
    zero = OreOp.zero(field)
    r0, r1 = a, b
    u0, u1 = one, zero
    v0, v1 = zero, one
    while not r1.is_zero:
        q, r2 = r0.divmod_right(r1)
        r0, r1 = r1, r2
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    # u1*a + v1*b = 0, so u1*a is a common left multiple of minimal order
    m = u1 * a
    unit, m_monic = m.normalize_monic()
    w = unit.invert()
    return m_monic, u1.scale(w), (-v1).scale(w)


class DiffOp:
    """Multivariate operator: finite sum of power series times d-monomials."""

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field, nvars, terms):
        data = {}
        for dexp, p in dict(terms).items():
            dexp = tuple(int(e) for e in dexp)
            if len(dexp) != nvars or any(e < 0 for e in dexp):
                raise RingMismatch("bad derivation exponent tuple")
            if p.nvars != nvars:
                raise RingMismatch("series arity differs from operator arity")
            if not p.is_zero:
                data[dexp] = data.get(dexp, MSeries.zero(nvars, field)) + p
        self.field = field
        self.nvars = nvars
        self.terms = {e: p for e, p in data.items() if not p.is_zero}

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, nvars, field=QQ):
        return cls(field, nvars, {})

    @classmethod
    def from_series(cls, p):
        return cls(p.field, p.nvars, {(0,) * p.nvars: p})

    @classmethod
    def d_monomial(cls, dexp, nvars, field=QQ, coeff=None):
        if coeff is None:
            coeff = MSeries.one(nvars, field)
        return cls(field, nvars, {tuple(dexp): coeff})

    # -- structure ------------------------------------------------------

    @property
    def is_zero(self):
        return not self.terms

    def order(self):
        """Highest total d-degree; -1 for zero."""
        return max((sum(e) for e in self.terms), default=-1)

    def min_known_prec(self):
        return min((p.prec for p in self.terms.values()), default=INF)

    def involves(self, var):
        """Whether x_var or d_var occurs."""
        for dexp, p in self.terms.items():
            if dexp[var] != 0:
                return True
            if any(e[var] != 0 for e in p.coeffs):
                return True
        return False

    # -- arithmetic ---------------------------------------------------------

    def _binop_check(self, other):
        _check_fields(self, other)
        if self.nvars != other.nvars:
            raise RingMismatch("operator arity mismatch")

    def __add__(self, other):
        self._binop_check(other)
        data = dict(self.terms)
        for e, p in other.terms.items():
            data[e] = data[e] + p if e in data else p
        return DiffOp(self.field, self.nvars, data)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return DiffOp(self.field, self.nvars,
                      {e: -p for e, p in self.terms.items()})

    def __mul__(self, other):
        self._binop_check(other)
        n = self.nvars
        out = {}
        for da, pa in self.terms.items():
            for db, pb in other.terms.items():
                # d^da * pb = sum_w prod C(da_i, w_i) (D^w pb) d^(da-w)
                for w, coef, dpb in _leibniz_terms(da, pb):
                    de = tuple(da[i] - w[i] + db[i] for i in range(n))
                    q = pa * dpb
                    if coef != 1:
                        q = q.scale(coef)
                    out[de] = out[de] + q if de in out else q
        return DiffOp(self.field, n, out)

    def scale(self, p):
        """Left multiplication by a series or constant."""
        if not isinstance(p, MSeries):
            p = MSeries.const(p, self.nvars, self.field)
        return DiffOp(self.field, self.nvars,
                      {e: p * q for e, q in self.terms.items()})

    def apply(self, f):
        """Action on a power series."""
        if f.nvars != self.nvars:
            raise RingMismatch("series arity differs from operator arity")
        out = MSeries.zero(self.nvars, self.field)
        for dexp, p in self.terms.items():
            g = f
            for i, k in enumerate(dexp):
                if k:
                    g = g.derivative(i, k)
            out = out + p * g
        return out

    def linear_change(self, matrix):
        """Apply the ring automorphism induced by ``x -> matrix . x``.

        Series coefficients are substituted directly; derivations transform
        by the inverse transpose so that all canonical commutation relations
        are preserved.
        """
        from .util import mat_inverse, mat_transpose
        n = self.nvars
        cmat = mat_transpose(mat_inverse(matrix))
        # constant-coefficient images of each d_i commute with each other
        d_images = [
            DiffOp(self.field, n,
                   {tuple(int(t == j) for t in range(n)):
                    MSeries.const(cmat[i][j], n, self.field)
                    for j in range(n) if cmat[i][j] != 0})
            for i in range(n)
        ]
        out = DiffOp.zero(n, self.field)
        for dexp, p in self.terms.items():
            term = DiffOp.from_series(p.linear_change(matrix))
            for i, k in enumerate(dexp):
                for _ in range(k):
                    term = term * d_images[i]
            out = out + term
        return out

    def truncate(self, upto):
        return DiffOp(self.field, self.nvars,
                      {e: p.truncate(upto) for e, p in self.terms.items()})

    def equal_mod(self, other, upto):
        self._binop_check(other)
        exps = set(self.terms) | set(other.terms)
        zero = MSeries.zero(self.nvars, self.field)
        return all(
            self.terms.get(e, zero).equal_mod(other.terms.get(e, zero), upto)
            for e in exps)

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return (self.field is other.field and self.nvars == other.nvars
                and self.terms == other.terms)

    def __repr__(self):
        def dmono(e):
            return "*".join(f"d{i+1}^{k}" if k > 1 else f"d{i+1}"
                            for i, k in enumerate(e) if k) or "1"
        parts = [f"({p!r})*{dmono(e)}" for e, p in sorted(self.terms.items())]
        return "DiffOp[" + (" + ".join(parts) or "0") + "]"

    # -- univariate bridge ----------------------------------------------

    def to_ore(self):
        """The n=1 operator as an OreOp with power-series scalars."""
        if self.nvars != 1:
            raise RingMismatch("to_ore needs a univariate operator")
        order = max((e[0] for e in self.terms), default=-1)
        cs = []
        for i in range(order + 1):
            p = self.terms.get((i,))
            if p is None:
                cs.append(Laurent.zero(self.field))
            else:
                cs.append(Laurent(self.field, {e[0]: c for e, c in p.items()},
                                  p.prec))
        return OreOp(self.field, cs)

    @classmethod
    def from_ore(cls, op):
        terms = {}
        for i, c in enumerate(op.coeffs):
            if c.is_zero:
                continue
            if c.val is not None and c.val < 0:
                raise ValueError("negative valuation coefficient is not in D_1")
            terms[(i,)] = MSeries(op.field, 1,
                                  {(e,): v for e, v in c.items()}, c.prec)
        return cls(op.field, 1, terms)


def _leibniz_terms(da, pb):
    """Yield (w, multinomial coefficient, D^w pb) for w <= da componentwise."""
    n = len(da)

    def rec(i, w, coef, p):
        if i == n:
            yield tuple(w), coef, p
            return
        q = p
        for wi in range(da[i] + 1):
            if wi > 0:
                q = q.derivative(i)
            w.append(wi)
            yield from rec(i + 1, w, coef * math.comb(da[i], wi), q)
            w.pop()

    yield from rec(0, [], 1, pb)


class IntOre:
    """Exact integer-coefficient operator: map (x-power, d-power) -> int."""

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        data = {}
        for (a, b), c in dict(terms).items():
            c = int(c)
            if c:
                data[(int(a), int(b))] = data.get((a, b), 0) + c
        self.terms = {k: v for k, v in data.items() if v}

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({(0, 0): 1})

    @classmethod
    def monomial(cls, c, a, b):
        return cls({(a, b): c})

    @property
    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        data = dict(self.terms)
        for k, v in other.terms.items():
            data[k] = data.get(k, 0) + v
        return IntOre(data)

    def __neg__(self):
        return IntOre({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, n):
        return IntOre({k: n * v for k, v in self.terms.items()})

    def rmul_x(self):
        """Right multiply by x:  x^a d^b x = x^(a+1) d^b + b x^a d^(b-1)."""
        data = {}
        for (a, b), c in self.terms.items():
            data[(a + 1, b)] = data.get((a + 1, b), 0) + c
            if b:
                data[(a, b - 1)] = data.get((a, b - 1), 0) + b * c
        return IntOre(data)

    def rmul_d(self):
        return IntOre({(a, b + 1): c for (a, b), c in self.terms.items()})

    def to_ore(self, field=QQ):
        """Exact OreOp image."""
        order = max((b for _, b in self.terms), default=-1)
        cs = []
        for i in range(order + 1):
            data = {a: c for (a, b), c in self.terms.items() if b == i}
            cs.append(Laurent(field, data))
        return OreOp(field, cs)

    def degrees(self):
        """(max x-degree, max d-degree, coefficient height)."""
        if not self.terms:
            return 0, 0, 0
        return (max(a for a, _ in self.terms),
                max(b for _, b in self.terms),
                max(abs(c) for c in self.terms.values()))

    def __eq__(self, other):
        if not isinstance(other, IntOre):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        parts = [f"{c}*x^{a}*d^{b}" for (a, b), c in sorted(self.terms.items())]
        return "IntOre[" + (" + ".join(parts) or "0") + "]"
