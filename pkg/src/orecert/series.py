"""Exact truncated series: multivariate power series and univariate Laurent series.

All coefficients are exact field elements (Fraction or RatFunc); there is no
floating point anywhere.  Every value records how much of it is known:

* a power series is known below a total-degree bound ``prec``;
* a Laurent series is known for exponents below ``prec``.

``prec`` may be ``math.inf`` for exact (polynomial / Laurent-polynomial)
values.  Binary operations propagate the worst-case guarantee: add/sub and
power-series products keep ``min`` of the operand bounds, Laurent products
keep the minimum known window, derivation costs one exponent per order.

A value whose known coefficients all vanish is *zero at precision*: it is
treated as zero, and any operation that needs a nonzero leading coefficient
raises :class:`PrecisionInsufficient` instead of guessing.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .fields import QQ

INF = math.inf

_DEFAULT_PRECISION = 16


def default_precision():
    """Working precision used when an exact value has to be truncated."""
    return _DEFAULT_PRECISION


def set_default_precision(n):
    global _DEFAULT_PRECISION
    n = int(n)
    if n < 1:
        raise ValueError("precision must be >= 1")
    _DEFAULT_PRECISION = n


class PrecisionInsufficient(ArithmeticError):
    """Truncation hides the coefficient an operation needs."""


class RingMismatch(TypeError):
    """Operands live over different coefficient fields or variable sets."""


def _check_fields(a, b):
    if a.field is not b.field:
        raise RingMismatch(f"mixed coefficient fields {a.field} and {b.field}")


class Laurent:
    """Univariate truncated Laurent series.

    ``coeffs[i]`` is the coefficient of ``x**(val+i)``; the leading
    coefficient is nonzero.  The zero element has ``val is None`` and an
    empty window; it is exact iff ``prec`` is infinite.
    """

    __slots__ = ("field", "val", "coeffs", "prec")

    def __init__(self, field, items, prec=INF):
        pairs = sorted((e, field.coerce(c)) for e, c in dict(items).items())
        pairs = [(e, c) for e, c in pairs if e < prec and bool(c)]
        self.field = field
        self.prec = prec
        if not pairs:
            self.val = None
            self.coeffs = ()
        else:
            lo = pairs[0][0]
            hi = pairs[-1][0]
            window = [field.zero] * (hi - lo + 1)
            for e, c in pairs:
                window[e - lo] = c
            self.val = lo
            self.coeffs = tuple(window)

    # -- constructors -------------------------------------------------

    @classmethod
    def _trusted(cls, field, data, prec=INF):
        """Internal constructor: values are already coerced field elements."""
        pairs = [(e, c) for e, c in data.items() if e < prec and bool(c)]
        obj = object.__new__(cls)
        obj.field = field
        obj.prec = prec
        if not pairs:
            obj.val = None
            obj.coeffs = ()
        else:
            lo = min(e for e, _ in pairs)
            hi = max(e for e, _ in pairs)
            window = [field.zero] * (hi - lo + 1)
            for e, c in pairs:
                window[e - lo] = c
            obj.val = lo
            obj.coeffs = tuple(window)
        return obj

    @classmethod
    def _from_window(cls, field, val, window, prec=INF):
        """Internal constructor from a dense window starting at ``val``."""
        lo, hi = 0, len(window)
        if prec != INF:
            cut = prec - val
            if cut < hi:
                hi = max(cut, 0)
        while lo < hi and not bool(window[lo]):
            lo += 1
        while hi > lo and not bool(window[hi - 1]):
            hi -= 1
        obj = object.__new__(cls)
        obj.field = field
        obj.prec = prec
        if lo == hi:
            obj.val = None
            obj.coeffs = ()
        else:
            obj.val = val + lo
            obj.coeffs = tuple(window[lo:hi])
        return obj

    @classmethod
    def zero(cls, field=QQ, prec=INF):
        return cls(field, {}, prec)

    @classmethod
    def const(cls, c, field=QQ, prec=INF):
        return cls(field, {0: c}, prec)

    @classmethod
    def one(cls, field=QQ, prec=INF):
        return cls(field, {0: 1}, prec)

    @classmethod
    def x_pow(cls, k, field=QQ, prec=INF):
        return cls(field, {k: 1}, prec)

    # -- structure ----------------------------------------------------

    @property
    def is_zero(self):
        return self.val is None

    @property
    def is_exact(self):
        return self.prec == INF

    @property
    def bound(self):
        """Known lower bound for the order of vanishing."""
        return self.val if self.val is not None else self.prec

    def valuation(self):
        if self.val is None:
            if self.prec == INF:
                raise ValueError("valuation of the exact zero series")
            raise PrecisionInsufficient(
                f"valuation undetermined at precision {self.prec}")
        return self.val

    def lead(self):
        if self.val is None:
            raise PrecisionInsufficient("no leading coefficient at precision")
        return self.coeffs[0]

    def coeff(self, e):
        if e >= self.prec:
            raise PrecisionInsufficient(f"coefficient of x^{e} not known")
        if self.val is None or e < self.val or e > self.val + len(self.coeffs) - 1:
            return self.field.zero
        return self.coeffs[e - self.val]

    def items(self):
        if self.val is None:
            return
        for i, c in enumerate(self.coeffs):
            if bool(c):
                yield self.val + i, c

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Laurent):
            other = Laurent.const(other, self.field)
        _check_fields(self, other)
        prec = min(self.prec, other.prec)
        data = dict(self.items())
        for e, c in other.items():
            if e in data:
                data[e] = data[e] + c
            else:
                data[e] = c
        return Laurent._trusted(self.field, data, prec)

    def __sub__(self, other):
        if not isinstance(other, Laurent):
            other = Laurent.const(other, self.field)
        return self + (-other)

    def __neg__(self):
        return Laurent._trusted(self.field, {e: -c for e, c in self.items()},
                                self.prec)

    def __mul__(self, other):
        if not isinstance(other, Laurent):
            return self.scale(other)
        _check_fields(self, other)
        prec = min(self.bound + other.prec, other.bound + self.prec)
        if self.val is None or other.val is None:
            return Laurent.zero(self.field, prec)
        a, b = self.coeffs, other.coeffs
        v = self.val + other.val
        length = len(a) + len(b) - 1
        if prec != INF:
            length = min(length, prec - v)
            if length <= 0:
                return Laurent.zero(self.field, prec)
        if all(isinstance(c, Fraction) for c in a) and \
                all(isinstance(c, Fraction) for c in b):
            # integer convolution over a common denominator: one rational
            # normalization per output coefficient instead of per product
            da = math.lcm(*(c.denominator for c in a))
            db = math.lcm(*(c.denominator for c in b))
            ia = [int(c * da) for c in a]
            ib = [int(c * db) for c in b]
            acc = [0] * length
            for i, ca in enumerate(ia):
                if not ca:
                    continue
                stop = min(len(ib), length - i)
                for j in range(stop):
                    cb = ib[j]
                    if cb:
                        acc[i + j] += ca * cb
            den = da * db
            out = [Fraction(c, den) for c in acc]
        else:
            out = [self.field.zero] * length
            for i, ca in enumerate(a):
                if not bool(ca):
                    continue
                stop = min(len(b), length - i)
                for j in range(stop):
                    cb = b[j]
                    if bool(cb):
                        out[i + j] = out[i + j] + ca * cb
        return Laurent._from_window(self.field, v, out, prec)

    def scale(self, c):
        c = self.field.coerce(c)
        if not bool(c):
            return Laurent.zero(self.field, self.prec if not self.is_exact else INF)
        return Laurent._trusted(self.field,
                                {e: c * v for e, v in self.items()}, self.prec)

    def shift(self, k):
        """Multiply by x**k (exact)."""
        return Laurent._trusted(self.field,
                                {e + k: c for e, c in self.items()},
                                self.prec + k if self.prec != INF else INF)

    def invert(self, window=None):
        """Multiplicative inverse; needs a nonzero leading coefficient.

        For an exact monomial the result is exact; otherwise the result
        window is the input window (or ``window`` / the default precision
        for exact inputs).
        """
        if self.val is None:
            if self.prec == INF:
                raise ZeroDivisionError("inverse of the zero series")
            raise PrecisionInsufficient(
                f"inverse needs a leading coefficient, zero at precision {self.prec}")
        v = self.val
        cs = self.coeffs
        if len(cs) == 1 and self.is_exact:
            return Laurent(self.field, {-v: 1 / cs[0]})
        if self.prec == INF:
            length = window if window is not None else default_precision()
        else:
            length = self.prec - v
        inv0 = 1 / cs[0]
        out = [inv0]
        for k in range(1, length):
            acc = self.field.zero
            for i in range(1, min(k, len(cs) - 1) + 1):
                acc = acc + cs[i] * out[k - i]
            out.append(-inv0 * acc)
        return Laurent._from_window(self.field, -v, out, -v + length)

    def derivative(self, times=1):
        if times < 0:
            raise ValueError("negative derivative order")
        s = self
        for _ in range(times):
            data = {e - 1: e * c for e, c in s.items() if e != 0}
            prec = s.prec if s.prec == INF else s.prec - 1
            s = Laurent._trusted(s.field, data, prec)
        return s

    def truncate(self, upto):
        if upto >= self.prec:
            return self
        return Laurent._trusted(self.field, dict(self.items()), upto)

    def equal_mod(self, other, upto):
        """Exact coefficient equality below exponent ``upto``."""
        if not isinstance(other, Laurent):
            other = Laurent.const(other, self.field)
        _check_fields(self, other)
        if upto > self.prec or upto > other.prec:
            raise PrecisionInsufficient(
                f"congruence mod x^{upto} exceeds guaranteed precision")
        exps = {e for e, _ in self.items()} | {e for e, _ in other.items()}
        return all(self.coeff(e) == other.coeff(e) for e in exps if e < upto)

    # -- comparisons / misc --------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Laurent):
            if self.prec != INF:
                return NotImplemented
            other = Laurent.const(other, self.field)
        return (self.field is other.field and self.val == other.val
                and self.coeffs == other.coeffs and self.prec == other.prec)

    def __hash__(self):
        return hash((self.val, self.coeffs, self.prec))

    def __repr__(self):
        body = " + ".join(f"{c}*x^{e}" for e, c in self.items()) or "0"
        tail = f" + O(x^{self.prec})" if self.prec != INF else ""
        return f"<{body}{tail}>"


class MSeries:
    """Sparse multivariate power series, known below total degree ``prec``."""

    __slots__ = ("field", "nvars", "coeffs", "prec")

    def __init__(self, field, nvars, coeffs, prec=INF):
        data = {}
        for exps, c in dict(coeffs).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise RingMismatch(f"exponent arity {len(exps)} != nvars {nvars}")
            if any(e < 0 for e in exps):
                raise ValueError("negative exponent in a power series")
            c = field.coerce(c)
            if sum(exps) < prec and bool(c):
                data[exps] = data.get(exps, field.zero) + c
        self.field = field
        self.nvars = nvars
        self.coeffs = {e: c for e, c in data.items() if bool(c)}
        self.prec = prec

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, nvars, field=QQ, prec=INF):
        return cls(field, nvars, {}, prec)

    @classmethod
    def const(cls, c, nvars, field=QQ, prec=INF):
        return cls(field, nvars, {(0,) * nvars: c}, prec)

    @classmethod
    def one(cls, nvars, field=QQ, prec=INF):
        return cls.const(1, nvars, field, prec)

    @classmethod
    def var(cls, i, nvars, field=QQ, prec=INF):
        e = [0] * nvars
        e[i] = 1
        return cls(field, nvars, {tuple(e): 1}, prec)

    @classmethod
    def monomial(cls, c, exps, field=QQ, prec=INF):
        return cls(field, len(exps), {tuple(exps): c}, prec)

    # -- structure ----------------------------------------------------

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def is_exact(self):
        return self.prec == INF

    @property
    def bound(self):
        if self.coeffs:
            return min(sum(e) for e in self.coeffs)
        return self.prec

    def coeff(self, exps):
        exps = tuple(exps)
        if sum(exps) >= self.prec:
            raise PrecisionInsufficient(f"coefficient {exps} not known")
        return self.coeffs.get(exps, self.field.zero)

    def items(self):
        return self.coeffs.items()

    def valuation(self, var=None):
        """Least exponent of ``var`` (total degree when ``var`` is None)."""
        if not self.coeffs:
            if self.prec == INF:
                raise ValueError("valuation of the exact zero series")
            raise PrecisionInsufficient(
                f"valuation undetermined at precision {self.prec}")
        if var is None:
            return min(sum(e) for e in self.coeffs)
        return min(e[var] for e in self.coeffs)

    def constant_term(self):
        return self.coeffs.get((0,) * self.nvars, self.field.zero)

    def is_unit(self):
        return bool(self.constant_term())

    # -- arithmetic ---------------------------------------------------

    def _binop_check(self, other):
        _check_fields(self, other)
        if self.nvars != other.nvars:
            raise RingMismatch(f"mixed arities {self.nvars} and {other.nvars}")

    def __add__(self, other):
        if not isinstance(other, MSeries):
            other = MSeries.const(other, self.nvars, self.field)
        self._binop_check(other)
        data = dict(self.coeffs)
        for e, c in other.items():
            data[e] = data.get(e, self.field.zero) + c
        return MSeries(self.field, self.nvars, data, min(self.prec, other.prec))

    def __sub__(self, other):
        if not isinstance(other, MSeries):
            other = MSeries.const(other, self.nvars, self.field)
        return self + (-other)

    def __neg__(self):
        return MSeries(self.field, self.nvars,
                       {e: -c for e, c in self.items()}, self.prec)

    def __mul__(self, other):
        if not isinstance(other, MSeries):
            return self.scale(other)
        self._binop_check(other)
        prec = min(self.prec, other.prec)
        data = {}
        for e1, c1 in self.items():
            for e2, c2 in other.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if sum(e) < prec:
                    data[e] = data.get(e, self.field.zero) + c1 * c2
        return MSeries(self.field, self.nvars, data, prec)

    def scale(self, c):
        c = self.field.coerce(c)
        if not bool(c):
            return MSeries.zero(self.nvars, self.field, self.prec)
        return MSeries(self.field, self.nvars,
                       {e: c * v for e, v in self.items()}, self.prec)

    def invert(self, prec=None):
        """Inverse of a unit (nonzero constant term)."""
        c0 = self.constant_term()
        if not bool(c0):
            if self.is_zero and self.prec != INF:
                raise PrecisionInsufficient(
                    f"unit inverse undetermined at precision {self.prec}")
            raise ValueError("inverse needs a unit (nonzero constant term)")
        n = self.prec if self.prec != INF else (prec or default_precision())
        if len(self.coeffs) == 1:
            return MSeries.const(1 / c0, self.nvars, self.field,
                                 INF if self.is_exact else n)
        inv0 = 1 / c0
        zero_e = (0,) * self.nvars
        rest = {e: c for e, c in self.items() if e != zero_e}
        # solve degree by degree: out_d = -inv0 * sum rest_e * out_{d-|e|}
        by_deg = {0: {zero_e: inv0}}
        out = {zero_e: inv0}
        for d in range(1, int(n)):
            layer = {}
            for e1, c1 in rest.items():
                d1 = sum(e1)
                if d1 > d:
                    continue
                prev = by_deg.get(d - d1)
                if not prev:
                    continue
                for e2, c2 in prev.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    layer[e] = layer.get(e, self.field.zero) + c1 * c2
            layer = {e: -inv0 * c for e, c in layer.items() if bool(c)}
            if layer:
                by_deg[d] = layer
                out.update(layer)
        return MSeries(self.field, self.nvars, out, n)

    def derivative(self, var, times=1):
        s = self
        for _ in range(times):
            data = {}
            for e, c in s.items():
                if e[var] == 0:
                    continue
                ne = list(e)
                ne[var] -= 1
                data[tuple(ne)] = e[var] * c
            prec = s.prec if s.prec == INF else s.prec - 1
            s = MSeries(s.field, s.nvars, data, prec)
        return s

    def linear_change(self, matrix):
        """Substitute ``x_i -> sum_j matrix[i][j] x_j`` (invertible matrix)."""
        from .util import mat_inverse
        n = self.nvars
        if len(matrix) != n or any(len(r) != n for r in matrix):
            raise RingMismatch("change-of-variables matrix has wrong shape")
        mat_inverse(matrix)  # raise on singular input
        forms = [
            MSeries(self.field, n,
                    {tuple(int(j == t) for t in range(n)): matrix[i][j]
                     for j in range(n) if matrix[i][j] != 0})
            for i in range(n)
        ]
        pow_cache = [{0: MSeries.one(n, self.field)} for _ in range(n)]

        def power(i, k):
            cache = pow_cache[i]
            if k not in cache:
                cache[k] = power(i, k - 1) * forms[i]
            return cache[k]

        out = MSeries.zero(n, self.field, self.prec)
        for e, c in self.items():
            term = MSeries.const(c, n, self.field)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term.truncate(self.prec)
        return out.truncate(self.prec)

    def truncate(self, upto):
        if upto >= self.prec:
            return self
        return MSeries(self.field, self.nvars, dict(self.coeffs), upto)

    def equal_mod(self, other, upto):
        if not isinstance(other, MSeries):
            other = MSeries.const(other, self.nvars, self.field)
        self._binop_check(other)
        if upto > self.prec or upto > other.prec:
            raise PrecisionInsufficient(
                f"congruence mod degree {upto} exceeds guaranteed precision")
        exps = set(self.coeffs) | set(other.coeffs)
        return all(self.coeffs.get(e, self.field.zero)
                   == other.coeffs.get(e, self.field.zero)
                   for e in exps if sum(e) < upto)

    # -- views along one variable --------------------------------------

    def restrict_axis(self, var):
        """The univariate series p(0,...,0,x_var,0,...,0) as exponent map."""
        out = {}
        for e, c in self.items():
            if all(x == 0 for i, x in enumerate(e) if i != var):
                out[e[var]] = c
        return out

    def split_along(self, var):
        """View as a polynomial/series in ``x_var``: degree -> coefficient
        series (same arity, exponent 0 in ``var``)."""
        out = {}
        for e, c in self.items():
            k = e[var]
            ne = list(e)
            ne[var] = 0
            layer = out.setdefault(k, {})
            layer[tuple(ne)] = c
        return {
            k: MSeries(self.field, self.nvars, layer,
                       self.prec if self.prec == INF else self.prec - k)
            for k, layer in out.items()
        }

    def var_shift(self, var, k):
        """Multiply by x_var**k."""
        data = {}
        for e, c in self.items():
            ne = list(e)
            ne[var] += k
            data[tuple(ne)] = c
        return MSeries(self.field, self.nvars, data,
                       self.prec if self.prec == INF else self.prec + k)

    def __eq__(self, other):
        if not isinstance(other, MSeries):
            if self.prec != INF:
                return NotImplemented
            other = MSeries.const(other, self.nvars, self.field)
        return (self.field is other.field and self.nvars == other.nvars
                and self.coeffs == other.coeffs and self.prec == other.prec)

    def __hash__(self):
        return hash((self.nvars, frozenset(self.coeffs.items()), self.prec))

    def __repr__(self):
        def mono(e):
            return "*".join(f"x{i+1}^{k}" if k > 1 else f"x{i+1}"
                            for i, k in enumerate(e) if k) or "1"
        body = " + ".join(f"{c}*{mono(e)}" for e, c in sorted(self.items())) or "0"
        tail = f" + O(deg {self.prec})" if self.prec != INF else ""
        return f"<{body}{tail}>"
