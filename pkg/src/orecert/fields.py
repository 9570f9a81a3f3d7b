"""Exact coefficient fields: the rationals Q and rational functions Q(t).

Both fields have decidable, exact zero tests, which every truncation and
valuation decision in the rest of the package relies on.
"""

from __future__ import annotations

from fractions import Fraction


def _trim(cs):
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def _padd(a, b):
    n = max(len(a), len(b))
    return _trim(
        (a[i] if i < len(a) else Fraction(0)) + (b[i] if i < len(b) else Fraction(0))
        for i in range(n)
    )


def _pneg(a):
    return tuple(-c for c in a)


def _pmul(a, b):
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _pdivmod(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv = 1 / b[-1]
    while len(a) >= len(b):
        if a[-1] == 0:
            a.pop()
            continue
        c = a[-1] * inv
        k = len(a) - len(b)
        q[k] += c
        for i, y in enumerate(b):
            a[k + i] -= c * y
        a.pop()
    return _trim(q), _trim(a)


def _pgcd(a, b):
    while b:
        a, b = b, _pdivmod(a, b)[1]
    if a and a[-1] != 1:
        inv = 1 / a[-1]
        a = tuple(c * inv for c in a)
    return a


class RatFunc:
    """Rational function in one parameter t over Q, kept in lowest terms.

    The denominator is monic and coprime to the numerator;  equality is
    therefore structural.
    """

    __slots__ = ("num", "den")

    def __init__(self, num=(), den=(Fraction(1),)):
        if isinstance(num, (int, Fraction)):
            num = (Fraction(num),)
        if isinstance(den, (int, Fraction)):
            den = (Fraction(den),)
        num = _trim(Fraction(c) for c in num)
        den = _trim(Fraction(c) for c in den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            den = (Fraction(1),)
        else:
            g = _pgcd(num, den)
            if len(g) > 1:
                num = _pdivmod(num, g)[0]
                den = _pdivmod(den, g)[0]
            lc = den[-1]
            if lc != 1:
                num = tuple(c / lc for c in num)
                den = tuple(c / lc for c in den)
        self.num = num
        self.den = den

    @staticmethod
    def _coerce(v):
        if isinstance(v, RatFunc):
            return v
        if isinstance(v, (int, Fraction)):
            return RatFunc((Fraction(v),))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(
            _padd(_pmul(self.num, other.den), _pmul(other.num, self.den)),
            _pmul(self.den, other.den),
        )

    __radd__ = __add__

    def __neg__(self):
        r = RatFunc.__new__(RatFunc)
        r.num = _pneg(self.num)
        r.den = self.den
        return r

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(_pmul(self.num, other.num), _pmul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.num:
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(_pmul(self.num, other.den), _pmul(self.den, other.num))

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, n):
        if n < 0:
            return RatFunc((Fraction(1),)) / self ** (-n)
        r = RatFunc((Fraction(1),))
        for _ in range(n):
            r = r * self
        return r

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def is_rational(self):
        return len(self.num) <= 1 and self.den == (Fraction(1),)

    def as_rational(self):
        if not self.is_rational():
            raise ValueError("not a constant rational function")
        return self.num[0] if self.num else Fraction(0)

    def __repr__(self):
        def poly(cs):
            if not cs:
                return "0"
            parts = []
            for i, c in enumerate(cs):
                if c == 0:
                    continue
                if i == 0:
                    parts.append(str(c))
                elif i == 1:
                    parts.append(f"{c}*t" if c != 1 else "t")
                else:
                    parts.append(f"{c}*t^{i}" if c != 1 else f"t^{i}")
            return " + ".join(parts)

        if self.den == (Fraction(1),):
            return poly(self.num)
        return f"({poly(self.num)})/({poly(self.den)})"


class Field:
    """Exact computable field with decidable zero test."""

    name = "?"

    def coerce(self, v):
        raise NotImplementedError

    def __repr__(self):
        return self.name


class RationalField(Field):
    name = "QQ"
    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, v):
        if isinstance(v, RatFunc):
            return v.as_rational()
        return Fraction(v)


class FunctionField(Field):
    """Rational functions Q(t)."""

    name = "QQt"
    zero = RatFunc()
    one = RatFunc((Fraction(1),))
    t = RatFunc((Fraction(0), Fraction(1)))

    def coerce(self, v):
        if isinstance(v, RatFunc):
            return v
        return RatFunc((Fraction(v),))


QQ = RationalField()
QQT = FunctionField()

FIELDS = {"QQ": QQ, "QQt": QQT}
