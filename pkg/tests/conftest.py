"""Shared random-object builders for the test suite.

Everything is seeded, exact (Fraction scalars), and small enough that the
identity checks stay within the acceptance runtime budgets.
"""

import random
from fractions import Fraction

import pytest

from orecert import (Laurent, MSeries, OreOp, QQ, default_precision,
                     set_default_precision)


@pytest.fixture(autouse=True)
def _default_precision():
    old = default_precision()
    set_default_precision(16)
    yield
    set_default_precision(old)


def rnd_fraction(rnd, hi=5):
    num = rnd.randint(-hi, hi)
    den = rnd.randint(1, hi)
    return Fraction(num, den)


def rnd_laurent(rnd, lo=0, deg=3, prec=None, nonzero=False, unit=False):
    """Random exact Laurent polynomial with exponents in [lo, lo+deg]."""
    while True:
        items = {lo + i: rnd_fraction(rnd) for i in range(deg + 1)}
        if unit:
            while items[lo] == 0:
                items[lo] = rnd_fraction(rnd)
        f = Laurent(QQ, items) if prec is None else Laurent(QQ, items, prec)
        if not nonzero or not f.is_zero:
            return f


def rnd_oreop(rnd, order=3, deg=3, lo=0, nonzero=False, series_coeffs=True):
    """Random operator: d-order <= order, coefficient exponents in
    [lo, lo+deg]."""
    while True:
        coeffs = []
        for _ in range(rnd.randint(0, order) + 1):
            if rnd.random() < 0.25:
                coeffs.append(Laurent.zero(QQ))
            else:
                coeffs.append(rnd_laurent(rnd, lo=lo if not series_coeffs
                                          else max(lo, 0), deg=deg))
        op = OreOp.from_coeffs(coeffs, QQ)
        if not nonzero or not op.is_zero:
            return op


def rnd_mseries(rnd, n, deg=3, terms=4, nonzero=False):
    """Random exact polynomial series in n variables, total degree <= deg."""
    while True:
        acc = MSeries.zero(n, QQ)
        for _ in range(terms):
            e = [0] * n
            budget = rnd.randint(0, deg)
            for _ in range(budget):
                e[rnd.randrange(n)] += 1
            acc = acc + MSeries.monomial(rnd_fraction(rnd), tuple(e), QQ)
        if not nonzero or not acc.is_zero:
            return acc


def make_rng(seed):
    return random.Random(seed)
