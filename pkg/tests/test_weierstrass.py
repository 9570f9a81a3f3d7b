"""Weierstrass preparation and the operator splitting built on it."""

from fractions import Fraction

import pytest

from orecert import (DiffOp, MSeries, PrecisionInsufficient, QQ,
                     lemma41_decompose, weierstrass_position,
                     weierstrass_prepare, decomposition_verify)
from orecert.weierstrass import term_shapes_ok
from conftest import make_rng, rnd_fraction, rnd_mseries


def mono(c, exps):
    return MSeries.monomial(c, exps, QQ)


def rnd_in_position(rnd, n, k, deg=4):
    """Random exact polynomial whose restriction to the last axis has
    valuation exactly k: a unit times x_n^k plus lower powers of x_n whose
    coefficients vanish at the origin."""
    var = n - 1
    p = mono(rnd.choice([1, 2, -1, Fraction(1, 2)]),
             tuple(k if i == var else 0 for i in range(n)))
    for _ in range(rnd.randint(0, 4)):
        e = [0] * n
        e[var] = rnd.randint(0, k - 1) if k else 0
        others = rnd.randint(1, deg)
        for _ in range(others):
            e[rnd.randrange(n)] += 1
        if e[var] >= k and all(e[i] == 0 for i in range(n) if i != var):
            continue
        if sum(e) - e[var] == 0 and e[var] < k:
            continue                     # would lower the axis valuation
        p = p + mono(rnd_fraction(rnd), tuple(e))
    return p


def test_position_detection():
    p = mono(1, (0, 2)) + mono(1, (1, 0))
    ok, k = weierstrass_position(p, 1)
    assert ok and k == 2
    q = mono(1, (1, 0)) + mono(1, (1, 3))
    ok, _ = weierstrass_position(q, 1)
    assert not ok


def test_preparation_identity_small():
    # p = x2^2 + x1*x2 + x1  (k = 2 along x2)
    p = mono(1, (0, 2)) + mono(1, (1, 1)) + mono(1, (1, 0))
    fac = weierstrass_prepare(p, 1, prec=10)
    assert fac.degree == 2
    assert fac.unit.is_unit()
    # W monic of degree 2 in x2, lower coefficients vanish at the origin
    axis = {e[1]: c for e, c in fac.wpoly.coeffs.items() if e[0] == 0}
    assert axis.get(2) == 1
    assert (fac.unit * fac.wpoly).equal_mod(p, 10)


def test_preparation_random_oracle():
    rnd = make_rng(401)
    for _ in range(20):
        n = rnd.randint(1, 3)
        k = rnd.randint(0, 4)
        p = rnd_in_position(rnd, n, k)
        ok, got_k = weierstrass_position(p, n - 1)
        assert ok and got_k == k
        fac = weierstrass_prepare(p, n - 1, prec=12)
        assert fac.degree == k
        assert fac.unit.is_unit()
        assert (fac.unit * fac.wpoly).equal_mod(p, 12)


def test_preparation_not_in_position():
    q = mono(1, (1, 0)) + mono(1, (1, 1))
    with pytest.raises(ValueError):
        weierstrass_prepare(q, 1, prec=8)


def test_decompose_by_hand():
    # v = x2*d1 in two variables, distinguished pair (x1, d1)
    v = DiffOp(QQ, 2, {(1, 0): mono(1, (0, 1))})
    dec = lemma41_decompose(v, 0)
    assert term_shapes_ok(dec)
    assert decomposition_verify(v, dec)


def test_decompose_random_and_mutation():
    rnd = make_rng(402)
    done = 0
    while done < 10:
        n = rnd.randint(2, 3)
        terms = {}
        for _ in range(rnd.randint(1, 4)):
            dexp = tuple(rnd.randint(0, 2) for _ in range(n))
            terms[dexp] = rnd_mseries(rnd, n, deg=2, terms=2, nonzero=True)
        v = DiffOp(QQ, n, terms)
        if v.is_zero:
            continue
        for r in range(n):
            dec = lemma41_decompose(v, r)
            assert term_shapes_ok(dec)
            assert decomposition_verify(v, dec)
            mutated = dec.terms[0].omega + MSeries.one(n, QQ)
            dec.terms[0].omega = mutated
            assert decomposition_verify(v, dec) is False
            break
        done += 1
