"""Module linear algebra over S: echelon form, membership, colength."""

import pytest

from orecert import (INF, Laurent, ModVec, OreOp, PrecisionInsufficient, QQ,
                     SpanPresentation, Verdict, brute_force_membership,
                     colength, hermite_reduce, membership, module_equal,
                     spans_everything)
from conftest import make_rng, rnd_oreop


def d(k=1):
    return OreOp.d_pow(k, QQ)


def x(k=1):
    return OreOp.x_pow(k, QQ)


def one():
    return OreOp.from_scalar(1, QQ)


def zero():
    return OreOp.zero(QQ)


def vec(*entries):
    return ModVec(entries)


def eq_mod(a, b):
    lvl = min(a.min_known_prec(), b.min_known_prec())
    if lvl == INF:
        return a == b
    return a.equal_mod(b, lvl)


def test_hermite_replay_is_consistent():
    rnd = make_rng(301)
    for _ in range(15):
        m = rnd.randint(1, 3)
        gens = [ModVec([rnd_oreop(rnd, order=2, deg=2) for _ in range(m)])
                for _ in range(rnd.randint(1, 3))]
        if all(g.is_zero for g in gens):
            continue
        pres = SpanPresentation(generators=gens, rank=m)
        try:
            red = hermite_reduce(pres)
        except PrecisionInsufficient:
            continue
        for row, replayed in zip(red.rows, red.replay(gens)):
            assert eq_mod(row, replayed)


def test_membership_positive_by_construction():
    rnd = make_rng(302)
    for _ in range(15):
        m = rnd.randint(1, 2)
        gens = [ModVec([rnd_oreop(rnd, order=1, deg=1) for _ in range(m)])
                for _ in range(2)]
        if any(g.is_zero for g in gens):
            continue
        pres = SpanPresentation(generators=gens, rank=m)
        combo = [rnd_oreop(rnd, order=1, deg=1) for _ in gens]
        w = ModVec.zero(m, QQ)
        for s, g in zip(combo, gens):
            w = w + g.lmul(s)
        res = membership(w, pres)
        if res.verdict is Verdict.INDETERMINATE:
            continue
        assert res.verdict is Verdict.TRUE
        rebuilt = ModVec.zero(m, QQ)
        for s, g in zip(res.witness, gens):
            rebuilt = rebuilt + g.lmul(s)
        assert eq_mod(rebuilt, w)


def test_membership_negative():
    # S^2 generated by [d,0] and [0,d] misses [1,0]
    pres = SpanPresentation(generators=[vec(d(), zero()), vec(zero(), d())],
                            rank=2)
    assert membership(vec(one(), zero()), pres).verdict is Verdict.FALSE


def test_membership_agrees_with_brute_force():
    pres = SpanPresentation(
        generators=[vec(d(), zero()), vec(zero(), d()), vec(one(), x())],
        rank=2)
    for w in (vec(one(), zero()), vec(zero(), one()), vec(x(), d())):
        fast = membership(w, pres).verdict
        slow = brute_force_membership(w, pres, d_bound=2, lo=0, hi=4,
                                      check_upto=8)
        assert (fast is Verdict.TRUE) == slow


def test_spans_everything():
    pres = SpanPresentation(
        generators=[vec(d(), zero()), vec(zero(), d()), vec(one(), x())],
        rank=2)
    assert spans_everything(pres) is Verdict.TRUE
    pres2 = SpanPresentation(generators=[vec(d(), zero()), vec(zero(), d())],
                             rank=2)
    assert spans_everything(pres2) is Verdict.FALSE


def test_module_equal():
    a = SpanPresentation(generators=[vec(one(), zero()), vec(zero(), one())],
                         rank=2)
    b = SpanPresentation(
        generators=[vec(d(), zero()), vec(zero(), d()), vec(one(), x())],
        rank=2)
    assert module_equal(a, b) is Verdict.TRUE
    c = SpanPresentation(generators=[vec(d(), zero()), vec(zero(), d())],
                         rank=2)
    assert module_equal(a, c) is Verdict.FALSE


def test_colength_matches_order():
    rnd = make_rng(303)
    for _ in range(20):
        a = rnd_oreop(rnd, order=4, deg=2, nonzero=True)
        assert colength(a) == a.order


def test_colength_rejects_zero():
    with pytest.raises(ValueError):
        colength(OreOp.zero(QQ))
    starved = OreOp.from_scalar(Laurent.zero(QQ, 4), QQ)
    with pytest.raises(PrecisionInsufficient):
        colength(starved)
