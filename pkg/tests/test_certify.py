"""Span certificates: generation, independent checking, witness search,
and the one-variable verifiers."""

from fractions import Fraction

import pytest

from orecert import (Certificate, DegenerateDelta, IntOre, Laurent, ModVec,
                     OreOp, QQ, SpanGeneratorSet, SpanPresentation, Verdict,
                     certificate_check, lemma42_verify, membership,
                     module_equal, principal_generator_E1, span_element,
                     stafford_reduce, theorem52_verify, witness_search)
from conftest import make_rng, rnd_oreop


def d(k=1):
    return OreOp.d_pow(k, QQ)


def x(k=1):
    return OreOp.x_pow(k, QQ)


def one():
    return OreOp.from_scalar(1, QQ)


def check_instance(alpha, deltas, stats=None):
    ctx = SpanGeneratorSet(alpha=alpha, deltas=tuple(deltas))
    certs = stafford_reduce(ctx, stats=stats)
    assert len(certs) == len(deltas)
    for cert in certs:
        assert certificate_check(cert) is Verdict.TRUE
    return certs


def test_simplest_instance():
    certs = check_instance(d(), [one()])
    # epsilon_1 = g(x) - x*g(1):  d*x - x*d = 1
    cert = certs[0]
    rebuilt = ModVec.zero(1, QQ)
    for t in cert.terms:
        rebuilt = rebuilt + span_element(cert.context, t.f).lmul(t.s)
    assert rebuilt.entries[0].equal_mod(one(), cert.precision - cert.slack)


def test_mixed_orders_and_coefficients():
    check_instance(d(2) + x(), [one(), d()])
    check_instance(d() + one(), [d(), x(), one()])
    check_instance(x() * d() + one(), [one() + x(), d(2)])


def test_certificate_terms_rebuild_via_membership():
    ctx = SpanGeneratorSet(alpha=d(2) + x(), deltas=(one(), d()))
    certs = stafford_reduce(ctx)
    for cert in certs:
        gens = [span_element(ctx, t.f) for t in cert.terms]
        pres = SpanPresentation(generators=gens, rank=ctx.rank)
        target = ModVec.basis(cert.target, ctx.rank, QQ)
        assert membership(target, pres).verdict is Verdict.TRUE


def test_degenerate_deltas_detected():
    ctx = SpanGeneratorSet(alpha=d(), deltas=(d(), d() + d()))
    with pytest.raises(DegenerateDelta) as exc:
        stafford_reduce(ctx)
    assert exc.value.indices is not None


def test_tampered_certificate_fails():
    ctx = SpanGeneratorSet(alpha=d(), deltas=(one(),))
    cert = stafford_reduce(ctx)[0]
    bad_terms = (cert.terms[0],) + tuple(
        type(t)(s=t.s * OreOp.from_scalar(2, QQ), f=t.f)
        for t in cert.terms[1:])
    bad = Certificate(target=cert.target, terms=bad_terms,
                      context=cert.context, precision=cert.precision,
                      slack=cert.slack)
    assert certificate_check(bad) is Verdict.FALSE


def test_slack_exhaustion_is_indeterminate():
    ctx = SpanGeneratorSet(alpha=d(), deltas=(one(),))
    cert = stafford_reduce(ctx)[0]
    starved = Certificate(target=cert.target, terms=cert.terms,
                          context=cert.context, precision=cert.precision,
                          slack=cert.precision)
    assert certificate_check(starved) is Verdict.INDETERMINATE


def test_witness_lemma35_worked_instance():
    res = witness_search("lemma35", [one()], rho=d(), bound=2)
    assert res.status == "found"
    assert res.f == IntOre.monomial(1, 1, 0)     # f = x
    res0 = witness_search("lemma35", [one()], rho=d(), bound=0)
    assert res0.status == "bound-exhausted"


def test_witness_cor34():
    res = witness_search("cor34", [one()], rho=d(), bound=2)
    assert res.status == "found"


def test_witness_lemma33():
    mpres = SpanPresentation(generators=[ModVec([d()])], rank=1)
    res = witness_search("lemma33", [one()], alpha=one(), mpres=mpres,
                         bound=2)
    assert res.status == "found"


def test_lemma42():
    v = lemma42_verify(x(2), x(), [d()])
    assert v == [Verdict.TRUE]
    v = lemma42_verify(x(), x(), [d()])
    assert v == [Verdict.FALSE]


def test_principal_generator():
    rnd = make_rng(501)
    for _ in range(10):
        gens = [rnd_oreop(rnd, order=2, deg=2, nonzero=True)
                for _ in range(rnd.randint(1, 3))]
        g, coeffs = principal_generator_E1(gens)
        total = OreOp.zero(QQ)
        for c, gi in zip(coeffs, gens):
            total = total + c * gi
        lvl = min(total.min_known_prec(), g.min_known_prec())
        assert total.equal_mod(g, lvl) if lvl != float("inf") else total == g
        for gi in gens:
            _, r = gi.divmod_right(g)
            assert r.is_zero


def test_theorem52():
    verdict, data = theorem52_verify(d(), x(), one(),
                                     OreOp.zero(QQ), OreOp.zero(QQ))
    assert verdict is Verdict.TRUE
    # degenerate family c = a, d = e = 0
    rnd = make_rng(502)
    a = rnd_oreop(rnd, order=2, deg=2, nonzero=True)
    b = rnd_oreop(rnd, order=2, deg=2, nonzero=True)
    verdict, _ = theorem52_verify(a, b, a, OreOp.zero(QQ), OreOp.zero(QQ))
    assert verdict is Verdict.TRUE
