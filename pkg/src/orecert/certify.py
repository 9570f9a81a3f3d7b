"""Certificate generation for span-to-free-module reduction.

Given a nonzero operator alpha and nonzero operators delta_1..delta_m with
power-series coefficients, the submodule M of S^(m) spanned by the vectors

    g(f) = (alpha*delta_1*f, ..., alpha*delta_m*f),   f an integer operator,

is the whole free module.  :func:`stafford_reduce` makes that effective: for
each basis vector it emits a :class:`Certificate`, a finite list of pairs
(s_j, f_j) with  sum_j s_j * g(f_j) = basis vector.  Every step of the
construction (commutators with x and with d, scalar eliminations, unit
inversions, back-substitution) is mirrored on the certificate bookkeeping,
so the output is checkable by :func:`certificate_check` using only operator
multiplication.

The module also hosts the bounded witness searches over the same spanning
pattern and the n = 1 verifiers built on the Euclidean structure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .modlin import ModVec, SpanPresentation, Verdict, spans_everything
from .ore import IntOre, OreOp, gcrd_bezout
from .series import INF, Laurent, PrecisionInsufficient, default_precision


class DegenerateDelta(Exception):
    """An exact F-linear dependence collapsed one of the delta generators.

    When delta_j == t * delta_i exactly, every element of M has its j-th
    component equal to t times its i-th component, so M is a proper
    submodule and no certificate for the basis vectors can exist.  The
    recorded dependence identifies the collapse.
    """

    def __init__(self, message, indices=None, t=None):
        super().__init__(message)
        self.indices = indices
        self.t = t


@dataclass(frozen=True)
class SpanGeneratorSet:
    """The data (alpha, delta_1..delta_m) defining the spanning set."""

    alpha: OreOp
    deltas: tuple

    def __post_init__(self):
        object.__setattr__(self, "deltas", tuple(self.deltas))
        if self.alpha.is_zero:
            raise ValueError("alpha must be nonzero")
        for i, d in enumerate(self.deltas):
            if d.is_zero:
                raise ValueError(f"delta {i + 1} is zero")
            for c in d.coeffs:
                if not c.is_zero and c.val < 0:
                    raise ValueError(
                        f"delta {i + 1} has a negative-valuation coefficient")

    @property
    def rank(self):
        return len(self.deltas)

    @property
    def field(self):
        return self.alpha.field


def span_element(ctx, f):
    """The spanning vector g(f) = (alpha*delta_i*f)_i."""
    if isinstance(f, IntOre):
        f = f.to_ore(ctx.field)
    return ModVec([ctx.alpha * d * f for d in ctx.deltas])


@dataclass(frozen=True)
class CertificateTerm:
    s: OreOp
    f: IntOre


@dataclass(frozen=True)
class Certificate:
    target: int            # basis index, 0-based
    terms: tuple           # of CertificateTerm
    context: SpanGeneratorSet
    precision: int         # congruence level the generator worked at
    slack: int             # precision consumed; check level is precision - slack


# ---------------------------------------------------------------------------
# certificate bookkeeping elements
# ---------------------------------------------------------------------------

class _CertElem:
    """A module element together with its expression over the g(f).

    ``terms`` is a list of (s, f) with  sum s * g_hat(f) == value,  where
    g_hat is the spanning map of the monic-normalized alpha.  All algebra
    the reduction needs closes on this representation:  left multiplication
    acts on the s, right multiplication by x or d acts on the f (because
    g(f) * x = g(f*x) and g(f) * d = g(f*d)), and commutators combine both.
    """

    __slots__ = ("terms", "value")

    def __init__(self, terms, value):
        self.terms = terms
        self.value = value


def _consolidate(terms):
    merged = {}
    for s, f in terms:
        if f in merged:
            merged[f] = merged[f] + s
        else:
            merged[f] = s
    return [(s, f) for f, s in merged.items() if not s.is_zero]


def _ce_add(a, b):
    return _CertElem(_consolidate(a.terms + b.terms), a.value + b.value)


def _ce_sub(a, b):
    return _ce_add(a, _ce_lmul(OreOp.from_scalar(-1, a.value.field), b))


def _ce_lmul(s, a):
    return _CertElem([(s * t, f) for t, f in a.terms], a.value.lmul(s))


def _ce_scale(c, a):
    return _ce_lmul(OreOp.from_scalar(c, a.value.field), a)


def _ce_rx(a):
    return _CertElem([(s, f.rmul_x()) for s, f in a.terms], a.value.rmul_x())


def _ce_rd(a):
    return _CertElem([(s, f.rmul_d()) for s, f in a.terms], a.value.rmul_d())


def _ce_comm_x(a, nu):
    x = OreOp.x_pow(1, a.value.field)
    for _ in range(nu):
        a = _ce_sub(_ce_rx(a), _ce_lmul(x, a))
        a.terms = _consolidate(a.terms)
    return a


def _ce_comm_d(a, nu):
    d = OreOp.d_pow(1, a.value.field)
    for _ in range(nu):
        a = _ce_sub(_ce_rd(a), _ce_lmul(d, a))
        a.terms = _consolidate(a.terms)
    return a


# ---------------------------------------------------------------------------
# the reduction
# ---------------------------------------------------------------------------

def stafford_reduce(ctx, stats=None):
    """Certificates for every basis vector of S^(m) over the span of g(f).

    Mirrors the constructive argument exactly: sort the deltas by
    descending d-order, normalize the leading-coefficient valuations of the
    top block to be strictly increasing by F-linear eliminations, extract a
    scalar vector with a (k+w)-fold x-commutator, eliminate components one
    at a time with d-commutators, back-substitute, then recurse on the
    lower-order tail.  ``stats`` (optional dict) receives counters for the
    two branch points: ``mu_zero_fixes`` and ``tie_eliminations``.

    Raises :class:`DegenerateDelta` when an elimination collapses a delta
    exactly (the span is then provably proper) and
    :class:`PrecisionInsufficient` when a needed leading coefficient is
    invisible at working precision.
    """
    field = ctx.field
    m = ctx.rank
    if stats is None:
        stats = {}
    stats.setdefault("mu_zero_fixes", 0)
    stats.setdefault("tie_eliminations", 0)

    unit_a, alpha_hat = ctx.alpha.normalize_monic()
    k = alpha_hat.order
    alpha_deltas = [alpha_hat * d for d in ctx.deltas]

    def gen(f):
        f_op = f.to_ore(field)
        value = ModVec([a * f_op for a in alpha_deltas])
        return _CertElem([(OreOp.from_scalar(1, field), f)], value)

    class _Item:
        __slots__ = ("op", "row", "orig", "cert")

        def __init__(self, op, row, orig):
            self.op = op
            self.row = row
            self.orig = orig
            self.cert = None

    items = [
        _Item(d, [field.coerce(int(j == i)) for j in range(m)], i)
        for i, d in enumerate(ctx.deltas)
    ]
    remaining = list(items)
    done = []

    def coords(w, subset):
        """Coordinates of w along the current transformed basis rows."""
        out = []
        for it in subset:
            acc = OreOp.zero(field)
            for idx, c in enumerate(it.row):
                if bool(c):
                    acc = acc + w.value.entries[idx].scale(c)
            out.append(acc.as_scalar())
        return out

    while remaining:
        # sort by descending d-order, then leading valuation, then origin
        remaining.sort(key=lambda it: (-it.op.order,
                                       it.op.lead().valuation(), it.orig))
        omega = remaining[0].op.order
        # eliminate leading-valuation ties inside the top-order block
        guard = 0
        while True:
            guard += 1
            if guard > 10000:
                raise RuntimeError("tie elimination failed to stabilize")
            block = [it for it in remaining if it.op.order == omega]
            pair = None
            for a, b in zip(block, block[1:]):
                if a.op.lead().valuation() == b.op.lead().valuation():
                    pair = (a, b)
                    break
            if pair is None:
                break
            a, b = pair
            t = b.op.lead().lead() / a.op.lead().lead()
            new_op = b.op - a.op.scale(t)
            stats["tie_eliminations"] += 1
            if new_op.is_zero:
                if new_op.prec != INF:
                    raise PrecisionInsufficient(
                        "delta collapsed to zero at working precision "
                        "during tie elimination")
                raise DegenerateDelta(
                    f"delta {b.orig + 1} equals {t} * delta {a.orig + 1} "
                    "(after earlier F-linear steps); the span is a proper "
                    "submodule", indices=(a.orig, b.orig), t=t)
            b.op = new_op
            b.row = [rb - t * ra for ra, rb in zip(a.row, b.row)]
            remaining.sort(key=lambda it: (-it.op.order,
                                           it.op.lead().valuation(), it.orig))
            omega = remaining[0].op.order

        block = [it for it in remaining if it.op.order == omega]
        l = len(block)

        def gen_level(f):
            # subtract the already-certified directions so the element
            # lies in the span of the still-active transformed basis
            e = gen(f)
            for it in done:
                s = (alpha_hat * it.op) * f.to_ore(field)
                e = _ce_sub(e, _ce_lmul(s, it.cert))
            return e

        nu = k + omega
        v = gen_level(IntOre.one())
        if nu:
            v = _ce_comm_x(v, nu)
            v = _ce_scale(field.coerce(Fraction(1, math.factorial(nu))), v)

        chain = []
        for step in range(l - 1):
            cds = coords(v, block)
            p_first = cds[step]
            if p_first.is_zero:
                if p_first.prec != INF:
                    raise PrecisionInsufficient(
                        "pivot scalar zero at working precision")
                raise RuntimeError(
                    "proof-step failure: pivot scalar vanished exactly")
            if p_first.valuation() == 0:
                stats["mu_zero_fixes"] += 1
                v = _ce_lmul(OreOp.x_pow(1, field), v)
                cds = coords(v, block)
                p_first = cds[step]
            mu = p_first.valuation()
            w = _ce_comm_d(v, mu)
            if mu % 2:
                w = _ce_scale(field.coerce(-1), w)
            wc = coords(w, block)
            u = wc[step]
            factor = p_first * u.invert()
            nxt = _ce_sub(v, _ce_lmul(OreOp.from_scalar(factor), w))
            nc = coords(nxt, block)
            if not nc[step].is_zero:
                raise RuntimeError("proof-step failure: pivot not eliminated")
            for i in range(step + 1, l):
                if nc[i].is_zero:
                    if nc[i].prec != INF:
                        raise PrecisionInsufficient(
                            "eliminated scalar zero at working precision")
                    raise RuntimeError(
                        "proof-step failure: a trailing scalar vanished")
                if nc[i].valuation() != cds[i].valuation():
                    raise RuntimeError(
                        "proof-step failure: elimination changed a valuation")
            chain.append((v, cds))
            v = nxt

        cds = coords(v, block)
        last = cds[l - 1]
        if last.is_zero:
            if last.prec != INF:
                raise PrecisionInsufficient(
                    "terminal scalar zero at working precision")
            raise RuntimeError("proof-step failure: terminal scalar vanished")
        block[l - 1].cert = _ce_lmul(OreOp.from_scalar(last.invert()), v)
        for j in range(l - 2, -1, -1):
            w, cds = chain[j]
            for i in range(j + 1, l):
                w = _ce_sub(w, _ce_lmul(OreOp.from_scalar(cds[i]),
                                        block[i].cert))
            block[j].cert = _ce_lmul(OreOp.from_scalar(cds[j].invert()), w)

        for it in block:
            it.cert.terms = _consolidate(it.cert.terms)
            remaining.remove(it)
            done.append(it)

    # convert from the transformed basis back to the standard one, and undo
    # the monic normalization of alpha on the certificate terms
    n_work = default_precision()
    u_inv = OreOp.from_scalar(unit_a.invert())
    certs = []
    for target in range(m):
        acc = None
        for it in done:
            c = it.row[target]
            if not bool(c):
                continue
            piece = _ce_scale(c, it.cert)
            acc = piece if acc is None else _ce_add(acc, piece)
        terms = tuple(CertificateTerm(s * u_inv, f)
                      for s, f in _consolidate(acc.terms))
        rebuilt = ModVec.zero(m, field)
        for t in terms:
            rebuilt = rebuilt + span_element(ctx, t.f).lmul(t.s)
        minp = rebuilt.min_known_prec()
        slack = 0 if minp == INF else max(0, n_work - int(minp))
        cert = Certificate(target=target, terms=terms, context=ctx,
                           precision=n_work, slack=slack)
        if certificate_check(cert) is not Verdict.TRUE:
            raise RuntimeError(
                f"generated certificate for basis vector {target + 1} "
                "failed its own check")
        certs.append(cert)
    return certs


def certificate_check(cert):
    """Independent verdict on a certificate: rebuild and compare.

    Uses only operator multiplication and coefficient congruence; shares no
    state with the generator.  Three-valued: TRUE, FALSE, or INDETERMINATE
    when the congruence level is not actually guaranteed.
    """
    ctx = cert.context
    m = ctx.rank
    field = ctx.field
    level = cert.precision - cert.slack
    if level <= 0:
        return Verdict.INDETERMINATE
    rebuilt = ModVec.zero(m, field)
    for t in cert.terms:
        rebuilt = rebuilt + span_element(ctx, t.f).lmul(t.s)
    target = ModVec.basis(cert.target, m, field)
    try:
        ok = rebuilt.equal_mod(target, level)
    except PrecisionInsufficient:
        return Verdict.INDETERMINATE
    return Verdict.TRUE if ok else Verdict.FALSE


# ---------------------------------------------------------------------------
# bounded witness searches
# ---------------------------------------------------------------------------

@dataclass
class WitnessResult:
    status: str                    # "found" | "bound-exhausted" | "indeterminate"
    f: IntOre | None = None
    transcript: list = dc_field(default_factory=list)


def _witness_candidates(bound):
    """f = 0, then integer monomials c*x^a*d^b ordered by total degree,
    then lexicographically in (a, b), then by coefficient height."""
    yield IntOre.zero()
    for deg in range(2 * bound + 1):
        for a in range(deg + 1):
            b = deg - a
            if a > bound or b > bound:
                continue
            for h in range(1, bound + 1):
                yield IntOre.monomial(h, a, b)
                yield IntOre.monomial(-h, a, b)


def witness_search(kind, deltas, rho=None, alpha=None, mpres=None, bound=3):
    """Search for f making the target span identity hold.

    kind "lemma33":  S^(m) = M + S*(alpha*delta_i*f)_i   (needs alpha, mpres)
    kind "cor34":    S^(m) = S^(m)*rho + S*(rho*delta_i*f)_i   (needs rho)
    kind "lemma35":  S^(m+1) = S^(m+1)*rho + S*(e_0 + delta_i*f*e_i)   (needs rho)

    Candidates are enumerated deterministically up to the bound; exhaustion
    is a result, not an error.
    """
    if kind not in ("lemma33", "cor34", "lemma35"):
        raise ValueError(f"unknown witness kind {kind!r}")
    deltas = tuple(deltas)
    m = len(deltas)
    field = deltas[0].field
    result = WitnessResult("bound-exhausted")
    saw_indeterminate = False
    for f in _witness_candidates(bound):
        f_op = f.to_ore(field)
        if kind == "lemma33":
            rank = m
            row = ModVec([alpha * d * f_op for d in deltas])
            gens = list(mpres.generators) + [row]
        elif kind == "cor34":
            rank = m
            gens = [ModVec([rho if j == i else OreOp.zero(field)
                            for j in range(rank)]) for i in range(rank)]
            gens.append(ModVec([rho * d * f_op for d in deltas]))
        else:
            rank = m + 1
            gens = [ModVec([rho if j == i else OreOp.zero(field)
                            for j in range(rank)]) for i in range(rank)]
            gens.append(ModVec([OreOp.from_scalar(1, field)]
                               + [d * f_op for d in deltas]))
        pres = SpanPresentation(generators=gens, rank=rank)
        verdict = spans_everything(pres)
        result.transcript.append((f, verdict))
        if verdict is Verdict.TRUE:
            return WitnessResult("found", f=f, transcript=result.transcript)
        if verdict is Verdict.INDETERMINATE:
            saw_indeterminate = True
    if saw_indeterminate:
        result.status = "indeterminate"
    return result


# ---------------------------------------------------------------------------
# n = 1 verifiers
# ---------------------------------------------------------------------------

def lemma42_verify(rho, q, a_list):
    """For each a: does rho*a land in D_1 * q?

    Divides rho*a on the right by q; accepts when the remainder vanishes
    and every quotient coefficient has non-negative valuation (so the
    quotient has power-series scalars).
    """
    verdicts = []
    for a in a_list:
        try:
            quo, rem = (rho * a).divmod_right(q)
        except PrecisionInsufficient:
            verdicts.append(Verdict.INDETERMINATE)
            continue
        if not rem.is_zero:
            verdicts.append(Verdict.FALSE)
            continue
        if any(not c.is_zero and c.val < 0 for c in quo.coeffs):
            verdicts.append(Verdict.FALSE)
        else:
            verdicts.append(Verdict.TRUE)
    return verdicts


def principal_generator_E1(gens):
    """Single monic generator of sum S*gens_i, with Bezout data.

    Returns (g, coeffs) with sum coeffs[i]*gens[i] = g and g right-dividing
    every generator.
    """
    gens = list(gens)
    if not gens or all(g.is_zero for g in gens):
        raise ValueError("need at least one nonzero generator")
    field = gens[0].field
    g = gens[0]
    coeffs = [OreOp.from_scalar(int(i == 0), field) for i in range(len(gens))]
    if len(gens) == 1:
        unit, monic = g.normalize_monic()
        w = unit.invert()
        return monic, [coeffs[0].scale(w)]
    for j in range(1, len(gens)):
        g2, u, v = gcrd_bezout(g, gens[j])
        coeffs = [u * c for c in coeffs]
        coeffs[j] = coeffs[j] + v
        g = g2
    return g, coeffs


def theorem52_verify(a, b, c, d, e):
    """Check c in S*(a + d*c) + S*(b + e*c) via gcrd divisibility.

    Returns (verdict, data) where data carries the gcrd g, the Bezout
    cofactors (u, v) with u*(a+dc) + v*(b+ec) = g, and the quotient q with
    c = q*g on acceptance.
    """
    lhs = a + d * c
    rhs = b + e * c
    try:
        g, u, v = gcrd_bezout(lhs, rhs)
        quo, rem = c.divmod_right(g)
    except PrecisionInsufficient:
        return Verdict.INDETERMINATE, None
    data = {"g": g, "u": u, "v": v, "q": quo, "r": rem}
    return (Verdict.TRUE if rem.is_zero else Verdict.FALSE), data
