"""Weierstrass division/preparation and the operator splitting it enables.

A series p is in *position* along a distinguished variable x_s when its
restriction to the x_s-axis is nonzero; the restriction's valuation k is the
degree of the monic Weierstrass polynomial in the factorization p = u * W.
A deterministic search over shears x_i -> x_i + c_i x_s puts any finite set
of series into position simultaneously.

The splitting of an operator v into terms (unit) * (x_s^j d_s^a) * (operator
free of x_s, d_s) follows by preparing each series coefficient of v and
distributing the Weierstrass polynomial's monomials.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .ore import DiffOp
from .series import INF, MSeries, PrecisionInsufficient, default_precision
from .util import mat_identity

GENERIC_CHANGE_BOUND = 8


@dataclass
class WeierstrassFactorization:
    unit: MSeries      # invertible constant term
    wpoly: MSeries     # monic of degree k in the distinguished variable
    var: int
    degree: int


@dataclass
class DecompositionTerm:
    omega: MSeries     # unit series
    beta: DiffOp       # monomial x_s^j d_s^a
    gee: DiffOp        # free of x_s and d_s


@dataclass
class Decomposition:
    terms: list
    var: int
    matrix: list       # change of variables applied before splitting
    transformed: DiffOp


def weierstrass_position(p, var):
    """(in_position, k): restriction to the x_var axis and its valuation."""
    if p.is_zero:
        if p.prec != INF:
            raise PrecisionInsufficient("series zero at working precision")
        raise ValueError("zero series has no position")
    axis = p.restrict_axis(var)
    if not axis:
        if p.prec != INF and min(sum(e) for e in p.coeffs) >= p.prec:
            raise PrecisionInsufficient("axis restriction zero at precision")
        return False, None
    return True, min(axis)


def _shear_matrix(cs, var, n):
    m = mat_identity(n)
    j = 0
    for i in range(n):
        if i == var:
            continue
        m[i][var] = Fraction(cs[j])
        j += 1
    return m


def _candidate_values(bound):
    vals = [0]
    for k in range(1, bound + 1):
        vals.extend([k, -k])
    return vals


def generic_change(ps, var, bound=GENERIC_CHANGE_BOUND):
    """Shear matrix putting every series of ps in position with k = total valuation.

    Candidate tuples c are enumerated by increasing max-norm and then
    lexicographically over the value order 0, 1, -1, 2, -2, ...; the search
    raises when the bound is exhausted.
    """
    ps = list(ps)
    if not ps:
        raise ValueError("empty series set")
    n = ps[0].nvars
    vals = _candidate_values(bound)
    free = n - 1

    def works(matrix):
        for p in ps:
            q = p.linear_change(matrix)
            ok, k = weierstrass_position(q, var)
            if not ok or k != p.valuation():
                return False
        return True

    def tuples(max_idx):
        # all index tuples with max component == max_idx, lexicographic
        def rec(i, acc, hit):
            if i == free:
                if hit:
                    yield tuple(acc)
                return
            for idx in range(max_idx + 1):
                acc.append(idx)
                yield from rec(i + 1, acc, hit or idx == max_idx)
                acc.pop()
        yield from rec(0, [], max_idx == 0)

    for max_idx in range(len(vals)):
        for idx_tuple in tuples(max_idx):
            cs = [vals[i] for i in idx_tuple]
            m = _shear_matrix(cs, var, n)
            if works(m):
                return m
    raise ValueError(f"generic change search exhausted at bound {bound}")


def weierstrass_prepare(p, var, prec=None):
    """Factor p = unit * wpoly with wpoly monic of degree k in x_var.

    Solved by undetermined coefficients: writing p = sum_i p_i x_var^i and
    unit = sum_t u_t x_var^t (p_i, u_t free of x_var), matching the x_var
    powers of p = unit * (x_var^k + sum_{j<k} b_j x_var^j) gives a solve
    that is triangular in the total degree of the other variables.  The
    solve is exact in rationals and determines unit and wpoly modulo the
    requested total degree; for truncated p the needed coefficients of p
    may run out, in which case PrecisionInsufficient is raised.
    """
    ok, k = weierstrass_position(p, var)
    if not ok:
        raise ValueError("series not in Weierstrass position")
    fld = p.field
    n = p.nvars
    if prec is None:
        prec = p.prec if p.prec != INF else default_precision()
    prec = int(prec)
    if k == 0:
        return WeierstrassFactorization(
            unit=p.truncate(prec) if p.prec != INF else p,
            wpoly=MSeries.one(n, fld, p.prec), var=var, degree=k)

    def p_slice(i, m):
        """Homogeneous other-degree-m part of the x_var^i coefficient of p."""
        out = {}
        for e, c in p.items():
            if e[var] == i and sum(e) - i == m:
                ne = list(e)
                ne[var] = 0
                out[tuple(ne)] = c
        if p.prec != INF and i + m >= p.prec:
            raise PrecisionInsufficient(
                "preparation needs series coefficients beyond the precision")
        return out

    def hom_mul(d1, d2):
        out = {}
        for e1, c1 in d1.items():
            for e2, c2 in d2.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, fld.zero) + c1 * c2
        return {e: c for e, c in out.items() if bool(c)}

    def hom_sub(d1, d2):
        out = dict(d1)
        for e, c in d2.items():
            out[e] = out.get(e, fld.zero) - c
        return {e: c for e, c in out.items() if bool(c)}

    c0 = p_slice(k, 0).get((0,) * n, fld.zero)
    inv_c0 = 1 / c0
    u_cache = {}
    b_cache = {}

    def u_slice(t, m):
        if (t, m) in u_cache:
            return u_cache[(t, m)]
        if m == 0:
            out = p_slice(t + k, 0)
        else:
            acc = p_slice(t + k, m)
            for j in range(k):
                for m2 in range(1, m + 1):
                    acc = hom_sub(acc, hom_mul(u_slice(t + k - j, m - m2),
                                               b_slice(j, m2)))
            out = acc
        u_cache[(t, m)] = out
        return out

    def b_slice(j, m):
        if (j, m) in b_cache:
            return b_cache[(j, m)]
        if m == 0:
            out = {}
        else:
            acc = p_slice(j, m)
            for jp in range(j + 1):
                for m2 in range(1, m + 1):
                    if jp == j and m2 == m:
                        continue
                    acc = hom_sub(acc, hom_mul(u_slice(j - jp, m - m2),
                                               b_slice(jp, m2)))
            out = {e: c * inv_c0 for e, c in acc.items()}
        b_cache[(j, m)] = out
        return out

    u_data = {}
    for t in range(prec):
        for m in range(prec - t):
            for e, c in u_slice(t, m).items():
                ne = list(e)
                ne[var] = t
                u_data[tuple(ne)] = c
    w_data = {tuple(k if i == var else 0 for i in range(n)): fld.one}
    for j in range(k):
        for m in range(1, prec - j):
            for e, c in b_slice(j, m).items():
                ne = list(e)
                ne[var] = j
                w_data[tuple(ne)] = c
    unit = MSeries(fld, n, u_data, prec)
    wpoly = MSeries(fld, n, w_data, prec)
    return WeierstrassFactorization(unit=unit, wpoly=wpoly, var=var, degree=k)


def lemma41_decompose(v, r):
    """Split v into unit * (x_s^j d_s^a) * (operator without x_s, d_s) terms.

    ``r`` picks the distinguished pair (x_{r+1}, d_{r+1}), i.e. variable
    index r.  A shear change of variables is applied first when some series
    coefficient is not in position; the matrix is part of the result.
    """
    if v.is_zero:
        raise ValueError("zero operator has no decomposition")
    n = v.nvars
    if not 0 <= r < n:
        raise ValueError("distinguished index out of range")
    var = r
    fld = v.field
    ps = list(v.terms.values())
    matrix = mat_identity(n)
    need = False
    for p in ps:
        ok, k = weierstrass_position(p, var)
        if not ok or k != p.valuation():
            need = True
            break
    if need:
        matrix = generic_change(ps, var)
        v = v.linear_change(matrix)
    terms = []
    for dexp, p in sorted(v.terms.items()):
        fac = weierstrass_prepare(p, var)
        a_s = dexp[var]
        rest_dexp = tuple(0 if i == var else e for i, e in enumerate(dexp))
        for j, bj in sorted(fac.wpoly.split_along(var).items()):
            if bj.is_zero:
                continue
            beta_e = tuple(a_s if i == var else 0 for i in range(n))
            beta = DiffOp(fld, n, {
                beta_e: MSeries.monomial(
                    1, tuple(j if i == var else 0 for i in range(n)), fld)})
            gee = DiffOp(fld, n, {rest_dexp: bj})
            terms.append(DecompositionTerm(omega=fac.unit, beta=beta, gee=gee))
    return Decomposition(terms=terms, var=var, matrix=matrix, transformed=v)


def term_shapes_ok(dec):
    """Structural constraints: beta pure in the pair, gee free of the pair,
    omega a unit."""
    var = dec.var
    for t in dec.terms:
        if not t.omega.is_unit():
            return False
        for dexp, p in t.beta.terms.items():
            if any(e for i, e in enumerate(dexp) if i != var):
                return False
            if any(any(e[i] for i in range(len(e)) if i != var)
                   for e in p.coeffs):
                return False
        if t.gee.involves(var):
            return False
    return True


def decomposition_verify(v, dec, upto=None):
    """Re-multiply the terms and compare with v (after dec's change of
    variables) using operator multiplication only."""
    n = v.nvars
    target = v
    if dec.matrix != mat_identity(n):
        target = v.linear_change(dec.matrix)
    total = DiffOp.zero(n, v.field)
    for t in dec.terms:
        total = total + (t.beta * t.gee).scale(t.omega)
    if upto is None:
        upto = min(total.min_known_prec(), target.min_known_prec())
        if upto == INF:
            return total == target
    try:
        return total.equal_mod(target, upto)
    except PrecisionInsufficient:
        return None
