"""Linear algebra over the right-Euclidean operator ring.

Row reduction of finitely generated submodules of S^(m) (S the univariate
Laurent-scalar operator ring), with the transform recorded so every verdict
is replayable: each reduced row is an explicit left combination of the input
rows, and membership returns the combination witness.

All verdicts are "at precision": a decision that would rest on a leading
coefficient invisible at the working precision comes back INDETERMINATE
instead of False.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from enum import Enum

from .ore import OreOp
from .series import INF, Laurent, PrecisionInsufficient, RingMismatch


class Verdict(Enum):
    TRUE = "true"
    FALSE = "false"
    INDETERMINATE = "indeterminate"


class ModVec:
    """Element of the free module S^(m): a tuple of operators."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        entries = tuple(entries)
        if not entries:
            raise ValueError("rank must be >= 1")
        self.entries = entries

    @classmethod
    def basis(cls, i, m, field):
        return cls([OreOp.from_scalar(int(j == i), field) for j in range(m)])

    @classmethod
    def zero(cls, m, field):
        return cls([OreOp.zero(field) for _ in range(m)])

    @property
    def rank(self):
        return len(self.entries)

    @property
    def field(self):
        return self.entries[0].field

    @property
    def is_zero(self):
        return all(e.is_zero for e in self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __add__(self, other):
        self._check(other)
        return ModVec([a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other):
        self._check(other)
        return ModVec([a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self):
        return ModVec([-a for a in self.entries])

    def lmul(self, s):
        """Left multiplication by an operator or scalar."""
        if not isinstance(s, OreOp):
            if isinstance(s, Laurent):
                return ModVec([e.scale(s) for e in self.entries])
            return ModVec([e.scale(s) for e in self.entries])
        return ModVec([s * e for e in self.entries])

    def rmul_x(self):
        return ModVec([e.rmul_x() for e in self.entries])

    def rmul_d(self):
        return ModVec([e.rmul_d() for e in self.entries])

    def _check(self, other):
        if self.rank != other.rank:
            raise RingMismatch("module rank mismatch")

    def equal_mod(self, other, upto):
        self._check(other)
        return all(a.equal_mod(b, upto) for a, b in zip(self.entries, other.entries))

    def min_known_prec(self):
        return min(e.min_known_prec() for e in self.entries)

    def __eq__(self, other):
        if not isinstance(other, ModVec):
            return NotImplemented
        return self.entries == other.entries

    def __repr__(self):
        return "ModVec" + repr(list(self.entries))


@dataclass
class SpanPresentation:
    """Finite set of generators of a submodule of S^(m)."""

    generators: list
    rank: int

    def __post_init__(self):
        if not self.generators:
            raise ValueError("presentation needs at least one generator")
        for g in self.generators:
            if g.rank != self.rank:
                raise RingMismatch("generator rank mismatch")

    @property
    def field(self):
        return self.generators[0].field


@dataclass
class ReducedForm:
    """Echelon rows plus the left transform that produced them.

    ``combos[i]`` expresses ``rows[i]`` as a left combination of the input
    rows; ``pivots`` maps each pivot column to its row index.
    """

    rows: list
    combos: list
    pivots: dict
    rank: int

    def replay(self, input_rows):
        """Re-apply the recorded transform to the input rows."""
        out = []
        for combo in self.combos:
            acc = ModVec.zero(self.rank, input_rows[0].field)
            for s, r in zip(combo, input_rows):
                if not s.is_zero:
                    acc = acc + r.lmul(s)
            out.append(acc)
        return out

    def is_identity(self):
        """Whether the reduced rows are exactly the standard basis."""
        if len(self.rows) != self.rank:
            return False
        for col in range(self.rank):
            if col not in self.pivots:
                return False
            row = self.rows[self.pivots[col]]
            for j, e in enumerate(row.entries):
                want = OreOp.from_scalar(1, row.field) if j == col else None
                if j == col:
                    if e.order != 0 or not e.as_scalar() == Laurent.one(row.field):
                        return False
                elif not e.is_zero:
                    return False
        return True


def hermite_reduce(pres):
    """Echelon form over S with recorded transform.

    Columns are processed left to right; within a column the pivot is found
    by gcrd accumulation (repeated right division of the higher-order entry
    by the lower), rows in input order, ties broken by lower d-order then
    lower Laurent valuation.  Pivots are made monic and entries of other
    pivot rows in a pivot column are reduced to remainders.
    """
    m = pres.rank
    fld = pres.field
    n = len(pres.generators)
    work = []
    for i, g in enumerate(pres.generators):
        combo = [OreOp.from_scalar(int(j == i), fld) for j in range(n)]
        work.append([g, combo])

    def sub_mul(row, q, prow):
        row[0] = row[0] - prow[0].lmul(q)
        row[1] = [a - q * b for a, b in zip(row[1], prow[1])]

    placed = []          # rows that received a pivot, in column order
    pivots = {}
    remaining = list(work)
    for col in range(m):
        live = [r for r in remaining if not r[0][col].is_zero]
        if not live:
            continue
        while len(live) > 1:
            live.sort(key=lambda r: (r[0][col].order,
                                     r[0][col].lead().bound,
                                     remaining.index(r)))
            piv = live[0]
            for r in live[1:]:
                q, _ = r[0][col].divmod_right(piv[0][col])
                sub_mul(r, q, piv)
            live = [r for r in live if not r[0][col].is_zero]
        piv = live[0]
        unit, _ = piv[0][col].normalize_monic()
        w = unit.invert()
        piv[0] = piv[0].lmul(w)
        piv[1] = [s.scale(w) for s in piv[1]]
        remaining.remove(piv)
        # reduce this column in previously placed pivot rows
        for prow in placed:
            e = prow[0][col]
            if e.is_zero or e.order < piv[0][col].order:
                continue
            q, _ = e.divmod_right(piv[0][col])
            sub_mul(prow, q, piv)
        placed.append(piv)
        pivots[col] = len(placed) - 1
    # leftover rows must be zero at precision; a nonzero leftover would mean
    # a column was skipped with content below it, impossible after full scan
    leftovers = [r for r in remaining if not r[0].is_zero]
    if leftovers:
        raise PrecisionInsufficient("row reduction left unplaced content")
    return ReducedForm(rows=[r[0] for r in placed],
                       combos=[r[1] for r in placed],
                       pivots=pivots, rank=m)


def _reduce_vector(w, red):
    """Reduce w against echelon rows; returns (remainder, coeffs per row)."""
    coeffs = [OreOp.zero(w.field) for _ in red.rows]
    for col in sorted(red.pivots):
        i = red.pivots[col]
        e = w[col]
        if e.is_zero:
            continue
        piv = red.rows[i][col]
        if e.order < piv.order:
            continue
        q, _ = e.divmod_right(piv)
        w = w - red.rows[i].lmul(q)
        coeffs[i] = coeffs[i] + q
    return w, coeffs


@dataclass
class MembershipResult:
    verdict: Verdict
    witness: list | None = None   # combination over the input generators
    remainder: object = None


def membership(w, pres):
    """Decide w in span(pres) at precision, with a combination witness."""
    if w.rank != pres.rank:
        raise RingMismatch("vector rank differs from presentation rank")
    try:
        red = hermite_reduce(pres)
        rem, coeffs = _reduce_vector(w, red)
    except PrecisionInsufficient:
        return MembershipResult(Verdict.INDETERMINATE)
    if rem.is_zero:
        n = len(pres.generators)
        witness = [OreOp.zero(w.field) for _ in range(n)]
        for q, combo in zip(coeffs, red.combos):
            if q.is_zero:
                continue
            for j in range(n):
                witness[j] = witness[j] + q * combo[j]
        return MembershipResult(Verdict.TRUE, witness=witness, remainder=rem)
    return MembershipResult(Verdict.FALSE, remainder=rem)


def module_equal(a, b):
    """Mutual membership of generators, three-valued."""
    if a.rank != b.rank:
        raise RingMismatch("rank mismatch")
    verdict = Verdict.TRUE
    for g in a.generators:
        r = membership(g, b)
        if r.verdict is Verdict.FALSE:
            return Verdict.FALSE
        if r.verdict is Verdict.INDETERMINATE:
            verdict = Verdict.INDETERMINATE
    for g in b.generators:
        r = membership(g, a)
        if r.verdict is Verdict.FALSE:
            return Verdict.FALSE
        if r.verdict is Verdict.INDETERMINATE:
            verdict = Verdict.INDETERMINATE
    return verdict


def spans_everything(pres):
    """Whether the presentation spans all of S^(m): reduced form == identity."""
    try:
        red = hermite_reduce(pres)
    except PrecisionInsufficient:
        return Verdict.INDETERMINATE
    return Verdict.TRUE if red.is_identity() else Verdict.FALSE


def colength(alpha, max_steps=None):
    """Dimension of S/S*alpha over the scalar field.

    Reduces 1, d, d^2, ... modulo right division by alpha and returns the
    index of the first residue linearly dependent on the earlier ones.
    """
    if alpha.is_zero:
        if alpha.prec != INF:
            raise PrecisionInsufficient("alpha is zero at working precision")
        raise ValueError("colength of the zero operator")
    fld = alpha.field
    limit = max_steps if max_steps is not None else alpha.order + 2
    width = max(alpha.order, 1)
    echelon = []   # list of (pivot index, residue coefficient list)
    for i in range(limit):
        _, r = OreOp.d_pow(i, fld).divmod_right(alpha)
        vec = [r.coeff(j) for j in range(width)]
        # Gaussian reduction over the Laurent scalar field
        for pidx, prow in echelon:
            c = vec[pidx]
            if not c.is_zero:
                vec = [a - c * b for a, b in zip(vec, prow)]
        nz = next((j for j, c in enumerate(vec) if not c.is_zero), None)
        if nz is None:
            return i
        inv = vec[nz].invert()
        echelon.append((nz, [c * inv for c in vec]))
    raise PrecisionInsufficient("no dependence found within the scan bound")


def brute_force_membership(w, pres, d_bound, lo, hi, check_upto):
    """Independent membership oracle by exact linear algebra.

    Searches for coefficients s_i = sum c_{i,j,e} x^e d^j (e in [lo, hi),
    j <= d_bound, rational c) with sum s_i g_i == w modulo x^check_upto.
    Only practical for tiny instances; used to cross-check
    :func:`membership`.
    """
    from fractions import Fraction
    fld = pres.field
    unknowns = []   # (gen index, d-power, x-exponent)
    cols = []
    for gi, g in enumerate(pres.generators):
        for j in range(d_bound + 1):
            for e in range(lo, hi):
                s = OreOp(fld, [Laurent.zero(fld)] * j + [Laurent.x_pow(e, fld)])
                img = g.lmul(s)
                unknowns.append((gi, j, e))
                cols.append(img)
    # equations: every (component, d-power, x-exponent) cell below check_upto
    cells = set()
    for v in cols + [w]:
        for comp, op in enumerate(v.entries):
            for j, c in enumerate(op.coeffs):
                for e, _ in c.items():
                    if e < check_upto:
                        cells.add((comp, j, e))
    cells = sorted(cells)
    rows = []
    rhs = []
    for cell in cells:
        comp, j, e = cell
        rows.append([fld.coerce(v[comp].coeff(j).coeff(e))
                     if e < v[comp].coeff(j).prec else fld.zero
                     for v in cols])
        op = w[comp]
        rhs.append(fld.coerce(op.coeff(j).coeff(e)) if e < op.coeff(j).prec
                   else fld.zero)
    # exact Gaussian elimination
    nrows, ncols = len(rows), len(cols)
    aug = [row + [rhs[i]] for i, row in enumerate(rows)]
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(nrows):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        r += 1
    for i in range(nrows):
        if all(x == 0 for x in aug[i][:ncols]) and aug[i][ncols] != 0:
            return False
    return True
