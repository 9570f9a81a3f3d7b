"""Command-line surface.

One subcommand per public operation; all element input is the expression
grammar of :mod:`orecert.exprio`, all output is line-oriented ``key = value``
text (identical in ``--format text`` and ``--format machine``; the machine
contract is simply that keys and their order are stable).

Exit codes: 0 success / valid, 1 definite negative (invalid, false,
bound-exhausted, degenerate input), 2 indeterminate (insufficient working
precision), 3 usage or parse error.

The default working precision is 16, overridable by the environment
variable ``ORECERT_PRECISION`` and by ``--precision`` (which wins).
"""

from __future__ import annotations

import argparse
import os
import sys

from .certify import (Certificate, DegenerateDelta, SpanGeneratorSet,
                      certificate_check, lemma42_verify,
                      principal_generator_E1, stafford_reduce,
                      theorem52_verify, witness_search)
from .exprio import (CertificateFileError, ExprError, RingSpec, parse_element,
                     print_element, read_certificates, write_certificates)
from .modlin import (ModVec, SpanPresentation, Verdict, colength,
                     hermite_reduce, membership)
from .ore import DiffOp, OreOp, gcrd_bezout, lclm
from .series import PrecisionInsufficient, set_default_precision
from .weierstrass import (decomposition_verify, lemma41_decompose,
                          weierstrass_position, weierstrass_prepare)

ENV_PRECISION = "ORECERT_PRECISION"

_EXIT = {Verdict.TRUE: 0, Verdict.FALSE: 1, Verdict.INDETERMINATE: 2}


class _ArgParser(argparse.ArgumentParser):
    """argparse with the documented usage-error exit code."""

    def error(self, message):
        self.exit(3, f"{self.prog}: error: {message}\n")


def _build_parser():
    common = _ArgParser(add_help=False)
    common.add_argument("--precision", type=int, default=None,
                        help="working precision (default 16 or "
                             f"${ENV_PRECISION})")
    common.add_argument("--ring", default="1,QQ",
                        help="ring spec 'n,field' (fields: QQ, QQt)")
    common.add_argument("--format", choices=("text", "machine"),
                        default="text", help="output format")
    common.add_argument("--out", default=None, help="write output to a file")

    top = _ArgParser(prog="orecert",
                     description="operator algebra and span certificates")
    sub = top.add_subparsers(dest="command", required=True,
                             parser_class=_ArgParser)

    def cmd(name, help_, *pos, **kw):
        p = sub.add_parser(name, parents=[common], help=help_)
        for args, opts in pos:
            p.add_argument(*args, **opts)
        return p

    cmd("mul", "operator product", (("a",), {}), (("b",), {}))
    cmd("apply", "operator acting on a series", (("a",), {}), (("f",), {}))
    cmd("divide", "right division b = q*a + r",
        (("b",), {}), (("a",), {}))
    cmd("gcrd", "greatest common right divisor with Bezout data",
        (("a",), {}), (("b",), {}))
    cmd("lclm", "least common left multiple with cofactors",
        (("a",), {}), (("b",), {}))
    cmd("commx", "nu-fold commutator with x", (("a",), {}),
        (("nu",), {"type": int}))
    cmd("commd", "nu-fold commutator with d", (("a",), {}),
        (("nu",), {"type": int}))
    cmd("hermite", "row-reduce module generators (entries comma-separated)",
        (("gens",), {"nargs": "+"}))
    cmd("member", "membership of a vector in a generated submodule",
        (("w",), {}), (("gens",), {"nargs": "+"}))
    cmd("colength", "dimension of S/S*alpha", (("alpha",), {}))

    p = cmd("wprep", "Weierstrass preparation", (("p",), {}))
    p.add_argument("--var", type=int, default=1,
                   help="distinguished variable index (1-based)")
    p = cmd("decompose", "split an operator along one variable pair",
            (("v",), {}))
    p.add_argument("--r", type=int, default=0,
                   help="distinguished index is r+1 (0-based r)")

    p = cmd("reduce", "produce span certificates for every basis vector")
    p.add_argument("--alpha", required=True)
    p.add_argument("--delta", action="append", required=True)

    cmd("check", "verify a certificate file", (("file",), {}))

    p = cmd("witness", "bounded search for a spanning witness f")
    p.add_argument("--kind", required=True,
                   choices=("lemma33", "cor34", "lemma35"))
    p.add_argument("--delta", action="append", required=True)
    p.add_argument("--rho", default=None)
    p.add_argument("--alpha", default=None)
    p.add_argument("--mgen", action="append", default=[],
                   help="generator of M (lemma33), entries comma-separated")
    p.add_argument("--bound", type=int, default=3)

    cmd("verify42", "is rho*a in D_1*q for each a?",
        (("rho",), {}), (("q",), {}), (("a",), {"nargs": "+"}))
    cmd("gen1", "single generator with Bezout data (n = 1)",
        (("gens",), {"nargs": "+"}))
    cmd("verify52", "two-generator identity check (n = 1)",
        (("a",), {}), (("b",), {}), (("c",), {}),
        (("d",), {}), (("e",), {}))
    return top


def _emit(stream, pairs):
    for k, v in pairs:
        stream.write(f"{k} = {v}\n")


def _parse_vector(text, ring):
    return ModVec([parse_element(part, ring) for part in text.split(",")])


def _series_arg(el, ring):
    """Extract the pure-series content of a parsed element."""
    if isinstance(el, OreOp):
        return el.as_scalar()
    zero_e = (0,) * ring.nvars
    if any(e != zero_e for e in el.terms):
        raise ExprError("expected a series, found derivation terms")
    from .series import MSeries
    return el.terms.get(zero_e, MSeries.zero(ring.nvars, ring.field))


def _run(args, out):
    ring = RingSpec.parse(args.ring)
    cmdname = args.command

    if cmdname == "mul":
        a = parse_element(args.a, ring)
        b = parse_element(args.b, ring)
        _emit(out, [("product", print_element(a * b))])
        return 0
    if cmdname == "apply":
        a = parse_element(args.a, ring)
        f = _series_arg(parse_element(args.f, ring), ring)
        _emit(out, [("result", print_element(a.apply(f)))])
        return 0
    if cmdname == "divide":
        b = parse_element(args.b, ring)
        a = parse_element(args.a, ring)
        q, r = b.divmod_right(a)
        _emit(out, [("quotient", print_element(q)),
                    ("remainder", print_element(r))])
        return 0
    if cmdname == "gcrd":
        a = parse_element(args.a, ring)
        b = parse_element(args.b, ring)
        g, u, v = gcrd_bezout(a, b)
        _emit(out, [("gcrd", print_element(g)),
                    ("cofactor.a", print_element(u)),
                    ("cofactor.b", print_element(v))])
        return 0
    if cmdname == "lclm":
        a = parse_element(args.a, ring)
        b = parse_element(args.b, ring)
        m, s, t = lclm(a, b)
        _emit(out, [("lclm", print_element(m)),
                    ("cofactor.a", print_element(s)),
                    ("cofactor.b", print_element(t))])
        return 0
    if cmdname in ("commx", "commd"):
        a = parse_element(args.a, ring)
        if args.nu < 1:
            raise ExprError("nu must be >= 1")
        res = a.comm_x(args.nu) if cmdname == "commx" else a.comm_d(args.nu)
        _emit(out, [("result", print_element(res))])
        return 0
    if cmdname == "hermite":
        gens = [_parse_vector(g, ring) for g in args.gens]
        pres = SpanPresentation(generators=gens, rank=gens[0].rank)
        red = hermite_reduce(pres)
        pairs = [("rows", str(len(red.rows)))]
        for i, row in enumerate(red.rows):
            pairs.append((f"row.{i+1}",
                          " , ".join(print_element(e) for e in row.entries)))
        pairs.append(("pivots", " ".join(
            f"{c+1}:{r+1}" for c, r in sorted(red.pivots.items()))))
        _emit(out, pairs)
        return 0
    if cmdname == "member":
        w = _parse_vector(args.w, ring)
        gens = [_parse_vector(g, ring) for g in args.gens]
        pres = SpanPresentation(generators=gens, rank=w.rank)
        res = membership(w, pres)
        pairs = [("member", res.verdict.value)]
        if res.witness is not None:
            for i, s in enumerate(res.witness):
                pairs.append((f"witness.{i+1}", print_element(s)))
        _emit(out, pairs)
        return _EXIT[res.verdict]
    if cmdname == "colength":
        alpha = parse_element(args.alpha, ring)
        _emit(out, [("colength", str(colength(alpha)))])
        return 0
    if cmdname == "wprep":
        p = _series_arg(parse_element(args.p, ring), ring)
        var = args.var - 1
        if not 0 <= var < ring.nvars:
            raise ExprError("--var outside the ring arity")
        ok, k = weierstrass_position(p, var)
        if not ok:
            _emit(out, [("in_position", "false")])
            return 1
        fac = weierstrass_prepare(p, var)
        _emit(out, [("in_position", "true"),
                    ("degree", str(fac.degree)),
                    ("unit", print_element(fac.unit)),
                    ("wpoly", print_element(fac.wpoly))])
        return 0
    if cmdname == "decompose":
        v = parse_element(args.v, ring)
        if not isinstance(v, DiffOp):
            v = DiffOp.from_ore(v)
        if not 0 <= args.r < ring.nvars:
            raise ExprError("--r outside the ring arity")
        dec = lemma41_decompose(v, args.r)
        pairs = [("terms", str(len(dec.terms))),
                 ("matrix", " ; ".join(
                     " ".join(str(c) for c in row) for row in dec.matrix))]
        for i, t in enumerate(dec.terms):
            pairs.append((f"term.{i+1}.omega", print_element(t.omega)))
            pairs.append((f"term.{i+1}.beta", print_element(t.beta)))
            pairs.append((f"term.{i+1}.g", print_element(t.gee)))
        ok = decomposition_verify(v, dec)
        verdict = (Verdict.TRUE if ok else
                   Verdict.INDETERMINATE if ok is None else Verdict.FALSE)
        pairs.append(("verified", verdict.value))
        _emit(out, pairs)
        return _EXIT[verdict]
    if cmdname == "reduce":
        alpha = parse_element(args.alpha, ring)
        deltas = tuple(parse_element(d, ring) for d in args.delta)
        ctx = SpanGeneratorSet(alpha=alpha, deltas=deltas)
        stats = {}
        certs = stafford_reduce(ctx, stats=stats)
        text = write_certificates(certs)
        out.write(text)
        return 0
    if cmdname == "check":
        with open(args.file, "r", encoding="utf-8") as fh:
            text = fh.read()
        certs = read_certificates(text)
        verdicts = [certificate_check(c) for c in certs]
        pairs = [(f"target.{c.target+1}", v.value)
                 for c, v in zip(certs, verdicts)]
        overall = (Verdict.FALSE if Verdict.FALSE in verdicts else
                   Verdict.INDETERMINATE if Verdict.INDETERMINATE in verdicts
                   else Verdict.TRUE)
        pairs.append(("overall", overall.value))
        _emit(out, pairs)
        return _EXIT[overall]
    if cmdname == "witness":
        deltas = [parse_element(d, ring) for d in args.delta]
        rho = parse_element(args.rho, ring) if args.rho else None
        alpha = parse_element(args.alpha, ring) if args.alpha else None
        mpres = None
        if args.kind == "lemma33":
            if alpha is None or not args.mgen:
                raise ExprError("lemma33 needs --alpha and --mgen")
            gens = [_parse_vector(g, ring) for g in args.mgen]
            mpres = SpanPresentation(generators=gens, rank=len(deltas))
        elif rho is None:
            raise ExprError(f"{args.kind} needs --rho")
        res = witness_search(args.kind, deltas, rho=rho, alpha=alpha,
                             mpres=mpres, bound=args.bound)
        pairs = [("status", res.status)]
        if res.f is not None:
            pairs.append(("f", print_element(res.f)))
        pairs.append(("candidates", str(len(res.transcript))))
        _emit(out, pairs)
        return {"found": 0, "bound-exhausted": 1, "indeterminate": 2}[res.status]
    if cmdname == "verify42":
        rho = parse_element(args.rho, ring)
        q = parse_element(args.q, ring)
        a_list = [parse_element(a, ring) for a in args.a]
        verdicts = lemma42_verify(rho, q, a_list)
        _emit(out, [(f"a.{i+1}", v.value) for i, v in enumerate(verdicts)])
        if Verdict.FALSE in verdicts:
            return 1
        if Verdict.INDETERMINATE in verdicts:
            return 2
        return 0
    if cmdname == "gen1":
        gens = [parse_element(g, ring) for g in args.gens]
        g, coeffs = principal_generator_E1(gens)
        pairs = [("generator", print_element(g))]
        for i, c in enumerate(coeffs):
            pairs.append((f"bezout.{i+1}", print_element(c)))
        _emit(out, pairs)
        return 0
    if cmdname == "verify52":
        els = [parse_element(getattr(args, k), ring) for k in "abcde"]
        verdict, data = theorem52_verify(*els)
        pairs = [("verdict", verdict.value)]
        if data is not None:
            pairs.append(("gcrd", print_element(data["g"])))
            pairs.append(("quotient", print_element(data["q"])))
        _emit(out, pairs)
        return _EXIT[verdict]
    raise ExprError(f"unknown command {cmdname!r}")


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 3

    precision = args.precision
    if precision is None and os.environ.get(ENV_PRECISION):
        try:
            precision = int(os.environ[ENV_PRECISION])
        except ValueError:
            sys.stderr.write(f"orecert: bad {ENV_PRECISION} value\n")
            return 3
    if precision is not None:
        try:
            set_default_precision(precision)
        except ValueError as exc:
            sys.stderr.write(f"orecert: {exc}\n")
            return 3

    close = None
    if args.out:
        out = open(args.out, "w", encoding="utf-8")
        close = out
    else:
        out = sys.stdout
    try:
        return _run(args, out)
    except (ExprError, ValueError) as exc:
        if isinstance(exc, CertificateFileError):
            sys.stderr.write(f"orecert: {exc}\n")
            return 1
        sys.stderr.write(f"orecert: {exc}\n")
        return 3
    except DegenerateDelta as exc:
        sys.stderr.write(f"orecert: degenerate input: {exc}\n")
        return 1
    except PrecisionInsufficient as exc:
        sys.stderr.write(f"orecert: precision insufficient: {exc}\n")
        return 2
    finally:
        if close is not None:
            close.close()


if __name__ == "__main__":
    sys.exit(main())
