"""orecert: exact differential-operator algebra with span certificates.

The package works over the skew ring S = F((x))<d> of differential
operators with truncated Laurent-series coefficients (exact rational or
rational-function scalars), and over its several-variable polynomial
cousin.  It provides:

* truncated exact series and Ore-polynomial arithmetic (:mod:`.series`,
  :mod:`.ore`),
* module linear algebra over S with three-valued answers
  (:mod:`.modlin`),
* Weierstrass preparation and operator splitting (:mod:`.weierstrass`),
* span-certificate production, checking, and witness search
  (:mod:`.certify`),
* a text grammar, canonical printer, and certificate file format
  (:mod:`.exprio`), all surfaced by the ``orecert`` CLI (:mod:`.cli`).
"""

from .certify import (Certificate, CertificateTerm, DegenerateDelta,
                      SpanGeneratorSet, WitnessResult, certificate_check,
                      lemma42_verify, principal_generator_E1, span_element,
                      stafford_reduce, theorem52_verify, witness_search)
from .exprio import (CertificateFileError, ExprError, RingSpec, parse_element,
                     parse_intore, print_element, read_certificates,
                     rolling_digest, write_certificates)
from .fields import FIELDS, QQ, QQT, RatFunc
from .modlin import (MembershipResult, ModVec, ReducedForm, SpanPresentation,
                     Verdict, brute_force_membership, colength,
                     hermite_reduce, membership, module_equal,
                     spans_everything)
from .ore import DiffOp, IntOre, OreOp, gcrd_bezout, lclm
from .series import (INF, Laurent, MSeries, PrecisionInsufficient,
                     RingMismatch, default_precision, set_default_precision)
from .weierstrass import (WeierstrassFactorization, decomposition_verify,
                          lemma41_decompose, weierstrass_position,
                          weierstrass_prepare)

__all__ = [
    "Certificate", "CertificateTerm", "CertificateFileError",
    "DegenerateDelta", "DiffOp", "ExprError", "FIELDS", "INF", "IntOre",
    "Laurent", "MSeries", "MembershipResult", "ModVec", "OreOp",
    "PrecisionInsufficient", "QQ", "QQT", "RatFunc", "ReducedForm",
    "RingMismatch", "RingSpec", "SpanGeneratorSet", "SpanPresentation",
    "Verdict", "WeierstrassFactorization", "WitnessResult",
    "brute_force_membership", "certificate_check", "colength",
    "decomposition_verify", "default_precision", "gcrd_bezout",
    "hermite_reduce", "lclm", "lemma41_decompose", "lemma42_verify",
    "membership", "module_equal", "parse_element", "parse_intore",
    "principal_generator_E1", "print_element", "read_certificates",
    "rolling_digest", "set_default_precision", "span_element",
    "spans_everything", "stafford_reduce", "theorem52_verify",
    "weierstrass_position", "weierstrass_prepare", "witness_search",
    "write_certificates",
]

__version__ = "1.0.0"
