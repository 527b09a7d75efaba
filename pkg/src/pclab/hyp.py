"""Classification of generalized hypergeometric parameter tuples.

Three verdicts for kFk-1 parameters (a_1..a_k; b_1..b_{k-1}), all decided
by exact rational arithmetic on the parameters mod 1:

* globally bounded (Christol's crossing-count criterion),
* algebraic (Beukers-Heckman interlacing, irreducible parameters only),
* finite local monodromy at 0 (distinct eigenvalue exponents of g_0).

All three quantify over the twists Delta coprime to N, the lcm of the
parameter denominators, with b_k := 1 appended throughout. Eigenvalues
of monodromy are exp(2 pi i r) and are represented by their exact
rational exponent r; equality of roots of unity is equality mod 1.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .errors import BadParams, ReducibleParameters
from .util import pmap


def frac01(r):
    """The representative of r mod 1 lying in the half-open interval (0, 1]."""
    r = Fraction(r)
    f = r - (r.numerator // r.denominator)
    return f if f != 0 else Fraction(1)


@dataclass(frozen=True)
class HypParams:
    a: tuple  # length k
    b: tuple  # length k-1

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(Fraction(x) for x in self.a))
        object.__setattr__(self, "b", tuple(Fraction(x) for x in self.b))
        if not self.a:
            raise BadParams("need at least one upper parameter")
        if len(self.b) != len(self.a) - 1:
            raise BadParams(
                f"expected {len(self.a) - 1} lower parameters, got {len(self.b)}"
            )
        for x in self.b:
            if x.denominator == 1 and x <= 0:
                raise BadParams(f"lower parameter {x} is a non-positive integer")

    @property
    def k(self):
        return len(self.a)

    @property
    def b_full(self):
        return self.b + (Fraction(1),)

    @property
    def N(self):
        return lcm(*(x.denominator for x in self.a + self.b), 1)

    def twists(self):
        n = self.N
        return [d for d in range(1, n + 1) if gcd(d, n) == 1]

    def is_irreducible(self):
        return all(
            (ai - bj).denominator != 1 for ai in self.a for bj in self.b_full
        )


@dataclass(frozen=True)
class TwistEvidence:
    delta: int
    a_sorted: tuple
    b_sorted: tuple
    ok: bool
    detail: str = ""

    def to_json_dict(self):
        return {
            "delta": self.delta,
            "a": [str(x) for x in self.a_sorted],
            "b": [str(x) for x in self.b_sorted],
            "ok": self.ok,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class CriterionResult:
    ok: bool
    per_twist: tuple

    def __bool__(self):
        return self.ok


def _twisted(params, delta):
    a = tuple(sorted(frac01(delta * x) for x in params.a))
    b = tuple(sorted(frac01(delta * x) for x in params.b_full))
    return a, b


def christol_bounded(params):
    """Crossing-count test for globally bounded coefficients.

    For every twist and every level lambda in (0, 1], the number of
    twisted upper parameters <= lambda must be at least the number of
    twisted lower parameters <= lambda. Only the finitely many merged
    parameter values need checking (both counts are right-continuous
    step functions).
    """
    rows = []
    ok = True
    for delta in params.twists():
        a, b = _twisted(params, delta)
        detail = ""
        good = True
        for lam in sorted(set(a + b)):
            na = sum(1 for x in a if x <= lam)
            nb = sum(1 for x in b if x <= lam)
            if na < nb:
                good = False
                detail = f"fails at lambda = {lam}: {na} < {nb}"
                break
        rows.append(TwistEvidence(delta, a, b, good, detail))
        ok = ok and good
    return CriterionResult(ok, tuple(rows))


def bh_algebraic(params):
    """Strict interlacing test for algebraicity (Beukers-Heckman).

    Requires irreducible parameters: a_i - b_j never an integer, with
    b_k = 1 included. For every twist the sorted twisted a's and b's must
    strictly alternate a < b < a < b < ... < b = 1.
    """
    if not params.is_irreducible():
        raise ReducibleParameters(
            "a_i - b_j is an integer for some pair; interlacing test not applicable"
        )
    rows = []
    ok = True
    for delta in params.twists():
        a, b = _twisted(params, delta)
        good = True
        detail = ""
        prev = Fraction(0)
        for x, y in zip(a, b):
            if not (prev < x < y):
                good = False
                detail = f"no strict interlace at ({x}, {y})"
                break
            prev = y
        if good and b[-1] != 1:
            good = False
            detail = "largest twisted lower parameter is not 1"
        rows.append(TwistEvidence(delta, a, b, good, detail))
        ok = ok and good
    return CriterionResult(ok, tuple(rows))


@dataclass(frozen=True)
class MonodromyData:
    alphas: tuple  # exponents of the eigenvalues of g_infinity, mod 1
    betas: tuple  # exponents of the eigenvalues of g_0^(-1), mod 1
    det_g1_exponent: Fraction
    finite_order: bool
    order: int | None

    def to_json_dict(self):
        return {
            "alphas": [str(x) for x in self.alphas],
            "betas": [str(x) for x in self.betas],
            "det_g1_exponent": str(self.det_g1_exponent),
            "finite_order": self.finite_order,
            "order": self.order,
        }


def monodromy0(params):
    """Eigenvalue data and the finite-order test for the monodromy at 0.

    Each eigenvalue of g_0 carries a single Jordan block, so g_0 has
    finite order iff the beta exponents are pairwise distinct (all
    eigenvalues are roots of unity); the order is then the lcm of the
    exponent denominators.
    """
    alphas = tuple(frac01(x) for x in params.a)
    betas = tuple(frac01(x) for x in params.b_full)
    distinct = len(set(betas)) == len(betas)
    order = lcm(*(x.denominator for x in betas)) if distinct else None
    det_exp = frac01(sum(params.b_full) - sum(params.a))
    return MonodromyData(
        alphas=alphas,
        betas=betas,
        det_g1_exponent=det_exp,
        finite_order=distinct,
        order=order,
    )


@dataclass(frozen=True)
class ClassificationReport:
    params: HypParams
    globally_bounded: bool
    algebraic: bool
    monodromy0_finite: bool
    monodromy0_order: int | None
    christol_evidence: tuple
    interlacing_evidence: tuple
    monodromy: MonodromyData

    def to_json_dict(self):
        return {
            "a": [str(x) for x in self.params.a],
            "b": [str(x) for x in self.params.b],
            "N": self.params.N,
            "globally_bounded": self.globally_bounded,
            "algebraic": self.algebraic,
            "monodromy0_finite": self.monodromy0_finite,
            "monodromy0_order": self.monodromy0_order,
            "per_delta": {
                "christol": [e.to_json_dict() for e in self.christol_evidence],
                "interlacing": [e.to_json_dict() for e in self.interlacing_evidence],
            },
            "monodromy0": self.monodromy.to_json_dict(),
        }


class ConsistencyViolation(AssertionError):
    """bounded and non-algebraic and finite monodromy at 0: impossible."""


def classify(params):
    bounded = christol_bounded(params)
    algebraic = bh_algebraic(params)  # raises ReducibleParameters when unusable
    mono = monodromy0(params)
    if bounded.ok and not algebraic.ok and mono.finite_order:
        raise ConsistencyViolation(
            f"forbidden verdict triple for a={params.a}, b={params.b}"
        )
    return ClassificationReport(
        params=params,
        globally_bounded=bounded.ok,
        algebraic=algebraic.ok,
        monodromy0_finite=mono.finite_order,
        monodromy0_order=mono.order,
        christol_evidence=bounded.per_twist,
        interlacing_evidence=algebraic.per_twist,
        monodromy=mono,
    )


def irreducible_tuples(max_k, max_n):
    """All irreducible parameter tuples (canonical residues in (0,1]) with
    k <= max_k and lcm of denominators <= max_n, deduplicated."""
    from itertools import combinations_with_replacement

    seen = set()
    out = []
    for n in range(1, max_n + 1):
        values = [Fraction(r, n) for r in range(1, n + 1)]
        for k in range(1, max_k + 1):
            for a in combinations_with_replacement(values, k):
                for b in combinations_with_replacement(values, k - 1):
                    key = (a, b)
                    if key in seen:
                        continue
                    seen.add(key)
                    try:
                        params = HypParams(a, b)
                    except BadParams:
                        continue
                    if params.N > max_n:
                        continue
                    if params.is_irreducible():
                        out.append(params)
    return out


def consistency_sweep(max_k, max_n):
    """Run classify over the irreducible locus; raises on any forbidden
    triple. Returns tallies of the verdict combinations."""
    tallies = {}

    def one(params):
        rep = classify(params)
        return (rep.globally_bounded, rep.algebraic, rep.monodromy0_finite)

    for key in pmap(one, irreducible_tuples(max_k, max_n)):
        tallies[key] = tallies.get(key, 0) + 1
    return tallies
