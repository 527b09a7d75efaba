"""p-curvature of linear connections and of rank-1 ODE foliations.

Linear side: for the system f' = A f with A an r x r matrix of rational
functions, the mod-p curvature matrix is built by the derivation
recursion

    A_[1] = A mod p,    A_[k+1] = d/dz A_[k] + A_[k] * A_[1],

so that f^(k) = A_[k] f mod p for flat sections; A_[p] is the curvature
matrix. The recursion convention is pinned by the closed form for
A = [c/z]: A_[k] = c(c-1)...(c-k+1)/z^k.

Foliation side: for v = d/dz + sum y_{i+1} d/dy_i + g d/dy_{n-1} and
p >= 2 one has v^p(z) = 0, so the curvature coordinates in the basis
d/dy_i of the normal bundle are just v^p(y_i) computed over F_p.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BadPrime,
    DegreeBudgetExceeded,
    NotASolution,
    NotPIntegral,
)
from .linalg import mat_is_zero, mat_map, mat_mul, mat_pow
from .poly import RationalFunction, reduce_ratfun_mod_p
from .primes import check_prime, padic_valuation, primes_upto
from .series import eval_poly_at_series, series_mod_p
from .solver import FoliationField, leaf_jet
from .util import pmap


@dataclass(frozen=True)
class ConnectionSystem:
    """f' = A f with A square over Q(z)."""

    rank: int
    matrix: tuple  # rank x rank of RationalFunction in one variable

    def __post_init__(self):
        if len(self.matrix) != self.rank or any(
            len(row) != self.rank for row in self.matrix
        ):
            raise ValueError("matrix shape does not match rank")


@dataclass(frozen=True)
class PCurvatureResult:
    p: int
    curvature: tuple  # matrix over F_p(z); None when the prime is bad
    vanishes: bool
    nilpotent: bool
    bad: bool = False

    def to_json_dict(self):
        return {
            "p": self.p,
            "vanishes": self.vanishes,
            "nilpotent": self.nilpotent,
            "bad": self.bad,
        }


def linear_pcurvature(sys, p):
    check_prime(p)
    abar = mat_map(sys.matrix, lambda rf: reduce_ratfun_mod_p(rf, p))
    var = sys.matrix[0][0].vars[0]
    cur = abar
    for _ in range(p - 1):
        cur = _mat_add(mat_map(cur, lambda rf: rf.deriv(var)), mat_mul(cur, abar))
    vanishes = mat_is_zero(cur)
    nilpotent = vanishes or mat_is_zero(mat_pow(cur, sys.rank))
    return PCurvatureResult(p=p, curvature=cur, vanishes=vanishes, nilpotent=nilpotent)


def _mat_add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


@dataclass(frozen=True)
class SweepSummary:
    vanish: int
    nilpotent_only: int
    neither: int
    bad_primes: tuple

    def to_json_dict(self):
        return {
            "vanish": self.vanish,
            "nilpotent_only": self.nilpotent_only,
            "neither": self.neither,
            "bad_primes": list(self.bad_primes),
        }


def pcurvature_sweep(sys, prime_bound=None, primes=None):
    """Per-prime curvature verdicts plus tallies; bad primes kept separate."""
    if primes is None:
        primes = primes_upto(prime_bound)

    def one(p):
        try:
            return linear_pcurvature(sys, p)
        except BadPrime:
            return PCurvatureResult(
                p=p, curvature=None, vanishes=False, nilpotent=False, bad=True
            )

    results = pmap(one, primes)
    summary = SweepSummary(
        vanish=sum(1 for r in results if not r.bad and r.vanishes),
        nilpotent_only=sum(1 for r in results if not r.bad and r.nilpotent and not r.vanishes),
        neither=sum(1 for r in results if not r.bad and not r.nilpotent),
        bad_primes=tuple(r.p for r in results if r.bad),
    )
    return results, summary


DEFAULT_TERM_BUDGET = 5000


def foliation_pcurvature(field, p, term_budget=DEFAULT_TERM_BUDGET):
    """[v^p(y_0), ..., v^p(y_{n-1})] over F_p; all zero iff p-closed at p.

    Intermediate rational functions are cancelled each step and a term
    budget guards against degree blowup (desk-scale regime is p <= 13).
    """
    check_prime(p)
    gbar = reduce_ratfun_mod_p(field.g, p)
    n = field.n
    vars = gbar.vars

    def v_apply(w):
        out = w.deriv("z")
        for i in range(n - 1):
            out = out + _fp_var(vars, f"y{i+1}", p) * w.deriv(f"y{i}")
        out = out + gbar * w.deriv(f"y{n-1}")
        out = out.reduced()
        if out.term_count() > term_budget:
            raise DegreeBudgetExceeded(
                f"intermediate has {out.term_count()} terms (budget {term_budget})"
            )
        return out

    results = []
    for i in range(n):
        w = _fp_var(vars, f"y{i}", p)
        for _ in range(p):
            w = v_apply(w)
        results.append(w)
    return results


def _fp_var(vars, name, p):
    from .field import FpElem
    from .poly import Poly

    return RationalFunction.from_poly(Poly.variable(vars, name, FpElem(1, p)))


def p_power_leaf_check(field, leaf, p):
    """Does the curvature of the foliation vanish along the reduced leaf?

    leaf: univariate series over Q, exact to its truncation order T,
    satisfying the encoded ODE (checked; NotASolution otherwise).
    Composes each v^p(y_i) with the mod-p jet z -> (z, f, f', ...) and
    tests vanishing mod z^(T-p); composing a degree-p differential
    expression with a series exact to order T is only trustworthy to
    order T-p.

    A visibly nonzero composition within the p-integral prefix of the
    leaf decides False immediately; certifying True requires the whole
    window to be p-integral (NotPIntegral otherwise).
    """
    check_prime(p)
    t_order = leaf.order
    if t_order < 2 * p:
        raise NotPIntegral(f"need truncation order >= 2p = {2*p}, got {t_order}")
    n = field.n

    jet_q = _jet_from_leaf(field, leaf)
    _check_solution(field, jet_q, t_order)

    prefix = t_order
    for k, c in enumerate(leaf.coeff_list()):
        if padic_valuation(Fraction(c), p) < 0:
            prefix = k
            break

    window = t_order - p
    comps = foliation_pcurvature(field, p)

    usable = min(prefix, t_order)
    jet_mod = [series_mod_p(s.truncate(min(usable, s.order)), p) for s in jet_q]
    assign = {"z": series_mod_p(leaf_var(leaf, usable), p)}
    for i in range(n):
        assign[f"y{i}"] = jet_mod[i].truncate(min(usable, jet_mod[i].order))
    check_order = min(window, min(s.order for s in assign.values()))

    all_zero = True
    for comp in comps:
        num_val = eval_poly_at_series(comp.num, assign).truncate(check_order)
        den_val = eval_poly_at_series(comp.den, assign)
        if den_val.is_zero():
            raise BadPrime("pole divisor of the curvature contains the leaf mod p")
        if not num_val.is_zero():
            all_zero = False
            break

    if not all_zero:
        return False
    if prefix < t_order:
        raise NotPIntegral(
            f"leaf is p-integral only to index {prefix}; cannot certify vanishing"
        )
    return True


def leaf_var(leaf, order):
    from .series import TruncatedSeries

    return TruncatedSeries.variable(leaf.vars, min(order, leaf.order), leaf.vars[0])


def _jet_from_leaf(field, leaf):
    jets = [leaf]
    for _ in range(field.n - 1):
        jets.append(jets[-1].deriv(leaf.vars[0]))
    return jets


def _check_solution(field, jet, t_order):
    n = field.n
    target_order = jet[-1].order
    assign = {"z": leaf_var(jet[0], target_order)}
    for i in range(n):
        assign[f"y{i}"] = jet[i].truncate(target_order)
    num_val = eval_poly_at_series(field.g.num, assign)
    den_val = eval_poly_at_series(field.g.den, assign)
    top = jet[-1].deriv(jet[0].vars[0])
    residual = top * den_val.truncate(top.order) - num_val.truncate(top.order)
    if not residual.is_zero():
        raise NotASolution("series does not satisfy the encoded ODE")


def omega_floor_from_vanishing(profile_table, p, m):
    """Expected integrality floor when the p-curvature vanishes: the first
    m coefficients are clean at least up to index p^2 - 1."""
    return profile_table.get(p, -1) >= min(m - 1, p * p - 1)
