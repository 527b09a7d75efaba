"""Denominator-prime profiling of exact coefficient sequences.

For each prime p up to a horizon, g_emp(p) is the largest index m such
that a_0 .. a_m all have denominators prime to p; g_emp(p) = M-1 means
the whole examined window is clean, and -1 means a_0 itself is not
p-integral. The verdicts derived from a profile are explicitly
empirical: they describe what the window shows, never a theorem.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvalidInput
from .primes import primes_upto
from .util import pmap


@dataclass(frozen=True)
class IntegralityProfile:
    M: int  # number of coefficients (or degree levels) examined
    P: int  # prime horizon
    table: dict  # prime -> g_emp(p)
    support: tuple  # primes with g_emp(p) < M-1, ascending

    def to_json_dict(self):
        return {
            "M": self.M,
            "P": self.P,
            "table": [{"p": p, "g": self.table[p]} for p in sorted(self.table)],
            "support": list(self.support),
        }

    def to_csv(self):
        lines = ["p,g_emp"]
        lines += [f"{p},{self.table[p]}" for p in sorted(self.table)]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Verdicts:
    finite_support: bool
    omega_linear_floor: Fraction
    notes: tuple = field(default_factory=tuple)

    def to_json_dict(self):
        return {
            "finite_support": self.finite_support,
            "omega_linear_floor": str(self.omega_linear_floor),
            "notes": list(self.notes),
        }


def profile(coeffs, prime_bound):
    """Integrality profile of a coefficient list over primes <= prime_bound."""
    if not coeffs:
        raise InvalidInput("empty coefficient list")
    if prime_bound < 2:
        raise InvalidInput("prime bound must be >= 2")
    dens = [Fraction(c).denominator for c in coeffs]
    m = len(dens)

    def column(p):
        for i, d in enumerate(dens):
            if d % p == 0:
                return p, i - 1
        return p, m - 1

    table = dict(pmap(column, primes_upto(prime_bound)))
    support = tuple(sorted(p for p, g in table.items() if g < m - 1))
    return IntegralityProfile(M=m, P=prime_bound, table=table, support=support)


def multivariate_profile(series, prime_bound):
    """Degree-graded profile: g_emp(p) is the largest total degree m with
    every coefficient of degree <= m p-integral."""
    if prime_bound < 2:
        raise InvalidInput("prime bound must be >= 2")
    m = series.order
    by_degree = [[] for _ in range(m)]
    for e, c in series.coeffs.items():
        by_degree[sum(e)].append(Fraction(c).denominator)

    def column(p):
        for d in range(m):
            if any(den % p == 0 for den in by_degree[d]):
                return p, d - 1
        return p, m - 1

    table = dict(pmap(column, primes_upto(prime_bound)))
    support = tuple(sorted(p for p, g in table.items() if g < m - 1))
    return IntegralityProfile(M=m, P=prime_bound, table=table, support=support)


def verdicts(prof):
    """Empirical read of a profile.

    finite_support: no support primes in the upper half (P/2, P] of the
    horizon, i.e. the support looks bounded at this horizon.
    omega_linear_floor: min of g_emp(p)/p over primes in that window, an
    empirical lower bound for the integrality slope.
    """
    window = [p for p in prof.table if 2 * p >= prof.P]
    finite = all(prof.table[p] == prof.M - 1 for p in window)
    floor = min((Fraction(prof.table[p], p) for p in window), default=Fraction(0))
    notes = []
    saturated = sum(1 for p in window if prof.table[p] == prof.M - 1)
    if saturated:
        notes.append(
            f"g_emp saturated at M-1 for {saturated} of {len(window)} window primes;"
            " the horizon may be too small to resolve the slope"
        )
    if prof.support:
        notes.append(f"{len(prof.support)} support primes within the horizon")
    return Verdicts(
        finite_support=finite, omega_linear_floor=floor, notes=tuple(notes)
    )
