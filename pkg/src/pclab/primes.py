"""Prime enumeration and p-adic valuations of exact rationals."""

import math
from fractions import Fraction

from .errors import NotPrime

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n):
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_upto(n):
    """All primes p <= n, ascending (simple sieve)."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i, flag in enumerate(sieve) if flag]


def check_prime(p):
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    return p


def int_valuation(n, p):
    """v_p of a nonzero integer (p assumed prime)."""
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def padic_valuation(q, p):
    """v_p(q) for q rational; +infinity (math.inf) for q = 0.

    Raises NotPrime for composite p. The infinity sentinel is a float so
    it can never be confused with a finite integer valuation.
    """
    check_prime(p)
    q = Fraction(q)
    if q == 0:
        return math.inf
    return int_valuation(q.numerator, p) - int_valuation(q.denominator, p)
