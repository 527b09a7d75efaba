"""Prime-field elements and reduction of rationals mod p."""

from fractions import Fraction

from .errors import BadPrime
from .primes import check_prime


class FpElem:
    """Residue in F_p. Arithmetic mixes freely with Python ints."""

    __slots__ = ("val", "p")

    def __init__(self, val, p):
        self.val = val % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, FpElem):
            if other.p != self.p:
                raise TypeError(f"mixing F_{self.p} and F_{other.p}")
            return other.val
        if isinstance(other, int):
            return other
        return None

    def __add__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return FpElem(self.val + v, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return FpElem(self.val - v, self.p)

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return FpElem(v - self.val, self.p)

    def __mul__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return FpElem(self.val * v, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return FpElem(self.val * pow(v, -1, self.p), self.p)

    def __rtruediv__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return FpElem(v * pow(self.val, -1, self.p), self.p)

    def __pow__(self, e):
        if e < 0:
            return FpElem(pow(self.val, e, self.p), self.p)
        return FpElem(pow(self.val, e, self.p), self.p)

    def __neg__(self):
        return FpElem(-self.val, self.p)

    def __eq__(self, other):
        if isinstance(other, FpElem):
            return self.p == other.p and self.val == other.val
        if isinstance(other, int):
            return self.val == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.val, self.p))

    def __bool__(self):
        return self.val != 0

    def __repr__(self):
        return f"{self.val} (mod {self.p})"


def fp(val, p):
    return FpElem(val, p)


def reduce_rat_mod_p(q, p):
    """Image of a rational in F_p; BadPrime when p divides the denominator."""
    q = Fraction(q)
    check_prime(p)
    if q.denominator % p == 0:
        raise BadPrime(f"denominator of {q} is divisible by {p}")
    return FpElem(q.numerator * pow(q.denominator, -1, p), p)
