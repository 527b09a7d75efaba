"""Truncated power series with exact coefficients.

A TruncatedSeries stores coefficients for all multi-indices of total
degree strictly below `order` (the truncation bound). Binary operations
take the min of the operand orders, the usual worst-case bookkeeping;
multiplication by a plain monomial raises the order, since the unknown
tail shifts up with the known part.
"""

from fractions import Fraction

from .errors import VariableMismatch
from .field import FpElem, reduce_rat_mod_p
from .poly import Poly, RationalFunction


class TruncatedSeries:
    __slots__ = ("vars", "order", "coeffs")

    def __init__(self, vars, order, coeffs):
        self.vars = tuple(vars)
        self.order = order
        self.coeffs = {
            e: c for e, c in coeffs.items() if c != 0 and sum(e) < order
        }

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, vars, order):
        return cls(vars, order, {})

    @classmethod
    def const(cls, vars, order, c):
        vars = tuple(vars)
        return cls(vars, order, {(0,) * len(vars): c})

    @classmethod
    def variable(cls, vars, order, name, one=Fraction(1)):
        vars = tuple(vars)
        i = vars.index(name)
        e = [0] * len(vars)
        e[i] = 1
        return cls(vars, order, {tuple(e): one})

    @classmethod
    def from_coeff_list(cls, name, coeffs, order=None):
        """Univariate series from a list indexed by exponent."""
        if order is None:
            order = len(coeffs)
        return cls((name,), order, {(k,): c for k, c in enumerate(coeffs)})

    @classmethod
    def from_poly(cls, p, order):
        return cls(p.vars, order, dict(p.terms))

    # -- accessors ------------------------------------------------------

    def coeff(self, e, zero=Fraction(0)):
        if isinstance(e, int):
            e = (e,)
        return self.coeffs.get(tuple(e), zero)

    def coeff_list(self, upto=None, zero=Fraction(0)):
        """Univariate coefficients [a_0 .. a_{upto-1}]."""
        if len(self.vars) != 1:
            raise ValueError("coeff_list is univariate-only")
        n = self.order if upto is None else min(upto, self.order)
        return [self.coeffs.get((k,), zero) for k in range(n)]

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def homogeneous_part(self, d):
        return {e: c for e, c in self.coeffs.items() if sum(e) == d}

    def valuation(self):
        """Smallest total degree with a nonzero coefficient; None if 0."""
        return min((sum(e) for e in self.coeffs), default=None)

    # -- arithmetic -----------------------------------------------------

    def _check(self, other):
        if self.vars != other.vars:
            raise VariableMismatch(f"{self.vars} vs {other.vars}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, FpElem)):
            other = TruncatedSeries.const(self.vars, self.order, other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check(other)
        order = min(self.order, other.order)
        coeffs = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = coeffs.get(e, 0) + c
            if s == 0:
                coeffs.pop(e, None)
            else:
                coeffs[e] = s
        return TruncatedSeries(self.vars, order, coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return TruncatedSeries(
            self.vars, self.order, {e: -c for e, c in self.coeffs.items()}
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, FpElem)):
            return self.scale(other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check(other)
        order = min(self.order, other.order)
        coeffs = {}
        for e1, c1 in self.coeffs.items():
            d1 = sum(e1)
            for e2, c2 in other.coeffs.items():
                if d1 + sum(e2) >= order:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                s = coeffs.get(e, 0) + c1 * c2
                if s == 0:
                    coeffs.pop(e, None)
                else:
                    coeffs[e] = s
        return TruncatedSeries(self.vars, order, coeffs)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, FpElem)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c):
        if c == 0:
            return TruncatedSeries.zero(self.vars, self.order)
        return TruncatedSeries(
            self.vars, self.order, {e: c * v for e, v in self.coeffs.items()}
        )

    def mul_monomial(self, exps, c=1):
        """Multiply by c * x^exps. Exact, so the order goes up by |exps|."""
        shift = sum(exps)
        coeffs = {}
        for e, v in self.coeffs.items():
            ne = tuple(a + b for a, b in zip(e, exps))
            coeffs[ne] = c * v
        return TruncatedSeries(self.vars, self.order + shift, coeffs)

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power; use inverse() first")
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        if result is None:
            one = Fraction(1)
            for c in self.coeffs.values():
                one = _one_like(c)
                break
            return TruncatedSeries.const(self.vars, self.order, one)
        return result

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.vars == other.vars
            and self.order == other.order
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.vars, self.order, frozenset(self.coeffs.items())))

    # -- calculus -------------------------------------------------------

    def deriv(self, name):
        """Formal partial derivative; one order of accuracy is lost."""
        i = self.vars.index(name)
        coeffs = {}
        for e, c in self.coeffs.items():
            if e[i] > 0:
                ne = e[:i] + (e[i] - 1,) + e[i + 1 :]
                coeffs[ne] = c * e[i]
        return TruncatedSeries(self.vars, max(self.order - 1, 0), coeffs)

    def integrate(self, name):
        """Antiderivative with zero constant term (characteristic 0 only)."""
        i = self.vars.index(name)
        coeffs = {}
        for e, c in self.coeffs.items():
            ne = e[:i] + (e[i] + 1,) + e[i + 1 :]
            coeffs[ne] = c * Fraction(1, e[i] + 1)
        return TruncatedSeries(self.vars, self.order + 1, coeffs)

    def truncate(self, order):
        if order >= self.order:
            return self
        return TruncatedSeries(self.vars, order, self.coeffs)

    def inverse(self):
        """Multiplicative inverse; requires a unit constant term.

        Newton doubling: x -> x(2 - f x), valid over any coefficient field.
        """
        zero_exp = (0,) * len(self.vars)
        c0 = self.coeffs.get(zero_exp)
        if not c0:
            raise ZeroDivisionError("series has no unit constant term")
        inv = TruncatedSeries(self.vars, 1, {zero_exp: 1 / c0})
        prec = 1
        while prec < self.order:
            prec = min(2 * prec, self.order)
            f = self.truncate(prec)
            inv = TruncatedSeries(inv.vars, prec, inv.coeffs)
            inv = inv * (_two_series(c0, self.vars, prec) - f * inv)
        return inv

    def __repr__(self):
        if not self.coeffs:
            return f"O(deg {self.order})"
        parts = []
        for e in sorted(self.coeffs, key=lambda t: (sum(t), t)):
            c = self.coeffs[e]
            mono = "*".join(
                f"{v}^{k}" if k > 1 else v for v, k in zip(self.vars, e) if k
            )
            parts.append(f"({c})*{mono}" if mono else f"({c})")
        return " + ".join(parts) + f" + O(deg {self.order})"


def _one_like(c):
    if isinstance(c, FpElem):
        return FpElem(1, c.p)
    return Fraction(1)


def _two_series(sample, vars, order):
    two = _one_like(sample) + _one_like(sample)
    return TruncatedSeries.const(vars, order, two)


def eval_poly_at_series(p, assign):
    """Evaluate a Poly with every variable bound to a TruncatedSeries.

    All bound series must share a variable tuple and an order.
    """
    sample = next(iter(assign.values()))
    vars, order = sample.vars, sample.order
    result = TruncatedSeries.zero(vars, order)
    powers = {}
    for e, c in p.terms.items():
        term = None
        for name, k in zip(p.vars, e):
            if not k:
                continue
            key = (name, k)
            if key not in powers:
                powers[key] = assign[name] ** k
            term = powers[key] if term is None else term * powers[key]
        if term is None:
            result = result + TruncatedSeries.const(vars, order, c)
        else:
            result = result + term.scale(c)
    return result


def eval_ratfun_at_series(rf, assign):
    """rf(series...); ZeroDivisionError if the denominator is not a unit."""
    num = eval_poly_at_series(rf.num, assign)
    den = eval_poly_at_series(rf.den, assign)
    return num * den.inverse()


def series_mod_p(s, p):
    """Coefficientwise reduction to F_p (BadPrime if not p-integral)."""
    coeffs = {}
    for e, c in s.coeffs.items():
        r = reduce_rat_mod_p(c, p)
        if r:
            coeffs[e] = r
    return TruncatedSeries(s.vars, s.order, coeffs)


def series_to_poly(s):
    return Poly(s.vars, dict(s.coeffs))


def poly_arith_matches_series(p, q, order):
    """Convenience for tests: (p*q) as a poly vs series multiplication."""
    sp = TruncatedSeries.from_poly(p, order)
    sq = TruncatedSeries.from_poly(q, order)
    truncated = {e: c for e, c in (p * q).terms.items() if sum(e) < order}
    return (sp * sq).coeffs == truncated


def ratfun_one(vars):
    return RationalFunction.const(vars, Fraction(1))
