"""Exact multivariate polynomials and rational functions.

Terms are stored sparsely as {exponent tuple: coefficient}. Coefficients
are Fraction or FpElem and never mix within a value. Univariate rational
functions are kept fully reduced with monic denominator so equality is a
plain comparison; multivariate ones are only scaled on construction and
cancelled on demand via reduced(), since multivariate gcds are the
expensive part.
"""

from fractions import Fraction

from .errors import BadPrime, VariableMismatch
from .field import FpElem, reduce_rat_mod_p
from .primes import check_prime


class Poly:
    __slots__ = ("vars", "terms")

    def __init__(self, vars, terms):
        self.vars = tuple(vars)
        self.terms = {e: c for e, c in terms.items() if c != 0}

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, vars):
        return cls(vars, {})

    @classmethod
    def const(cls, vars, c):
        vars = tuple(vars)
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def variable(cls, vars, name, one=Fraction(1)):
        vars = tuple(vars)
        i = vars.index(name)
        e = [0] * len(vars)
        e[i] = 1
        return cls(vars, {tuple(e): one})

    @classmethod
    def from_dense(cls, vars, coeffs):
        """Univariate, coeffs[k] is the coefficient of x^k."""
        vars = tuple(vars)
        return cls(vars, {(k,): c for k, c in enumerate(coeffs)})

    # -- predicates ----------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return all(sum(e) == 0 for e in self.terms)

    def const_value(self):
        zero_exp = (0,) * len(self.vars)
        return self.terms.get(zero_exp, 0)

    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, name):
        i = self.vars.index(name)
        return max((e[i] for e in self.terms), default=-1)

    # -- arithmetic ----------------------------------------------------

    def _check(self, other):
        if self.vars != other.vars:
            raise VariableMismatch(f"{self.vars} vs {other.vars}")

    def __add__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, 0) + c
            if s == 0:
                terms.pop(e, None)
            else:
                terms[e] = s
        return Poly(self.vars, terms)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Poly(self.vars, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (Fraction, int, FpElem)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e, 0) + c1 * c2
                if s == 0:
                    terms.pop(e, None)
                else:
                    terms[e] = s
        return Poly(self.vars, terms)

    def __rmul__(self, other):
        if isinstance(other, (Fraction, int, FpElem)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c):
        if c == 0:
            return Poly.zero(self.vars)
        return Poly(self.vars, {e: c * v for e, v in self.terms.items()})

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        if result is None:
            one = Fraction(1) if not self.terms else _one_like(next(iter(self.terms.values())))
            return Poly.const(self.vars, one)
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Fraction, FpElem)):
            return self.is_constant() and self.const_value() == other
        return NotImplemented

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    # -- calculus and substitution --------------------------------------

    def deriv(self, name):
        i = self.vars.index(name)
        terms = {}
        for e, c in self.terms.items():
            if e[i] > 0:
                ne = e[:i] + (e[i] - 1,) + e[i + 1 :]
                s = terms.get(ne, 0) + c * e[i]
                if s == 0:
                    terms.pop(ne, None)
                else:
                    terms[ne] = s
        return Poly(self.vars, terms)

    def subs(self, mapping):
        """Substitute polynomials for variables. Unmapped variables stay
        themselves; all polynomials in the mapping must share one target
        variable tuple."""
        target = None
        for v in mapping.values():
            target = v.vars
            break
        if target is None:
            target = self.vars
        full = {}
        for name in self.vars:
            full[name] = mapping.get(name) or Poly.variable(target, name)
        result = Poly.zero(target)
        for e, c in self.terms.items():
            term = Poly.const(target, c)
            for name, k in zip(self.vars, e):
                if k:
                    term = term * full[name] ** k
            result = result + term
        return result

    def eval_scalar(self, values):
        """Evaluate at scalar values (dict name -> Fraction/FpElem)."""
        total = 0
        for e, c in self.terms.items():
            v = c
            for name, k in zip(self.vars, e):
                if k:
                    v = v * values[name] ** k
            total = total + v
        return total

    def shift(self, name, a):
        """Substitute name -> name + a (Taylor re-centering)."""
        x = Poly.variable(self.vars, name)
        return self.subs({name: x + Poly.const(self.vars, a)})

    # -- structure helpers ----------------------------------------------

    def lead_exp(self):
        """Lex-largest exponent tuple (canonical leading term)."""
        return max(self.terms)

    def lead_coeff(self):
        return self.terms[self.lead_exp()]

    def monic(self):
        if not self.terms:
            return self
        return self.scale(1 / self.lead_coeff())

    def to_dense(self):
        if len(self.vars) != 1:
            raise ValueError("dense form is univariate-only")
        d = self.degree()
        out = [0] * (d + 1)
        for (k,), c in self.terms.items():
            out[k] = c
        return out

    def term_count(self):
        return len(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                f"{v}^{k}" if k > 1 else v for v, k in zip(self.vars, e) if k
            )
            if mono:
                parts.append(f"({c})*{mono}" if c != 1 else mono)
            else:
                parts.append(f"({c})")
        return " + ".join(parts)


def _one_like(c):
    if isinstance(c, FpElem):
        return FpElem(1, c.p)
    return Fraction(1)


# -- gcd machinery ------------------------------------------------------
#
# Polynomials are converted to nested dense lists (one level per variable,
# scalars at the bottom) and gcds run by primitive pseudo-remainder
# sequences in the outermost variable. Fine for the modest degrees this
# package produces; the budget guard in the foliation code keeps inputs
# desk-scale.


def _to_rep(poly):
    return _terms_to_rep(poly.terms, len(poly.vars))


def _terms_to_rep(terms, nvars):
    if nvars == 0:
        if not terms:
            return 0
        return terms[()]
    buckets = {}
    top = -1
    for e, c in terms.items():
        buckets.setdefault(e[0], {})[e[1:]] = c
        top = max(top, e[0])
    return _trim([_terms_to_rep(buckets.get(k, {}), nvars - 1) for k in range(top + 1)])


def _rep_to_terms(rep, nvars, prefix, out):
    if nvars == 0:
        if not _rep_is_zero(rep, 0):
            out[prefix] = rep
        return
    for k, sub in enumerate(rep):
        _rep_to_terms(sub, nvars - 1, prefix + (k,), out)


def _from_rep(rep, vars):
    out = {}
    _rep_to_terms(rep, len(vars), (), out)
    return Poly(vars, out)


def _rep_is_zero(r, k):
    if k == 0:
        return r == 0
    return len(r) == 0


def _trim(lst):
    while lst and _is_zero_any(lst[-1]):
        lst.pop()
    return lst


def _is_zero_any(r):
    if isinstance(r, list):
        return len(r) == 0
    return r == 0


def _rep_add(a, b, k):
    if k == 0:
        return a + b
    out = []
    for i in range(max(len(a), len(b))):
        x = a[i] if i < len(a) else _rep_zero(k - 1)
        y = b[i] if i < len(b) else _rep_zero(k - 1)
        out.append(_rep_add(x, y, k - 1))
    return _trim(out)


def _rep_zero(k):
    return 0 if k == 0 else []


def _rep_neg(a, k):
    if k == 0:
        return -a
    return [_rep_neg(x, k - 1) for x in a]


def _rep_mul(a, b, k):
    if k == 0:
        return a * b
    if not a or not b:
        return []
    out = [_rep_zero(k - 1) for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        if _is_zero_any(x):
            continue
        for j, y in enumerate(b):
            if _is_zero_any(y):
                continue
            out[i + j] = _rep_add(out[i + j], _rep_mul(x, y, k - 1), k - 1)
    return _trim(out)


def _rep_divexact(a, b, k):
    """a / b when the division is exact; raises ArithmeticError otherwise."""
    if k == 0:
        if b == 0:
            raise ArithmeticError("division by zero scalar")
        return a / b
    if not a:
        return []
    if not b:
        raise ArithmeticError("division by zero polynomial")
    rem = [x for x in a]
    q = [_rep_zero(k - 1) for _ in range(len(a) - len(b) + 1)]
    db = len(b) - 1
    while rem and len(rem) - 1 >= db:
        shift = len(rem) - 1 - db
        qc = _rep_divexact(rem[-1], b[-1], k - 1)
        q[shift] = qc
        for j, y in enumerate(b):
            rem[shift + j] = _rep_add(rem[shift + j], _rep_neg(_rep_mul(qc, y, k - 1), k - 1), k - 1)
        rem = _trim(rem)
    if rem:
        raise ArithmeticError("inexact polynomial division")
    return _trim(q)


def _rep_prem(u, v, k):
    """Pseudo-remainder of u by v in the outermost variable (operational
    form: scale by the leading coefficient of v only as needed)."""
    dv = len(v) - 1
    lead_v = v[-1]
    r = list(u)
    while r and len(r) - 1 >= dv:
        shift = len(r) - 1 - dv
        lead_r = r[-1]
        r = [_rep_mul(x, lead_v, k - 1) for x in r]
        for j, y in enumerate(v):
            r[shift + j] = _rep_add(
                r[shift + j], _rep_neg(_rep_mul(y, lead_r, k - 1), k - 1), k - 1
            )
        r = _trim(r)
    return r


def _rep_content(a, k):
    """gcd of the coefficients (which live one level down)."""
    c = _rep_zero(k - 1)
    for x in a:
        c = _rep_gcd(c, x, k - 1)
    return c


def _rep_gcd(a, b, k):
    if k == 0:
        if a == 0:
            return b
        if b == 0:
            return a
        return _one_like(a)
    if not a:
        return b
    if not b:
        return a
    ca = _rep_content(a, k)
    cb = _rep_content(b, k)
    u = [_rep_divexact(x, ca, k - 1) for x in a]
    v = [_rep_divexact(x, cb, k - 1) for x in b]
    cg = _rep_gcd(ca, cb, k - 1)
    if len(u) < len(v):
        u, v = v, u
    while True:
        r = _rep_prem(u, v, k)
        if not r:
            g = v
            break
        if len(r) == 1:
            g = [_one_like_rep(r[0], k - 1)]
            break
        cr = _rep_content(r, k)
        u, v = v, [_rep_divexact(x, cr, k - 1) for x in r]
    cgp = _rep_content(g, k)
    g = [_rep_divexact(x, cgp, k - 1) for x in g]
    return _trim([_rep_mul(x, cg, k - 1) for x in g])


def _one_like_rep(r, k):
    if k == 0:
        return _one_like(r)
    return [_one_like_rep(r[0], k - 1)]


def poly_gcd(f, g):
    """gcd normalized so the lex-leading coefficient is 1."""
    if f.vars != g.vars:
        raise VariableMismatch(f"{f.vars} vs {g.vars}")
    if f.is_zero():
        return g.monic()
    if g.is_zero():
        return f.monic()
    if len(f.vars) == 1:
        return _gcd_univar(f, g)
    rep = _rep_gcd(_to_rep(f), _to_rep(g), len(f.vars))
    return _from_rep(rep, f.vars).monic()


def _gcd_univar(f, g):
    a, b = f.to_dense(), g.to_dense()
    while b:
        a, b = b, _dense_mod(a, b)
    lead = a[-1]
    return Poly(f.vars, {(k,): c / lead for k, c in enumerate(a) if c != 0})


def _dense_mod(a, b):
    a = list(a)
    db = len(b) - 1
    inv_lead = 1 / b[-1]
    while len(a) - 1 >= db:
        c = a[-1] * inv_lead
        if c != 0:
            shift = len(a) - 1 - db
            for j, y in enumerate(b):
                a[shift + j] = a[shift + j] - c * y
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return a


def poly_divexact(f, g):
    if f.vars != g.vars:
        raise VariableMismatch(f"{f.vars} vs {g.vars}")
    if f.is_zero():
        return f
    rep = _rep_divexact(_to_rep(f), _to_rep(g), len(f.vars))
    return _from_rep(rep, f.vars)


# -- rational functions --------------------------------------------------


class RationalFunction:
    """num/den with den nonzero. Univariate values are reduced and carry a
    monic denominator; multivariate values are scaled (leading den
    coefficient 1) and cancelled lazily via reduced()."""

    __slots__ = ("num", "den")

    def __init__(self, num, den, reduce=None):
        if num.vars != den.vars:
            raise VariableMismatch(f"{num.vars} vs {den.vars}")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            den = Poly.const(num.vars, _one_like(den.lead_coeff()))
        elif den.is_constant():
            num = num.scale(1 / den.const_value())
            den = Poly.const(num.vars, _one_like(num.lead_coeff()))
        else:
            if reduce is None:
                reduce = len(num.vars) == 1
            if reduce:
                g = poly_gcd(num, den)
                if g.degree() > 0:
                    num = poly_divexact(num, g)
                    den = poly_divexact(den, g)
            lead = den.lead_coeff()
            if lead != 1:
                num = num.scale(1 / lead)
                den = den.scale(1 / lead)
        self.num = num
        self.den = den

    @classmethod
    def from_poly(cls, p):
        return cls(p, Poly.const(p.vars, _one_like_poly(p)))

    @classmethod
    def const(cls, vars, c):
        return cls.from_poly(Poly.const(vars, c))

    @classmethod
    def variable(cls, vars, name):
        return cls.from_poly(Poly.variable(vars, name))

    @property
    def vars(self):
        return self.num.vars

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return bool(self.num)

    def is_poly(self):
        return self.den.is_constant()

    def reduced(self):
        """Cancel num/den (multivariate gcd on demand)."""
        if self.num.is_zero() or self.den.is_constant():
            return self
        g = poly_gcd(self.num, self.den)
        if g.degree() <= 0:
            return self
        return RationalFunction(poly_divexact(self.num, g), poly_divexact(self.den, g), reduce=False)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return RationalFunction(-self.num, self.den, reduce=False)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, n):
        if n < 0:
            return RationalFunction(self.den, self.num) ** (-n)
        return RationalFunction(self.num**n, self.den**n)

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.vars != self.vars:
                raise VariableMismatch(f"{self.vars} vs {other.vars}")
            return other
        if isinstance(other, Poly):
            return RationalFunction.from_poly(other)
        if isinstance(other, FpElem):
            return RationalFunction.const(self.vars, other)
        if isinstance(other, (int, Fraction)):
            sample = self.den.lead_coeff()
            if isinstance(sample, FpElem):
                c = reduce_rat_mod_p(Fraction(other), sample.p)
            else:
                c = Fraction(other)
            return RationalFunction.const(self.vars, c)
        return NotImplemented

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        r = self.reduced()
        return hash((r.num, r.den))

    def deriv(self, name):
        n = self.num.deriv(name) * self.den - self.num * self.den.deriv(name)
        return RationalFunction(n, self.den * self.den)

    def subs(self, mapping):
        return RationalFunction(self.num.subs(mapping), self.den.subs(mapping))

    def eval_scalar(self, values):
        d = self.den.eval_scalar(values)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at the point")
        return self.num.eval_scalar(values) / d

    def term_count(self):
        return self.num.term_count() + self.den.term_count()

    def __repr__(self):
        if self.den.is_constant() and self.den.const_value() == 1:
            return repr(self.num)
        return f"({self.num!r})/({self.den!r})"


def _one_like_poly(p):
    if p.terms:
        return _one_like(next(iter(p.terms.values())))
    return Fraction(1)


def reduce_poly_mod_p(p, prime):
    """Coefficientwise reduction to F_prime; BadPrime on bad denominators."""
    check_prime(prime)
    terms = {}
    for e, c in p.terms.items():
        r = reduce_rat_mod_p(c, prime)
        if r:
            terms[e] = r
    return Poly(p.vars, terms)


def reduce_ratfun_mod_p(rf, prime):
    """Reduce a rational function over Q to one over F_prime.

    Requires every coefficient to be p-integral and the denominator to
    stay nonzero mod p; re-normalizes the result.
    """
    num = reduce_poly_mod_p(rf.num, prime)
    den = reduce_poly_mod_p(rf.den, prime)
    if den.is_zero():
        raise BadPrime(f"denominator reduces to 0 mod {prime}")
    return RationalFunction(num, den)
