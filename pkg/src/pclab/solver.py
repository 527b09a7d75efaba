"""Exact Taylor expansion engines.

Conventions used throughout:

* Expansions at a point a != 0 substitute z -> a + z first, so every
  recurrence runs in the local coordinate centered at 0. The returned
  series is in that local coordinate.
* Initial data for order-n equations are the derivative values
  f(a), f'(a), ..., f^(n-1)(a); they are converted internally to Taylor
  coefficients t_i / i!.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BadParams,
    NotARoot,
    NotFlat,
    OrderTooSmall,
    PoleOnLeaf,
    SingularBranch,
    SingularParameter,
    SingularPoint,
)
from .linalg import commutator, mat_map, mat_sub, mat_vec
from .poly import Poly, RationalFunction
from .series import TruncatedSeries, eval_poly_at_series


@dataclass(frozen=True)
class ScalarLinearODE:
    """sum_i c_i(z) * f^(i)(z) = 0 with polynomial coefficients c_0..c_n."""

    coeffs: tuple  # tuple of Poly in the single variable z

    def __post_init__(self):
        if not self.coeffs or self.coeffs[-1].is_zero():
            raise BadParams("leading coefficient must be nonzero")

    @property
    def order(self):
        return len(self.coeffs) - 1

    @property
    def var(self):
        return self.coeffs[-1].vars[0]


@dataclass(frozen=True)
class FoliationField:
    """The derivation v = d/dz + sum y_{i+1} d/dy_i + g d/dy_{n-1}
    encoding f^(n) = g(z, f, f', ..., f^(n-1)) as a rank-1 foliation."""

    n: int
    g: RationalFunction  # in variables (z, y0, ..., y_{n-1})

    def __post_init__(self):
        expected = ("z",) + tuple(f"y{i}" for i in range(self.n))
        if self.g.vars != expected:
            raise BadParams(f"g must use variables {expected}, got {self.g.vars}")
        if self.n < 1:
            raise BadParams("order must be >= 1")

    def apply(self, w):
        """v(w) for a rational function w in the same variables."""
        out = w.deriv("z")
        for i in range(self.n - 1):
            yi1 = RationalFunction.variable(w.vars, f"y{i + 1}")
            out = out + yi1 * w.deriv(f"y{i}")
        return out + self.g * w.deriv(f"y{self.n - 1}")


@dataclass(frozen=True)
class InitialCondition:
    point: Fraction
    values: tuple  # f(a), f'(a), ..., f^(n-1)(a)


def expand_scalar_linear(ode, point, inits, order):
    """Unique series solution at an ordinary point, exact coefficients.

    Returns the Taylor series in the local coordinate u = z - point to
    the requested truncation order.
    """
    n = ode.order
    if order <= n:
        raise OrderTooSmall(f"order {order} must exceed the ODE order {n}")
    if len(inits) != n:
        raise BadParams(f"need {n} initial values, got {len(inits)}")
    point = Fraction(point)
    var = ode.var
    shifted = [c.shift(var, point) for c in ode.coeffs]
    dense = [c.to_dense() for c in shifted]
    lead_const = shifted[n].const_value()
    if lead_const == 0:
        raise SingularPoint(f"c_{n}({point}) = 0")

    a = [Fraction(inits[i]) / math.factorial(i) for i in range(n)]
    for m in range(order - n):
        # coefficient of u^m in sum_i c_i(u) f^(i)(u); the only unknown
        # is a_{m+n}, entering through i = n, j = 0.
        acc = Fraction(0)
        for i, ci in enumerate(dense):
            for j, cij in enumerate(ci):
                if cij == 0 or j > m:
                    continue
                k = m - j + i
                if i == n and j == 0:
                    continue
                if k < len(a):
                    acc += cij * a[k] * _falling(k, i)
        unknown_factor = lead_const * _falling(m + n, n)
        a.append(-acc / unknown_factor)
    return TruncatedSeries.from_coeff_list(var, a, order)


def _falling(k, i):
    """k! / (k-i)! as an exact integer."""
    out = 1
    for t in range(k, k - i, -1):
        out *= t
    return out


def expand_linear_system(a_matrix, point, init_vector, order):
    """Taylor solution of f' = A(z) f at an ordinary point, as a vector of
    series in the local coordinate u = z - point."""
    var = a_matrix[0][0].vars[0]
    point = Fraction(point)
    shifted = mat_map(a_matrix, lambda rf: rf.subs({var: Poly.variable(rf.vars, var) + Poly.const(rf.vars, point)}))
    # clear denominators: d(z) f' = N(z) f
    den = Poly.const((var,), Fraction(1))
    for row in shifted:
        for entry in row:
            den = den * entry.den
    num = mat_map(shifted, lambda rf: rf.num * _poly_quotient(den, rf.den))
    d_dense = den.to_dense()
    if d_dense[0] == 0:
        raise SingularPoint(f"system is singular at {point}")
    n_dense = mat_map(num, lambda p: p.to_dense())
    r = len(a_matrix)
    coeffs = [tuple(Fraction(x) for x in init_vector)]
    for k in range(order - 1):
        # coefficient of u^k in d f' - N f = 0 gives f_{k+1}
        acc = [Fraction(0)] * r
        for j in range(1, min(k, len(d_dense) - 1) + 1):
            cj = d_dense[j]
            if cj == 0:
                continue
            fk = coeffs[k - j + 1]
            for i in range(r):
                acc[i] += cj * (k - j + 1) * fk[i]
        for j in range(min(k, _max_deg(n_dense)) + 1):
            fk = coeffs[k - j]
            for i in range(r):
                for t in range(r):
                    nij = n_dense[i][t]
                    if j < len(nij) and nij[j] != 0:
                        acc[i] -= nij[j] * fk[t]
        coeffs.append(tuple(-x / (d_dense[0] * (k + 1)) for x in acc))
    return tuple(
        TruncatedSeries.from_coeff_list(var, [c[i] for c in coeffs], order)
        for i in range(r)
    )


def _poly_quotient(product, factor):
    from .poly import poly_divexact

    return poly_divexact(product, factor)


def _max_deg(dense_matrix):
    return max(len(p) - 1 for row in dense_matrix for p in row)


def expand_foliation_leaf(field, init, order):
    """Leaf of the foliation through the initial point, by Picard iteration.

    The y_0 component solves f^(n) = g(z, f, ..., f^(n-1)) with
    f^(i)(a) = t_i; the full jet (y_0, ..., y_{n-1}) is returned by
    leaf_jet. Agrees with expand_scalar_linear on linear right sides.
    """
    return leaf_jet(field, init, order)[0]


def leaf_jet(field, init, order):
    """All components (f, f', ..., f^(n-1)) of the leaf, as series in the
    local coordinate u = z - a."""
    n = field.n
    if len(init.values) != n:
        raise BadParams(f"need {n} initial values, got {len(init.values)}")
    a = Fraction(init.point)
    gvars = field.g.vars
    shift_map = {"z": Poly.variable(gvars, "z") + Poly.const(gvars, a)}
    g = field.g.subs(shift_map)
    point_values = {"z": Fraction(0)}
    for i in range(n):
        point_values[f"y{i}"] = Fraction(init.values[i])
    if g.den.eval_scalar(point_values) == 0:
        raise PoleOnLeaf(f"denominator of g vanishes at {init}")

    svars = ("z",)
    z_series = TruncatedSeries.variable(svars, order, "z")
    comps = [TruncatedSeries.const(svars, order, Fraction(init.values[i])) for i in range(n)]
    for _ in range(max(order - 1, 0)):
        assign = {"z": z_series}
        for i in range(n):
            assign[f"y{i}"] = comps[i]
        num = eval_poly_at_series(g.num, assign)
        den = eval_poly_at_series(g.den, assign)
        try:
            rhs = num * den.inverse()
        except ZeroDivisionError as exc:
            raise PoleOnLeaf(str(exc)) from exc
        new = []
        for i in range(n - 1):
            new.append((TruncatedSeries.const(svars, order, Fraction(init.values[i])) + comps[i + 1].integrate("z")).truncate(order))
        new.append((TruncatedSeries.const(svars, order, Fraction(init.values[n - 1])) + rhs.integrate("z")).truncate(order))
        comps = new
    return tuple(comps)


def eisenstein_expand(poly_zw, w0, order):
    """Series root w(z) of P(z, w) = 0 with w(0) = w0, by Newton lifting.

    Requires a simple root: P(0, w0) = 0 and dP/dw (0, w0) != 0. The
    doubling iteration is verified by substituting back at the end.
    """
    w0 = Fraction(w0)
    if set(poly_zw.vars) != {"z", "w"}:
        raise BadParams(f"polynomial must be in variables z, w, got {poly_zw.vars}")
    at0 = {"z": Fraction(0), "w": w0}
    if poly_zw.eval_scalar(at0) != 0:
        raise NotARoot(f"P(0, {w0}) != 0")
    pw = poly_zw.deriv("w")
    if pw.eval_scalar(at0) == 0:
        raise SingularBranch(f"dP/dw vanishes at (0, {w0})")

    svars = ("z",)
    w = TruncatedSeries.const(svars, 1, w0)
    prec = 1
    while prec < order:
        prec = min(2 * prec, order)
        w = TruncatedSeries(svars, prec, w.coeffs)
        assign = {"z": TruncatedSeries.variable(svars, prec, "z"), "w": w}
        val = eval_poly_at_series(poly_zw, assign)
        dval = eval_poly_at_series(pw, assign)
        w = w - val * dval.inverse()
    assign = {"z": TruncatedSeries.variable(svars, order, "z"), "w": w}
    residual = eval_poly_at_series(poly_zw, assign)
    if not residual.is_zero():
        raise ArithmeticError("Newton lifting failed verification")
    return w


def hyp_series(a_params, b_params, order):
    """Generalized hypergeometric series with exact coefficients.

    c_n = prod (a_j)_n / ((1)_n prod (b_i)_n); each step is checked
    against the contiguous recurrence
    c_{n+1} (n+1) prod(n + b_i) = c_n prod(n + a_j).
    """
    a_params = [Fraction(x) for x in a_params]
    b_params = [Fraction(x) for x in b_params]
    for b in b_params:
        if b.denominator == 1 and b <= 0:
            raise BadParams(f"lower parameter {b} is a non-positive integer")

    def pochhammer(x, n):
        out = Fraction(1)
        for t in range(n):
            out *= x + t
        return out

    coeffs = []
    for n in range(order):
        num = Fraction(1)
        for aj in a_params:
            num *= pochhammer(aj, n)
        den = Fraction(math.factorial(n))
        for bi in b_params:
            den *= pochhammer(bi, n)
        coeffs.append(num / den)
    for n in range(order - 1):
        lhs = coeffs[n + 1] * (n + 1)
        rhs = coeffs[n]
        for bi in b_params:
            lhs *= bi + n
        for aj in a_params:
            rhs *= aj + n
        if lhs != rhs:
            raise ArithmeticError("hypergeometric recurrence check failed")
    return TruncatedSeries.from_coeff_list("z", coeffs, order)


# recurrence for Taylor coefficients b_k of solutions of the elliptic-family
# equation t(t^2-11t-1) f'' + (3t^2-22t-1) f' + (t-3) f = 0 expanded at t=a:
#   a(a^2-11a-1)(n+2)(n+1) b_{n+2} + (3a^2-22a-1)(n+1)^2 b_{n+1}
#     + [(3a-11)(n+1)n + a-3] b_n + n^2 b_{n-1} = 0,  with b_{-1} := 0.


def apery_sequence(a, b0, b1, order):
    a = Fraction(a)
    lead = a * (a * a - 11 * a - 1)
    if lead == 0:
        raise SingularParameter(
            "a(a^2-11a-1) = 0; the expansion point is singular (use singular_apery)"
        )
    b = [Fraction(b0), Fraction(b1)]
    prev = Fraction(0)  # b_{-1}
    for n in range(order - 2):
        bn1, bn = b[n + 1], b[n]
        rhs = (
            (3 * a * a - 22 * a - 1) * (n + 1) ** 2 * bn1
            + ((3 * a - 11) * (n + 1) * n + a - 3) * bn
            + n * n * prev
        )
        b.append(-rhs / (lead * (n + 2) * (n + 1)))
        prev = bn
    return b[:order]


def singular_apery(order):
    """The integral solution at the singular point 0 of the same equation.

    u_n = (-1)^n sum_k C(n,k)^2 C(n+k,k); the binomial closed form and the
    degenerate recurrence (n+1)^2 u_{n+1} = -(11n^2+11n+3) u_n + n^2 u_{n-1}
    are both computed and asserted equal.
    """
    if order < 1:
        raise BadParams("order must be >= 1")
    closed = []
    for n in range(order):
        s = sum(math.comb(n, k) ** 2 * math.comb(n + k, k) for k in range(n + 1))
        closed.append(Fraction(-s if n % 2 else s))
    rec = [Fraction(1)]
    for n in range(order - 1):
        prev = rec[n - 1] if n >= 1 else Fraction(0)
        rec.append((-(11 * n * n + 11 * n + 3) * rec[n] + n * n * prev) / (n + 1) ** 2)
    if rec != closed:
        raise ArithmeticError("binomial form disagrees with the recurrence")
    return closed


def flat_section_extend(ops, u, order):
    """Flat extension of a vector u under commuting operators D_j = d/dt_j - B_j.

    ops: matrices B_j over TruncatedSeries in variables (t_1, ..., t_n).
    Returns s = sum_I (-1)^|I| t^I / I! D^I(u), which satisfies
    D_j(s) = 0 through order-1 for every j; the pairwise commutation of
    the D_j is checked first (NotFlat otherwise).
    """
    nvars = len(ops)
    sample = ops[0][0][0]
    svars = sample.vars
    if len(svars) != nvars:
        raise BadParams("need one operator per variable")

    for i in range(nvars):
        for j in range(i + 1, nvars):
            lhs = mat_sub(
                mat_map(ops[i], lambda s: s.deriv(svars[j])),
                mat_map(ops[j], lambda s: s.deriv(svars[i])),
            )
            rhs = commutator(ops[j], ops[i])
            diff = mat_sub(lhs, rhs)
            for row in diff:
                for entry in row:
                    if not entry.truncate(order - 1).is_zero():
                        raise NotFlat(f"operators {i} and {j} do not commute")

    def apply_op(j, vec):
        dv = tuple(s.deriv(svars[j]) for s in vec)
        bv = mat_vec(ops[j], vec)
        return tuple(a - b for a, b in zip(dv, bv))

    r = len(u)
    zero_exp = (0,) * nvars
    total = tuple(s.truncate(order) for s in u)
    frontier = {zero_exp: tuple(s.truncate(order) for s in u)}
    for depth in range(1, order):
        new_frontier = {}
        for idx, vec in frontier.items():
            for j in range(nvars):
                nidx = idx[:j] + (idx[j] + 1,) + idx[j + 1 :]
                if nidx in new_frontier:
                    continue
                new_frontier[nidx] = apply_op(j, vec)
        sign = -1 if depth % 2 else 1
        for idx, vec in new_frontier.items():
            fact = 1
            for k in idx:
                fact *= math.factorial(k)
            scalar = Fraction(sign, fact)
            total = tuple(
                t + s.mul_monomial(idx, scalar).truncate(order)
                for t, s in zip(total, vec)
            )
        frontier = new_frontier

    for j in range(nvars):
        resid = apply_op(j, total)
        for entry in resid:
            if not entry.truncate(order - 1).is_zero():
                raise ArithmeticError("flat extension failed its residual check")
    return total
