"""Formal solutions of the Schlesinger isomonodromy system.

For a Fuchsian connection d + sum A_i dz/(z - a_i) with sum A_i = 0, the
residues of an isomonodromic family obey

    dA_i/da_j = [A_i, A_j] / (a_i - a_j)   (i != j),
    sum_i dA_i/da_j = 0                    (for every j),

viewed as PDE in the pole positions. We expand in the deformation
variables e_j = a_j - a_j0 as multivariate truncated series: the
homogeneous degree-(d+1) part of each A_i is recovered from the
degree-d part of the right-hand side by Euler integration
X^(d+1) = 1/(d+1) sum_j e_j (d_j X)^(d), and 1/(a_i - a_j) is the
geometric expansion of 1/(c + e_i - e_j) about c = a_i0 - a_j0.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import BadParams, InvalidInput, PoleCollision
from .linalg import (
    charpoly_coeffs,
    commutator,
    eigenvalues_2x2,
    mat,
    mat_add,
    mat_is_zero,
    mat_map,
    mat_neg,
    mat_scale,
    mat_sub,
    trace,
)
from .poly import Poly, RationalFunction
from .series import TruncatedSeries


@dataclass(frozen=True)
class SchlesingerState:
    poles: tuple  # distinct rationals a_1 .. a_n
    residues: tuple  # n matrices, r x r, Fraction entries

    def __post_init__(self):
        poles = tuple(Fraction(x) for x in self.poles)
        object.__setattr__(self, "poles", poles)
        object.__setattr__(self, "residues", tuple(mat(m) for m in self.residues))
        if len(set(poles)) != len(poles):
            raise PoleCollision(f"poles must be pairwise distinct: {poles}")
        if len(self.residues) != len(poles):
            raise BadParams("one residue matrix per pole")
        r = len(self.residues[0])
        for m in self.residues:
            if len(m) != r or any(len(row) != r for row in m):
                raise BadParams("residue matrices must be square of equal rank")
        total = self.residues[0]
        for m in self.residues[1:]:
            total = mat_add(total, m)
        if not mat_is_zero(total):
            raise BadParams("residues must sum to zero")

    @property
    def n(self):
        return len(self.poles)

    @property
    def rank(self):
        return len(self.residues[0])


@dataclass(frozen=True)
class SchlesingerSeries:
    state: SchlesingerState
    order: int
    entries: tuple  # n matrices of TruncatedSeries in (e1 .. en)

    @property
    def vars(self):
        return self.entries[0][0][0].vars


def _eps_vars(n):
    return tuple(f"e{j+1}" for j in range(n))


def _geom_inverse(c, i, j, vars, order):
    """Series of 1/(c + e_i - e_j) to the given order."""
    u = TruncatedSeries.variable(vars, order, vars[i]) - TruncatedSeries.variable(
        vars, order, vars[j]
    )
    inv_c = Fraction(1) / c
    total = TruncatedSeries.const(vars, order, inv_c)
    power = TruncatedSeries.const(vars, order, inv_c)
    for _ in range(1, order):
        power = power * u.scale(-inv_c)
        total = total + power
    return total


def _rhs(entries, geom, n):
    """All right-hand sides H[i][j] = dA_i/de_j from the current entries."""
    rhs = [[None] * n for _ in range(n)]
    for j in range(n):
        diag = None
        for i in range(n):
            if i == j:
                continue
            h = mat_map(
                commutator(entries[i], entries[j]),
                lambda s, g=geom[(i, j)]: s * g,
            )
            rhs[i][j] = h
            diag = h if diag is None else mat_add(diag, h)
        rhs[j][j] = mat_neg(diag)
    return rhs


def schlesinger_expand(state, order):
    """The unique formal isomonodromic residue family through the state."""
    n, r = state.n, state.rank
    vars = _eps_vars(n)
    geom = {}
    for i in range(n):
        for j in range(n):
            if i != j:
                geom[(i, j)] = _geom_inverse(
                    state.poles[i] - state.poles[j], i, j, vars, order
                )
    entries = [
        mat_map(state.residues[i], lambda c: TruncatedSeries.const(vars, order, c))
        for i in range(n)
    ]
    for d in range(order - 1):
        rhs = _rhs(entries, geom, n)
        new_entries = []
        for i in range(n):
            inc = None
            for j in range(n):
                part = mat_map(
                    rhs[i][j],
                    lambda s, jj=j: _homog_shift(s, d, jj, vars, order),
                )
                inc = part if inc is None else mat_add(inc, part)
            inc = mat_scale(inc, Fraction(1, d + 1))
            new_entries.append(mat_add(entries[i], inc))
        entries = new_entries
    return SchlesingerSeries(state=state, order=order, entries=tuple(entries))


def _homog_shift(s, d, j, vars, order):
    """e_j times the degree-d homogeneous part of s."""
    part = s.homogeneous_part(d)
    e = [0] * len(vars)
    e[j] = 1
    shifted = {}
    for exp, c in part.items():
        ne = tuple(a + b for a, b in zip(exp, e))
        shifted[ne] = c
    return TruncatedSeries(vars, order, shifted)


@dataclass(frozen=True)
class FlatnessReport:
    clean_order: int  # residuals vanish for all total degrees < clean_order
    certified_order: int  # the order to which residuals are even known
    first_failure: tuple | None  # (i, j, degree) of the first nonzero residual

    @property
    def ok(self):
        return self.clean_order == self.certified_order


def verify_flatness(series):
    """Recompute the PDE residuals d_j A_i - H_ij from the series itself.

    The derivative costs one order, so residuals are known to order-1;
    a series produced by schlesinger_expand is clean through all of it.
    """
    state, order = series.state, series.order
    n = state.n
    vars = series.vars
    geom = {}
    for i in range(n):
        for j in range(n):
            if i != j:
                geom[(i, j)] = _geom_inverse(
                    state.poles[i] - state.poles[j], i, j, vars, order
                )
    rhs = _rhs(list(series.entries), geom, n)
    certified = order - 1
    worst = certified
    first = None
    for i in range(n):
        for j in range(n):
            deriv = mat_map(series.entries[i], lambda s, jj=j: s.deriv(vars[jj]))
            resid = mat_sub(deriv, mat_map(rhs[i][j], lambda s: s.truncate(certified)))
            for row in resid:
                for entry in row:
                    if entry.is_zero():
                        continue
                    bad = entry.valuation()
                    if bad is not None and bad < worst:
                        worst = bad
                        first = (i, j, bad)
    return FlatnessReport(clean_order=worst, certified_order=certified, first_failure=first)


@dataclass(frozen=True)
class InvariantReport:
    sum_zero: bool
    charpoly_constant: bool
    failures: tuple  # human-readable strings

    @property
    def ok(self):
        return self.sum_zero and self.charpoly_constant


def invariants_check(series):
    """Conserved quantities of the flow: sum_i A_i(e) = 0 identically and
    every characteristic-polynomial coefficient of each A_i(e) constant."""
    n = series.state.n
    failures = []
    total = series.entries[0]
    for m in series.entries[1:]:
        total = mat_add(total, m)
    sum_zero = all(entry.is_zero() for row in total for entry in row)
    if not sum_zero:
        deg = min(
            d
            for row in total
            for entry in row
            if not entry.is_zero()
            for d in [entry.valuation()]
        )
        failures.append(f"sum of residues nonzero starting at degree {deg}")

    vars = series.vars
    one = TruncatedSeries.const(vars, series.order, Fraction(1))
    zero = TruncatedSeries.zero(vars, series.order)
    char_ok = True
    for i, m in enumerate(series.entries):
        for k, ck in enumerate(charpoly_coeffs(m, one, zero), start=1):
            nonconst = {e: c for e, c in ck.coeffs.items() if sum(e) > 0}
            if nonconst:
                char_ok = False
                deg = min(sum(e) for e in nonconst)
                failures.append(
                    f"char-poly coefficient {k} of A_{i+1} varies at degree {deg}"
                )
    return InvariantReport(
        sum_zero=sum_zero, charpoly_constant=char_ok, failures=tuple(failures)
    )


# -- building Fuchsian systems from scalar operators ----------------------


def scalar_to_system(c0, c1, c2, basis_factor):
    """First-order system for c2 f'' + c1 f' + c0 f = 0 in the basis
    (f, b(z) f'), where b = basis_factor.

    Returns the 2x2 matrix A(z) with u' = A u.
    """
    vars = c2.vars
    b = RationalFunction.from_poly(basis_factor)
    rc0 = RationalFunction.from_poly(c0)
    rc1 = RationalFunction.from_poly(c1)
    rc2 = RationalFunction.from_poly(c2)
    zero = RationalFunction.const(vars, Fraction(0))
    one = RationalFunction.const(vars, Fraction(1))
    a12 = one / b
    a21 = -(b * rc0 / rc2)
    a22 = b.deriv(vars[0]) / b - rc1 / rc2
    return mat([[zero, a12], [a21, a22]])


def residue_at(entry, pole):
    """Residue of a rational function at a simple pole (0 if regular)."""
    var = entry.vars[0]
    z = Poly.variable(entry.vars, var)
    factor = RationalFunction.from_poly(z - Poly.const(entry.vars, Fraction(pole)))
    cleared = (entry * factor).reduced()
    try:
        return cleared.eval_scalar({var: Fraction(pole)})
    except ZeroDivisionError as exc:
        raise InvalidInput(f"pole at {pole} is not simple") from exc


def matrix_residue(a_matrix, pole):
    return mat_map(a_matrix, lambda rf: residue_at(rf, pole))


def is_pure_fuchsian(a_matrix, poles, residues):
    """Does A(z) equal sum residues/(z - pole) exactly?"""
    vars = a_matrix[0][0].vars
    z = Poly.variable(vars, vars[0])
    rebuilt = None
    for a, res in zip(poles, residues):
        denom = RationalFunction.from_poly(z - Poly.const(vars, Fraction(a)))
        term = mat_map(res, lambda c, d=denom: RationalFunction.const(vars, c) / d)
        rebuilt = term if rebuilt is None else mat_add(rebuilt, term)
    return mat_is_zero(mat_sub(a_matrix, rebuilt))


def fold_infinity(poles, residues, new_pole):
    """Move the residue at infinity of a pure two-pole-plus-infinity
    Fuchsian system to a finite position, producing a zero-sum state.

    A Moebius substitution fixing the finite poles sends the connection
    sum A_i dz/(z-a_i) to the same residues at the images plus the
    infinity residue -sum A_i at the new pole.
    """
    total = residues[0]
    for m in residues[1:]:
        total = mat_add(total, m)
    return SchlesingerState(
        poles=tuple(poles) + (Fraction(new_pole),),
        residues=tuple(residues) + (mat_neg(total),),
    )


def hypergeometric_operator(a, b, c):
    """Coefficients (c0, c1, c2) of z(1-z) f'' + [c - (a+b+1) z] f' - ab f = 0."""
    vars = ("z",)
    z = Poly.variable(vars, "z")
    c2 = z - z * z
    c1 = Poly.const(vars, Fraction(c)) - z.scale(Fraction(a) + Fraction(b) + 1)
    c0 = Poly.const(vars, -Fraction(a) * Fraction(b))
    return c0, c1, c2


def legendre_pf_preset():
    """Rank-2, three-pole zero-sum state for the Legendre-family equation
    z(1-z) f'' + (1-2z) f' - (1/4) f = 0.

    The operator is converted to a first-order system in the basis
    (f, z f'), which is a pure Fuchsian system with finite poles 0 and 1;
    its infinity residue is folded to the pole 2. Everything is computed
    from the operator, nothing is hard-coded.
    """
    c0, c1, c2 = hypergeometric_operator(Fraction(1, 2), Fraction(1, 2), Fraction(1))
    z = Poly.variable(("z",), "z")
    system = scalar_to_system(c0, c1, c2, z)
    poles = (Fraction(0), Fraction(1))
    residues = tuple(matrix_residue(system, a) for a in poles)
    if not is_pure_fuchsian(system, poles, residues):
        raise ArithmeticError("expected a pure residue system in the (f, z f') basis")
    return fold_infinity(poles, residues, Fraction(2))


def indicial_exponents_2nd_order(c0, c1, c2, pole):
    """Local exponents of c2 f'' + c1 f' + c0 f = 0 at a regular singular
    finite point: roots of r(r-1) + p0 r + q0 with p0 = Res (c1/c2) and
    q0 = lim (z-a)^2 c0/c2. Rational roots only (None when irrational)."""
    vars = c2.vars
    var = vars[0]
    z = Poly.variable(vars, var)
    shift = RationalFunction.from_poly(z - Poly.const(vars, Fraction(pole)))
    p = RationalFunction.from_poly(c1) / RationalFunction.from_poly(c2)
    q = RationalFunction.from_poly(c0) / RationalFunction.from_poly(c2)
    p0 = (p * shift).reduced().eval_scalar({var: Fraction(pole)})
    q0 = (q * shift * shift).reduced().eval_scalar({var: Fraction(pole)})
    # r^2 + (p0 - 1) r + q0 = 0
    tr = Fraction(1) - p0
    det = q0
    disc = tr * tr - 4 * det
    from .linalg import _fraction_sqrt

    root = _fraction_sqrt(disc)
    if root is None:
        return None
    return tuple(sorted(((tr - root) / 2, (tr + root) / 2)))


@dataclass(frozen=True)
class PainleveViReport:
    is_painleve_vi: bool
    thetas: tuple  # per pole: dict with exact theta when rational
    constant_solution: bool

    def to_json_dict(self):
        return {
            "is_painleve_vi": self.is_painleve_vi,
            "thetas": list(self.thetas),
            "constant_solution": self.constant_solution,
        }


def painleve_vi_check(state):
    """Tag a rank-2, four-pole, trace-zero state as a Painleve VI instance
    and record the local eigenvalue parameters theta_i (eigenvalues of
    A_i are +-theta_i/2, so theta_i^2 = -4 det A_i)."""
    if state.rank != 2:
        raise InvalidInput(f"rank must be 2, got {state.rank}")
    if state.n != 4:
        raise InvalidInput(f"need 4 poles, got {state.n}")
    for i, m in enumerate(state.residues):
        if trace(m) != 0:
            raise InvalidInput(f"residue {i+1} is not trace-free")
    thetas = []
    for m in state.residues:
        det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
        theta_sq = -4 * det
        eig = eigenvalues_2x2(m)
        thetas.append(
            {
                "theta_squared": str(theta_sq),
                "theta": str(2 * max(eig)) if eig else None,
            }
        )
    commuting = all(
        mat_is_zero(commutator(a, b))
        for i, a in enumerate(state.residues)
        for b in state.residues[i + 1 :]
    )
    return PainleveViReport(
        is_painleve_vi=True, thetas=tuple(thetas), constant_solution=commuting
    )
