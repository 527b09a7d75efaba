import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pclab.errors import (
    BadParams,
    NotARoot,
    NotFlat,
    OrderTooSmall,
    PoleOnLeaf,
    SingularBranch,
    SingularParameter,
    SingularPoint,
)
from pclab.parser import parse_poly, parse_ratfun
from pclab.poly import Poly, RationalFunction
from pclab.series import TruncatedSeries, eval_poly_at_series
from pclab.solver import (
    FoliationField,
    InitialCondition,
    ScalarLinearODE,
    apery_sequence,
    eisenstein_expand,
    expand_foliation_leaf,
    expand_linear_system,
    expand_scalar_linear,
    flat_section_extend,
    hyp_series,
    leaf_jet,
    singular_apery,
)

Z = ("z",)


def _ode(*coeff_texts):
    return ScalarLinearODE(tuple(parse_poly(t, Z) for t in coeff_texts))


def _residual_of_linear(ode, point, series):
    """Substitute the series back into the shifted equation."""
    shifted = [c.shift("z", Fraction(point)) for c in ode.coeffs]
    total = None
    current = series
    for i, c in enumerate(shifted):
        term = eval_poly_at_series(c, {"z": TruncatedSeries.variable(Z, current.order, "z")})
        piece = term.truncate(current.order) * current
        total = piece if total is None else total.truncate(piece.order) + piece
        current = current.deriv("z")
    return total


def test_expand_linear_fpp_zero():
    ode = _ode("0", "0", "1")
    s = expand_scalar_linear(ode, 0, [Fraction(1), Fraction(1)], 5)
    assert s.coeff_list() == [Fraction(1), Fraction(1), 0, 0, 0]


def test_expand_linear_exponential():
    ode = _ode("-1", "1")
    s = expand_scalar_linear(ode, 0, [Fraction(1)], 5)
    assert s.coeff_list() == [Fraction(1, math.factorial(n)) for n in range(5)]


def test_expand_linear_rejects_singular_point_and_tiny_order():
    ode = _ode("1", "z")
    with pytest.raises(SingularPoint):
        expand_scalar_linear(ode, 0, [Fraction(1)], 5)
    with pytest.raises(OrderTooSmall):
        expand_scalar_linear(_ode("-1", "1"), 0, [Fraction(1)], 1)


BEUKERS = ("t-3", "3*t^2-22*t-1", "t*(t^2-11*t-1)")


def test_beukers_expansion_matches_recurrence_path():
    ode = ScalarLinearODE(tuple(parse_poly(t, ("t",)) for t in BEUKERS))
    s = expand_scalar_linear(ode, 1, [Fraction(1), Fraction(0)], 12)
    assert s.coeff_list() == apery_sequence(1, 1, 0, 12)


def test_apery_first_values():
    b = apery_sequence(1, 1, 0, 3)
    assert b == [Fraction(1), Fraction(0), Fraction(-1, 11)]
    assert apery_sequence(1, 0, 0, 6) == [0] * 6
    with pytest.raises(SingularParameter):
        apery_sequence(0, 1, 0, 4)


def test_singular_apery_values_and_integrality():
    u = singular_apery(120)
    assert u[:4] == [1, -3, 19, -147]
    assert all(x.denominator == 1 for x in u)


def test_leaf_riccati_geometric():
    field = FoliationField(1, parse_ratfun("y0^2", ("z", "y0")))
    leaf = expand_foliation_leaf(field, InitialCondition(Fraction(0), (Fraction(1),)), 5)
    assert leaf.coeff_list() == [Fraction(1)] * 5


def test_leaf_constant_and_exponential():
    const = expand_foliation_leaf(
        FoliationField(1, parse_ratfun("0", ("z", "y0"))),
        InitialCondition(Fraction(0), (Fraction(5),)),
        3,
    )
    assert const.coeff_list() == [Fraction(5), 0, 0]
    exp = expand_foliation_leaf(
        FoliationField(1, parse_ratfun("y0", ("z", "y0"))),
        InitialCondition(Fraction(0), (Fraction(1),)),
        4,
    )
    assert exp.coeff_list() == [Fraction(1, math.factorial(n)) for n in range(4)]


def test_leaf_pole_detected():
    field = FoliationField(1, parse_ratfun("1/y0", ("z", "y0")))
    with pytest.raises(PoleOnLeaf):
        expand_foliation_leaf(field, InitialCondition(Fraction(0), (Fraction(0),)), 4)


def _encode_linear(ode):
    """Scalar linear ODE -> g = -(sum_{i<n} c_i y_i)/c_n for the foliation."""
    n = ode.order
    names = ("z",) + tuple(f"y{i}" for i in range(n))
    lift = {ode.var: Poly.variable(names, "z")}
    cs = [c.subs(lift) for c in ode.coeffs]
    num = Poly.zero(names)
    for i in range(n):
        num = num + cs[i] * Poly.variable(names, f"y{i}")
    return FoliationField(n, RationalFunction(-num, cs[n]))


LINEAR_CASES = [
    (("1", "0", "1"), 0, (1, 0)),        # f'' + f = 0, cos
    (("-1", "0", "1"), 0, (1, 1)),       # f'' = f
    (("1", "z", "1+z^2"), 0, (2, -1)),   # generic ordinary point
    (("z", "1", "2-z"), 1, (1, 3)),      # expansion away from 0
    (("-2", "z-5", "3"), -1, (1, 0)),
]


@pytest.mark.parametrize("texts,point,inits", LINEAR_CASES)
def test_linear_vs_foliation_oracle(texts, point, inits):
    ode = _ode(*texts)
    inits = [Fraction(x) for x in inits]
    order = 9
    direct = expand_scalar_linear(ode, point, inits, order)
    field = _encode_linear(ode)
    leaf = expand_foliation_leaf(
        field, InitialCondition(Fraction(point), tuple(inits)), order
    )
    assert direct.coeff_list() == leaf.coeff_list()


@pytest.mark.parametrize("texts,point,inits", LINEAR_CASES)
def test_linear_residual_vanishes(texts, point, inits):
    ode = _ode(*texts)
    series = expand_scalar_linear(ode, point, [Fraction(x) for x in inits], 10)
    residual = _residual_of_linear(ode, point, series)
    assert residual.is_zero()


def test_leaf_jet_components_are_derivatives():
    field = FoliationField(2, parse_ratfun("y0*y1+z", ("z", "y0", "y1")))
    jet = leaf_jet(field, InitialCondition(Fraction(0), (Fraction(1), Fraction(2))), 8)
    assert jet[1].truncate(7).coeffs == jet[0].deriv("z").coeffs


def test_eisenstein_sqrt():
    p = parse_poly("w^2-(1+z)", ("z", "w"))
    w = eisenstein_expand(p, 1, 5)
    assert w.coeff_list() == [
        Fraction(1),
        Fraction(1, 2),
        Fraction(-1, 8),
        Fraction(1, 16),
        Fraction(-5, 128),
    ]


def test_eisenstein_identity_and_errors():
    assert eisenstein_expand(parse_poly("w-z", ("z", "w")), 0, 5).coeff_list() == [
        0,
        Fraction(1),
        0,
        0,
        0,
    ]
    with pytest.raises(NotARoot):
        eisenstein_expand(parse_poly("w^2-(1+z)", ("z", "w")), 2, 5)
    with pytest.raises(SingularBranch):
        eisenstein_expand(parse_poly("w^2-z", ("z", "w")), 0, 5)


def test_eisenstein_integer_inverse_series():
    # root of w^3 - w - z near 0: Lagrange inversion gives integer coefficients
    w = eisenstein_expand(parse_poly("w^3-w-z", ("z", "w")), 0, 40)
    assert all(c.denominator == 1 for c in w.coeff_list())


def test_hyp_series_values():
    h = hyp_series([Fraction(1, 2), Fraction(1, 2)], [Fraction(1)], 4)
    assert h.coeff_list() == [
        Fraction(1),
        Fraction(1, 4),
        Fraction(9, 64),
        Fraction(25, 256),
    ]
    # sanity against the central-binomial closed form (1/16^n) C(2n,n)^2
    for n, c in enumerate(h.coeff_list()):
        assert c == Fraction(math.comb(2 * n, n) ** 2, 16**n)
    geom = hyp_series([Fraction(1)], [], 3)
    assert geom.coeff_list() == [Fraction(1)] * 3
    with pytest.raises(BadParams):
        hyp_series([Fraction(1, 2), Fraction(1, 2)], [Fraction(-2)], 4)


def test_expand_linear_system_exponential():
    a = ((parse_ratfun("1", Z),),)
    sol = expand_linear_system(a, 0, [Fraction(1)], 7)
    assert sol[0].coeff_list() == [Fraction(1, math.factorial(n)) for n in range(7)]


def test_expand_linear_system_binomial():
    # f' = (1/2)/(1+z) f at 0 -> (1+z)^(1/2)
    a = ((parse_ratfun("1/(2*(1+z))", Z),),)
    sol = expand_linear_system(a, 0, [Fraction(1)], 6)
    expected = eisenstein_expand(parse_poly("w^2-(1+z)", ("z", "w")), 1, 6)
    assert sol[0].coeffs == expected.coeffs


# -- flat section extension -------------------------------------------------


def _const_series(vars, order, c):
    return TruncatedSeries.const(vars, order, Fraction(c))


def test_flat_section_scalar_exponential():
    T = ("t",)
    ops = [((_const_series(T, 10, 1),),)]
    out = flat_section_extend(ops, (_const_series(T, 10, 1),), 10)
    assert out[0].coeff_list() == [Fraction(1, math.factorial(n)) for n in range(10)]


def test_flat_section_zero_connection_returns_constant():
    T = ("t1", "t2")
    zero = TruncatedSeries.zero(T, 8)
    ops = [((zero,),), ((zero,),)]
    u = (TruncatedSeries.const(T, 8, Fraction(3)),)
    out = flat_section_extend(ops, u, 8)
    assert out[0].coeffs == {(0, 0): Fraction(3)}


def _random_gauge_ops(seed, vars, order, rank):
    """Operators B_j = (d_j U) U^(-1) for a random unit U: flat by design."""
    rng = random.Random(seed)
    eye = {(0,) * len(vars): Fraction(1)}
    rows = []
    for i in range(rank):
        row = []
        for j in range(rank):
            coeffs = {}
            if i == j:
                coeffs.update(eye)
            for _ in range(3):
                e = tuple(rng.randint(0, 2) for _ in vars)
                if sum(e) == 0:
                    continue
                coeffs[e] = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
            row.append(TruncatedSeries(vars, order, coeffs))
        rows.append(tuple(row))
    u = tuple(rows)
    from pclab.linalg import mat_map, mat_mul

    # invert U by Newton iteration on matrices: X <- X(2I - U X)
    inv = mat_map(u, lambda s: TruncatedSeries(vars, 1, s.coeffs))
    const_part = [[inv[i][j].coeff((0,) * len(vars)) for j in range(rank)] for i in range(rank)]
    det = const_part[0][0] * const_part[1][1] - const_part[0][1] * const_part[1][0]
    assert det != 0, "seed produced a non-unit; pick another"
    inv0 = [
        [const_part[1][1] / det, -const_part[0][1] / det],
        [-const_part[1][0] / det, const_part[0][0] / det],
    ]
    x = tuple(
        tuple(TruncatedSeries.const(vars, order, inv0[i][j]) for j in range(rank))
        for i in range(rank)
    )
    two_eye = tuple(
        tuple(
            TruncatedSeries.const(vars, order, Fraction(2) if i == j else Fraction(0))
            for j in range(rank)
        )
        for i in range(rank)
    )
    for _ in range(order.bit_length() + 1):
        ux = mat_mul(u, x)
        x = mat_mul(x, tuple(tuple(a - b for a, b in zip(r2, r1)) for r2, r1 in zip(two_eye, ux)))
    ops = []
    for name in vars:
        du = mat_map(u, lambda s, nm=name: s.deriv(nm))
        ops.append(mat_mul(du, mat_map(x, lambda s: s.truncate(order - 1))))
    return ops, u


@pytest.mark.parametrize("seed", [1, 2, 5])
def test_flat_section_random_gauge_corpus(seed):
    vars = ("t1", "t2")
    order = 10
    ops, u = _random_gauge_ops(seed, vars, order, 2)
    start = (
        TruncatedSeries.const(vars, order, u[0][0].coeff((0, 0))),
        TruncatedSeries.const(vars, order, u[1][0].coeff((0, 0))),
    )
    out = flat_section_extend(ops, start, order)
    # annihilated by every operator through order-1
    for j, name in enumerate(vars):
        dv = tuple(s.deriv(name) for s in out)
        bv = (
            ops[j][0][0] * out[0] + ops[j][0][1] * out[1],
            ops[j][1][0] * out[0] + ops[j][1][1] * out[1],
        )
        for a, b in zip(dv, bv):
            assert (a - b.truncate(a.order)).is_zero()


def test_flat_section_rejects_noncommuting():
    T = ("t1", "t2")
    b1 = ((TruncatedSeries.variable(T, 8, "t2"),),)
    b2 = ((TruncatedSeries.zero(T, 8),),)
    with pytest.raises(NotFlat):
        flat_section_extend([b1, b2], (TruncatedSeries.const(T, 8, Fraction(1)),), 8)
