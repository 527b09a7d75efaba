import random
from fractions import Fraction

import pytest

from pclab.denoms import profile
from pclab.errors import BadPrime, DegreeBudgetExceeded, NotASolution, NotPIntegral
from pclab.field import FpElem
from pclab.parser import parse_ratfun
from pclab.pcurvature import (
    ConnectionSystem,
    foliation_pcurvature,
    linear_pcurvature,
    p_power_leaf_check,
    pcurvature_sweep,
)
from pclab.poly import Poly, RationalFunction
from pclab.series import TruncatedSeries, eval_poly_at_series, series_mod_p
from pclab.solver import (
    FoliationField,
    InitialCondition,
    expand_foliation_leaf,
    expand_linear_system,
)

Z = ("z",)
ZY = ("z", "y0")


def _rf(text, vars=Z):
    return parse_ratfun(text, vars)


def _sys(*row_texts):
    rows = tuple(tuple(_rf(t) for t in row.split(";")) for row in row_texts)
    return ConnectionSystem(len(rows), rows)


def test_zero_matrix_vanishes():
    r = linear_pcurvature(_sys("0"), 7)
    assert r.vanishes and r.nilpotent


def test_constant_one_is_fixed():
    r = linear_pcurvature(_sys("1"), 5)
    assert not r.vanishes and not r.nilpotent
    entry = r.curvature[0][0]
    assert entry == RationalFunction.const(Z, FpElem(1, 5))


def test_c_over_z_falling_factorial():
    for p in (3, 5, 7, 11):
        for c in range(p):
            r = linear_pcurvature(_sys(f"{c}/z"), p)
            ff = 1
            for t in range(p):
                ff *= c - t
            z_p = Poly.variable(Z, "z", FpElem(1, p)) ** p
            expected = RationalFunction(Poly.const(Z, FpElem(ff, p)), z_p)
            assert r.curvature[0][0] == expected
            assert r.vanishes  # falling factorial of length p kills every c in F_p


def test_half_over_z_sweep():
    results, summary = pcurvature_sweep(_sys("1/(2*z)"), prime_bound=50)
    assert summary.bad_primes == (2,)
    assert all(r.vanishes for r in results if not r.bad)
    assert summary.vanish == len(results) - 1


def test_sweep_with_explicit_primes_and_nonvanishing():
    results, summary = pcurvature_sweep(_sys("1"), primes=[2, 3, 5, 7, 11, 13, 17, 19])
    assert summary.vanish == 0 and summary.neither == len(results)


def test_nilpotent_but_not_vanishing():
    # A = [[0, 1/z], [0, 0]]: curvature stays strictly upper triangular
    r = linear_pcurvature(_sys("0;1/z", "0;0"), 5)
    assert not r.vanishes and r.nilpotent


def test_foliation_constant_g():
    out = foliation_pcurvature(FoliationField(1, _rf("4", ZY)), 7)
    assert all(x.is_zero() for x in out)
    out2 = foliation_pcurvature(FoliationField(2, _rf("2", ("z", "y0", "y1"))), 3)
    assert all(x.is_zero() for x in out2)


def test_foliation_linear_g_survives():
    out = foliation_pcurvature(FoliationField(1, _rf("y0", ZY)), 5)
    y0 = Poly.variable(ZY, "y0", FpElem(1, 5))
    assert out[0] == RationalFunction.from_poly(y0)


def test_foliation_riccati_vanishes():
    field = FoliationField(1, _rf("y0^2", ZY))
    for p in (2, 3, 5, 7, 11, 13):
        assert all(x.is_zero() for x in foliation_pcurvature(field, p))


def test_foliation_budget_guard():
    field = FoliationField(1, _rf("y0^2/(1+z+y0)", ZY))
    with pytest.raises(DegreeBudgetExceeded):
        foliation_pcurvature(field, 13, term_budget=10)


def _random_rank1(rng):
    """a(z) = num/den with den(0) = 1, p-integral coefficients."""
    deg_n, deg_d = rng.randint(0, 2), rng.randint(0, 2)
    num = [Fraction(rng.randint(-3, 3)) for _ in range(deg_n + 1)]
    den = [Fraction(1)] + [Fraction(rng.randint(-2, 2)) for _ in range(deg_d)]
    if all(c == 0 for c in num):
        num[0] = Fraction(1)
    return RationalFunction(Poly.from_dense(Z, num), Poly.from_dense(Z, den))


def test_rank1_linear_foliation_consistency_corpus():
    rng = random.Random(20240405)
    for _ in range(20):
        a = _random_rank1(rng)
        sys_ = ConnectionSystem(1, ((a,),))
        lift = {"z": Poly.variable(ZY, "z")}
        g = RationalFunction(a.num.subs(lift), a.den.subs(lift)) * RationalFunction.variable(ZY, "y0")
        field = FoliationField(1, g)
        for p in (3, 5, 7):
            lin = linear_pcurvature(sys_, p)
            fol = foliation_pcurvature(field, p)
            assert lin.vanishes == all(x.is_zero() for x in fol), (a, p)


def test_convention_soundness_on_integral_flat_sections():
    """If a p-integral exact solution exists, the curvature matrix kills its
    reduction, even when the matrix itself is nonzero."""
    cases = [
        # (matrix rows, initial vector, primes)
        (("0;1", "0;1"), (Fraction(1), Fraction(0)), (3, 5, 7)),
        (("1/(1-z);0", "0;1"), (Fraction(1), Fraction(0)), (3, 5)),
    ]
    order = 40
    for rows, init, primes in cases:
        sys_ = ConnectionSystem(2, tuple(tuple(_rf(t) for t in r.split(";")) for r in rows))
        sol = expand_linear_system(sys_.matrix, 0, list(init), order)
        for p in primes:
            res = linear_pcurvature(sys_, p)
            if res.vanishes:
                continue
            sol_p = [series_mod_p(s, p) for s in sol]
            zs = TruncatedSeries.variable(Z, order, "z", FpElem(1, p))
            applied = []
            for i in range(2):
                acc = None
                for j in range(2):
                    entry = res.curvature[i][j]
                    num = eval_poly_at_series(entry.num, {"z": zs})
                    den = eval_poly_at_series(entry.den, {"z": zs})
                    piece = num * den.inverse() * sol_p[j]
                    acc = piece if acc is None else acc + piece
                applied.append(acc)
            for s in applied:
                assert s.truncate(order - p).is_zero()


def test_p_power_leaf_riccati_true():
    field = FoliationField(1, _rf("y0^2", ZY))
    leaf = expand_foliation_leaf(field, InitialCondition(Fraction(0), (Fraction(1),)), 30)
    assert p_power_leaf_check(field, leaf, 5) is True


def test_p_power_leaf_exponential_false():
    field = FoliationField(1, _rf("y0", ZY))
    leaf = expand_foliation_leaf(field, InitialCondition(Fraction(0), (Fraction(1),)), 30)
    assert p_power_leaf_check(field, leaf, 5) is False


def test_p_power_leaf_zero_solution_true():
    field = FoliationField(1, _rf("y0", ZY))
    leaf = expand_foliation_leaf(field, InitialCondition(Fraction(0), (Fraction(0),)), 30)
    assert p_power_leaf_check(field, leaf, 5) is True


def test_p_power_leaf_rejects_non_solutions():
    field = FoliationField(1, _rf("y0", ZY))
    junk = TruncatedSeries.from_coeff_list("z", [Fraction(1), Fraction(2), Fraction(7)], 12)
    with pytest.raises(NotASolution):
        p_power_leaf_check(field, junk, 3)


def test_p_power_leaf_undecidable_prefix_raises():
    # f' = f^2 with f(0) = 1/5: the leaf 1/(5-z) is not 5-integral at all,
    # and the curvature composition is vacuously clean on the empty prefix
    field = FoliationField(1, _rf("y0^2", ZY))
    leaf = expand_foliation_leaf(field, InitialCondition(Fraction(0), (Fraction(1, 5),)), 12)
    with pytest.raises(NotPIntegral):
        p_power_leaf_check(field, leaf, 5)


def test_vanishing_curvature_implies_square_floor():
    """All-vanishing curvature at p forces clean coefficients through p^2-1."""
    m = 60
    cases = [
        (_sys("1/(2*z)"), 1, [Fraction(1)]),
        (_sys("3/(2*z)"), 1, [Fraction(1)]),
        (_sys("1/(7*z)"), 1, [Fraction(1)]),
        (_sys("0;1", "0;0"), 0, [Fraction(1), Fraction(1)]),
        (_sys("1/(11*(z-2))"), 1, [Fraction(1)]),
    ]
    for sys_, point, init in cases:
        for p in (3, 5):
            assert linear_pcurvature(sys_, p).vanishes
        sol = expand_linear_system(sys_.matrix, point, init, m)
        prof = profile(sol[0].coeff_list(), 6)
        for p in (3, 5):
            assert prof.table[p] >= min(m - 1, p * p - 1)
