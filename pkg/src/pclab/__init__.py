"""pclab: exact arithmetic for algebraic ODE, their Taylor solutions,
denominator-prime profiles, p-curvature tests, hypergeometric
classification, and formal Schlesinger (isomonodromy) expansions."""

__version__ = "0.1.0"

from .denoms import IntegralityProfile, multivariate_profile, profile, verdicts
from .errors import PclabError
from .field import FpElem, reduce_rat_mod_p
from .hyp import HypParams, bh_algebraic, christol_bounded, classify, frac01, monodromy0
from .parser import parse_expr, parse_poly, parse_rat_list, parse_ratfun
from .pcurvature import (
    ConnectionSystem,
    PCurvatureResult,
    foliation_pcurvature,
    linear_pcurvature,
    p_power_leaf_check,
    pcurvature_sweep,
)
from .poly import Poly, RationalFunction, poly_gcd, reduce_ratfun_mod_p
from .primes import is_prime, padic_valuation, primes_upto
from .schlesinger import (
    SchlesingerSeries,
    SchlesingerState,
    invariants_check,
    legendre_pf_preset,
    painleve_vi_check,
    schlesinger_expand,
    verify_flatness,
)
from .series import TruncatedSeries
from .solver import (
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
    singular_apery,
)
