"""Command-line surface. Every subcommand prints one JSON report envelope
(or CSV where requested) on stdout. Exit codes: 0 success, 1 computational
error (bad prime, pole on leaf, ...), 2 usage or validation error. All
coefficient-like numbers are emitted as exact "p/q" strings.
"""

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction

from . import __version__
from .denoms import multivariate_profile, profile, verdicts
from .errors import InvalidInput, ParseError, PclabError
from .hyp import HypParams, classify
from .parser import (
    parse_matrix_lines,
    parse_poly,
    parse_rat,
    parse_rat_list,
    parse_rat_matrix_blocks,
    parse_ratfun,
)
from .pcurvature import ConnectionSystem, foliation_pcurvature, pcurvature_sweep
from .schlesinger import (
    SchlesingerState,
    invariants_check,
    legendre_pf_preset,
    schlesinger_expand,
    verify_flatness,
)
from .solver import (
    FoliationField,
    InitialCondition,
    ScalarLinearODE,
    apery_sequence,
    eisenstein_expand,
    expand_foliation_leaf,
    expand_scalar_linear,
    hyp_series,
    singular_apery,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser():
    top = _Parser(prog="pclab", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    expand = sub.add_parser("expand", help="Taylor expansion of ODE solutions")
    esub = expand.add_subparsers(dest="mode", required=True)
    lin = esub.add_parser("linear", help="scalar linear ODE at an ordinary point")
    lin.add_argument("--ode", required=True, help="coefficients c_0;c_1;...;c_n of sum c_i f^(i) = 0, lowest order first")
    lin.add_argument("--point", required=True)
    lin.add_argument("--init", required=True, help="f(a), f'(a), ... comma-separated")
    lin.add_argument("--order", type=int, required=True)
    leaf = esub.add_parser("leaf", help="leaf of the ODE foliation f^(n) = g")
    leaf.add_argument("--g", required=True, help="rational expression in z, y0..y{n-1}")
    leaf.add_argument("--n", type=int, required=True)
    leaf.add_argument("--point", required=True)
    leaf.add_argument("--init", required=True)
    leaf.add_argument("--order", type=int, required=True)

    den = sub.add_parser("denoms", help="denominator-prime profile of coefficients")
    src = den.add_mutually_exclusive_group(required=True)
    src.add_argument("--coeffs-file", help="one rational per line")
    src.add_argument("--from", dest="from_report", help="a prior report with a coeffs payload")
    den.add_argument("--prime-bound", type=int, required=True)
    den.add_argument("--format", choices=("json", "csv"), default="json")

    pc = sub.add_parser("pcurv", help="p-curvature computations")
    psub = pc.add_subparsers(dest="mode", required=True)
    plin = psub.add_parser("linear", help="curvature of f' = A f")
    plin.add_argument("--matrix-file", required=True, help="rows on lines, entries ';'-separated, in z")
    group = plin.add_mutually_exclusive_group(required=True)
    group.add_argument("--primes", help="explicit comma-separated primes")
    group.add_argument("--prime-bound", type=int)
    pfol = psub.add_parser("foliation", help="curvature of the ODE foliation")
    pfol.add_argument("--g", required=True)
    pfol.add_argument("--n", type=int, required=True)
    pfol.add_argument("--prime", type=int, required=True)

    hyp = sub.add_parser("hyp", help="hypergeometric classification and series")
    hsub = hyp.add_subparsers(dest="mode", required=True)
    hcls = hsub.add_parser("classify")
    hcls.add_argument("--a", required=True)
    hcls.add_argument("--b", default="")
    hser = hsub.add_parser("series")
    hser.add_argument("--a", required=True)
    hser.add_argument("--b", default="")
    hser.add_argument("--order", type=int, required=True)

    sch = sub.add_parser("schlesinger", help="formal isomonodromy expansion")
    sch.add_argument("--residues-file", help="matrices in blocks separated by blank lines")
    sch.add_argument("--poles", help="comma-separated rationals")
    sch.add_argument("--order", type=int, required=True)
    sch.add_argument("--preset", choices=("legendre",))
    sch.add_argument("--profile-bound", type=int, default=0, help="also profile entry denominators up to this prime bound")

    eis = sub.add_parser("eisenstein", help="series expansion of an algebraic function")
    eis.add_argument("--poly", required=True, help="polynomial in z and w")
    eis.add_argument("--w0", required=True)
    eis.add_argument("--order", type=int, required=True)

    ape = sub.add_parser("apery", help="elliptic-family recurrence sequences")
    ape.add_argument("--a")
    ape.add_argument("--b0")
    ape.add_argument("--b1")
    ape.add_argument("--order", type=int, required=True)
    ape.add_argument("--singular", action="store_true")
    return top


def _fmt(q):
    return str(Fraction(q))


def _series_payload(series, extra=None):
    payload = {
        "kind": "series",
        "variable": series.vars[0],
        "order": series.order,
        "coeffs": [_fmt(c) for c in series.coeff_list()],
    }
    if extra:
        payload.update(extra)
    return payload


def _cmd_expand(args):
    if args.mode == "linear":
        coeff_texts = args.ode.split(";")
        polys = tuple(parse_poly(t, ("z",)) for t in coeff_texts)
        ode = ScalarLinearODE(polys)
        point = parse_rat(args.point)
        inits = parse_rat_list(args.init)
        series = expand_scalar_linear(ode, point, inits, args.order)
        return _series_payload(series, {"point": _fmt(point), "local_coordinate": f"z - ({_fmt(point)})"})
    names = ("z",) + tuple(f"y{i}" for i in range(args.n))
    g = parse_ratfun(args.g, names)
    field = FoliationField(args.n, g)
    point = parse_rat(args.point)
    inits = parse_rat_list(args.init)
    series = expand_foliation_leaf(field, InitialCondition(point, tuple(inits)), args.order)
    return _series_payload(series, {"point": _fmt(point), "local_coordinate": f"z - ({_fmt(point)})"})


def _read_coeffs(args):
    if args.coeffs_file:
        with open(args.coeffs_file) as fh:
            tokens = [t for line in fh for t in line.replace(",", "\n").split()]
        return [parse_rat(t) for t in tokens]
    with open(args.from_report) as fh:
        report = json.load(fh)
    payload = report.get("payload", report)
    if "coeffs" not in payload:
        raise InvalidInput("report has no coeffs payload to profile")
    return [parse_rat(t) for t in payload["coeffs"]]


def _cmd_denoms(args):
    coeffs = _read_coeffs(args)
    prof = profile(coeffs, args.prime_bound)
    ver = verdicts(prof)
    if args.format == "csv":
        return prof.to_csv()
    payload = prof.to_json_dict()
    payload["verdicts"] = ver.to_json_dict()
    return payload


def _cmd_pcurv(args):
    if args.mode == "linear":
        with open(args.matrix_file) as fh:
            rows = parse_matrix_lines(fh.read().splitlines(), ("z",))
        sys_ = ConnectionSystem(len(rows), rows)
        if args.primes:
            primes = [int(t) for t in args.primes.split(",")]
            results, summary = pcurvature_sweep(sys_, primes=primes)
        else:
            results, summary = pcurvature_sweep(sys_, prime_bound=args.prime_bound)
        return {
            "rank": sys_.rank,
            "results": [r.to_json_dict() for r in results],
            "summary": summary.to_json_dict(),
        }
    names = ("z",) + tuple(f"y{i}" for i in range(args.n))
    g = parse_ratfun(args.g, names)
    comps = foliation_pcurvature(FoliationField(args.n, g), args.prime)
    return {
        "p": args.prime,
        "components": [repr(c) for c in comps],
        "all_zero": all(c.is_zero() for c in comps),
    }


def _cmd_hyp(args):
    a = parse_rat_list(args.a)
    b = parse_rat_list(args.b)
    if args.mode == "classify":
        report = classify(HypParams(tuple(a), tuple(b)))
        return report.to_json_dict()
    HypParams(tuple(a), tuple(b))  # validates shapes and lower parameters
    series = hyp_series(a, b, args.order)
    return _series_payload(series, {"a": [_fmt(x) for x in a], "b": [_fmt(x) for x in b]})


def _cmd_schlesinger(args):
    if args.preset == "legendre":
        state = legendre_pf_preset()
    else:
        if not args.residues_file or not args.poles:
            raise InvalidInput("need --residues-file and --poles, or --preset")
        with open(args.residues_file) as fh:
            blocks = parse_rat_matrix_blocks(fh.read())
        poles = parse_rat_list(args.poles)
        state = SchlesingerState(tuple(poles), tuple(blocks))
    series = schlesinger_expand(state, args.order)
    flat = verify_flatness(series)
    inv = invariants_check(series)
    entries = {}
    for i, m in enumerate(series.entries):
        for exp in sorted({e for row in m for s in row for e in s.coeffs},
                          key=lambda t: (sum(t), t)):
            key = f"{i+1}|{','.join(map(str, exp))}"
            entries[key] = [[_fmt(s.coeff(exp, Fraction(0))) for s in row] for row in m]
    payload = {
        "poles": [_fmt(a) for a in state.poles],
        "rank": state.rank,
        "order": series.order,
        "flatness_clean_order": flat.clean_order,
        "flatness_ok": flat.ok,
        "invariants_ok": inv.ok,
        "entries": entries,
    }
    if args.profile_bound >= 2:
        profs = []
        for i, m in enumerate(series.entries):
            for r, row in enumerate(m):
                for c, s in enumerate(row):
                    prof = multivariate_profile(s, args.profile_bound)
                    profs.append({
                        "matrix": i + 1,
                        "entry": [r, c],
                        "support": list(prof.support),
                    })
        payload["entry_profiles"] = profs
    return payload


def _cmd_eisenstein(args):
    p = parse_poly(args.poly, ("z", "w"))
    w0 = parse_rat(args.w0)
    series = eisenstein_expand(p, w0, args.order)
    return _series_payload(series, {"w0": _fmt(w0), "polynomial": args.poly})


def _cmd_apery(args):
    if args.singular:
        seq = singular_apery(args.order)
        return {"kind": "sequence", "singular": True, "coeffs": [_fmt(c) for c in seq]}
    if args.a is None or args.b0 is None or args.b1 is None:
        raise InvalidInput("need --a, --b0, --b1 (or --singular)")
    seq = apery_sequence(parse_rat(args.a), parse_rat(args.b0), parse_rat(args.b1), args.order)
    return {"kind": "sequence", "singular": False, "coeffs": [_fmt(c) for c in seq]}


_HANDLERS = {
    "expand": _cmd_expand,
    "denoms": _cmd_denoms,
    "pcurv": _cmd_pcurv,
    "hyp": _cmd_hyp,
    "schlesinger": _cmd_schlesinger,
    "eisenstein": _cmd_eisenstein,
    "apery": _cmd_apery,
}


def run(argv, out=None):
    out = out or sys.stdout
    started = time.time()
    try:
        args = _build_parser().parse_args(argv)
        payload = _HANDLERS[args.command](args)
    except (UsageError, ParseError, InvalidInput) as exc:
        json.dump({"error": {"code": getattr(exc, "code", "UsageError"), "message": str(exc)}}, out)
        out.write("\n")
        return 2
    except PclabError as exc:
        json.dump({"error": {"code": exc.code, "message": str(exc)}}, out)
        out.write("\n")
        return 1
    if isinstance(payload, str):  # CSV
        out.write(payload)
        return 0
    envelope = {
        "command": "pclab " + " ".join(argv),
        "input_digest": hashlib.sha256(json.dumps(argv).encode()).hexdigest(),
        "version": __version__,
        "payload": payload,
        "wall_time_s": round(time.time() - started, 6),
    }
    json.dump(envelope, out, indent=2, sort_keys=False)
    out.write("\n")
    return 0


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
