"""Command-line front end.

Exit status: 0 on success, 2 on a violated precondition (or an infeasible
pair search), 3 when a budget
or precision limit is exhausted.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import counting, experiments, expsums, exppairs, fourier
from .arith import parse_c, parse_exponent
from .errors import BudgetError, NoFeasiblePair, PreconditionError


def _ints(text: str) -> list[int]:
    return [int(float(t)) for t in text.split(",") if t.strip()]


def _cs(values: list[str]) -> list[Fraction]:
    out = []
    for v in values:
        out += [parse_c(t) for t in v.split(",") if t.strip()]
    return out


def _emit(pairs):
    for key, value in pairs:
        print(f"{key}={value}")


def cmd_count(args):
    if (args.s is None) == (args.S is None):
        raise PreconditionError("give exactly one of --s or --S")
    c = parse_c(args.c)
    rep = counting.count_Q(c, args.s, args.N) if args.s is not None else counting.count_Qfrak(c, args.S, args.N)
    _emit(
        [
            ("kind", rep.kind),
            ("c", rep.c),
            ("s" if rep.kind == "Q" else "S", rep.s_or_S),
            ("N", rep.N),
            ("exact_count", rep.exact_count),
            ("main_term", experiments.fmt_real(rep.main_term)),
            ("deviation", experiments.fmt_real(rep.deviation)),
            ("bound_total", experiments.fmt_real(rep.bound.total)),
            ("bound_argmin", rep.bound.min_label),
        ]
    )


def _grid(text: str) -> tuple[int, ...]:
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise PreconditionError("--grid expects lo:hi[:per_decade] (powers of ten)")
    per = int(parts[2]) if len(parts) == 3 else 1
    return experiments.geometric_grid(float(parts[0]), float(parts[1]), per)


def _s_rule(args) -> experiments.SRule:
    if args.S_rule is not None:
        return experiments.SRule.parse(args.S_rule)
    if args.S is not None:
        return experiments.SRule(fixed=args.S)
    raise PreconditionError("give --S or --S-rule")


def cmd_scan(args):
    if (args.N is None) == (args.grid is None):
        raise PreconditionError("give exactly one of --N or --grid")
    Ns = tuple(_ints(args.N)) if args.N else _grid(args.grid)
    config = experiments.ScanConfig(
        cs=tuple(_cs(args.c)),
        Ns=Ns,
        s_rule=_s_rule(args),
        pair=exppairs.parse_pair(args.pair),
        out=args.out,
        workers=args.workers,
    )
    rows = experiments.run_scan(config)
    if not args.out:
        sys.stdout.write(experiments.rows_to_csv(rows))


def cmd_decompose(args):
    rep = counting.decompose_S0_E1_E2(parse_c(args.c), args.S, args.N, budget=args.budget)
    _emit(
        [
            ("c", rep.c),
            ("S", rep.S),
            ("N", rep.N),
            ("pairs", rep.pairs),
            ("S0", experiments.fmt_real(rep.S0)),
            ("E1", experiments.fmt_real(rep.E1)),
            ("E2", experiments.fmt_real(rep.E2)),
            ("Qfrak_exact", rep.Qfrak_exact),
            ("residual", experiments.fmt_real(rep.residual)),
        ]
    )


_OBJECTIVES = {
    "kappa-ratio": lambda c: (lambda p: p.kappa / (1 + p.kappa)),
    "theta1": lambda c: (lambda p: exppairs.derived_exponents(p).theta1(c)),
    "theta2": lambda c: (lambda p: exppairs.derived_exponents(p).theta2(c)),
}
_CONSTRAINTS = {
    "half": exppairs.half_ratio,
    "hypothesis": exppairs.check_theorem_hypothesis,
}


def cmd_pairs(args):
    if args.search:
        c = parse_c(args.c) if args.c else Fraction(3, 2)
        res = exppairs.search_pairs(
            _OBJECTIVES[args.objective](c),
            [_CONSTRAINTS[k] for k in args.constraint],
            args.max_len,
        )
        p = res.pair
        _emit([("word", res.word or "(empty)"), ("objective", res.value)])
    else:
        p = exppairs.parse_pair(args.pair)
    d = exppairs.derived_exponents(p)
    rows = [
        ("kappa", p.kappa),
        ("lambda", p.lam),
        ("provenance", p.provenance),
        ("rho1", d.rho1),
        ("rho2", d.rho2),
        ("theta1", f"{d.theta1.slope}*c + {d.theta1.intercept}"),
        ("theta2", f"{d.theta2.slope}*c + {d.theta2.intercept}"),
        ("lambda/(1+kappa)", p.lam / (1 + p.kappa)),
        ("hypothesis", exppairs.check_theorem_hypothesis(p)),
    ]
    if p.caveat:
        rows.append(("caveat", p.caveat))
    _emit(rows)


def cmd_psi(args):
    worst = 0.0
    for H in _ints(args.H):
        v = fourier.verify_vaaler(H, args.grid)
        worst = max(worst, v)
        print(f"H={H} max_violation={v:.3e}")
    print(f"ok={worst <= 1e-9}")


def cmd_expsum(args):
    if args.calibrate:
        out = args.out or "calibration.json"
        data = expsums.write_calibration(out)
        _emit([("file", out)] + sorted(data.items()))
        return
    M = _ints(args.M)
    if len(M) != 3:
        raise PreconditionError("--M expects M1,M2,M3")
    box = expsums.DyadicBox(*M)
    if args.alphas:
        alphas = [float(parse_exponent(a)) if "/" in a else float(a) for a in args.alphas.split(",")]
    else:
        g = 1 / float(parse_c(args.c))
        alphas = [g, 2 * g, 2 * g]
    value = expsums.triple_sum(args.X, alphas, box, budget=args.budget)
    bound = expsums.rs_bound(args.X, box)
    comp = expsums.compare(value, bound)
    _emit(
        [
            ("triple_sum", experiments.fmt_real(comp.exact_abs_sum)),
            ("rs_bound", experiments.fmt_real(comp.bound_value)),
            ("ratio", experiments.fmt_real(comp.ratio)),
            ("alpha2_near_2", expsums.alpha_near_two(alphas)),
        ]
    )


def cmd_fit(args):
    rows = experiments.read_csv(args.csv)
    beta = experiments.SRule.parse(args.S_rule).exponent if args.S_rule else None
    res = experiments.fit_error_exponent(rows, args.against, beta)
    _emit(
        [
            ("slope", experiments.fmt_real(res.slope)),
            ("intercept", experiments.fmt_real(res.intercept)),
            ("r_squared", experiments.fmt_real(res.r_squared)),
            ("predicted_exponent", experiments.fmt_real(res.predicted_exponent)),
            ("margin", experiments.fmt_real(res.margin)),
            ("argmin", res.argmin_label),
            ("points", res.n_points),
            ("excluded_N", ",".join(map(str, res.excluded)) or "-"),
        ]
    )


def cmd_tau(args):
    text = experiments.emit_plotdata([], "tau", args.out)
    if not args.out:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="psquares", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="one Q_c(s,N) or Qfrak_c(S,N) evaluation")
    p.add_argument("--c", required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--s", type=int)
    p.add_argument("--S", type=int)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("scan", help="grid of averaged counts to CSV")
    p.add_argument("--c", action="append", required=True)
    p.add_argument("--N", help="comma-separated N values")
    p.add_argument("--grid", help="lo:hi[:per_decade], N = 10^t")
    p.add_argument("--S", type=int)
    p.add_argument("--S-rule", dest="S_rule", help="fixed integer or N^b")
    p.add_argument("--pair", default="BABAAB")
    p.add_argument("--out")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("decompose", help="S0/E1/E2 report")
    p.add_argument("--c", required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--S", type=int, required=True)
    p.add_argument("--budget", type=int, default=counting.PAIR_BUDGET)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("pairs", help="exponent-pair words, search and derived exponents")
    p.add_argument("--pair", default="BABAAB", help="word over A,B or k/l,m/n")
    p.add_argument("--search", action="store_true")
    p.add_argument("--objective", choices=sorted(_OBJECTIVES), default="kappa-ratio")
    p.add_argument("--constraint", action="append", choices=sorted(_CONSTRAINTS), default=[])
    p.add_argument("--max-len", dest="max_len", type=int, default=8)
    p.add_argument("--c")
    p.set_defaults(func=cmd_pairs)

    p = sub.add_parser("psi", help="verify the Vaaler inequality on a grid")
    p.add_argument("--H", default="1,2,5,10,50,100")
    p.add_argument("--grid", type=int, default=10_000)
    p.set_defaults(func=cmd_psi)

    p = sub.add_parser("expsum", help="triple exponential sum against the Robert-Sargos bound")
    p.add_argument("--X", type=float, default=1.0)
    p.add_argument("--M", default="8,8,8")
    p.add_argument("--c", default="3/2", help="sets alphas to (1/c, 2/c, 2/c)")
    p.add_argument("--alphas")
    p.add_argument("--budget", type=int, default=expsums.SUM_BUDGET)
    p.add_argument("--calibrate", action="store_true", help="rerun the calibration grids")
    p.add_argument("--out")
    p.set_defaults(func=cmd_expsum)

    p = sub.add_parser("fit", help="log-log regression of |deviation| on N")
    p.add_argument("csv")
    p.add_argument("--against", choices=["theorem", "lsz"], default="theorem")
    p.add_argument("--S-rule", dest="S_rule")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("tau", help="tabulate both tau thresholds")
    p.add_argument("--out")
    p.set_defaults(func=cmd_tau)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (PreconditionError, NoFeasiblePair) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetError as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
