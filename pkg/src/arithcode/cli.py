"""Command-line interface.

Exit status: 0 on success, 1 on a usage error (bad flag value), 2 when a
verification step fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional

from . import codec, moments, sim, verify
from .exact import DomainError, as_bits, as_probability, dyadic_value, format_rational, parse_rational

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _flag(name: str, fn, *args):
    try:
        return fn(*args)
    except (DomainError, ValueError) as exc:
        raise UsageError(f"--{name}: {exc}") from None


def _p(args) -> Fraction:
    return _flag("p", lambda s: as_probability(parse_rational(s)), args.p)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2)


def cmd_encode(args) -> str:
    p = _p(args)
    bits = _flag("bits", as_bits, args.bits)
    res = codec.encode(bits, p)
    out = {
        "low": format_rational(res.final.low),
        "high": format_rational(res.final.high),
        "first_disagreement": codec.first_disagreement_codeword(res.final),
        "midpoint": codec.midpoint_codeword(res.final),
        "subinterval": codec.subinterval_codeword(res.final),
    }
    if args.trace:
        out["trace"] = [iv.to_json() for iv in res.trace]
    if args.format == "text":
        lines = [f"interval: [{out['low']}, {out['high']}]"]
        lines += [f"{k}: {out[k]}" for k in ("first_disagreement", "midpoint", "subinterval")]
        if args.trace:
            lines += [f"  {b} -> [{iv['low']}, {iv['high']}]" for b, iv in zip(bits, out["trace"])]
        return "\n".join(lines)
    if args.format == "csv":
        return "\n".join(["key,value"] + [f"{k},{v}" for k, v in out.items() if k != "trace"])
    return _dump(out)


def cmd_decode(args) -> str:
    p = _p(args)
    code = _flag("code", as_bits, args.code)
    if args.n < 0:
        raise UsageError("--n: must be >= 0")
    msg = _flag("code", codec.decode, dyadic_value(code), args.n, p)
    if args.format == "json":
        return _dump({"message": msg})
    return msg


def cmd_eigen(args) -> str:
    p = _p(args)
    if args.m < 1:
        raise UsageError("--m: must be >= 1")
    W = moments.build_w(args.m, p)
    stoch = moments.stochasticity_check(W)
    try:
        report = moments.conjugate(args.m, p)
        tri_ok, eig = True, [format_rational(x) for x in report.eigenvalues]
    except moments.ConsistencyError:
        tri_ok, eig = False, []
    out = {
        "m": args.m,
        "p": format_rational(p),
        "eigenvalues": eig,
        "doubly_stochastic": stoch.doubly_stochastic,
        "regular": stoch.regular,
        "triangularization_verified": tri_ok,
        "W": W.to_json(),
    }
    args._failed = not (stoch.regular and tri_ok)
    if args.format == "text":
        return "\n".join(
            [f"eigenvalues: {', '.join(eig)}"]
            + [f"{k}: {out[k]}" for k in ("doubly_stochastic", "regular", "triangularization_verified")]
        )
    if args.format == "csv":
        return "\n".join(["k,eigenvalue"] + [f"{k + 1},{e}" for k, e in enumerate(eig)])
    return _dump(out)


def cmd_moments(args) -> str:
    p = _p(args)
    if args.m < 1:
        raise UsageError("--m: must be >= 1")
    if args.n < 0:
        raise UsageError("--n: must be >= 0")
    if args.format == "csv":
        return moments.trajectory_csv(args.m, p, args.n).rstrip("\n")
    rows = list(moments.moment_trajectory(args.m, p, args.n))
    if args.format == "text":
        return "\n".join(
            f"{mv.n:4d}  " + "  ".join(f"{float(c):.12f}" for c in mv.components)
            + f"  dev={float(mv.max_deviation()):.3e}"
            for mv in rows
        )
    return _dump(
        {
            "m": args.m,
            "p": format_rational(p),
            "limit": format_rational(Fraction(1, args.m + 1)),
            "rows": [
                {
                    "n": mv.n,
                    "components": [format_rational(c) for c in mv.components],
                    "max_deviation": format_rational(mv.max_deviation()),
                }
                for mv in rows
            ],
        }
    )


def _config(args, backend: str) -> sim.SimConfig:
    p = _p(args)
    for name in ("n", "trials", "seed"):
        if getattr(args, name) < 0:
            raise UsageError(f"--{name}: must be >= 0")
    if args.trials < 1:
        raise UsageError("--trials: must be >= 1")
    if backend == "float" and args.n > sim.FLOAT_MAX_N:
        raise UsageError(f"--n: {args.n} exceeds the float backend limit of {sim.FLOAT_MAX_N}")
    return _flag("seed", sim.SimConfig, p, args.n, args.trials, args.seed, backend)


def cmd_simulate(args) -> str:
    cfg = _config(args, args.backend)
    mgf = [tuple(map(float, s.split(","))) for s in args.mgf or []]
    if args.samples:
        with open(args.samples, "w", newline="") as fh:
            rep = sim.run_distribution_experiment(cfg, mgf_points=mgf, samples_csv=fh)
    else:
        rep = sim.run_distribution_experiment(cfg, mgf_points=mgf)
    if args.format == "text":
        return "\n".join(
            [f"KS statistic: {rep.ks_statistic:.6f} (critical {rep.ks_critical:.6f})"]
            + [f"E[mid^{m}] = {v:.6f} +- {rep.midpoint_std_errors[m]:.6f}" for m, v in rep.midpoint_moments.items()]
        )
    return _dump(rep.to_json())


def cmd_rate(args) -> str:
    cfg = _config(args, "exact")
    rep = sim.compression_rate_experiment(cfg)
    if args.format == "text":
        return f"{rep.mean_bits_per_symbol:.5f} bits/symbol (H = {rep.entropy:.5f}, gap {rep.gap:+.5f})"
    return _dump(rep.to_json())


def cmd_check(args) -> str:
    results = verify.run_all(skip_statistical=args.skip_statistical) + verify.internal_consistency()
    args._failed = not all(r.passed for r in results)
    if args.format == "json":
        return _dump([{"id": r.number, "name": r.name, "passed": r.passed, "detail": r.detail} for r in results])
    return "\n".join(r.line() for r in results)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="arithcode", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, default_format="json", help=None):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("--format", choices=("json", "csv", "text"), default=default_format)
        sp.set_defaults(func=fn)
        return sp

    sp = add("encode", cmd_encode, help="encode a bit string")
    sp.add_argument("--p", required=True, help="probability of a 1 bit, as a/b")
    sp.add_argument("--bits", required=True)
    sp.add_argument("--trace", action="store_true")

    sp = add("decode", cmd_decode, default_format="text", help="decode a codeword")
    sp.add_argument("--p", required=True)
    sp.add_argument("--code", required=True)
    sp.add_argument("--n", type=int, required=True)

    sp = add("eigen", cmd_eigen, help="spectrum and stochasticity of W_m")
    sp.add_argument("--p", required=True)
    sp.add_argument("--m", type=int, required=True)

    sp = add("moments", cmd_moments, help="exact moment table for steps 0..N")
    sp.add_argument("--p", required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)

    for name, fn, hlp in (("simulate", cmd_simulate, "Monte Carlo distribution experiment"),
                          ("rate", cmd_rate, "bits/symbol against binary entropy")):
        sp = add(name, fn, help=hlp)
        sp.add_argument("--p", required=True)
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--trials", type=int, required=True)
        sp.add_argument("--seed", type=int, default=0)
        if name == "simulate":
            sp.add_argument("--backend", choices=("float", "exact"), default="float")
            sp.add_argument("--samples", help="write per-trial samples to this CSV file")
            sp.add_argument("--mgf", action="append", metavar="U,V", help="add an MGF check at (u, v)")

    sp = add("check", cmd_check, default_format="text", help="run the verification suite")
    sp.add_argument("--skip-statistical", action="store_true")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    args._failed = False
    try:
        out = args.func(args)
    except (UsageError, DomainError) as exc:
        print(f"arithcode {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(out)
    return EXIT_VERIFY if args._failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
