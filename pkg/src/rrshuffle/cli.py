"""Command-line interface.

Subcommands: ``vuln`` (one posterior-vulnerability record), ``sweep``
(CSV over a parameter grid), ``abo`` (strong-adversary vulnerability),
``channel`` (CSV dump of a channel matrix), ``check`` (invariant
suites).  Exit codes: 0 success, 1 usage error, 2 computation bound
exceeded, 3 check-suite failure.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import checks, closed_forms as cf
from .channels import (
    CapExceededError,
    DEFAULT_CAP,
    build_krr,
    build_krr_reduced,
    build_shuffle_full,
    build_shuffle_reduced,
    cascade,
)
from .combinatorics import epsilon_to_p, p_to_epsilon
from .oracle import oracle_posterior
from .scalars import Scalar, is_exact, parse_scalar
from .vulnerability import AboScenario, abo_posterior


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


PIPELINES = {"krr": ["krr"], "shuffle": ["shuffle"], "krr-shuffle": ["krr", "shuffle"]}


def _common_flags(sub: argparse.ArgumentParser):
    mode = sub.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true",
                      help="exact rational arithmetic (fractions in output)")
    mode.add_argument("--float", dest="float_mode", action="store_true",
                      help="binary64 arithmetic (default)")
    sub.add_argument("--cap", type=int, default=DEFAULT_CAP,
                     help="bound on k**n for full-channel construction")
    sub.add_argument("--out", help="write output to this path instead of stdout")


def _p_flags(sub: argparse.ArgumentParser, plural: bool = False):
    group = sub.add_mutually_exclusive_group()
    if plural:
        group.add_argument("--p", action="append",
                           help="truthful-report probability (repeatable)")
        group.add_argument("--epsilon", action="append", type=float,
                           help="privacy parameter, converted to p (repeatable)")
    else:
        group.add_argument("--p", help="truthful-report probability")
        group.add_argument("--epsilon", type=float,
                           help="privacy parameter, converted to p")


def build_parser() -> Parser:
    parser = Parser(prog="rrshuffle",
                    description="Leakage analysis of randomized response and shuffling")
    subs = parser.add_subparsers(dest="command", required=True)

    vuln = subs.add_parser("vuln", help="one vulnerability record")
    vuln.add_argument("--mech", required=True, choices=sorted(PIPELINES))
    vuln.add_argument("--n", type=int, required=True)
    vuln.add_argument("--k", type=int, default=2)
    vuln.add_argument("--method", default="closed",
                      choices=["closed", "sum", "oracle", "approx"])
    _p_flags(vuln)
    _common_flags(vuln)
    vuln.set_defaults(func=cmd_vuln)

    sweep = subs.add_parser("sweep", help="CSV of posterior vulnerability over a grid")
    sweep.add_argument("--mech", action="append", required=True,
                       choices=sorted(PIPELINES))
    sweep.add_argument("--n-start", type=int, required=True)
    sweep.add_argument("--n-end", type=int, required=True)
    sweep.add_argument("--n-step", type=int, default=1)
    sweep.add_argument("--k", type=int, default=2)
    sweep.add_argument("--method", default="closed",
                       choices=["closed", "sum", "oracle", "approx"])
    _p_flags(sweep, plural=True)
    _common_flags(sweep)
    sweep.set_defaults(func=cmd_sweep)

    abo = subs.add_parser("abo", help="all-but-one adversary vulnerability")
    abo.add_argument("--n", type=int, required=True)
    known = abo.add_mutually_exclusive_group(required=True)
    known.add_argument("--known-a", type=int,
                       help="count of 'a' among the n-1 known records")
    known.add_argument("--sweep-known", action="store_true",
                       help="CSV sweeping the known composition from 0%% to 100%%")
    _p_flags(abo, plural=True)
    _common_flags(abo)
    abo.set_defaults(func=cmd_abo)

    channel = subs.add_parser("channel", help="CSV dump of a channel matrix")
    channel.add_argument("--kind", required=True, choices=[
        "krr", "krr-reduced", "shuffle", "shuffle-reduced", "ns", "sn", "ns-reduced",
    ])
    channel.add_argument("--n", type=int, required=True)
    channel.add_argument("--k", type=int, default=2)
    _p_flags(channel)
    _common_flags(channel)
    channel.set_defaults(func=cmd_channel)

    check = subs.add_parser("check", help="run an invariant suite")
    check.add_argument("--suite", required=True, choices=sorted(checks.SUITES))
    check.add_argument("--max-n", type=int, default=None)
    _common_flags(check)
    check.set_defaults(func=cmd_check)

    return parser


def _resolve_p(args, k: int):
    """Single-p commands: the scalar or None if neither flag was given."""
    if args.p is not None:
        return parse_scalar(args.p, args.exact)
    if args.epsilon is not None:
        p = epsilon_to_p(args.epsilon, k)
        return Fraction(p) if args.exact else p
    return None


def _resolve_p_list(args, k: int):
    if args.p:
        return [parse_scalar(text, args.exact) for text in args.p]
    if args.epsilon:
        ps = [epsilon_to_p(e, k) for e in args.epsilon]
        return [Fraction(p) if args.exact else p for p in ps]
    return []


def _fmt(value: Scalar, exact: bool) -> str:
    if exact and is_exact(value):
        return str(Fraction(value))
    return repr(float(value))


def _write(text: str, path):
    if path:
        with open(path, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _posterior(mech: str, n: int, k: int, p, method: str, exact: bool) -> Scalar:
    if method == "oracle":
        p_exact = None if p is None else Fraction(p)
        return oracle_posterior(n, k, PIPELINES[mech], p_exact)
    spec = cf.MechanismSpec(mech, n, k, p)
    return cf.posterior_for(spec, method=method, exact=exact or None)


def cmd_vuln(args) -> int:
    p = _resolve_p(args, args.k)
    if args.mech != "shuffle" and p is None:
        raise UsageError("--p or --epsilon is required for mechanism %r" % args.mech)
    posterior = _posterior(args.mech, args.n, args.k, p, args.method, args.exact)
    prior = Fraction(1, args.k) if args.exact else 1.0 / args.k
    mult = (
        Fraction(posterior) / prior
        if args.exact and is_exact(posterior)
        else float(posterior) * args.k
    )
    add = (
        Fraction(posterior) - prior
        if args.exact and is_exact(posterior)
        else float(posterior) - 1.0 / args.k
    )
    if p is None:
        p_text = eps_text = "-"
    else:
        p_text = _fmt(p, args.exact)
        eps_text = "inf" if p == 1 else repr(p_to_epsilon(p, args.k))
    lines = [
        "mechanism: %s" % args.mech,
        "n: %d" % args.n,
        "k: %d" % args.k,
        "p: %s" % p_text,
        "epsilon: %s" % eps_text,
        "method: %s" % args.method,
        "prior_v: %s" % _fmt(prior, args.exact),
        "posterior_v: %s" % _fmt(posterior, args.exact),
        "mult_leakage: %s" % _fmt(mult, args.exact),
        "add_leakage: %s" % _fmt(add, args.exact),
    ]
    _write("\n".join(lines) + "\n", args.out)
    return 0


def cmd_sweep(args) -> int:
    if args.n_step < 1:
        raise UsageError("--n-step must be positive")
    p_list = _resolve_p_list(args, args.k)
    mechs = sorted(set(args.mech))
    if any(m != "shuffle" for m in mechs) and not p_list:
        raise UsageError("--p or --epsilon is required unless only shuffling is swept")
    ns = range(args.n_start, args.n_end + 1, args.n_step)
    rows = []
    for mech in mechs:
        grid_ps = [None] if mech == "shuffle" else sorted(p_list)
        for n in ns:
            for p in grid_ps:
                v = _posterior(mech, n, args.k, p, args.method, args.exact)
                rows.append((
                    mech, n, args.k,
                    "" if p is None else repr(float(p)),
                    args.method, _fmt(v, args.exact),
                ))
    lines = ["mechanism,n,k,p,method,posterior_v"]
    lines += ["%s,%d,%d,%s,%s,%s" % row for row in rows]
    _write("\n".join(lines) + "\n", args.out)
    return 0


def cmd_abo(args) -> int:
    p_list = _resolve_p_list(args, 2)
    if not p_list:
        raise UsageError("--p or --epsilon is required")
    if args.known_a is not None:
        if len(p_list) != 1:
            raise UsageError("a single p is required unless sweeping")
        scenario = AboScenario(args.n, p_list[0], args.known_a)
        value = abo_posterior(scenario)
        lines = [
            "n: %d" % args.n,
            "p: %s" % _fmt(p_list[0], args.exact),
            "known_a: %d" % args.known_a,
            "abo_posterior_v: %s" % _fmt(value, args.exact),
        ]
        _write("\n".join(lines) + "\n", args.out)
        return 0
    if args.n < 2:
        raise UsageError("--sweep-known needs n >= 2")
    lines = ["known_a_fraction,p,abo_posterior_v"]
    for p in sorted(p_list):
        for known_a in range(args.n):
            value = abo_posterior(AboScenario(args.n, p, known_a))
            lines.append("%s,%s,%s" % (
                repr(known_a / (args.n - 1)), repr(float(p)), _fmt(value, args.exact),
            ))
    _write("\n".join(lines) + "\n", args.out)
    return 0


def cmd_channel(args) -> int:
    kind = args.kind
    p = _resolve_p(args, args.k)
    needs_p = kind in ("krr", "krr-reduced", "ns", "sn", "ns-reduced")
    if needs_p and p is None:
        raise UsageError("--p or --epsilon is required for kind %r" % kind)
    n, k, cap = args.n, args.k, args.cap
    if kind == "krr":
        chan = build_krr(n, k, p, cap)
    elif kind == "krr-reduced":
        chan = build_krr_reduced(n, k, p, cap)
    elif kind == "shuffle":
        chan = build_shuffle_full(n, k, cap)
    elif kind == "shuffle-reduced":
        chan = build_shuffle_reduced(n, k, cap)
    elif kind == "ns":
        chan = cascade(build_krr(n, k, p, cap), build_shuffle_full(n, k, cap))
    elif kind == "sn":
        chan = cascade(build_shuffle_full(n, k, cap), build_krr(n, k, p, cap))
    else:  # ns-reduced
        chan = cascade(build_krr(n, k, p, cap), build_shuffle_reduced(n, k, cap))
    _write(chan.to_csv(exact=args.exact), args.out)
    return 0


def cmd_check(args) -> int:
    results = checks.run_suite(args.suite, args.max_n)
    lines = []
    for r in results:
        if r.passed:
            lines.append("PASS %s" % r.name)
        else:
            lines.append("FAIL %s%s" % (r.name, " (%s)" % r.detail if r.detail else ""))
    failed = sum(1 for r in results if not r.passed)
    lines.append("%d checks, %d failed" % (len(results), failed))
    _write("\n".join(lines) + "\n", args.out)
    return 3 if failed else 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except CapExceededError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
