"""Command-line entry point: ``pplus2k <subcommand> ...``.

Text output by default; ``--json`` wraps the result in a key-sorted
envelope ``{command, parameters, result, elapsed_ms}``. Exit codes: 0 ok,
1 verification or solve failure, 2 usage error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import replace
from pathlib import Path

from . import certify, construct, covers, modmath, sieve, wcps
from .errors import BudgetExceeded, NotACoverError, NotBlockedError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
SAFE_INT = 2**53


class Failure(Exception):
    """Carries output for a command whose answer is a negative verdict."""

    def __init__(self, result, text):
        super().__init__(text)
        self.result = result
        self.text = text


def jsonable(obj):
    """Render ints beyond 2**53 as decimal strings, recursively."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) >= SAFE_INT else obj
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return obj


def envelope(command: str, parameters: dict, result, elapsed_ms: int) -> str:
    doc = {
        "command": command,
        "parameters": jsonable(parameters),
        "result": jsonable(result),
        "elapsed_ms": elapsed_ms,
    }
    return json.dumps(doc, sort_keys=True)


def _int_list(values) -> list[int]:
    out = []
    for v in values:
        out += [int(x) for x in str(v).split(",") if x.strip()]
    return out


# Each handler returns (result, text); raising Failure marks a negative verdict.


def cmd_sieve(args):
    s = sieve.build(args.limit, memory_limit=args.memory_limit)
    if args.format == "bin":
        blob = s.to_bytes()
        if args.output:
            Path(args.output).write_bytes(blob)
            return {"limit": s.limit, "bytes": len(blob), "output": args.output}, f"wrote {len(blob)} bytes to {args.output}"
        sys.stdout.buffer.write(blob)
        return None, None
    result = {"limit": s.limit, "n": s.odd_values().tolist(), "r": s.counts.tolist()}
    if args.format == "json":
        args.json = True
        return result, None
    return result, s.to_csv().rstrip("\n")


def cmd_u_list(args):
    values = sieve.non_representables(sieve.build(args.limit, memory_limit=args.memory_limit))
    return {"limit": args.limit, "values": values}, " ".join(map(str, values))


def cmd_represent(args):
    hit = sieve.is_representable_direct(args.n)
    if hit is None:
        return {"n": args.n, "representable": False}, f"{args.n} is not of the form p + 2^k"
    p, k = hit
    return {"n": args.n, "representable": True, "p": p, "k": k}, f"{args.n} = {p} + 2^{k}"


def cmd_order(args):
    r = modmath.mult_order_2(args.p)
    return {"p": args.p, "order": r}, str(r)


def cmd_factor(args):
    f = modmath.factorize(args.n, rho_budget=args.rho_budget)
    text = " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in f.factors) or "1"
    return {"n": args.n, "factors": [[p, e] for p, e in f.factors]}, text


def _moduli_from(args) -> list[int]:
    if args.file:
        return covers.parse_cover(Path(args.file).read_text()).moduli
    if args.moduli:
        return list(args.moduli)
    raise ValueError("give --file or --moduli")


def cmd_cover(args):
    budget = {"node_budget": args.node_budget}
    if args.action == "verify":
        if not args.file:
            raise ValueError("cover verify needs --file")
        c = covers.parse_cover(Path(args.file).read_text())
        ok = covers.verify_cover(c)
        result = {"classes": [[cls.residue, cls.modulus] for cls in c], "lcm": c.lcm, "covers": ok}
        if not ok:
            raise Failure(result, "false")
        return result, "true"
    moduli = _moduli_from(args)
    if args.action == "search":
        residues = covers.is_coverable(moduli, **budget)
        if residues is None:
            raise Failure({"moduli": moduli, "coverable": False}, "not coverable")
        c = covers.CoverSystem.from_pairs(zip(residues, moduli))
        return (
            {"moduli": moduli, "coverable": True, "residues": list(residues)},
            covers.format_cover(c).rstrip("\n"),
        )
    minimal = covers.is_minimal_coverable(moduli, **budget)
    result = {"moduli": moduli, "minimal": minimal}
    if not minimal:
        raise Failure(result, "false")
    return result, "true"


def cmd_blocked(args):
    pair = certify.is_blocked(args.a, args.m)
    if pair is None:
        raise Failure({"a": args.a, "m": args.m, "blocked": False}, "not blocked")
    return {"a": args.a, "m": args.m, "blocked": True, "period": pair.period}, f"blocked period={pair.period}"


def cmd_residues(args):
    values = certify.blocked_residues(args.m, budget=args.budget)
    return {"m": args.m, "count": len(values), "residues": values}, "\n".join(map(str, values))


def certificate_json(cert: certify.ProgressionCertificate) -> dict:
    return {
        "a": cert.a,
        "m": cert.m,
        "period": cert.period,
        "intercepting_primes": list(cert.intercepting_primes),
        "verdict": cert.verdict,
        "verified_terms": cert.verified_terms,
        "exceptions": cert.exceptions_description,
    }


def cmd_certify(args):
    cert = certify.classify_certificate(args.a, args.m)
    if args.verify:
        done = certify.verify_terms(args.a, args.m, args.verify) if cert.is_strict else 0
        cert = replace(cert, verified_terms=done)
    lines = [
        f"verdict {cert.verdict}",
        f"period {cert.period}",
        "intercepting primes " + " ".join(map(str, cert.intercepting_primes)),
    ]
    if cert.hits:
        lines.append("exceptions " + " ".join(f"{p}+2^{k}" for p, k in cert.hits))
    return certificate_json(cert), "\n".join(lines)


def cmd_lift(args):
    fn = certify.mersenne_lift if args.mersenne else certify.lift_progression
    lifted = fn(args.a, args.m, verify=args.verify)
    result = {
        "a": lifted.a,
        "modulus": lifted.modulus,
        "base_modulus": lifted.base_modulus,
        "factor": lifted.factor,
        "verified_terms": lifted.verified_terms,
    }
    return result, f"{lifted.modulus}h + {lifted.a} (verified {lifted.verified_terms} terms)"


def cmd_expcover(args):
    cover = certify.parse_exponent_cover(Path(args.file).read_text())
    a, m = certify.exponent_cover_to_residue(cover)
    return {"a": a, "m": m}, f"{a} mod {m}"


def cmd_w1(args):
    res = certify.w1_search(args.a, args.order_bound, node_budget=args.node_budget)
    result = {
        "a": res.a,
        "status": res.status,
        "m": res.m,
        "primes": list(res.primes),
        "witness_k": res.witness_k,
        "subsets_examined": res.subsets_examined,
        "reason": res.reason,
    }
    if res.status == "certificate":
        text = f"certificate m={res.m} primes " + " ".join(map(str, res.primes))
    elif res.status == "proven-W2":
        text = f"proven-W2 ({res.reason})"
    else:
        text = f"unknown ({res.reason})"
    return result, text


def cmd_wcps(args):
    res = wcps.min_wcps_search(args.order_bound, args.product_cap, node_budget=args.node_budget)
    result = res.to_dict()
    return result, json.dumps(jsonable(result), sort_keys=True, indent=2)


def cmd_construct(args):
    alternates = {}
    for item in args.alt or []:
        i, p = item.split("=")
        alternates[int(i)] = int(p)
    e = construct.construct(args.moduli, alternates)
    report = construct.verify_construction(e) if args.verify else None
    result = construct.report_json(e, report)
    text = json.dumps(result, sort_keys=True, indent=2)
    if report is not None and not report.ok:
        raise Failure(result, text)
    return result, text


def cmd_stats(args):
    m = sieve.moments(sieve.build(args.limit, memory_limit=args.memory_limit))
    prop = m.representable_proportion
    result = {
        "limit": args.limit,
        "sum_r": m.sum_r,
        "sum_r_squared": m.sum_r_squared,
        "representable": m.representable,
        "total": m.total,
        "proportion": float(prop),
        "proportion_exact": f"{prop.numerator}/{prop.denominator}",
        "sum_r_squared_over_limit": m.sum_r_squared / args.limit,
    }
    text = "\n".join(f"{k} {result[k]}" for k in result)
    return result, text


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON envelope")
    common.add_argument(
        "--threads", type=int, default=os.cpu_count() or 1,
        help="worker threads (all operations currently run on one; output never depends on it)",
    )
    mem = argparse.ArgumentParser(add_help=False)
    mem.add_argument("--memory-limit", type=int, default=sieve.DEFAULT_MEMORY_LIMIT)
    nodes = argparse.ArgumentParser(add_help=False)
    nodes.add_argument("--node-budget", type=int, default=covers.DEFAULT_NODE_BUDGET)

    parser = argparse.ArgumentParser(prog="pplus2k", description="Sums p + 2^k: sieves, covers and certificates.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, parents=(), **kw):
        p = sub.add_parser(name, parents=[common, *parents], **kw)
        p.set_defaults(func=func)
        return p

    p = add("sieve", cmd_sieve, [mem], help="tabulate r(n) for odd n <= N")
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--format", choices=["csv", "json", "bin"], default="csv")
    p.add_argument("--output", help="file for --format bin (stdout otherwise)")

    p = add("u-list", cmd_u_list, [mem], help="odd n <= N with no representation")
    p.add_argument("--limit", type=int, required=True)

    p = add("represent", cmd_represent, help="direct representability test")
    p.add_argument("--n", type=int, required=True)

    p = add("order", cmd_order, help="multiplicative order of 2 mod an odd prime")
    p.add_argument("--p", type=int, required=True)

    p = add("factor", cmd_factor, help="prime factorization")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rho-budget", type=int, default=modmath.DEFAULT_RHO_BUDGET)

    p = add("cover", cmd_cover, [nodes], help="verify a cover, or search/minimality for moduli")
    p.add_argument("action", choices=["verify", "search", "minimal"])
    p.add_argument("--file")
    p.add_argument("--moduli", nargs="+")

    p = add("blocked", cmd_blocked, help="is gcd(a - 2^k, m) > 1 for all k >= 1")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--m", type=int, required=True)

    p = add("residues", cmd_residues, help="all blocked odd residues modulo m")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--budget", type=int, default=certify.DEFAULT_ENUMERATION_BUDGET)

    p = add("certify", cmd_certify, help="strict/quasi classification of {mh + a}")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--verify", type=int, default=0, metavar="H")

    p = add("lift", cmd_lift, help="lift a blocked pair to a progression inside U")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--mersenne", action="store_true")
    p.add_argument("--verify", type=int, default=0, metavar="H")

    p = add("expcover", cmd_expcover, help="exponent cover file -> residue class")
    p.add_argument("--file", required=True)

    p = add("w1", cmd_w1, [nodes], help="bounded search for a blocking modulus")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--order-bound", type=int, required=True)

    p = add("wcps", cmd_wcps, help="least-product well-constructed prime set")
    p.add_argument("--order-bound", type=int, required=True)
    p.add_argument("--product-cap", type=int, required=True)
    p.add_argument("--node-budget", type=int, default=10**7)

    p = add("construct", cmd_construct, help="primes and residues for even moduli")
    p.add_argument("--moduli", nargs="+", required=True)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--alt", action="append", metavar="I=P", help="use prime P for index I")

    p = add("stats", cmd_stats, [mem], help="moments of r(n) and the representable share")
    p.add_argument("--limit", type=int, required=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "moduli", None):
        try:
            args.moduli = _int_list(args.moduli)
        except ValueError:
            parser.error(f"--moduli expects integers, got {args.moduli}")
    params = {k: v for k, v in vars(args).items() if k not in ("func", "json", "threads", "command")}
    start = time.perf_counter()
    code = EXIT_OK
    try:
        result, text = args.func(args)
    except Failure as fail:
        result, text, code = fail.result, fail.text, EXIT_FAIL
    except (NotBlockedError, NotACoverError) as exc:
        result, text, code = {"error": str(exc)}, f"error: {exc}", EXIT_FAIL
    except BudgetExceeded as exc:
        result, text, code = {"error": str(exc)}, f"budget exceeded: {exc}", EXIT_BUDGET
    except (ValueError, OSError) as exc:
        print(f"pplus2k {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    elapsed = int((time.perf_counter() - start) * 1000)
    if result is None and text is None:
        return code
    if args.json or text is None:
        print(envelope(args.command, params, result, elapsed))
    else:
        print(text, file=sys.stderr if code == EXIT_BUDGET else sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
