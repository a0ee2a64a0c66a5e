"""Command-line front end.

Exit status: 0 on success, 1 when an identity check fails (the failure report
is printed as JSON), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import correlation, limitshape, quasimod, theta
from .report import Report, combine

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    return vals


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _complex_list(text: str) -> list[complex]:
    try:
        return [complex(x.replace(" ", "")) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated complex numbers, got {text!r}")


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _pos(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _pos_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="selfconj", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formats=("json", "table"), default="json"):
        sp.add_argument("--format", choices=formats, default=default)
        sp.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")

    sp = sub.add_parser("expand", help="regularized n-point function")
    sp.add_argument("--n", type=_pos, required=True)
    sp.add_argument("--q-order", type=_nonneg, required=True)
    sp.add_argument("--deregularize", action="store_true")
    common(sp)

    sp = sub.add_parser("verify-qdiff", help="q-difference equation of the n-point function")
    sp.add_argument("--n", type=_pos, required=True)
    sp.add_argument("--q-order", type=_nonneg, required=True)
    sp.add_argument("--points", type=_pos, default=5)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--certify", action="store_true", help="use a certifying tensor grid of points")
    common(sp)

    for name, text in (
        ("verify-theta", "theta series identities"),
        ("verify-onepoint", "closed one-point formula"),
        ("verify-twopoint", "closed two-point formula"),
    ):
        sp = sub.add_parser(name, help=text)
        sp.add_argument("--q-order", type=_nonneg, required=True)
        common(sp)

    sp = sub.add_parser("bracket", help="q-brackets of Q-functions")
    sp.add_argument("--indices", type=_int_list, required=True)
    sp.add_argument("--q-order", type=_nonneg, required=True)
    sp.add_argument("--method", choices=("bruteforce", "closed", "extracted", "all"), default="all")
    common(sp)

    sp = sub.add_parser("decompose", help="quasimodular decomposition of a bracket")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--indices", type=_int_list)
    g.add_argument("--mu", type=_int_list)
    sp.add_argument("--weight", type=_nonneg)
    sp.add_argument("--q-order", type=_nonneg, required=True)
    common(sp)

    sp = sub.add_parser("sample", help="sample self-conjugate partitions")
    sp.add_argument("--r", type=_pos_float, required=True)
    sp.add_argument("--samples", type=_pos, default=10)
    sp.add_argument("--seed", type=int, required=True)
    common(sp, ("json", "csv", "table"))

    sp = sub.add_parser("shape", help="limit-shape convergence table")
    sp.add_argument("--r", type=_pos_float, required=True)
    sp.add_argument("--samples", type=_pos, default=200)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--epsilon", type=_pos_float, default=0.05)
    sp.add_argument("--x-grid", type=_float_list, default=[0.5, 1.0, 2.0])
    common(sp, ("csv", "json", "table"), "csv")

    sp = sub.add_parser("asymptotics", help="1/(2 sinh) asymptotics of the typical partition")
    sp.add_argument("--r", type=_float_list, default=[0.02, 0.01])
    sp.add_argument("--z", type=_complex_list, default=[0.1j])
    sp.add_argument("--l-max", type=_nonneg, default=19)
    common(sp)
    return p


# ---------------------------------------------------------------------------
# rendering


def _dump_json(data) -> str:
    return json.dumps(data, indent=2, sort_keys=False) + "\n"


def _report_table(rep: Report) -> str:
    lines = [f"{rep.identity}: {rep.status} (order {rep.order_checked})"]
    for child in rep.children:
        lines.append(f"  {child.identity}: {child.status}")
    if rep.first_failure:
        lines.append(f"  first failure: {json.dumps(rep.first_failure)}")
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _finish(text: str, data: dict, ok: bool, args) -> int:
    """Emit ``text``; on failure the JSON report alone goes to standard output."""
    if ok or (args.format == "json" and not args.out):
        _emit(text, args.out)
    elif args.out:
        _emit(text, args.out)
        sys.stdout.write(_dump_json(data))
    else:
        sys.stderr.write(text)
        sys.stdout.write(_dump_json(data))
    return EXIT_OK if ok else EXIT_FAIL


def _emit_report(rep: Report, args, extra: dict | None = None) -> int:
    data = rep.to_json_dict()
    if extra:
        data.update(extra)
    text = _report_table(rep) if args.format == "table" else _dump_json(data)
    return _finish(text, data, rep.passed, args)


# ---------------------------------------------------------------------------
# commands


def cmd_expand(args) -> int:
    s = correlation.npoint(args.n, args.q_order)
    if args.format == "table":
        lines = []
        if args.deregularize:
            for t in s.deregularize():
                den = "".join(f"(u{j + 1}-1/u{j + 1})" for j in t.denominators)
                lines.append(f"q^{Fraction(t.q, 4)}: [{t.numerator}]" + (f" / {den}" if den else ""))
        else:
            for e in sorted(s.reg.terms):
                lines.append(f"q^{Fraction(e, 4)}: {s.reg.terms[e]}")
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(_dump_json(s.to_json_dict(deregularized=args.deregularize)), args.out)
    return EXIT_OK


def cmd_verify_qdiff(args) -> int:
    rep = correlation.check_qdifference(args.n, args.q_order, args.points, args.seed, args.certify)
    return _emit_report(rep, args, {"seed": args.seed})


def cmd_verify_theta(args) -> int:
    N = 4 * args.q_order
    rep = combine("theta", N, [theta.verify_theta_identities(N), theta.verify_theta_log_derivatives(N)])
    return _emit_report(rep, args)


def cmd_verify_onepoint(args) -> int:
    return _emit_report(theta.verify_onepoint(4 * args.q_order), args)


def cmd_verify_twopoint(args) -> int:
    return _emit_report(theta.verify_twopoint(4 * args.q_order), args)


def _brackets(indices: Sequence[int], N: int, method: str) -> list[quasimod.BracketResult]:
    funcs = {
        "bruteforce": quasimod.bracket_bruteforce,
        "closed": quasimod.bracket_closed_indices,
        "extracted": quasimod.bracket_extracted,
    }
    names = list(funcs) if method == "all" else [method]
    return [funcs[m](indices, N) for m in names]


def cmd_bracket(args) -> int:
    if any(x < 0 for x in args.indices) or not args.indices:
        raise UsageError("indices must be a non-empty list of non-negative integers")
    results = _brackets(args.indices, args.q_order, args.method)
    data: dict = {"indices": list(args.indices), "q_order": args.q_order, "results": [r.to_json_dict() for r in results]}
    ok = True
    if len(results) > 1:
        base = results[0].series
        agree = all(quasimod.first_difference(base, r.series) is None for r in results[1:])
        data["agree"] = agree
        ok = agree
        w = sum(args.indices)
        dec = quasimod.decompose_quasimodular(base, w, args.q_order)
        data["decomposition"] = dec.to_json_dict()
        ok = ok and dec.success
    if args.format == "table":
        lines = [f"<{' '.join(f'Q{x}' for x in args.indices)}> through q^{args.q_order}"]
        for r in results:
            lines.append(f"  {r.method}: {[str(c) for c in r.series.q_coefficients()]}")
        if "decomposition" in data:
            d = data["decomposition"]
            lines.append(f"  weight {d['weight']} decomposition: {d['status']} {d.get('coeffs')}")
        text = "\n".join(lines) + "\n"
    else:
        text = _dump_json(data)
    return _finish(text, data, ok, args)


def cmd_decompose(args) -> int:
    indices = args.indices if args.indices is not None else [2 * x for x in args.mu]
    if any(x < 0 for x in indices) or not indices:
        raise UsageError("indices must be a non-empty list of non-negative integers")
    w = sum(indices) if args.weight is None else args.weight
    series = quasimod.bracket_bruteforce(indices, args.q_order).series
    dec = quasimod.decompose_quasimodular(series, w, args.q_order)
    data = {"indices": list(indices), **dec.to_json_dict()}
    if args.format == "table":
        text = f"weight {w}: {data['status']} {data.get('coeffs')} over {data['basis']}\n"
    else:
        text = _dump_json(data)
    return _finish(text, data, dec.success, args)


def cmd_sample(args) -> int:
    cfg = limitshape.GibbsConfig(args.r, args.seed, samples=args.samples)
    parts = [list(p.parts) for p in limitshape.sample_partitions(cfg)]
    if args.format == "csv":
        lines = ["index,size,parts,seed"]
        lines += [f"{i},{sum(p)},{' '.join(map(str, p))},{args.seed}" for i, p in enumerate(parts)]
        _emit("\n".join(lines) + "\n", args.out)
    elif args.format == "table":
        _emit("".join(f"{i}: {tuple(p)}\n" for i, p in enumerate(parts)) + f"seed {args.seed}\n", args.out)
    else:
        _emit(_dump_json({"r": args.r, "seed": args.seed, "samples": parts}), args.out)
    return EXIT_OK


def cmd_shape(args) -> int:
    cfg = limitshape.GibbsConfig(args.r, args.seed, samples=args.samples)
    rows = limitshape.convergence_experiment(cfg, args.x_grid, args.epsilon)
    if args.format == "csv":
        _emit(limitshape.rows_to_csv(rows), args.out)
    elif args.format == "json":
        _emit(_dump_json({"seed": args.seed, "rows": [r.__dict__ for r in rows]}), args.out)
    else:
        lines = [f"{'x':>6} {'within':>8} {'mean|dev|':>10}"]
        lines += [f"{r.x:6.3g} {r.fraction_within:8.3f} {r.mean_abs_dev:10.4g}" for r in rows]
        _emit("\n".join(lines) + f"\nseed {args.seed}\n", args.out)
    return EXIT_OK


def cmd_asymptotics(args) -> int:
    if args.l_max % 2 == 0:
        raise UsageError("--l-max must be odd (only odd powers of z occur)")
    rep = limitshape.verify_asymptotics(args.r, args.z, args.l_max)
    return _emit_report(rep, args)


COMMANDS = {
    "expand": cmd_expand,
    "verify-qdiff": cmd_verify_qdiff,
    "verify-theta": cmd_verify_theta,
    "verify-onepoint": cmd_verify_onepoint,
    "verify-twopoint": cmd_verify_twopoint,
    "bracket": cmd_bracket,
    "decompose": cmd_decompose,
    "sample": cmd_sample,
    "shape": cmd_shape,
    "asymptotics": cmd_asymptotics,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"{parser.prog}: error: {exc}\n")
        return EXIT_USAGE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
