"""Command-line front end.

Machine output (one JSON or flat-text document) goes to stdout, a short human
summary to stderr.  Errors print a single JSON line ``{"error": {...}}`` and
exit with status 2.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

from . import __version__
from .algebra import Poly, format_rational, parse_rational
from .branch import BranchParam, implicitize, newton_puiseux, normalize_branch, parse_phi_spec, puiseux_characteristic
from .corpus import random_branch, seed_from_env
from .degeneration import P1ConePair, kss_degeneration, kss_test
from .errors import CrossCheckFailed, ParseError, ValvolError
from .families import family_report, load_family
from .invariants import lct_newton_bound, lct_unibranch, local_volume_closed, minimize_nvol

Report = dict


def canonical(obj: Any) -> Any:
    """Convert to JSON-ready values; rationals become ``"p/q"`` strings."""
    if isinstance(obj, (bool, int, str)) or obj is None:
        return obj
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, Poly):
        return str(obj)
    if isinstance(obj, dict):
        return {str(canonical(k)): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    return str(obj)


def render(report: Report, fmt: str) -> str:
    data = canonical(report)
    if fmt == "json":
        return json.dumps(data, sort_keys=True, indent=2) + "\n"
    lines: list[str] = []

    def walk(prefix: str, node: Any) -> None:
        if isinstance(node, dict):
            for k in sorted(node):
                walk(f"{prefix}.{k}" if prefix else k, node[k])
        elif isinstance(node, list) and any(isinstance(v, (dict, list)) for v in node):
            for i, v in enumerate(node):
                walk(f"{prefix}[{i}]", v)
        else:
            lines.append(f"{prefix} = {json.dumps(node)}")

    walk("", data)
    return "\n".join(lines) + "\n"


def _branch_from_args(args) -> BranchParam:
    return normalize_branch(args.a, parse_phi_spec(args.phi))


def cmd_analyze(args) -> tuple[Report, str]:
    br = _branch_from_args(args)
    lam = parse_rational(args.lam)
    char = puiseux_characteristic(br)
    profile = local_volume_closed(char, lam)
    ray, value = minimize_nvol(char, lam)
    if (ray, value) != (profile.ray, profile.value):
        raise CrossCheckFailed(f"minimizer {ray}, {value} disagrees with closed form {profile.ray}, {profile.value}")
    f = implicitize(br)
    newton = lct_newton_bound(f)
    lct = lct_unibranch(char)
    if not char.is_smooth and (newton.value != lct or newton.bound_only):
        raise CrossCheckFailed(f"Newton polygon lct {newton.value} differs from {lct}")
    report = {
        "command": "analyze",
        "inputs": {"branch": br.to_json(), "lambda": lam},
        "outputs": {
            "characteristic": list(char.exponents),
            "lct": lct,
            "lct_newton": {"value": newton.value, "bound_only": newton.bound_only},
            "case": profile.case,
            "nvol": profile.value,
            "ray": list(profile.ray),
            "polarization": list(profile.polarization),
            "normalized_polarization": list(profile.normalized_polarization()),
            "equation": f,
        },
        "provenance": {"closed_form_matches_minimizer": True, "numeric_guard": True},
    }
    summary = f"char {char}  lct {lct}  nvol {profile.value}  ray {profile.ray}  ({profile.case})"
    return report, summary


def cmd_degenerate(args) -> tuple[Report, str]:
    br = _branch_from_args(args)
    lam = parse_rational(args.lam)
    res = kss_degeneration(br, lam)
    report = {
        "command": "degenerate",
        "inputs": {"branch": br.to_json(), "lambda": lam},
        "outputs": {
            "case": res.case,
            "xi": list(res.xi),
            "polarization": list(res.polarization),
            "equation": res.equation,
            "initial_form": res.initial_form,
            "central_boundary": [[g, c] for g, c in res.central_boundary],
            "kss": res.kss,
            "nvol": res.nvol,
            "rees": res.rees,
            "value_group_rank": res.value_group_rank,
        },
        "provenance": {"central_nvol_matches_closed_form": True, "initial_form_matches_cone": True},
    }
    boundary = " + ".join(f"{c}*({g})" for g, c in res.central_boundary) or "0"
    summary = f"(A^2, {boundary}; xi = {res.xi})  {res.case}  kss {res.kss}  f0 = {res.initial_form}"
    return report, summary


def _parse_orders(text: str) -> tuple[int, int]:
    try:
        a0, b0 = (int(p) for p in text.split(","))
    except ValueError as exc:
        raise ParseError(f"bad orders {text!r}; expected a0,b0") from exc
    return a0, b0


def cmd_kss(args) -> tuple[Report, str]:
    orders = _parse_orders(args.orders)
    coeffs = [parse_rational(c) for c in (args.coeff or [])]
    pair = P1ConePair(orders, tuple((f"p{i + 1}", c) for i, c in enumerate(coeffs)))
    verdict = kss_test(pair)
    report = {
        "command": "kss",
        "inputs": {"orders": list(orders), "coefficients": coeffs},
        "outputs": {
            "points": [[p, c] for p, c in pair.coefficients()],
            "beta": pair.beta(),
            "kss": verdict,
        },
        "provenance": {"criterion": "valuative, points of P^1"},
    }
    shown = ", ".join(map(format_rational, coeffs)) or "no marked points"
    return report, f"P^1 with orders {orders} and {shown}: kss {verdict}"


def cmd_family(args) -> tuple[Report, str]:
    spec = load_family(args.file)
    cutoff = parse_rational(args.cutoff)
    rep = family_report(spec, cutoff)
    flat = rep.flatness
    report = {
        "command": "family",
        "inputs": {
            "file": Path(args.file).name,
            "param": spec.param,
            "samples": list(spec.samples),
            "a": spec.a,
            "phi": [[e, c] for e, c in spec.phi],
            "lambda": spec.lam,
            "cutoff": cutoff,
        },
        "outputs": {
            "fibers": [
                {
                    "sample": r.sample,
                    "branch": r.branch.to_json(),
                    "characteristic": list(r.char.exponents),
                    "lct": r.lct,
                    "nvol": r.nvol,
                    "ray": list(r.ray),
                    "case": r.case,
                    "kss": r.kss,
                }
                for r in rep.records
            ],
            "flagged": [{"sample": s, "reason": why} for s, why in rep.flagged],
            "constant": dict(rep.constant),
            "graded_dims": [[j, list(row)] for j, row in rep.table()],
            "flat": {
                "ok": flat.ok,
                "witness": None
                if flat.witness is None
                else {"lambda": flat.witness[0], "samples": list(flat.witness[1]), "dims": list(flat.dims)},
            },
            "common_degeneration": None
            if rep.common_degeneration is None
            else dict(zip(("case", "a0", "b0", "d", "coefficient", "xi"), rep.common_degeneration)),
        },
        "provenance": {"per_fiber_degeneration_checked": True},
    }
    lines = [f"{len(rep.records)} fibers, {len(rep.flagged)} flagged"]
    lines += [f"  excluded s = {s}: {why}" for s, why in rep.flagged]
    lines.append("  constant: " + ", ".join(f"{k}={v}" for k, v in rep.constant.items()))
    if flat.witness is not None:
        lam, (s0, s1) = flat.witness
        lines.append(f"  graded dims differ at lambda = {lam}: s = {s0} vs s = {s1} -> {flat.dims}")
    if rep.common_degeneration is not None:
        case, a0, b0, d, coeff, xi = rep.common_degeneration
        lines.append(f"  common degeneration: {case}, orders ({a0}, {b0}), d = {d}, coefficient {coeff}, xi = {xi}")
    return report, "\n".join(lines)


def cmd_selftest(args) -> tuple[Report, str]:
    seed = seed_from_env()
    rng = random.Random(seed)
    counts = {"implicitize_vanishes": 0, "newton_round_trip": 0, "minimizer_closed_form": 0, "degeneration_kss": 0}
    for _ in range(args.count):
        br = random_branch(rng, max_a=4, max_b=9, extra=2, max_exp=11)
        f = implicitize(br)
        for _ in range(3):
            s = Fraction(rng.randint(-7, 7), rng.randint(1, 5))
            x, y = br.point(s)
            if f.evaluate((x, y)) != 0:
                raise CrossCheckFailed(f"implicit equation of {br} does not vanish at s = {s}")
        counts["implicitize_vanishes"] += 1
        if implicitize(newton_puiseux(f, 20)) != f:
            raise CrossCheckFailed(f"Newton-Puiseux round trip failed for {br}")
        counts["newton_round_trip"] += 1
        char = puiseux_characteristic(br)
        top = lct_unibranch(char)
        lam = top * Fraction(rng.randint(0, 19), 20)
        prof = local_volume_closed(char, lam)
        if minimize_nvol(char, lam) != (prof.ray, prof.value):
            raise CrossCheckFailed(f"minimizer disagrees with closed form for {char} at {lam}")
        counts["minimizer_closed_form"] += 1
        if not kss_degeneration(br, lam).kss:
            raise CrossCheckFailed(f"degeneration of {br} at {lam} is not K-semistable")
        counts["degeneration_kss"] += 1
    report = {
        "command": "selftest",
        "inputs": {"seed": seed, "count": args.count},
        "outputs": {"passed": counts, "ok": True},
        "provenance": {"seed_source": "VALVOL_SEED"},
    }
    return report, f"selftest seed {seed}: {args.count} random branches, all checks passed"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="valvol", description="Valuative invariants of plane curve branches.")
    parser.add_argument("--version", action="version", version=f"valvol {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    def branch_args(p):
        p.add_argument("--a", type=int, required=True, help="x = t^a")
        p.add_argument("--phi", default="", help='phi terms "e1:c1,e2:c2"')
        p.add_argument("--lambda", dest="lam", required=True, help="boundary coefficient p/q")

    p = sub.add_parser("analyze", parents=[common], help="lct, local volume and minimizer")
    branch_args(p)
    p.set_defaults(func=cmd_analyze)
    p = sub.add_parser("degenerate", parents=[common], help="K-semistable central fibre")
    branch_args(p)
    p.set_defaults(func=cmd_degenerate)
    p = sub.add_parser("kss", parents=[common], help="valuative test on a marked P^1")
    p.add_argument("--orders", required=True, help="a0,b0")
    p.add_argument("--coeff", action="append", help="coefficient of a marked point (repeatable)")
    p.set_defaults(func=cmd_kss)
    p = sub.add_parser("family", parents=[common], help="constancy of invariants over a sampled family")
    p.add_argument("--file", required=True)
    p.add_argument("--cutoff", default="20", help="graded dimensions up to this value")
    p.set_defaults(func=cmd_family)
    p = sub.add_parser("selftest", parents=[common], help="seeded random cross-checks (VALVOL_SEED)")
    p.add_argument("--count", type=int, default=20)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    func: Callable = args.func
    try:
        report, summary = func(args)
    except ValvolError as exc:
        err = {"error": {"code": exc.code, "message": str(exc)}}
        sys.stdout.write(json.dumps(err, sort_keys=True) + "\n")
        print(f"valvol {args.command}: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(render(report, args.format))
    print(summary, file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
