"""Command-line front end.

Every command prints exactly one JSON document on stdout; diagnostics and
timing go to stderr.  Exit codes: 0 success, 2 bad input or failed
precondition, 3 solve stopped by its budget.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .bounds import (
    MODES,
    BoundReport,
    eta_modulus,
    expansion_floor,
    lemma2_p_bound,
    lemma3_bound,
    refute_perfect,
    eta_interval,
)
from .families import Custom, Family, Harmonic, PowerSquares, ProfileError, validate_profile
from .model import (
    DomainError,
    PreconditionError,
    UnavailableError,
    decimal_str,
    fmt,
    is_valid,
    measures,
    positioning_from_json,
    positioning_to_json,
    rectset_from_json,
    scalar,
    validate,
)
from .render import render_svg
from .shelf import pack_strip
from .solver import Budget, min_bounding_area
from . import transforms

EXIT_OK, EXIT_INPUT, EXIT_BUDGET = 0, 2, 3


class InputError(Exception):
    pass


def _load(path: str) -> tuple[dict, str]:
    try:
        raw = Path(path).read_bytes() if path != "-" else sys.stdin.buffer.read()
        return json.loads(raw), hashlib.sha256(raw).hexdigest()
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _emit(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _budget(args) -> Budget:
    return Budget(max_nodes=args.budget_nodes, max_seconds=args.budget_seconds)


def _family(args) -> Family:
    if args.family == "harmonic":
        return Harmonic()
    if args.family == "power_squares":
        if args.t is None:
            raise InputError("power_squares needs --t")
        fam = PowerSquares(scalar(args.t), args.precision_bits)
        if not fam.c1_certified():
            raise ProfileError(f"C1 fails for t = {fam.t}: sum of squared sides diverges (need t > 1/2)")
        return fam
    if args.family == "custom":
        if not args.input:
            raise InputError("custom family needs --input with a rectangle-set document")
        doc, _ = _load(args.input)
        return Custom(rectset_from_json(doc))
    raise InputError(f"unknown family {args.family!r}")


def cmd_solve(args) -> int:
    doc, digest = _load(args.input)
    rects = rectset_from_json(doc)
    start = time.monotonic()
    res = min_bounding_area(rects, _budget(args))
    print(f"solve: n={len(rects)} nodes={res.nodes_explored} "
          f"time={time.monotonic() - start:.3f}s", file=sys.stderr)
    _emit({
        "command": "solve",
        "input_sha256": digest,
        "result": res.to_json(args.digits),
    })
    return EXIT_OK if res.proven_optimal else EXIT_BUDGET


def _interval_common(args, refute: bool) -> int:
    fam = _family(args)
    start = time.monotonic()
    if refute:
        v = refute_perfect(fam, args.prefix, args.mode, _budget(args), args.precision_bits)
        body = v.to_json(args.digits)
    else:
        body = eta_interval(fam, args.prefix, args.mode, _budget(args), args.precision_bits).to_json(args.digits)
    print(f"{'refute' if refute else 'interval'}: time={time.monotonic() - start:.3f}s", file=sys.stderr)
    _emit({
        "command": "refute" if refute else "interval",
        "family": fam.to_json(),
        "prefix": args.prefix,
        "mode": args.mode,
        "result": body,
    })
    return EXIT_OK


def cmd_interval(args) -> int:
    return _interval_common(args, refute=False)


def cmd_refute(args) -> int:
    return _interval_common(args, refute=True)


_TRANSFORMS = {
    "retract_x": ("dx",),
    "retract_y": ("dy",),
    "extend_x": ("dx",),
    "extend_y": ("dy",),
    "extend_xy": ("dx", "dy"),
    "squeeze_x": (),
    "squeeze_y": (),
    "remove_tail": ("n",),
    "scale": ("c",),
}


def _transform_bound(op: str, before, dx, dy) -> Fraction | None:
    """The area ceiling the edit is guaranteed to respect, if it has one."""
    if op in ("retract_x", "retract_y", "squeeze_x", "squeeze_y", "remove_tail"):
        return before.T
    if op == "extend_x":
        return before.T + before.q * dx
    if op == "extend_y":
        return before.T + before.p * dy
    if op == "extend_xy":
        return before.T + before.q * dx + before.p * dy + dx * dy
    return None


def cmd_transform(args) -> int:
    doc, digest = _load(args.input)
    pos = positioning_from_json(doc)
    if validate(pos):
        raise InputError(f"invalid positioning: {', '.join(validate(pos))}")
    op = args.op
    needed = _TRANSFORMS[op]
    dx = scalar(args.dx) if args.dx is not None else None
    dy = scalar(args.dy) if args.dy is not None else None
    for name in needed:
        if getattr(args, name) is None:
            raise InputError(f"{op} needs --{name}")
    fn = getattr(transforms, op)
    if op in ("retract_x", "extend_x"):
        out = fn(pos, args.index, dx)
    elif op in ("retract_y", "extend_y"):
        out = fn(pos, args.index, dy)
    elif op == "extend_xy":
        out = fn(pos, args.index, dx, dy)
    elif op == "remove_tail":
        out = fn(pos, args.n)
    elif op == "scale":
        out = fn(pos, scalar(args.c))
    else:
        out = fn(pos)
    before, after = measures(pos), measures(out)
    bound = _transform_bound(op, before, dx, dy)
    report = {
        "op": op,
        "T_before": fmt(before.T),
        "T_after": fmt(after.T),
        "T_after_decimal": decimal_str(after.T, args.digits),
        "valid": is_valid(out),
    }
    if bound is not None:
        report["T_bound"] = fmt(bound)
        report["bound_holds"] = after.T <= bound
    if op == "scale":
        report["eta_preserved"] = after.eta == before.eta
    _emit({
        "command": "transform",
        "input_sha256": digest,
        "result": report,
        "positioning": positioning_to_json(out),
    })
    return EXIT_OK


def cmd_pack(args) -> int:
    doc, digest = _load(args.input)
    rects = rectset_from_json(doc)
    a = scalar(args.strip_height)
    sp = pack_strip(rects, a)
    bound = sp.width_bound()
    _emit({
        "command": "pack",
        "input_sha256": digest,
        "result": {
            "strip_height": fmt(a),
            "achieved_width": fmt(sp.achieved_width),
            "achieved_width_decimal": decimal_str(sp.achieved_width, args.digits),
            "width_bound": fmt(bound),
            "bound_holds": sp.achieved_width <= bound,
            "valid": is_valid(sp.positioning),
        },
        "positioning": positioning_to_json(sp.positioning),
    })
    return EXIT_OK


def cmd_render(args) -> int:
    doc, _ = _load(args.input)
    pos = positioning_from_json(doc)
    problems = validate(pos)
    if problems:
        raise InputError(f"invalid positioning: {', '.join(problems)}")
    svg = render_svg(pos)
    Path(args.out).write_bytes(svg.encode("utf-8"))
    _emit({
        "command": "render",
        "out": str(args.out),
        "rect_elements": len(pos) + 1,
        "svg_sha256": hashlib.sha256(svg.encode("utf-8")).hexdigest(),
    })
    return EXIT_OK


def cmd_families_validate(args) -> int:
    if args.family == "power_squares":
        if args.t is None:
            raise InputError("power_squares needs --t")
        fam: Family = PowerSquares(scalar(args.t), args.precision_bits)
    else:
        fam = _family(args)
    rep = validate_profile(fam)
    _emit({"command": "families validate", "family": fam.to_json(), "result": rep.to_json()})
    return EXIT_OK


def _perturbation(path: str) -> transforms.Perturbation:
    doc, _ = _load(path)
    try:
        deltas = tuple((scalar(d.get("dw", "0")), scalar(d.get("dl", "0"))) for d in doc["deltas"])
    except (KeyError, TypeError, AttributeError) as exc:
        raise InputError(f"malformed perturbation document: {exc}") from exc
    return transforms.Perturbation(deltas)


def cmd_bound(args) -> int:
    doc, digest = _load(args.input)
    rects = rectset_from_json(doc)
    inputs = {"input_sha256": digest}
    pre: list[str] = []
    if args.kind == "expansion_floor":
        value = expansion_floor(rects, args.index, _budget(args))
        pre.append("canonical optimum proven")
        inputs["index"] = args.index
    else:
        if not args.perturbation:
            raise InputError(f"{args.kind} needs --perturbation")
        d = _perturbation(args.perturbation)
        d.check(rects)
        pre.append("perturbed sides positive")
        inputs["perturbation"] = [{"dw": fmt(a), "dl": fmt(b)} for a, b in d.deltas]
        if args.kind == "lemma2":
            value = lemma2_p_bound(rects, d)
        elif args.kind == "lemma3":
            value = lemma3_bound(rects, d)
        else:
            value = eta_modulus(rects, d, budget=_budget(args))
            pre.append("base T0 proven")
    _emit({"command": "bound", "result": BoundReport(args.kind, value, inputs, tuple(pre)).to_json(args.digits)})
    return EXIT_OK


def _add_budget(p) -> None:
    p.add_argument("--budget-nodes", type=int, default=None)
    p.add_argument("--budget-seconds", type=float, default=None)


def _add_family(p) -> None:
    p.add_argument("--family", required=True, choices=("harmonic", "power_squares", "custom"))
    p.add_argument("--t", default=None, help="exponent for power_squares, e.g. 3/5")
    p.add_argument("--input", default=None, help="rectangle-set JSON for custom families")
    p.add_argument("--precision-bits", type=int, default=64)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="packbound", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits", type=int, default=12, help="significant digits of decimal echoes")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common], help="exact minimum bounding area of a rectangle set")
    p.add_argument("--input", required=True)
    _add_budget(p)
    p.set_defaults(func=cmd_solve)

    for name, func in (("interval", cmd_interval), ("refute", cmd_refute)):
        p = sub.add_parser(name, parents=[common], help=f"{name} for a rectangle family")
        _add_family(p)
        p.add_argument("--prefix", type=int, required=True)
        p.add_argument("--mode", choices=MODES, default="analytic")
        _add_budget(p)
        p.set_defaults(func=func)

    p = sub.add_parser("transform", parents=[common], help="apply a positioning edit and check its area bound")
    p.add_argument("--input", required=True)
    p.add_argument("--op", required=True, choices=sorted(_TRANSFORMS))
    p.add_argument("--index", type=int, default=0)
    p.add_argument("--dx")
    p.add_argument("--dy")
    p.add_argument("--n", type=int)
    p.add_argument("--c")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("pack", parents=[common], help="column-pack rectangles into a strip")
    p.add_argument("--input", required=True)
    p.add_argument("--strip-height", required=True)
    p.set_defaults(func=cmd_pack)

    p = sub.add_parser("render", parents=[common], help="write a positioning as SVG")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("bound", parents=[common], help="evaluate a single error term")
    p.add_argument("--kind", required=True, choices=("lemma2", "lemma3", "eta_modulus", "expansion_floor"))
    p.add_argument("--input", required=True)
    p.add_argument("--perturbation", help="JSON {\"deltas\": [{\"dw\": ..., \"dl\": ...}, ...]}")
    p.add_argument("--index", type=int, default=0)
    _add_budget(p)
    p.set_defaults(func=cmd_bound)

    fam = sub.add_parser("families", help="family utilities")
    fsub = fam.add_subparsers(dest="families_command", required=True)
    p = fsub.add_parser("validate", parents=[common], help="check conditions C1/C2")
    _add_family(p)
    p.set_defaults(func=cmd_families_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, DomainError, PreconditionError, ProfileError, UnavailableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (KeyError, ValueError) as exc:
        print(f"error: malformed input: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
