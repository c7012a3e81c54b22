"""Command-line front end.

Exit codes: 0 success, 1 usage or label syntax error, 2 domain error
(invalid level, degenerate parameter, out-of-scope request), 3 internal
invariant failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import admissible as adm
from .errors import DomainError, InvariantError, LabelSyntaxError
from .rootdata import (
    M32, Coweight, Level, Weight, central_charge, conformal_weight, d6_from_word,
)

SCHEMA_VERSION = 1
DEFAULT_RADIUS = 3
ENV_TRUNCATION = "SL3MM_TRUNCATION"

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_INVARIANT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def truncation(default: int = DEFAULT_RADIUS) -> int:
    """The truncation radius, overridable through SL3MM_TRUNCATION."""
    raw = os.environ.get(ENV_TRUNCATION)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"{ENV_TRUNCATION} must be an integer, got {raw!r}")
    if value < 0:
        raise UsageError(f"{ENV_TRUNCATION} must be nonnegative")
    return value


def _fr(x: Fraction) -> str:
    return str(Fraction(x))


def _w(lam: Weight) -> list[str]:
    return [_fr(lam.d1), _fr(lam.d2)]


def _level(args) -> Level:
    lvl = Level(args.u, args.v)
    lvl.require_admissible()
    return lvl


def _label(text: str, lvl: Level, reducible: bool = False):
    """Parse and validate; reducible labels pass only where the command
    decomposes them itself."""
    from .modlabel import parse_label, validate_core
    m = parse_label(text, lvl)
    if not reducible:
        validate_core(m.core, lvl)
    return m


# ---------------------------------------------------------------- subcommands

def cmd_classify(args) -> dict:
    lvl = _level(args)
    rows, table = [], {}
    for a in adm.enumerate_admissible(lvl):
        tag = adm.classify(a, lvl)
        lam = a.weight
        rows.append({
            "label": f"H({_fr(lam.d1)},{_fr(lam.d2)})",
            "weight": _w(lam),
            "type": a.type,
            "integral": list(a.integral),
            "fractional": list(a.fractional),
            "conformalWeight": _fr(conformal_weight(lam, lvl)),
            "flags": tag.flags(),
            "orbit": tag.orbit,
        })
        table.setdefault(",".join(map(str, a.fractional)), []).append(rows[-1]["label"])
    n_adm, n_fin, n_sig, n_r2 = adm.counts(lvl)
    return {
        "level": [lvl.u, lvl.v],
        "k": _fr(lvl.k),
        "centralCharge": _fr(central_charge(lvl)),
        "hwWeights": rows,
        "counts": {"adm": n_adm, "finiteTop": n_fin, "sigma1": n_sig, "r2": n_r2},
        "semirelaxedFamilies": n_sig,
        "relaxedFamilies": n_r2,
        "fractionalTable": table,
    }


def _text_classify(d: dict) -> str:
    lines = [f"level (u,v) = ({d['level'][0]},{d['level'][1]}), k = {d['k']}, "
             f"c = {d['centralCharge']}"]
    for r in d["hwWeights"]:
        lines.append(f"  {r['label']:<16} h = {r['conformalWeight']:<6} {r['type']:<9} "
                     f"{r['orbit']:<5} {' '.join(r['flags'])}")
    c = d["counts"]
    lines.append(f"counts: adm {c['adm']}, finite top {c['finiteTop']}, "
                 f"Sigma1 {c['sigma1']}, R2 {c['r2']}")
    return "\n".join(lines)


def cmd_canon(args) -> dict:
    from .modlabel import canonicalize
    lvl = _level(args)
    m = _label(args.label, lvl)
    return {"input": args.label, "canonical": str(canonicalize(m, lvl))}


def cmd_twist(args) -> dict:
    from .modlabel import canonicalize, twist
    lvl = _level(args)
    try:
        g = d6_from_word(args.element.replace(",", " ").split())
    except ValueError as exc:
        raise LabelSyntaxError(str(exc))
    m = _label(args.label, lvl)
    return {"element": g.word(), "label": str(m), "result": str(canonicalize(twist(g, m), lvl))}


def cmd_flow(args) -> dict:
    from .modlabel import canonicalize, flow_apply
    lvl = _level(args)
    m = _label(args.label, lvl)
    xi = Coweight(args.c1, args.c2)
    return {"flow": [xi.c1, xi.c2], "label": str(m),
            "result": str(canonicalize(flow_apply(xi, m), lvl))}


def _class_json(c) -> list:
    return [[str(lab), n] for lab, n in c.items()]


def cmd_degen(args) -> dict:
    from .degen import decompose
    lvl = _level(args)
    m = _label(args.label, lvl, reducible=True)
    return {"label": str(m), "summands": _class_json(decompose(m, lvl, args.route))}


def cmd_orbit(args) -> dict:
    """Positive-energy members of the spectral-flow orbit inside a window."""
    from .modlabel import canonicalize, flow_apply
    lvl = _level(args)
    m = _label(args.label, lvl)
    r = args.radius if args.radius is not None else truncation()
    nodes = {}
    for c1 in range(-r, r + 1):
        for c2 in range(-r, r + 1):
            xi = Coweight(c1, c2)
            c = canonicalize(flow_apply(xi, m), lvl)
            if c.flow.is_zero():
                nodes[(c1, c2)] = str(c)
    units = [(1, 0), (0, 1), (-1, 1)]
    edges = [[list(a), [a[0] + u[0], a[1] + u[1]]] for a in nodes for u in units
             if (a[0] + u[0], a[1] + u[1]) in nodes]
    return {"label": str(m), "radius": r,
            "nodes": [{"flow": list(k), "label": v} for k, v in sorted(nodes.items())],
            "edges": edges}


def cmd_fuse(args) -> dict:
    from . import fusion32
    from .modularchar import require_modular_level
    lvl = _level(args)
    require_modular_level(lvl)
    a, b = _label(args.a, lvl, True), _label(args.b, lvl, True)
    if args.resolution:
        from .degen import decompose
        prod = fusion32.fuse_class_by_resolution(decompose(a), decompose(b))
    else:
        prod = fusion32.fuse(a, b)
    return {"a": str(a), "b": str(b), "product": _class_json(prod),
            "dimension": fusion32.dimension_rep(prod)}


def cmd_smatrix(args) -> dict:
    from .modularchar import require_modular_level, s_entry, s_squared_delta, unitarity_delta
    from .torusfourier import ConeSeries
    lvl = _level(args)
    require_modular_level(lvl)
    kind = args.kind
    vals = args.args
    if kind == "entry":
        if len(vals) != 3:
            raise UsageError("smatrix entry LABEL C1 C2")
        m = _label(vals[0], lvl)
        xi2 = Coweight(int(vals[1]), int(vals[2]))
        e = s_entry(m, xi2)
        order = args.order if args.order is not None else truncation()
        poly = e.expand(order) if isinstance(e, ConeSeries) else e
        return {"kind": kind, "label": str(m), "flow": [xi2.c1, xi2.c2],
                "series": isinstance(e, ConeSeries), "order": order,
                "terms": [[[f.c1, f.c2], repr(c)] for f, c in sorted(
                    poly.terms.items(), key=lambda kv: (kv[0].c1, kv[0].c2))]}
    if kind in ("unitarity", "s2"):
        if len(vals) != 4:
            raise UsageError(f"smatrix {kind} C1 C2 D1 D2")
        x, y = Coweight(int(vals[0]), int(vals[1])), Coweight(int(vals[2]), int(vals[3]))
        d = unitarity_delta(x, y) if kind == "unitarity" else s_squared_delta(x, y)
        return {"kind": kind, "flows": [[x.c1, x.c2], [y.c1, y.c2]], "delta": repr(d)}
    raise UsageError(f"unknown smatrix kind {kind!r}; use entry, unitarity or s2")


def cmd_char(args) -> dict:
    from .modlabel import canonicalize
    from .modularchar import eta_inv_fourth, require_modular_level, top_weight_multiplicity
    lvl = _level(args)
    require_modular_level(lvl)
    m = canonicalize(_label(args.label, lvl), lvl)
    if m.kind != "Rel" or not m.flow.is_zero():
        raise DomainError("char expects an unflowed relaxed label R[a,b]")
    h = conformal_weight(m.core.lam, lvl)
    series = eta_inv_fourth(args.order)
    mult = top_weight_multiplicity()
    return {"label": str(m), "conformalWeight": _fr(h),
            "leadingExponent": _fr(h - central_charge(lvl) / 24),
            "topWeightMultiplicity": mult,
            "coset": _w(m.twist.act(m.core.mu)),
            "coefficients": [mult * c for c in series.coefficients],
            "text": str(series)}


def cmd_verify(args) -> dict:
    from .verify import run_suite
    results = run_suite(args.suite)
    return {"suite": args.suite, "passed": all(r.ok for r in results),
            "checks": [{"suite": r.suite, "name": r.name, "ok": r.ok, "detail": r.detail}
                       for r in results]}


def cmd_plot_weights(args) -> dict:
    from .degen import coset_window, top_space_support
    from .modlabel import canonicalize
    lvl = _level(args)
    if lvl != M32:
        raise DomainError("weight supports are tabulated for M(3,2) only")
    m = canonicalize(_label(args.label, lvl), lvl)
    cone = top_space_support(m)
    r = args.radius if args.radius is not None else truncation()
    pts = [nu for nu in coset_window(cone.base, r) if cone.contains(nu)]
    # Cartesian coordinates with omega1 = (1, 0), omega2 = (1/2, sqrt(3)/2)
    rows = [{"d1": _fr(p.d1), "d2": _fr(p.d2),
             "x": float(p.d1) + float(p.d2) / 2, "y": float(p.d2) * 3 ** 0.5 / 2}
            for p in pts]
    out = Path(args.out)
    if out.suffix.lower() == ".csv":
        with out.open("w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=["d1", "d2", "x", "y"])
            w.writeheader()
            w.writerows(rows)
    else:
        out.write_text(json.dumps({"schemaVersion": SCHEMA_VERSION, "label": str(m),
                                   "points": rows}, indent=2))
    return {"label": str(m), "points": len(rows), "out": str(out)}


# ---------------------------------------------------------------- parser

def _add_level(p: argparse.ArgumentParser) -> None:
    p.add_argument("--u", type=int, default=3)
    p.add_argument("--v", type=int, default=2)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sl3mm", description="Admissible-level sl3 minimal models.")
    parser.add_argument("--format", choices=["text", "json"], default="text")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--format", choices=["text", "json"], default=argparse.SUPPRESS)
        p.set_defaults(func=fn)
        return p

    p = add("classify", cmd_classify, "admissible weights, counts and orbit tags")
    p.add_argument("level", nargs="*", type=int, metavar="U V")
    _add_level(p)
    p = add("canon", cmd_canon, "canonical form of a label")
    p.add_argument("label")
    _add_level(p)
    p = add("twist", cmd_twist, "apply a D6 element given as a word")
    p.add_argument("element")
    p.add_argument("label")
    _add_level(p)
    p = add("flow", cmd_flow, "apply spectral flow by c1 omega1v + c2 omega2v")
    p.add_argument("c1", type=int)
    p.add_argument("c2", type=int)
    p.add_argument("label")
    _add_level(p)
    p = add("degen", cmd_degen, "decompose a possibly reducible label")
    p.add_argument("label")
    p.add_argument("--route", type=int, default=None)
    _add_level(p)
    p = add("orbit", cmd_orbit, "positive-energy spectral-flow orbit")
    p.add_argument("label")
    p.add_argument("--radius", type=int, default=None)
    _add_level(p)
    p = add("fuse", cmd_fuse, "Grothendieck fusion product (M(3,2) only)")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--resolution", action="store_true",
                   help="compute through standard expansions instead of the closed rules")
    _add_level(p)
    p = add("smatrix", cmd_smatrix, "S-matrix data: entry LABEL C1 C2 | unitarity/s2 C1 C2 D1 D2")
    p.add_argument("kind")
    p.add_argument("args", nargs="*")
    p.add_argument("--order", type=int, default=None)
    _add_level(p)
    p = add("char", cmd_char, "q-expansion of a relaxed character")
    p.add_argument("label")
    p.add_argument("--order", type=int, default=10)
    _add_level(p)
    p = add("verify", cmd_verify, "run built-in invariant checks")
    p.add_argument("--suite", default="all",
                   choices=["rootdata", "admissible", "labels", "degen", "modular",
                            "verlinde", "fusion", "all"])
    p = add("plot-weights", cmd_plot_weights, "write top-space weight supports as CSV/JSON")
    p.add_argument("label")
    p.add_argument("--out", required=True)
    p.add_argument("--radius", type=int, default=None)
    _add_level(p)
    return parser


def _render_text(command: str, d: dict) -> str:
    if command == "classify":
        return _text_classify(d)
    if command in ("canon", "twist", "flow"):
        return d.get("canonical", d.get("result"))
    if command in ("degen", "fuse"):
        key = "summands" if command == "degen" else "product"
        terms = d[key]
        return " + ".join(lab if n == 1 else f"{n} {lab}" for lab, n in terms) or "0"
    if command == "verify":
        return "\n".join(f"{'PASS' if c['ok'] else 'FAIL'} {c['suite']}.{c['name']}: {c['detail']}"
                         for c in d["checks"])
    if command == "char":
        return f"{d['label']}: h = {d['conformalWeight']}, ch ~ {d['text']}"
    return json.dumps(d, indent=2)


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        if args.command == "classify" and args.level:
            if len(args.level) != 2:
                raise UsageError("classify takes U V or --u U --v V")
            args.u, args.v = args.level
        data = args.func(args)
    except (UsageError, LabelSyntaxError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except InvariantError as exc:
        print(f"internal error: {exc}", file=err)
        return EXIT_INVARIANT
    except DomainError as exc:
        print(f"domain error: {exc}", file=err)
        return EXIT_DOMAIN
    if args.format == "json":
        print(json.dumps({"schemaVersion": SCHEMA_VERSION, "command": args.command, **data},
                         indent=2), file=out)
    else:
        print(_render_text(args.command, data), file=out)
    if args.command == "verify" and not data["passed"]:
        return EXIT_INVARIANT
    return EXIT_OK


def main() -> None:
    sys.exit(run())
