"""Command-line front end.

Every subcommand takes a rule as its first positional argument: either a
built-in fixture name (lattes2x2, barycentric, z2m1, grid:P:Q, z4rays for
the curve search) or a path to a rule file. Results go to stdout,
diagnostics to stderr. Exit codes: 0 success, 1 validation or computation
failure, 2 usage error, 3 resource cap hit. With --json-errors failures
are mirrored as one JSON object on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from fractions import Fraction
from pathlib import Path

from . import curves as curves_mod
from .diagnostics import (
    BadGridParams,
    EngineError,
    InvalidComplex,
    ResourceLimit,
    UnknownFixture,
)
from .fixtures import fixture
from .expansion import (
    brute_force_Dn,
    chain_distance,
    compute_Dn,
    expansion_report,
    orbit_report,
    vertex_m_value,
)
from .export import dump_complex, rational_str, sft_to_dot, sft_to_json
from .measure import closed_form_counts, entropy_report, measure_model, tile_mass
from .render import render_svg
from .rules import LabeledSkeleton, SubdivisionRule, TileInterior, parse_rule
from .subdivision import address_of, generate, sft_matrix


class UsageError(Exception):
    pass


def resolve_subject(token: str) -> SubdivisionRule | LabeledSkeleton:
    try:
        return fixture(token)
    except UnknownFixture:
        pass
    path = Path(token)
    if not path.is_file():
        raise UsageError(f"{token!r} is neither a fixture name nor a rule file")
    return parse_rule(path.read_text())


def resolve_rule(token: str) -> SubdivisionRule:
    subject = resolve_subject(token)
    if not isinstance(subject, SubdivisionRule):
        raise UsageError(f"{token!r} is a bare skeleton, not a subdivision rule")
    return subject


def _print(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_validate(args) -> int:
    try:
        subject = resolve_subject(args.rule)
    except InvalidComplex as e:
        for d in e.diagnostics:
            sys.stderr.write(d.render() + "\n")
        return 1
    kind = "rule" if isinstance(subject, SubdivisionRule) else "skeleton"
    _print(f"ok: {subject.name} is a valid {kind}")
    return 0


def cmd_gen(args) -> int:
    lc = generate(resolve_rule(args.rule), args.level)
    text = dump_complex(lc)
    if args.out:
        Path(args.out).write_text(text)
        _print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_stats(args) -> int:
    rule = resolve_rule(args.rule)
    lc = generate(rule, args.level)
    cx = lc.complex
    nt, ne, nv = len(cx.tiles), len(cx.edges), len(cx.vertex_ids)
    model = measure_model(rule)
    wk, bk, wpk, bpk = closed_form_counts(model, args.level)
    by_pair = {("w", "w"): 0, ("w", "b"): 0, ("b", "w"): 0, ("b", "b"): 0}
    for t in cx.tiles:
        anc = lc.tile_loc0[t]
        assert isinstance(anc, TileInterior)
        by_pair[(anc.color, lc.tile_color[t])] += 1
    ok = (
        nt == 2 * rule.deg**args.level
        and ne == rule.k * rule.deg**args.level
        and nv == (rule.k - 2) * rule.deg**args.level + 2
        and (wk, bk, wpk, bpk)
        == (
            by_pair[("w", "w")],
            by_pair[("w", "b")],
            by_pair[("b", "w")],
            by_pair[("b", "b")],
        )
    )
    _print(
        f"tiles {nt}, edges {ne}, vertices {nv}, "
        f"closed-form {'OK' if ok else 'MISMATCH'}"
    )
    return 0 if ok else 1


def cmd_dn(args) -> int:
    rule = resolve_rule(args.rule)
    bad = False
    for n in range(1, args.max + 1):
        dn = compute_Dn(rule, n)
        line = f"D_{n} = {dn}"
        if args.oracle:
            oracle = brute_force_Dn(rule, n)
            if oracle == dn:
                line += " (oracle agrees)"
            else:
                line += f" (oracle DISAGREES: {oracle})"
                bad = True
        _print(line)
    return 1 if bad else 0


def cmd_lambda0(args) -> int:
    report = expansion_report(resolve_rule(args.rule), args.max)
    _print(json.dumps(asdict(report), indent=2))
    return 0


def cmd_measure(args) -> int:
    rule = resolve_rule(args.rule)
    model = measure_model(rule)
    if args.address:
        mass = tile_mass(model, args.address)
        _print(json.dumps({"address": args.address, "mass": rational_str(mass)}, indent=2))
        return 0
    lc = generate(rule, args.level)
    masses = {}
    total = Fraction(0)
    for t in sorted(lc.complex.tiles):
        m = tile_mass(model, address_of(lc, t))
        masses[t] = rational_str(m)
        total += m
    _print(
        json.dumps(
            {"level": args.level, "total": rational_str(total), "masses": masses},
            indent=2,
        )
    )
    return 0


def cmd_degrees(args) -> int:
    report = orbit_report(resolve_rule(args.rule))
    obj = asdict(report)
    obj["critical"] = sorted(report.critical)
    _print(json.dumps(obj, indent=2))
    return 0


def cmd_sft(args) -> int:
    m = sft_matrix(resolve_rule(args.rule))
    _print(json.dumps(sft_to_json(m), indent=2))
    if args.dot:
        Path(args.dot).write_text(sft_to_dot(m))
        sys.stderr.write(f"wrote {args.dot}\n")
    return 0


def _load_spec(rule: SubdivisionRule, token: str) -> curves_mod.ReplacementSpec:
    if token == "identity":
        return curves_mod.identity_spec(rule)
    path = Path(token)
    if not path.is_file():
        raise UsageError(f"spec file {token!r} not found (or pass 'identity')")
    return curves_mod.parse_replacement_spec(rule, path.read_text())


def cmd_curve(args) -> int:
    rule = resolve_rule(args.rule)
    spec = _load_spec(rule, args.spec)
    tower = curves_mod.iterate_curve(rule, spec, args.iters)
    try:
        fires = curves_mod.expansion_for_spec(rule, spec, args.iters)
    except ResourceLimit:
        fires = None
    obj = {
        "rule": rule.name,
        "completed": tower.completed,
        "lengths": [len(c.walk) for c in tower.curves],
        "steps": [
            {
                "level": st.new_level,
                "jordan": st.jordan,
                "containment": st.containment_ok,
                "diagnostics": [d.render() for d in st.diagnostics],
            }
            for st in tower.steps
        ],
        "expansion_fires_at": fires,
    }
    _print(json.dumps(obj, indent=2))
    return 0


def cmd_find_curves(args) -> int:
    subject = resolve_subject(args.rule)
    if isinstance(subject, SubdivisionRule) and args.level != 1:
        lc = generate(subject, args.level)
        found = curves_mod.find_candidate_curves(
            lc,
            require_no_tile_joins=args.filter_joins,
            max_curves=args.max_curves,
            level=args.level,
        )
    else:
        found = curves_mod.find_candidate_curves(
            subject,
            require_no_tile_joins=args.filter_joins,
            max_curves=args.max_curves,
        )
    obj = {
        "count": len(found),
        "curves": [[r.signed() for r in c.walk] for c in found],
    }
    _print(json.dumps(obj, indent=2))
    return 0


def cmd_metric(args) -> int:
    rule = resolve_rule(args.rule)
    lam = Fraction(args.lam)
    lc = generate(rule, args.level)
    vs = sorted(lc.complex.vertex_ids)
    if len(vs) > args.samples:
        stride = len(vs) / args.samples
        vs = [vs[int(i * stride)] for i in range(args.samples)]
    rows = []
    violations = 0
    for i, u in enumerate(vs):
        for v in vs[i + 1 :]:
            m = vertex_m_value(lc, u, v)
            d = chain_distance(lc, u, v, lam)
            ok = Fraction(1) / lam ** (m + 1) <= d <= 2 / lam**m
            violations += 0 if ok else 1
            rows.append((u, v, m, d, ok))
    width = max(len(v) for v in vs)
    _print(f"{'u':<{width}} {'v':<{width}} {'m':>3}  distance (flag = outside [L^-m-1, 2 L^-m])")
    for u, v, m, d, ok in rows:
        tag = "" if ok else "  VIOLATION"
        _print(f"{u:<{width}} {v:<{width}} {m:>3}  {d}{tag}")
    _print(f"{violations} violation(s) in {len(rows)} sampled pairs")
    return 0


def cmd_render(args) -> int:
    lc = generate(resolve_rule(args.rule), args.level)
    Path(args.out).write_text(render_svg(lc))
    _print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="twotile",
        description="Two-tile subdivision rules: generation, invariants, rendering.",
    )
    p.add_argument(
        "--json-errors",
        action="store_true",
        help="mirror failures as a JSON object on stderr",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def cmd(name, fn, help):
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(fn=fn)
        sp.add_argument("rule", help="fixture name or rule file")
        return sp

    cmd("validate", cmd_validate, "check a rule file or fixture")

    sp = cmd("gen", cmd_gen, "generate a level and export JSON")
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--out")

    sp = cmd("stats", cmd_stats, "cell counts with closed-form cross-check")
    sp.add_argument("--level", type=int, required=True)

    sp = cmd("dn", cmd_dn, "expansion numbers D_1..D_N")
    sp.add_argument("--max", type=int, required=True)
    sp.add_argument("--oracle", action="store_true")

    sp = cmd("lambda0", cmd_lambda0, "expansion factor report")
    sp.add_argument("--max", type=int, required=True)

    sp = cmd("measure", cmd_measure, "tile masses of the canonical measure")
    sp.add_argument("--level", type=int, default=1)
    sp.add_argument("--address")

    cmd("degrees", cmd_degrees, "vertex orbit and local degrees")

    sp = cmd("sft", cmd_sft, "subshift transition matrix")
    sp.add_argument("--dot", help="also write the digraph in DOT form")

    sp = cmd("curve", cmd_curve, "iterate a replacement spec")
    sp.add_argument("--spec", required=True, help="spec file, or 'identity'")
    sp.add_argument("--iters", type=int, required=True)

    sp = cmd("find-curves", cmd_find_curves, "enumerate candidate curves")
    sp.add_argument("--level", type=int, default=1)
    sp.add_argument("--filter-joins", action="store_true")
    sp.add_argument("--max-curves", type=int, dest="max_curves")

    sp = cmd("metric", cmd_metric, "sampled chain-metric table")
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--lambda", dest="lam", required=True)
    sp.add_argument("--samples", type=int, default=10)

    sp = cmd("render", cmd_render, "two-panel SVG of a level")
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--out", required=True)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as e:
        _fail(args, "UsageError", str(e))
        return 2
    except BadGridParams as e:
        _fail(args, e.code, str(e))
        return 2
    except ResourceLimit as e:
        _fail(args, e.code, str(e))
        return 3
    except InvalidComplex as e:
        for d in e.diagnostics:
            sys.stderr.write(d.render() + "\n")
        _fail(args, e.code, str(e))
        return 1
    except EngineError as e:
        _fail(args, e.code, str(e))
        return 1
    except ValueError as e:
        _fail(args, "UsageError", str(e))
        return 2


def _fail(args, code: str, message: str) -> None:
    if getattr(args, "json_errors", False):
        sys.stderr.write(json.dumps({"error": code, "message": message}) + "\n")
    else:
        sys.stderr.write(f"{code}: {message}\n")


if __name__ == "__main__":
    sys.exit(main())
