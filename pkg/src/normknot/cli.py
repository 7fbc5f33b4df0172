"""Command-line front end: ``normknot {analyze,build,sweep,verify,tables}``.

Every command writes one JSON document (or markdown with ``--md``) to stdout.
Exit status: 0 ok, 1 sweep mismatch, 2 input or validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Sequence

from . import oracle
from .catalog import CatalogError, build, external_names, load_external
from .gl2rep import is_prime
from .permgroup import GroupError
from .sha import Scenario, ValidationError, full_report

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def dumps(doc: object) -> str:
    return json.dumps(doc, sort_keys=True, indent=2)


# ----------------------------------------------------------------- markdown


def _cell(x: object) -> str:
    if isinstance(x, (dict, list)):
        return json.dumps(x, sort_keys=True)
    return str(x)


def md_table(rows: list[dict], columns: Sequence[str]) -> str:
    lines = ["| " + " | ".join(columns) + " |", "|" + "---|" * len(columns)]
    for row in rows:
        lines.append("| " + " | ".join(_cell(row.get(c, "")) for c in columns) + " |")
    return "\n".join(lines)


def md_mapping(title: str, doc: dict) -> str:
    lines = [f"## {title}", ""]
    for key in sorted(doc):
        lines.append(f"- **{key}**: `{_cell(doc[key])}`")
    return "\n".join(lines)


def render_sweep_md(doc: dict) -> str:
    out = [f"## {doc['sweep']}", "", f"cells: {doc['cells']}, ok: {doc['ok']}"]
    if doc["mismatches"]:
        out += ["", md_table(doc["mismatches"], ["params", "detail", "witness"])]
    return "\n".join(out)


TABLE_COLUMNS = ["p", "order", "source", "name", "sylow_rank", "abc", "p_part", "prime_to_p", "total", "case", "nontrivial"]


def render_table_md(doc: dict) -> str:
    out = [f"## Degree {doc['degree']}", ""]
    cols = [c for c in TABLE_COLUMNS if any(c in r for r in doc["rows"])]
    out.append(md_table(doc["rows"], cols) if doc["rows"] else "(no rows)")
    for gap in doc["gaps"]:
        out.append(f"\ngap at p={gap['p']}: {gap['reason']}")
    return "\n".join(out)


# ------------------------------------------------------------------- inputs


def load_scenario(arg: str) -> Scenario:
    if arg == "generic":
        return Scenario.generic()
    try:
        data = json.loads(Path(arg).read_text())
        subgroups = [[[int(x) - 1 for x in g] for g in gens] for gens in data["subgroups"]]
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"cannot read scenario {arg!r}: {exc}") from exc
    return Scenario.of(subgroups)


def load_pair(args: argparse.Namespace):
    if args.catalog:
        try:
            c = build(args.catalog)
        except CatalogError as exc:
            raise InputError(str(exc)) from exc
        return c.G, c.H, c.label
    try:
        pairs = load_external(args.group)
        names = external_names(args.group)
    except (OSError, CatalogError, GroupError) as exc:
        raise InputError(str(exc)) from exc
    if not 0 <= args.index < len(pairs):
        raise InputError(f"--index {args.index} out of range for {len(pairs)} group(s)")
    G, H = pairs[args.index]
    return G, H, names[args.index]


def _prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from exc
    if not is_prime(p):
        raise argparse.ArgumentTypeError(f"{p} is not prime")
    return p


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


# ----------------------------------------------------------------- commands


def cmd_analyze(args: argparse.Namespace) -> tuple[int, str]:
    G, H, name = load_pair(args)
    scenario = load_scenario(args.scenario)
    try:
        report = full_report(G, H, args.p, scenario)
    except ValidationError as exc:
        doc = {"valid": False, "input": name, "p": args.p, "failures": exc.failures}
        return EXIT_INPUT, md_mapping(f"{name} (invalid)", doc) if args.md else dumps(doc)
    except GroupError as exc:
        raise InputError(f"scenario: {exc}") from exc
    doc = report.to_json()
    doc["input"] = name
    return EXIT_OK, md_mapping(f"{name} at p={args.p}", doc) if args.md else dumps(doc)


def cmd_build(args: argparse.Namespace) -> tuple[int, str]:
    try:
        c = build(args.label)
    except CatalogError as exc:
        raise InputError(str(exc)) from exc
    doc = {
        "label": c.label,
        "degree": c.degree,
        "order": c.G.order,
        "group": c.G.to_json(),
        "stabilizer": c.H.to_json(),
        "stabilizer_point": 1,
    }
    if args.check:
        for p in oracle.table_primes(c.degree):
            try:
                doc.setdefault("reports", {})[str(p)] = full_report(c.G, c.H, p).to_json()
            except ValidationError:
                continue
    return EXIT_OK, md_mapping(c.label, doc) if args.md else dumps(doc)


def _route_cell(cell: tuple[int, int]) -> oracle.SweepResult:
    return oracle.route_agreement_sweep([cell])


def _negative_cell(p: int) -> oracle.SweepResult:
    return oracle.negative_control_sweep([p])


def _fan_out(fn: Callable, cells: list, jobs: int, name: str) -> oracle.SweepResult:
    total = oracle.SweepResult(name)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(fn, cells))
    else:
        parts = [fn(c) for c in cells]
    for part in parts:
        total.extend(part)
    return total


def cmd_sweep(args: argparse.Namespace) -> tuple[int, str]:
    results = []
    if args.kind in ("routes", "all"):
        cells = oracle.route_grid(args.max_degree)
        results.append(_fan_out(_route_cell, cells, args.jobs, f"route-agreement max_degree={args.max_degree}"))
    if args.kind in ("negative", "all"):
        results.append(_fan_out(_negative_cell, args.primes, args.jobs, "negative-control degree 4p"))
    return _emit_sweeps(results, args.md)


def _emit_sweeps(results: list[oracle.SweepResult], md: bool) -> tuple[int, str]:
    docs = [r.to_json() for r in results]
    ok = all(r.ok for r in results)
    if md:
        text = "\n\n".join(render_sweep_md(d) for d in docs)
    else:
        text = dumps({"ok": ok, "sweeps": docs})
    return (EXIT_OK if ok else EXIT_MISMATCH), text


def cmd_verify(args: argparse.Namespace) -> tuple[int, str]:
    results: list[oracle.SweepResult] = []
    what = args.what
    if what in ("extremal", "all"):
        for p in args.primes:
            results.append(oracle.verify_extremal_classification(p, args.bound))
    if what in ("two-subgroups", "all"):
        for p in args.primes:
            if p > 2:
                results.append(oracle.verify_two_subgroups(p))
    if what in ("plcd", "all"):
        for p, ell in args.pairs or [(2, 3), (5, 3), (7, 3)]:
            results.append(oracle.verify_plcd(p, ell))
    if what in ("iso", "all"):
        cells = args.pairs or oracle.iso_grid(args.max_order)
        for p, ell in cells:
            results.append(oracle.verify_iso_lemmas(p, ell, args.max_order))
    return _emit_sweeps(results, args.md)


def cmd_tables(args: argparse.Namespace) -> tuple[int, str]:
    if args.source:
        try:
            pairs = load_external(args.source)
            names = external_names(args.source)
        except (OSError, CatalogError, GroupError) as exc:
            raise InputError(str(exc)) from exc
        doc = oracle.external_table(args.degree, pairs, names)
    else:
        doc = oracle.degree_table(args.degree)
    return EXIT_OK, render_table_md(doc) if args.md else dumps(doc)


def _pairs(text: str) -> list[tuple[int, int]]:
    out = []
    for chunk in text.split(";"):
        if chunk.strip():
            a, b = _int_list(chunk)
            out.append((a, b))
    return out


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="normknot", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--md", action="store_true", help="emit markdown instead of JSON")

    a = sub.add_parser("analyze", help="report the obstruction group of one pair")
    src = a.add_mutually_exclusive_group(required=True)
    src.add_argument("--group", help='JSON file {"degree": n, "generators": [[1-based images]]}')
    src.add_argument("--catalog", help="construction label, e.g. beta:p=2,l=3")
    a.add_argument("--index", type=int, default=0, help="entry to use when --group holds several groups")
    a.add_argument("--p", type=_prime, required=True)
    a.add_argument("--scenario", default="generic",
                   help='"generic" or a JSON file {"subgroups": [[[1-based images], ...], ...]}')
    common(a)
    a.set_defaults(func=cmd_analyze)

    b = sub.add_parser("build", help="print a catalog construction")
    b.add_argument("label")
    b.add_argument("--check", action="store_true", help="also analyze at every admissible prime")
    common(b)
    b.set_defaults(func=cmd_build)

    s = sub.add_parser("sweep", help="route agreement and negative-control sweeps")
    s.add_argument("--kind", choices=["routes", "negative", "all"], default="all")
    s.add_argument("--max-degree", type=int, default=65, help="largest p*l in the route grid")
    s.add_argument("--primes", type=_int_list, default=[3, 5, 7, 11, 13], help="primes for degree-4p sweeps")
    s.add_argument("--jobs", type=int, default=1)
    common(s)
    s.set_defaults(func=cmd_sweep)

    v = sub.add_parser("verify", help="brute-force checks of the GL2 classification and isomorphism results")
    v.add_argument("--what", choices=["extremal", "two-subgroups", "plcd", "iso", "all"], default="all")
    v.add_argument("--primes", type=_int_list, default=[2, 3, 5, 7, 11, 13])
    v.add_argument("--bound", type=int, default=13, help="largest l for extremality sources")
    v.add_argument("--pairs", type=_pairs, default=None, help='cells "p,l;p,l" for plcd and iso')
    v.add_argument("--max-order", type=int, default=2000)
    common(v)
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("tables", help="verdicts for all constructed pairs of one degree")
    t.add_argument("--degree", type=int, required=True)
    t.add_argument("--source", help="external JSON of transitive groups for full degree lists")
    common(t)
    t.set_defaults(func=cmd_tables)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        code, text = args.func(args)
    except InputError as exc:
        print(dumps({"error": str(exc)}), file=sys.stdout)
        print(f"normknot: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
