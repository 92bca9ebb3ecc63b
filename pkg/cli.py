"""
Command-line front end: inspect doubles, run forbidding transitions,
sweep phase diagrams, verify bundled transition scripts, export theories.
"""
import argparse
import json
import logging
import sys
from typing import List, Optional

from catalog import builtin_entries, entry_export
from config import APP_VERSION, configure_logging
from errors import INPUT_ERRORS, AnyonError, NoValidTheory, ScriptStepFailed
from flavor_diagram import build_diagram, export_diagram, projector_images, spec_from_names
from forbid_engine import (
    double_theory,
    enumerate_diagram,
    load_scripts,
    run_auto,
    run_script,
    script_spec,
)
from group_core import resolve_group
from modular_data import export_theory, validate_theory
from utils import render_diagram, render_phase_table, render_report, render_theory

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_NO_THEORY = 0, 1, 2, 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="anyons", description=__doc__.strip())
    parser.add_argument("--log-level", default=None)
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p, group=True):
        if group:
            p.add_argument("group", help="preset name (z2, z3, s3) or group JSON file")
        p.add_argument("--format", choices=["markdown", "json"], default="markdown")
        p.add_argument("--out", default=None, help="write output to PATH instead of stdout")
        p.add_argument("--quiet", action="store_true", help="omit the version header line")
        return p

    common(sub.add_parser("inspect", help="anyon table, S, T, fusion and flavor diagram"))
    p = common(sub.add_parser("forbid", help="forbid classes/irreps and report the transition"))
    p.add_argument("--class", dest="classes", action="append", default=[])
    p.add_argument("--irrep", dest="irreps", action="append", default=[])
    p.add_argument("--mode", choices=["auto", "script"], default="auto")
    common(sub.add_parser("diagram", help="phase diagram over every forbid subset"))
    p = common(sub.add_parser("verify-scripts", help="run every bundled transition script"))
    p.add_argument("--scripts-dir", default=None)
    p = common(sub.add_parser("export", help="theory JSON of D(G), or the whole catalog"), group=False)
    p.add_argument("group", nargs="?", default=None)
    p.add_argument("--catalog", action="store_true")
    return parser


def _emit(args, text: str):
    if args.format == "markdown" and not args.quiet:
        text = f"anyons {APP_VERSION}\n\n{text}"
    if args.out:
        with open(args.out, "w") as f:
            f.write(text + "\n")
    else:
        print(text)


def cmd_inspect(args) -> int:
    G = resolve_group(args.group)
    theory = double_theory(G)
    if args.format == "json":
        _emit(args, export_theory(theory).model_dump_json(indent=2))
        return EXIT_OK
    report = validate_theory(theory)
    rows = ["| anyon | kind | dim |", "|---|---|---|"]
    rows += [f"| {a.display_name} | {a.kind} | {int(round(d))} |" for a, d in zip(theory.anyons, theory.dims)]
    flux, charge = projector_images(G)
    images = [f"- P_{k} -> {', '.join(v)}" for k, v in flux.items()]
    images += [f"- P_{k} -> {', '.join(v)}" for k, v in charge.items()]
    checks = ", ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in report.checks.items())
    text = "\n\n".join([render_theory(theory), "## Anyons", "\n".join(rows),
                        "## Projector images", "\n".join(images),
                        render_diagram(export_diagram(build_diagram(G))), f"checks: {checks}"])
    _emit(args, text)
    return EXIT_OK


def cmd_forbid(args) -> int:
    G = resolve_group(args.group)
    spec = spec_from_names(G, args.classes, args.irreps)
    if args.mode == "script":
        matches = [s for s in load_scripts(G.name) if script_spec(G, s) == spec]
        if not matches:
            print(f"❌ no transition script for {args.classes + args.irreps}", file=sys.stderr)
            return EXIT_INPUT
        report = run_script(G, spec, matches[0])
    else:
        report = run_auto(G, spec)
    _emit(args, report.model_dump_json(indent=2) if args.format == "json" else render_report(report))
    return EXIT_OK


def cmd_diagram(args) -> int:
    G = resolve_group(args.group)
    cells = enumerate_diagram(G)
    if args.format == "json":
        _emit(args, json.dumps([c.model_dump() for c in cells], indent=2))
    else:
        _emit(args, render_phase_table(G.name, cells))
    return EXIT_OK


def cmd_verify_scripts(args) -> int:
    G = resolve_group(args.group)
    scripts = load_scripts(G.name, args.scripts_dir)
    lines, failures = [], 0
    for script in scripts:
        try:
            report = run_script(G, script_spec(G, script), script)
            lines.append(f"✅ {script.title}: {report.final.display_name}")
        except (ScriptStepFailed, AnyonError) as e:
            failures += 1
            lines.append(f"❌ {script.title}: {e}")
            diff = getattr(e, "diff", None)
            if diff:
                lines.append(f"   diff: {diff}")
    lines.append(f"📊 {len(scripts) - failures}/{len(scripts)} scripts pass")
    if args.format == "json":
        _emit(args, json.dumps({"total": len(scripts), "failed": failures, "lines": lines}, indent=2))
    else:
        _emit(args, "\n".join(lines))
    return EXIT_OK if failures == 0 else EXIT_FAILED


def cmd_export(args) -> int:
    if args.catalog:
        payload = [entry_export(e).model_dump() for e in builtin_entries()]
        _emit(args, json.dumps(payload, indent=2))
        return EXIT_OK
    if not args.group:
        print("❌ export needs a group or --catalog", file=sys.stderr)
        return EXIT_INPUT
    _emit(args, export_theory(double_theory(resolve_group(args.group))).model_dump_json(indent=2))
    return EXIT_OK


COMMANDS = {
    "inspect": cmd_inspect,
    "forbid": cmd_forbid,
    "diagram": cmd_diagram,
    "verify-scripts": cmd_verify_scripts,
    "export": cmd_export,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    if args.verb == "export":
        args.format = "json"
    try:
        return COMMANDS[args.verb](args)
    except INPUT_ERRORS as e:
        print(f"❌ {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INPUT
    except NoValidTheory as e:
        print(f"❌ {e}", file=sys.stderr)
        if e.report is not None:
            print(render_report(e.report), file=sys.stderr)
        return EXIT_NO_THEORY
    except AnyonError as e:
        print(f"❌ {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
