"""Command line front end.

Exit codes: 0 ok, 1 malformed input, 2 validation failure; ``equiv`` adds
3 (search depth exhausted) and 4 (invariants differ).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import fixtures
from .curves import ParametricCurveSet, curves_to_diagram, SweepConfig as CurveConfig
from .diagram import (BlobDiagram, compose_star, compose_uplus, dumps, from_json, negate,
                      validate)
from .errors import (DepthExceeded, InvalidDiagram, ModblobError, NotEmbedded, NotFillable,
                     OrientationInconsistent, UnorientedInput)
from .families import PolynomialFamily, SweepConfig as FamilyConfig, extract_diagram
from .invariants import invariant_report
from .render import RenderSpec, render_svg
from .rewriting import bounded_equivalence, normalize_embedded, scramble

EXIT_OK, EXIT_MALFORMED, EXIT_INVALID, EXIT_DEPTH, EXIT_MISMATCH = 0, 1, 2, 3, 4


class _Malformed(Exception):
    pass


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except (OSError, ValueError) as exc:
        raise _Malformed(f"cannot read {path}: {exc}") from exc


def _read_diagram(path: str):
    try:
        return from_json(_read_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        raise _Malformed(f"bad diagram document {path}: {exc}") from exc


def _require_valid(x):
    rep = validate(x)
    if not rep.ok:
        raise InvalidDiagram(rep.violations)
    return x


def _emit(text: str, out=None):
    (out or sys.stdout).write(text)


def cmd_validate(args):
    x = _read_diagram(args.file)
    rep = validate(x)
    if args.json:
        _emit(json.dumps({"ok": rep.ok, "violations": [
            {"rule": v.rule, "index": v.index, "message": v.message} for v in rep]},
            sort_keys=True, indent=2) + "\n")
    else:
        _emit("ok\n" if rep.ok else "".join(f"{v}\n" for v in rep))
    return EXIT_OK if rep.ok else EXIT_INVALID


def cmd_invariants(args):
    x = _require_valid(_read_diagram(args.file))
    rep = invariant_report(x)
    if args.json:
        _emit(json.dumps(rep.to_json(), sort_keys=True, indent=2) + "\n")
    else:
        _emit(rep.table() + "\n")
    return EXIT_OK


def cmd_normalize(args):
    x = _require_valid(_read_diagram(args.file))
    if not isinstance(x, BlobDiagram):
        x = BlobDiagram.fill(x)
    out, trace = normalize_embedded(x)
    if args.trace:
        Path(args.trace).write_text(json.dumps(trace.to_json(), sort_keys=True, indent=2) + "\n")
    _emit(out.word() + "\n" if not args.json else dumps(out))
    return EXIT_OK


def cmd_equiv(args):
    a = _require_valid(_read_diagram(args.a))
    b = _require_valid(_read_diagram(args.b))
    try:
        trace = bounded_equivalence(a, b, args.depth, max_events=args.max_events)
    except DepthExceeded as exc:
        sys.stderr.write(f"inconclusive: {exc}\n")
        return EXIT_DEPTH
    if trace is None:
        sys.stderr.write("not equivalent: invariants differ\n")
        return EXIT_MISMATCH
    _emit(json.dumps(trace.to_json(), sort_keys=True, indent=2) + "\n")
    return EXIT_OK


def cmd_compose(args):
    a = _require_valid(_read_diagram(args.a))
    b = _require_valid(_read_diagram(args.b))
    op = compose_uplus if args.op == "uplus" else compose_star
    _emit(dumps(op(a, b)))
    return EXIT_OK


def cmd_negate(args):
    _emit(dumps(negate(_require_valid(_read_diagram(args.file)))))
    return EXIT_OK


def cmd_from_family(args):
    try:
        fam = PolynomialFamily.from_json(_read_json(args.file))
    except (KeyError, TypeError, ValueError) as exc:
        raise _Malformed(str(exc)) from exc
    cfg = FamilyConfig(tol=args.tol) if args.tol else FamilyConfig()
    _emit(dumps(extract_diagram(fam, cfg)))
    return EXIT_OK


def cmd_from_curves(args):
    try:
        curves = ParametricCurveSet.from_json(_read_json(args.file))
    except (KeyError, TypeError, ValueError) as exc:
        raise _Malformed(str(exc)) from exc
    cfg = CurveConfig(tol=args.tol) if args.tol else CurveConfig()
    _emit(dumps(curves_to_diagram(curves, cfg)))
    return EXIT_OK


def cmd_render(args):
    x = _read_diagram(args.file)
    svg = render_svg(x, RenderSpec(width=args.width, height=args.height))
    if args.output:
        Path(args.output).write_text(svg)
    else:
        _emit(svg)
    return EXIT_OK


def cmd_fixtures(args):
    if args.selftest:
        results = fixtures.selftest()
        for name, ok, msg in results:
            _emit(f"{'PASS' if ok else 'FAIL'} {name}: {msg}\n")
        return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_INVALID
    if args.write:
        for p in fixtures.write_all(args.write):
            _emit(f"{p}\n")
        return EXIT_OK
    if args.list or not args.name:
        _emit("".join(f"{n}\n" for n in fixtures.fixture_names()))
        return EXIT_OK
    try:
        x = fixtures.load(args.name)
    except KeyError as exc:
        raise _Malformed(str(exc)) from exc
    if args.steps:
        x = scramble(x, args.seed, args.steps)
    _emit(dumps(x))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="modblob", description="event-word doodles and blobs")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, *files):
        sp = sub.add_parser(name)
        for f in files:
            sp.add_argument(f)
        sp.add_argument("--json", action="store_true")
        sp.set_defaults(func=fn)
        return sp

    add("validate", cmd_validate, "file")
    add("invariants", cmd_invariants, "file")
    sp = add("normalize", cmd_normalize, "file")
    sp.add_argument("--trace", help="write the move trace (JSON) here")
    sp = add("equiv", cmd_equiv, "a", "b")
    sp.add_argument("--depth", type=int, default=6)
    sp.add_argument("--max-events", type=int, default=None)
    sp = add("compose", cmd_compose, "a", "b")
    sp.add_argument("--op", choices=("uplus", "star"), default="uplus")
    add("negate", cmd_negate, "file")
    sp = add("from-family", cmd_from_family, "file")
    sp.add_argument("--tol", type=float, default=None)
    sp = add("from-curves", cmd_from_curves, "file")
    sp.add_argument("--tol", type=float, default=None)
    sp = add("render", cmd_render, "file")
    sp.add_argument("-o", "--output")
    sp.add_argument("--width", type=int, default=640)
    sp.add_argument("--height", type=int, default=320)
    sp = add("fixtures", cmd_fixtures)
    sp.add_argument("name", nargs="?")
    sp.add_argument("--list", action="store_true")
    sp.add_argument("--selftest", action="store_true")
    sp.add_argument("--write", metavar="DIR")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--steps", type=int, default=0)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_MALFORMED if exc.code else EXIT_OK
    try:
        return args.func(args)
    except _Malformed as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_MALFORMED
    except (InvalidDiagram, OrientationInconsistent, NotFillable, NotEmbedded,
            UnorientedInput) as exc:
        sys.stderr.write(f"invalid: {exc}\n")
        return EXIT_INVALID
    except ModblobError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
