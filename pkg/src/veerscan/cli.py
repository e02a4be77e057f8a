"""Command-line front end.

Exit codes: 0 success, 1 invalid input or a negative verdict, 2 usage or IO.
JSON is the stable output; text is for people.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import __version__, data
from .cusp import BandStructureViolated, CuspTrack
from .faces import Analysis, BadFilling, MissingFilling
from .svg import write_svg
from .triangulation import NonTorusCusp, TautTriangulation, VtriError, parse, validate_taut
from .veering import is_veering
from .weights import fmt

OK, FAIL, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def threads() -> int:
    try:
        return max(1, int(os.environ.get("VEERSCAN_THREADS", "1")))
    except ValueError:
        return 1


def parse_fill(spec: str) -> tuple[int, int, int]:
    """``c:p/q`` as (cusp, p, q)."""
    try:
        c, slope = spec.split(":")
        p, q = slope.split("/")
        return int(c), int(p), int(q)
    except ValueError:
        raise UsageError(f"bad --fill {spec!r}; expected c:p/q") from None


def read_input(path: str) -> bytes:
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _tracks(t: TautTriangulation) -> list[CuspTrack]:
    cusps = range(t.num_cusps)
    n = threads()
    if n == 1:
        return [CuspTrack(t, c) for c in cusps]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(lambda c: CuspTrack(t, c), cusps))


# -- subcommands ----------------------------------------------------------------
# each returns (exit code, report dict)


def cmd_validate(t: TautTriangulation) -> tuple[int, dict]:
    violations = validate_taut(t)
    return (FAIL if violations else OK), {
        "valid": not violations,
        "tets": t.tets,
        "violations": [v.as_dict() for v in violations],
    }


def _gate(t: TautTriangulation):
    code, rep = cmd_validate(t)
    return None if code == OK else (code, rep)


def cmd_veering(t: TautTriangulation) -> tuple[int, dict]:
    cert = is_veering(t)
    rep = cert.as_dict()
    rep["edges"] = len(t.edge_classes)
    rep["cusps"] = t.num_cusps
    return (OK if cert.veering else FAIL), rep


def cmd_cusps(t: TautTriangulation, svg: str | None = None, cusp: int = 0) -> tuple[int, dict]:
    tracks = _tracks(t)
    summaries = [ct.summary() for ct in tracks]
    if svg is not None:
        if not 0 <= cusp < len(tracks):
            raise UsageError(f"no cusp {cusp}")
        try:
            write_svg(tracks[cusp], svg)
        except OSError as exc:
            raise UsageError(f"cannot write {svg}: {exc.strerror}") from None
    ok = all(s["dichotomy"] and s.get("bands") is not None for s in summaries)
    return (OK if ok else FAIL), {"cusps": summaries}


def cmd_cone(t: TautTriangulation) -> tuple[int, dict]:
    a = Analysis(t, _tracks(t))
    sys_ = a.system
    rep = {
        "faces": sys_.n_faces,
        "weights": sys_.as_dict(),
        "weight_rays": [
            {"ray": [fmt(x) for x in r], "chi": fmt(sys_.chi_of(r)), "class": [fmt(x) for x in a.model.class_map(r)]}
            for r in sys_.rays
        ],
        "homology": a.model.as_dict(),
        "cone": {
            "rays": [list(r) for r in a.cone.rays],
            "dimension": a.cone.dimension,
            "salient": a.cone.salient,
            "norms": [fmt(a.norm_punctured(r)) for r in a.cone.rays],
        },
    }
    return OK, rep


def cmd_analyze(t: TautTriangulation, fills: list[tuple[int, int, int]]) -> tuple[int, dict]:
    tracks = _tracks(t)
    try:
        for ct in tracks:
            ct.ladderpoles
    except BandStructureViolated as exc:
        return FAIL, {"error": "BandStructureViolated", "detail": str(exc)}
    a = Analysis(t, tracks)
    slopes = None
    if fills:
        table = {c: (p, q) for c, p, q in t.fillings}
        for c, p, q in fills:
            table[c] = (p, q)
        missing = [c for c in range(t.num_cusps) if c not in table]
        if missing:
            raise MissingFilling(f"no filling slope for cusp(s) {missing}")
        slopes = [table[c] for c in range(t.num_cusps)]
    fill = a.filling_data(slopes)
    report = a.report(fill)
    rep = report.as_dict()
    rep["statement"] = verdict_line(report.verdict)
    return (OK if report.verdict else FAIL), rep


def verdict_line(verdict: bool) -> str:
    return "spanning taut branched surface: " + ("guaranteed" if verdict else "not guaranteed by hypothesis")


# -- output -----------------------------------------------------------------------


def dump_json(cmd: str, rep: dict) -> str:
    body = {"veerscan": __version__, "command": cmd}
    body.update(rep)
    return json.dumps(body, indent=2, sort_keys=True) + "\n"


def _text_lines(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _text_lines(obj[k], f"{prefix}{k}.")
    elif isinstance(obj, list) and obj and all(isinstance(x, (dict, list)) for x in obj):
        for i, x in enumerate(obj):
            yield from _text_lines(x, f"{prefix}{i}.")
    else:
        yield f"{prefix.rstrip('.')}: {json.dumps(obj)}"


def dump_text(cmd: str, rep: dict) -> str:
    lines = [f"veerscan {__version__} {cmd}"]
    if "statement" in rep:
        lines.append(rep["statement"])
    lines.extend(_text_lines({k: v for k, v in rep.items() if k != "statement"}))
    return "\n".join(lines) + "\n"


# -- self test --------------------------------------------------------------------


def self_test(out) -> int:
    """Run every subcommand on the bundled fixtures and check the expected outcomes."""
    failures = 0
    for name in data.ALL:
        t = data.load_fixture(name)
        code, _ = cmd_validate(t)
        checks = [("validate", code == (FAIL if name in data.BROKEN else OK))]
        if name not in data.BROKEN:
            code, _ = cmd_veering(t)
            checks.append(("veering", code == (OK if name in data.VEERING else FAIL)))
            code, _ = cmd_cusps(t)
            checks.append(("cusps", code == (OK if name in data.VEERING else FAIL)))
        if name in data.VEERING:
            code, rep = cmd_analyze(t, [])
            checks.append(("analyze", code == OK and rep["verdict"]))
        for what, good in checks:
            failures += not good
            print(f"{'pass' if good else 'FAIL'} {name} {what}", file=out)
    print(f"self-test: {'ok' if not failures else f'{failures} failure(s)'}", file=out)
    return OK if not failures else FAIL


# -- entry point --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="veerscan", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"veerscan {__version__}")
    p.add_argument("--self-test", action="store_true", help="check every bundled fixture and exit")
    sub = p.add_subparsers(dest="command")
    for name, help_ in (
        ("validate", "check the taut structure"),
        ("veering", "decide the veering condition"),
        ("cusps", "cusp train tracks, bands and ladderpole slopes"),
        ("cone", "weight cone, carried cone and Euler characteristics"),
        ("analyze", "ladderpole vertex classes and the filling verdict"),
    ):
        s = sub.add_parser(name, help=help_)
        s.add_argument("path", help=".vtri file")
        s.add_argument("--format", choices=("json", "text"), default="json")
        if name == "cusps":
            s.add_argument("--svg", metavar="PATH", help="write an SVG drawing of one cusp track")
            s.add_argument("--cusp", type=int, default=0, help="cusp to draw (default 0)")
        if name == "analyze":
            s.add_argument("--fill", action="append", default=[], metavar="c:p/q", help="filling slope for cusp c")
    return p


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    if args.self_test:
        return self_test(out)
    if args.command is None:
        parser.print_usage(err)
        return USAGE
    try:
        raw = read_input(args.path)
        try:
            t = parse(raw)
        except (VtriError, UnicodeDecodeError) as exc:
            rep = {"error": type(exc).__name__, "detail": str(exc)}
            code = FAIL
        else:
            gated = None if args.command == "validate" else _gate(t)
            if args.command == "validate":
                code, rep = cmd_validate(t)
            elif gated is not None:
                code, rep = gated
            elif args.command == "veering":
                code, rep = cmd_veering(t)
            elif args.command == "cusps":
                code, rep = cmd_cusps(t, args.svg, args.cusp)
            elif args.command == "cone":
                code, rep = cmd_cone(t)
            else:
                fills = [parse_fill(f) for f in args.fill]
                code, rep = cmd_analyze(t, fills)
    except (UsageError, MissingFilling, BadFilling) as exc:
        print(f"veerscan: {exc}", file=err)
        return USAGE
    except NonTorusCusp as exc:
        rep = {"error": "NonTorusCusp", "detail": str(exc)}
        code = FAIL
    dump = dump_json if args.format == "json" else dump_text
    out.write(dump(args.command, rep))
    return code


def main() -> None:
    sys.exit(run())
