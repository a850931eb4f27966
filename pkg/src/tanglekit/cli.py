"""Command-line front end.

Exit codes: 0 success, 1 negative answer (for example a non-planar input),
2 precondition violated, 3 search budget exhausted, 4 I/O or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .construct import one_crossing_layout
from .detect import TreeEdge, cross_responsible_sets
from .errors import BudgetExhausted, ParseError, PreconditionError, TanglegramError
from .gen import FAMILIES, build_family, random_tanglegram
from .io import (
    read_layout,
    read_tanglegram,
    render_svg,
    serialize_layout,
    serialize_tanglegram,
    write_layout,
    write_tanglegram,
)
from .layout import crossing_count, exact_crt, planar_layout

EXIT_OK, EXIT_NEGATIVE, EXIT_PRECONDITION, EXIT_BUDGET, EXIT_IO = 0, 1, 2, 3, 4


def _edge(e) -> str:
    return f"{e[0]}-{e[1]}"


def _label_value(v) -> str:
    if isinstance(v, TreeEdge):
        return f"{v.side}:{v.node}"
    return _edge(v)


def _set_doc(X) -> dict:
    return {
        "kind": X.kind,
        "edges": sorted(_edge(e) for e in X.edges),
        "labels": {k: _label_value(v) for k, v in X.names.items()},
    }


def _emit(args, doc: dict, text: str) -> None:
    if args.json:
        print(json.dumps(doc, sort_keys=True))
    else:
        print(text)


def cmd_detect(args) -> int:
    tg = read_tanglegram(args.file)
    sets = cross_responsible_sets(tg)
    lines = [f"|X|={len(sets)}"]
    for X in sets:
        lines.append(f"{X.kind} {' '.join(sorted(_edge(e) for e in X.edges))}")
        lines.append("  " + " ".join(f"{k}={_label_value(v)}" for k, v in X.names.items()))
    _emit(args, {"count": len(sets), "sets": [_set_doc(X) for X in sets]}, "\n".join(lines))
    return EXIT_OK


def cmd_crt(args) -> int:
    tg = read_tanglegram(args.file)
    r = exact_crt(tg, args.budget)
    if args.output:
        write_layout(r.witness, args.output)
    tag = "optimal" if r.optimal else "budget exhausted, upper bound only"
    doc = {
        "value": r.value,
        "optimal": r.optimal,
        "explored": r.explored,
        "left_order": list(r.witness.left_order),
        "right_order": list(r.witness.right_order),
    }
    _emit(args, doc, f"{r.value} ({tag})\n{serialize_layout(r.witness)}".rstrip("\n"))
    return EXIT_OK if r.optimal else EXIT_BUDGET


def cmd_planar(args) -> int:
    tg = read_tanglegram(args.file)
    rep = planar_layout(tg, args.budget)
    if rep is not None:
        if args.output:
            write_layout(rep, args.output)
        doc = {"planar": True, "left_order": list(rep.left_order), "right_order": list(rep.right_order)}
        _emit(args, doc, serialize_layout(rep).rstrip("\n"))
        return EXIT_OK
    sets = cross_responsible_sets(tg)
    doc = {"planar": False, "obstruction": _set_doc(sets[0]) if sets else None}
    text = "NONPLANAR"
    if sets:
        text += f"\n{sets[0].kind} {' '.join(sorted(_edge(e) for e in sets[0].edges))}"
    _emit(args, doc, text)
    return EXIT_NEGATIVE


def cmd_onecross(args) -> int:
    tg = read_tanglegram(args.file)
    cert = one_crossing_layout(tg)
    if args.output:
        write_layout(cert.layout, args.output)
    doc = {
        "case": cert.case,
        "crossing_pair": [_edge(e) for e in cert.crossing_pair],
        "left_order": list(cert.layout.left_order),
        "right_order": list(cert.layout.right_order),
        "trace": list(cert.trace),
    }
    text = f"{cert.case}\ncrossing pair: {_edge(cert.crossing_pair[0])} x {_edge(cert.crossing_pair[1])}"
    if not args.output:
        text += "\n" + serialize_layout(cert.layout).rstrip("\n")
    _emit(args, doc, text)
    return EXIT_OK


def cmd_render(args) -> int:
    tg = read_tanglegram(args.file)
    rep = read_layout(args.layout, tg) if args.layout else exact_crt(tg).witness
    svg = render_svg(tg, rep, title=args.title)
    with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(svg)
    _emit(args, {"output": args.output, "crossings": crossing_count(tg, rep)}, f"wrote {args.output}")
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.family:
        tg = build_family(args.family, args.m)
    else:
        if args.n is None:
            raise TanglegramError("either -n or --family is required")
        tg = random_tanglegram(args.n, args.seed)
    if args.output:
        write_tanglegram(tg, args.output)
        _emit(args, {"output": args.output, "size": tg.size}, f"wrote {args.output}")
    else:
        sys.stdout.write(serialize_tanglegram(tg))
    return EXIT_OK


def cmd_verify(args) -> int:
    from .suites import run_verify

    results = run_verify(args.max_size, args.samples, args.seed)
    ok = all(r.passed for r in results)
    lines = [f"{'suite':<24}{'checked':>9}  result"]
    for r in results:
        lines.append(f"{r.name:<24}{r.checked:>9}  {'PASS' if r.passed else 'FAIL'}")
        lines.extend(f"    {msg}" for msg in r.failures)
    _emit(args, {"passed": ok, "suites": [r.as_dict() for r in results]}, "\n".join(lines))
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_survey(args) -> int:
    from .suites import survey

    doc = survey(args.size, args.samples, args.seed, args.budget)
    lines = [f"{'|X|':>5}{'count':>8}{'max crt':>9}"]
    for k, b in doc["bins"].items():
        flag = f"  ({b['unproven']} not proven optimal)" if b["unproven"] else ""
        lines.append(f"{k:>5}{b['count']:>8}{b['max_crt']:>9}{flag}")
    doc = dict(doc, bins={str(k): v for k, v in doc["bins"].items()})
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = argparse.ArgumentParser(prog="tanglekit", description="Tanglegram layouts and crossing numbers.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("detect", parents=[common], help="list cross-responsible sets")
    s.add_argument("file")
    s.set_defaults(func=cmd_detect)

    s = sub.add_parser("crt", parents=[common], help="exact tangle crossing number")
    s.add_argument("file")
    s.add_argument("--budget", type=int, default=None, help="search node limit (default: $TGL_BUDGET or 10^7)")
    s.add_argument("-o", "--output", help="write the witness layout here")
    s.set_defaults(func=cmd_crt)

    s = sub.add_parser("planar", parents=[common], help="planar layout or an obstruction")
    s.add_argument("file")
    s.add_argument("--budget", type=int, default=None)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_planar)

    s = sub.add_parser("onecross", parents=[common], help="one-crossing layout for a unique obstruction")
    s.add_argument("file")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_onecross)

    s = sub.add_parser("render", parents=[common], help="draw a layout as SVG")
    s.add_argument("file")
    s.add_argument("--layout", help="layout file (default: an optimal layout)")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--title")
    s.set_defaults(func=cmd_render)

    s = sub.add_parser("gen", parents=[common], help="random instance or named family")
    s.add_argument("-n", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--family", choices=FAMILIES)
    s.add_argument("--m", type=int, default=1)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("verify", parents=[common], help="run the self-check suites")
    s.add_argument("--max-size", type=int, default=5)
    s.add_argument("--samples", type=int, default=200)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("survey", parents=[common], help="largest crossing number per |X| bin")
    s.add_argument("--size", type=int, required=True)
    s.add_argument("--samples", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--budget", type=int, default=None)
    s.set_defaults(func=cmd_survey)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, OSError) as exc:
        return _fail(args, EXIT_IO, "io", exc)
    except PreconditionError as exc:
        return _fail(args, EXIT_PRECONDITION, "precondition", exc, count=exc.count)
    except BudgetExhausted as exc:
        return _fail(args, EXIT_BUDGET, "budget", exc)
    except TanglegramError as exc:
        return _fail(args, EXIT_PRECONDITION, "precondition", exc)


def _fail(args, code: int, kind: str, exc: Exception, **extra) -> int:
    if getattr(args, "json", False):
        print(json.dumps({"error": kind, "message": str(exc), **extra}, sort_keys=True))
    else:
        print(f"error: {exc}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
