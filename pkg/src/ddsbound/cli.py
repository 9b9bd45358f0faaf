"""Command-line front end.

Exit status: 0 success, 1 input error, 2 cap exceeded, 3 verification
failure. Errors print one line ``error[CODE]: message`` on stderr.
"""

from __future__ import annotations

import argparse
import re
import sys

from . import __version__
from .bounds import analyze, corollary_bound, family_pfvs, theorem_bound
from .circuits import elementary_circuits, minimum_pfvs
from .errors import CapExceeded, DDSError, StateError
from .export import atomic_write, stg_dot
from .graphs import signed_dot
from .interaction import global_graph, local_graph, local_graph_unthresholded, local_scan
from .rules import load, render
from .stg import network_attractors
from .verification import (
    MODES,
    GeneratorSpec,
    check_theorem_suite,
    failure_dump,
    generate,
    parse_shape,
    verdict_log,
)

EXIT_INPUT = 1
EXIT_CAP = 2
EXIT_VERIFY = 3


class UsageError(DDSError):
    code = "E_USAGE"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(c) for c in text.strip().split(","))
    except ValueError:
        raise StateError(f"expected comma-separated integers, got {text.strip()!r}") from None


def _fmt_state(x) -> str:
    return "(" + ",".join(str(c) for c in x) + ")"


def _fmt_set(vs) -> str:
    return "{" + ",".join(str(v) for v in sorted(vs)) + "}"


def _out(lines) -> None:
    sys.stdout.write("".join(line + "\n" for line in lines))


# -- subcommands -------------------------------------------------------------

def cmd_check(args) -> int:
    net = load(args.file, clamp=args.clamp)
    dom = net.domain
    lines = [f"coordinates: {dom.n}"]
    for name, a, b in zip(net.names, dom.lower, dom.upper):
        lines.append(f"  {name}: {a}..{b}")
    lines.append(f"states: {dom.cardinality}")
    lines.append(f"clamped_values: {net.clamped_values}")
    lines.append("ok")
    _out(lines)
    return 0


def cmd_attractors(args) -> int:
    net = load(args.file, clamp=args.clamp)
    attrs = network_attractors(net)
    lines = [f"attractors: {len(attrs)}"]
    for k, a in enumerate(attrs, start=1):
        lines.append(f"attractor {k}: " + " ".join(_fmt_state(net.domain.unrank(r)) for r in sorted(a)))
    _out(lines)
    if args.dot:
        atomic_write(args.dot, stg_dot(net))
    return 0


def cmd_graph(args) -> int:
    net = load(args.file, clamp=args.clamp)
    if args.local is not None:
        x, v = (_ints(t) for t in args.local)
        builder = local_graph_unthresholded if args.unthresholded else local_graph
        g = builder(net, x, v)
        title = "local"
    else:
        g = global_graph(net, thresholded=not args.unthresholded)
        title = "global"
    lines = [f"edges: {len(g)}"]
    lines += [f"{j} -> {i} {'+' if s > 0 else '-'}" for j, s, i in g.sorted_edges]
    _out(lines)
    if args.dot:
        atomic_write(args.dot, signed_dot(g, list(net.names), title))
    return 0


def cmd_circuits(args) -> int:
    net = load(args.file, clamp=args.clamp)
    if args.functional:
        fam = local_scan(net, thresholded=not args.unthresholded).family
        lines = [f"functional positive circuits: {len(fam)}"]
        for s, w in fam.witnesses.items():
            lines.append(
                f"support {_fmt_set(s)}: {w.circuit} at x={_fmt_state(w.state)} v={_fmt_state(w.direction)}"
            )
    else:
        g = global_graph(net, thresholded=not args.unthresholded)
        circuits = elementary_circuits(g)
        lines = [f"circuits: {len(circuits)}"]
        lines += [f"{'+' if c.sign > 0 else '-'} {c}" for c in circuits]
    _out(lines)
    return 0


def cmd_pfvs(args) -> int:
    net = load(args.file, clamp=args.clamp)
    if args.target == "global":
        pfvs = minimum_pfvs(global_graph(net))
    elif args.target == "unthresholded":
        pfvs = family_pfvs(net, thresholded=False, objective="corollary")
    else:
        pfvs = family_pfvs(net)
    _out([f"pfvs: {_fmt_set(pfvs)}"])
    return 0


def cmd_bound(args) -> int:
    net = load(args.file, clamp=args.clamp)
    vertices = _ints(args.I) if args.I else family_pfvs(net)
    main = theorem_bound(net, vertices)
    cor = corollary_bound(net.domain, vertices)
    thresholds = local_scan(net).thresholds
    lines = [f"I: {_fmt_set(main.pfvs)}"]
    for i in main.pfvs:
        lines.append(f"T{i} (doubled): [{', '.join(str(d) for d in thresholds.doubled[i - 1])}]")
    for rep in (main, cor):
        val = "n/a" if rep.value is None else str(rep.value)
        lines.append(f"bound_{rep.kind}: {val} factors={list(rep.factors)} valid={str(rep.valid).lower()}")
    _out(lines)
    return 0


def cmd_analyze(args) -> int:
    net = load(args.file, clamp=args.clamp)
    report = analyze(net)
    sys.stdout.write(report.to_text())
    if args.json:
        atomic_write(args.json, report.to_json())
    return 0


def cmd_verify(args) -> int:
    shape = parse_shape(args.shape)
    if args.count < 0:
        raise UsageError("--count must be non-negative")
    from .verification import batch

    specs = batch(args.seed, args.count, shape, args.mode)
    verdicts = check_theorem_suite(specs, lemmas=args.lemmas, workers=args.workers)
    log = verdict_log(verdicts)
    if args.log:
        atomic_write(args.log, log)
    else:
        sys.stdout.write(log)
    failed = sum(not v.passed for v in verdicts)
    _out([f"networks: {len(specs)}", f"verdicts: {len(verdicts)}", f"failed: {failed}"])
    if failed:
        atomic_write(args.dump, failure_dump(verdicts))
        sys.stderr.write(f"error[E_VERIFY]: {failed} verdict(s) failed; counterexamples written to {args.dump}\n")
        return EXIT_VERIFY
    return 0


def cmd_random(args) -> int:
    spec = GeneratorSpec(args.seed, parse_shape(args.shape), args.mode)
    net = generate(spec)
    atomic_write(args.output, f"# generated {spec.reference}\n" + render(net))
    return 0


# -- argument parsing --------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ddsbound", description="Attractor bounds for discrete dynamical systems.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_file(name, func, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("file", help=".dds network file")
        sp.add_argument("--clamp", action="store_true", help="clamp out-of-range rule values instead of failing")
        sp.set_defaults(func=func)
        return sp

    with_file("check", cmd_check, "parse and elaborate a network file")

    sp = with_file("attractors", cmd_attractors, "list the attractors")
    sp.add_argument("--dot", metavar="PATH", help="write the transition graph as DOT")

    sp = with_file("graph", cmd_graph, "print a global or local interaction graph")
    which = sp.add_mutually_exclusive_group(required=True)
    which.add_argument("--global", dest="global_", action="store_true", help="union of all local graphs")
    which.add_argument("--local", nargs=2, metavar=("X", "V"), help="local graph at state X, direction V")
    sp.add_argument("--unthresholded", action="store_true", help="drop the threshold condition")
    sp.add_argument("--dot", metavar="PATH", help="write the graph as DOT")

    sp = with_file("circuits", cmd_circuits, "list circuits of the global graph")
    sp.add_argument("--functional", action="store_true", help="positive circuits occurring in local graphs")
    sp.add_argument("--unthresholded", action="store_true", help="use the unthresholded graphs")

    sp = with_file("pfvs", cmd_pfvs, "minimum positive feedback vertex set")
    target = sp.add_mutually_exclusive_group()
    target.add_argument("--family", dest="target", action="store_const", const="family", help="all local graphs (default)")
    target.add_argument("--global", dest="target", action="store_const", const="global", help="the global graph")
    target.add_argument(
        "--unthresholded", dest="target", action="store_const", const="unthresholded", help="all unthresholded local graphs"
    )
    sp.set_defaults(target="family")

    sp = with_file("bound", cmd_bound, "attractor bounds for a vertex set")
    sp.add_argument("--I", metavar="V1,V2,...", help="vertex set (default: optimal for the local graphs)")

    sp = with_file("analyze", cmd_analyze, "full analysis report")
    sp.add_argument("--json", metavar="PATH", help="also write the report as JSON")

    sp = sub.add_parser("verify", help="check the bounds on generated networks")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--count", type=int, required=True)
    sp.add_argument("--shape", required=True, help="e.g. 2x2x2 or 3x0..2")
    sp.add_argument("--mode", choices=MODES, default="uniform")
    sp.add_argument("--lemmas", action="store_true", help="also run the restriction suite")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--log", metavar="PATH", help="write the verdict log here instead of stdout")
    sp.add_argument("--dump", metavar="PATH", default="counterexample.json", help="failure dump path")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("random", help="write a generated network in table form")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--shape", required=True)
    sp.add_argument("--mode", choices=MODES, default="uniform")
    sp.add_argument("-o", "--output", required=True, metavar="FILE")
    sp.set_defaults(func=cmd_random)
    return p


_NEGATIVE_LIST = re.compile(r"^-\d[\d,\-]*$")


def _protect_negatives(argv):
    # argparse would read "-1,1" as an option; a leading space makes it positional
    return [" " + a if _NEGATIVE_LIST.match(a) else a for a in argv]


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(_protect_negatives(argv))
        return args.func(args)
    except CapExceeded as e:
        sys.stderr.write(f"error[{e.code}]: {e}\n")
        return EXIT_CAP
    except DDSError as e:
        sys.stderr.write(f"error[{e.code}]: {e}\n")
        return EXIT_INPUT
    except OSError as e:
        sys.stderr.write(f"error[E_IO]: {e.strerror or e}: {e.filename or ''}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
