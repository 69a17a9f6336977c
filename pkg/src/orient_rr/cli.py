"""Command-line front end.

Every subcommand prints one JSON object on stdout (field names are listed in
``schema.json`` next to this file) and a short human summary on stderr.
Exit status: 0 on success, 1 on a domain error, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import divisors, flows, oracle, reversal_engine
from .errors import OrientRRError
from .graph_core import (
    canonical_divisor,
    chi_global,
    load_divisor,
    load_graph,
    spanning_tree_count,
)
from .orientations import PartialOrientation, classify, load_orientation, replay

SCHEMA_PATH = Path(__file__).with_name("schema.json")


@dataclass
class CommandResult:
    status: str
    payload: dict
    human_summary: str = ""
    exit_code: int = field(default=0)
    quiet: bool = False


def _read(path):
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise _IOFailure(str(exc)) from None


class _IOFailure(OrientRRError):
    code = "io_error"


def _graph(args):
    return load_graph(_read(args.graph))


def _verified(args, cert, start):
    if args.verify:
        replay(cert, start)
    return cert.as_json()


def _orientation_json(o, args):
    out = {"state": o.as_symbols(), "divisor": o.divisor.as_pairs()}
    if getattr(args, "ascii", False):
        out["ascii"] = o.ascii()
    return out


# -- subcommands ----------------------------------------------------------------


def cmd_info(args):
    g = _graph(args)
    payload = {
        "vertices": g.n,
        "edges": g.m,
        "genus": g.genus,
        "trees": spanning_tree_count(g),
        "K": list(canonical_divisor(g).values),
    }
    return payload, f"|V|={g.n} |E|={g.m} genus={g.genus}"


def cmd_reduce(args):
    g = _graph(args)
    d = load_divisor(g, _read(args.divisor))
    red = divisors.reduce(g, d, args.q)
    if args.verify and red.replay() != d:
        raise AssertionError("firing script does not reproduce the input")
    payload = {
        "q": g.vertices[red.q],
        "reduced": red.divisor.as_pairs(),
        "firing": [[k, v] for k, v in red.firing_dict().items()],
    }
    return payload, f"{g.vertices[red.q]}-reduced form {red.divisor}"


def cmd_rank(args):
    g = _graph(args)
    d = load_divisor(g, _read(args.divisor))
    cert = divisors.rank(g, d, certify=args.certify)
    payload = {"rank": cert.rank}
    if args.certify:
        payload["certificate"] = cert.as_json()
    return payload, f"rank {cert.rank}"


def cmd_rr_check(args):
    g = _graph(args)
    d = load_divisor(g, _read(args.divisor))
    out = divisors.rr_verify(g, d)
    return out, f"r(D)={out['rank']} r(K-D)={out['rank_dual']} holds"


def cmd_orient(args):
    g = _graph(args)
    d = load_divisor(g, _read(args.divisor))
    res = reversal_engine.construct_orientation(g, d)
    payload = res.as_json()
    payload["orientation"] = _orientation_json(res.orientation, args)
    payload["certificate"] = _verified(args, res.certificate, PartialOrientation.empty(g))
    return payload, res.outcome


def _orientation_input(args):
    g = _graph(args)
    return load_orientation(g, _read(args.orientation))


def cmd_unfurl(args):
    o = _orientation_input(args)
    res = reversal_engine.unfurl(o)
    payload = {
        "outcome": res.outcome,
        "orientation": _orientation_json(res.orientation, args),
        "certificate": _verified(args, res.certificate, o),
    }
    return payload, f"{res.outcome} after {len(res.certificate.moves)} moves"


def cmd_rank_orient(args):
    o = _orientation_input(args)
    res = reversal_engine.rank_via_path_reversals(o)
    payload = res.as_json()
    payload["certificate"] = _verified(args, res.certificate, o)
    payload["orientation"] = _orientation_json(res.orientation, args)
    payload["classification"] = classify(res.orientation).as_json()
    return payload, f"rank {res.rank} via {payload['path_reversals']} path reversals"


def cmd_break_divisor(args):
    g = _graph(args)
    d = load_divisor(g, _read(args.divisor))
    b = flows.break_divisor(g, d, args.q)
    return {"break": b.as_pairs()}, f"break divisor {b}"


def cmd_maxflow(args):
    net = flows.load_network(_read(args.network), args.s, args.t)
    flow, cut = flows.max_flow(net)
    payload = {"value": flow.value, "cut": sorted(cut), "support": flow.support()}
    if args.via_orientability:
        payload["value_via_orientability"] = flows.mfmc_via_orientability(net)[0]
    return payload, f"max flow {flow.value}"


def cmd_orientable(args):
    g = _graph(args)
    d = load_divisor(g, _read(args.divisor))
    payload = {"degree": d.degree, "genus": g.genus}
    if d.degree == g.genus - 1:
        payload["orientable"] = flows.is_orientable(g, d)
    else:
        payload["orientable"] = None
    payload["partially_orientable"] = flows.is_partially_orientable(g, d)
    chi, chi_bar, w_chi, w_bar = chi_global(g, d)
    payload["chi_min"] = chi
    payload["chi_bar_min"] = chi_bar
    payload["chi_witness"] = w_chi
    payload["chi_bar_witness"] = w_bar
    return payload, f"orientable={payload['orientable']} partially={payload['partially_orientable']}"


def cmd_oracle(args):
    g = _graph(args)
    out = oracle.verify(g, args.suite, bound=args.bound)
    if not out["passed"]:
        raise _SuiteFailed(out)
    return out, f"suite {args.suite}: {out['checked']} cases passed"


class _SuiteFailed(OrientRRError):
    code = "oracle_mismatch"

    def __init__(self, payload):
        super().__init__(f"suite {payload['suite']} found a counterexample")
        self.payload = payload


# -- parser -------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="orient-rr", description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=None, help="seed for any randomized fixture generation")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, *positional, help=None):
        sp = sub.add_parser(name, help=help)
        for arg in positional:
            sp.add_argument(arg)
        sp.add_argument("--verify", action="store_true", help="replay certificates before printing")
        sp.add_argument("--quiet", action="store_true", help="suppress the human summary on stderr")
        sp.set_defaults(func=func)
        return sp

    add("info", cmd_info, "graph", help="genus, spanning tree count and canonical divisor")
    add("reduce", cmd_reduce, "graph", "divisor", help="q-reduced form").add_argument("--q", default=None)
    add("rank", cmd_rank, "graph", "divisor", help="rank of a divisor").add_argument(
        "--certify", action="store_true", help="list every winning removal")
    add("rr-check", cmd_rr_check, "graph", "divisor", help="check r(D) - r(K-D) = deg D - g + 1")
    for name, func, what in (
        ("orient", cmd_orient, "divisor"),
        ("unfurl", cmd_unfurl, "orientation"),
        ("rank-orient", cmd_rank_orient, "orientation"),
    ):
        add(name, func, "graph", what).add_argument("--ascii", action="store_true", help="include edge arrows")
    add("break-divisor", cmd_break_divisor, "graph", "divisor").add_argument("--q", default=None)
    mf = add("maxflow", cmd_maxflow, "network", help="maximum flow and minimum cut")
    mf.add_argument("--s", required=True)
    mf.add_argument("--t", required=True)
    mf.add_argument("--via-orientability", action="store_true")
    add("orientable", cmd_orientable, "graph", "divisor")
    orc = sub.add_parser("oracle", help="brute-force cross checks")
    orc_sub = orc.add_subparsers(dest="oracle_command", required=True)
    ver = orc_sub.add_parser("verify")
    ver.add_argument("graph")
    ver.add_argument("--suite", required=True, choices=sorted(oracle.SUITES))
    ver.add_argument("--bound", type=int, default=2, help="divisor entry bound for the rr suite")
    ver.add_argument("--quiet", action="store_true", help="suppress the human summary on stderr")
    ver.set_defaults(func=cmd_oracle, verify=False)
    return p


def dispatch(argv) -> CommandResult:
    args = build_parser().parse_args(argv)
    if args.seed is not None:
        random.seed(args.seed)
    try:
        payload, summary = args.func(args)
    except _SuiteFailed as exc:
        return CommandResult("error", {"error": {"code": exc.code, "message": str(exc)}, **exc.payload},
                             str(exc), 1, args.quiet)
    except OrientRRError as exc:
        return CommandResult("error", {"error": {"code": exc.code, "message": str(exc)}}, str(exc), 1, args.quiet)
    return CommandResult("ok", payload, summary, 0, args.quiet)


def main(argv=None) -> int:
    try:
        result = dispatch(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:  # argparse usage errors
        return exc.code if isinstance(exc.code, int) else 2
    print(json.dumps(result.payload, sort_keys=True))
    if result.human_summary and not result.quiet:
        print(result.human_summary, file=sys.stderr)
    return result.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
