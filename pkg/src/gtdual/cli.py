"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 bad input, 3 observation
inconsistent with the noiseless OR model.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import bench, dual, holo, jsonio, oracle
from .errors import GroupTestingError, InconsistentObservation, InvalidParameter
from .graph import build_pooling_graph, random_pooling_graph
from .model import Observation, PriorVector, StateVector, run_tests, sample_states
from .report import METHODS, posterior_report

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INPUT = 2
EXIT_INCONSISTENT = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _parse_bits(text: str) -> list[int]:
    return [int(v) for v in text.replace(" ", "").split(",") if v != ""]


def _parse_groups(text: str) -> list[list[int]]:
    return [_parse_bits(part) for part in text.split(";")]


def cmd_gen_graph(args) -> int:
    if args.manual is not None:
        groups = _parse_groups(args.manual)
        if args.tests is not None and args.tests != len(groups):
            raise InvalidParameter(f"--tests {args.tests} but --manual lists {len(groups)} groups")
        graph = build_pooling_graph(args.objects, groups)
    else:
        if args.group_size is None:
            raise InvalidParameter("--group-size is required unless --manual is given")
        tests = 1 if args.tests is None else args.tests
        graph = random_pooling_graph(args.objects, tests, args.group_size, args.seed)
    priors = PriorVector.uniform(graph.num_objects, args.prior)
    jsonio.write_json(jsonio.instance_to_dict(graph, priors), args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    graph, priors = jsonio.instance_from_dict(jsonio.read_json(args.graph))
    if args.states is not None:
        states = StateVector(tuple(_parse_bits(args.states)))
    else:
        states = sample_states(priors, args.seed)
    obs = run_tests(graph, states)
    jsonio.write_json({"states": list(states.s), "results": list(obs.results)}, args.out)
    return EXIT_OK


def cmd_infer(args) -> int:
    graph, priors = jsonio.instance_from_dict(jsonio.read_json(args.graph))
    obs = jsonio.observation_from_dict(jsonio.read_json(args.obs))
    rep = posterior_report(graph, priors, obs, args.method, args.workers, args.naive_cap, args.dual_cap)
    text = rep.to_json()
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    if not 1 <= args.seq_max_r <= holo.SEQ_MAX_R:
        raise InvalidParameter(f"--seq-max-r must be in [1, {holo.SEQ_MAX_R}]")
    if not 1 <= args.delta_max_r <= holo.DELTA_MAX_R:
        raise InvalidParameter(f"--delta-max-r must be in [1, {holo.DELTA_MAX_R}]")
    results = holo.run_all(args.seq_max_r, args.delta_max_r)
    for r in results:
        print(f"{'PASS' if r['passed'] else 'FAIL'} {r['name']}")
        for d in r.get("diffs", []):
            print(f"    {d}")
    ok = all(r["passed"] for r in results)
    summary = {"passed": ok, "checks": results}
    if args.json:
        jsonio.write_json(summary, args.json)
    print(f"{sum(r['passed'] for r in results)}/{len(results)} checks passed")
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def cmd_bench(args) -> int:
    graph, priors = jsonio.instance_from_dict(jsonio.read_json(args.graph))
    if args.obs is not None:
        obs = jsonio.observation_from_dict(jsonio.read_json(args.obs))
    else:
        obs = Observation((1,) * graph.num_tests)
    methods = [m for m in args.methods.split(",") if m]
    for m in methods:
        if m not in METHODS:
            raise InvalidParameter(f"unknown method {m!r}; expected one of {', '.join(METHODS)}")
    records = bench.run_bench(graph, priors, obs, methods, args.repeat, args.workers, args.naive_cap, args.dual_cap)
    print(bench.format_table(records))
    if args.json:
        jsonio.write_json([r.to_dict() for r in records], args.json)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gtdual", description="Exact bitwise-MAP inference for group testing.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen-graph", help="write a pooling-graph instance")
    g.add_argument("--objects", type=int, required=True)
    g.add_argument("--tests", type=int)
    g.add_argument("--group-size", type=int)
    g.add_argument("--manual", help='explicit groups, e.g. "0,1;1,2"')
    g.add_argument("--prior", type=float, default=0.1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default="-")
    g.set_defaults(func=cmd_gen_graph)

    s = sub.add_parser("simulate", help="draw states and evaluate the tests")
    s.add_argument("--graph", required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--states", help='fixed states, e.g. "0,1,0"')
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_simulate)

    def engine_flags(sp):
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--naive-cap", type=int, default=oracle.NAIVE_CAP)
        sp.add_argument("--dual-cap", type=int, default=dual.DUAL_CAP)

    i = sub.add_parser("infer", help="posterior report for one observation")
    i.add_argument("--graph", required=True)
    i.add_argument("--obs", required=True)
    i.add_argument("--method", choices=METHODS, default="dual-fast")
    i.add_argument("--out", default="-")
    engine_flags(i)
    i.set_defaults(func=cmd_infer)

    v = sub.add_parser("verify", help="check the holographic identities")
    v.add_argument("--seq-max-r", type=int, default=holo.SEQ_MAX_R)
    v.add_argument("--delta-max-r", type=int, default=holo.DELTA_MAX_R)
    v.add_argument("--json", help="write a machine-readable summary here")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="time the engines on one instance")
    b.add_argument("--graph", required=True)
    b.add_argument("--obs", help="observation JSON; defaults to every test positive")
    b.add_argument("--methods", default=",".join(METHODS))
    b.add_argument("--repeat", type=int, default=1)
    b.add_argument("--json", help="write records as JSON here")
    engine_flags(b)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "workers", 1) < 1:
            raise InvalidParameter("--workers must be >= 1")
        return args.func(args)
    except InconsistentObservation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except (_UsageError, GroupTestingError, OSError, json.JSONDecodeError, ValueError, TypeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
