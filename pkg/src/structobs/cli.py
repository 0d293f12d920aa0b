"""Command-line front end.

Exit codes: 0 success (or observable), 1 not observable, 2 bad input.
State indices on the command line and in every output are 1-based.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys

import numpy as np

from .centrality import PageRankConfig, pagerank, pagerank_cost, state_graph
from .colorability import RULES, check_observability, combine_m, output_pattern
from .export import load_output, load_system, to_dot
from .placement import DEFAULT_PAGERANK, brute_force_minimum, compute_costs, place_sensors, read_costs_csv
from .verify import RealizationSampler, cross_validate
from .wdn import rk4

log = logging.getLogger("structobs")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Argument errors as one ``error: ...`` line, exit code 2."""

    def error(self, message):
        self.exit(2, f"error: {self.prog.split()[-1]}: {message}\n")


def _parse_sensors(text: str | None, n_states: int) -> list[int]:
    if not text:
        return []
    try:
        idx = [int(tok) for tok in text.replace(" ", "").split(",") if tok]
    except ValueError:
        raise UsageError(f"--sensors must be comma-separated integers, got {text!r}") from None
    if len(set(idx)) != len(idx):
        raise UsageError(f"duplicate sensor indices in {text!r}")
    bad = [i for i in idx if not 1 <= i <= n_states]
    if bad:
        raise UsageError(f"sensor index {bad[0]} outside 1..{n_states}")
    return [i - 1 for i in idx]


def _output_for(args, A):
    """Sensor list and output pattern; a stored output is used only without --sensors."""
    if not args.sensors:
        C = load_output(args.network)
        if C is not None:
            if C.cols != A.rows:
                raise UsageError(f"output pattern has {C.cols} columns, system has {A.rows} states")
            return None, C
    sensors = _parse_sensors(args.sensors, A.rows)
    return sensors, output_pattern(A.rows, sensors)


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _trace(state) -> list[list[int]]:
    return [[ev.forcer + 1, ev.forced + 1, ev.round] for ev in state.trace]


def cmd_check(args) -> int:
    A, _ = load_system(args.network)
    sensors, C = _output_for(args, A)
    verdict = check_observability(A, C, rule=args.rule)
    shown = "(stored output)" if sensors is None else ",".join(str(s + 1) for s in sensors) or "(none)"
    if args.format == "json":
        out = _dump(
            {
                "sensors": None if sensors is None else [s + 1 for s in sensors],
                "observable": verdict.observable,
                "colorable_M": verdict.colorable_M,
                "colorable_Mbar": verdict.colorable_Mbar,
                "trace_M": _trace(verdict.state_M),
                "trace_Mbar": _trace(verdict.state_Mbar),
            }
        )
    else:
        lines = [
            f"sensors: {shown}",
            f"G(M) colorable: {verdict.colorable_M}",
            f"G(Mbar) colorable: {verdict.colorable_Mbar}",
            f"observable: {verdict.observable}",
        ]
        for name, st in (("M", verdict.state_M), ("Mbar", verdict.state_Mbar)):
            lines.append(f"trace {name}: " + " ".join(f"{f}->{t}" for f, t, _ in _trace(st)))
        out = "\n".join(lines) + "\n"
    _emit(args, out)
    return 0 if verdict.observable else 1


def _costs_for(args, A):
    if args.costs:
        costs = read_costs_csv(args.costs)
        if costs.n != A.rows:
            raise UsageError(f"cost table has {costs.n} states, system has {A.rows}")
        return costs
    return compute_costs(A, pagerank_cfg=PageRankConfig(alpha=args.alpha))


def cmd_place(args) -> int:
    A, _ = load_system(args.network)
    costs = _costs_for(args, A)
    res = place_sensors(A, costs, eps=args.eps, rule=args.rule)
    if args.format == "text":
        lines = [
            "groups: " + " < ".join("{" + ",".join(str(s + 1) for s in g) + "}" for g in res.groups),
            f"terminated at group {res.group_index}, k = {res.k}"
            + (" (fallback: all states)" if res.fallback else ""),
            f"combinations evaluated: {res.combinations_evaluated}",
        ]
        lines += ["accepted: {" + ",".join(str(s + 1) for s in acc) + "}" for acc in res.accepted]
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, _dump(res.to_dict()))
    log.info("placement took %.4f s", res.wall_time)
    return 0


def cmd_dot(args) -> int:
    A, _ = load_system(args.network)
    _, C = _output_for(args, A)
    M = combine_m(A, C) if not args.raw else A
    costs = read_costs_csv(args.costs).c_n if args.costs else None
    _emit(args, to_dot(M, n_states=M.rows, costs=costs))
    return 0


def cmd_pagerank(args) -> int:
    A, net = load_system(args.network)
    if args.graph == "physical":
        if net is None:
            raise UsageError("--graph physical needs a network JSON")
        adj = net.adjacency_and_incidence()[0]
    else:
        adj = state_graph(A)
    pr = pagerank(adj, PageRankConfig(alpha=args.alpha))
    cost = pagerank_cost(pr)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["node", "pr", "cost"])
    for v in range(len(pr)):
        w.writerow([v + 1, f"{pr[v]:.12g}", f"{cost[v]:.12g}"])
    _emit(args, buf.getvalue())
    return 0


def cmd_costs(args) -> int:
    A, _ = load_system(args.network)
    _emit(args, _costs_for(args, A).to_csv())
    return 0


def cmd_oracle(args) -> int:
    A, _ = load_system(args.network)
    min_k, sets = brute_force_minimum(A, rule=args.rule)
    _emit(args, _dump({"min_k": min_k, "sets": [[s + 1 for s in st] for st in sets]}))
    return 0


def cmd_verify(args) -> int:
    A, _ = load_system(args.network)
    _, C = _output_for(args, A)
    report = cross_validate(
        A, C, trials=args.trials, s=RealizationSampler(seed=args.seed), rule=args.rule
    )
    _emit(args, _dump(report))
    return 0 if report["failures"] == 0 else 1


def cmd_simulate(args) -> int:
    _, net = load_system(args.network)
    if net is None or net.params is None:
        raise UsageError("simulate needs a network JSON with a params block")
    if not args.x0:
        raise UsageError("simulate needs --x0 (comma-separated initial state)")
    try:
        x0 = np.array([float(t) for t in args.x0.split(",")])
    except ValueError:
        raise UsageError("--x0 must be comma-separated numbers") from None
    if x0.size != net.n_states:
        raise UsageError(f"--x0 has {x0.size} entries, network has {net.n_states} states")
    t, X = rk4(net, x0, args.t_end, args.dt)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", *net.state_labels()])
    stride = max(1, args.every)
    for k in range(0, len(t), stride):
        w.writerow([f"{t[k]:.6g}", *(f"{v:.12g}" for v in X[k])])
    _emit(args, buf.getvalue())
    return 0


COMMANDS = {
    "check": (cmd_check, "decide strong structural observability for a sensor set"),
    "place": (cmd_place, "cost-grouped minimal sensor placement"),
    "dot": (cmd_dot, "Graphviz DOT of G([A^T C^T])"),
    "pagerank": (cmd_pagerank, "PageRank and inverse-PageRank cost as CSV"),
    "costs": (cmd_costs, "computed or supplied cost table as CSV"),
    "oracle": (cmd_oracle, "exhaustive minimum sensor count"),
    "verify": (cmd_verify, "Monte-Carlo rank test of a structural verdict"),
    "simulate": (cmd_simulate, "RK4 simulation of the EWC model"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="structobs", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        p = sub.add_parser(name, help=help_)
        p.add_argument("--network", required=True, help="network JSON, pattern JSON/CSV or text pattern")
        p.add_argument("--costs", help="cost CSV: state,c_out,c_in,c_pr,c_ind[,c_n]")
        p.add_argument("--sensors", help="comma-separated 1-based state indices")
        p.add_argument("--alpha", type=float, default=DEFAULT_PAGERANK.alpha, help="PageRank damping")
        p.add_argument("--eps", type=float, default=1e-9, help="cost grouping tolerance")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trials", type=int, default=100)
        p.add_argument("--rule", choices=RULES, default="queue", help="coloring schedule")
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--format", choices=("json", "csv", "dot", "text"), default="text" if name == "check" else "json")
        if name == "dot":
            p.add_argument("--raw", action="store_true", help="draw G(A) instead of G([A^T C^T])")
        if name == "pagerank":
            p.add_argument("--graph", choices=("state", "physical"), default="state")
        if name == "simulate":
            p.add_argument("--x0")
            p.add_argument("--t-end", type=float, default=1.0)
            p.add_argument("--dt", type=float, default=1e-3)
            p.add_argument("--every", type=int, default=1, help="write every k-th step")
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("STRUCTOBS_LOG_LEVEL", "WARNING").upper(), format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    func = COMMANDS[args.command][0]
    try:
        return func(args)
    except (UsageError, ValueError, FileNotFoundError, KeyError) as exc:
        msg = str(exc).replace("\n", " ")
        print(f"error: {args.command}: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
