"""Command-line entry point.

Summaries go to standard output; machine-readable artifacts are written
only where ``--out`` points.  Exit codes: 0 win or success, 10 unsafe
declaration found, 11 fair non-declaring loop found, 12 infeasible or open
instance, 2 usage or configuration error, 3 node budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import analysis
from .checker import (
    Unsafe,
    WardenFairLoop,
    check_eventually_exactly,
    explore,
    verdict,
    verdict_to_json,
)
from .dsl import BUILTIN_PROTOCOLS, builtin_text, load_protocol
from .errors import BudgetExceeded, InfeasibleError, LightswitchError
from .semantics import dump_trace, wrap_initial_state
from .strategies import (
    candidate_leader,
    five_prisoner_suite,
    full_symmetric_strategy,
    race_leader_election,
    three_state_suite,
)
from .warden import (
    FiniteStrategySpace,
    Outcome,
    block_scheduler,
    check_space,
    random_fair_scheduler,
    round_robin_scheduler,
    simulate,
)
from .warden.enumeration import progress_to_stderr

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_UNSAFE = 10
EXIT_FAIRLOOP = 11
EXIT_INFEASIBLE = 12

VERDICT_EXIT = {"win": EXIT_OK, "unsafe": EXIT_UNSAFE, "fairloop": EXIT_FAIRLOOP}

SUITES = ("four_suite", "five_suite")
SYMMETRIC = ("race", "candidates", "full_symmetric")
BUILTINS = BUILTIN_PROTOCOLS + SUITES + SYMMETRIC


class UsageError(LightswitchError):
    pass


# -- controller selection -------------------------------------------------


def _parse_init(text, r):
    if text is None:
        return None
    try:
        values = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"--init must be comma-separated integers, got {text!r}") from None
    if len(values) != r:
        raise UsageError(f"--init has {len(values)} entries, expected r={r}")
    return values


def builtin_controllers(name, n, r, q):
    """``(controllers, q)`` for a built-in name.

    Single protocols are shared by all ``n`` prisoners.  ``four_suite``
    covers 2 to 4 prisoners, truncating the suite as needed.  Symmetric
    strategies fix their own ``q``.
    """
    if name in BUILTIN_PROTOCOLS:
        c = load_protocol(builtin_text(name), r, q, n, name)
        return [c] * n, q
    if name == "four_suite":
        return three_state_suite(n, r, q), q
    if name == "five_suite":
        if n != 5:
            raise UsageError("five_suite is a five-prisoner suite (use --n 5)")
        return five_prisoner_suite(r, q), q
    if name == "race":
        s = race_leader_election(n, r)
    elif name == "candidates":
        s = candidate_leader(n, r)
    elif name == "full_symmetric":
        s = full_symmetric_strategy(n, r)
    else:
        raise UsageError(f"unknown built-in {name!r}; choose from {', '.join(BUILTINS)}")
    return s.controllers(), s.q


def file_controllers(paths, n, r, q):
    cs = []
    for p in paths:
        path = Path(p)
        cs.append(load_protocol(path.read_text("utf-8"), r, q, n, path.stem))
    if len(cs) == 1:
        return cs * n
    if len(cs) != n:
        raise UsageError(f"got {len(cs)} protocol files for n={n} prisoners")
    return cs


def select_controllers(args):
    if args.builtin and args.protocol:
        raise UsageError("--builtin and --protocol are mutually exclusive")
    if not args.builtin and not args.protocol:
        raise UsageError("one of --builtin or --protocol is required")
    q_explicit = args.q is not None
    q = args.q if q_explicit else 3
    if args.builtin:
        controllers, q_used = builtin_controllers(args.builtin, args.n, args.r, q)
        if args.builtin in SYMMETRIC and q_explicit and args.q != q_used:
            raise UsageError(f"{args.builtin} uses q={q_used}, not --q {args.q}")
    else:
        controllers, q_used = file_controllers(args.protocol, args.n, args.r, q), q
    init = _parse_init(args.init, args.r)
    if init is not None and args.wrap_init:
        w = wrap_initial_state(controllers, init, q_used)
        return list(w.controllers), w.q_total, w.init
    return controllers, q_used, init


def _write_json(path, obj):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(obj, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _describe(v):
    line = f"verdict: {v.kind} ({v.nodes} nodes explored)"
    if isinstance(v, Unsafe):
        line += f"; unsafe declaration after {len(v.trace)} visits"
    elif isinstance(v, WardenFairLoop):
        line += f"; fair loop: prefix {len(v.prefix)} visits, cycle {len(v.cycle)} visits"
    return line


# -- subcommands ------------------------------------------------------------


def cmd_check(args, out):
    controllers, q, init = select_controllers(args)
    v = verdict(
        controllers, args.n, args.r, q, init,
        track_visited=args.track_visited, symmetry=args.symmetry, budget=args.budget,
    )
    print(f"n={args.n} r={args.r} q={q}", file=out)
    print(_describe(v), file=out)
    _write_json(args.out, verdict_to_json(v))
    return VERDICT_EXIT[v.kind]


SCHEDULERS = ("round-robin", "random", "block")


def _scheduler(name, n, r, seed):
    if name == "round-robin":
        return round_robin_scheduler(n, r)
    if name == "random":
        return random_fair_scheduler(n, r, seed)
    return block_scheduler(n, r)


def cmd_simulate(args, out):
    controllers, q, init = select_controllers(args)
    sched = _scheduler(args.scheduler, args.n, args.r, args.seed)
    sim = simulate(sched, controllers, args.n, args.r, q, init, args.max_steps, record=bool(args.out))
    print(f"outcome: {sim.outcome.value} after {sim.steps} visits", file=out)
    if sim.final.declared_by is not None:
        print(f"declared by prisoner {sim.final.declared_by}", file=out)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            dump_trace(sim.trace, fh)
    if sim.outcome is Outcome.DECLARED_UNSAFE:
        return EXIT_UNSAFE
    return EXIT_OK


def cmd_enumerate(args, out):
    canonical = args.space == "canonical" or (args.space == "auto" and args.memory > 1)
    space = FiniteStrategySpace(args.n, args.r, args.q, args.memory, canonical)
    kind = "canonical" if canonical else "raw"
    print(
        f"{kind} memory-{args.memory} space: {space.machine_count} machines, "
        f"{space.pair_count} ordered pairs",
        file=out,
    )
    counts = {"win": 0, "unsafe": 0, "fairloop": 0}
    winners = []
    progress = progress_to_stderr if args.progress else None
    fh = open(args.out, "w", encoding="utf-8") if args.out else None
    try:
        if fh:
            fh.write("index\tverdict\tnodes\tcounterexample_length\n")
        for res in check_space(space, workers=args.workers, progress=progress):
            counts[res.verdict] += 1
            if res.verdict == "win":
                winners.append(res.index)
            if fh:
                fh.write(res.tsv() + "\n")
    finally:
        if fh:
            fh.close()
    for k in ("unsafe", "fairloop", "win"):
        print(f"{k}\t{counts[k]}", file=out)
    if winners:
        print(f"winning pair found: {winners[0]}", file=out)
    else:
        print("no winning pair", file=out)
    return EXIT_OK


def cmd_leader(args, out):
    n, r = args.n, args.r
    if args.mode == "full":
        s = full_symmetric_strategy(n, r)
        print(f"full symmetric strategy ({s.kind}), q={s.q}", file=out)
        v = verdict(s.controllers(), n, r, s.q, symmetry=args.symmetry, budget=args.budget)
        print(_describe(v), file=out)
        _write_json(args.out, verdict_to_json(v))
        return VERDICT_EXIT[v.kind]
    if args.mode == "race":
        s, label, expected = race_leader_election(n, r), "leader", 1
    else:
        s, label, expected = candidate_leader(n, r), "type2", r - 1
    print(f"{s.kind} election, q={s.q}", file=out)
    g = explore(s.controllers(), n, r, s.q, track_visited=False, budget=args.budget)
    rep = check_eventually_exactly(g, label, expected)
    print(
        f"'{label}' count: expected {expected}, max reachable {rep.max_seen}, "
        f"monotone {rep.monotone}, {rep.nodes} nodes",
        file=out,
    )
    result = {
        "label": label, "expected": expected, "max_seen": rep.max_seen,
        "monotone": rep.monotone, "nodes": rep.nodes, "holds": rep.holds,
    }
    _write_json(args.out, result)
    if rep.holds:
        print(f"every fair run ends with exactly {expected} '{label}' prisoner(s)", file=out)
        return EXIT_OK
    if rep.exceeded is not None or not rep.monotone:
        print("property violated: count exceeded or a label was dropped", file=out)
        return EXIT_UNSAFE
    print("property violated: a fair loop stays below the expected count", file=out)
    return EXIT_FAIRLOOP


def cmd_analyze(args, out):
    machines = []
    if args.protocol:
        for p in args.protocol:
            path = Path(p)
            c = load_protocol(path.read_text("utf-8"), args.r, 2, args.n, path.stem)
            machines.append((path.stem, c))
    else:
        canonical = args.space == "canonical" or (args.space == "auto" and args.memory > 1)
        space = FiniteStrategySpace(2, 2, 2, args.memory, canonical)
        indices = range(space.machine_count) if args.index is None else args.index
        for i in indices:
            machines.append((f"machine {i}", space.machine(i)))
    reports = []
    for name, c in machines:
        rep = analysis.analyze_machine(c, name)
        reports.append(rep)
        for line in rep.lines():
            print(line, file=out)
    if args.out:
        _write_json(args.out, [_report_json(r) for r in reports])
    return EXIT_OK


def _classification_json(res):
    if isinstance(res, analysis.EventuallyConstant):
        return {"kind": "eventually-constant", "state": res.state, "onset": res.onset}
    if isinstance(res, analysis.BothInfinitelyOften):
        return {"kind": "both-infinitely-often"}
    return {"kind": "declares", "time": res.time}


def _report_json(rep):
    reset = rep.reset
    if reset == analysis.INFINITE:
        reset = "inf"
    return {
        "name": rep.name,
        "from_zero": _classification_json(rep.from_zero),
        "from_one": _classification_json(rep.from_one),
        "stuck": list(rep.stuck) if rep.stuck else None,
        "reset_index": reset,
    }


# (strategy, n, r, q); q None means the strategy picks its own
TABLE_ROWS = (
    ("four_suite", 2, 3, 3),
    ("four_suite", 3, 3, 3),
    ("four_suite", 4, 3, 3),
    ("four_suite", 4, 2, 3),
    ("five_suite", 5, 3, 3),
    ("full_symmetric", 2, 3, None),
    ("full_symmetric", 3, 2, None),
    ("full_symmetric", 2, 2, None),
    ("full_symmetric", 4, 6, None),
)
TABLE_STRETCH = (
    ("four_suite", 4, 4, 3),
    ("four_suite", 4, 5, 3),
    ("five_suite", 5, 4, 3),
)


def table_rows(stretch=False, budget=None):
    rows = []
    for name, n, r, q in TABLE_ROWS + (TABLE_STRETCH if stretch else ()):
        row = {"strategy": name, "n": n, "r": r, "q": q}
        try:
            controllers, q_used = builtin_controllers(name, n, r, q or 3)
            row["q"] = q_used
            v = verdict(controllers, n, r, q_used, symmetry=name != "full_symmetric", budget=budget)
            row["verdict"], row["nodes"] = v.kind, v.nodes
        except InfeasibleError as exc:
            row["verdict"], row["nodes"], row["note"] = "infeasible", 0, str(exc)
        except BudgetExceeded as exc:
            row["verdict"], row["nodes"], row["note"] = "budget", exc.nodes, str(exc)
        rows.append(row)
    return rows


def cmd_table(args, out):
    rows = table_rows(args.stretch, args.budget)
    print(f"{'strategy':<16}{'n':>3}{'r':>4}{'q':>4}  {'verdict':<11}{'nodes':>10}", file=out)
    for row in rows:
        q = "-" if row["q"] is None else row["q"]
        print(
            f"{row['strategy']:<16}{row['n']:>3}{row['r']:>4}{q!s:>4}  "
            f"{row['verdict']:<11}{row['nodes']:>10}",
            file=out,
        )
    _write_json(args.out, rows)
    return EXIT_OK


# -- argument parsing -------------------------------------------------------


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _add_game(p, q_default=None):
    p.add_argument("--n", type=_positive, required=True, help="number of prisoners")
    p.add_argument("--r", type=_positive, required=True, help="number of rooms")
    p.add_argument("--q", type=_positive, default=q_default, help="states per room")


def _add_controllers(p):
    p.add_argument("--builtin", choices=BUILTINS)
    p.add_argument("--protocol", action="append", metavar="FILE",
                   help="protocol file; give once for all prisoners or once per prisoner")
    p.add_argument("--init", help="initial room states, comma separated (default all 0)")
    p.add_argument("--wrap-init", action="store_true",
                   help="adapt all-zero-start controllers to --init with extra dirty states")


def build_parser():
    parser = argparse.ArgumentParser(prog="lightswitch", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="model-check a strategy")
    _add_game(p)
    _add_controllers(p)
    p.add_argument("--symmetry", action="store_true", help="room-symmetry reduction for safety")
    p.add_argument("--track-visited", action="store_true",
                   help="explore with the visited ledger instead of the projected graph")
    p.add_argument("--budget", type=_positive, help="node budget")
    p.add_argument("--out", help="verdict and counterexample JSON")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("simulate", help="run one schedule")
    _add_game(p)
    _add_controllers(p)
    p.add_argument("--scheduler", choices=SCHEDULERS, default="random")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-steps", type=_positive, default=10**6)
    p.add_argument("--out", help="JSONL trace")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("enumerate", help="check every bounded-memory strategy pair")
    _add_game(p, q_default=2)
    p.add_argument("--memory", type=_positive, default=1)
    p.add_argument("--space", choices=("auto", "raw", "canonical"), default="auto",
                   help="auto: raw for memory 1, canonical above")
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--progress", action="store_true")
    p.add_argument("--out", help="per-pair TSV")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("leader", help="build and check a symmetric election")
    p.add_argument("--mode", choices=("full", "race", "candidates"), default="full")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--r", type=_positive, required=True)
    p.add_argument("--symmetry", action="store_true")
    p.add_argument("--budget", type=_positive)
    p.add_argument("--out", help="result JSON")
    p.set_defaults(func=cmd_leader)

    p = sub.add_parser("analyze", help="single-room analysis of two-state machines")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--protocol", action="append", metavar="FILE", help="protocol file compiled with q=2")
    src.add_argument("--memory", type=_positive, help="analyze machines of an enumeration space")
    p.add_argument("--index", type=int, action="append", help="machine index (default: all)")
    p.add_argument("--space", choices=("auto", "raw", "canonical"), default="auto")
    p.add_argument("--n", type=_positive, default=2, help="binding for n in protocol files")
    p.add_argument("--r", type=_positive, default=2, help="binding for r in protocol files")
    p.add_argument("--out", help="report JSON")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("table", help="verdict matrix for the built-in strategies")
    p.add_argument("--stretch", action="store_true", help="include the larger instances")
    p.add_argument("--budget", type=_positive)
    p.add_argument("--out", help="table JSON")
    p.set_defaults(func=cmd_table)
    return parser


def run(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=out)
        return EXIT_INFEASIBLE
    except (LightswitchError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
