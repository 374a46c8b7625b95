"""Command-line entry point.

Every subcommand is deterministic given its flags, seed, and input files:
repeated invocations produce byte-identical outputs. Usage errors exit 2,
data/validation errors exit 1 with a single `error: ...` line on stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import analysis, formats, report, simulate
from .game import PreferenceProfile, ValidationError


def _emit(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _cmd_simulate(args: argparse.Namespace) -> int:
    profile = None
    labels = None
    if args.prefs is not None:
        subs = formats.read_prefs(args.prefs)
        profile = PreferenceProfile.from_rows([row for _, row in subs.players])
        labels = subs.object_labels
    elif args.n is None:
        raise ValidationError("give --n or --prefs")
    if args.labels is not None:
        labels = tuple(x.strip() for x in args.labels.split(","))
    session_id = args.session_id or f"sim-{args.seed}"
    log = simulate.simulate_session(
        session_id=session_id,
        seed=args.seed,
        n=args.n,
        profile=profile,
        object_labels=labels,
        object_type=args.object_type,
    )
    _emit(formats.encode_session(log), args.out)
    return 0


def _cmd_enumerate(args: argparse.Namespace) -> int:
    result = analysis.enumerate_tau_bounded(args.n, args.tau_bound, workers=args.workers)
    rep = report.build_enumeration_report(result)
    text = report.encode_report(rep) if args.format == "json" else report.render_report_table(rep)
    _emit(text, args.out)
    return 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    logs = [formats.read_session(path) for path in args.sessions]
    rep = report.build_sessions_report(logs, virtual=not args.no_virtual)
    text = report.encode_report(rep) if args.format == "json" else report.render_report_table(rep)
    _emit(text, args.out)
    return 0


def _cmd_form_groups(args: argparse.Namespace) -> int:
    subs = formats.read_prefs(args.prefs)
    result = analysis.form_groups(
        subs.players,
        group_size=args.group_size,
        max_tau=args.max_tau,
        seed=args.seed,
        max_restarts=args.restarts,
    )
    out = [
        "[metadata]",
        "key,value",
        f"group_size,{args.group_size}",
        f"max_tau,{args.max_tau}",
        f"seed,{args.seed}",
        f"attempts,{result.attempts}",
        f"all_accepted,{formats.format_number(result.all_accepted)}",
        "",
        "[groups]",
        "group,member,tau,accepted",
    ]
    for g, group in enumerate(result.groups, start=1):
        flag = formats.format_number(group.accepted)
        for pid, tau in zip(group.member_ids, group.taus):
            out.append(f"{g},{pid},{tau},{flag}")
    _emit("\n".join(out) + "\n", args.out)
    return 0


def _cmd_reform(args: argparse.Namespace) -> int:
    log = formats.read_session(args.session)
    groups = analysis.reform_virtual_groups(log)
    out = [
        "[metadata]",
        "key,value",
        f"session,{log.session_id}",
        f"n,{log.n}",
        f"groups,{len(groups)}",
        "",
        "[virtual_groups]",
        "group,priority,player,round,choice,obtained",
    ]
    for g, group in enumerate(groups, start=1):
        outcome = analysis.group_outcome(log, group)
        by_priority = {}
        for slot, (player, round_index) in enumerate(group.member_records):
            rec = log.rounds[round_index - 1]
            priority = rec.priority_of_player[player - 1]
            got = outcome.obtained[slot]
            by_priority[priority] = (
                player,
                round_index,
                rec.choices[player - 1],
                "Nothing" if got is None else log.object_labels[got - 1],
            )
        for priority in range(1, log.n + 1):
            player, round_index, choice, got = by_priority[priority]
            out.append(f"{g},{priority},{player},{round_index},{choice},{got}")
    _emit("\n".join(out) + "\n", args.out)
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(data_dir=args.data_dir, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    rep = report.decode_report(Path(args.report).read_text(encoding="utf-8"))
    _emit(report.render_report_table(rep), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ospgr",
        description="Simulate, analyze, and host one-sided preference games "
        "with reference information.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="play model agents through a full session")
    p.add_argument("--n", type=int, help="number of players/objects")
    p.add_argument("--prefs", help="preference submissions file to play instead of random draws")
    p.add_argument("--seed", type=int, required=True, help="seed for draws and schedule")
    p.add_argument("--session-id", help="identifier stored in the log (default sim-<seed>)")
    p.add_argument("--labels", help="comma-separated object labels")
    p.add_argument("--object-type", default="box", help="object type tag (default box)")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("enumerate", help="exhaustive model-agent run over tau-bounded profiles")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tau-bound", type=int, required=True, help="max inversions per rank row")
    p.add_argument("--workers", type=int, default=1, help="parallel workers (default 1)")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("analyze", help="classification/rate/tau report over session logs")
    p.add_argument("sessions", nargs="+", help="session log files")
    p.add_argument("--no-virtual", action="store_true",
                   help="aggregate per round instead of expanding virtual groups")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("form-groups", help="partition players under the tau constraint")
    p.add_argument("--prefs", required=True, help="preference submissions file")
    p.add_argument("--group-size", type=int, required=True)
    p.add_argument("--max-tau", type=int, required=True,
                   help="accept a group only if every tau is strictly below this")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--restarts", type=int, default=200, help="search restarts (default 200)")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=_cmd_form_groups)

    p = sub.add_parser("reform", help="expand a complete session into virtual groups")
    p.add_argument("session", help="session log file")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=_cmd_reform)

    p = sub.add_parser("serve", help="run the live-session HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--data-dir", help="directory for finished session logs")
    p.add_argument("--ui-dir", help="static directory to serve at / (player console)")
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("report", help="render a JSON report as plot-ready tables")
    p.add_argument("report", help="report JSON file")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
