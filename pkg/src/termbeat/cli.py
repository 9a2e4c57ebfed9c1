"""Command line entry points: batch runs and the live session service."""

from __future__ import annotations

import argparse
import os
import queue
import sys
import threading
import time
from pathlib import Path

from termbeat import events as E
from termbeat.engine import DEFAULT_BUDGET, EngineError
from termbeat.program import load_program_dir
from termbeat.session import Session, parse_mode
from termbeat.source import SourceError


def _add_common(p: argparse.ArgumentParser, default_mode: str) -> None:
    p.add_argument("directory", help="directory of .lhsq modules")
    p.add_argument(
        "--mode",
        choices=["realtime", "slow", "step"],
        default=default_mode,
        help=f"execution mode (default {default_mode})",
    )
    p.add_argument(
        "--slow-pause",
        type=int,
        default=0,
        metavar="MS",
        help="pause between elements in slow mode (default 0)",
    )
    p.add_argument(
        "--budget",
        type=int,
        default=DEFAULT_BUDGET,
        metavar="STEPS",
        help=f"reduction step budget per element (default {DEFAULT_BUDGET})",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="termbeat", description="term rewriting as a music machine")
    sub = parser.add_subparsers(dest="command", required=True)

    runp = sub.add_parser("run", help="run a program and log its events")
    _add_common(runp, default_mode="slow")
    runp.add_argument("--max-elements", type=int, default=None, metavar="N", help="stop after N elements")
    runp.add_argument("--log", default="-", metavar="PATH", help="event log file, - for stdout (default -)")

    servep = sub.add_parser("serve", help="serve a live session over HTTP")
    _add_common(servep, default_mode="realtime")
    servep.add_argument("--host", default="127.0.0.1")
    servep.add_argument("--port", type=int, default=8750)
    servep.add_argument(
        "--token",
        default=None,
        help="conductor token for control/full-module endpoints (default $TERMBEAT_TOKEN)",
    )
    servep.add_argument(
        "--ui",
        default=None,
        metavar="DIR",
        help="static UI bundle to serve at / (default $TERMBEAT_UI or ./frontend/dist)",
    )
    return parser


def _load(directory: str):
    try:
        return load_program_dir(directory)
    except SourceError as e:
        for d in e.diagnostics:
            print(f"{d.module}:{d.line}:{d.col}: {d.message}", file=sys.stderr)
        raise SystemExit(1)
    except OSError as e:
        print(str(e), file=sys.stderr)
        raise SystemExit(1)


def _stdin_steps(inbox: "queue.Queue[E.Command]", machine: E.Machine) -> None:
    # one stdin line per element; EOF ends the run once queued steps played out
    sent = 0
    for _ in sys.stdin:
        sent += 1
        inbox.put(E.Step())
    while machine.status is E.MachineStatus.RUNNING and machine.element_count < sent:
        time.sleep(0.005)
    inbox.put(E.Stop())


def cmd_run(args: argparse.Namespace) -> int:
    state = _load(args.directory)
    machine = E.Machine(state.compiled, budget=args.budget)
    mode = parse_mode(args.mode, args.slow_pause)

    inbox: queue.Queue[E.Command] | None = None
    if isinstance(mode, E.SingleStep):
        inbox = queue.Queue()
        reader = threading.Thread(target=_stdin_steps, args=(inbox, machine), daemon=True)
        reader.start()

    out = sys.stdout if args.log == "-" else open(args.log, "w", encoding="utf-8")
    try:
        E.run(
            machine,
            mode,
            sink=E.LogSink(out),
            inbox=inbox,
            max_elements=args.max_elements,
            halt_on_error=True,
        )
    finally:
        if out is not sys.stdout:
            out.close()

    if machine.status is E.MachineStatus.ERRORED:
        err = machine.error
        assert err is not None
        print(f"error: {err.message}", file=sys.stderr)
        if isinstance(err, EngineError) and err.rendering:
            print(f"  while reducing: {err.rendering}", file=sys.stderr)
        if err.origin is not None:
            print(f"  at {err.origin}", file=sys.stderr)
        return 2
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from termbeat.service import create_app

    state = _load(args.directory)
    mode = parse_mode(args.mode, args.slow_pause)
    token = args.token if args.token is not None else os.environ.get("TERMBEAT_TOKEN")

    ui = args.ui if args.ui is not None else os.environ.get("TERMBEAT_UI")
    if ui is None:
        fallback = Path("frontend") / "dist"
        if fallback.is_dir():
            ui = str(fallback)

    session = Session(state, mode=mode, budget=args.budget)
    session.start()
    app = create_app(session, token=token, ui_dir=ui)
    try:
        # feed subscribers may sit in a blocking queue read for up to the
        # keepalive interval; cap graceful shutdown so SIGTERM exits promptly
        uvicorn.run(
            app,
            host=args.host,
            port=args.port,
            log_level="warning",
            timeout_graceful_shutdown=2,
        )
    finally:
        session.stop()
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args)
        return cmd_serve(args)
    except BrokenPipeError:
        # downstream consumer (head, etc.) closed the log early
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return 0


if __name__ == "__main__":
    raise SystemExit(main())
