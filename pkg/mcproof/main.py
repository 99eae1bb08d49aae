from __future__ import annotations

import argparse
import asyncio
import logging
import sys
from pathlib import Path
from typing import Sequence, TextIO

from . import __version__
from .arith import Arithmetizer
from .config import settings
from .field import format_element
from .fo import Instance, matrix_size, model_check, parse_instance
from .protocol import (
    ProverStrategy,
    choose_params,
    format_transcript,
    parse_transcript,
    run_protocol,
    soundness_experiment,
    verify_transcript,
)


log = logging.getLogger("mcproof")

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def setup_logging() -> None:
    # Setup logging once; everything goes to stderr
    level = getattr(logging, (settings.log_level or "INFO").upper(), logging.INFO)
    if not isinstance(level, int):
        level = logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s:%(name)s:%(message)s", stream=sys.stderr)
    protocol_level = getattr(logging, (settings.protocol_log_level or "WARNING").upper(), logging.WARNING)
    if isinstance(protocol_level, int):
        logging.getLogger("mcproof.protocol").setLevel(protocol_level)


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError(f"seed {text} is not a u64")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mcproof", description="Interactive proofs for first-order model checking.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_common(p: argparse.ArgumentParser, prover: bool = True) -> None:
        p.add_argument("--seed", type=_seed, default=0)
        p.add_argument("--q-min", dest="q_min", type=_positive, default=None)
        if prover:
            p.add_argument("--prover", choices=[s.value for s in ProverStrategy], default=ProverStrategy.HONEST.value)

    p = sub.add_parser("check", help="decide the instance with the brute-force oracle")
    p.add_argument("instance")

    p = sub.add_parser("inspect", help="print protocol parameters of an instance")
    p.add_argument("instance")
    with_common(p, prover=False)

    p = sub.add_parser("run", help="run the protocol and write the transcript")
    p.add_argument("instance")
    p.add_argument("--out", default=None)
    with_common(p)

    p = sub.add_parser("verify", help="replay a transcript against an instance")
    p.add_argument("instance")
    p.add_argument("transcript")

    p = sub.add_parser("experiment", help="estimate the acceptance rate on a false instance")
    p.add_argument("instance")
    p.add_argument("--trials", type=_positive, default=100)
    p.add_argument("--workers", type=_positive, default=None)
    p.add_argument("--db", default=None, help="results store URL, e.g. sqlite+aiosqlite:///./experiments.db")
    with_common(p)
    return parser


def _load_instance(path: str) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh)


def cmd_check(args: argparse.Namespace, out: TextIO) -> int:
    out.write("true\n" if model_check(_load_instance(args.instance)) else "false\n")
    return EXIT_OK


def cmd_inspect(args: argparse.Namespace, out: TextIO) -> int:
    inst = _load_instance(args.instance)
    params = choose_params(inst, args.seed, args.q_min)
    p0 = Arithmetizer(inst, params.ctx, params.schedule).chain_eval(0, {})
    out.write(
        f"k {inst.k}\n"
        f"size {matrix_size(inst.formula.matrix)}\n"
        f"structure-size {inst.structure.structure_size()}\n"
        f"q {params.q}\n"
        f"rounds {params.rounds}\n"
        f"schedule {params.schedule}\n"
        f"p0 {format_element(p0)}\n"
    )
    return EXIT_OK


def cmd_run(args: argparse.Namespace, out: TextIO) -> int:
    inst = _load_instance(args.instance)
    tr = run_protocol(inst, args.prover, args.seed, args.q_min)
    text = format_transcript(tr)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return EXIT_OK if tr.accepted else EXIT_FAIL


def cmd_verify(args: argparse.Namespace, out: TextIO) -> int:
    inst = _load_instance(args.instance)
    tr = parse_transcript(Path(args.transcript).read_text(encoding="utf-8"))
    report = verify_transcript(inst, tr)
    for line in report.diagnostics:
        log.warning("Stage:verify %s", line)
    out.write(f"verdict {report.verdict.value}\n")
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_experiment(args: argparse.Namespace, out: TextIO) -> int:
    inst = _load_instance(args.instance)
    report = soundness_experiment(inst, args.prover, args.trials, args.seed, args.q_min, args.workers)
    out.write(report.table() + "\n")
    url = args.db or settings.results_db_url
    if url:
        from .db import record_experiment

        run_id = asyncio.run(record_experiment(url, report))
        log.info("Stage:experiment_recorded run_id=%s", run_id)
    return EXIT_OK if report.passed else EXIT_FAIL


COMMANDS = {
    "check": cmd_check,
    "inspect": cmd_inspect,
    "run": cmd_run,
    "verify": cmd_verify,
    "experiment": cmd_experiment,
}


def execute(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE
    except SystemExit as e:
        # --help / --version
        return e.code if isinstance(e.code, int) else EXIT_OK
    try:
        return COMMANDS[args.command](args, out)
    except (ValueError, OSError) as e:
        # ExperimentMisuseError included
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE
    except Exception:
        log.exception("Stage:crash command=%s", args.command)
        return EXIT_USAGE


def main() -> None:
    setup_logging()
    sys.exit(execute())


if __name__ == "__main__":
    main()
