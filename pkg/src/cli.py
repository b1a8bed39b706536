"""
Command-line front end: pinv <command> --blocks a,b,c [options]
"""

import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional, Sequence, TextIO

from pydantic import ValidationError

from .agents.coordinator_agent import CoordinatorAgent
from .config import configure_logging, get_settings
from .models.errors import EmptyInput, InputError, PinvError, UnsupportedFormat
from .models.types import CliConfig, Command, DiagramFormat, Which
from .tools.serialization import parse_blocks

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    parser = argparse.ArgumentParser(
        prog="pinv",
        description="B-invariants and canonical orbit representatives for parabolic nilradicals in gl(n)",
    )
    parser.add_argument("command", choices=[c.value for c in Command])
    parser.add_argument("--blocks", help="comma-separated block sizes, e.g. 2,1,3,2")
    parser.add_argument("--batch-file", help="file with one comma-separated block list per line")
    parser.add_argument("--format", default=DiagramFormat.ASCII.value, choices=[f.value for f in DiagramFormat])
    parser.add_argument("--trials", type=int, default=settings.trials)
    parser.add_argument("--seed", type=int, default=settings.seed)
    parser.add_argument("--input-file", help="point JSON for canonicalize")
    parser.add_argument("--which", default=Which.ALL.value, choices=[w.value for w in Which])
    return parser


def read_batch_file(path: str) -> List[str]:
    """Block lists, one per line; blank lines and # comments are skipped"""
    try:
        with open(path, encoding="utf-8") as handle:
            lines = handle.read().splitlines()
    except OSError as e:
        raise InputError(f"cannot read batch file {path}: {e.strerror}")
    return [line.strip() for line in lines if line.strip() and not line.strip().startswith("#")]


def read_point_file(path: str) -> Dict[str, Any]:
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as e:
        raise InputError(f"cannot read input file {path}: {e.strerror}")
    except json.JSONDecodeError as e:
        raise UnsupportedFormat(f"input file {path} is not valid JSON: {e.msg}")


def run_cli(config: CliConfig, input_doc: Optional[Dict[str, Any]] = None,
            out: TextIO = sys.stdout, err: TextIO = sys.stderr,
            coordinator: Optional[CoordinatorAgent] = None) -> int:
    """
    Run one validated configuration

    Returns:
        0 on success, 1 on verification failure, 2 on usage or input error
    """
    coordinator = coordinator or CoordinatorAgent()
    result = coordinator.run(config, input_doc)
    if result.error:
        err.write(f"pinv: error: {result.error}\n")
    out.write(result.output)
    return result.exit_code


def main(argv: Optional[Sequence[str]] = None, out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> int:
    try:
        configure_logging()
    except ValidationError as e:
        err.write(f"pinv: error: invalid settings: {e.errors()[0]['msg']}\n")
        return 2
    args = build_parser().parse_args(argv)

    try:
        if args.batch_file:
            block_lists = read_batch_file(args.batch_file)
        elif args.blocks:
            block_lists = [args.blocks]
        else:
            raise EmptyInput("--blocks or --batch-file is required")

        input_doc = read_point_file(args.input_file) if args.input_file else None
        configs = [
            CliConfig(
                blocks=parse_blocks(text), command=Command(args.command), format=DiagramFormat(args.format),
                trials=args.trials, seed=args.seed, input_file=args.input_file, which=Which(args.which),
            )
            for text in block_lists
        ]
    except PinvError as e:
        err.write(f"pinv: error: {e}\n")
        return e.exit_code
    except ValidationError as e:
        err.write(f"pinv: error: {e.errors()[0]['msg']}\n")
        return 2

    coordinator = CoordinatorAgent()
    status = 0
    for config in configs:
        status = max(status, run_cli(config, input_doc, out, err, coordinator))
    return status


if __name__ == "__main__":
    sys.exit(main())
