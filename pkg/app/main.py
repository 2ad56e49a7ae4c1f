import argparse

from app.cli.commands import COMMANDS
from app.cli.middlewares.error import ErrorHandler


def build_parser() -> argparse.ArgumentParser:
    """
    The command line of the Interaction Network harness, one sub-command
    per verb.
    """
    parser = argparse.ArgumentParser(
        prog="interaction-network",
        description=(
            "Run Interaction Network experiments, pretrain PUs, plot "
            "metrics and inspect snapshots."
        ),
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    for command in COMMANDS:
        command.register(subparsers)

    return parser


def main(argv: list[str] | None = None) -> int:
    """
    Parse the command line, run the verb and return its exit code.
    """
    args = build_parser().parse_args(argv)
    return ErrorHandler().dispatch(args, args.handler)
