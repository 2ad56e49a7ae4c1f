import argparse

from app.cli.dependencies import (
    add_config_arguments,
    config_from_args,
    parse_seeds,
)
from app.services.harness import run_experiment, run_sweep


def run(args: argparse.Namespace) -> None:
    """
    Run one experiment, or one per seed with `--seeds`, and print the
    result as JSON.
    """
    config = config_from_args(args)

    if args.seeds:
        result = run_sweep(config, args.seeds, args.out_dir)
    else:
        result = run_experiment(config, args.out_dir)

    print(result.model_dump_json(indent=2))


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("run", help="Run an experiment")
    add_config_arguments(parser)
    parser.add_argument(
        "--seeds",
        type=parse_seeds,
        help="Comma separated seeds, one worker thread each",
    )
    parser.set_defaults(handler=run)
