import argparse
import os

from app.cli.dependencies import add_config_arguments, config_from_args
from app.repositories.parameters import ParameterRepository
from app.services.harness import PARAMETERS_FILE, pretrain_pus


def pretrain(args: argparse.Namespace) -> None:
    """
    Pretrain the PUs of an experiment and save their parameters. Missing
    the loss threshold is reported in the file, not as a failure.
    """
    config = config_from_args(args)
    parameters = pretrain_pus(config)
    path = ParameterRepository.add(
        os.path.join(args.out_dir, PARAMETERS_FILE), parameters
    )

    for pu_id, loss in sorted(parameters.losses.items()):
        status = "ok" if parameters.converged[pu_id] else "not converged"
        print(f"{pu_id}: mse={loss:.3e} {status}")
    print(path)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(
        "pretrain", help="Pretrain PUs on oracle labels"
    )
    add_config_arguments(parser)
    parser.set_defaults(handler=pretrain)
