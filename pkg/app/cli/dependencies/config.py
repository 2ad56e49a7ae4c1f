import argparse

import yaml

from app.core.constants.messages import (
    ERROR_CONFIG_OVERRIDE_FORMAT,
    ERROR_CONFIG_UNKNOWN_KEY,
)
from app.core.errors import ConfigurationError
from app.core.settings import config as settings
from app.repositories.config import ConfigRepository
from app.schemas.config import RunConfig


def apply_override(data: dict, override: str) -> dict:
    """
    Set a dotted key path in a config mapping. The value text is parsed as
    YAML, so numbers, booleans, null and lists keep their type.

    - Args:
        - data:: dict: The mapping to update in place.
        - override:: str: `key.path=value`.
    - Returns:
        - dict: data
    """
    key, separator, text = override.partition("=")
    if not separator or not key.strip():
        raise ConfigurationError(f"{ERROR_CONFIG_OVERRIDE_FORMAT}: {override}")

    *parents, leaf = key.strip().split(".")
    target = data
    for part in parents:
        target = target.setdefault(part, {})
        if not isinstance(target, dict):
            raise ConfigurationError(f"{ERROR_CONFIG_UNKNOWN_KEY}: {key}")

    target[leaf] = yaml.safe_load(text)
    return data


def load_config(
    path: str | None = None,
    overrides: list[str] | None = None,
    seed: int | None = None,
    iterations: int | None = None,
) -> RunConfig:
    """
    Resolve a run config: file values, then overrides, then the `--seed`
    and `--iters` flags. The seed falls back to `DEFAULT_SEED`.

    - Args:
        - path:: str | None: A YAML config file.
        - overrides:: list[str] | None: `key.path=value` items.
        - seed:: int | None
        - iterations:: int | None
    - Returns:
        - RunConfig
    """
    data = ConfigRepository.get(path) if path else {}

    for override in overrides or []:
        apply_override(data, override)

    data.setdefault("seed", settings.DEFAULT_SEED)
    if seed is not None:
        data["seed"] = seed
    if iterations is not None:
        data["iterations"] = iterations

    return RunConfig.model_validate(data)


def parse_seeds(text: str) -> list[int]:
    """
    argparse type of `--seeds 1,2,3`.
    """
    try:
        seeds = [int(item) for item in text.split(",") if item.strip()]
    except ValueError as error:
        raise argparse.ArgumentTypeError(str(error)) from error

    if not seeds or any(seed < 0 for seed in seeds):
        raise argparse.ArgumentTypeError(text)

    return seeds


def add_config_arguments(parser: argparse.ArgumentParser) -> None:
    """
    The flags every config-driven verb accepts.
    """
    parser.add_argument("--config", help="YAML run config")
    parser.add_argument("--seed", type=int, help="Root seed")
    parser.add_argument("--iters", type=int, help="Iteration budget")
    parser.add_argument(
        "--out-dir",
        default=settings.OUT_DIR,
        help="Directory of the run artifacts",
    )
    parser.add_argument(
        "--override",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="Set a dotted config key, e.g. control_unit.gamma=0.95",
    )


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return load_config(args.config, args.override, args.seed, args.iters)
