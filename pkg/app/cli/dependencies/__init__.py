from .config import (
    add_config_arguments,
    apply_override,
    config_from_args,
    load_config,
    parse_seeds,
)

__all__ = [
    "add_config_arguments",
    "apply_override",
    "config_from_args",
    "load_config",
    "parse_seeds",
]
