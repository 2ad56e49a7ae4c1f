import argparse
import sys
from typing import Callable

import yaml
from pydantic import ValidationError

from app.core.errors import (
    ConfigurationError,
    ConflictError,
    NonFiniteGradientError,
    NotFoundError,
    RejectedInputError,
    RuntimeFailureError,
    SnapshotMismatchError,
)
from app.core.errors import ValidationError as CustomValidationError
from app.logging import LogManager

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


class ErrorHandler:
    """
    Runs a CLI verb and turns its errors into exit codes: 0 on success,
    2 for config errors and 3 for runtime failures. Every error is logged
    and its detail printed to stderr.
    """

    def dispatch(
        self, args: argparse.Namespace, call_next: Callable[..., None]
    ) -> int:
        """
        A method to run a verb and handle its errors.
        - Args:
            - args: The parsed command line.
            - call_next: The verb handler.
        - Returns:
            - int: The exit code.
        """
        try:
            call_next(args)
            return EXIT_OK

        except CustomValidationError as e:
            detail = f"{e.field}: {e.detail}"
            self.register_error_log(args, e.exit_code, detail)
            return e.exit_code

        except ConfigurationError as e:
            self.register_error_log(args, e.exit_code, e.detail)
            return e.exit_code

        except ValidationError as e:
            detail = "; ".join(
                f"{'.'.join(str(part) for part in error['loc'])}: "
                f"{error['msg']}"
                for error in e.errors()
            )
            self.register_error_log(args, EXIT_CONFIG, detail)
            return EXIT_CONFIG

        except yaml.YAMLError as e:
            self.register_error_log(args, EXIT_CONFIG, str(e))
            return EXIT_CONFIG

        except (
            ConflictError,
            NonFiniteGradientError,
            NotFoundError,
            RejectedInputError,
            RuntimeFailureError,
            SnapshotMismatchError,
        ) as e:
            self.register_error_log(args, e.exit_code, e.detail)
            return e.exit_code

        except Exception as e:
            self.register_error_log(args, EXIT_RUNTIME, repr(e))
            return EXIT_RUNTIME

    def get_log_data(self, args: argparse.Namespace) -> dict:
        """
        A method to get log data from the parsed command line.
        - Args:
            - args: The parsed command line.
        - Returns:
            - dict: A dictionary containing log data.
        """
        return {
            "action": getattr(args, "command", None) or "cli",
            "experiment": getattr(args, "config", None) or "",
            "seed": getattr(args, "seed", None),
        }

    def register_error_log(
        self, args: argparse.Namespace, exit_code: int, detail: str
    ) -> None:
        """
        A method to log an error and print it to stderr.
        - Args:
            - args: The parsed command line.
            - exit_code: The exit code the error maps to.
            - detail: The error message.
        - Returns:
            - None
        """
        LogManager.create_error_log(
            **self.get_log_data(args), exit_code=exit_code, detail=detail
        )
        print(f"error: {detail}", file=sys.stderr)
