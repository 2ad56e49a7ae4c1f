import logging
import os
import threading
from logging.handlers import RotatingFileHandler

from app.core.settings import config


class LogManager:
    """
    A class to manage logging in the application.
    Provides methods to log messages at different levels (INFO, ERROR, etc.)
    to separate log files.

    - Attributes:
        - _loggers:: dict: A dictionary to store logger instances.

    - Methods:
        - _get_logger(level: str, file_name: str):
            Returns a logger instance for the specified level and file.
        - create_info_log(action: str, experiment: str, seed: int, iteration: int, detail: str):
            Logs an INFO message to the info log file.
        - create_warning_log(action: str, experiment: str, seed: int, iteration: int, detail: str):
            Logs a WARNING message to the info log file.
        - create_error_log(action: str, experiment: str, seed: int, iteration: int, exit_code: int, detail: str):
            Logs an ERROR message to the error log file.
    """

    _loggers = {}
    _lock = threading.Lock()

    @classmethod
    def _get_logger(cls, level: str, file_name: str):
        with cls._lock:
            return cls._create_logger(level, file_name)

    @classmethod
    def _create_logger(cls, level: str, file_name: str):
        if level not in cls._loggers:
            os.makedirs(config.LOG_DIR, exist_ok=True)
            file_path = os.path.join(config.LOG_DIR, file_name)

            logger = logging.getLogger(f"interaction_network.{level}")
            logger.setLevel(getattr(logging, level))
            logger.propagate = False

            # Configuração do handler com rotação de arquivos
            handler = RotatingFileHandler(
                file_path, maxBytes=5_000_000, backupCount=5
            )
            formatter = logging.Formatter(
                "%(asctime)s---%(levelname)s---%(message)s"
            )
            handler.setFormatter(formatter)

            logger.addHandler(handler)
            cls._loggers[level] = logger

        return cls._loggers[level]

    @classmethod
    def create_info_log(
        cls,
        action: str,
        experiment: str,
        seed: int | None = None,
        iteration: int | None = None,
        detail: str = "",
    ):
        """
        Log an INFO message.

        - Args:
            - action:: str: The action being logged, e.g. "run".
            - experiment:: str: The experiment the action belongs to.
            - seed:: int | None: The run seed.
            - iteration:: int | None: The loop iteration, when relevant.
            - detail:: str: Additional details.
        - Returns:
            - None
        """
        log_message = f"{action}---{experiment}---{seed}---{iteration}---{detail}"
        logger = cls._get_logger("INFO", "info.log")
        logger.info(log_message)

    @classmethod
    def create_warning_log(
        cls,
        action: str,
        experiment: str,
        seed: int | None = None,
        iteration: int | None = None,
        detail: str = "",
    ):
        """
        Log a WARNING message to the info log file.

        - Args:
            - action:: str: The action being logged.
            - experiment:: str: The experiment the action belongs to.
            - seed:: int | None: The run seed.
            - iteration:: int | None: The loop iteration, when relevant.
            - detail:: str: Additional details.
        - Returns:
            - None
        """
        log_message = f"{action}---{experiment}---{seed}---{iteration}---{detail}"
        logger = cls._get_logger("INFO", "info.log")
        logger.warning(log_message)

    @classmethod
    def create_error_log(
        cls,
        action: str,
        experiment: str,
        seed: int | None = None,
        iteration: int | None = None,
        exit_code: int = 3,
        detail: str = "",
    ):
        """
        Log an ERROR message.

        - Args:
            - action:: str: The action being logged.
            - experiment:: str: The experiment the action belongs to.
            - seed:: int | None: The run seed.
            - iteration:: int | None: The loop iteration, when relevant.
            - exit_code:: int: The exit code the failure maps to.
            - detail:: str: Additional details about the error.
        - Returns:
            - None
        """
        log_message = (
            f"{action}---{experiment}---{seed}---{iteration}---"
            f"{exit_code}---{detail}"
        )
        logger = cls._get_logger("ERROR", "error.log")
        logger.error(log_message)
