import os

import yaml

from app.core.constants.messages import (
    ERROR_CONFIG_FILE_NOT_FOUND,
    ERROR_CONFIG_NOT_MAPPING,
)
from app.core.errors import ConfigurationError


class ConfigRepository:
    """
    Config Repository Class to read YAML run configs

    - Methods:
        - get: Read a config file into a mapping
    """

    @staticmethod
    def get(path: str) -> dict:
        """
        Read a YAML config file. An empty file is an empty mapping.

        - Args:
            - path: str

        - Returns:
            - dict
        """
        if not os.path.isfile(path):
            raise ConfigurationError(f"{ERROR_CONFIG_FILE_NOT_FOUND}: {path}")

        with open(path, encoding="utf-8") as file:
            data = yaml.safe_load(file)

        if data is None:
            return {}

        if not isinstance(data, dict):
            raise ConfigurationError(ERROR_CONFIG_NOT_MAPPING)

        return data
