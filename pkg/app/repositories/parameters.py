import os

from app.core.constants.messages import ERROR_PARAMETER_FILE_NOT_FOUND
from app.core.errors import NotFoundError
from app.schemas.parameters import ParameterFile


class ParameterRepository:
    """
    Parameter Repository Class to store pretrained PU parameters

    - Methods:
        - add: Write a parameter file
        - get: Read a parameter file
    """

    @staticmethod
    def add(path: str, parameters: ParameterFile) -> str:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)

        with open(path, "w", encoding="utf-8") as file:
            file.write(parameters.model_dump_json(indent=2))

        return path

    @staticmethod
    def get(path: str) -> ParameterFile:
        if not os.path.isfile(path):
            raise NotFoundError(f"{ERROR_PARAMETER_FILE_NOT_FOUND}: {path}")

        with open(path, encoding="utf-8") as file:
            return ParameterFile.model_validate_json(file.read())
