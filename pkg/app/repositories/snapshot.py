import os

from app.core.constants.messages import ERROR_SNAPSHOT_FILE_NOT_FOUND
from app.core.errors import NotFoundError
from app.schemas.snapshot import SnapshotDocument


class SnapshotRepository:
    """
    Snapshot Repository Class to store snapshot documents as JSON files

    - Attributes:
        - directory: str

    - Methods:
        - add: Write a snapshot as snapshot_<iteration>.json
        - get: Read a snapshot file
    """

    def __init__(self, directory: str) -> None:
        self.directory = directory

    def path_for(self, iteration: int) -> str:
        return os.path.join(self.directory, f"snapshot_{iteration}.json")

    def add(self, document: SnapshotDocument) -> str:
        """
        Write a snapshot, replacing one of the same iteration

        - Args:
            - document: SnapshotDocument

        - Returns:
            - str: The file path
        """
        os.makedirs(self.directory, exist_ok=True)
        path = self.path_for(document.iteration)

        with open(path, "w", encoding="utf-8") as file:
            file.write(document.model_dump_json(indent=2))

        return path

    @staticmethod
    def get(path: str) -> SnapshotDocument:
        """
        Read a snapshot file

        - Args:
            - path: str

        - Returns:
            - SnapshotDocument
        """
        if not os.path.isfile(path):
            raise NotFoundError(f"{ERROR_SNAPSHOT_FILE_NOT_FOUND}: {path}")

        with open(path, encoding="utf-8") as file:
            return SnapshotDocument.model_validate_json(file.read())
