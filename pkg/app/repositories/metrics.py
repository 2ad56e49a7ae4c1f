import os
from typing import Annotated

from pydantic import Field, TypeAdapter

from app.core.constants.messages import ERROR_METRICS_FILE_NOT_FOUND
from app.core.errors import NotFoundError
from app.schemas.metrics import MetricsHeader, MetricsRecord, SummaryRecord

MetricsLine = Annotated[
    MetricsHeader | MetricsRecord | SummaryRecord,
    Field(discriminator="type"),
]
_LINE = TypeAdapter(MetricsLine)


class MetricsRepository:
    """
    Metrics Repository Class to handle the JSON lines metrics stream

    - Attributes:
        - path: str

    - Methods:
        - start: Create the stream with its header line
        - add: Append one record
        - get_all: Read every line of a stream
    """

    def __init__(self, path: str) -> None:
        self.path = path

    def start(self, header: MetricsHeader) -> None:
        directory = os.path.dirname(self.path)
        if directory:
            os.makedirs(directory, exist_ok=True)

        with open(self.path, "w", encoding="utf-8", newline="\n") as file:
            file.write(header.model_dump_json() + "\n")

    def add(self, record: MetricsRecord | SummaryRecord) -> None:
        with open(self.path, "a", encoding="utf-8", newline="\n") as file:
            file.write(record.model_dump_json() + "\n")

    @staticmethod
    def get_all(
        path: str,
    ) -> list[MetricsHeader | MetricsRecord | SummaryRecord]:
        """
        Read a metrics stream

        - Args:
            - path: str

        - Returns:
            - list: The header, window and summary lines in file order
        """
        if not os.path.isfile(path):
            raise NotFoundError(f"{ERROR_METRICS_FILE_NOT_FOUND}: {path}")

        with open(path, encoding="utf-8") as file:
            return [
                _LINE.validate_json(line) for line in file if line.strip()
            ]
