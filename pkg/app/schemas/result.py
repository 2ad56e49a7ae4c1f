from pydantic import Field

from app.schemas.metrics import SummaryRecord
from app.schemas.settings.base import BaseSchema


class RunResult(BaseSchema):
    """
    What a finished run reports back to its caller.

    Attributes:
        experiment (str)
        seed (int)
        out_dir (str): Directory of the run artifacts.
        metrics_file (str): Path of the metrics stream.
        snapshots (list[str]): Paths of the written snapshots.
        summary (SummaryRecord)
    """

    experiment: str
    seed: int
    out_dir: str
    metrics_file: str
    snapshots: list[str] = Field(default_factory=list)
    summary: SummaryRecord


class SweepResult(BaseSchema):
    """
    Merged results of a multi-seed sweep, ordered by seed.
    """

    experiment: str
    runs: list[RunResult]
