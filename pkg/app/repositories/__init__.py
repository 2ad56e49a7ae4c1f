from .config import ConfigRepository
from .metrics import MetricsRepository
from .parameters import ParameterRepository
from .snapshot import SnapshotRepository

__all__ = [
    "ConfigRepository",
    "MetricsRepository",
    "ParameterRepository",
    "SnapshotRepository",
]
