from .config import (
    ControlUnitConfig,
    Exp1Config,
    Exp2Config,
    FixtureConfig,
    LayoutConfig,
    MetricsConfig,
    OptimizerConfig,
    OptimizerSection,
    PretrainConfig,
    ReplayConfig,
    RunConfig,
    RuntimeConfig,
    SnapshotConfig,
    TapeConfig,
    WheelsConfig,
)
from .metrics import MetricsHeader, MetricsRecord, SummaryRecord
from .parameters import LayerParameters, NetParameters, ParameterFile
from .result import RunResult, SweepResult
from .snapshot import ControlUnitState, NodeState, SnapshotDocument

__all__ = [
    "ControlUnitConfig",
    "ControlUnitState",
    "Exp1Config",
    "Exp2Config",
    "FixtureConfig",
    "LayerParameters",
    "LayoutConfig",
    "MetricsConfig",
    "MetricsHeader",
    "MetricsRecord",
    "NetParameters",
    "NodeState",
    "OptimizerConfig",
    "OptimizerSection",
    "ParameterFile",
    "PretrainConfig",
    "ReplayConfig",
    "RunConfig",
    "RunResult",
    "RuntimeConfig",
    "SnapshotConfig",
    "SnapshotDocument",
    "SummaryRecord",
    "SweepResult",
    "TapeConfig",
    "WheelsConfig",
]
