from .autodiff import apply_grads, backward, forward, mse_loss
from .control_unit import ControlUnit, EpsilonSchedule
from .harness import (
    pretrain_pus,
    run_experiment,
    run_sweep,
    wheels_schedule,
)
from .layouts import Layout, build_layout
from .metrics import MetricsCollector
from .network import InteractionNetwork
from .plot import plot_rewards
from .runtime import InteractionLoop, IterationOutcome
from .snapshot import SnapshotWriter, describe_snapshot, restore
from .tape import ProvenanceTape
from .wheels import TrainingWheels, environment_script

__all__ = [
    "ControlUnit",
    "EpsilonSchedule",
    "InteractionLoop",
    "InteractionNetwork",
    "IterationOutcome",
    "Layout",
    "MetricsCollector",
    "ProvenanceTape",
    "SnapshotWriter",
    "TrainingWheels",
    "apply_grads",
    "backward",
    "build_layout",
    "describe_snapshot",
    "environment_script",
    "forward",
    "mse_loss",
    "plot_rewards",
    "pretrain_pus",
    "restore",
    "run_experiment",
    "run_sweep",
    "wheels_schedule",
]
