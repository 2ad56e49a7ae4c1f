from .base import Environment, EpisodeRecord, Feedback
from .exp1 import Exp1Environment, exp1_pretrain_targets, exp1_target
from .exp2 import Curriculum, Exp2Environment, fold, snap_binary
from .replay import ReplayEnvironment, ReplayLane, ReplayStore
from .task import (
    SequenceTaskEnvironment,
    TaskEnvironment,
    running_sum_stream,
    target_net_stream,
)

__all__ = [
    "Curriculum",
    "Environment",
    "EpisodeRecord",
    "Exp1Environment",
    "Exp2Environment",
    "Feedback",
    "ReplayEnvironment",
    "ReplayLane",
    "ReplayStore",
    "SequenceTaskEnvironment",
    "TaskEnvironment",
    "exp1_pretrain_targets",
    "exp1_target",
    "fold",
    "running_sum_stream",
    "snap_binary",
    "target_net_stream",
]
