from typing import Literal

from pydantic import Field

from app.schemas.settings.base import BaseSchema


class MetricsHeader(BaseSchema):
    """
    First line of every metrics stream.

    Attributes:
        type (str): Always "header".
        experiment (str): The experiment id.
        seed (int): The run seed.
        config (dict): The resolved run config.
    """

    type: Literal["header"] = "header"
    experiment: str
    seed: int
    config: dict


class MetricsRecord(BaseSchema):
    """
    Aggregates of one window of iterations.

    Attributes:
        type (str): Always "window".
        iteration (int): Iterations run at the end of the window.
        mean_reward (float): Mean CU reward over the window.
        mean_env_reward (float): Mean environment reward over the window.
        epsilon (float): Exploration rate at the end of the window.
        action_histogram (dict[str, int]): Executions per action label.
        episodes (int): Tasks closed in the window.
        success_rate (float | None): Share of successful tasks.
        optimal_rate (float | None): Share of tasks solved by the
            shortest action sequence.
        script_follow_rate (float | None): Share of iterations in which
            the CU chose the scripted action.
        sequence_length (int | None): Required Exp2 length.
        max_sequence_length (int | None): Longest Exp2 length solved.
        td_loss (float | None): Mean TD loss.
        pu_grad_norms (dict[str, float]): Mean applied gradient norm per PU.
    """

    type: Literal["window"] = "window"
    iteration: int = Field(examples=[1000])
    mean_reward: float
    mean_env_reward: float
    epsilon: float
    action_histogram: dict[str, int]
    episodes: int
    success_rate: float | None = None
    optimal_rate: float | None = None
    script_follow_rate: float | None = None
    sequence_length: int | None = None
    max_sequence_length: int | None = None
    td_loss: float | None = None
    pu_grad_norms: dict[str, float] = {}


class SummaryRecord(BaseSchema):
    """
    Last line of every metrics stream.

    Attributes:
        type (str): Always "summary".
        iterations (int): Iterations run.
        total_reward (float): Sum of the CU rewards.
        peak_mean_reward (float | None): Best windowed mean reward.
        reward_threshold (float): Threshold of iterations_to_threshold.
        iterations_to_threshold (int | None): End of the first window
            whose mean reward reached the threshold.
        iterations_to_optimal (int | None): End of the first window whose
            optimal rate reached 0.95.
        max_sequence_length (int | None): Longest Exp2 length solved.
        pretrain_converged (bool | None): Pretraining status, when run.
    """

    type: Literal["summary"] = "summary"
    iterations: int
    total_reward: float
    peak_mean_reward: float | None = None
    reward_threshold: float = 0.9
    iterations_to_threshold: int | None = None
    iterations_to_optimal: int | None = None
    max_sequence_length: int | None = None
    pretrain_converged: bool | None = None
