from typing import TYPE_CHECKING

import numpy as np

from app.core.constants.enums import EpisodeEvent, Exp1Variant
from app.models.action import ActionId
from app.services.autodiff import mse_loss
from app.services.environments.base import (
    Environment,
    EpisodeRecord,
    Feedback,
)

if TYPE_CHECKING:
    from app.services.environments.replay import ReplayStore
    from app.services.network import InteractionNetwork

AWAITING = "awaiting_delivery"
SOLVING = "solving"


def exp1_target(a: float, b: float) -> float:
    """
    Twice the first input if it is the larger one, otherwise half the
    second input. Ties count as "not larger".
    """
    return 2.0 * a if a > b else b / 2.0


def exp1_pretrain_targets(a: float, b: float) -> dict[str, np.ndarray]:
    """
    Oracle labels of the three PUs of the choose-between-alternatives
    layout for one input pair.

    - Args:
        - a:: float: Value delivered to n0.
        - b:: float: Value delivered to n1.
    - Returns:
        - dict[str, np.ndarray]: pu0 -> [1 if a > b else 0],
          pu1 -> [2a], pu2 -> [b / 2].
    """
    return {
        "pu0": np.array([1.0 if a > b else 0.0]),
        "pu1": np.array([2.0 * a]),
        "pu2": np.array([b / 2.0]),
    }


class Exp1Environment(Environment):
    """
    The choose-between-alternatives task.

    Each task delivers a to `n0` and b to `n1`. A write to the submission
    Node `n2` is graded with reward max(0, 1 - mse) and an mse gradient
    toward the target, and closes the task. A task that is not submitted
    within `max_steps` iterations times out.

    - Attributes:
        - variant: Exp1Variant: inputs_to_cu exposes (a, b) as signals.
        - max_steps: int
        - timeout_penalty: float
        - success_mse: float: Loss under which a submission is a success.
        - replay_store: ReplayStore | None: Receives graded submissions.
    """

    has_script = True

    def __init__(
        self,
        rng: np.random.Generator,
        variant: Exp1Variant = Exp1Variant.BASE,
        max_steps: int = 10,
        timeout_penalty: float = 0.0,
        success_mse: float = 0.01,
        replay_store: "ReplayStore | None" = None,
        env_id: str = "exp1",
        inputs: tuple[str, str] = ("n0", "n1"),
        submission: str = "n2",
    ):
        super().__init__(env_id, rng, watched=[submission])
        self.variant = Exp1Variant(variant)
        self.signal_size = 2 if self.variant == Exp1Variant.INPUTS_TO_CU else 0
        self.max_steps = max_steps
        self.timeout_penalty = timeout_penalty
        self.success_mse = success_mse
        self.replay_store = replay_store
        self.inputs = inputs
        self.submission = submission

        self.phase = AWAITING
        self.a = 0.0
        self.b = 0.0
        self.steps = 0
        self.executed: list[str] = []

    @property
    def target(self) -> float:
        return exp1_target(self.a, self.b)

    @property
    def optimal_sequence(self) -> list[str]:
        return ["pu0", "pu1" if self.a > self.b else "pu2"]

    def start_task(self, network: "InteractionNetwork", a: float, b: float):
        self.a, self.b = float(a), float(b)
        network.write_node(self.inputs[0], np.array([self.a]))
        network.write_node(self.inputs[1], np.array([self.b]))
        self.phase = SOLVING
        self.steps = 0
        self.executed = []

    def deliver(self, network: "InteractionNetwork") -> bool:
        if self.phase != AWAITING:
            return False

        a, b = self.rng.random(2)
        self.start_task(network, a, b)

        return True

    def signals(self) -> np.ndarray:
        return np.array([self.a, self.b])[: self.signal_size]

    def observe(self, action: ActionId) -> None:
        if self.phase == SOLVING and action.is_pu:
            self.executed.append(action.target)

    def evaluate(
        self, network: "InteractionNetwork", written: list[str]
    ) -> Feedback:
        if self.phase != SOLVING:
            return Feedback()

        self.steps += 1

        if self.submission in written:
            return self._grade(network)

        if self.steps >= self.max_steps:
            self._close(False, EpisodeEvent.TIMED_OUT)
            return Feedback(
                reward=self.timeout_penalty,
                episode_end=True,
                events=[EpisodeEvent.TIMED_OUT],
            )

        return Feedback()

    def _grade(self, network: "InteractionNetwork") -> Feedback:
        node = network.node(self.submission)
        target = np.array([self.target])
        loss, grad = mse_loss(node.read(), target)

        if self.replay_store is not None and node.last_writer is not None:
            entry = node.last_writer.entry
            # only the branch the target belongs to learns from it
            if not entry.inert and entry.pu_id == self.optimal_sequence[1]:
                self.replay_store.add(entry.pu_id, entry.inputs, target)

        success = loss < self.success_mse
        event = EpisodeEvent.SUCCEEDED if success else EpisodeEvent.FAILED
        self._close(success, event)

        return Feedback(
            reward=max(0.0, 1.0 - loss),
            gradients=[(self.submission, grad.array())],
            episode_end=True,
            events=[event],
        )

    def _close(self, success: bool, event: EpisodeEvent) -> None:
        self.finished.append(
            EpisodeRecord(
                success=success,
                length=self.steps,
                optimal=self.executed == self.optimal_sequence,
                event=event,
            )
        )
        self.phase = AWAITING

    def scripted_action(
        self, network: "InteractionNetwork"
    ) -> ActionId | None:
        """
        pu0 first, then pu1 when a > b, else pu2.
        """
        if self.phase != SOLVING:
            return None

        if "pu0" not in self.executed:
            return ActionId.pu("pu0")

        return ActionId.pu(self.optimal_sequence[1])

    def state_dict(self) -> dict:
        return {
            "phase": self.phase,
            "a": self.a,
            "b": self.b,
            "steps": self.steps,
            "executed": list(self.executed),
        }

    def load_state_dict(self, state: dict) -> None:
        self.phase = state["phase"]
        self.a = state["a"]
        self.b = state["b"]
        self.steps = state["steps"]
        self.executed = list(state["executed"])
