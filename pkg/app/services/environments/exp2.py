from functools import reduce
from typing import TYPE_CHECKING

import numpy as np

from app.core.constants.enums import EpisodeEvent, Reductor
from app.models.action import ActionId
from app.services.autodiff import mse_loss
from app.services.environments.base import (
    Environment,
    EpisodeRecord,
    Feedback,
)

if TYPE_CHECKING:
    from app.services.network import InteractionNetwork

AWAITING = "awaiting_task"
SOLVING = "solving"


def reductor_step(reductor: Reductor, constant: float):
    """
    The binary function folded over the sequence.
    """
    reductor = Reductor(reductor)

    if reductor == Reductor.CONSTANT:
        return lambda acc, value: constant
    if reductor == Reductor.PASSTHROUGH:
        return lambda acc, value: value
    return lambda acc, value: float(int(acc) ^ int(value))


def fold(
    reductor: Reductor, sequence: list[float], constant: float = 1.0
) -> float:
    """
    reduce(reductor, sequence) starting from 0.
    """
    return float(reduce(reductor_step(reductor, constant), sequence, 0.0))


def snap_binary(values: np.ndarray) -> np.ndarray:
    return np.where(values >= 0.5, 1.0, 0.0)


class Curriculum:
    """
    The required-sequence-length ladder.

    - Attributes:
        - length: int: Current n, never below 1.
        - streak_up: int: Successes in a row that raise n.
        - fail_down: int: Failures in a row that lower n.
        - max_length: int: Largest n solved so far.
    """

    def __init__(
        self, length: int = 1, streak_up: int = 10, fail_down: int = 50
    ):
        self.length = max(1, length)
        self.streak_up = streak_up
        self.fail_down = fail_down
        self.successes = 0
        self.failures = 0
        self.max_length = 0

    def update(self, success: bool) -> int:
        """
        Record one episode result and return the new required length.
        """
        if success:
            self.max_length = max(self.max_length, self.length)
            self.successes += 1
            self.failures = 0
        else:
            self.failures += 1
            self.successes = 0

        if self.successes >= self.streak_up:
            self.length += 1
            self.successes = self.failures = 0
        elif self.failures >= self.fail_down:
            self.length = max(1, self.length - 1)
            self.successes = self.failures = 0

        return self.length


class Exp2Environment(Environment):
    """
    The repeated-function-application task.

    A task is a binary sequence of the required length n. Action 0 writes
    the next value to `n0`; asking past the end fails the task. A write to
    `n1` after the whole sequence was read is rounded to 0 or 1 and graded
    against the fold of the sequence; a write before that is a premature
    submission. Tasks running past 2n + 4 iterations time out.

    - Attributes:
        - reductor: Reductor
        - constant: float: Value of the constant reductor.
        - curriculum: Curriculum
        - wrong_penalty, invalid_penalty, timeout_penalty: float
        - scale_exploration: bool: Report 1/n as exploration scale.
    """

    action_count = 1
    signal_size = 2
    has_script = True

    def __init__(
        self,
        rng: np.random.Generator,
        reductor: Reductor = Reductor.CONSTANT,
        constant: float = 1.0,
        curriculum: Curriculum | None = None,
        wrong_penalty: float = -0.2,
        invalid_penalty: float = -0.5,
        timeout_penalty: float = -0.5,
        scale_exploration: bool = True,
        env_id: str = "exp2",
        input_node: str = "n0",
        output_node: str = "n1",
    ):
        super().__init__(env_id, rng, watched=[output_node])
        self.reductor = Reductor(reductor)
        self.constant = constant
        self.curriculum = curriculum or Curriculum()
        self.wrong_penalty = wrong_penalty
        self.invalid_penalty = invalid_penalty
        self.timeout_penalty = timeout_penalty
        self.scale_exploration = scale_exploration
        self.input_node = input_node
        self.output_node = output_node

        self.phase = AWAITING
        self.sequence: list[float] = []
        self.cursor = 0
        self.steps = 0
        self.reset_done = False
        self.reduced_upto = 0

    @property
    def length(self) -> int:
        return self.curriculum.length

    @property
    def budget(self) -> int:
        return 2 * len(self.sequence) + 4

    @property
    def target(self) -> float:
        return fold(self.reductor, self.sequence, self.constant)

    def start_task(self, sequence: list[float]) -> None:
        self.sequence = [float(value) for value in sequence]
        self.cursor = 0
        self.steps = 0
        self.reset_done = False
        self.reduced_upto = 0
        self.phase = SOLVING

    def deliver(self, network: "InteractionNetwork") -> bool:
        if self.phase != AWAITING:
            return False

        values = self.rng.integers(0, 2, size=self.length)
        self.start_task([float(value) for value in values])

        return True

    def signals(self) -> np.ndarray:
        if not self.sequence:
            return np.zeros(2)

        finished = 1.0 if self.cursor >= len(self.sequence) else 0.0
        return np.array([finished, self.cursor / len(self.sequence)])

    def exploration_scale(self) -> float:
        return 1.0 / self.length if self.scale_exploration else 1.0

    def observe(self, action: ActionId) -> None:
        if self.phase != SOLVING or not action.is_pu:
            return

        if action.target == "pu2":
            self.reset_done = True
        elif action.target == "pu1":
            self.reduced_upto = self.cursor

    def perform(self, network: "InteractionNetwork", index: int) -> Feedback:
        super().perform(network, index)

        if self.phase != SOLVING:
            return Feedback()

        if self.cursor < len(self.sequence):
            value = self.sequence[self.cursor]
            network.write_node(self.input_node, np.array([value]))
            self.cursor += 1
            return Feedback()

        return self._fail(EpisodeEvent.FAILED, self.invalid_penalty)

    def evaluate(
        self, network: "InteractionNetwork", written: list[str]
    ) -> Feedback:
        if self.phase != SOLVING:
            return Feedback()

        self.steps += 1

        if self.output_node in written:
            if self.cursor < len(self.sequence):
                return self._fail(EpisodeEvent.FAILED, self.invalid_penalty)
            return self._grade(network)

        if self.steps >= self.budget:
            return self._fail(EpisodeEvent.TIMED_OUT, self.timeout_penalty)

        return Feedback()

    def _grade(self, network: "InteractionNetwork") -> Feedback:
        value = network.node(self.output_node).read()
        target = np.array([self.target])
        _, grad = mse_loss(value, target)

        success = bool(snap_binary(value)[0] == target[0])
        event = EpisodeEvent.SUCCEEDED if success else EpisodeEvent.FAILED
        self._close(success, event)

        return Feedback(
            reward=1.0 if success else self.wrong_penalty,
            gradients=[(self.output_node, grad.array())],
            episode_end=True,
            events=[event],
        )

    def _fail(self, event: EpisodeEvent, penalty: float) -> Feedback:
        self._close(False, event)
        return Feedback(reward=penalty, episode_end=True, events=[event])

    def _close(self, success: bool, event: EpisodeEvent) -> None:
        self.finished.append(
            EpisodeRecord(
                success=success,
                length=len(self.sequence),
                optimal=success and self.steps <= 2 * len(self.sequence) + 2,
                event=event,
            )
        )
        self.curriculum.update(success)
        self.phase = AWAITING

    def scripted_action(
        self, network: "InteractionNetwork"
    ) -> ActionId | None:
        """
        Reset the memory, then (request, reduce) for every value, then
        submit.
        """
        if self.phase != SOLVING:
            return None

        if not self.reset_done:
            return ActionId.pu("pu2")

        if self.reduced_upto < self.cursor:
            return ActionId.pu("pu1")

        if self.cursor < len(self.sequence):
            return ActionId.env(self.id, 0)

        return ActionId.pu("pu0")

    def state_dict(self) -> dict:
        return {
            "phase": self.phase,
            "sequence": list(self.sequence),
            "cursor": self.cursor,
            "steps": self.steps,
            "reset_done": self.reset_done,
            "reduced_upto": self.reduced_upto,
            "length": self.curriculum.length,
            "successes": self.curriculum.successes,
            "failures": self.curriculum.failures,
            "max_length": self.curriculum.max_length,
        }

    def load_state_dict(self, state: dict) -> None:
        self.phase = state["phase"]
        self.sequence = list(state["sequence"])
        self.cursor = state["cursor"]
        self.steps = state["steps"]
        self.reset_done = state["reset_done"]
        self.reduced_upto = state["reduced_upto"]
        self.curriculum.length = state["length"]
        self.curriculum.successes = state["successes"]
        self.curriculum.failures = state["failures"]
        self.curriculum.max_length = state["max_length"]
