from typing import TYPE_CHECKING, Iterator

import numpy as np

from app.core.constants.enums import EpisodeEvent
from app.models.action import ActionId
from app.services.autodiff import mse_loss
from app.services.environments.base import (
    Environment,
    EpisodeRecord,
    Feedback,
)

if TYPE_CHECKING:
    from app.services.network import InteractionNetwork

Sample = tuple[np.ndarray, np.ndarray]


def target_net_stream(
    rng: np.random.Generator, input_dim: int, output_dim: int
) -> Iterator[Sample]:
    """
    Endless supervised samples x ~ U(-1, 1) with target tanh(A x), where A
    is drawn once from the same stream.
    """
    weights = rng.uniform(-1.0, 1.0, size=(output_dim, input_dim))
    while True:
        x = rng.uniform(-1.0, 1.0, size=input_dim)
        yield x, np.tanh(weights @ x)


def running_sum_stream(
    rng: np.random.Generator, length: int
) -> Iterator[list[Sample]]:
    """
    Endless sequences of scalars in U(-0.5, 0.5); the target of item t is
    the sum of items 0..t.
    """
    while True:
        values = rng.uniform(-0.5, 0.5, size=length)
        sums = np.cumsum(values)
        yield [
            (np.array([value]), np.array([total]))
            for value, total in zip(values, sums)
        ]


class TaskEnvironment(Environment):
    """
    Supervised task for a single feed-forward PU.

    Action 0 writes the next sample's input to `input_node`; a write to
    `output_node` is graded against that sample's target with an mse
    gradient and reward max(0, 1 - mse). Every graded sample is a task.

    `pu_sequence` lists the PUs the script runs per sample, in order; it
    defaults to `pu_id` alone.
    """

    action_count = 1
    has_script = True

    def __init__(
        self,
        rng: np.random.Generator,
        samples: Iterator[Sample],
        env_id: str = "task",
        input_node: str = "n0",
        output_node: str = "n1",
        pu_id: str = "pu0",
        pu_sequence: list[str] | None = None,
    ):
        super().__init__(env_id, rng, watched=[output_node])
        self.samples = samples
        self.input_node = input_node
        self.output_node = output_node
        self.pu_id = pu_id
        self.pu_sequence = list(pu_sequence or [pu_id])
        self.target: np.ndarray | None = None
        self.progress = 0
        self.graded = 0

    def perform(self, network: "InteractionNetwork", index: int) -> Feedback:
        super().perform(network, index)

        x, self.target = next(self.samples)
        self.progress = 0
        network.write_node(self.input_node, x)

        return Feedback()

    def observe(self, action: ActionId) -> None:
        if self.target is None or self.progress >= len(self.pu_sequence):
            return

        if action == ActionId.pu(self.pu_sequence[self.progress]):
            self.progress += 1

    def evaluate(
        self, network: "InteractionNetwork", written: list[str]
    ) -> Feedback:
        if self.output_node not in written or self.target is None:
            return Feedback()

        value = network.node(self.output_node).read()
        loss, grad = mse_loss(value, self.target)
        self.target = None
        self.graded += 1
        success = loss < 0.01
        event = EpisodeEvent.SUCCEEDED if success else EpisodeEvent.FAILED
        length = 1 + len(self.pu_sequence)
        self.finished.append(EpisodeRecord(success, length, event=event))

        return Feedback(
            reward=max(0.0, 1.0 - loss),
            gradients=[(self.output_node, grad.array())],
            episode_end=True,
            events=[event],
        )

    def scripted_action(
        self, network: "InteractionNetwork"
    ) -> ActionId | None:
        """
        Deliver a sample, then run the PUs of `pu_sequence` in order.
        """
        if self.target is None:
            return ActionId.env(self.id, 0)

        last = len(self.pu_sequence) - 1
        return ActionId.pu(self.pu_sequence[min(self.progress, last)])


class SequenceTaskEnvironment(Environment):
    """
    Supervised sequence task for a recurrent layout.

    Action 0 resets the memory Node at the start of a sequence and writes
    the next item to `input_node`; every write of `output_node` is graded
    against the item's target. The task ends after the last item.
    """

    action_count = 1
    has_script = True

    def __init__(
        self,
        rng: np.random.Generator,
        sequences: Iterator[list[Sample]],
        env_id: str = "task",
        input_node: str = "n0",
        output_node: str = "n1",
        memory_node: str = "n2",
        pu_id: str = "pu0",
    ):
        super().__init__(env_id, rng, watched=[output_node])
        self.sequences = sequences
        self.input_node = input_node
        self.output_node = output_node
        self.memory_node = memory_node
        self.pu_id = pu_id
        self.sequence: list[Sample] = []
        self.cursor = 0
        self.target: np.ndarray | None = None

    def perform(self, network: "InteractionNetwork", index: int) -> Feedback:
        super().perform(network, index)

        if self.cursor >= len(self.sequence):
            self.sequence = next(self.sequences)
            self.cursor = 0
            size = network.node(self.memory_node).size
            network.write_node(self.memory_node, np.zeros(size))

        x, self.target = self.sequence[self.cursor]
        self.cursor += 1
        network.write_node(self.input_node, x)

        return Feedback()

    def evaluate(
        self, network: "InteractionNetwork", written: list[str]
    ) -> Feedback:
        if self.output_node not in written or self.target is None:
            return Feedback()

        value = network.node(self.output_node).read()
        loss, grad = mse_loss(value, self.target)
        self.target = None
        done = self.cursor >= len(self.sequence)

        success = loss < 0.01
        event = EpisodeEvent.SUCCEEDED if success else EpisodeEvent.FAILED

        if done:
            self.finished.append(
                EpisodeRecord(success, len(self.sequence), event=event)
            )

        return Feedback(
            reward=max(0.0, 1.0 - loss),
            gradients=[(self.output_node, grad.array())],
            episode_end=done,
            events=[event] if done else [],
        )

    def scripted_action(
        self, network: "InteractionNetwork"
    ) -> ActionId | None:
        if self.target is None:
            return ActionId.env(self.id, 0)
        return ActionId.pu(self.pu_id)
