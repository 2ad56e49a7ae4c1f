from collections import deque
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from app.core.constants.enums import EpisodeEvent
from app.services.autodiff import mse_loss
from app.services.environments.base import Environment, Feedback

if TYPE_CHECKING:
    from app.services.network import InteractionNetwork


@dataclass
class ReplaySample:
    pu_id: str
    inputs: list[np.ndarray]
    target: np.ndarray


@dataclass
class ReplayLane:
    """
    Nodes of the PU alias that replays samples of one live PU.
    """

    pu_id: str
    inputs: list[str]
    output: str


class ReplayStore:
    """
    Bounded store of graded PU executions with uniform sampling.
    """

    def __init__(self, capacity: int, rng: np.random.Generator):
        self.capacity = capacity
        self.rng = rng
        self.samples: deque[ReplaySample] = deque(maxlen=capacity)

    def __len__(self) -> int:
        return len(self.samples)

    def add(
        self, pu_id: str, inputs: list[np.ndarray], target: np.ndarray
    ) -> None:
        self.samples.append(
            ReplaySample(
                pu_id,
                [np.array(value, dtype=np.float64) for value in inputs],
                np.array(target, dtype=np.float64),
            )
        )

    def sample(self, pu_ids: set[str] | None = None) -> ReplaySample | None:
        candidates = [
            sample
            for sample in self.samples
            if pu_ids is None or sample.pu_id in pu_ids
        ]
        if not candidates:
            return None

        return candidates[int(self.rng.integers(len(candidates)))]


class ReplayEnvironment(Environment):
    """
    Experience replay as an environment.

    Action 0 writes the inputs of a stored sample to the replay lane of
    its PU. When the lane output is written, the stored target's mse
    gradient is applied to it and the CU earns `reward`.

    - Attributes:
        - store: ReplayStore
        - lanes: dict[str, ReplayLane]: Live PU id -> lane.
        - reward: float
        - pending: dict[str, np.ndarray]: Lane output -> expected target.
    """

    action_count = 1

    def __init__(
        self,
        rng: np.random.Generator,
        store: ReplayStore,
        lanes: list[ReplayLane],
        reward: float = 0.05,
        env_id: str = "replay",
    ):
        super().__init__(
            env_id, rng, watched=[lane.output for lane in lanes]
        )
        self.store = store
        self.lanes = {lane.pu_id: lane for lane in lanes}
        self.reward = reward
        self.pending: dict[str, np.ndarray] = {}

    def perform(self, network: "InteractionNetwork", index: int) -> Feedback:
        super().perform(network, index)

        sample = self.store.sample(set(self.lanes))
        if sample is None:
            return Feedback()

        lane = self.lanes[sample.pu_id]
        for node_id, value in zip(lane.inputs, sample.inputs):
            network.write_node(node_id, value)
        self.pending[lane.output] = sample.target

        return Feedback()

    def evaluate(
        self, network: "InteractionNetwork", written: list[str]
    ) -> Feedback:
        feedback = Feedback()

        for node_id in written:
            if node_id not in self.pending:
                continue

            target = self.pending.pop(node_id)
            _, grad = mse_loss(network.node(node_id).read(), target)
            feedback = feedback.merge(
                Feedback(
                    reward=self.reward,
                    gradients=[(node_id, grad.array())],
                    events=[EpisodeEvent.REPLAYED],
                )
            )

        return feedback
