from abc import ABC, abstractmethod
from collections import deque
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from app.core.constants import messages
from app.core.constants.enums import EpisodeEvent
from app.core.errors import RejectedInputError
from app.models.action import ActionId

if TYPE_CHECKING:
    from app.services.network import InteractionNetwork


@dataclass
class Feedback:
    """
    What an environment returns to the loop in one iteration.

    - Attributes:
        - reward: float: CU reward, summed over environments.
        - gradients: list[tuple[str, np.ndarray]]: Node gradients.
        - episode_end: bool
        - events: list[EpisodeEvent]
    """

    reward: float = 0.0
    gradients: list[tuple[str, np.ndarray]] = field(default_factory=list)
    episode_end: bool = False
    events: list[EpisodeEvent] = field(default_factory=list)

    def merge(self, other: "Feedback") -> "Feedback":
        return Feedback(
            reward=self.reward + other.reward,
            gradients=self.gradients + other.gradients,
            episode_end=self.episode_end or other.episode_end,
            events=self.events + other.events,
        )


@dataclass
class EpisodeRecord:
    """
    Summary of one finished task, read by the metrics sink.
    """

    success: bool
    length: int
    optimal: bool = False
    event: EpisodeEvent = EpisodeEvent.SUCCEEDED


class Environment(ABC):
    """
    Adapter between the network and the outside world.

    An environment may deliver inputs, expose signals and actions to the
    Control Unit, watch Nodes and answer their writes with CU rewards and
    Node gradients.

    - Attributes:
        - id: str
        - watched: list[str]: Node ids whose writes trigger evaluate().
        - action_count: int
        - signal_size: int: Fixed length of signals().
        - rng: np.random.Generator
        - inbox: deque: Pending external inputs (node_id, value).
        - finished: list[EpisodeRecord]: Tasks closed since last drained.
    """

    action_count: int = 0
    signal_size: int = 0
    has_script: bool = False

    def __init__(
        self,
        env_id: str,
        rng: np.random.Generator,
        watched: list[str] | None = None,
    ):
        self.id = env_id
        self.rng = rng
        self.watched = list(watched or [])
        self.inbox: deque[tuple[str, np.ndarray]] = deque()
        self.finished: list[EpisodeRecord] = []

    def push_input(self, node_id: str, value: np.ndarray) -> None:
        self.inbox.append((node_id, np.asarray(value, dtype=np.float64)))

    def deliver(self, network: "InteractionNetwork") -> bool:
        """
        Input phase: write at most one pending input. Returns whether
        something was written.
        """
        if not self.inbox:
            return False

        node_id, value = self.inbox.popleft()
        network.write_node(node_id, value)

        return True

    def signals(self) -> np.ndarray:
        return np.zeros(self.signal_size)

    def checked_signals(self) -> np.ndarray:
        values = np.asarray(self.signals(), dtype=np.float64).reshape(-1)

        if values.size != self.signal_size:
            raise RejectedInputError(messages.ERROR_ENV_SIGNAL_LENGTH)

        return values

    def perform(self, network: "InteractionNetwork", index: int) -> Feedback:
        """
        Dispatch phase: run action `index` of this environment.
        """
        if not 0 <= index < self.action_count:
            raise RejectedInputError(messages.ERROR_ENV_ACTION_INDEX)

        return Feedback()

    def observe(self, action: ActionId) -> None:
        """
        Called with every dispatched action, whichever component owns it.
        """

    @abstractmethod
    def evaluate(
        self, network: "InteractionNetwork", written: list[str]
    ) -> Feedback:
        """
        Feedback phase: grade the watched Nodes written this iteration.
        Called every iteration, with an empty list when nothing was written.
        """
        raise NotImplementedError

    def scripted_action(
        self, network: "InteractionNetwork"
    ) -> ActionId | None:
        return None

    def exploration_scale(self) -> float:
        return 1.0

    def drain_finished(self) -> list[EpisodeRecord]:
        records = self.finished
        self.finished = []
        return records

    def state_dict(self) -> dict:
        return {}

    def load_state_dict(self, state: dict) -> None:
        return None
