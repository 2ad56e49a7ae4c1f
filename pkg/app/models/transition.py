from collections import deque
from dataclasses import dataclass

import numpy as np

from app.core.constants import messages
from app.core.errors import RejectedInputError


@dataclass
class Transition:
    """
    One Control Unit experience.

    - Attributes:
        - state: np.ndarray
        - action: int: Q-head index of the action taken.
        - reward: float: Finite.
        - next_state: np.ndarray
        - episode_end: bool
    """

    state: np.ndarray
    action: int
    reward: float
    next_state: np.ndarray
    episode_end: bool

    def __post_init__(self):
        self.reward = float(self.reward)
        if not np.isfinite(self.reward):
            raise RejectedInputError(messages.ERROR_REWARD_NOT_FINITE)


class ReplayBuffer:
    """
    Bounded ring of transitions with uniform sampling.
    """

    def __init__(self, capacity: int):
        self.capacity = capacity
        self._items: deque[Transition] = deque(maxlen=capacity)

    def __len__(self) -> int:
        return len(self._items)

    def __iter__(self):
        return iter(self._items)

    def append(self, transition: Transition) -> None:
        self._items.append(transition)

    def sample(
        self, rng: np.random.Generator, batch_size: int
    ) -> list[Transition]:
        if batch_size > len(self._items):
            raise RejectedInputError(messages.ERROR_BUFFER_TOO_SMALL)

        picks = rng.choice(len(self._items), size=batch_size, replace=False)

        return [self._items[int(index)] for index in picks]

    def pad_states(self, length: int) -> None:
        """
        Zero-pad stored states after the state layout grew.
        """
        for transition in self._items:
            transition.state = _pad(transition.state, length)
            transition.next_state = _pad(transition.next_state, length)


def _pad(state: np.ndarray, length: int) -> np.ndarray:
    if state.size >= length:
        return state
    return np.concatenate([state, np.zeros(length - state.size)])
