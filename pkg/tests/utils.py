import json

import numpy as np

from app.core.constants.enums import Activation
from app.models.tensor import FeedForwardNet, Layer
from app.schemas.config import RunConfig
from app.services.harness import build_loop
from app.services.layouts import build_layout
from app.services.runtime import InteractionLoop


def linear_net(weight, bias=None) -> FeedForwardNet:
    """
    A single identity layer with the given parameters.
    """
    weight = np.array(weight, dtype=np.float64, ndmin=2)
    bias = np.zeros(weight.shape[0]) if bias is None else np.array(bias)
    return FeedForwardNet([Layer(weight, bias, Activation.IDENTITY)])


def relu_net(w1, b1, w2, b2) -> FeedForwardNet:
    return FeedForwardNet(
        [
            Layer(np.array(w1, ndmin=2), np.array(b1), Activation.RELU),
            Layer(np.array(w2, ndmin=2), np.array(b2), Activation.IDENTITY),
        ]
    )


def xor_net() -> FeedForwardNet:
    """
    relu(x + y) - 2 relu(x + y - 1): exact xor on {0, 1} inputs.
    """
    return relu_net([[1, 1], [1, 1]], [0, -1], [[1, -2]], [0])


def scripted_loop(data: dict, oracles: dict[str, FeedForwardNet]):
    """
    A loop over the experiment layout whose PUs hold the given oracle
    parameters and whose actions all come from the enforced script.
    """
    data = {
        **data,
        "wheels": {"enabled": True, "active_until": 10**9, "enforce": True},
        "control_unit": {**data.get("control_unit", {}), "train": False},
    }
    config = RunConfig.model_validate(data)
    layout = build_layout(config)

    for pu_id, net in oracles.items():
        layout.network.pu(pu_id).net.load_state(net)

    loop: InteractionLoop = build_loop(config, layout.network)
    return loop


def collect_episodes(loop: InteractionLoop, iterations: int) -> list:
    episodes = []
    for _ in range(iterations):
        episodes.extend(loop.step().episodes)
    return episodes


def collect_episode_rewards(
    loop: InteractionLoop, iterations: int
) -> tuple[list, list[float]]:
    """
    Closed tasks and the environment reward of each iteration that closed
    one.
    """
    episodes, rewards = [], []
    for _ in range(iterations):
        outcome = loop.step()
        episodes.extend(outcome.episodes)
        if outcome.episode_end:
            rewards.append(outcome.env_reward)
    return episodes, rewards


def read_lines(path: str) -> list[dict]:
    with open(path, encoding="utf-8") as file:
        return [json.loads(line) for line in file if line.strip()]
