import numpy as np
from pytest import mark

from tests.utils import (
    collect_episode_rewards,
    collect_episodes,
    linear_net,
    relu_net,
    scripted_loop,
    xor_net,
)


def copy_net():
    return relu_net([[1], [0]], [0, 0], [[1, 0]], [0])


def zero_net():
    return relu_net(np.zeros((2, 1)), [0, 0], np.zeros((1, 2)), [0])


def constant_net():
    return relu_net(np.zeros((2, 2)), [1, 0], [[1, 0]], [0])


def test_exp1_oracle_solves_every_task():

    # Arrange

    loop = scripted_loop(
        {"experiment": "exp1", "seed": 1, "layout": {"pu_hidden": []}},
        {
            "pu0": linear_net([[1.0, -1.0]]),
            "pu1": linear_net([[2.0]]),
            "pu2": linear_net([[0.5]]),
        },
    )

    # Act

    episodes, rewards = collect_episode_rewards(loop, 2000)

    # Assert

    assert len(episodes) == 1000
    assert rewards == [1.0] * 1000
    assert all(episode.success for episode in episodes)
    assert all(episode.optimal for episode in episodes)
    assert all(episode.length == 2 for episode in episodes)


@mark.parametrize("reductor", ["constant", "xor"])
@mark.parametrize("length", range(1, 21))
def test_exp2_oracle_solves_every_length(reductor, length):

    # Arrange

    reduce_net = constant_net() if reductor == "constant" else xor_net()
    loop = scripted_loop(
        {
            "experiment": "exp2",
            "seed": length,
            "layout": {"pu_hidden": [2], "pu_activation": "relu"},
            "exp2": {
                "reductor": reductor,
                "initial_length": length,
                "success_streak_up": 1000,
            },
        },
        {"pu0": copy_net(), "pu1": reduce_net, "pu2": zero_net()},
    )

    # Act

    episodes, rewards = collect_episode_rewards(loop, 3 * (2 * length + 2))

    # Assert

    assert len(episodes) == 3
    assert rewards == [1.0] * 3
    assert all(episode.success for episode in episodes)
    assert all(episode.optimal for episode in episodes)
    assert all(episode.length == length for episode in episodes)


def test_untrained_exp2_units_still_close_episodes(mock_exp2_config):

    # Arrange

    loop = scripted_loop(mock_exp2_config, {})

    # Act

    episodes = collect_episodes(loop, 60)

    # Assert

    assert episodes
    assert loop.network.iteration == 60
