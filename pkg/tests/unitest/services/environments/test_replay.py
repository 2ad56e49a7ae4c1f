import numpy as np
from pytest import fixture

from app.core.constants.enums import EpisodeEvent
from app.services.environments import (
    ReplayEnvironment,
    ReplayLane,
    ReplayStore,
)
from app.services.network import InteractionNetwork
from app.services.tape import ProvenanceTape


@fixture
def mock_replay_network():
    network = InteractionNetwork(tape=ProvenanceTape(16, 4))
    for node_id in ("r0", "r1", "r2"):
        network.add_node(node_id, 1)
    return network


@fixture
def mock_store(mock_rng):
    return ReplayStore(3, mock_rng)


@fixture
def mock_replay(mock_replay_network, mock_store, mock_rng):
    env = ReplayEnvironment(
        mock_rng,
        mock_store,
        [
            ReplayLane("pu1", ["r0"], "r1"),
            ReplayLane("pu2", ["r0"], "r2"),
        ],
    )
    mock_replay_network.add_environment(env)
    return env


def test_store_keeps_the_newest_samples(mock_store):

    # Act

    for value in range(5):
        mock_store.add("pu1", [np.array([value])], np.array([value]))

    # Assert

    assert len(mock_store) == 3
    assert [s.target[0] for s in mock_store.samples] == [2.0, 3.0, 4.0]


def test_store_samples_only_requested_units(mock_store):

    # Arrange

    mock_store.add("pu1", [np.array([0.1])], np.array([0.2]))
    mock_store.add("pu2", [np.array([0.3])], np.array([0.15]))

    # Act

    picks = {mock_store.sample({"pu2"}).pu_id for _ in range(20)}
    missing = mock_store.sample({"pu9"})

    # Assert

    assert picks == {"pu2"}
    assert missing is None


def test_perform_on_empty_store_writes_nothing(
    mock_replay_network, mock_replay
):

    # Act

    feedback = mock_replay.perform(mock_replay_network, 0)

    # Assert

    assert feedback.reward == 0.0
    assert mock_replay.pending == {}
    assert mock_replay_network.node("r0").last_writer is None


def test_replayed_output_is_graded_against_stored_target(
    mock_replay_network, mock_replay, mock_store
):

    # Arrange

    mock_store.add("pu2", [np.array([0.6])], np.array([0.3]))

    # Act

    mock_replay.perform(mock_replay_network, 0)
    written = mock_replay_network.node("r0").read()
    mock_replay_network.write_node("r2", np.array([0.5]))
    feedback = mock_replay.evaluate(mock_replay_network, ["r2"])
    again = mock_replay.evaluate(mock_replay_network, ["r2"])

    # Assert

    assert np.allclose(written, [0.6])
    assert feedback.reward == 0.05
    assert feedback.events == [EpisodeEvent.REPLAYED]
    assert feedback.episode_end is False
    assert feedback.gradients[0][0] == "r2"
    assert np.allclose(feedback.gradients[0][1], [0.4])
    assert again.reward == 0.0
