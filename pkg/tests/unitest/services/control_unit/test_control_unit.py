import numpy as np
from pytest import fixture, raises

from app.core.constants.enums import Activation
from app.core.constants.messages import *
from app.core.errors import ConfigurationError, ConflictError
from app.models.action import ActionId
from app.models.processing_unit import ProcessingUnit
from app.models.tensor import FeedForwardNet
from app.models.transition import Transition
from app.services.control_unit import ControlUnit, EpsilonSchedule


@fixture
def mock_control_unit(mock_chain_network):
    control_unit = ControlUnit(hidden=[8], batch_size=4, seed=11)
    control_unit.attach(mock_chain_network)
    return control_unit


def add_pu(network, pu_id: str, rng) -> ProcessingUnit:
    pu = ProcessingUnit(
        pu_id,
        FeedForwardNet.initialize([2, 3], Activation.TANH, rng),
        ["n0"],
        ["n1"],
    )
    network.add_pu(pu)
    return pu


def test_epsilon_decays_linearly_and_scales():

    # Arrange

    schedule = EpsilonSchedule(1.0, 0.05, 100)

    # Act / Assert

    assert schedule.value(0) == 1.0
    assert np.isclose(schedule.value(50), 0.525)
    assert np.isclose(schedule.value(1000), 0.05)
    assert np.isclose(schedule.value(1000, scale=0.5), 0.025)


def test_attach_builds_one_head_per_action(mock_control_unit):

    # Assert

    assert mock_control_unit.heads == [ActionId.pu("pu0"), ActionId.pu("pu1")]
    assert mock_control_unit.q_net.output_dim == 2
    assert mock_control_unit.q_net.input_dim == (3 + 1) * 16 + 2
    assert mock_control_unit.target_net.checksum() == (
        mock_control_unit.q_net.checksum()
    )


def test_state_encodes_history_and_last_action(
    mock_chain_network, mock_control_unit
):

    # Arrange

    capacity = mock_control_unit.assembler.action_capacity

    # Act

    mock_control_unit.record_action(ActionId.pu("pu1"), True)
    state = mock_control_unit.assemble_state(mock_chain_network)

    # Assert

    assert state[2 * capacity + 1] == 1.0
    assert state[3 * capacity + 1] == 1.0
    assert state[4 * capacity] == 1.0
    assert state[4 * capacity + 1] == 1 / 20
    assert np.isclose(state.sum(), 3.05)


def test_visible_node_adds_state_columns(
    mock_chain_network, mock_control_unit
):

    # Arrange

    size = mock_control_unit.assembler.size

    # Act

    mock_chain_network.add_node("seen", 3, cu_visible=True)
    mock_chain_network.write_node("seen", np.array([1.0, 2.0, 3.0]))
    state = mock_control_unit.assemble_state(mock_chain_network)

    # Assert

    assert state.size == size + 3
    assert mock_control_unit.q_net.input_dim == size + 3
    assert np.array_equal(state[-3:], [1.0, 2.0, 3.0])


def test_td_target_ignores_next_state_at_episode_end(mock_control_unit):

    # Arrange

    size = mock_control_unit.assembler.size
    far = np.full(size, 50.0)
    batch = [
        Transition(np.zeros(size), 0, 0.3, far, True),
        Transition(np.zeros(size), 0, 0.3, far, False),
    ]
    best = mock_control_unit.q_values(far).max()

    # Act

    targets = mock_control_unit.td_targets(batch)

    # Assert

    assert targets[0] == 0.3
    assert np.isclose(targets[1], 0.3 + 0.9 * best)


def test_td_update_moves_q_toward_target(mock_control_unit):

    # Arrange

    size = mock_control_unit.assembler.size
    state = np.zeros(size)
    state[0] = 1.0
    batch = [Transition(state, 1, 2.0, state, True)]

    # Act

    errors = [mock_control_unit.td_update(batch) for _ in range(200)]

    # Assert

    assert errors[-1] < errors[0]
    assert mock_control_unit.updates == 200


def test_td_update_rejects_empty_batch(mock_control_unit):

    with raises(ConfigurationError) as error:
        mock_control_unit.td_update([])

    assert error.value.detail == ERROR_BATCH_EMPTY


def test_train_step_waits_for_a_full_batch(mock_control_unit):

    # Arrange

    size = mock_control_unit.assembler.size
    transition = Transition(np.zeros(size), 0, 1.0, np.zeros(size), False)

    # Act

    for _ in range(3):
        mock_control_unit.store_transition(transition)
    waiting = mock_control_unit.train_step()
    mock_control_unit.store_transition(transition)
    trained = mock_control_unit.train_step()

    # Assert

    assert waiting is None
    assert trained is not None


def test_target_syncs_after_configured_updates(mock_chain_network):

    # Arrange

    control_unit = ControlUnit(hidden=[8], target_sync=3, seed=1)
    control_unit.attach(mock_chain_network)
    size = control_unit.assembler.size
    batch = [Transition(np.ones(size), 0, 1.0, np.ones(size), True)]

    # Act

    control_unit.td_update(batch)
    control_unit.td_update(batch)
    before = control_unit.target_net.checksum()
    control_unit.td_update(batch)

    # Assert

    assert before != control_unit.q_net.checksum()
    assert control_unit.target_net.checksum() == control_unit.q_net.checksum()


def test_registered_action_keeps_greedy_choices(
    mock_chain_network, mock_control_unit, mock_rng
):

    # Arrange

    size = mock_control_unit.assembler.size
    probes = mock_rng.normal(size=(50, size))
    before = [
        mock_control_unit.select_action(state, 0.0)[0] for state in probes
    ]

    # Act

    pu = add_pu(mock_chain_network, "pu2", mock_rng)
    head = mock_control_unit.head_of(ActionId.pu(pu.id))
    after = [
        mock_control_unit.select_action(state, 0.0)[0] for state in probes
    ]

    # Assert

    assert head == 2
    assert before == after


def test_registered_head_starts_below_probe_minimum(
    mock_control_unit, mock_rng
):

    # Arrange

    size = mock_control_unit.assembler.size
    probes = mock_rng.normal(size=(20, size))
    lowest = min(mock_control_unit.q_values(state).min() for state in probes)

    # Act

    head = mock_control_unit.register_action(ActionId.env("x"), probes)

    # Assert

    for state in probes:
        assert mock_control_unit.q_values(state)[head] < lowest


def test_register_duplicate_action_conflicts(mock_control_unit):

    with raises(ConflictError):
        mock_control_unit.register_action(ActionId.pu("pu0"))


def test_register_past_capacity_fails(mock_chain_network):

    # Arrange

    control_unit = ControlUnit(hidden=[4], action_capacity=2)
    control_unit.attach(mock_chain_network)

    # Act / Assert

    with raises(ConfigurationError) as error:
        control_unit.register_action(ActionId.env("x"))

    assert error.value.detail == ERROR_ACTION_CAPACITY


def test_removed_pu_head_is_masked(mock_chain_network, mock_control_unit):

    # Arrange

    state = np.zeros(mock_control_unit.assembler.size)

    # Act

    mock_chain_network.remove_pu("pu0")
    values = mock_control_unit.q_values(state)
    picks = {
        mock_control_unit.select_action(state, 1.0)[0] for _ in range(50)
    }

    # Assert

    assert values[0] == -np.inf
    assert mock_control_unit.active_heads == [1]
    assert picks == {ActionId.pu("pu1")}


def test_ties_go_to_the_lowest_head(mock_control_unit):

    # Arrange

    last = mock_control_unit.q_net.layers[-1]
    last.weight[:] = 0.0
    last.bias[:] = 0.5
    state = np.ones(mock_control_unit.assembler.size)

    # Act

    action, greedy = mock_control_unit.select_action(state, 0.0)

    # Assert

    assert action == ActionId.pu("pu0")
    assert greedy is True


def test_exploration_is_seeded(mock_chain_network):

    # Arrange

    units = []
    for _ in range(2):
        control_unit = ControlUnit(hidden=[4], seed=5)
        control_unit.attach(mock_chain_network)
        units.append(control_unit)
    state = np.zeros(units[0].assembler.size)

    # Act

    picks = [
        [unit.select_action(state, 0.5) for _ in range(20)] for unit in units
    ]

    # Assert

    assert picks[0] == picks[1]


def test_full_exploration_is_uniform(mock_chain_network, mock_rng):

    # Arrange

    add_pu(mock_chain_network, "pu2", mock_rng)
    add_pu(mock_chain_network, "pu3", mock_rng)
    control_unit = ControlUnit(hidden=[4], seed=21)
    control_unit.attach(mock_chain_network)
    state = np.zeros(control_unit.assembler.size)
    draws, heads = 20000, 4

    # Act

    picks = [control_unit.select_action(state, 1.0) for _ in range(draws)]

    # Assert

    assert not any(greedy for _, greedy in picks)
    labels = [action.label() for action, _ in picks]
    expected = draws / heads
    sigma = np.sqrt(draws * (1 / heads) * (1 - 1 / heads))
    for label in ("pu0", "pu1", "pu2", "pu3"):
        assert abs(labels.count(label) - expected) <= 5 * sigma
