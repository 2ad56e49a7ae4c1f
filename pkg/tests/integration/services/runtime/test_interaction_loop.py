import numpy as np
from pytest import fixture, mark

from app.core.constants.enums import PhaseName
from app.core.generate.seeds import derive_rng
from app.models.action import ActionId
from app.models.tensor import FeedForwardNet
from app.schemas.config import RunConfig
from app.services.autodiff import apply_grads, backward, forward, mse_loss
from app.services.control_unit import ControlUnit
from app.services.environments import Environment, target_net_stream
from app.services.harness import build_loop
from app.services.layouts import build_layout
from app.services.runtime import InteractionLoop
from app.services.snapshot import snapshot
from tests.utils import scripted_loop


class BrokenEnvironment(Environment):

    def evaluate(self, network, written):
        raise ZeroDivisionError("broken grader")


@fixture
def mock_fnn_config():
    return {
        "experiment": "fnn",
        "seed": 5,
        "control_unit": {"hidden": [8], "batch_size": 4},
    }


def test_step_runs_phases_in_order(mock_fnn_config):

    # Arrange

    config = RunConfig.model_validate(mock_fnn_config)
    loop = build_loop(config, build_layout(config).network)

    # Act

    outcome = loop.step()

    # Assert

    assert outcome.phases == [
        PhaseName.INPUT,
        PhaseName.ASSEMBLE,
        PhaseName.SELECT,
        PhaseName.DISPATCH,
        PhaseName.FEEDBACK,
        PhaseName.STORE,
    ]
    assert outcome.iteration == 0
    assert loop.network.iteration == 1
    assert len(loop.control_unit.buffer) == 1


def test_failing_handler_is_penalized_and_the_loop_continues(
    mock_fnn_config,
):

    # Arrange

    config = RunConfig.model_validate(mock_fnn_config)
    network = build_layout(config).network
    network.add_environment(BrokenEnvironment("broken", derive_rng(0, "x")))
    loop = build_loop(config, network)

    # Act

    outcomes = [loop.step() for _ in range(3)]

    # Assert

    assert outcomes[0].reward == config.runtime.handler_penalty
    assert [outcome.iteration for outcome in outcomes] == [0, 1, 2]


def test_wheels_reward_following_the_script(mock_fnn_config):

    # Arrange

    data = {
        **mock_fnn_config,
        "wheels": {"enabled": True, "scripted_reward": 0.7},
    }
    config = RunConfig.model_validate(data)
    loop = build_loop(config, build_layout(config).network)

    # Act

    outcomes = [loop.step() for _ in range(40)]

    # Assert

    for outcome in outcomes:
        expected = 0.7 if outcome.chosen == outcome.scripted else 0.0
        assert outcome.reward == expected
        assert outcome.action == outcome.chosen
        assert outcome.followed_script is (outcome.chosen == outcome.scripted)


def test_wheels_come_off_after_active_until(mock_fnn_config):

    # Arrange

    data = {**mock_fnn_config, "wheels": {"enabled": True, "active_until": 5}}
    config = RunConfig.model_validate(data)
    loop = build_loop(config, build_layout(config).network)

    # Act

    outcomes = [loop.step() for _ in range(10)]

    # Assert

    assert all(outcome.scripted is not None for outcome in outcomes[:5])
    for outcome in outcomes[5:]:
        assert outcome.scripted is None
        assert outcome.followed_script is None
        assert outcome.reward == outcome.env_reward


def test_enforced_wheels_execute_the_script(mock_fnn_config):

    # Arrange

    loop = scripted_loop(mock_fnn_config, {})

    # Act

    actions = [loop.step().action.label() for _ in range(6)]

    # Assert

    assert actions == ["task:0", "pu0"] * 3


def test_enforced_wheels_run_the_movers_in_order(mock_fnn_config):

    # Arrange

    loop = scripted_loop({**mock_fnn_config, "fixture": {"movers": True}}, {})

    # Act

    outcomes = [loop.step() for _ in range(8)]

    # Assert

    labels = [outcome.action.label() for outcome in outcomes]
    assert labels == ["task:0", "mv_in", "pu0", "mv_out"] * 2
    assert [outcome.episode_end for outcome in outcomes[:4]] == [
        False,
        False,
        False,
        True,
    ]
    assert set(outcomes[3].pu_grad_norms) == {"pu0"}


@mark.parametrize("movers", [False, True])
def test_enforced_fnn_matches_plain_sgd(mock_fnn_config, movers):

    # Arrange

    samples = 1000
    data = {**mock_fnn_config, "fixture": {"movers": movers}}
    config = RunConfig.model_validate(data)
    loop = scripted_loop(data, {})
    steps = 4 if movers else 2
    fixed = {
        pu_id: [param.copy() for param in pu.net.parameters()]
        for pu_id, pu in loop.network.pus.items()
        if not pu.trainable
    }

    net = FeedForwardNet.initialize(
        [2, *config.layout.pu_hidden, 1],
        config.layout.pu_activation,
        derive_rng(config.seed, "pu.pu0"),
    )
    optimizer = config.optimizer.pu.build()
    stream = target_net_stream(derive_rng(config.seed, "env.task"), 2, 1)

    # Act

    for _ in range(steps * samples):
        loop.step()

    for _ in range(samples):
        x, target = next(stream)
        output, trace = forward(net, x)
        _, grad = mse_loss(output.array(), target)
        _, grads = backward(net, trace, grad.array())
        apply_grads(net, grads, optimizer)

    # Assert

    trained = loop.network.pu("pu0").net
    for mine, expected in zip(trained.parameters(), net.parameters()):
        assert np.allclose(mine, expected, rtol=1e-6, atol=1e-12)

    assert sorted(fixed) == (["mv_in", "mv_out"] if movers else [])
    for pu_id, params in fixed.items():
        for kept, now in zip(params, loop.network.pu(pu_id).net.parameters()):
            assert np.array_equal(kept, now)


@mark.parametrize("batched", [False, True])
def test_batched_gradients_apply_their_sum(mock_chain_network, batched):

    # Arrange

    network = mock_chain_network
    control_unit = ControlUnit(hidden=[4])
    control_unit.attach(network)
    loop = InteractionLoop(network, control_unit, batched=batched)

    network.write_node("n0", np.array([0.5, -0.5]))
    network.execute_pu("pu0")
    network.execute_pu("pu1")

    pu0 = network.pu("pu0").net
    before = [param.copy() for param in pu0.parameters()]
    expected = network.tape.backprop_from_node(
        network.node("n1"), np.ones(3)
    )["pu0"]
    expected.add_(
        network.tape.backprop_from_node(network.node("n2"), np.ones(1))[
            "pu0"
        ]
    )

    # Act

    loop.route_gradient("n1", np.ones(3))
    loop.route_gradient("n2", np.ones(1))
    if batched:
        untouched = [param.copy() for param in pu0.parameters()]
        loop._flush_batch()

    # Assert

    if batched:
        for old, kept in zip(before, untouched):
            assert np.array_equal(old, kept)
        for old, new, grad in zip(
            before, pu0.parameters(), expected.arrays
        ):
            assert np.allclose(new, old - 0.1 * grad)
    else:
        assert not np.allclose(before[0], pu0.parameters()[0])


def test_removed_pu_is_never_selected(mock_fnn_config):

    # Arrange

    data = {**mock_fnn_config, "control_unit": {"hidden": [8], "train": False}}
    config = RunConfig.model_validate(data)
    network = build_layout(config).network
    loop = build_loop(config, network)
    network.remove_pu("pu0")

    # Act

    actions = {loop.step().action for _ in range(30)}

    # Assert

    assert actions == {ActionId.env("task", 0)}


def test_run_zero_iterations_changes_nothing(mock_exp2_config):

    # Arrange

    config = RunConfig.model_validate(mock_exp2_config)
    loop = build_loop(config, build_layout(config).network)
    loop.run(20)
    before = snapshot(loop.network)

    # Act

    result = loop.run(0)

    # Assert

    assert result["iterations"] == 0
    assert result["mean_reward"] == 0.0
    assert snapshot(loop.network) == before


def test_split_runs_match_one_run(mock_exp2_config):

    # Arrange

    config = RunConfig.model_validate(mock_exp2_config)
    split = build_loop(config, build_layout(config).network)
    whole = build_loop(config, build_layout(config).network)

    # Act

    first = split.run(70)
    second = split.run(50)
    combined = whole.run(120)

    # Assert

    assert snapshot(split.network) == snapshot(whole.network)
    assert np.isclose(
        first["total_reward"] + second["total_reward"],
        combined["total_reward"],
    )


def pin_selection(loop: InteractionLoop, greedy: bool) -> None:
    """
    Make the CU pick the scripted action, flagged greedy or exploratory.
    """
    env = loop.network.environment("task")

    def select(state, eps):
        return env.scripted_action(loop.network), greedy

    loop.control_unit.select_action = select


@mark.parametrize("greedy", [True, False])
def test_exploratory_actions_move_parameters_less(mock_fnn_config, greedy):

    # Arrange

    data = {**mock_fnn_config, "tape": {"exploratory_scale": 0.25}}
    reference = scripted_loop(data, {})
    loop = scripted_loop(data, {})
    pin_selection(reference, True)
    pin_selection(loop, greedy)

    pu0 = loop.network.pu("pu0").net
    before = [param.copy() for param in pu0.parameters()]

    # Act

    for _ in range(2):
        reference.step()
        outcome = loop.step()

    # Assert

    full = reference.network.pu("pu0").net.parameters()
    scale = 1.0 if greedy else 0.25

    assert outcome.action == ActionId.pu("pu0")
    assert outcome.greedy is greedy
    assert not np.allclose(full[0], before[0])
    for old, new, expected in zip(before, pu0.parameters(), full):
        assert np.allclose(new - old, scale * (expected - old))
