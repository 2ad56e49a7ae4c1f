import numpy as np
from pytest import mark, raises

from app.core.constants.enums import Activation, RoutePolicy
from app.core.constants.messages import *
from app.core.errors import RejectedInputError
from app.core.generate.seeds import derive_rng
from app.models.processing_unit import ProcessingUnit
from app.models.tensor import FeedForwardNet, Layer, ParamGrads
from app.services.autodiff import backward, finite_diff_grads, forward
from app.services.network import InteractionNetwork
from app.services.tape import (
    ProvenanceTape,
    interference_guard,
    normalize_route_grads,
)


CHAIN_SIZES = [2, 3, 2, 3, 2]


def build_chain(k: int) -> InteractionNetwork:
    """
    c0 -> p0 -> c1 -> ... -> p{k-1} -> ck, every unit executed once.
    """
    rng = derive_rng(9, "tape.chain")
    network = InteractionNetwork(tape=ProvenanceTape(64, 8))
    for index in range(k + 1):
        network.add_node(f"c{index}", CHAIN_SIZES[index])

    for index in range(k):
        sizes = [CHAIN_SIZES[index], 4, CHAIN_SIZES[index + 1]]
        network.add_pu(
            ProcessingUnit(
                f"p{index}",
                FeedForwardNet.initialize(sizes, Activation.TANH, rng),
                [f"c{index}"],
                [f"c{index + 1}"],
            )
        )

    network.write_node("c0", np.array([0.4, -0.7]))
    for index in range(k):
        network.execute_pu(f"p{index}")

    return network


def composed_grads(
    network: InteractionNetwork, k: int, grad: np.ndarray
) -> dict[str, ParamGrads]:
    """
    Backprop through the chain's nets composed into one network.
    """
    x = network.node("c0").read()
    traces = []
    for index in range(k):
        output, trace = forward(network.pu(f"p{index}").net, x)
        traces.append(trace)
        x = output.array()

    grads = {}
    for index in reversed(range(k)):
        input_grad, grads[f"p{index}"] = backward(
            network.pu(f"p{index}").net, traces[index], grad
        )
        grad = input_grad.array()

    return grads


def count_reachable_entries(network: InteractionNetwork) -> int:
    """
    Tape entries reachable from the Nodes through provenance links.
    """
    seen = {}
    links = []
    for node in network.nodes.values():
        links.append(node.last_writer)
        links.extend(node.entry_writers)

    while links:
        link = links.pop()
        if link is None or id(link.entry) in seen:
            continue
        seen[id(link.entry)] = link.entry
        for row in link.entry.upstream:
            links.extend(row)

    return len(seen)


def assert_same_grads(mine: ParamGrads, expected: ParamGrads) -> None:
    for got, reference in zip(mine.arrays, expected.arrays):
        assert np.allclose(got, reference, rtol=1e-6, atol=1e-12)


def test_tape_capacity_below_horizon_rejected():

    with raises(RejectedInputError) as error:
        ProvenanceTape(capacity=2, horizon=4)

    assert error.value.detail == ERROR_TAPE_CAPACITY


def test_backprop_through_two_pus_matches_composition(mock_chain_network):

    # Arrange

    network = mock_chain_network
    x = np.array([0.4, -0.3])
    network.write_node("n0", x)
    network.execute_pu("pu0")
    network.execute_pu("pu1")
    grad = np.array([1.0])

    def through_pu1(output: np.ndarray) -> float:
        return float(forward(network.pu("pu1").net, output)[0].array()[0])

    # Act

    grads = network.tape.backprop_from_node(network.node("n2"), grad)
    expected_pu1 = finite_diff_grads(
        network.pu("pu1").net, network.node("n1").read(), lambda o: o[0]
    )
    expected_pu0 = finite_diff_grads(
        network.pu("pu0").net, x, through_pu1
    )

    # Assert

    assert set(grads) == {"pu0", "pu1"}
    for mine, estimate in zip(grads["pu1"].arrays, expected_pu1.arrays):
        assert np.allclose(mine, estimate, atol=1e-6)
    for mine, estimate in zip(grads["pu0"].arrays, expected_pu0.arrays):
        assert np.allclose(mine, estimate, atol=1e-6)


def test_horizon_one_stops_at_last_writer(mock_chain_network):

    # Arrange

    network = mock_chain_network
    network.write_node("n0", np.array([0.1, 0.2]))
    network.execute_pu("pu0")
    network.execute_pu("pu1")

    # Act

    grads = network.tape.backprop_from_node(
        network.node("n2"), np.array([1.0]), horizon=1
    )

    # Assert

    assert set(grads) == {"pu1"}
    assert network.tape.last_visited == [1]


def test_external_write_cuts_the_chain(mock_chain_network):

    # Arrange

    network = mock_chain_network
    network.write_node("n0", np.array([0.1, 0.2]))
    network.execute_pu("pu0")
    network.write_node("n1", np.array([0.0, 0.5, 1.0]))
    network.execute_pu("pu1")

    # Act

    grads = network.tape.backprop_from_node(
        network.node("n2"), np.array([1.0])
    )

    # Assert

    assert set(grads) == {"pu1"}


def test_evicted_entries_are_not_visited(mock_chain_network):

    # Arrange

    network = mock_chain_network
    network.tape.capacity = network.tape.horizon = 1
    network.write_node("n0", np.array([0.1, 0.2]))
    network.execute_pu("pu0")
    network.execute_pu("pu1")

    # Act

    grads = network.tape.backprop_from_node(
        network.node("n2"), np.array([1.0]), horizon=8
    )

    # Assert

    assert len(network.tape) == 1
    assert set(grads) == {"pu1"}


def test_backprop_repeats_for_identical_executions(mock_chain_network):

    # Arrange

    network = mock_chain_network
    network.write_node("n0", np.array([0.3, 0.3]))
    network.execute_pu("pu0")
    first = network.tape.backprop_from_node(
        network.node("n1"), np.ones(3)
    )

    # Act

    network.execute_pu("pu0")
    second = network.tape.backprop_from_node(
        network.node("n1"), np.ones(3)
    )

    # Assert

    for a, b in zip(first["pu0"].arrays, second["pu0"].arrays):
        assert np.allclose(a, b)


def test_grad_shape_must_match_node(mock_chain_network):

    with raises(RejectedInputError) as error:
        mock_chain_network.tape.backprop_from_node(
            mock_chain_network.node("n1"), np.ones(2)
        )

    assert error.value.detail == ERROR_NODE_GRAD_SHAPE


def test_route_policies():

    # Arrange

    grads = {"pu0": ParamGrads([np.array([3.0, 4.0])])}

    # Act

    none = normalize_route_grads(grads, RoutePolicy.NONE)
    clipped = normalize_route_grads(grads, RoutePolicy.PER_PU_CLIP, 1.0)
    unit = normalize_route_grads(grads, RoutePolicy.PER_PU_UNIT_NORM)

    # Assert

    assert none["pu0"].norm() == 5.0
    assert np.isclose(clipped["pu0"].norm(), 1.0)
    assert np.allclose(clipped["pu0"].arrays[0], [0.6, 0.8])
    assert np.isclose(unit["pu0"].norm(), 1.0)


def test_interference_guard_scales_per_pu():

    # Arrange

    grads = {
        "pu0": ParamGrads([np.array([2.0])]),
        "pu1": ParamGrads([np.array([2.0])]),
    }

    # Act

    scaled = interference_guard(grads, {"pu0": 0.25})

    # Assert

    assert scaled["pu0"].arrays[0][0] == 0.5
    assert scaled["pu1"].arrays[0][0] == 2.0


def test_interference_guard_rejects_zero_scale():

    grads = {"pu0": ParamGrads([np.array([1.0])])}

    with raises(RejectedInputError) as error:
        interference_guard(grads, 0.0)

    assert error.value.detail == ERROR_ROUTE_SCALE


@mark.parametrize("k", [1, 2, 3, 4])
def test_tape_backprop_equals_composed_backprop(k):

    # Arrange

    network = build_chain(k)
    grad = np.array([1.0, -0.5])

    # Act

    grads = network.tape.backprop_from_node(network.node(f"c{k}"), grad)
    expected = composed_grads(network, k, grad)

    # Assert

    assert set(grads) == set(expected)
    for pu_id in expected:
        assert_same_grads(grads[pu_id], expected[pu_id])


@mark.parametrize("k", [1, 2, 3, 4])
@mark.parametrize("horizon", [1, 2, 3, 4])
def test_horizon_visits_the_newest_stages_only(k, horizon):

    # Act

    network = build_chain(k)
    grads = network.tape.backprop_from_node(
        network.node(f"c{k}"), np.ones(2), horizon=horizon
    )

    # Assert

    visited = min(k, horizon)
    assert len(network.tape.last_visited) == visited
    assert set(grads) == {f"p{index}" for index in range(k - visited, k)}


def test_backprop_is_linear_in_the_node_gradient():

    # Arrange

    network = build_chain(3)
    node = network.node("c3")
    first_grad = np.array([0.3, -1.2])
    second_grad = np.array([-0.8, 0.5])

    # Act

    first = network.tape.backprop_from_node(node, first_grad)
    second = network.tape.backprop_from_node(node, second_grad)
    both = network.tape.backprop_from_node(node, first_grad + second_grad)

    # Assert

    for pu_id in both:
        first[pu_id].add_(second[pu_id])
        assert_same_grads(first[pu_id], both[pu_id])


def test_evicted_entries_release_older_executions():

    # Arrange

    rng = derive_rng(3, "tape.loop")
    network = InteractionNetwork(tape=ProvenanceTape(8, 4))
    network.add_node("x", 1)
    network.add_node("m", 1)
    network.add_pu(
        ProcessingUnit(
            "fold",
            FeedForwardNet.initialize([2, 2, 1], Activation.TANH, rng),
            ["x", "m"],
            ["m"],
        )
    )
    network.add_pu(
        ProcessingUnit(
            "keep",
            FeedForwardNet.initialize([1, 2, 1], Activation.TANH, rng),
            ["m"],
            ["m"],
        )
    )
    network.write_node("x", np.array([1.0]))

    # Act

    for _ in range(2000):
        network.execute_pu("fold")
        network.execute_pu("keep")

    # Assert

    oldest = network.tape.entries[0]
    links = [link for row in oldest.upstream for link in row if link]
    evicted = links[0].entry
    assert len(network.tape) == 8
    assert count_reachable_entries(network) <= 2 * network.tape.capacity
    assert evicted.inert
    assert evicted.trace is None
    assert evicted.upstream == []


def test_removed_unit_entries_drop_their_links(mock_chain_network):

    # Arrange

    network = mock_chain_network
    network.write_node("n0", np.array([0.1, 0.2]))
    entry = network.execute_pu("pu0")
    network.execute_pu("pu1")

    # Act

    network.remove_pu("pu0")
    grads = network.tape.backprop_from_node(
        network.node("n2"), np.array([1.0])
    )

    # Assert

    assert entry.trace is None
    assert entry.inputs == []
    assert set(grads) == {"pu1"}


def test_every_path_reaches_an_entry_within_the_horizon():
    """
    d0 -> pa -> d1 -> pb -> d2, and pc reads (d1, d2) into d3. From d3, pa
    is two links away through pc and three through pb.
    """

    # Arrange

    rng = derive_rng(5, "tape.diamond")
    network = InteractionNetwork(tape=ProvenanceTape(16, 8))
    for node_id in ("d0", "d1", "d2", "d3"):
        network.add_node(node_id, 1)
    for pu_id, inputs, output in (
        ("pa", ["d0"], "d1"),
        ("pb", ["d1"], "d2"),
        ("pc", ["d1", "d2"], "d3"),
    ):
        net = FeedForwardNet.initialize(
            [len(inputs), 3, 1], Activation.TANH, rng
        )
        network.add_pu(ProcessingUnit(pu_id, net, inputs, [output]))

    network.write_node("d0", np.array([0.6]))
    for pu_id in ("pa", "pb", "pc"):
        network.execute_pu(pu_id)
    node = network.node("d3")

    # Act

    shallow = network.tape.backprop_from_node(node, np.ones(1), horizon=2)
    visited = list(network.tape.last_visited)
    full = network.tape.backprop_from_node(node, np.ones(1), horizon=8)
    nearest = network.tape.backprop_from_node(node, np.ones(1), horizon=1)

    # Assert

    assert visited == [2, 1, 0]
    for pu_id in ("pa", "pb", "pc"):
        assert_same_grads(shallow[pu_id], full[pu_id])
    assert set(nearest) == {"pc"}


def test_gradient_passes_through_a_non_trainable_unit(mock_chain_network):

    # Arrange

    network = mock_chain_network
    network.add_node("copy", 3)
    network.add_pu(
        ProcessingUnit(
            "mover",
            FeedForwardNet([Layer(np.eye(3), np.zeros(3))]),
            ["n1"],
            ["copy"],
            trainable=False,
        )
    )
    network.write_node("n0", np.array([0.5, -0.1]))
    network.execute_pu("pu0")
    network.execute_pu("mover")
    grad = np.array([0.2, -0.4, 1.0])

    # Act

    through = network.tape.backprop_from_node(network.node("copy"), grad)
    direct = network.tape.backprop_from_node(network.node("n1"), grad)

    # Assert

    assert set(through) == {"pu0"}
    assert_same_grads(through["pu0"], direct["pu0"])
