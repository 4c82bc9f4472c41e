import math

import pytest

import relulim


def identity(n):
    return [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]


def quadrant_net():
    return relulim.Network(2, 2, [(identity(2), [-0.5, -0.5])])


def test_masks_and_norms():
    a = relulim.ActivationMatrix({1, 2}, 3)
    b = relulim.ActivationMatrix({2, 3}, 3)
    assert relulim.activation_product([a, b]).support == {2}
    assert relulim.vector_norm([3.0, -4.0], "l2") == pytest.approx(5.0)
    assert relulim.induced_matrix_norm([[1.0, -2.0], [3.0, 4.0]], "l1") == pytest.approx(6.0)


def test_forward_and_affine_piece():
    net = quadrant_net()
    y, pattern = relulim.forward(net, [0.75, 0.25])
    assert list(y) == pytest.approx([0.25, 0.0])
    assert pattern == [{1}]
    A, c = relulim.affine_piece(net, pattern)
    assert A[0][0] == 1.0 and A[1][1] == 0.0
    assert list(c) == pytest.approx([-0.5, 0.0])


def test_network_json_roundtrip():
    net = quadrant_net()
    back = relulim.Network.from_json(net.to_json())
    assert back.width == 2 and back.depth == 1


def test_regions_and_bound():
    assert relulim.zaslavsky_bound(3, 2) == 7
    cells = relulim.enumerate_regions(quadrant_net())
    assert len(cells) == 4
    patterns = {frozenset(cell["pattern"][0]) for cell in cells}
    assert patterns == {frozenset(), frozenset({1}), frozenset({2}), frozenset({1, 2})}
    with pytest.raises(relulim.ResourceLimitError):
        relulim.enumerate_regions(relulim.Network(2, 9, [([[0.0] * 2] * 9, [1.0] * 9)]))


def test_tail_lemma_and_stabilization():
    lhs, rhs, holds = relulim.verify_tail_lemma([0.5, 0.25, 0.125], 1)
    assert holds and lhs <= rhs
    index, final = relulim.stabilization_index([{1, 2}, {2, 3}, {2, 3}], 3)
    assert index == 2 and final == {2}


def basel_spec():
    return {
        "kind": "identity_perturbation",
        "seed": 3,
        "params": {
            "width": 1,
            "input_dim": 1,
            "alpha": 2.0,
            "scale": 0.0,
            "bias_alpha": 2.0,
            "bias_scale": 1.0,
            "bias_sign": "positive",
        },
    }


def test_generate_and_limits():
    net = relulim.generate_sequence(basel_spec(), 5)
    assert net.depth == 5
    value, status = relulim.series_limit(basel_spec(), n_max=10000)
    assert status == "converged"
    assert value[0] == pytest.approx(math.pi**2 / 6, abs=1e-3)
    _, status = relulim.product_limit(basel_spec(), n_max=100)
    assert status == "converged"


def test_pointwise_and_lp_distance():
    report = relulim.pointwise_experiment(basel_spec(), [1, 10, 100, 1000, 10000], tol=1e-5)
    assert report["verdict"] == "converged"
    exact = sum(1.0 / i**2 for i in range(101, 201))
    est = relulim.lp_distance_estimate(basel_spec(), 100, 200, p="linf", samples=100)
    assert est == pytest.approx(exact, abs=1e-9)
