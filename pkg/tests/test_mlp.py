import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ardpca.mlp import (LINEAR, LOGISTIC, Layout, Network, data_error_grad, forward,
                        gauss_newton_hessian, init_network, load_network_csv,
                        output_jacobian, regularized_error_grad, save_network_csv, unpack)

from oracles import central_difference


def zero_net(layout):
    return unpack(layout, np.zeros(layout.n_params))


def random_problem(seed, kind=None):
    rng = np.random.default_rng(seed)
    kind = kind or (LOGISTIC if seed % 2 else LINEAR)
    n_in, nh, n_out = rng.integers(1, 5), rng.integers(1, 6), rng.integers(1, 4)
    layout = Layout(int(n_in), int(nh), int(n_out), kind)
    net = init_network(layout, seed)
    x = rng.standard_normal((7, layout.n_in))
    if kind == LOGISTIC:
        t = rng.uniform(0, 1, (7, layout.n_out))
    else:
        t = rng.standard_normal((7, layout.n_out))
    return net, x, t


def assert_gradient_matches(f, analytic, w):
    numeric = central_difference(f, w, h=1e-5)
    # relative to the component size, with a floor for components near zero
    scale = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), 1e-3)
    assert np.max(np.abs(analytic - numeric) / scale) < 1e-5


def test_same_seed_same_network():
    lay = Layout(4, 3, 2)
    a, b = init_network(lay, 9), init_network(lay, 9)
    np.testing.assert_array_equal(a.params, b.params)


def test_parameter_count():
    assert Layout(3, 8, 1).n_params == 41


def test_grouping():
    lay = Layout(50, 8, 3)
    sizes = lay.group_sizes()
    assert lay.n_groups == 53
    np.testing.assert_array_equal(sizes[:50], 8)
    np.testing.assert_array_equal(sizes[50:], [8, 24, 3])
    assert sizes.sum() == lay.n_params


def test_input_group_holds_its_outgoing_weights():
    lay = Layout(3, 4, 2)
    net = init_network(lay, 0)
    idx = lay.group_index()
    np.testing.assert_array_equal(net.params[idx == 1], net.w1[1])


def test_zero_network_outputs():
    assert np.all(forward(zero_net(Layout(3, 2, 2, LOGISTIC)), np.ones(3)) == 0.5)
    assert np.all(forward(zero_net(Layout(3, 2, 2, LINEAR)), np.ones(3)) == 0.0)


def test_hand_forward():
    lay = Layout(1, 1, 1, LINEAR)
    net = Network(lay, np.array([[1.0]]), np.zeros(1), np.array([[1.0]]), np.zeros(1))
    assert forward(net, np.array([0.5]))[0] == pytest.approx(0.46211715726)


def test_forward_length_mismatch():
    with pytest.raises(ValueError):
        forward(init_network(Layout(3, 2, 1), 0), np.zeros(4))


def test_zero_error_at_zero_network():
    lay = Layout(2, 3, 1, LINEAR)
    e = data_error_grad(zero_net(lay), np.ones((4, 2)), np.zeros((4, 1)))
    assert e.error == 0.0
    np.testing.assert_array_equal(e.grad, 0.0)


def test_cross_entropy_single_example():
    e = data_error_grad(zero_net(Layout(2, 2, 1, LOGISTIC)), np.ones((1, 2)), [[1.0]])
    assert e.error == pytest.approx(np.log(2))


def test_target_shape_mismatch():
    with pytest.raises(ValueError):
        data_error_grad(init_network(Layout(2, 2, 2), 0), np.ones((3, 2)), np.ones((3, 1)))


@pytest.mark.parametrize("seed", range(20))
def test_data_gradient_finite_difference(seed):
    net, x, t = random_problem(seed)
    lay = net.layout
    assert lay.n_params <= 60

    def f(w):
        return data_error_grad(unpack(lay, w), x, t).error

    assert_gradient_matches(f, data_error_grad(net, x, t).grad, net.params)


@pytest.mark.parametrize("seed", range(20))
def test_regularized_gradient_finite_difference(seed):
    net, x, t = random_problem(seed)
    lay = net.layout
    alphas = np.random.default_rng(seed + 100).uniform(0.01, 2, lay.n_groups)

    def f(w):
        return regularized_error_grad(unpack(lay, w), x, t, alphas).error

    assert_gradient_matches(f, regularized_error_grad(net, x, t, alphas).grad, net.params)


def test_zero_alphas_reduce_to_data_error():
    net, x, t = random_problem(3)
    a = regularized_error_grad(net, x, t, np.zeros(net.layout.n_groups))
    b = data_error_grad(net, x, t)
    assert a.error == b.error
    np.testing.assert_array_equal(a.grad, b.grad)


def test_penalty_hand_value():
    lay = Layout(1, 1, 1, LINEAR)
    net = unpack(lay, np.array([2.0, 0.0, 0.0, 0.0]))
    e = regularized_error_grad(net, np.zeros((0, 1)), np.zeros((0, 1)), [3.0, 1.0, 1.0, 1.0])
    assert e.error == pytest.approx(6.0)
    assert e.grad[0] == pytest.approx(6.0)


@pytest.mark.parametrize("alphas", [[-1.0, 1, 1, 1], [np.nan, 1, 1, 1]])
def test_invalid_hyperparameter(alphas):
    net = init_network(Layout(1, 1, 1), 0)
    with pytest.raises(ValueError, match="invalid hyperparameter"):
        regularized_error_grad(net, np.zeros((2, 1)), np.zeros((2, 1)), alphas)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_logistic_range_and_nonnegative_cross_entropy(seed):
    net, x, t = random_problem(seed, LOGISTIC)
    y = forward(net, 5 * x)
    assert np.all((y > 0) & (y < 1))
    assert data_error_grad(net, x, t).error >= 0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_hidden_unit_permutation_symmetry(seed):
    net, x, _ = random_problem(seed)
    perm = np.random.default_rng(seed).permutation(net.layout.n_hidden)
    swapped = Network(net.layout, net.w1[:, perm], net.b1[perm], net.w2[perm], net.b2)
    np.testing.assert_allclose(forward(swapped, x), forward(net, x), atol=1e-12)


def test_jacobian_finite_difference():
    net, x, _ = random_problem(4, LINEAR)
    jac = output_jacobian(net, x)
    for k in range(net.layout.n_out):
        def f(w, k=k):
            return forward(unpack(net.layout, w), x)[:, k].sum()
        np.testing.assert_allclose(jac[:, k].sum(axis=0), central_difference(f, net.params),
                                   atol=1e-8)


def test_gauss_newton_linear_is_jacobian_outer_product():
    net, x, _ = random_problem(6, LINEAR)
    j = output_jacobian(net, x).reshape(-1, net.layout.n_params)
    np.testing.assert_allclose(gauss_newton_hessian(net, x), j.T @ j)


def test_gauss_newton_logistic_weighting():
    net, x, _ = random_problem(5, LOGISTIC)
    y = forward(net, x)
    j = output_jacobian(net, x) * np.sqrt(y * (1 - y))[:, :, None]
    j = j.reshape(-1, net.layout.n_params)
    np.testing.assert_allclose(gauss_newton_hessian(net, x), j.T @ j)


def test_network_csv_round_trip(tmp_path):
    net = init_network(Layout(3, 4, 2, LOGISTIC), 1)
    path = tmp_path / "net.csv"
    save_network_csv(net, path)
    back = load_network_csv(path)
    assert back.layout == net.layout
    np.testing.assert_array_equal(back.params, net.params)


def test_network_csv_bad_line(tmp_path):
    path = tmp_path / "net.csv"
    path.write_text("#mlp,1,1,1,linear\n0.1\nabc\n0.2\n0.3\n")
    with pytest.raises(ValueError, match="line 3"):
        load_network_csv(path)
