"""Euler-scheme networks: exact representation, oracles, a priori bounds."""

import math

import numpy as np
import pytest

from anncalc import (
    DomainError,
    EulerSpec,
    GrowthBoundInputs,
    Network,
    RELU,
    ShapeError,
    affine,
    compose,
    dims,
    euler_nodes,
    euler_oracle,
    euler_space_net,
    gronwall_bound,
    identity_net,
    networks_equal,
    param_count,
    perturbed_iterates,
    realize,
    relu_identity,
    residual_chain,
    residual_step,
    spacetime_net,
    spacetime_param_bound,
    time_hat_nets,
)

from conftest import random_net


def make_spec(rng, d, N, depth, y_scale=0.3, eps=1.0, q=3.0):
    drift = random_net(rng, d, d, depth, scale=0.6)
    y = tuple(y_scale * rng.standard_normal((N, d)))
    return EulerSpec(drift, 1.0, N, y, eps, q)


# ---------------------------------------------------------------------------
# residual steps


def test_residual_step_zero_first_net(rng):
    d = 2
    zero = Network(((np.zeros((3, d)), np.zeros(3)), (np.zeros((d, 3)), np.zeros(d))))
    phi2 = random_net(rng, d, d, 2)
    net = residual_step(zero, phi2, relu_identity(d))
    x = rng.standard_normal((20, d))
    assert np.allclose(realize(net, RELU, x), realize(phi2, RELU, x), rtol=1e-12, atol=1e-12)


def test_residual_step_matches_direct_evaluation(rng):
    d = 3
    phi1 = random_net(rng, d, d, 3)
    phi2 = random_net(rng, d, d, 2)
    net = residual_step(phi1, phi2, relu_identity(d))
    x = rng.standard_normal((50, d))
    f2 = realize(phi2, RELU, x)
    want = f2 + realize(phi1, RELU, f2)
    assert np.allclose(realize(net, RELU, x), want, rtol=1e-12, atol=1e-11)


def test_residual_step_dims_and_param_identity(rng):
    for _ in range(50):
        d = int(rng.integers(1, 4))
        emu = relu_identity(d)
        i = emu.width
        L1 = int(rng.integers(2, 4))
        phi1 = random_net(rng, d, d, L1)
        phi2 = random_net(rng, d, d, int(rng.integers(1, 4)))
        net = residual_step(phi1, phi2, emu)
        d1, d2 = dims(phi1).dims, dims(phi2).dims
        assert dims(net).dims == d2[:-1] + tuple(l + i for l in d1[1:-1]) + (d1[-1],)
        expected = (
            param_count(phi1)
            + param_count(phi2)
            + (i - d) * (d2[-2] + 1)
            + d1[1] * (d2[-2] - d)
            + (L1 - 2) * i * (i + 1)
            + i * sum(d1[2:])
            + i * sum(d1[1 : L1 - 1])
        )
        assert param_count(net) == expected


def test_residual_step_needs_depth_two(rng):
    d = 2
    with pytest.raises(ShapeError):
        residual_step(random_net(rng, d, d, 1), random_net(rng, d, d, 2), relu_identity(d))


def test_residual_chain_base_case(rng):
    psi = random_net(rng, 2, 2, 2)
    assert residual_chain(psi, [], relu_identity(2), 0) is psi


def test_residual_chain_affine_preserves_dims(rng):
    d = 2
    emu = relu_identity(d)
    phis = [random_net(rng, d, d, 1) for _ in range(3)]
    chain = residual_chain(emu.net, phis, emu, 3)
    assert dims(chain).dims == dims(emu.net).dims
    x = rng.standard_normal((10, d))
    want = x.copy()
    for phi in phis:
        want = want + realize(phi, RELU, want)
    assert np.allclose(realize(chain, RELU, x), want, rtol=1e-12, atol=1e-11)


def test_residual_chain_matches_recursion(rng):
    d = 3
    emu = relu_identity(d)
    # hypothesis: second-to-last widths non-decreasing along the chain
    widths = sorted(int(rng.integers(1, 5)) for _ in range(4))
    phis = [
        Network(
            (
                (0.6 * rng.standard_normal((w, d)) / np.sqrt(d), rng.standard_normal(w)),
                (0.6 * rng.standard_normal((d, w)) / np.sqrt(w), rng.standard_normal(d)),
            )
        )
        for w in widths
    ]
    chain = residual_chain(emu.net, phis, emu, 4)
    x = rng.standard_normal((20, d))
    want = x.copy()
    for phi in phis:
        want = want + realize(phi, RELU, want)
    assert np.allclose(realize(chain, RELU, x), want, rtol=1e-12, atol=1e-11)


def test_residual_chain_names_failed_inequality(rng):
    d = 2
    emu = relu_identity(d)
    wide = Network(((np.zeros((5, d)), np.zeros(5)), (np.zeros((d, 5)), np.zeros(d))))
    narrow = Network(((np.zeros((1, d)), np.zeros(1)), (np.zeros((d, 1)), np.zeros(d))))
    with pytest.raises(ShapeError, match="non-decreasing"):
        residual_chain(emu.net, [wide, narrow], emu, 2)
    fat_psi = Network(((np.zeros((9, d)), np.zeros(9)), (np.zeros((d, 9)), np.zeros(d))))
    with pytest.raises(ShapeError, match="second-to-last"):
        residual_chain(fat_psi, [narrow, wide], emu, 2)


# ---------------------------------------------------------------------------
# Euler space networks


def test_euler_space_n_zero_realizes_identity(rng):
    spec = make_spec(rng, 3, 4, 2)
    net = euler_space_net(spec, 0)
    x = rng.standard_normal((10, 3))
    assert np.allclose(realize(net, RELU, x), x, rtol=1e-12, atol=1e-12)


def test_euler_space_closed_form_linear_drift():
    # drift realizing mu(x) = x with one hidden layer
    drift = identity_net(1)
    spec = EulerSpec(drift, 1.0, 4, tuple(np.zeros((4, 1))))
    net = euler_space_net(spec, 4)
    for x in (-1.5, 0.3, 2.0):
        got = realize(net, RELU, [x])[0]
        want = (1.0 + 0.25) ** 4 * x
        assert got == pytest.approx(want, rel=1e-12)


def test_euler_space_matches_recursion(rng):
    for _ in range(10):
        d = int(rng.integers(1, 6))
        N = int(rng.integers(1, 17))
        spec = make_spec(rng, d, N, int(rng.integers(1, 4)))
        x = rng.standard_normal(d)
        nodes = euler_nodes(spec, x)
        for n in (0, N // 2, N):
            got = realize(euler_space_net(spec, n), RELU, x)
            scale = max(1.0, float(np.linalg.norm(nodes[n])))
            assert np.linalg.norm(got - nodes[n]) / scale <= 1e-11


def test_euler_space_hidden_count_law(rng):
    for depth in (1, 2, 3):
        spec = make_spec(rng, 2, 5, depth)
        for n in (0, 2, 5):
            net = euler_space_net(spec, n)
            assert net.hidden == 1 + n * spec.drift.hidden


def test_euler_space_param_bound(rng):
    spec = make_spec(rng, 2, 6, 2)
    emu = relu_identity(2)
    p_emu, p_drift = param_count(emu.net), param_count(spec.drift)
    for n in (0, 3, 6):
        net = euler_space_net(spec, n)
        assert param_count(net) <= p_emu + n * (0.5 * p_emu + p_drift) ** 2


def test_euler_space_adaptedness_is_bit_exact(rng):
    spec = make_spec(rng, 2, 6, 2)
    z = tuple(np.array(v) for v in spec.y[:3]) + tuple(
        v + rng.standard_normal(2) for v in spec.y[3:]
    )
    other = EulerSpec(spec.drift, spec.T, spec.N, z)
    net_y = euler_space_net(spec, 3)
    net_z = euler_space_net(other, 3)
    assert networks_equal(net_y, net_z)
    x = rng.standard_normal((5, 2))
    assert np.array_equal(realize(net_y, RELU, x), realize(net_z, RELU, x))


def test_euler_space_index_validation(rng):
    spec = make_spec(rng, 2, 3, 2)
    with pytest.raises(DomainError):
        euler_space_net(spec, 4)


def test_euler_spec_validation(rng):
    drift = random_net(rng, 2, 2, 2)
    with pytest.raises(ShapeError):
        EulerSpec(random_net(rng, 2, 3, 2), 1.0, 1, (np.zeros(3),))
    with pytest.raises(DomainError):
        EulerSpec(drift, 0.0, 1, (np.zeros(2),))
    with pytest.raises(DomainError):
        EulerSpec(drift, 1.0, 0, ())
    with pytest.raises(ShapeError):
        EulerSpec(drift, 1.0, 2, (np.zeros(2),))  # needs N perturbations
    with pytest.raises(ShapeError):
        EulerSpec(drift, 1.0, 1, (np.zeros(3),))  # wrong dimension
    with pytest.raises(DomainError):
        EulerSpec(drift, 1.0, 1, (np.zeros(2),), epsilon=2.0)
    with pytest.raises(DomainError):
        EulerSpec(drift, 1.0, 1, (np.zeros(2),), q=2.0)


# ---------------------------------------------------------------------------
# oracle


def test_euler_oracle_endpoints_and_nodes(rng):
    spec = make_spec(rng, 2, 4, 2)
    x = rng.standard_normal(2)
    nodes = euler_nodes(spec, x)
    assert np.array_equal(euler_oracle(spec, 0.0, x), x)
    times = spec.times()
    for n in range(5):
        assert np.allclose(euler_oracle(spec, float(times[n]), x), nodes[n], rtol=1e-12)


def test_euler_oracle_midpoint_is_mean(rng):
    spec = make_spec(rng, 2, 4, 2)
    x = rng.standard_normal(2)
    nodes = euler_nodes(spec, x)
    t_mid = 0.5 * (spec.times()[1] + spec.times()[2])
    got = euler_oracle(spec, t_mid, x)
    assert np.allclose(got, 0.5 * (nodes[1] + nodes[2]), rtol=1e-12)


def test_euler_oracle_non_uniform_grid(rng):
    spec = make_spec(rng, 2, 3, 2)
    times = np.array([0.0, 0.2, 0.7, 1.0])
    x = rng.standard_normal(2)
    nodes = euler_nodes(spec, x, times)
    assert np.allclose(euler_oracle(spec, 0.7, x, times), nodes[2], rtol=1e-12)


def test_euler_oracle_rejects_out_of_horizon(rng):
    spec = make_spec(rng, 2, 3, 2)
    with pytest.raises(DomainError):
        euler_oracle(spec, 1.5, np.zeros(2))


# ---------------------------------------------------------------------------
# Gronwall bound


def test_gronwall_zero_growth_case():
    y = [np.array([1.0, 0.0]), np.array([1.0, 0.0]), np.array([-3.0, 0.0])]
    inputs = GrowthBoundInputs.from_steps(0.0, 0.0, [np.eye(2)] * 3, y)
    assert gronwall_bound(inputs, 2.0, 3) == 2.0 + 2.0  # ||x|| + max partial sum


def test_gronwall_uniform_grid_formula():
    c = 0.8
    N, T = 5, 2.0
    mats = [(T / N) * np.eye(3)] * N
    inputs = GrowthBoundInputs.from_steps(c, c, mats, [np.zeros(3)] * N)
    for n in range(N + 1):
        t_n = n * T / N
        want = (1.5 + c * t_n) * math.exp(c * t_n)
        assert gronwall_bound(inputs, 1.5, n) == pytest.approx(want, rel=1e-12)


def test_gronwall_dominates_random_linear_drifts(rng):
    for _ in range(100):
        d = int(rng.integers(1, 5))
        N = int(rng.integers(1, 11))
        m = 0.4 * rng.standard_normal((d, d))
        v = rng.standard_normal(d)
        mats = [0.3 * rng.standard_normal((d, d)) for _ in range(N)]
        y = [0.5 * rng.standard_normal(d) for _ in range(N)]
        x = rng.standard_normal(d)
        iterates = perturbed_iterates(lambda z: m @ z + v, mats, y, x)
        inputs = GrowthBoundInputs.from_steps(
            np.linalg.norm(v), np.linalg.norm(m, ord=2), mats, y
        )
        for n, val in enumerate(iterates):
            assert np.linalg.norm(val) <= gronwall_bound(
                inputs, float(np.linalg.norm(x)), n
            ) + 1e-9


# ---------------------------------------------------------------------------
# space-time networks


def test_time_hats_partition_of_unity():
    hats = time_hat_nets(1.0, 4)
    ts = np.linspace(0.0, 1.0, 101)[:, None]
    total = sum(realize(h, RELU, ts)[:, 0] for h in hats)
    assert np.max(np.abs(total - 1.0)) <= 1e-12
    assert realize(hats[0], RELU, [0.0])[0] == 1.0
    assert realize(hats[4], RELU, [1.0])[0] == 1.0


def test_spacetime_zero_drift_interpolates_x(rng):
    d = 2
    zero_drift = affine(np.zeros((d, d)))
    spec = EulerSpec(zero_drift, 1.0, 2, tuple(np.zeros((2, d))), 1e-2, 3.0)
    net = spacetime_net(spec)
    x = np.array([0.8, -0.6])
    got = realize(net, RELU, np.concatenate([[0.0], x]))
    # bound at the first interval with g identically ||x||
    g = float(np.linalg.norm(x))
    bound = 1e-2 * (2.0 * math.sqrt(d) + 2.0 * g**3)
    assert np.linalg.norm(got - x) <= bound


def test_spacetime_matches_oracle_within_bound(rng):
    d, N, eps = 1, 2, 1e-2
    drift = random_net(rng, d, d, 2, scale=0.5)
    c = max(
        float(np.linalg.norm(realize(drift, RELU, np.zeros(d)))),
        float(np.prod([np.linalg.norm(l.weights, ord=2) for l in drift.layers])),
    )
    y = tuple(0.3 * rng.standard_normal((N, d)))
    spec = EulerSpec(drift, 1.0, N, y, eps, 3.0)
    net = spacetime_net(spec)
    inputs = GrowthBoundInputs.from_steps(c, c, [(1.0 / N) * np.eye(d)] * N, y)
    times = spec.times()
    for t in np.linspace(0.0, 1.0, 21):
        n = max(min(int(np.searchsorted(times, t, side="right")) - 1, N - 1), 0)
        for xv in np.linspace(-2.0, 2.0, 21):
            x = np.array([xv])
            got = realize(net, RELU, np.array([t, xv]))
            want = euler_oracle(spec, float(t), x)
            gn = gronwall_bound(inputs, abs(xv), n)
            gn1 = gronwall_bound(inputs, abs(xv), n + 1)
            assert np.linalg.norm(got - want) <= eps * (2.0 + gn**3 + gn1**3)
            assert np.linalg.norm(got) <= 6.0 + 2.0 * (gn**2 + gn1**2)


def test_spacetime_param_bound_holds(rng):
    spec = make_spec(rng, 2, 3, 2, eps=1e-1)
    net = spacetime_net(spec)
    assert param_count(net) <= spacetime_param_bound(spec)


def test_spacetime_depth_is_uniform_max_summand(rng):
    from anncalc import scalar_vector_product, ApproxSpec

    spec = make_spec(rng, 2, 3, 2, eps=1e-1)
    gamma = scalar_vector_product(ApproxSpec(spec.epsilon, spec.q, spec.d))
    net = spacetime_net(spec)
    assert net.depth == gamma.depth + 2 + spec.N * spec.drift.hidden
