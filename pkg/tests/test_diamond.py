import numpy as np
import pytest

from channel_bounds import linalg as la
from channel_bounds.bounds import twirled_np
from channel_bounds.channels import (
    apply,
    compose,
    depolarizing,
    identity_channel,
    mixed_channel_np,
    random_channel,
    unitary_channel,
)
from channel_bounds.diamond import (
    approx_simulability_epsilon,
    diamond_distance,
    pure_state_lower_bound,
    resource_state,
)
from channel_bounds.sampling import random_unitary


def test_same_channel_is_zero(rng):
    N = random_channel(2, 2, rng)
    res = diamond_distance(N, N)
    assert res.value == 0.0 and res.lower_bound == 0.0
    assert pure_state_lower_bound(N, N) == 0.0


def test_identity_vs_bit_flip():
    res = diamond_distance(identity_channel(2), unitary_channel(la.PAULI_X))
    assert abs(res.value - 1.0) <= 1e-6
    assert abs(res.lower_bound - 1.0) <= 1e-6


@pytest.mark.parametrize("p", [0.1, 0.3, 0.5, 0.7, 0.9])
def test_twirl_distance_bound(p):
    res = diamond_distance(mixed_channel_np(p), twirled_np(p))
    assert res.converged
    assert res.value <= p * p / 2 + 1e-6
    assert res.bracket <= 1e-4


def test_mes_lower_bound_for_depolarizing():
    p = 0.2
    N, M = identity_channel(2), depolarizing(p)
    phi = la.max_entangled(2)
    direct = 0.5 * la.trace_norm(phi - apply(M, phi, [2, 2], 1))
    lb = pure_state_lower_bound(N, M, restarts=1, steps=1)
    assert lb >= direct - 1e-12
    # optimal input for a covariant pair is the maximally entangled state
    assert abs(diamond_distance(N, M).value - direct) <= 1e-6


def test_random_pairs_bracket(rng):
    for _ in range(20):
        N, M = random_channel(2, 2, rng), random_channel(2, 2, rng)
        res = diamond_distance(N, M)
        assert res.lower_bound <= res.value + 1e-4
        assert 0.0 <= res.value <= 1.0 + 1e-6


def test_symmetry_and_triangle(rng):
    for _ in range(5):
        A, B, C = (random_channel(2, 2, rng) for _ in range(3))
        ab, ba = diamond_distance(A, B).value, diamond_distance(B, A).value
        assert abs(ab - ba) <= 1e-6
        assert ab <= diamond_distance(A, C).value + diamond_distance(C, B).value + 1e-5


def test_unitary_invariance(rng):
    N, M = random_channel(2, 2, rng), random_channel(2, 2, rng)
    U, V = unitary_channel(random_unitary(2, rng)), unitary_channel(random_unitary(2, rng))
    base = diamond_distance(N, M).value
    moved = diamond_distance(compose(V, compose(N, U)), compose(V, compose(M, U))).value
    assert abs(base - moved) <= 1e-6


def test_rectangular_channels(rng):
    N, M = random_channel(2, 3, rng), random_channel(2, 3, rng)
    res = diamond_distance(N, M)
    assert res.converged and res.bracket <= 1e-4


def test_dimension_mismatch(rng):
    with pytest.raises(ValueError):
        diamond_distance(random_channel(2, 2, rng), random_channel(2, 3, rng))


def test_simulability_helpers():
    p = 0.5
    assert approx_simulability_epsilon(mixed_channel_np(p), twirled_np(p)) <= 0.125 + 1e-6
    N = depolarizing(0.3)
    assert approx_simulability_epsilon(N, N) == 0.0
    assert np.isclose(np.trace(resource_state(N)).real, 1.0)


def test_result_dict():
    d = diamond_distance(mixed_channel_np(0.4), twirled_np(0.4)).to_dict()
    assert {"value", "lower_bound", "bracket", "primal_residual", "dual_residual"} <= set(d)
