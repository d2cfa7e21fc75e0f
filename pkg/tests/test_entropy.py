import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from channel_bounds import linalg as la
from channel_bounds.entropy import (
    INFINITY,
    conditional_entropy,
    g_func,
    h2,
    mutual_information,
    relative_entropy,
    shannon,
    von_neumann,
)
from channel_bounds.sampling import random_density, random_pure

seeds = st.integers(0, 2**32 - 1)


def test_von_neumann_examples(rng):
    assert abs(von_neumann(la.proj(random_pure(3, rng)))) < 1e-12
    assert np.isclose(von_neumann(np.eye(2) / 2), 1.0)
    assert np.isclose(von_neumann(np.diag([0.75, 0.25])), h2(0.25))


def test_shannon_ignores_zeros():
    assert shannon([0.5, 0.5, 0.0]) == 1.0


class TestRelativeEntropy:
    def test_self(self, rng):
        rho = random_density(4, rng)
        assert abs(relative_entropy(rho, rho)) < 1e-12

    def test_mes_vs_maximally_mixed(self):
        assert np.isclose(relative_entropy(la.max_entangled(2), np.eye(4) / 4), 2.0)

    def test_disjoint_support_is_infinite(self):
        assert relative_entropy(la.proj(la.ket(2, 0)), la.proj(la.ket(2, 1))) is INFINITY

    def test_contained_support_is_finite(self):
        rho = la.proj(la.ket(3, 0))
        xi = np.diag([0.5, 0.5, 0.0])
        assert np.isclose(relative_entropy(rho, xi), 1.0)

    def test_unnormalized_second_argument(self, rng):
        rho = random_density(2, rng)
        assert np.isclose(relative_entropy(rho, 2 * rho), -1.0)

    @given(seeds)
    def test_nonnegative_and_faithful(self, seed):
        rng = np.random.default_rng(seed)
        rho, xi = random_density(3, rng), random_density(3, rng)
        d = relative_entropy(rho, xi)
        assert d >= 0
        assert (d <= 1e-10) == (la.trace_norm(rho - xi) <= 1e-7)

    @given(seeds)
    def test_monotone_under_partial_trace(self, seed):
        rng = np.random.default_rng(seed)
        rho, sigma = random_density(6, rng), random_density(6, rng)
        full = relative_entropy(rho, sigma)
        marg = relative_entropy(la.partial_trace(rho, [2, 3], [0]), la.partial_trace(sigma, [2, 3], [0]))
        assert full >= marg - 1e-8


class TestConditional:
    def test_product(self, rng):
        rb, re = random_density(2, rng), random_density(3, rng)
        assert np.isclose(conditional_entropy(np.kron(rb, re), [2, 3], 1), von_neumann(rb))

    def test_mes(self):
        assert np.isclose(conditional_entropy(la.max_entangled(2), [2, 2], [1]), -1.0)

    def test_mutual_information_product(self, rng):
        rho = np.kron(random_density(4, rng), random_density(2, rng))
        assert abs(mutual_information(rho, [2, 2, 2], [0, 1], [2])) < 1e-12

    def test_bad_subsystem(self):
        with pytest.raises(ValueError):
            conditional_entropy(np.eye(4) / 4, [2, 2], 5)
        with pytest.raises(ValueError):
            mutual_information(np.eye(4) / 4, [2, 2], [0], [0])


class TestBinaryAndG:
    def test_values(self):
        assert h2(0.5) == 1.0
        assert h2(0.0) == 0.0
        assert g_func(0.0) == 0.0
        assert np.isclose(g_func(1.0), 2.0)
        assert np.isclose(g_func(0.5), 1.5 * math.log2(1.5) - 0.5 * math.log2(0.5))

    @given(st.floats(0, 1))
    def test_h2_symmetric(self, eps):
        assume(1 - (1 - eps) == eps)
        assert h2(eps) == h2(1 - eps)

    def test_g_monotone(self):
        grid = np.linspace(0, 1, 401)
        vals = [g_func(e) for e in grid]
        assert np.all(np.diff(vals) > 0)

    def test_domain(self):
        with pytest.raises(ValueError):
            h2(1.5)
        with pytest.raises(ValueError):
            g_func(-0.1)
