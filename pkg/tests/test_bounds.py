import math

import numpy as np
import pytest

from channel_bounds import linalg as la
from channel_bounds.bounds import (
    CSV_COLUMNS,
    amortized_gap,
    amortized_lower_bound_search,
    bound_report,
    choi_input,
    coherent_information_mes,
    continuity_per_state_check,
    dimension_bound,
    neg_cb_entropy,
    qubit_channel_upper_bound,
    ska_upper_bound,
    tp_sim_upper_bound,
    twirled_np,
    weak_converse_rate_bound,
)
from channel_bounds.channels import (
    amplitude_damping,
    apply,
    choi_state,
    depolarizing,
    identity_channel,
    measure_prepare,
    mixed_channel_np,
    tensor,
)
from channel_bounds.entmeasures import SubsystemCut, e_ppt, measure, rains
from channel_bounds.entropy import g_func, h2
from channel_bounds.sampling import random_density


class TestAmortizedGap:
    def test_identity_on_mes(self):
        g = amortized_gap(identity_channel(2), *choi_input(2))
        assert abs(g.gap - 1.0) <= 1e-5
        assert g.input_value == 0.0

    def test_entanglement_breaking(self, rng):
        N = measure_prepare([random_density(2, rng), random_density(2, rng)])
        for _ in range(5):
            assert amortized_gap(N, random_density(8, rng), (2, 2, 2)).gap <= 1e-5

    def test_choi_input_equals_resource(self):
        N = twirled_np(0.3)
        r = rains(choi_state(N)).value
        assert abs(amortized_gap(N, *choi_input(2)).gap - r) <= 1e-6

    def test_dimension_checks(self, rng):
        with pytest.raises(ValueError):
            amortized_gap(identity_channel(2), random_density(12, rng), (2, 3, 2))
        with pytest.raises(ValueError):
            amortized_gap(identity_channel(2), *choi_input(2), kind="e_r_2x2")

    def test_subadditivity_telescoping(self, rng):
        # gap(N x M, rho) = gap(N, tau) + gap(M, rho) with tau = (id x M)(rho),
        # where A2 is moved into the B' register of the N step
        N, M = depolarizing(0.2), amplitude_damping(0.3)
        rho = random_density(16, rng)  # A', A1, A2, B'
        dims = [2, 2, 2, 2]
        full = amortized_gap(tensor(N, M), rho, (2, 4, 2))
        g_m = amortized_gap(M, rho, (4, 2, 2))
        tau = apply(M, rho, dims, 2)
        g_n = amortized_gap(N, tau, (2, 2, 4))
        assert abs(full.gap - (g_n.gap + g_m.gap)) <= 3e-5


class TestSearch:
    def test_identity(self):
        assert amortized_lower_bound_search(identity_channel(2), trials=2).gap >= 1 - 1e-5

    def test_upper_limits(self):
        N = twirled_np(0.4)
        best = amortized_lower_bound_search(N, trials=4, seed=3)
        assert best.gap <= dimension_bound(N) + 1e-5
        assert best.gap <= rains(choi_state(N)).value + 1e-5

    def test_dominates_usual_measure(self):
        N = mixed_channel_np(0.2)
        usual = rains(choi_state(N)).value
        assert amortized_lower_bound_search(N, trials=1).gap >= usual - 1e-5


class TestSimpleBounds:
    def test_tp_sim(self, rng):
        assert abs(tp_sim_upper_bound(la.max_entangled(2)) - 1.0) <= 1e-5
        assert tp_sim_upper_bound(np.kron(random_density(2, rng), random_density(2, rng))) <= 1e-6

    def test_dimension_bound(self, rng):
        assert dimension_bound(depolarizing(0.1)) == 1.0

    def test_ska_formula(self):
        assert ska_upper_bound(0.7, 0.0, 2) == 0.7
        expected = 2.0 + 1.5 * math.log2(1.5) - 0.5 * math.log2(0.5)
        assert np.isclose(ska_upper_bound(1.0, 0.5, 2), expected)
        with pytest.raises(ValueError):
            ska_upper_bound(1.0, 1.5, 2)

    def test_qubit_upper_bound(self):
        assert abs(qubit_channel_upper_bound(0.0) - 1.0) <= 1e-3
        assert e_ppt(choi_state(depolarizing(0.75))).value <= 1e-6


class TestLowerBounds:
    def test_coherent_information(self):
        assert np.isclose(coherent_information_mes(identity_channel(2)), 1.0)
        assert np.isclose(coherent_information_mes(depolarizing(0.75)), -1.0)
        assert np.isclose(coherent_information_mes(mixed_channel_np(0.0)), 1.0)

    def test_neg_cb_identity(self):
        assert abs(neg_cb_entropy(identity_channel(2)) - 1.0) <= 1e-6
        assert abs(neg_cb_entropy(identity_channel(2), symmetric=True) - 1.0) <= 1e-9

    @pytest.mark.parametrize("p", [0.1, 0.4, 0.8])
    def test_symmetric_matches_general(self, p):
        N = mixed_channel_np(p)
        assert abs(neg_cb_entropy(N, symmetric=True) - neg_cb_entropy(N)) <= 1e-5

    @pytest.mark.parametrize("p", [0.1, 0.3, 0.5, 0.7, 0.9])
    def test_reverse_dominates_for_amplitude_damping(self, p):
        N = amplitude_damping(p)
        assert neg_cb_entropy(N, symmetric=True) >= coherent_information_mes(N) - 1e-9

    def test_symmetric_rejects_non_covariant(self):
        from channel_bounds.channels import unitary_channel
        from channel_bounds.sampling import random_unitary

        with pytest.raises(ValueError):
            neg_cb_entropy(unitary_channel(random_unitary(2, np.random.default_rng(1))), symmetric=True)


class TestWeakConverse:
    def test_trivial_message(self):
        lhs, _, ok = weak_converse_rate_bound(5, 1, 0.1, 0.0)
        assert lhs == 0.0 and ok

    def test_zero_error_single_use(self):
        assert weak_converse_rate_bound(1, 2, 0.0, 1.0)[2]
        assert not weak_converse_rate_bound(1, 3, 0.0, 1.0)[2]

    def test_arithmetic(self):
        _, rhs, _ = weak_converse_rate_bound(10, 4, 0.05, 1.0)
        assert np.isclose(rhs, 1.0 + h2(0.05) / 10)
        assert abs(rhs - 1.02864) < 1e-5

    def test_domain(self):
        with pytest.raises(ValueError):
            weak_converse_rate_bound(0, 2, 0.1, 1.0)


class TestContinuity:
    def test_same_channel(self, rng):
        N = depolarizing(0.3)
        lhs, rhs, ok = continuity_per_state_check(N, N, random_density(8, rng), (2, 2, 2), eps=0.0)
        assert lhs == 0.0 and rhs == 0.0 and ok

    def test_identity_vs_depolarizing(self):
        lhs, rhs, ok = continuity_per_state_check(identity_channel(2), depolarizing(0.1), *choi_input(2))
        assert ok and lhs > 0

    def test_np_pair(self, rng):
        p = 0.4
        N, M = mixed_channel_np(p), twirled_np(p)
        for _ in range(5):
            assert continuity_per_state_check(N, M, random_density(8, rng), (2, 2, 2), eps=p * p / 2)[2]


class TestReport:
    def test_identity_endpoint(self):
        r = bound_report(0.0)
        for v in (r.upper_ska, r.upper_ppt_q, r.lower_coherent, r.lower_rev_coherent):
            assert abs(v - 1.0) <= 1e-3
        assert r.epsilon_used == 0.0 and r.converged

    def test_fields(self):
        r = bound_report(0.3)
        assert len(r.csv_row()) == len(CSV_COLUMNS)
        assert r.consistent()
        assert abs(r.epsilon_used - r.epsilon_analytic) <= 1e-6
        assert r.upper_ppt_q <= r.upper_ska + 1e-6
        assert r.upper_ska <= r.upper_analytic + 1e-5

    def test_range(self):
        with pytest.raises(ValueError):
            bound_report(1.5)
