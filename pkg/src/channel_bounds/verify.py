"""Randomized verification batteries.

Each suite samples seeded random inputs, evaluates one family of
inequalities or identities, and returns a :class:`SuiteReport` listing
every check with its margin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .bounds import amortized_gap, choi_input, continuity_per_state_check, dimension_bound, twirled_np
from .channels import (
    KrausChannel,
    choi_state,
    covariance_deviation,
    measure_prepare,
    mixed_channel_np,
)
from .diamond import diamond_distance
from .entmeasures import (
    FeasibleSetSpec,
    MeasureKind,
    OptimizerConfig,
    SetKind,
    SubsystemCut,
    measure,
    negativity_overlap_bound_check,
    project,
)
from .entropy import mutual_information, shannon
from .sampling import random_density, random_hermitian, random_pure, rng_from
from .twirl import named_rep, one_design_deviation, teleport_simulate_twirl, twirl_channel, twirl_povm

SUITES = ("lemmas", "twirl", "continuity", "overlap", "amortized")


@dataclass
class Check:
    """``value <= bound`` (or ``|value| <= bound`` for equalities)."""

    name: str
    value: float
    bound: float

    @property
    def margin(self) -> float:
        return self.bound - self.value

    @property
    def passed(self) -> bool:
        return bool(self.value <= self.bound)


@dataclass
class SuiteReport:
    suite: str
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, value: float, bound: float) -> Check:
        c = Check(name, float(value), float(bound))
        self.checks.append(c)
        return c

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def min_margin(self) -> float:
        return min((c.margin for c in self.checks), default=math.inf)

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            tag = "PASS" if c.passed else "FAIL"
            out.append(f"{tag} {self.suite}:{c.name} value={c.value:.6g} bound={c.bound:.6g} margin={c.margin:.3g}")
        return out


def _cut(dims, left):
    return SubsystemCut(dims, left)


def _val(kind, rho, cut, cfg):
    return measure(kind, rho, cut, cfg).value


def _entangled_full_rank(d: int, rng) -> np.ndarray:
    """Random pure state mixed with a Hilbert-Schmidt state; full rank, usually entangled."""
    w = rng.uniform(0.3, 0.9)
    return w * la.proj(random_pure(d, rng)) + (1 - w) * random_density(d, rng)


def lemmas_suite(samples: int = 30, seed=0, kinds=("rains", "e_ppt"), config: OptimizerConfig | None = None,
                 slack_dim: float = 2e-5, slack_cq: float = 3e-5) -> SuiteReport:
    """Dimension and mixture bounds on random qubit triples, plus classical-quantum additivity."""
    rng = rng_from(seed)
    rep = SuiteReport("lemmas")
    states = []
    for _ in range(samples):
        rho_abc = random_density(8, rng)
        p = rng.dirichlet([1.0, 1.0])
        comps = [_entangled_full_rank(4, rng) for _ in range(2)]
        states.append((rho_abc, p, comps))
    for kind in kinds:
        kind = MeasureKind.parse(kind)
        for i, (rho_abc, p, comps) in enumerate(states):
            tag = f"{kind.value}[{i}]"
            # E(A;BC) <= E(A;B) + I(AB;C) <= E(A;B) + 2 log|C|
            e_a_bc = _val(kind, rho_abc, _cut([2, 2, 2], [0]), cfg := config)
            rho_ab = la.partial_trace(rho_abc, [2, 2, 2], [0, 1])
            e_a_b = _val(kind, rho_ab, _cut([2, 2], [0]), cfg)
            i_ab_c = mutual_information(rho_abc, [2, 2, 2], [0, 1], [2])
            rep.add(f"dim_bound_mi/{tag}", e_a_bc - e_a_b - i_ab_c, slack_dim)
            rep.add(f"dim_bound_log/{tag}", e_a_bc - e_a_b - 2.0, slack_dim)
            # classical-quantum state X, A, B
            rho_xab = sum(p[x] * np.kron(la.proj(la.ket(2, x)), comps[x]) for x in range(2))
            e_x = [_val(kind, c, _cut([2, 2], [0]), cfg) for c in comps]
            avg = float(np.dot(p, e_x))
            e_a_bx = _val(kind, rho_xab, _cut([2, 2, 2], [1]), cfg)
            rep.add(f"cq_equality/{tag}", abs(e_a_bx - avg), slack_cq)
            rho_bar = sum(p[x] * comps[x] for x in range(2))
            e_bar = _val(kind, rho_bar, _cut([2, 2], [0]), cfg)
            i_x_ab = mutual_information(rho_xab, [2, 2, 2], [0], [1, 2])
            rep.add(f"mixture_mi/{tag}", avg - e_bar - i_x_ab, slack_cq)
            rep.add(f"mixture_hx/{tag}", avg - e_bar - shannon(p), slack_cq)
    return rep


def twirl_suite(samples: int = 20, seed=0, ps=(0.3, 0.7)) -> SuiteReport:
    """Teleportation realization of the Pauli twirl against the direct twirl."""
    rng = rng_from(seed)
    rep = SuiteReport("twirl")
    pauli = named_rep("pauli")
    rep.add("pauli_one_design", one_design_deviation(pauli), 1e-12)
    rep.add("povm_completeness", twirl_povm(pauli).completeness_residual(), 1e-9)
    for p in ps:
        N = mixed_channel_np(p)
        NG = twirl_channel(N, pauli)
        worst = 0.0
        for _ in range(samples):
            rho = random_density(2, rng)
            out_tp = teleport_simulate_twirl(N, pauli, rho)
            worst = max(worst, float(np.max(np.abs(out_tp - NG(rho)))))
        rep.add(f"tp_vs_twirl/p={p}", worst, 1e-10)
        rep.add(f"twirled_covariance/p={p}", covariance_deviation(NG, list(pauli)), 1e-9)
        Nbar = twirled_np(p)
        rep.add(f"xtwirl_pauli_covariance/p={p}", covariance_deviation(Nbar, list(pauli)), 1e-9)
        rep.add(f"np_iz_covariance/p={p}", covariance_deviation(N, list(named_rep("iz"))), 1e-10)
    return rep


def _random_tripartite(rng, dims):
    return random_density(int(np.prod(dims)), rng)


def continuity_suite(samples: int = 50, seed=0, p: float = 0.4, kind="rains",
                     config: OptimizerConfig | None = None, slack: float = 1e-4) -> SuiteReport:
    """Per-state continuity of the output entanglement under a diamond-norm perturbation."""
    rng = rng_from(seed)
    rep = SuiteReport("continuity")
    N, M = mixed_channel_np(p), twirled_np(p)
    eps = diamond_distance(N, M).value
    rep.add(f"eps_vs_analytic/p={p}", eps - p * p / 2, 1e-6)
    dims = (2, 2, 2)
    for i in range(samples):
        rho = _random_tripartite(rng, dims)
        lhs, rhs, _ = continuity_per_state_check(N, M, rho, dims, kind, eps, config, slack)
        rep.add(f"state[{i}]", lhs - rhs, slack)
    return rep


def overlap_suite(samples: int = 100, seed=0, Ms=(2, 3)) -> SuiteReport:
    """Maximally entangled overlap of random Rains-set members."""
    rng = rng_from(seed)
    rep = SuiteReport("overlap")
    for M in Ms:
        spec = FeasibleSetSpec(SetKind.RAINS_PPT_PRIME, SubsystemCut.bipartite(M, M))
        worst = -math.inf
        for _ in range(samples):
            sigma = project(spec, random_hermitian(M * M, rng, scale=rng.uniform(0.1, 2.0)))
            worst = max(worst, negativity_overlap_bound_check(M, sigma))
        rep.add(f"max_overlap/M={M}", worst, 1.0 / M + 1e-9)
    return rep


def entanglement_breaking_channel(rng) -> KrausChannel:
    return measure_prepare([random_density(2, rng), random_density(2, rng)])


def amortized_suite(samples: int = 50, seed=0, p: float = 0.3, config: OptimizerConfig | None = None) -> SuiteReport:
    """Resource-state and entanglement-breaking checks on per-state amortized gaps (Rains measure)."""
    rng = rng_from(seed)
    rep = SuiteReport("amortized")
    kind = MeasureKind.RAINS
    Nbar = twirled_np(p)
    omega = choi_state(Nbar)
    r_choi = measure(kind, omega, SubsystemCut.bipartite(2, 2), config).value
    rho, dims = choi_input(2)
    g0 = amortized_gap(Nbar, rho, dims, kind, config)
    rep.add(f"choi_gap_equals_resource/p={p}", abs(g0.gap - r_choi), 1e-6)
    rep.add("resource_within_dimension_bound", r_choi - dimension_bound(Nbar), 1e-5)
    dims = (2, 2, 2)
    worst = -math.inf
    for _ in range(samples):
        g = amortized_gap(Nbar, _random_tripartite(rng, dims), dims, kind, config)
        worst = max(worst, g.gap)
    rep.add(f"random_gaps_below_resource/p={p}", worst - r_choi, 1e-5)
    eb = entanglement_breaking_channel(rng)
    worst_eb = -math.inf
    for _ in range(samples):
        g = amortized_gap(eb, _random_tripartite(rng, dims), dims, kind, config)
        worst_eb = max(worst_eb, g.gap)
    worst_eb = max(worst_eb, amortized_gap(eb, *choi_input(2), kind, config).gap)
    rep.add("entanglement_breaking_gaps", worst_eb, 1e-5)
    return rep


def run_suite(name: str, samples: int | None = None, seed=0) -> SuiteReport:
    table = {
        "lemmas": lemmas_suite,
        "twirl": twirl_suite,
        "continuity": continuity_suite,
        "overlap": overlap_suite,
        "amortized": amortized_suite,
    }
    if name not in table:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITES}")
    kwargs = {"seed": seed}
    if samples is not None:
        kwargs["samples"] = samples
    return table[name](**kwargs)
