"""Capacity bounds for assisted communication over a quantum channel.

Upper bounds come from approximate teleportation simulation: if
``1/2 ||N - M||_diamond <= eps`` for a channel ``M`` simulable through its
Choi state ``omega``, then the secret-key and PPT-assisted quantum
capacities of ``N`` are at most ``E(R;B)_omega + 2 eps log2|B| + g(eps)``.
Lower bounds are the coherent information at the maximally entangled input
and the negative CB-entropy.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from . import linalg as la
from .channels import (
    KrausChannel,
    apply,
    choi_state,
    covariance_deviation,
    mixed_channel_np,
    stinespring,
)
from .diamond import diamond_distance
from .entmeasures import MeasureKind, MeasureResult, OptimizerConfig, SubsystemCut, measure
from .entropy import conditional_entropy, g_func, h2, von_neumann
from .entmeasures import project_density
from .sampling import random_density, rng_from
from .twirl import named_rep, x_twirl

CSV_COLUMNS = ("p", "upper_ska", "upper_ppt_q", "lower_coherent", "lower_rev_coherent", "epsilon", "e_ppt_choi")


@dataclass
class AmortizedGap:
    gap: float
    input_state: np.ndarray = field(repr=False)
    kind: str
    dims: tuple[int, int, int] = (1, 1, 1)
    output_value: float = 0.0
    input_value: float = 0.0
    converged: bool = True


@dataclass
class BoundReport:
    p: float
    upper_ska: float
    upper_ppt_q: float
    lower_coherent: float
    lower_rev_coherent: float
    epsilon_used: float
    e_ppt_choi: float
    rains_choi: float = float("nan")
    epsilon_analytic: float = float("nan")
    upper_analytic: float = float("nan")
    diamond_lower: float = float("nan")
    converged: bool = True

    def csv_row(self) -> list[float]:
        return [self.p, self.upper_ska, self.upper_ppt_q, self.lower_coherent,
                self.lower_rev_coherent, self.epsilon_used, self.e_ppt_choi]

    def to_dict(self) -> dict:
        return asdict(self)

    def consistent(self, slack: float = 1e-4) -> bool:
        return self.upper_ska >= max(self.lower_coherent, self.lower_rev_coherent) - slack


# -- amortized entanglement ----------------------------------------------------------

def _parse_kind(kind) -> MeasureKind:
    kind = MeasureKind.parse(kind)
    if kind is MeasureKind.E_R_2x2:
        raise ValueError("amortized quantities use 'rains' or 'e_ppt'")
    return kind


def amortized_gap(
    N: KrausChannel,
    rho: np.ndarray,
    dims: Sequence[int],
    kind="rains",
    config: OptimizerConfig | None = None,
) -> AmortizedGap:
    """Per-state amortized gap ``E(A';BB')_theta - E(A'A;B')_rho``.

    ``rho`` lives on ``A' x A x B'`` with ``dims = (|A'|, |A|, |B'|)`` and
    ``theta = (id x N x id)(rho)``.
    """
    kind = _parse_kind(kind)
    da1, da, db1 = (int(d) for d in dims)
    if da != N.dim_in:
        raise ValueError(f"middle subsystem has dimension {da}, channel expects {N.dim_in}")
    rho = la.check_density(rho, [da1, da, db1], tol=1e-8)
    theta = apply(N, rho, [da1, da, db1], 1)
    out = measure(kind, theta, SubsystemCut([da1, N.dim_out, db1], [0]), config)
    inp = measure(kind, rho, SubsystemCut([da1, da, db1], [0, 1]), config)
    return AmortizedGap(
        out.value - inp.value, rho, kind.value, (da1, da, db1), out.value, inp.value,
        out.converged and inp.converged,
    )


def choi_input(d: int) -> tuple[np.ndarray, tuple[int, int, int]]:
    """Maximally entangled ``A'A`` input with trivial ``B'``."""
    return la.max_entangled(d), (d, d, 1)


def amortized_lower_bound_search(
    N: KrausChannel,
    kind="rains",
    trials: int = 8,
    seed=0,
    config: OptimizerConfig | None = None,
) -> AmortizedGap:
    """Largest per-state gap over the Choi input and random inputs.

    Random inputs have ``|A'| <= 2|A|`` and ``|B'| <= 2``. The result is a
    lower bound on the amortized entanglement, never the quantity itself.
    """
    rng = rng_from(seed)
    rho, dims = choi_input(N.dim_in)
    best = amortized_gap(N, rho, dims, kind, config)
    for _ in range(trials):
        da1 = int(rng.integers(1, 2 * N.dim_in + 1))
        db1 = int(rng.integers(1, 3))
        dims = (da1, N.dim_in, db1)
        rho = random_density(int(np.prod(dims)), rng)
        cand = amortized_gap(N, rho, dims, kind, config)
        if cand.gap > best.gap:
            best = cand
    return best


def tp_sim_upper_bound(omega: np.ndarray, kind="rains", cut=None, config=None) -> float:
    """Entanglement of the simulation resource ``omega_RB``."""
    return measure(_parse_kind(kind), omega, cut, config).value


def dimension_bound(N: KrausChannel) -> float:
    return math.log2(min(N.dim_in, N.dim_out))


# -- capacity bounds -----------------------------------------------------------------

def ska_upper_bound(resource_measure: float, eps: float, dim_b: int) -> float:
    """``E(R;B)_omega + 2 eps log2|B| + g(eps)``."""
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"eps must lie in [0, 1], got {eps}")
    if dim_b < 1:
        raise ValueError("output dimension must be positive")
    return resource_measure + 2.0 * eps * math.log2(dim_b) + g_func(eps)


def twirled_np(p: float) -> KrausChannel:
    """X-twirl of the amplitude-damping/depolarizing mixture, Pauli covariant."""
    return x_twirl(mixed_channel_np(p))


def qubit_channel_upper_bound(p: float, config: OptimizerConfig | None = None) -> float:
    """``E_PPT(A;B)`` of the twirled channel's Choi state plus ``p^2 + g(p^2/2)``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    e = measure(MeasureKind.E_PPT, choi_state(twirled_np(p)), SubsystemCut.bipartite(2, 2), config).value
    return e + p * p + g_func(p * p / 2)


def coherent_information_mes(N: KrausChannel) -> float:
    """``H(B) - H(RB)`` on the Choi state."""
    J = choi_state(N)
    return von_neumann(la.partial_trace(J, [N.dim_in, N.dim_out], [1])) - von_neumann(J)


def _cond_entropy_b_given_e(V, rho) -> float:
    return conditional_entropy(V(rho), V.dims, [1])


def _golden_max(f, a: float, b: float, tol: float = 1e-12, max_iter: int = 200) -> tuple[float, float]:
    invphi = (math.sqrt(5) - 1) / 2
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a < tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = (a + b) / 2
    cands = [(f(x), x), (fc, c), (fd, d), (f(0.0), 0.0), (f(1.0), 1.0)]
    val, x = max(cands)
    return val, x


def _grad_cond_entropy(V, rho, floor=1e-12):
    w = V(rho)
    omega_e = la.partial_trace(w, V.dims, [1])
    G = -la.log2m(w, floor) + np.kron(np.eye(V.dim_out), la.log2m(omega_e, floor))
    return la.hermitize(V.matrix.conj().T @ G @ V.matrix)


def neg_cb_entropy(
    N: KrausChannel,
    symmetric: bool = False,
    restarts: int = 3,
    max_iters: int = 2000,
    seed=0,
) -> float:
    """Negative CB-entropy ``sup_rho H(B|E)`` of the Stinespring output.

    With ``symmetric=True`` the channel must be covariant under ``{I, Z}``;
    the concave objective is then maximized over diagonal inputs
    ``diag(q, 1-q)`` by golden-section search. Otherwise projected gradient
    ascent runs over all density matrices from ``pi`` and random starts.

    Raises
    ------
    ValueError
        If ``symmetric`` is requested for a channel that is not a qubit
        channel covariant under ``{I, Z}``.
    """
    V = stinespring(N)
    if symmetric:
        if N.dim_in != 2 or N.dim_out != 2 or covariance_deviation(N, list(named_rep("iz"))) > 1e-9:
            raise ValueError("symmetric reduction needs an {I, Z}-covariant qubit channel")
        val, _ = _golden_max(lambda q: _cond_entropy_b_given_e(V, np.diag([q, 1.0 - q]).astype(complex)), 0.0, 1.0)
        return val
    rng = rng_from(seed)
    d = N.dim_in
    starts = [np.eye(d, dtype=complex) / d] + [random_density(d, rng) for _ in range(restarts - 1)]
    best = -np.inf
    for rho in starts:
        f = _cond_entropy_b_given_e(V, rho)
        t = 0.1
        for _ in range(max_iters):
            G = _grad_cond_entropy(V, rho)
            while True:
                cand = project_density(rho + t * G)
                fc = _cond_entropy_b_given_e(V, cand)
                step = cand - rho
                if fc >= f + 1e-4 * float(np.real(np.vdot(G, step))) or t < 1e-12:
                    break
                t *= 0.5
            moved = np.linalg.norm(step)
            if fc >= f:
                rho, f = cand, fc
            if moved / t < 1e-9 or moved < 1e-13:
                break
            t = min(t * 2.0, 10.0)
        best = max(best, f)
    return float(best)


def weak_converse_rate_bound(n: int, K: float, eps: float, amortized_bound: float) -> tuple[float, float, bool]:
    """Both sides of ``(1 - eps) log2(K) / n <= E_A + h2(eps) / n``."""
    if n < 1 or K < 1 or not 0.0 <= eps <= 1.0:
        raise ValueError("need n >= 1, K >= 1 and eps in [0, 1]")
    lhs = (1.0 - eps) * math.log2(K) / n
    rhs = amortized_bound + h2(eps) / n
    return lhs, rhs, lhs <= rhs


def continuity_per_state_check(
    N: KrausChannel,
    M: KrausChannel,
    rho: np.ndarray,
    dims: Sequence[int],
    kind="rains",
    eps: float | None = None,
    config: OptimizerConfig | None = None,
    slack: float = 1e-4,
) -> tuple[float, float, bool]:
    """Check ``|E(A';BB')_{N(rho)} - E(A';BB')_{M(rho)}| <= 2 eps log2|B| + g(eps)``.

    ``eps`` defaults to the computed ``1/2 ||N - M||_diamond``.
    """
    kind = _parse_kind(kind)
    if eps is None:
        eps = diamond_distance(N, M).value
    eps = min(max(eps, 0.0), 1.0)
    da1, da, db1 = (int(d) for d in dims)
    cut = SubsystemCut([da1, N.dim_out, db1], [0])
    vals = []
    for ch in (N, M):
        theta = apply(ch, rho, [da1, da, db1], 1)
        vals.append(measure(kind, theta, cut, config).value)
    lhs = abs(vals[0] - vals[1])
    rhs = 2.0 * eps * math.log2(N.dim_out) + g_func(eps)
    return lhs, rhs, lhs <= rhs + slack


def bound_report(p: float, config: OptimizerConfig | None = None, diamond_tol: float = 1e-6, seed=0) -> BoundReport:
    """All bounds for the mixture channel at parameter ``p``.

    ``eps`` is the computed diamond distance to the twirled channel; the
    analytic ``p^2/2`` and the bound built from it are reported alongside.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    N = mixed_channel_np(p)
    Nbar = twirled_np(p)
    omega = choi_state(Nbar)
    cut = SubsystemCut.bipartite(2, 2)
    e_ppt: MeasureResult = measure(MeasureKind.E_PPT, omega, cut, config)
    rains: MeasureResult = measure(MeasureKind.RAINS, omega, cut, config)
    dres = diamond_distance(N, Nbar, tol=diamond_tol, seed=seed)
    eps = min(max(dres.value, 0.0), 1.0)
    eps_analytic = p * p / 2
    return BoundReport(
        p=float(p),
        upper_ska=ska_upper_bound(e_ppt.value, eps, 2),
        upper_ppt_q=ska_upper_bound(rains.value, eps, 2),
        lower_coherent=coherent_information_mes(N),
        lower_rev_coherent=neg_cb_entropy(N, symmetric=True),
        epsilon_used=eps,
        e_ppt_choi=e_ppt.value,
        rains_choi=rains.value,
        epsilon_analytic=eps_analytic,
        upper_analytic=e_ppt.value + p * p + g_func(eps_analytic),
        diamond_lower=dres.lower_bound,
        converged=e_ppt.converged and rains.converged and dres.converged,
    )
