"""Relative entropy to the Rains set and to PPT states.

Both measures minimize ``sigma -> D(tau || sigma)`` over a convex set. The
minimization runs projected gradient descent with Barzilai-Borwein trial
steps and Armijo backtracking; projections onto the intersections are
computed by Dykstra's alternating projections followed by an exact
feasibility repair, so every iterate is feasible.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from . import linalg as la
from .entropy import von_neumann
from .sampling import random_density, rng_from


class SetKind(enum.Enum):
    RAINS_PPT_PRIME = "rains"
    PPT_STATES = "ppt"
    DENSITY_MATRICES = "density"


class MeasureKind(enum.Enum):
    RAINS = "rains"
    E_PPT = "e_ppt"
    E_R_2x2 = "e_r_2x2"

    @classmethod
    def parse(cls, kind) -> "MeasureKind":
        if isinstance(kind, cls):
            return kind
        key = str(kind).lower().replace("-", "_")
        for k in cls:
            if key in (k.value, k.name.lower()):
                return k
        raise ValueError(f"unknown measure kind {kind!r}")


@dataclass(frozen=True)
class SubsystemCut:
    """Bipartition of the subsystems listed in ``dims``."""

    dims: tuple[int, ...]
    left: tuple[int, ...]
    right: tuple[int, ...]

    def __init__(self, dims: Sequence[int], left: Sequence[int], right: Sequence[int] | None = None):
        dims = tuple(int(d) for d in dims)
        left = tuple(sorted(int(i) for i in left))
        if right is None:
            right = tuple(i for i in range(len(dims)) if i not in left)
        right = tuple(sorted(int(i) for i in right))
        if sorted(left + right) != list(range(len(dims))):
            raise ValueError(f"cut {left}|{right} is not a partition of {len(dims)} subsystems")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    @classmethod
    def bipartite(cls, d_left: int, d_right: int) -> "SubsystemCut":
        return cls([d_left, d_right], [0], [1])

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    @property
    def left_dim(self) -> int:
        return int(np.prod([self.dims[i] for i in self.left]))

    @property
    def right_dim(self) -> int:
        return int(np.prod([self.dims[i] for i in self.right]))

    @cached_property
    def _pt_index(self) -> np.ndarray:
        d = self.dim
        idx = np.arange(d * d).reshape(d, d)
        return la.partial_transpose(idx, self.dims, self.right).ravel()

    def pt(self, M: np.ndarray) -> np.ndarray:
        return M.ravel()[self._pt_index].reshape(M.shape)


@dataclass(frozen=True)
class FeasibleSetSpec:
    kind: SetKind
    cut: SubsystemCut


@dataclass
class OptimizerConfig:
    max_iters: int = 5000
    grad_tolerance: float = 1e-7
    initial_step: float = 1.0
    backtracking: float = 0.5
    dykstra_iters: int = 200
    min_eig_floor: float = 1e-12
    rng_seed: int = 0
    n_probes: int = 64
    armijo: float = 1e-4
    stall_iters: int = 500

    def __post_init__(self):
        if not 0 < self.backtracking < 1:
            raise ValueError("backtracking factor must lie in (0, 1)")
        for name in ("max_iters", "grad_tolerance", "initial_step", "dykstra_iters", "min_eig_floor"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass
class MeasureResult:
    value: float
    optimizer: np.ndarray = field(repr=False)
    certificate: float
    iterations: int
    converged: bool
    kind: str = ""

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "value": self.value,
            "certificate": self.certificate,
            "iterations": self.iterations,
            "converged": self.converged,
        }


# -- elementary projections ------------------------------------------------------

def _eigh(H: np.ndarray):
    return np.linalg.eigh(la.hermitize(H))


def _rebuild(w: np.ndarray, V: np.ndarray) -> np.ndarray:
    return (V * w) @ V.conj().T


def project_simplex(v: np.ndarray, radius: float = 1.0) -> np.ndarray:
    """Euclidean projection onto ``{x >= 0, sum x = radius}``."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - radius
    k = np.arange(1, len(v) + 1)
    rho = np.nonzero(u - css / k > 0)[0][-1]
    return np.maximum(v - css[rho] / (rho + 1), 0.0)


def project_l1_ball(v: np.ndarray, radius: float = 1.0) -> np.ndarray:
    """Euclidean projection onto ``{x : ||x||_1 <= radius}`` by soft thresholding."""
    a = np.abs(v)
    if a.sum() <= radius:
        return v.copy()
    return np.sign(v) * project_simplex(a, radius)


def project_psd(H: np.ndarray) -> np.ndarray:
    w, V = _eigh(H)
    return _rebuild(np.maximum(w, 0.0), V)


def project_density(H: np.ndarray) -> np.ndarray:
    w, V = _eigh(H)
    return _rebuild(project_simplex(w), V)


def project_pt_l1_ball(H: np.ndarray, cut: SubsystemCut) -> np.ndarray:
    w, V = _eigh(cut.pt(H))
    return cut.pt(_rebuild(project_l1_ball(w), V))


def project_pt_psd(H: np.ndarray, cut: SubsystemCut) -> np.ndarray:
    w, V = _eigh(cut.pt(H))
    return cut.pt(_rebuild(np.maximum(w, 0.0), V))


def dykstra(
    x0: np.ndarray,
    proj_a: Callable[[np.ndarray], np.ndarray],
    proj_b: Callable[[np.ndarray], np.ndarray],
    max_iters: int = 200,
    tol: float = 1e-12,
) -> tuple[np.ndarray, int]:
    """Dykstra's algorithm for the projection onto ``A`` intersected with ``B``.

    Returns the last ``B`` iterate and the number of sweeps.
    """
    x = x0
    p = np.zeros_like(x0)
    q = np.zeros_like(x0)
    scale = max(np.linalg.norm(x0), 1.0)
    for k in range(1, max_iters + 1):
        y = proj_a(x + p)
        p = x + p - y
        x_new = proj_b(y + q)
        q = y + q - x_new
        done = np.linalg.norm(x_new - x) <= tol * scale and np.linalg.norm(x_new - y) <= tol * scale * 10
        x = x_new
        if done:
            break
    return x, k


# -- exact repair onto the sets ---------------------------------------------------

def _repair_rains(H: np.ndarray, cut: SubsystemCut) -> np.ndarray:
    S = project_psd(H)
    s = la.trace_norm(cut.pt(S))
    return S / s if s > 1.0 else S


def _repair_ppt(H: np.ndarray, cut: SubsystemCut) -> np.ndarray:
    S = project_density(H)
    m = np.linalg.eigvalsh(la.hermitize(cut.pt(S)))[0]
    if m < 0:
        d = S.shape[0]
        s = -m / (-m + 1.0 / d)
        S = (1.0 - s) * S + s * np.eye(d) / d
    return S


def project(spec: FeasibleSetSpec, H: np.ndarray, dykstra_iters: int = 200, tol: float = 1e-12) -> np.ndarray:
    """Frobenius projection of a Hermitian matrix onto a feasible set.

    Intersections go through Dykstra's algorithm. The Dykstra output is then
    pushed exactly into the set (eigenvalue clipping plus rescaling for the
    Rains set, mixing with the identity for PPT states); the repair moves the
    point by at most the Dykstra residual.
    """
    H = la.hermitize(np.asarray(H, dtype=complex))
    cut = spec.cut
    if H.shape != (cut.dim, cut.dim):
        raise ValueError(f"operator shape {H.shape} does not match cut dims {cut.dims}")
    if spec.kind is SetKind.DENSITY_MATRICES:
        return project_density(H)
    if spec.kind is SetKind.RAINS_PPT_PRIME:
        x, _ = dykstra(H, project_psd, lambda Y: project_pt_l1_ball(Y, cut), dykstra_iters, tol)
        return _repair_rains(x, cut)
    if spec.kind is SetKind.PPT_STATES:
        x, _ = dykstra(H, project_density, lambda Y: project_pt_psd(Y, cut), dykstra_iters, tol)
        return _repair_ppt(x, cut)
    raise ValueError(f"unknown set kind {spec.kind}")


def feasibility_residual(spec: FeasibleSetSpec, S: np.ndarray) -> float:
    """Largest violation of the set's defining constraints (0 when feasible)."""
    cut = spec.cut
    min_eig = np.linalg.eigvalsh(la.hermitize(S))[0]
    res = max(0.0, -min_eig)
    if spec.kind is SetKind.RAINS_PPT_PRIME:
        res = max(res, la.trace_norm(cut.pt(S)) - 1.0)
    else:
        res = max(res, abs(np.trace(S).real - 1.0))
        if spec.kind is SetKind.PPT_STATES:
            res = max(res, -np.linalg.eigvalsh(la.hermitize(cut.pt(S)))[0])
    return float(max(res, 0.0))


def random_feasible_point(spec: FeasibleSetSpec, rng) -> np.ndarray:
    """Cheap random member of a feasible set (not Dykstra-based)."""
    rng = rng_from(rng)
    cut = spec.cut
    rho = random_density(cut.dim, rng)
    if spec.kind is SetKind.RAINS_PPT_PRIME:
        return _repair_rains(rho, cut)
    if spec.kind is SetKind.PPT_STATES:
        return _repair_ppt(rho, cut)
    return rho


# -- objective and gradient -----------------------------------------------------

def _log2_divided_differences(lam: np.ndarray) -> np.ndarray:
    li, lj = lam[:, None], lam[None, :]
    diff = li - lj
    with np.errstate(divide="ignore", invalid="ignore"):
        phi = np.log1p(diff / lj) / diff
    close = np.abs(diff) <= 1e-10 * np.maximum(li, lj)
    phi = np.where(close, 2.0 / (li + lj), phi)
    return phi / la.LN2


def rel_ent_gradient(rho: np.ndarray, sigma: np.ndarray, floor: float = 1e-12) -> np.ndarray:
    """Gradient of ``sigma -> -Tr[rho log2 sigma]`` at ``sigma``.

    Uses the Daleckii-Krein formula: in the eigenbasis of ``sigma`` the
    gradient is ``-rho_ij`` times the divided difference of ``log2`` at
    ``(lambda_i, lambda_j)``. Eigenvalues below ``floor`` are raised to it.
    """
    lam, V = _eigh(sigma)
    lam = np.maximum(lam, floor)
    return _gradient_from_eig(rho, lam, V)


def _gradient_from_eig(rho, lam, V):
    rt = V.conj().T @ rho @ V
    return -(V @ (rt * _log2_divided_differences(lam)) @ V.conj().T)


def _objective_from_eig(rho, lam, V) -> float:
    rt_diag = np.real(np.einsum("ij,ik,kj->j", V.conj(), rho, V))
    return float(-np.sum(rt_diag * np.log2(lam)))


def cross_entropy(rho: np.ndarray, sigma: np.ndarray, floor: float = 1e-12) -> float:
    """``-Tr[rho log2 sigma]`` with the spectrum of ``sigma`` floored."""
    lam, V = _eigh(sigma)
    return _objective_from_eig(rho, np.maximum(lam, floor), V)


# -- solver ---------------------------------------------------------------------

def _set_for(kind: MeasureKind, cut: SubsystemCut) -> FeasibleSetSpec:
    if kind is MeasureKind.RAINS:
        return FeasibleSetSpec(SetKind.RAINS_PPT_PRIME, cut)
    if kind is MeasureKind.E_R_2x2:
        if cut.left_dim != 2 or cut.right_dim != 2:
            raise ValueError("E_R_2x2 needs a 2x2 cut")
    return FeasibleSetSpec(SetKind.PPT_STATES, cut)


def _as_cut(cut, tau: np.ndarray) -> SubsystemCut:
    if isinstance(cut, SubsystemCut):
        return cut
    if cut is None:
        d = int(round(np.sqrt(tau.shape[0])))
        if d * d != tau.shape[0]:
            raise ValueError("cannot infer a symmetric bipartite cut; pass one explicitly")
        return SubsystemCut.bipartite(d, d)
    dims, right = cut
    return SubsystemCut(dims, [i for i in range(len(dims)) if i not in right], right)


def certificate(
    spec: FeasibleSetSpec, tau: np.ndarray, sigma: np.ndarray, floor: float, probes: Sequence[np.ndarray]
) -> float:
    """Worst first-order violation ``max(0, -<G, probe - sigma>)`` over feasible probes."""
    G = rel_ent_gradient(tau, sigma, floor)
    worst = 0.0
    for P in probes:
        worst = max(worst, -float(np.real(np.vdot(G, P - sigma))))
    return worst


def _probe_set(spec, tau, sigma0, cfg: OptimizerConfig) -> list[np.ndarray]:
    rng = rng_from(cfg.rng_seed)
    d = spec.cut.dim
    probes = [np.eye(d, dtype=complex) / d, sigma0]
    probes += [random_feasible_point(spec, rng) for _ in range(cfg.n_probes)]
    return probes


def _minimize(tau: np.ndarray, spec: FeasibleSetSpec, cfg: OptimizerConfig):
    """Spectral projected gradient with a nonmonotone Armijo search.

    The search runs along ``sigma + alpha d`` with ``d = P(sigma - t G) - sigma``,
    so every trial point is a convex combination of feasible points.
    """
    floor = cfg.min_eig_floor
    proj = lambda H: project(spec, H, cfg.dykstra_iters)  # noqa: E731

    def evaluate(S):
        lam, V = _eigh(S)
        lam = np.maximum(lam, floor)
        return _objective_from_eig(tau, lam, V), lam, V

    sigma = proj(tau)
    f, lam, V = evaluate(sigma)
    G = _gradient_from_eig(tau, lam, V)
    best = (f, sigma)
    history = [f]
    last_gain = 0
    t = cfg.initial_step
    converged = False
    it = 0
    for it in range(1, cfg.max_iters + 1):
        d = proj(sigma - t * G) - sigma
        slope = float(np.real(np.vdot(G, d)))
        if np.linalg.norm(d) / t <= cfg.grad_tolerance or slope >= -1e-16:
            # confirm with the unit-step projected gradient
            pg = np.linalg.norm(proj(sigma - G) - sigma)
            if pg <= cfg.grad_tolerance or slope >= -1e-16:
                converged = True
                break
        f_ref = max(history[-10:])
        alpha = 1.0
        while True:
            cand = sigma + alpha * d
            f_c, lam_c, V_c = evaluate(cand)
            if f_c <= f_ref + cfg.armijo * alpha * slope or alpha < 1e-12:
                break
            alpha *= cfg.backtracking
        G_c = _gradient_from_eig(tau, lam_c, V_c)
        s_k = cand - sigma
        y_k = G_c - G
        sy = float(np.real(np.vdot(s_k, y_k)))
        t = float(np.real(np.vdot(s_k, s_k))) / sy if sy > 0 else 1e6
        t = min(max(t, 1e-10), 1e6)
        sigma, f, G = cand, f_c, G_c
        history.append(f)
        if f < best[0] - 1e-13 * max(1.0, abs(best[0])):
            last_gain = it
        if f < best[0]:
            best = (f, sigma)
        if alpha < 1e-12 or it - last_gain > cfg.stall_iters:
            break
    return best[1], best[0], it, converged


def measure(
    kind,
    tau: np.ndarray,
    cut=None,
    config: OptimizerConfig | None = None,
) -> MeasureResult:
    """Relative entropy from ``tau`` to the Rains set or to PPT states.

    Parameters
    ----------
    kind : MeasureKind or str
        ``"rains"`` minimizes over ``{sigma >= 0, ||sigma^T_D||_1 <= 1}``;
        ``"e_ppt"`` over PPT density matrices; ``"e_r_2x2"`` is ``e_ppt``
        restricted to two-qubit cuts, where it equals the relative entropy
        of entanglement.
    tau : ndarray
        Density matrix on ``cut.dims``.
    cut : SubsystemCut, ``(dims, right)`` tuple, or None
        The bipartition. ``None`` means a symmetric two-party split.
    config : OptimizerConfig, optional

    Returns
    -------
    MeasureResult
        ``value`` in bits, the feasible minimizer, the first-order
        certificate over random feasible probes and a convergence flag.
    """
    kind = MeasureKind.parse(kind)
    cfg = config or OptimizerConfig()
    tau = la.check_density(tau, tol=1e-8)
    cut = _as_cut(cut, tau)
    spec = _set_for(kind, cut)
    if cut.left_dim == 1 or cut.right_dim == 1:
        # trivial side: tau itself is feasible and optimal
        return MeasureResult(0.0, tau.copy(), 0.0, 0, True, kind.value)
    sigma, f, iters, converged = _minimize(tau, spec, cfg)
    value = f - von_neumann(tau)
    probes = _probe_set(spec, tau, project(spec, tau, cfg.dykstra_iters), cfg)
    cert = certificate(spec, tau, sigma, cfg.min_eig_floor, probes)
    return MeasureResult(max(value, 0.0), sigma, cert, iters, converged, kind.value)


def rains(tau, cut=None, config=None) -> MeasureResult:
    return measure(MeasureKind.RAINS, tau, cut, config)


def e_ppt(tau, cut=None, config=None) -> MeasureResult:
    return measure(MeasureKind.E_PPT, tau, cut, config)


def negativity_overlap_bound_check(M: int, sigma: np.ndarray, tol: float = 1e-9) -> float:
    """Overlap ``Tr[Phi_M sigma]`` for ``sigma`` in the Rains set on ``M x M``.

    Members of that set satisfy ``Tr[Phi_M sigma] <= 1/M``.

    Raises
    ------
    ValueError
        If ``sigma`` is not in the Rains set within ``tol``.
    """
    spec = FeasibleSetSpec(SetKind.RAINS_PPT_PRIME, SubsystemCut.bipartite(M, M))
    sigma = np.asarray(sigma, dtype=complex)
    if sigma.shape != (M * M, M * M):
        raise ValueError("sigma has the wrong shape")
    if feasibility_residual(spec, sigma) > tol:
        raise ValueError("sigma is not in the Rains set")
    return float(np.real(np.vdot(la.max_entangled(M), sigma)))
