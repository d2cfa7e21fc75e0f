"""Quantum channels in Kraus form, their Choi states and dilations.

System ordering is fixed throughout the package: for a Choi state the
reference system ``R`` comes first and the channel output ``B`` second.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg as la
from .sampling import random_kraus

TP_TOL = 1e-10


@dataclass(frozen=True)
class KrausChannel:
    """A CPTP map ``rho -> sum_i K_i rho K_i^dag`` from ``dim_in`` to ``dim_out``."""

    kraus: tuple[np.ndarray, ...]
    dim_in: int
    dim_out: int

    def __init__(self, kraus: Sequence[np.ndarray], check: bool = True):
        ops = tuple(np.array(K, dtype=complex) for K in kraus)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        if any(K.shape != shape for K in ops) or len(shape) != 2:
            raise ValueError("Kraus operators must share one 2-d shape")
        object.__setattr__(self, "kraus", ops)
        object.__setattr__(self, "dim_out", int(shape[0]))
        object.__setattr__(self, "dim_in", int(shape[1]))
        if check:
            res = self.tp_residual()
            if res > TP_TOL:
                raise ValueError(f"Kraus operators not trace preserving (residual {res:.3e})")

    def tp_residual(self) -> float:
        S = sum(K.conj().T @ K for K in self.kraus)
        return float(np.max(np.abs(S - np.eye(self.dim_in))))

    @property
    def n_kraus(self) -> int:
        return len(self.kraus)

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (self.dim_in, self.dim_in):
            raise ValueError(f"input shape {rho.shape} does not match dim_in={self.dim_in}")
        return sum(K @ rho @ K.conj().T for K in self.kraus)

    def adjoint(self, Y: np.ndarray) -> np.ndarray:
        """Heisenberg-picture map ``Y -> sum_i K_i^dag Y K_i``."""
        return sum(K.conj().T @ Y @ K for K in self.kraus)

    def __repr__(self):
        return f"KrausChannel(dim_in={self.dim_in}, dim_out={self.dim_out}, n_kraus={self.n_kraus})"


@dataclass(frozen=True)
class Isometry:
    """Stinespring isometry ``V : A -> B x E`` with ``B`` the first factor."""

    matrix: np.ndarray
    dim_out: int
    dim_env: int

    @property
    def dims(self) -> list[int]:
        return [self.dim_out, self.dim_env]

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        return self.matrix @ rho @ self.matrix.conj().T


def apply(channel: KrausChannel, rho: np.ndarray, dims: Sequence[int] | None = None, target: int = 0) -> np.ndarray:
    """Apply ``channel`` to subsystem ``target`` of a multipartite operator.

    Returns the output operator; its dims are ``dims`` with
    ``dims[target]`` replaced by ``channel.dim_out``.
    """
    rho = np.asarray(rho, dtype=complex)
    if dims is None:
        dims = [rho.shape[0]]
    dims = [int(d) for d in dims]
    la._check_dims(rho, dims)
    if not 0 <= target < len(dims):
        raise ValueError(f"target subsystem {target} out of range")
    if dims[target] != channel.dim_in:
        raise ValueError(f"subsystem dimension {dims[target]} != channel dim_in {channel.dim_in}")
    left = int(np.prod(dims[:target]))
    right = int(np.prod(dims[target + 1:]))
    d_in, d_out = channel.dim_in, channel.dim_out
    T = rho.reshape(left, d_in, right, left, d_in, right)
    out = np.zeros((left, d_out, right, left, d_out, right), dtype=complex)
    for K in channel.kraus:
        out += np.einsum("ai,xiyzjw,bj->xayzbw", K, T, K.conj(), optimize=True)
    n = left * d_out * right
    return out.reshape(n, n)


def output_dims(channel: KrausChannel, dims: Sequence[int], target: int) -> list[int]:
    dims = list(dims)
    dims[target] = channel.dim_out
    return dims


def choi_state(channel: KrausChannel) -> np.ndarray:
    """Trace-one Choi state ``(id_R x N)(Phi_RA)``, reference first."""
    d = channel.dim_in
    return apply(channel, la.max_entangled(d), [d, d], 1)


def choi_matrix(channel: KrausChannel) -> np.ndarray:
    """Unnormalized Choi operator ``sum_ij |i><j| x N(|i><j|)``."""
    return channel.dim_in * choi_state(channel)


def apply_via_choi(choi: np.ndarray, rho: np.ndarray, dim_in: int) -> np.ndarray:
    """``N(rho) = d Tr_R[(rho^T x I) J]`` with ``J`` the Choi state."""
    d_out = choi.shape[0] // dim_in
    M = np.kron(np.asarray(rho).T, np.eye(d_out)) @ choi
    return dim_in * la.partial_trace(M, [dim_in, d_out], [1])


def stinespring(channel: KrausChannel) -> Isometry:
    """Isometry ``V = sum_i K_i x |i>_E``; output factors ordered ``B, E``."""
    d_in, d_out, r = channel.dim_in, channel.dim_out, channel.n_kraus
    V = np.stack(channel.kraus, axis=1).reshape(d_out * r, d_in)
    return Isometry(V, d_out, r)


def complementary_output(channel: KrausChannel, rho: np.ndarray) -> np.ndarray:
    V = stinespring(channel)
    return la.partial_trace(V(rho), V.dims, [1])


# -- constructors -------------------------------------------------------------

def _check_prob(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"channel parameter p must lie in [0, 1], got {p}")
    return p


def identity_channel(d: int) -> KrausChannel:
    return KrausChannel([np.eye(d)])


def unitary_channel(U: np.ndarray) -> KrausChannel:
    return KrausChannel([U])


def amplitude_damping(p: float) -> KrausChannel:
    p = _check_prob(p)
    K1 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - p)]])
    K2 = np.array([[0.0, np.sqrt(p)], [0.0, 0.0]])
    return KrausChannel([K1, K2])


def depolarizing(p: float) -> KrausChannel:
    """``(1-p) rho + (p/3)(X rho X + Y rho Y + Z rho Z)``."""
    p = _check_prob(p)
    w = [1.0 - p, p / 3, p / 3, p / 3]
    return KrausChannel([np.sqrt(wi) * P for wi, P in zip(w, la.PAULIS)])


def mixed_channel_np(p: float) -> KrausChannel:
    """Convex mixture ``p A_p + (1-p) D_p`` of amplitude damping and depolarizing."""
    p = _check_prob(p)
    return mix([amplitude_damping(p), depolarizing(p)], [p, 1.0 - p])


def pauli_channel(probs: Sequence[float]) -> KrausChannel:
    probs = np.asarray(probs, dtype=float)
    if probs.shape != (4,) or np.any(probs < 0) or abs(probs.sum() - 1) > 1e-12:
        raise ValueError("Pauli channel needs four probabilities summing to one")
    return KrausChannel([np.sqrt(q) * P for q, P in zip(probs, la.PAULIS)])


def measure_prepare(states: Sequence[np.ndarray]) -> KrausChannel:
    """Entanglement-breaking channel: measure in the computational basis, prepare ``states[i]``."""
    d_in = len(states)
    kraus = []
    for i, sigma in enumerate(states):
        w, V = np.linalg.eigh(la.hermitize(np.asarray(sigma, dtype=complex)))
        for lam, v in zip(w, V.T):
            if lam > 1e-14:
                kraus.append(np.sqrt(lam) * np.outer(v, la.ket(d_in, i).conj()))
    return KrausChannel(kraus)


def random_channel(d_in: int, d_out: int, rng, n_kraus: int | None = None) -> KrausChannel:
    n_kraus = d_in * d_out if n_kraus is None else n_kraus
    return KrausChannel(random_kraus(d_in, d_out, n_kraus, rng))


# -- combinators --------------------------------------------------------------

def compose(second: KrausChannel, first: KrausChannel) -> KrausChannel:
    """``second o first``."""
    if first.dim_out != second.dim_in:
        raise ValueError("compose: dimension mismatch")
    return KrausChannel([B @ A for B in second.kraus for A in first.kraus])


def tensor(*channels: KrausChannel) -> KrausChannel:
    out = channels[0]
    for ch in channels[1:]:
        out = KrausChannel([np.kron(A, B) for A in out.kraus for B in ch.kraus])
    return out


def mix(channels: Sequence[KrausChannel], weights: Sequence[float]) -> KrausChannel:
    weights = np.asarray(weights, dtype=float)
    if len(channels) != len(weights) or len(channels) == 0:
        raise ValueError("mix: need one weight per channel")
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-12:
        raise ValueError("mix: weights must lie on the probability simplex")
    dims = {(c.dim_in, c.dim_out) for c in channels}
    if len(dims) != 1:
        raise ValueError("mix: channels have different dimensions")
    return KrausChannel([np.sqrt(w) * K for c, w in zip(channels, weights) if w > 0 for K in c.kraus])


def conjugate(channel: KrausChannel, U: np.ndarray, V: np.ndarray) -> KrausChannel:
    """``rho -> V^dag N(U rho U^dag) V``."""
    return KrausChannel([V.conj().T @ K @ U for K in channel.kraus])


def _check_unitary(U: np.ndarray) -> None:
    U = np.asarray(U)
    if U.ndim != 2 or U.shape[0] != U.shape[1] or not np.allclose(U.conj().T @ U, np.eye(U.shape[0]), atol=1e-10):
        raise ValueError("representation element is not unitary")


def covariance_deviation(channel: KrausChannel, rep: Sequence[tuple[np.ndarray, np.ndarray]]) -> float:
    """Largest trace distance between Choi states of ``V^dag N(U . U^dag) V`` and ``N``.

    Zero exactly when the channel is covariant under every pair ``(U, V)``.
    """
    J = choi_state(channel)
    worst = 0.0
    for U, V in rep:
        _check_unitary(U)
        _check_unitary(V)
        Jg = choi_state(conjugate(channel, U, V))
        worst = max(worst, la.trace_norm(Jg - J))
    return worst
