"""Entropic quantities in bits."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import hermitize, partial_trace

#: Returned by :func:`relative_entropy` when the support condition fails.
INFINITY = math.inf


@dataclass(frozen=True)
class EntropyConfig:
    eig_floor: float = 1e-12
    support_tolerance: float = 1e-9

    def __post_init__(self):
        if self.eig_floor <= 0 or self.support_tolerance <= 0:
            raise ValueError("EntropyConfig tolerances must be positive")


DEFAULT_CONFIG = EntropyConfig()


def _xlog2x(w: np.ndarray) -> np.ndarray:
    w = np.clip(w, 0.0, None)
    out = np.zeros_like(w)
    pos = w > 0
    out[pos] = w[pos] * np.log2(w[pos])
    return out


def shannon(p: Sequence[float]) -> float:
    return float(-np.sum(_xlog2x(np.asarray(p, dtype=float))))


def von_neumann(rho: np.ndarray) -> float:
    w = np.linalg.eigvalsh(hermitize(np.asarray(rho, dtype=complex)))
    return float(-np.sum(_xlog2x(w)))


def relative_entropy(rho: np.ndarray, xi: np.ndarray, config: EntropyConfig = DEFAULT_CONFIG) -> float:
    """Quantum relative entropy ``D(rho || xi)`` in bits.

    ``xi`` may be any PSD operator, normalized or not. Returns
    :data:`INFINITY` when an eigenvector of ``rho`` carrying weight above
    ``support_tolerance`` overlaps the kernel of ``xi`` by more than
    ``support_tolerance``.
    """
    rho = hermitize(np.asarray(rho, dtype=complex))
    xi = hermitize(np.asarray(xi, dtype=complex))
    wr, Vr = np.linalg.eigh(rho)
    wx, Vx = np.linalg.eigh(xi)
    scale = max(float(np.max(np.abs(wx))), 1.0)
    ker = Vx[:, wx <= config.eig_floor * scale]
    if ker.shape[1]:
        heavy = Vr[:, wr > config.support_tolerance]
        if heavy.shape[1]:
            overlap = np.sum(np.abs(ker.conj().T @ heavy) ** 2, axis=0)
            if np.any(overlap > config.support_tolerance):
                return INFINITY
    sup = wx > config.eig_floor * scale
    # Tr[rho log xi] restricted to supp(xi)
    rho_x = Vx[:, sup].conj().T @ rho @ Vx[:, sup]
    cross = float(np.real(np.sum(np.diag(rho_x) * np.log2(wx[sup]))))
    return float(np.sum(_xlog2x(wr))) - cross


def conditional_entropy(rho: np.ndarray, dims: Sequence[int], conditioning: Sequence[int] | int) -> float:
    """``H(X|Y) = H(XY) - H(Y)`` with ``Y`` the listed subsystems.

    The remaining subsystems form ``X``.
    """
    cond = [conditioning] if isinstance(conditioning, (int, np.integer)) else list(conditioning)
    for c in cond:
        if c < 0 or c >= len(dims):
            raise ValueError(f"invalid conditioning subsystem {c}")
    return von_neumann(rho) - von_neumann(partial_trace(rho, dims, cond))


def mutual_information(
    rho: np.ndarray, dims: Sequence[int], left: Sequence[int], right: Sequence[int]
) -> float:
    """``I(L;R) = H(L) + H(R) - H(LR)`` on the listed subsystems."""
    left, right = list(left), list(right)
    if set(left) & set(right):
        raise ValueError("mutual information cut overlaps")
    for s in left + right:
        if s < 0 or s >= len(dims):
            raise ValueError(f"invalid subsystem {s}")
    return (
        von_neumann(partial_trace(rho, dims, left))
        + von_neumann(partial_trace(rho, dims, right))
        - von_neumann(partial_trace(rho, dims, left + right))
    )


def h2(eps: float) -> float:
    """Binary entropy."""
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"h2 needs eps in [0, 1], got {eps}")
    a, b = sorted((eps, 1.0 - eps))
    return shannon([a, b])


def g_func(eps: float) -> float:
    """``(eps + 1) log2(eps + 1) - eps log2(eps)``, continuous at 0."""
    if eps < 0:
        raise ValueError(f"g needs eps >= 0, got {eps}")
    if eps == 0:
        return 0.0
    return (eps + 1.0) * math.log2(eps + 1.0) - eps * math.log2(eps)
