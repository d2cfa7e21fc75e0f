"""Group twirls of channels and their realization by generalized teleportation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg as la
from .channels import KrausChannel, _check_unitary, choi_state, conjugate, covariance_deviation
from .diamond import diamond_distance


@dataclass(frozen=True)
class UnitaryRep:
    """Finite list of unitary pairs ``(U_g, V_g)`` acting on the input and output.

    Closure under multiplication is not checked.
    """

    pairs: tuple[tuple[np.ndarray, np.ndarray], ...]
    label: str = "custom"

    def __init__(self, U: Sequence[np.ndarray], V: Sequence[np.ndarray] | None = None, label: str = "custom"):
        U = [np.asarray(u, dtype=complex) for u in U]
        V = U if V is None else [np.asarray(v, dtype=complex) for v in V]
        if len(U) != len(V) or not U:
            raise ValueError("representation needs matching non-empty U and V lists")
        for m in (*U, *V):
            _check_unitary(m)
        object.__setattr__(self, "pairs", tuple(zip(U, V)))
        object.__setattr__(self, "label", label)

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    @property
    def dim_in(self) -> int:
        return self.pairs[0][0].shape[0]

    @property
    def dim_out(self) -> int:
        return self.pairs[0][1].shape[0]


def named_rep(name: str) -> UnitaryRep:
    """Built-in qubit representations: ``"pauli"``, ``"ix"`` and ``"iz"``."""
    I, X, Y, Z = la.PAULIS
    table = {"pauli": [I, X, Y, Z], "ix": [I, X], "iz": [I, Z]}
    try:
        return UnitaryRep(table[name], label=name)
    except KeyError:
        raise ValueError(f"unknown representation {name!r}; choose from {sorted(table)}") from None


def twirl_channel(N: KrausChannel, rep: UnitaryRep) -> KrausChannel:
    """``N_G(rho) = (1/|G|) sum_g V_g^dag N(U_g rho U_g^dag) V_g``."""
    if (rep.dim_in, rep.dim_out) != (N.dim_in, N.dim_out):
        raise ValueError("representation dimensions do not match the channel")
    w = 1.0 / np.sqrt(len(rep))
    return KrausChannel([w * K for U, V in rep for K in conjugate(N, U, V).kraus])


def x_twirl(N: KrausChannel) -> KrausChannel:
    """``1/2 [N(rho) + X N(X rho X) X]``."""
    return twirl_channel(N, named_rep("ix"))


def one_design_deviation(rep: UnitaryRep) -> float:
    """Largest ``||avg_g U_g X U_g^dag - Tr(X) pi||_1`` over matrix units ``X = |i><j|``."""
    d = rep.dim_in
    worst = 0.0
    for i in range(d):
        for j in range(d):
            E = np.zeros((d, d), dtype=complex)
            E[i, j] = 1.0
            avg = sum(U @ E @ U.conj().T for U, _ in rep) / len(rep)
            worst = max(worst, la.trace_norm(avg - np.trace(E) * np.eye(d) / d))
    return worst


@dataclass(frozen=True)
class TwirlPovm:
    """Measurement ``E_g = (|A|^2/|G|) U_g^dag Phi U_g`` on ``A' x A`` (``U_g`` on ``A'``)."""

    elements: tuple[np.ndarray, ...]

    def completeness_residual(self) -> float:
        S = sum(self.elements)
        return float(np.max(np.abs(S - np.eye(S.shape[0]))))


def twirl_povm(rep: UnitaryRep) -> TwirlPovm:
    d = rep.dim_in
    phi = la.max_entangled(d)
    scale = d * d / len(rep)
    elems = []
    for U, _ in rep:
        Ul = np.kron(U, np.eye(d))
        elems.append(scale * Ul.conj().T @ phi @ Ul)
    return TwirlPovm(tuple(elems))


def teleport_simulate_twirl(N: KrausChannel, rep: UnitaryRep, rho: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Output of the twirled channel realized by teleportation through ``choi_state(N)``.

    Alice measures ``{E_g}`` on the input ``A'`` together with her half ``A``
    of the Choi state ``omega_AB``; Bob applies ``V_g^dag`` on outcome ``g``.
    Summing over outcomes gives ``twirl_channel(N, rep)(rho)``.

    Raises
    ------
    ValueError
        If ``rep`` is not a one-design or the POVM is incomplete.
    """
    if one_design_deviation(rep) > tol:
        raise ValueError("teleportation simulation needs a unitary one-design")
    povm = twirl_povm(rep)
    if povm.completeness_residual() > tol:
        raise ValueError("twirl POVM is not complete")
    d, d_b = N.dim_in, N.dim_out
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (d, d):
        raise ValueError("input state has the wrong dimension")
    omega = choi_state(N)
    joint = np.kron(rho, omega)  # A', A, B
    out = np.zeros((d_b, d_b), dtype=complex)
    for E, (_, V) in zip(povm.elements, rep):
        post = np.kron(E, np.eye(d_b)) @ joint
        b = la.partial_trace(post, [d, d, d_b], [2])
        out += V.conj().T @ b @ V
    return out


def approx_covariance_epsilon(N: KrausChannel, rep: UnitaryRep, **kwargs) -> float:
    """``1/2 ||N - N_G||_diamond``: how far ``N`` is from being covariant under ``rep``."""
    return diamond_distance(N, twirl_channel(N, rep), **kwargs).value


def twirled_covariance_deviation(N: KrausChannel, rep: UnitaryRep) -> float:
    return covariance_deviation(twirl_channel(N, rep), list(rep))
