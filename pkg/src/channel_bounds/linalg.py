"""Dense Hermitian linear algebra on small multipartite operators.

Operators are plain ``numpy`` arrays. Multipartite operators carry a separate
``dims`` list giving the subsystem dimensions in tensor order.
"""

from __future__ import annotations

from functools import reduce
from typing import Callable, Iterable, Sequence

import numpy as np

LN2 = np.log(2.0)

DEFAULT_EIG_FLOOR = 1e-12
HERMITIAN_RTOL = 1e-12


def _as_index_set(subsystems, n: int) -> tuple[int, ...]:
    if isinstance(subsystems, (int, np.integer)):
        subsystems = (int(subsystems),)
    idx = tuple(sorted(set(int(s) for s in subsystems)))
    for s in idx:
        if s < 0 or s >= n:
            raise ValueError(f"subsystem index {s} out of range for {n} subsystems")
    return idx


def _check_dims(M: np.ndarray, dims: Sequence[int]) -> None:
    total = int(np.prod(dims))
    if M.shape != (total, total):
        raise ValueError(f"operator shape {M.shape} inconsistent with dims {list(dims)}")


def is_hermitian(H: np.ndarray, rtol: float = HERMITIAN_RTOL) -> bool:
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        return False
    scale = max(np.linalg.norm(H), 1.0)
    return np.linalg.norm(H - H.conj().T) <= rtol * scale


def hermitize(H: np.ndarray) -> np.ndarray:
    return 0.5 * (H + H.conj().T)


def herm_eig(H: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Eigenvalues are returned in descending order. Each eigenvector is
    phase-fixed so that its first component of modulus above ``1e-10`` is
    real and positive, which makes the output deterministic for
    non-degenerate spectra.

    Raises
    ------
    ValueError
        If ``H`` is not Hermitian.
    """
    H = np.asarray(H, dtype=complex)
    if not is_hermitian(H):
        raise ValueError("herm_eig requires a Hermitian matrix")
    w, V = np.linalg.eigh(hermitize(H))
    order = np.argsort(-w, kind="stable")
    w, V = w[order], V[:, order]
    for k in range(V.shape[1]):
        col = V[:, k]
        nz = np.flatnonzero(np.abs(col) > 1e-10)
        if nz.size:
            ph = col[nz[0]] / abs(col[nz[0]])
            V[:, k] = col / ph
    return w, V


def matrix_fn(
    H: np.ndarray,
    f: Callable[[np.ndarray], np.ndarray],
    floor: float | None = None,
) -> np.ndarray:
    """Apply a scalar function to a Hermitian matrix through its spectrum.

    Eigenvalues below ``floor`` are raised to ``floor`` before ``f`` is
    applied. ``floor=None`` disables clamping.
    """
    w, V = np.linalg.eigh(hermitize(np.asarray(H, dtype=complex)))
    if floor is not None:
        w = np.maximum(w, floor)
    return (V * f(w)) @ V.conj().T


def log2m(H: np.ndarray, floor: float = DEFAULT_EIG_FLOOR) -> np.ndarray:
    return matrix_fn(H, np.log2, floor)


def sqrtm_psd(H: np.ndarray) -> np.ndarray:
    return matrix_fn(H, np.sqrt, 0.0)


def tensor(*ops: np.ndarray) -> np.ndarray:
    if len(ops) == 1 and not isinstance(ops[0], np.ndarray):
        ops = tuple(ops[0])
    return reduce(np.kron, ops)


def partial_trace(M: np.ndarray, dims: Sequence[int], keep: Iterable[int] | int) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    Kept subsystems stay in their original relative order.
    """
    M = np.asarray(M)
    dims = [int(d) for d in dims]
    _check_dims(M, dims)
    n = len(dims)
    keep = _as_index_set(keep, n)
    drop = [i for i in range(n) if i not in keep]
    T = M.reshape(dims + dims)
    # trace the highest axes first so lower axis numbers stay valid
    cur = n
    for i in sorted(drop, reverse=True):
        T = np.trace(T, axis1=i, axis2=i + cur)
        cur -= 1
    dk = int(np.prod([dims[i] for i in keep])) if keep else 1
    return T.reshape(dk, dk)


def partial_transpose(
    M: np.ndarray, dims: Sequence[int], subsystem: Iterable[int] | int
) -> np.ndarray:
    """Transpose the listed subsystems of ``M`` in the computational basis."""
    M = np.asarray(M)
    dims = [int(d) for d in dims]
    _check_dims(M, dims)
    n = len(dims)
    sub = _as_index_set(subsystem, n)
    T = M.reshape(dims + dims)
    axes = list(range(2 * n))
    for i in sub:
        axes[i], axes[i + n] = axes[i + n], axes[i]
    return T.transpose(axes).reshape(M.shape)


def permute_systems(M: np.ndarray, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors so that new factor ``k`` is old factor ``order[k]``."""
    M = np.asarray(M)
    dims = [int(d) for d in dims]
    _check_dims(M, dims)
    n = len(dims)
    order = list(order)
    if sorted(order) != list(range(n)):
        raise ValueError(f"invalid permutation {order}")
    T = M.reshape(dims + dims).transpose(order + [n + k for k in order])
    return T.reshape(M.shape)


def trace_norm(M: np.ndarray) -> float:
    M = np.asarray(M)
    if is_hermitian(M, 1e-10):
        return float(np.sum(np.abs(np.linalg.eigvalsh(hermitize(M)))))
    return float(np.sum(np.linalg.svd(M, compute_uv=False)))


def fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Squared Uhlmann fidelity ``||sqrt(rho) sqrt(sigma)||_1 ** 2``."""
    rho, sigma = np.asarray(rho), np.asarray(sigma)
    if rho.shape != sigma.shape:
        raise ValueError(f"dimension mismatch {rho.shape} vs {sigma.shape}")
    s = np.linalg.svd(sqrtm_psd(rho) @ sqrtm_psd(sigma), compute_uv=False)
    return float(min(max(np.sum(s) ** 2, 0.0), 1.0))


def check_density(rho: np.ndarray, dims: Sequence[int] | None = None, tol: float = 1e-10) -> np.ndarray:
    """Validate a density matrix and return it as a complex array."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    if dims is not None:
        _check_dims(rho, dims)
    if not is_hermitian(rho, 1e-10):
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > tol:
        raise ValueError(f"density matrix trace {np.trace(rho).real!r} differs from 1")
    if np.linalg.eigvalsh(hermitize(rho))[0] < -tol:
        raise ValueError("density matrix has a negative eigenvalue")
    return rho


def max_entangled(d: int) -> np.ndarray:
    """Maximally entangled state ``Phi_d`` on ``d x d`` as a density matrix."""
    v = np.eye(d, dtype=complex).reshape(d * d) / np.sqrt(d)
    return np.outer(v, v.conj())


def maximally_mixed(d: int) -> np.ndarray:
    return np.eye(d, dtype=complex) / d


def ket(d: int, i: int) -> np.ndarray:
    v = np.zeros(d, dtype=complex)
    v[i] = 1.0
    return v


def proj(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_I, PAULI_X, PAULI_Y, PAULI_Z)


def bell_basis() -> np.ndarray:
    """Columns are the four Bell vectors ``(I x P)|Phi>`` for P in I, X, Y, Z."""
    phi = np.eye(2, dtype=complex).reshape(4) / np.sqrt(2)
    return np.stack([np.kron(PAULI_I, P) @ phi for P in PAULIS], axis=1)
