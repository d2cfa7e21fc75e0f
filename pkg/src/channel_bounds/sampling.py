"""Seeded random ensembles for states and channels."""

from __future__ import annotations

import numpy as np

from .linalg import hermitize


def rng_from(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _ginibre(rng: np.random.Generator, m: int, n: int) -> np.ndarray:
    return rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))


def random_unitary(d: int, rng) -> np.ndarray:
    """Haar-random unitary via QR with the phase correction of Mezzadri."""
    rng = rng_from(rng)
    Q, R = np.linalg.qr(_ginibre(rng, d, d))
    ph = np.diag(R) / np.abs(np.diag(R))
    return Q * ph


def random_isometry(d_in: int, d_out: int, rng) -> np.ndarray:
    rng = rng_from(rng)
    if d_out < d_in:
        raise ValueError("isometry needs d_out >= d_in")
    Q, R = np.linalg.qr(_ginibre(rng, d_out, d_in))
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_pure(d: int, rng) -> np.ndarray:
    rng = rng_from(rng)
    v = _ginibre(rng, d, 1)[:, 0]
    return v / np.linalg.norm(v)


def random_density(d: int, rng, rank: int | None = None) -> np.ndarray:
    """Random density matrix; ``rank=None`` gives the Hilbert-Schmidt ensemble.

    Hilbert-Schmidt states are the reduced states of Haar-random pure states
    on ``d x d``.
    """
    rng = rng_from(rng)
    G = _ginibre(rng, d, d if rank is None else rank)
    rho = G @ G.conj().T
    return hermitize(rho / np.trace(rho).real)


def random_hermitian(d: int, rng, scale: float = 1.0) -> np.ndarray:
    rng = rng_from(rng)
    return scale * hermitize(_ginibre(rng, d, d))


def random_kraus(d_in: int, d_out: int, n_kraus: int, rng) -> list[np.ndarray]:
    """Kraus operators cut out of a random Stinespring isometry."""
    V = random_isometry(d_in, d_out * n_kraus, rng)
    # rows ordered as (out, env) to match V = sum_i K_i x |i>_E
    V = V.reshape(d_out, n_kraus, d_in)
    return [V[:, i, :].copy() for i in range(n_kraus)]
