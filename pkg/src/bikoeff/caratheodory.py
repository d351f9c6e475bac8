"""The coefficient body of functions with positive real part.

A tuple (p1, ..., pm) is admissible exactly when the Hermitian Toeplitz
matrix with diagonal 2 and off-diagonals p_{j-k} is positive semidefinite;
admissible tuples are generated from atomic probability measures on the
circle through their trigonometric moments p_n = 2 sum_k w_k e^{-i n theta_k}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-9
DEFAULT_MAX_ATOMS = 5


@dataclass(frozen=True)
class CaratheodoryTuple:
    """Truncated coefficient vector of a positive-real-part function."""

    entries: tuple

    def __post_init__(self):
        entries = tuple(complex(e) for e in self.entries)
        if not 1 <= len(entries) <= 4:
            raise ValueError("tuple length must be between 1 and 4")
        object.__setattr__(self, "entries", entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def scaled(self, t):
        return CaratheodoryTuple(tuple(t * e for e in self.entries))

    @property
    def is_real(self):
        return all(e.imag == 0 for e in self.entries)


@dataclass(frozen=True)
class AtomicMeasure:
    """Probability measure on the circle: atoms (angle, weight >= 0), weights sum to 1."""

    atoms: tuple

    def __post_init__(self):
        atoms = tuple((float(t), float(w)) for t, w in self.atoms)
        if not atoms:
            raise ValueError("measure needs at least one atom")
        if any(w < 0 for _, w in atoms):
            raise ValueError("negative atom weight")
        total = sum(w for _, w in atoms)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {total}, not 1")
        object.__setattr__(self, "atoms", atoms)

    @property
    def angles(self):
        return np.array([t for t, _ in self.atoms])

    @property
    def weights(self):
        return np.array([w for _, w in self.atoms])


def from_atoms(mu: AtomicMeasure, m: int) -> CaratheodoryTuple:
    """Moment tuple p_n = 2 sum w e^{-i n theta}, n = 1..m; admissible by construction."""
    if not 1 <= m <= 4:
        raise ValueError("m must be between 1 and 4")
    theta = mu.angles
    w = mu.weights
    entries = [2.0 * np.sum(w * np.exp(-1j * n * theta)) for n in range(1, m + 1)]
    return CaratheodoryTuple(tuple(complex(e) for e in entries))


def toeplitz_matrix(p) -> np.ndarray:
    """Hermitian Toeplitz matrix of the tuple: diagonal 2, off-diagonals p_{k-j}."""
    entries = [complex(e) for e in (p.entries if isinstance(p, CaratheodoryTuple) else p)]
    m = len(entries)
    T = np.zeros((m + 1, m + 1), dtype=complex)
    for j in range(m + 1):
        T[j, j] = 2.0
        for k in range(j + 1, m + 1):
            T[j, k] = entries[k - j - 1]
            T[k, j] = np.conj(entries[k - j - 1])
    return T


def smallest_eigenvalue(p) -> float:
    return float(np.linalg.eigvalsh(toeplitz_matrix(p))[0])


def is_admissible(p, tol: float = DEFAULT_TOL) -> bool:
    """Caratheodory-Toeplitz criterion with an eigenvalue tolerance."""
    if tol < 0:
        raise ValueError("tol must be >= 0")
    return smallest_eigenvalue(p) >= -tol


def toeplitz_batch(p_stack: np.ndarray) -> np.ndarray:
    """Stacked Hermitian Toeplitz matrices for an (n, m) array of tuples."""
    n, m = p_stack.shape
    T = np.zeros((n, m + 1, m + 1), dtype=complex)
    for j in range(m + 1):
        T[:, j, j] = 2.0
        for k in range(j + 1, m + 1):
            T[:, j, k] = p_stack[:, k - j - 1]
            T[:, k, j] = np.conj(p_stack[:, k - j - 1])
    return T


def admissible_mask(p_stack: np.ndarray, tol: float) -> np.ndarray:
    """Vectorized admissibility over an (n, m) array of moment tuples."""
    eigs = np.linalg.eigvalsh(toeplitz_batch(p_stack))
    return eigs[:, 0] >= -tol


class MeasureSampler:
    """Deterministic stream of random atomic measures and their moment tuples.

    Each sample consumes one contiguous row of uniforms, so the first n
    samples of a longer run coincide with a shorter run under the same
    seed (nested-seed monotonicity for the search).
    """

    def __init__(self, seed: int, max_atoms: int = DEFAULT_MAX_ATOMS, restrict_real: bool = False):
        if max_atoms < 1:
            raise ValueError("max_atoms must be >= 1")
        self.seed = seed
        self.max_atoms = max_atoms
        self.restrict_real = restrict_real

    def block(self, n: int):
        """(angles, weights, real_flags) for n samples, prefix-stable in n."""
        K = self.max_atoms
        rng = np.random.default_rng(self.seed)
        U = rng.random((n, 2 * K + 2))
        counts = np.minimum(1 + (U[:, 0] * K).astype(int), K)
        real_flags = U[:, 1] < 0.5 if not self.restrict_real else np.ones(n, dtype=bool)
        angles = 2.0 * np.pi * U[:, 2 : 2 + K]
        raw = -np.log(np.clip(U[:, 2 + K : 2 + 2 * K], 1e-300, None))
        mask = np.arange(K)[None, :] < counts[:, None]
        raw = raw * mask
        weights = raw / raw.sum(axis=1, keepdims=True)
        return angles, weights, real_flags

    def moments(self, n: int, m: int):
        """(n, m) array of admissible moment tuples plus the generating atoms."""
        angles, weights, real_flags = self.block(n)
        orders = np.arange(1, m + 1)
        phases = np.exp(-1j * orders[None, None, :] * angles[:, :, None])
        p = 2.0 * np.einsum("nk,nkm->nm", weights, phases)
        p[real_flags] = p[real_flags].real
        return p, (angles, weights, real_flags)


def sample(rng_seed: int, m: int, max_atoms: int = DEFAULT_MAX_ATOMS, restrict_real: bool = False) -> CaratheodoryTuple:
    """One admissible tuple, deterministic in the seed."""
    p, _ = MeasureSampler(rng_seed, max_atoms, restrict_real).moments(1, m)
    return CaratheodoryTuple(tuple(p[0]))
