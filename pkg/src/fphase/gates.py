"""
Named unitaries over a cyclic register Z_M, as dense matrices.

Phase gates are assembled from Fourier transforms and translations
(``R_k = QFT^-1 T_-k QFT``, ``S_k = QFT T_-k QFT``) rather than written down
as diagonals, so the composition identities are what the closed forms get
checked against.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np

from .errors import InputError
from .registers import is_power_of_two

UNITARY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class UnitaryMatrix:
    entries: np.ndarray

    def __post_init__(self):
        mat = np.array(self.entries, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise InputError(f"unitary must be square, got shape {mat.shape}")
        err = unitarity_error(mat)
        if err > UNITARY_TOL:
            raise InputError(f"matrix is not unitary (max |U†U - I| = {err:.3e})")
        mat.setflags(write=False)
        object.__setattr__(self, "entries", mat)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def dagger(self) -> "UnitaryMatrix":
        return UnitaryMatrix(self.entries.conj().T)

    def __matmul__(self, other: "UnitaryMatrix") -> "UnitaryMatrix":
        if self.dim != other.dim:
            raise InputError(f"cannot multiply {self.dim}x{self.dim} by {other.dim}x{other.dim}")
        return UnitaryMatrix(self.entries @ other.entries)

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def distance(self, other) -> float:
        """Max entrywise absolute difference."""
        return float(np.max(np.abs(self.entries - np.asarray(other))))


def unitarity_error(mat: np.ndarray) -> float:
    mat = np.asarray(mat)
    return float(np.max(np.abs(mat.conj().T @ mat - np.eye(mat.shape[0]))))


def omega(M: int, exponent) -> np.ndarray | complex:
    """``exp(2πi·e/M)`` with the integer exponent reduced mod M first."""
    e = np.mod(exponent, M)
    return np.exp(2j * np.pi * e / M)


def _check_dim(M: int):
    if not is_power_of_two(M):
        raise InputError(f"register dimension {M} is not a power of two >= 2")


def identity(M: int) -> UnitaryMatrix:
    return UnitaryMatrix(np.eye(M, dtype=complex))


def scalar(M: int, phase: complex) -> np.ndarray:
    return phase * np.eye(M, dtype=complex)


@lru_cache(maxsize=None)
def qft(M: int) -> UnitaryMatrix:
    """Fourier transform on Z_M: entry (t, y) is ω_M^{t·y} / √M."""
    _check_dim(M)
    idx = np.arange(M)
    return UnitaryMatrix(omega(M, np.outer(idx, idx)) / np.sqrt(M))


@lru_cache(maxsize=None)
def qft_inv(M: int) -> UnitaryMatrix:
    return qft(M).dagger


@lru_cache(maxsize=None)
def _translation(M: int, z: int) -> UnitaryMatrix:
    mat = np.zeros((M, M), dtype=complex)
    y = np.arange(M)
    mat[(y + z) % M, y] = 1.0
    return UnitaryMatrix(mat)


def translation(M: int, z: int) -> UnitaryMatrix:
    """Cyclic shift |y> -> |y + z mod M>."""
    _check_dim(M)
    return _translation(M, int(z) % M)


@lru_cache(maxsize=None)
def _r_phase(M: int, k: int) -> UnitaryMatrix:
    return qft_inv(M) @ translation(M, -k) @ qft(M)


def r_phase(M: int, k: int) -> UnitaryMatrix:
    """|y> -> ω_M^{k·y}|y>, built as QFT^-1 · T_{-k} · QFT."""
    _check_dim(M)
    return _r_phase(M, int(k) % M)


@lru_cache(maxsize=None)
def _s_gate(M: int, k: int) -> UnitaryMatrix:
    return qft(M) @ translation(M, -k) @ qft(M)


def s_gate(M: int, k: int) -> UnitaryMatrix:
    """|y> -> ω_M^{k·y}|-y mod M>, built as QFT · T_{-k} · QFT. Self-inverse."""
    _check_dim(M)
    return _s_gate(M, int(k) % M)


def r_phase_closed(M: int, k: int) -> np.ndarray:
    return np.diag(omega(M, k * np.arange(M)))


def s_gate_closed(M: int, k: int) -> np.ndarray:
    y = np.arange(M)
    mat = np.zeros((M, M), dtype=complex)
    mat[(-y) % M, y] = omega(M, k * y)
    return mat


HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def pauli_x() -> UnitaryMatrix:
    return UnitaryMatrix(PAULI_X)


def pauli_z() -> UnitaryMatrix:
    return UnitaryMatrix(PAULI_Z)


def hadamard() -> UnitaryMatrix:
    return UnitaryMatrix(HADAMARD)


@lru_cache(maxsize=None)
def walsh(n: int) -> UnitaryMatrix:
    """n-qubit Walsh-Hadamard: entry (x, y) = (-1)^{popcount(x & y)} / √(2^n)."""
    if n < 1:
        raise InputError(f"Walsh-Hadamard needs n >= 1 qubits, got {n}")
    idx = np.arange(2**n)
    anded = np.bitwise_and.outer(idx, idx)
    parity = np.zeros_like(anded)
    while anded.any():
        parity ^= anded & 1
        anded >>= 1
    return UnitaryMatrix((1 - 2 * parity) / np.sqrt(2**n))


def walsh_factors(n: int) -> list[np.ndarray]:
    """Per-qubit factors of walsh(n), for apply_kron on large registers."""
    return [HADAMARD] * n


def kron(*mats) -> UnitaryMatrix:
    return UnitaryMatrix(reduce(np.kron, (np.asarray(m) for m in mats)))


def commutator(A: UnitaryMatrix, B: UnitaryMatrix) -> UnitaryMatrix:
    """Group commutator [A, B] = A B A^-1 B^-1."""
    if A.dim != B.dim:
        raise InputError(f"commutator of {A.dim}- and {B.dim}-dimensional operators")
    return A @ B @ A.dagger @ B.dagger
