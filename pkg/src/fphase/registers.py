"""
Exact state vectors over products of cyclic-group registers.

A register of dimension ``d`` holds basis kets ``|0>, ..., |d-1>``. Joint
states are stored as one flat amplitude vector in row-major order, so for a
two-register shape ``(N, M)`` the ket ``|x>|y>`` sits at flat index
``x * M + y``. States are immutable values; every operation returns a new one.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from .errors import InputError

NORM_TOL = 1e-10


def is_power_of_two(d: int) -> bool:
    return isinstance(d, (int, np.integer)) and d >= 2 and (d & (d - 1)) == 0


@dataclass(frozen=True)
class RegisterShape:
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise InputError("a register shape needs at least one register")
        for d in dims:
            if not is_power_of_two(d):
                raise InputError(f"register dimension {d} is not a power of two >= 2")
        object.__setattr__(self, "dims", dims)

    @property
    def total_dim(self) -> int:
        return reduce(lambda a, b: a * b, self.dims, 1)

    def __len__(self) -> int:
        return len(self.dims)


def _shape(dims) -> RegisterShape:
    if isinstance(dims, RegisterShape):
        return dims
    if isinstance(dims, (int, np.integer)):
        return RegisterShape((int(dims),))
    return RegisterShape(tuple(dims))


@dataclass(frozen=True, eq=False)
class PureState:
    shape: RegisterShape
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != self.shape.total_dim:
            raise InputError(
                f"{amps.size} amplitudes do not fit register shape {self.shape.dims}"
            )
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise InputError(f"state is not normalized (squared norm {norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.shape.dims

    def tensor_view(self) -> np.ndarray:
        """Amplitudes reshaped so axis ``i`` indexes register ``i``."""
        return self.amplitudes.reshape(self.dims)

    def scaled(self, phase: complex) -> "PureState":
        return PureState(self.shape, self.amplitudes * phase)

    def __repr__(self):
        return f"PureState(dims={self.dims}, amplitudes={np.array2string(self.amplitudes, precision=4)})"


def from_amplitudes(dims, amplitudes, normalize: bool = False) -> PureState:
    amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
    if normalize:
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise InputError("cannot normalize the zero vector")
        amps = amps / norm
    return PureState(_shape(dims), amps)


def basis_state(dims, index: int) -> PureState:
    shape = _shape(dims)
    if not 0 <= index < shape.total_dim:
        raise InputError(f"basis index {index} out of range for dims {shape.dims}")
    amps = np.zeros(shape.total_dim, dtype=complex)
    amps[index] = 1.0
    return PureState(shape, amps)


def uniform_state(dims) -> PureState:
    shape = _shape(dims)
    return PureState(shape, np.full(shape.total_dim, 1 / np.sqrt(shape.total_dim), dtype=complex))


def random_state(dims, seed: int) -> PureState:
    """Haar-random pure state: i.i.d. standard complex Gaussians, normalized."""
    shape = _shape(dims)
    rng = np.random.default_rng(seed)
    amps = rng.standard_normal(shape.total_dim) + 1j * rng.standard_normal(shape.total_dim)
    return PureState(shape, amps / np.linalg.norm(amps))


def tensor(*states: PureState) -> PureState:
    dims = sum((s.dims for s in states), ())
    amps = reduce(np.kron, (s.amplitudes for s in states))
    return PureState(RegisterShape(dims), amps)


def apply(U, state: PureState, target: int = 0) -> PureState:
    """Apply ``U`` to register ``target`` of ``state``, identity elsewhere."""
    mat = np.asarray(U, dtype=complex)
    dims = state.dims
    if not 0 <= target < len(dims):
        raise InputError(f"target register {target} does not exist in shape {dims}")
    if mat.shape != (dims[target], dims[target]):
        raise InputError(
            f"operator of shape {mat.shape} does not act on register of dimension {dims[target]}"
        )
    psi = np.moveaxis(state.tensor_view(), target, 0)
    out = np.tensordot(mat, psi, axes=([1], [0]))
    out = np.moveaxis(out, 0, target)
    return PureState(state.shape, out.reshape(-1))


def apply_kron(factors: Sequence, state: PureState, target: int = 0) -> PureState:
    """Apply ``factors[0] ⊗ factors[1] ⊗ ...`` to one register without forming the product.

    The register dimension must equal the product of the factor dimensions;
    ``factors[0]`` acts on the most significant digit.
    """
    mats = [np.asarray(f, dtype=complex) for f in factors]
    dims = state.dims
    sub = [m.shape[0] for m in mats]
    if int(np.prod(sub)) != dims[target]:
        raise InputError(f"factor dimensions {sub} do not multiply to {dims[target]}")
    split = dims[:target] + tuple(sub) + dims[target + 1:]
    psi = state.amplitudes.reshape(split)
    for i, m in enumerate(mats):
        axis = target + i
        psi = np.moveaxis(np.tensordot(m, np.moveaxis(psi, axis, 0), axes=([1], [0])), 0, axis)
    return PureState(state.shape, psi.reshape(-1))


def fidelity(a: PureState, b: PureState) -> float:
    if a.shape.total_dim != b.shape.total_dim:
        raise InputError(f"cannot compare states of dims {a.dims} and {b.dims}")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def max_residual(a: PureState, b: PureState) -> float:
    """Largest per-amplitude absolute difference (no global-phase freedom)."""
    if a.dims != b.dims:
        raise InputError(f"cannot compare states of dims {a.dims} and {b.dims}")
    return float(np.max(np.abs(a.amplitudes - b.amplitudes)))


def distribution(state: PureState, register: int | None = None) -> np.ndarray:
    """Outcome probabilities of measuring one register (or all, flat-indexed)."""
    probs = np.abs(state.amplitudes) ** 2
    if register is None:
        return probs
    if not 0 <= register < len(state.dims):
        raise InputError(f"register {register} does not exist in shape {state.dims}")
    others = tuple(i for i in range(len(state.dims)) if i != register)
    return probs.reshape(state.dims).sum(axis=others)


def sample(state: PureState, seed: int, register: int | None = None) -> int:
    probs = distribution(state, register)
    rng = np.random.default_rng(seed)
    return int(rng.choice(probs.size, p=probs / probs.sum()))


def partial_overlap(state: PureState, other: PureState, register: int) -> np.ndarray:
    """Contract ``<other|`` into register ``register``; returns the remaining amplitudes.

    When ``state`` factors as ``rest ⊗ other`` this recovers ``rest`` exactly.
    """
    if other.dims != (state.dims[register],):
        raise InputError(f"state of dims {other.dims} cannot contract register {register}")
    psi = np.moveaxis(state.tensor_view(), register, -1)
    return (psi @ other.amplitudes.conj()).reshape(-1)
