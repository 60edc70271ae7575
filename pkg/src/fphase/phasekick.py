"""
Phase kickback without ancilla initialization.

On a single M-dimensional register, the four steps T_z, R_k, T_-z, R_k^-1
multiply any state by the scalar ω_M^{kz}. Replacing T_z by the oracle U_f
(a translation controlled by the first register) gives the f-conditioned
phase transform R_{k,f}: |x> -> ω_M^{k f(x)}|x> on the control register, with
the ancilla returned to its exact starting state whatever that state was.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import gates
from .errors import InputError
from .gates import UnitaryMatrix, omega
from .oracle import Direction, FunctionTable, OracleTranscript, apply_uf
from .registers import PureState, apply, basis_state, partial_overlap, tensor

PROPORTIONALITY_TOL = 1e-9


class ProportionalityError(ArithmeticError):
    """Final state is not a scalar multiple of the initial one."""


class VariantTag(str, Enum):
    RTRT = "rtrt"
    CYCLIC_1 = "cyclic-1"
    CYCLIC_2 = "cyclic-2"
    CYCLIC_3 = "cyclic-3"
    S_FORM = "s-form"


@dataclass(frozen=True)
class PhaseResult:
    final_state: PureState
    extracted_phase: complex | None = None
    residual: float = 0.0
    transcript: OracleTranscript | None = None
    control_state: np.ndarray | None = None


def variant_steps(M: int, k: int, z: int, variant: VariantTag | str) -> list[UnitaryMatrix]:
    """Gates of one J_{k,z} realization, in the order they are applied."""
    variant = VariantTag(variant)
    T, T_inv = gates.translation(M, z), gates.translation(M, -z)
    R, R_inv = gates.r_phase(M, k), gates.r_phase(M, -k)
    if variant is VariantTag.S_FORM:
        S = gates.s_gate(M, k)
        return [T, S, T, S]
    base = [T, R, T_inv, R_inv]
    shift = {
        VariantTag.RTRT: 0,
        VariantTag.CYCLIC_1: 1,
        VariantTag.CYCLIC_2: 2,
        VariantTag.CYCLIC_3: 3,
    }[variant]
    return base[shift:] + base[:shift]


def _compose(steps: list[UnitaryMatrix]) -> UnitaryMatrix:
    out = steps[0]
    for g in steps[1:]:
        out = g @ out
    return out


def j_phase_matrix(M: int, k: int, z: int, variant: VariantTag | str = VariantTag.RTRT) -> UnitaryMatrix:
    """Composed matrix of a variant; equals ω_M^{kz}·I.

    rtrt = [R^-1, T^-1], cyclic-1 = [T, R^-1], cyclic-2 = [R, T],
    cyclic-3 = [T^-1, R], s-form = S T S T.
    """
    return _compose(variant_steps(M, k, z, variant))


def negated_commutators(M: int, k: int, z: int) -> dict[str, UnitaryMatrix]:
    """The four commutators that realize J_{-k,z} = ω_M^{-kz}·I."""
    T, T_inv = gates.translation(M, z), gates.translation(M, -z)
    R, R_inv = gates.r_phase(M, k), gates.r_phase(M, -k)
    c = gates.commutator
    return {
        "[R,T^-1]": c(R, T_inv),
        "[T,R]": c(T, R),
        "[R^-1,T]": c(R_inv, T),
        "[T^-1,R^-1]": c(T_inv, R_inv),
    }


def extract_phase(initial: PureState, final: PureState, tol: float = PROPORTIONALITY_TOL) -> tuple[complex, float]:
    """Scalar c with final ≈ c·initial, and the max per-amplitude residual."""
    c = complex(np.vdot(initial.amplitudes, final.amplitudes))
    residual = float(np.max(np.abs(final.amplitudes - c * initial.amplitudes)))
    if residual > tol:
        raise ProportionalityError(f"final state is not a multiple of the initial one (residual {residual:.3e})")
    return c, residual


def j_phase(psi: PureState, k: int, z: int, variant: VariantTag | str = VariantTag.RTRT) -> PhaseResult:
    if len(psi.dims) != 1:
        raise InputError(f"j_phase acts on a single register, got dims {psi.dims}")
    state = psi
    for g in variant_steps(psi.dims[0], k, z, variant):
        state = apply(g, state, 0)
    phase, residual = extract_phase(psi, state)
    return PhaseResult(state, phase, residual)


def reference_diagonal(f: FunctionTable, k: int) -> np.ndarray:
    """Diagonal of R_{k,f}: ω_M^{k·f(x)} for each x."""
    return omega(f.M, k * f.as_array())


def reference_phase(f: FunctionTable, k: int) -> UnitaryMatrix:
    return UnitaryMatrix(np.diag(reference_diagonal(f, k)))


def _check_control(control: PureState, f: FunctionTable):
    if control.dims != (f.N,):
        raise InputError(f"control register dims {control.dims} do not match N={f.N}")


def f_phase_uninitialized(control: PureState, ancilla: PureState, f: FunctionTable, k: int) -> PhaseResult:
    """R_{k,f} on ``control`` using an arbitrary, untouched-afterwards ancilla.

    Oracle budget: one U_f and one U_-f.
    """
    _check_control(control, f)
    if ancilla.dims != (f.M,):
        raise InputError(f"ancilla dims {ancilla.dims} do not match M={f.M}")
    result = _run_uninitialized(tensor(control, ancilla), f, k)
    ctrl = partial_overlap(result.final_state, ancilla, register=1)
    return PhaseResult(result.final_state, transcript=result.transcript, control_state=ctrl)


def f_phase_uninitialized_entangled(control: PureState, ancilla_env: PureState, f: FunctionTable, k: int) -> PhaseResult:
    """As f_phase_uninitialized, with the ancilla entangled to an environment register.

    Only the control and ancilla registers are acted on.
    """
    _check_control(control, f)
    if len(ancilla_env.dims) != 2 or ancilla_env.dims[0] != f.M:
        raise InputError(f"ancilla-environment dims {ancilla_env.dims} must be (M={f.M}, E)")
    result = _run_uninitialized(tensor(control, ancilla_env), f, k)
    psi = result.final_state.amplitudes.reshape(f.N, -1)
    ctrl = psi @ ancilla_env.amplitudes.conj()
    return PhaseResult(result.final_state, transcript=result.transcript, control_state=ctrl)


def _run_uninitialized(joint: PureState, f: FunctionTable, k: int) -> PhaseResult:
    transcript = OracleTranscript()
    state = apply_uf(joint, f, Direction.FORWARD, transcript)
    state = apply(gates.r_phase(f.M, k), state, 1)
    state = apply_uf(state, f, Direction.INVERSE, transcript)
    state = apply(gates.r_phase(f.M, -k), state, 1)
    return PhaseResult(state, transcript=transcript)


def prepare_eigenstate(M: int, k: int) -> PureState:
    """QFT T_{-k} |0> = QFT|-k>, on which every T_z acts as ω_M^{kz}."""
    state = apply(gates.translation(M, -k), basis_state(M, 0), 0)
    return apply(gates.qft(M), state, 0)


def f_phase_initialized(control: PureState, f: FunctionTable, k: int) -> PhaseResult:
    """R_{k,f} with a prepared eigenstate ancilla; a single U_f call."""
    _check_control(control, f)
    ancilla = prepare_eigenstate(f.M, k)
    transcript = OracleTranscript()
    state = apply_uf(tensor(control, ancilla), f, Direction.FORWARD, transcript)
    ctrl = partial_overlap(state, ancilla, register=1)
    return PhaseResult(state, transcript=transcript, control_state=ctrl)


@dataclass(frozen=True)
class OptimalityReport:
    M: int
    k: int
    z1: int
    z2: int
    single_call_residual: float
    contradiction_distance: float
    contradiction_entry: tuple[int, int]

    def to_dict(self) -> dict:
        return {
            "M": self.M, "k": self.k, "z1": self.z1, "z2": self.z2,
            "single_call_residual": self.single_call_residual,
            "contradiction_distance": self.contradiction_distance,
            "contradiction_entry": list(self.contradiction_entry),
        }


def optimality_witness(M: int, k: int, z1: int, z2: int) -> OptimalityReport:
    """Why one oracle call cannot suffice on an arbitrary ancilla.

    For a fixed z the unique fix-up is V = ω^{kz} T_{-z}, which depends on z.
    A single V working for both z1 and z2 would force
    T_{z1-z2} = ω^{k(z1-z2)}·I, but a nontrivial permutation is never a
    scaled identity; the reported distance is at least 1.
    """
    if (z1 - z2) % M == 0:
        raise InputError(f"z1={z1} and z2={z2} coincide mod {M}")
    residual = 0.0
    for z in (z1, z2):
        V = omega(M, k * z) * np.asarray(gates.translation(M, -z))
        target = gates.scalar(M, omega(M, k * z))
        residual = max(residual, float(np.max(np.abs(V @ np.asarray(gates.translation(M, z)) - target))))
    d = z1 - z2
    gap = np.abs(np.asarray(gates.translation(M, d)) - gates.scalar(M, omega(M, k * d)))
    entry = np.unravel_index(int(np.argmax(gap)), gap.shape)
    return OptimalityReport(M, k, z1, z2, residual, float(gap[entry]), (int(entry[0]), int(entry[1])))
