"""
Generalized Deutsch-Jozsa: decide constant vs evenly distributed with a
single application of R_{k,f} between two Walsh-Hadamard layers, and recover
the image structure (D, L, a) by Fourier sampling.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from functools import reduce

import numpy as np

from . import gates
from .errors import InputError, PromiseViolation
from .oracle import FunctionTable, Label, OracleTranscript, StructureParams, structure_of
from .phasekick import f_phase_initialized, f_phase_uninitialized
from .registers import PureState, apply, apply_kron, basis_state, distribution, from_amplitudes, random_state, sample

CONSTANT_THRESHOLD = 1 - 1e-9
SUPPORT_TOL = 1e-9


class Mode(str, Enum):
    INITIALIZED = "initialized"
    UNINITIALIZED = "uninitialized"


@dataclass(frozen=True)
class GdjReport:
    distribution: tuple[float, ...]
    classification: Label
    oracle_calls: int
    k_used: int
    mode: Mode
    outcome: int
    transcript: OracleTranscript
    recovered: StructureParams | None = None

    def to_dict(self) -> dict:
        return {
            "distribution": list(self.distribution),
            "classification": self.classification.value,
            "oracle_calls": self.oracle_calls,
            "k_used": self.k_used,
            "mode": self.mode.value,
            "outcome": self.outcome,
            "transcript": self.transcript.to_dict(),
            "recovered": None if self.recovered is None else self.recovered.to_dict(),
        }


def parity_dot(x: int, y: int) -> int:
    """x·y over Z_2^n: parity of the popcount of x AND y."""
    return bin(x & y).count("1") & 1


def brute_sum_s(f: FunctionTable, k: int, y: int) -> complex:
    """S(y) = Σ_x (-1)^{x·y} ω_M^{k f(x)}, summed term by term."""
    total = 0j
    for x in range(f.N):
        sign = -1 if parity_dot(x, y) else 1
        total += sign * cmath.exp(2j * cmath.pi * ((k * f(x)) % f.M) / f.M)
    return total


def _walsh_layer(state: PureState, n: int) -> PureState:
    if n <= 6:
        return apply(gates.walsh(n), state, 0)
    return apply_kron(gates.walsh_factors(n), state, 0)


def gdj_run(
    f: FunctionTable,
    k: int = 1,
    mode: Mode | str = Mode.UNINITIALIZED,
    seed: int = 0,
    recover: bool = False,
) -> GdjReport:
    """Measure W_n R_{k,f} W_n |0^n> and classify.

    In uninitialized mode the ancilla starts in a seeded random state and R_{k,f}
    costs two oracle calls; initialized mode prepares the T_z eigenstate and
    costs one. Outcome |0> means Constant. ``k`` must not be a multiple of D for
    the evenly distributed case to cancel; the default k=1 is always safe.
    """
    mode = Mode(mode)
    if k % f.M == 0:
        raise InputError(f"k={k} is 0 mod M={f.M}; the transform would be trivial")
    control = _walsh_layer(basis_state(f.N, 0), f.n)
    if mode is Mode.INITIALIZED:
        result = f_phase_initialized(control, f, k)
    else:
        ancilla = random_state(f.M, seed)
        result = f_phase_uninitialized(control, ancilla, f, k)
    joint = _walsh_layer(result.final_state, f.n)
    probs = distribution(joint, register=0)
    label = Label.CONSTANT if probs[0] > CONSTANT_THRESHOLD else Label.EVENLY_DISTRIBUTED
    recovered = None
    if recover and label is Label.EVENLY_DISTRIBUTED:
        recovered = recover_structure(f)
    return GdjReport(
        distribution=tuple(float(p) for p in probs),
        classification=label,
        oracle_calls=result.transcript.total,
        k_used=k,
        mode=mode,
        outcome=sample(joint, seed, register=0),
        transcript=result.transcript,
        recovered=recovered,
    )


def image_superposition(f: FunctionTable) -> PureState:
    """(1/√D) Σ over the distinct values of f, built in one pass over the table."""
    amps = np.zeros(f.M, dtype=complex)
    amps[sorted(set(f.values))] = 1.0
    return from_amplitudes(f.M, amps, normalize=True)


def fourier_image_distribution(f: FunctionTable) -> np.ndarray:
    return distribution(apply(gates.qft(f.M), image_superposition(f), 0))


def recover_structure(f: FunctionTable, mode: str = "deterministic", seed: int = 0) -> StructureParams:
    """Recover (D, L, a) from the Fourier transform of the image superposition.

    The transform of Σ_j |jL + a> is supported on the multiples of D whatever
    the shift a, so D = gcd(support ∪ {M}), L = M/D, and a = f(0) mod L.
    ``mode="sampled"`` replaces reading the support with 4D + 8 measurement
    samples; it can overestimate D with probability below 2^-16.
    """
    direct = structure_of(f)
    probs = fourier_image_distribution(f)
    M = f.M
    if mode == "deterministic":
        support = [t for t in range(M) if probs[t] > SUPPORT_TOL]
        D = reduce(math.gcd, support, M)
        if support != list(range(0, M, D)):
            raise PromiseViolation(f"Fourier support {support} is not the multiples of {D}")
        if D != direct.D:
            raise PromiseViolation(f"Fourier period gives D={D} but the table has {direct.D} values")
    elif mode == "sampled":
        rng = np.random.default_rng(seed)
        draws = rng.choice(M, size=4 * direct.D + 8, p=probs / probs.sum())
        D = reduce(math.gcd, (int(t) for t in draws), M)
    else:
        raise InputError(f"unknown recovery mode {mode!r}")
    L = M // D
    sizes = direct.A_sizes if D == direct.D else (f.N // D,) * D
    return StructureParams(D, L, f(0) % L, sizes)
