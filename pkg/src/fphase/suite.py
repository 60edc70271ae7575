"""Invariant sweep behind ``fphase verify``."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import gates, phasekick
from .gates import omega, unitarity_error
from .oracle import OracleTranscript, discretize, random_real_table, random_table
from .registers import PureState, from_amplitudes, max_residual, random_state, tensor

SWEEP_DIMS = (2, 4, 8, 16)
WITNESS_TOL = 1e-12


@dataclass
class Check:
    name: str
    max_residual: float
    passed: bool
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"name": self.name, "max_residual": float(self.max_residual), "pass": bool(self.passed)}
        if self.details:
            out["details"] = self.details
        return out


def _sweep(max_dim: int):
    """(M, k, z) triples in sorted order."""
    for M in SWEEP_DIMS:
        if M > max_dim:
            continue
        for k in range(M):
            for z in range(M):
                yield M, k, z


def _residual_check(name: str, residuals, tol: float, **details) -> Check:
    worst = max(residuals, default=0.0)
    return Check(name, worst, worst < tol, details)


def check_gate_unitarity(max_dim: int, tol: float) -> Check:
    res = []
    for M, k, z in _sweep(max_dim):
        for U in (gates.qft(M), gates.qft_inv(M), gates.translation(M, z), gates.r_phase(M, k), gates.s_gate(M, k)):
            res.append(unitarity_error(U.entries))
    for n in range(1, 5):
        res.append(unitarity_error(gates.walsh(n).entries))
    return _residual_check("gate_unitarity", res, tol)


def check_closed_forms(max_dim: int, tol: float) -> list[Check]:
    r_res, s_res, inv_res, qinv_res = [], [], [], []
    for M, k, _ in _sweep(max_dim):
        R, S = gates.r_phase(M, k), gates.s_gate(M, k)
        r_res.append(R.distance(gates.r_phase_closed(M, k)))
        s_res.append(S.distance(gates.s_gate_closed(M, k)))
        inv_res.append((S @ S).distance(np.eye(M)))
    for M in SWEEP_DIMS:
        if M <= max_dim:
            qinv_res.append((gates.qft_inv(M) @ gates.qft(M)).distance(np.eye(M)))
    return [
        _residual_check("qft_inverse", qinv_res, tol),
        _residual_check("r_phase_closed_form", r_res, tol),
        _residual_check("s_gate_closed_form", s_res, tol),
        _residual_check("s_gate_involution", inv_res, tol),
    ]


def check_translation_group(max_dim: int, tol: float) -> Check:
    res = []
    for M, z1, z2 in _sweep(max_dim):
        prod = gates.translation(M, z1) @ gates.translation(M, z2)
        res.append(prod.distance(gates.translation(M, z1 + z2)))
    return _residual_check("translation_group_law", res, tol)


def check_walsh_tensor_power(tol: float) -> Check:
    res = [gates.walsh(n).distance(gates.kron(*[gates.qft(2)] * n)) for n in range(1, 5)]
    return _residual_check("walsh_tensor_power", res, tol)


def check_commutators(max_dim: int, tol: float) -> list[Check]:
    var_res, neg_res, s_res = [], [], []
    for M, k, z in _sweep(max_dim):
        expected = gates.scalar(M, omega(M, k * z))
        mats = {v: phasekick.j_phase_matrix(M, k, z, v) for v in phasekick.VariantTag}
        var_res.extend(m.distance(expected) for m in mats.values())
        s_res.append(mats[phasekick.VariantTag.S_FORM].distance(mats[phasekick.VariantTag.RTRT]))
        neg_expected = gates.scalar(M, omega(M, -k * z))
        neg_res.extend(m.distance(neg_expected) for m in phasekick.negated_commutators(M, k, z).values())
    return [
        _residual_check("commutator_variants", var_res, tol),
        _residual_check("negated_commutators", neg_res, tol),
        _residual_check("s_form_identity", s_res, tol),
    ]


def _budget_ok(t: OracleTranscript, forward: int, inverse: int) -> bool:
    return t.forward_calls == forward and t.inverse_calls == inverse


def check_ancilla_restoration(max_dim: int, seed: int, tol: float, trials: int = 10) -> Check:
    res, budget_ok = [], True
    rng = np.random.default_rng(seed)
    for n in (1, 2, 3):
        for m in (1, 2, 3):
            if 2**m > max_dim:
                continue
            for _ in range(trials):
                s = [int(v) for v in rng.integers(0, 2**63, size=3)]
                k = 1 + s[0] % (2**m - 1) if m > 1 else 1
                control, ancilla = random_state(2**n, s[0]), random_state(2**m, s[1])
                f = random_table(n, m, s[2])
                out = phasekick.f_phase_uninitialized(control, ancilla, f, k)
                phased = from_amplitudes(2**n, phasekick.reference_diagonal(f, k) * control.amplitudes)
                res.append(max_residual(out.final_state, tensor(phased, ancilla)))
                budget_ok &= _budget_ok(out.transcript, 1, 1)
    check = _residual_check("ancilla_restoration", res, tol, transcripts_exact=budget_ok)
    check.passed &= budget_ok
    return check


def bell_pair(M: int = 2) -> PureState:
    amps = np.zeros(M * M, dtype=complex)
    amps[[y * M + y for y in range(M)]] = 1
    return from_amplitudes((M, M), amps, normalize=True)


def check_entanglement_safety(max_dim: int, seed: int, tol: float) -> Check:
    res = []
    rng = np.random.default_rng(seed)
    for m in (1, 2, 3):
        M = 2**m
        if M > max_dim:
            continue
        for n in (1, 2):
            for env in (bell_pair(M), random_state((M, 2), int(rng.integers(2**63)))):
                control = random_state(2**n, int(rng.integers(2**63)))
                f = random_table(n, m, int(rng.integers(2**63)))
                for k in range(1, M):
                    out = phasekick.f_phase_uninitialized_entangled(control, env, f, k)
                    phased = from_amplitudes(2**n, phasekick.reference_diagonal(f, k) * control.amplitudes)
                    res.append(max_residual(out.final_state, tensor(phased, env)))
    return _residual_check("entanglement_safety", res, tol)


def check_eigenstate_kickback(max_dim: int, seed: int, tol: float) -> Check:
    res, budget_ok = [], True
    for M, k, z in _sweep(max_dim):
        psi = phasekick.prepare_eigenstate(M, k)
        shifted = gates.translation(M, z).entries @ psi.amplitudes
        res.append(float(np.max(np.abs(shifted - omega(M, k * z) * psi.amplitudes))))
    rng = np.random.default_rng(seed)
    for n in (1, 2, 3):
        for m in (1, 2, 3):
            if 2**m > max_dim:
                continue
            f = random_table(n, m, int(rng.integers(2**63)))
            control = random_state(2**n, int(rng.integers(2**63)))
            for k in range(2**m):
                out = phasekick.f_phase_initialized(control, f, k)
                expected = phasekick.reference_diagonal(f, k) * control.amplitudes
                res.append(float(np.max(np.abs(out.control_state - expected))))
                budget_ok &= _budget_ok(out.transcript, 1, 0)
    check = _residual_check("eigenstate_kickback", res, tol, transcripts_exact=budget_ok)
    check.passed &= budget_ok
    return check


def check_optimality(max_dim: int) -> Check:
    worst_i, min_gap = 0.0, np.inf
    for M, k, z1 in _sweep(max_dim):
        for z2 in range(M):
            if z2 == z1:
                continue
            rep = phasekick.optimality_witness(M, k, z1, z2)
            worst_i = max(worst_i, rep.single_call_residual)
            min_gap = min(min_gap, rep.contradiction_distance)
    min_gap = float(min_gap) if np.isfinite(min_gap) else 0.0
    residual = worst_i + max(0.0, 1.0 - min_gap)
    return Check(
        "optimality_witness",
        residual,
        worst_i < WITNESS_TOL and min_gap >= 1.0,
        {"single_call_residual": worst_i, "min_contradiction_distance": min_gap},
    )


def phase_angle_errors(real_values, table, k: int) -> np.ndarray:
    """|arg| of the ratio between the discretized phase and exp(2πi·k·f(x))."""
    got = phasekick.reference_diagonal(table, k)
    want = np.exp(2j * np.pi * k * np.asarray(real_values))
    return np.abs(np.angle(got * want.conj()))


def check_phase_error_bound(seed: int, tables: int = 20) -> Check:
    excess, worst_ratio = 0.0, 0.0
    ok = True
    for t in range(tables):
        g = random_real_table(4, seed + t)
        for m in range(1, 9):
            approx = discretize(g, m)
            for k in range(1, 5):
                err = float(np.max(phase_angle_errors(g.values, approx, k)))
                bound = 2 * np.pi * k * 2.0**-m
                ok &= err < bound
                excess = max(excess, err - bound if err >= bound else 0.0)
                worst_ratio = max(worst_ratio, err / bound)
    return Check("phase_error_bound", excess, ok, {"max_error_over_bound": worst_ratio})


def run_all(max_dim: int = 16, seed: int = 0, tol: float = 1e-10) -> list[Check]:
    checks = [check_gate_unitarity(max_dim, tol)]
    checks += check_closed_forms(max_dim, tol)
    checks.append(check_translation_group(max_dim, tol))
    checks.append(check_walsh_tensor_power(tol))
    checks += check_commutators(max_dim, tol)
    checks.append(check_ancilla_restoration(max_dim, seed, tol))
    checks.append(check_entanglement_safety(max_dim, seed, tol))
    checks.append(check_eigenstate_kickback(max_dim, seed, tol))
    checks.append(check_optimality(max_dim))
    checks.append(check_phase_error_bound(seed))
    return checks
