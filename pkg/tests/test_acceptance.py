"""Exit criteria. Run with ``pytest tests/test_acceptance.py`` for the per-criterion summary."""
import time

import numpy as np

from fphase import gates, phasekick
from fphase.gdj import Mode, brute_sum_s, gdj_run, recover_structure
from fphase.gates import omega
from fphase.oracle import (
    Label,
    RealFunctionTable,
    classify_classically,
    compose_g_of_f,
    discretize,
    make_constant,
    make_evenly_distributed,
    random_real_table,
    random_table,
)
from fphase.phasekick import VariantTag
from fphase.registers import from_amplitudes, max_residual, random_state, tensor
from fphase.suite import bell_pair, phase_angle_errors

SWEEP = (2, 4, 8, 16)
TOL = 1e-10


def _evenly_params(n: int, m: int):
    D = 2
    while D <= min(2**n, 2**m):
        for a in range(2**m // D):
            yield D, a
        D *= 2


def _phased(control, f, k):
    return from_amplitudes(control.dims, phasekick.reference_diagonal(f, k) * control.amplitudes)


def test_c1_commutator_identity_sweep(criterion):
    start = time.perf_counter()
    worst = worst_neg = 0.0
    for M in SWEEP:
        for k in range(M):
            for z in range(M):
                target = gates.scalar(M, omega(M, k * z))
                for v in VariantTag:
                    worst = max(worst, phasekick.j_phase_matrix(M, k, z, v).distance(target))
                neg = gates.scalar(M, omega(M, -k * z))
                for mat in phasekick.negated_commutators(M, k, z).values():
                    worst_neg = max(worst_neg, mat.distance(neg))
    elapsed = time.perf_counter() - start
    criterion["detail"] = f"variants {worst:.1e}, negated {worst_neg:.1e}, {elapsed:.2f}s"
    assert worst < TOL
    assert worst_neg < TOL
    assert elapsed < 5.0


def test_c2_uninitialized_transform(criterion):
    worst, runs = 0.0, 0
    for n in (1, 2, 3):
        for m in (1, 2, 3):
            M = 2**m
            for k in range(1, M):
                for trial in range(100):
                    seed = ((n * 10 + m) * 100 + k) * 1000 + trial
                    control = random_state(2**n, seed)
                    ancilla = random_state(M, seed + 1)
                    f = random_table(n, m, seed + 2)
                    out = phasekick.f_phase_uninitialized(control, ancilla, f, k)
                    full = np.kron(np.diag(phasekick.reference_diagonal(f, k)), np.eye(M))
                    expected = full @ tensor(control, ancilla).amplitudes
                    worst = max(worst, float(np.max(np.abs(out.final_state.amplitudes - expected))))
                    assert out.transcript.forward_calls == 1 and out.transcript.inverse_calls == 1
                    assert out.transcript.total == 2
                    runs += 1
    criterion["detail"] = f"{runs} runs, max residual {worst:.1e}"
    assert worst < TOL


def test_c3_entangled_ancilla(criterion):
    worst, runs = 0.0, 0
    for M in (2, 4):
        pair = bell_pair(M)
        m = M.bit_length() - 1
        for n in (1, 2, 3):
            for seed in range(10):
                control = random_state(2**n, seed)
                f = random_table(n, m, 100 + seed)
                for k in range(1, M):
                    out = phasekick.f_phase_uninitialized_entangled(control, pair, f, k)
                    worst = max(worst, max_residual(out.final_state, tensor(_phased(control, f, k), pair)))
                    runs += 1
    criterion["detail"] = f"{runs} runs, max residual {worst:.1e}"
    assert worst < TOL


def test_c4_one_call_variant(criterion):
    worst_eig = worst_ctrl = 0.0
    for M in SWEEP:
        for k in range(M):
            psi = phasekick.prepare_eigenstate(M, k)
            for z in range(M):
                got = gates.translation(M, z).entries @ psi.amplitudes
                worst_eig = max(worst_eig, float(np.max(np.abs(got - omega(M, k * z) * psi.amplitudes))))
    for n in (1, 2, 3):
        for m in (1, 2, 3):
            for seed in range(10):
                f = random_table(n, m, seed)
                control = random_state(2**n, seed + 50)
                for k in range(2**m):
                    out = phasekick.f_phase_initialized(control, f, k)
                    expected = phasekick.reference_phase(f, k).entries @ control.amplitudes
                    worst_ctrl = max(worst_ctrl, float(np.max(np.abs(out.control_state - expected))))
                    assert out.transcript.to_dict()["order"] == ["forward"]
    criterion["detail"] = f"eigen {worst_eig:.1e}, control {worst_ctrl:.1e}"
    assert worst_eig < TOL
    assert worst_ctrl < TOL


def test_c5_gdj_exactness(criterion):
    start = time.perf_counter()
    instances = 0
    worst_brute = 0.0
    for n in range(1, 6):
        for m in range(1, 6):
            cases = [(make_constant(n, m, c), Label.CONSTANT) for c in range(2**m)]
            for D, a in _evenly_params(n, m):
                for seed in range(5):
                    cases.append((make_evenly_distributed(n, m, D, a, seed)[0], Label.EVENLY_DISTRIBUTED))
            for f, truth in cases:
                brute = np.array([abs(brute_sum_s(f, 1, y) / f.N) ** 2 for y in range(f.N)])
                for mode in Mode:
                    rep = gdj_run(f, 1, mode, seed=instances)
                    p0 = rep.distribution[0]
                    assert abs(p0 - (1.0 if truth is Label.CONSTANT else 0.0)) < TOL
                    assert rep.classification is truth
                    assert rep.oracle_calls == (1 if mode is Mode.INITIALIZED else 2)
                    worst_brute = max(worst_brute, float(np.max(np.abs(np.array(rep.distribution) - brute))))
                instances += 1
    elapsed = time.perf_counter() - start
    criterion["detail"] = f"{instances} instances x 2 modes, brute-sum residual {worst_brute:.1e}, {elapsed:.1f}s"
    assert worst_brute < TOL
    assert elapsed < 60.0


def test_c6_structure_recovery(criterion):
    exact = 0
    for n in range(1, 7):
        for m in range(1, 7):
            for D, a in _evenly_params(n, m):
                f, truth = make_evenly_distributed(n, m, D, a, seed=n + 7 * m)
                got = recover_structure(f, "deterministic")
                assert (got.D, got.L, got.a) == (truth.D, truth.L, truth.a % truth.L)
                exact += 1
    rng = np.random.default_rng(2024)
    successes = 0
    for trial in range(1000):
        n, m = int(rng.integers(1, 7)), int(rng.integers(1, 7))
        params = list(_evenly_params(n, m))
        if not params:
            n = m = 3
            params = list(_evenly_params(n, m))
        D, a = params[int(rng.integers(len(params)))]
        f, truth = make_evenly_distributed(n, m, D, a, seed=trial)
        got = recover_structure(f, "sampled", seed=trial)
        successes += (got.D, got.L, got.a) == (truth.D, truth.L, truth.a)
    criterion["detail"] = f"deterministic {exact}/{exact}, sampled {successes}/1000"
    assert successes >= 990


def test_c7_classical_baselines(criterion):
    rows = []
    for N in (4, 8, 16, 32):
        n = N.bit_length() - 1
        f = make_constant(n, 5, 7)
        label, q = classify_classically(f)
        assert (label, q) == (Label.CONSTANT, N // 2 + 1)
        D = 2
        while D <= N:
            label, q = classify_classically(f, D_known=D)
            assert (label, q) == (Label.CONSTANT, N // D + 1)
            D *= 2
        # the evenly distributed adversary pushes the unknown-D prober to the same count
        g, _ = make_evenly_distributed(n, 5, 2, 3, seed=N, adversarial=True)
        assert classify_classically(g) == (Label.EVENLY_DISTRIBUTED, N // 2 + 1)
        rows.append(f"N={N}:{N // 2 + 1}")
    criterion["detail"] = ", ".join(rows)


def test_c8_optimality_witness(criterion):
    worst, min_gap = 0.0, np.inf
    for M in SWEEP:
        for k in range(M):
            for z1 in range(M):
                for z2 in range(M):
                    if z1 == z2:
                        continue
                    rep = phasekick.optimality_witness(M, k, z1, z2)
                    worst = max(worst, rep.single_call_residual)
                    min_gap = min(min_gap, rep.contradiction_distance)
    criterion["detail"] = f"single-call residual {worst:.1e}, min contradiction distance {min_gap}"
    assert worst < 1e-12
    assert min_gap >= 1.0


def test_c9_approximate_transform(criterion):
    worst_ratio = 0.0
    for seed in range(100):
        real = random_real_table(4, seed)
        outer = random_table(4, 4, 10_000 + seed)
        pulled = RealFunctionTable(4, tuple(real.values[v] for v in outer.values))
        for m in range(1, 9):
            approx = discretize(real, m)
            composed = compose_g_of_f(real, outer, m)
            assert composed == discretize(pulled, m)
            for k in range(1, 5):
                bound = 2 * np.pi * k * 2.0**-m
                err = float(np.max(phase_angle_errors(real.values, approx, k)))
                err_g = float(np.max(phase_angle_errors(pulled.values, composed, k)))
                assert err < bound and err_g < bound
                worst_ratio = max(worst_ratio, err / bound, err_g / bound)
        identity_g = RealFunctionTable(4, tuple(y / 16 for y in range(16)))
        assert compose_g_of_f(identity_g, outer, 4) == outer
    criterion["detail"] = f"max error / bound = {worst_ratio:.6f}"
