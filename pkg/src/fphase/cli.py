"""
Command-line entry point.

    fphase verify [--max-dim 16]
    fphase gdj    --n 3 --m 1 --constant 1 | --d 2 [--a 0] | --input f.json
    fphase phase  --m-dim 4 --k 1 --z 1 [--variant rtrt|...|all]
    fphase phase  --n 2 --m 2 --k 1 [--input f.json] [--mode initialized]

Exit codes: 0 all checks pass, 1 a check failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import phasekick, suite
from .errors import InputError, PromiseViolation
from .gates import omega
from .gdj import Mode, brute_sum_s, gdj_run
from .oracle import FunctionTable, Label, make_constant, make_evenly_distributed, random_table
from .registers import from_amplitudes, max_residual, random_state, tensor

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
MAX_JOINT_DIM = 4096
BRUTE_SUM_LIMIT = 256


@dataclass
class RunConfig:
    command: str
    n: int | None = None
    m: int | None = None
    k: int = 1
    z: int = 1
    D: int | None = None
    a: int = 0
    constant: int | None = None
    m_dim: int | None = None
    max_dim: int = 16
    mode: str = "uninitialized"
    variant: str = "rtrt"
    seed: int = 0
    tol: float = 1e-10
    output: str = "text"
    input_path: str | None = None

    def validate(self):
        if not self.tol > 0:
            raise InputError(f"--tol must be positive, got {self.tol}")
        for name in ("n", "m"):
            v = getattr(self, name)
            if v is not None and not 1 <= v <= 12:
                raise InputError(f"--{name} must lie in [1, 12], got {v}")
        if self.n is not None and self.m is not None and 2 ** (self.n + self.m) > MAX_JOINT_DIM:
            raise InputError(f"joint dimension 2^{self.n + self.m} exceeds {MAX_JOINT_DIM}")
        if self.mode not in {m.value for m in Mode}:
            raise InputError(f"unknown --mode {self.mode!r}")
        if self.variant != "all" and self.variant not in {v.value for v in phasekick.VariantTag}:
            raise InputError(f"unknown --variant {self.variant!r}")


def _cplx(c: complex) -> list[float]:
    return [float(c.real), float(c.imag)]


def _seed_default() -> int:
    env = os.environ.get("PHASEKICK_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise InputError(f"PHASEKICK_SEED={env!r} is not an integer") from None


def _load_table(path: str) -> FunctionTable:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return FunctionTable.from_json(text)


def _emit(config: RunConfig, checks: list[suite.Check], report: dict, text_lines: list[str]) -> int:
    ok = all(c.passed for c in checks)
    if config.output == "json":
        payload = {
            "command": config.command,
            "config": asdict(config),
            "checks": [c.to_dict() for c in checks],
            "report": report,
        }
        print(json.dumps(payload, indent=2))
    else:
        for line in text_lines:
            print(line)
        if checks:
            width = max(len(c.name) for c in checks)
            print()
            for c in checks:
                print(f"{'PASS' if c.passed else 'FAIL'}  {c.name:<{width}}  max_residual={c.max_residual:.3e}")
        print(f"\n{'all checks passed' if ok else 'VERIFICATION FAILED'}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(config: RunConfig) -> int:
    checks = suite.run_all(max_dim=config.max_dim, seed=config.seed, tol=config.tol)
    dims = [M for M in suite.SWEEP_DIMS if M <= config.max_dim]
    return _emit(config, checks, {"dims": dims}, [f"sweeping M in {dims}, all k, z"])


def _gdj_table(config: RunConfig) -> tuple[FunctionTable, Label | None]:
    if config.input_path is not None:
        return _load_table(config.input_path), None
    if config.n is None or config.m is None:
        raise InputError("gdj needs --n and --m (or --input)")
    if config.constant is not None:
        return make_constant(config.n, config.m, config.constant), Label.CONSTANT
    if config.D is not None:
        f, _ = make_evenly_distributed(config.n, config.m, config.D, config.a, config.seed)
        return f, Label.EVENLY_DISTRIBUTED
    raise InputError("gdj needs one of --constant C, --d D, or --input PATH")


def cmd_gdj(config: RunConfig) -> int:
    f, truth = _gdj_table(config)
    if config.k % f.M >= 2:
        print(f"warning: k={config.k} cancels the evenly distributed case only when D does not divide k",
              file=sys.stderr)
    checks = []
    try:
        rep = gdj_run(f, config.k, config.mode, config.seed, recover=True)
    except PromiseViolation as exc:
        rep = gdj_run(f, config.k, config.mode, config.seed, recover=False)
        checks.append(suite.Check("promise", 1.0, False, {"error": str(exc)}))
    expected_calls = 1 if rep.mode is Mode.INITIALIZED else 2
    checks.append(suite.Check("oracle_calls", float(abs(rep.oracle_calls - expected_calls)),
                              rep.oracle_calls == expected_calls))
    if truth is not None:
        checks.append(suite.Check("classification", 0.0 if rep.classification is truth else 1.0,
                                  rep.classification is truth, {"expected": truth.value}))
    if f.N <= BRUTE_SUM_LIMIT:
        res = max(abs(p - abs(brute_sum_s(f, config.k, y) / f.N) ** 2) for y, p in enumerate(rep.distribution))
        checks.append(suite.Check("brute_sum_agreement", res, res < config.tol))
    report = {"function": {"n": f.n, "m": f.m, "values": list(f.values)}, **rep.to_dict()}
    lines = [
        f"f: Z_{f.N} -> Z_{f.M}, k={rep.k_used}, mode={rep.mode.value}",
        f"P(outcome 0) = {rep.distribution[0]:.12f}, sampled outcome = {rep.outcome}",
        f"classification: {rep.classification.value}",
        f"oracle calls: {rep.oracle_calls} ({rep.transcript.forward_calls} forward, {rep.transcript.inverse_calls} inverse)",
    ]
    if rep.recovered is not None:
        r = rep.recovered
        lines.append(f"recovered structure: D={r.D}, L={r.L}, a={r.a}")
    return _emit(config, checks, report, lines)


def _phase_j(config: RunConfig) -> int:
    M = config.m_dim if config.m_dim is not None else 2 ** (config.m or 2)
    variants = list(phasekick.VariantTag) if config.variant == "all" else [phasekick.VariantTag(config.variant)]
    psi = random_state(M, config.seed)
    expected = complex(omega(M, config.k * config.z))
    checks, rows, lines = [], [], [f"J_(k={config.k}, z={config.z}) on Z_{M}, expected phase {expected:.6f}"]
    for v in variants:
        out = phasekick.j_phase(psi, config.k, config.z, v)
        err = abs(out.extracted_phase - expected)
        res = max(err, out.residual)
        checks.append(suite.Check(f"j_phase[{v.value}]", res, res < config.tol))
        rows.append({"variant": v.value, "phase": _cplx(out.extracted_phase),
                     "expected": _cplx(expected), "residual": res})
        lines.append(f"  {v.value:<9} phase = {out.extracted_phase:.6f}   residual = {res:.2e}")
    return _emit(config, checks, {"M": M, "k": config.k, "z": config.z, "runs": rows}, lines)


def _phase_f(config: RunConfig) -> int:
    if config.input_path is not None:
        f = _load_table(config.input_path)
    else:
        if config.m is None:
            raise InputError("phase with --n also needs --m")
        f = random_table(config.n, config.m, config.seed)
    control = random_state(f.N, config.seed)
    diag = phasekick.reference_diagonal(f, config.k)
    expected = diag * control.amplitudes
    checks = []
    if config.mode == Mode.INITIALIZED.value:
        out = phasekick.f_phase_initialized(control, f, config.k)
        budget = (1, 0)
    else:
        ancilla = random_state(f.M, config.seed + 1)
        out = phasekick.f_phase_uninitialized(control, ancilla, f, config.k)
        budget = (1, 1)
        restored = max_residual(out.final_state, tensor(from_amplitudes(f.N, expected), ancilla))
        checks.append(suite.Check("ancilla_restored", restored, restored < config.tol))
    t = out.transcript
    ctrl_res = float(np.max(np.abs(out.control_state - expected)))
    checks.insert(0, suite.Check("control_phases", ctrl_res, ctrl_res < config.tol))
    checks.append(suite.Check("oracle_calls", 0.0 if (t.forward_calls, t.inverse_calls) == budget else 1.0,
                              (t.forward_calls, t.inverse_calls) == budget, t.to_dict()))
    measured = out.control_state / control.amplitudes
    rows = [
        {"x": x, "f": f(x), "expected": _cplx(diag[x]), "measured": _cplx(measured[x]),
         "residual": float(abs(measured[x] - diag[x]))}
        for x in range(f.N)
    ]
    lines = [f"R_(k={config.k}, f) with f: Z_{f.N} -> Z_{f.M}, mode={config.mode}", "  x  f(x)  expected            measured            residual"]
    for r in rows:
        e, mph = complex(*r["expected"]), complex(*r["measured"])
        lines.append(f"{r['x']:>3}  {r['f']:>4}  {e.real:+.5f}{e.imag:+.5f}j  {mph.real:+.5f}{mph.imag:+.5f}j  {r['residual']:.2e}")
    report = {"function": {"n": f.n, "m": f.m, "values": list(f.values)}, "mode": config.mode,
              "transcript": t.to_dict(), "phases": rows}
    return _emit(config, checks, report, lines)


def cmd_phase(config: RunConfig) -> int:
    if config.n is not None or config.input_path is not None:
        return _phase_f(config)
    return _phase_j(config)


COMMANDS = {"verify": cmd_verify, "gdj": cmd_gdj, "phase": cmd_phase}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="RNG seed (fallback: $PHASEKICK_SEED, then 0)")
    common.add_argument("--tol", type=float, default=1e-10)
    common.add_argument("--output", choices=["text", "json"], default="text")
    common.add_argument("--json", dest="output", action="store_const", const="json")

    parser = argparse.ArgumentParser(prog="fphase", description="f-conditioned phase transform simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="run the invariant sweep")
    p.add_argument("--max-dim", type=int, default=16, dest="max_dim")

    p = sub.add_parser("gdj", parents=[common], help="generalized Deutsch-Jozsa run")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--k", type=int, default=1)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--constant", type=int)
    group.add_argument("--d", type=int, dest="D")
    p.add_argument("--a", type=int, default=0)
    p.add_argument("--mode", default="uninitialized")
    p.add_argument("--input", dest="input_path")

    p = sub.add_parser("phase", parents=[common], help="J_{k,z} or R_{k,f} run")
    p.add_argument("--m-dim", type=int, dest="m_dim")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--z", type=int, default=1)
    p.add_argument("--variant", default="rtrt")
    p.add_argument("--mode", default="uninitialized")
    p.add_argument("--input", dest="input_path")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        fields = {k: v for k, v in vars(args).items() if v is not None}
        if "seed" not in fields:
            fields["seed"] = _seed_default()
        config = RunConfig(**fields)
        config.validate()
        return COMMANDS[config.command](config)
    except (InputError, PromiseViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
