"""
Function tables f: Z_N -> Z_M, the oracle U_f with call accounting, the
generators used by the Deutsch-Jozsa experiments, and m-bit discretization of
real-valued functions.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import InputError, PromiseViolation
from .registers import PureState


class Label(str, Enum):
    CONSTANT = "Constant"
    EVENLY_DISTRIBUTED = "EvenlyDistributed"


class Direction(str, Enum):
    FORWARD = "forward"
    INVERSE = "inverse"


@dataclass(frozen=True)
class FunctionTable:
    n: int
    m: int
    values: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.n, int) or not isinstance(self.m, int) or self.n < 1 or self.m < 1:
            raise InputError(f"n and m must be integers >= 1, got n={self.n!r}, m={self.m!r}")
        vals = tuple(self.values)
        if len(vals) != 2**self.n:
            raise InputError(f"table has {len(vals)} entries, expected 2^{self.n} = {2**self.n}")
        for v in vals:
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or not 0 <= v < 2**self.m:
                raise InputError(f"table entry {v!r} is not an integer in [0, {2**self.m})")
        object.__setattr__(self, "values", tuple(int(v) for v in vals))

    @property
    def N(self) -> int:
        return 2**self.n

    @property
    def M(self) -> int:
        return 2**self.m

    def __call__(self, x: int) -> int:
        return self.values[x]

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=np.int64)

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "m": self.m, "values": list(self.values)})

    @classmethod
    def from_dict(cls, data) -> "FunctionTable":
        if not isinstance(data, dict) or set(data) != {"n", "m", "values"}:
            raise InputError('function table JSON must be {"n": int, "m": int, "values": [int, ...]}')
        if not isinstance(data["values"], list):
            raise InputError("'values' must be a list")
        return cls(data["n"], data["m"], tuple(data["values"]))

    @classmethod
    def from_json(cls, text: str) -> "FunctionTable":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(data)


@dataclass(frozen=True)
class RealFunctionTable:
    n: int
    values: tuple[float, ...]

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise InputError(f"n must be an integer >= 1, got {self.n!r}")
        vals = tuple(self.values)
        if len(vals) != 2**self.n:
            raise InputError(f"table has {len(vals)} entries, expected {2**self.n}")
        for v in vals:
            if isinstance(v, bool) or not isinstance(v, (int, float, np.floating, np.integer)):
                raise InputError(f"table entry {v!r} is not a real number")
            if not 0.0 <= v < 1.0:
                raise InputError(f"table entry {v!r} is outside [0, 1)")
        object.__setattr__(self, "values", tuple(float(v) for v in vals))

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "values": list(self.values)})

    @classmethod
    def from_json(cls, text: str) -> "RealFunctionTable":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from exc
        if not isinstance(data, dict) or set(data) != {"n", "values"} or not isinstance(data["values"], list):
            raise InputError('real table JSON must be {"n": int, "values": [float, ...]}')
        return cls(data["n"], tuple(data["values"]))


@dataclass
class OracleTranscript:
    """Ordered log of oracle invocations; counts are derived from it."""

    order: list[Direction] = field(default_factory=list)

    def record(self, direction: Direction):
        self.order.append(Direction(direction))

    @property
    def forward_calls(self) -> int:
        return sum(1 for d in self.order if d is Direction.FORWARD)

    @property
    def inverse_calls(self) -> int:
        return sum(1 for d in self.order if d is Direction.INVERSE)

    @property
    def total(self) -> int:
        return len(self.order)

    def to_dict(self) -> dict:
        return {
            "forward_calls": self.forward_calls,
            "inverse_calls": self.inverse_calls,
            "order": [d.value for d in self.order],
        }


@dataclass(frozen=True)
class StructureParams:
    D: int
    L: int
    a: int
    A_sizes: tuple[int, ...]

    def to_dict(self) -> dict:
        return {"D": self.D, "L": self.L, "a": self.a, "A_sizes": list(self.A_sizes)}


def apply_uf(
    state: PureState,
    f: FunctionTable,
    direction: Direction | str = Direction.FORWARD,
    transcript: OracleTranscript | None = None,
) -> PureState:
    """|x>|y> -> |x>|y ± f(x) mod M> on registers 0 and 1.

    Registers after the first two (e.g. an environment entangled with the
    ancilla) are carried along untouched. The move is a pure index
    permutation, so forward followed by inverse is exact.
    """
    direction = Direction(direction)
    dims = state.dims
    if len(dims) < 2 or dims[0] != f.N or dims[1] != f.M:
        raise InputError(f"oracle for (N, M) = ({f.N}, {f.M}) cannot act on registers {dims}")
    sign = 1 if direction is Direction.FORWARD else -1
    psi = state.amplitudes.reshape(f.N, f.M, -1)
    xs = np.arange(f.N)[:, None]
    ys = (np.arange(f.M)[None, :] + sign * f.as_array()[:, None]) % f.M
    out = np.empty_like(psi)
    out[xs, ys] = psi
    if transcript is not None:
        transcript.record(direction)
    return PureState(state.shape, out.reshape(-1))


def make_constant(n: int, m: int, c: int) -> FunctionTable:
    if not 0 <= c < 2**m:
        raise InputError(f"constant {c} is outside Z_{2**m}")
    return FunctionTable(n, m, (c,) * 2**n)


def _check_power_of_two(name: str, v: int):
    if v < 1 or v & (v - 1):
        raise InputError(f"{name}={v} must be a power of two")


def make_evenly_distributed(
    n: int, m: int, D: int, a: int, seed: int, adversarial: bool = False
) -> tuple[FunctionTable, StructureParams]:
    """Random f whose image is {jL + a : j in Z_D} with every class of size N/D.

    With ``adversarial=True`` each class occupies a contiguous block of
    inputs, so a left-to-right classical prober sees N/D equal values before
    the first change.
    """
    N, M = 2**n, 2**m
    if D < 2:
        raise InputError(f"evenly distributed functions need D >= 2, got {D}")
    if M % D or N % D:
        raise InputError(f"D={D} must divide both N={N} and M={M}")
    L = M // D
    if not 0 <= a < L:
        raise InputError(f"shift a={a} must lie in [0, L={L})")
    rng = np.random.default_rng(seed)
    per_class = N // D
    classes = np.repeat(np.arange(D), per_class)
    if adversarial:
        order = rng.permutation(D)
        classes = np.repeat(order, per_class)
    else:
        classes = rng.permutation(classes)
    values = tuple(int(j * L + a) for j in classes)
    return FunctionTable(n, m, values), StructureParams(D, L, a, (per_class,) * D)


def make_r_to_one(n: int, m: int, seed: int) -> FunctionTable:
    """Random onto f: Z_N -> Z_M with every point hit exactly N/M times."""
    N, M = 2**n, 2**m
    if N % M:
        raise InputError(f"M={M} must divide N={N} for an onto r-to-one function")
    rng = np.random.default_rng(seed)
    values = rng.permutation(np.repeat(np.arange(M), N // M))
    return FunctionTable(n, m, tuple(int(v) for v in values))


def random_table(n: int, m: int, seed: int) -> FunctionTable:
    rng = np.random.default_rng(seed)
    return FunctionTable(n, m, tuple(int(v) for v in rng.integers(0, 2**m, size=2**n)))


def random_real_table(n: int, seed: int) -> RealFunctionTable:
    rng = np.random.default_rng(seed)
    return RealFunctionTable(n, tuple(float(v) for v in rng.random(2**n)))


def structure_of(f: FunctionTable) -> StructureParams:
    """Read (D, L, a, class sizes) straight off the table.

    Raises PromiseViolation unless f is evenly distributed with D >= 2.
    """
    vals, counts = np.unique(f.as_array(), return_counts=True)
    D = len(vals)
    if D < 2:
        raise PromiseViolation("table is constant, not evenly distributed")
    if len(set(counts.tolist())) != 1:
        raise PromiseViolation(f"preimage classes have unequal sizes {counts.tolist()}")
    if f.M % D:
        raise PromiseViolation(f"{D} distinct values cannot be evenly spaced in Z_{f.M}")
    L = f.M // D
    a = int(vals[0]) % L
    if sorted(vals.tolist()) != [j * L + a for j in range(D)]:
        raise PromiseViolation(f"image {vals.tolist()} is not an arithmetic progression of step {L}")
    return StructureParams(D, L, a, tuple(int(c) for c in counts))


def discretize(f: RealFunctionTable, m: int) -> FunctionTable:
    """m-bit floor approximation x -> floor(f(x)·2^m)."""
    if m < 1:
        raise InputError(f"m must be >= 1, got {m}")
    # scaling by a power of two is exact in binary floating point
    return FunctionTable(f.n, m, tuple(int(math.floor(v * 2**m)) for v in f.values))


def compose_g_of_f(g: RealFunctionTable, f: FunctionTable, m_out: int) -> FunctionTable:
    """Discretized table of x -> g(f(x)), for the transform R_{1, g∘f}."""
    if len(g.values) != f.M:
        raise InputError(f"g has {len(g.values)} entries but f takes values in Z_{f.M}")
    pulled = RealFunctionTable(f.n, tuple(g.values[v] for v in f.values))
    return discretize(pulled, m_out)


def classify_classically(f: FunctionTable, D_known: int | None = None) -> tuple[Label, int]:
    """Deterministic left-to-right prober for the constant / evenly-distributed promise.

    Returns the label and the number of evaluations spent. Stops at the first
    value differing from f(0), or declares Constant once N/D + 1 (D known) or
    N/2 + 1 (D unknown) equal values have been seen.
    """
    N, M = f.N, f.M
    if D_known is None:
        budget = N // 2 + 1
        # smallest period any admissible D (D | N, D | M, D >= 2) allows
        step = max(1, M // N)
    else:
        _check_power_of_two("D", D_known)
        if D_known < 2 or N % D_known or M % D_known:
            raise InputError(f"known D={D_known} must be >= 2 and divide N={N} and M={M}")
        budget = N // D_known + 1
        step = M // D_known
    first = f(0)
    for q in range(1, N):
        if q >= budget:
            return Label.CONSTANT, budget
        v = f(q)
        if v != first:
            if (v - first) % step:
                raise PromiseViolation(
                    f"f({q})={v} and f(0)={first} are not congruent mod {step}"
                )
            return Label.EVENLY_DISTRIBUTED, q + 1
    # only reached when N <= budget (N = 2, D unknown)
    return Label.CONSTANT, N
