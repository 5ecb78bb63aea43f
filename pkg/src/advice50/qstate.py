"""Dense statevector engine over the joint K (oracle's choice), X (query) and
V (output) registers.

Amplitudes are stored flat in row-major (k, x, v) order, k-major and
v-minor. Every operation returns a fresh state; inputs are never mutated.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

if TYPE_CHECKING:
    from advice50.families import OracleFamily

NORM_TOL = 1e-12
MAX_JOINT_DIM = 1 << 24

_SQRT_HALF = 1.0 / np.sqrt(2.0)


class Register(str, enum.Enum):
    K = "K"
    X = "X"
    V = "V"


def _is_pow2(value: int) -> bool:
    return value >= 1 and value & (value - 1) == 0


@dataclass(frozen=True)
class RegisterLayout:
    k_count: int
    x_count: int
    v_count: int

    def __post_init__(self):
        if self.k_count < 1:
            raise ValueError(f"k_count must be >= 1, got {self.k_count}")
        if not _is_pow2(self.x_count):
            raise ValueError(f"x_count must be a power of two, got {self.x_count}")
        if not _is_pow2(self.v_count):
            raise ValueError(f"v_count must be a power of two, got {self.v_count}")
        if self.size > MAX_JOINT_DIM:
            raise ValueError(
                f"joint dimension {self.size} exceeds cap {MAX_JOINT_DIM}"
            )

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.k_count, self.x_count, self.v_count)

    @property
    def size(self) -> int:
        return self.k_count * self.x_count * self.v_count

    @property
    def n(self) -> int:
        """Number of qubits in X."""
        return self.x_count.bit_length() - 1

    def index(self, k: int, x: int, v: int) -> int:
        return (k * self.x_count + x) * self.v_count + v

    def dim(self, register: Register | str) -> int:
        return self.shape["KXV".index(Register(register).value)]


class _Amplitudes:
    layout: RegisterLayout
    amplitudes: np.ndarray

    @property
    def tensor(self) -> np.ndarray:
        """Read-only (k, x, v) view of the amplitudes."""
        view = self.amplitudes.reshape(self.layout.shape)
        view.flags.writeable = False
        return view

    def amplitude(self, k: int, x: int, v: int) -> complex:
        return complex(self.amplitudes[self.layout.index(k, x, v)])

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def _freeze(layout: RegisterLayout, amplitudes) -> np.ndarray:
    amps = np.array(amplitudes, dtype=np.complex128).reshape(-1)
    if amps.size != layout.size:
        raise ValueError(
            f"expected {layout.size} amplitudes for layout {layout.shape}, got {amps.size}"
        )
    amps.flags.writeable = False
    return amps


@dataclass(frozen=True, eq=False)
class StateVector(_Amplitudes):
    layout: RegisterLayout
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _freeze(self.layout, self.amplitudes)
        object.__setattr__(self, "amplitudes", amps)
        # pairwise summation; rounding still grows with the dimension
        norm_sq = float(np.sum(amps.real**2 + amps.imag**2))
        if abs(norm_sq - 1.0) > NORM_TOL + amps.size * np.finfo(float).eps:
            raise ValueError(f"state is not normalized: |psi|^2 = {norm_sq!r}")

    def __neg__(self) -> StateVector:
        return StateVector(self.layout, -self.amplitudes)

    def to_json(self) -> str:
        return state_to_json(self)


@dataclass(frozen=True, eq=False)
class RawSum(_Amplitudes):
    """Unnormalized superposition, as produced by summing history states."""

    layout: RegisterLayout
    amplitudes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", _freeze(self.layout, self.amplitudes))

    def normalized(self) -> StateVector:
        norm = self.norm
        if norm == 0.0:
            raise ValueError("cannot normalize a zero vector")
        return StateVector(self.layout, self.amplitudes / norm)


@dataclass(frozen=True)
class MeasurementRecord:
    register: Register
    outcome: int
    probability: float

    def to_dict(self) -> dict:
        return {
            "register": self.register.value,
            "outcome": self.outcome,
            "probability": self.probability,
        }


def _vector(amps, size: int, name: str) -> np.ndarray:
    vec = np.asarray(amps, dtype=np.complex128).reshape(-1)
    if vec.size != size:
        raise ValueError(f"{name} has length {vec.size}, register dimension is {size}")
    if not np.any(vec):
        raise ValueError(f"{name} is all zero")
    return vec


def make_product(layout: RegisterLayout, k_amps, x_amps, v_amps) -> StateVector:
    """Normalized product state ``k_amps (x) x_amps (x) v_amps``."""
    k = _vector(k_amps, layout.k_count, "k_amps")
    x = _vector(x_amps, layout.x_count, "x_amps")
    v = _vector(v_amps, layout.v_count, "v_amps")
    amps = np.einsum("i,j,l->ijl", k, x, v).reshape(-1)
    return StateVector(layout, amps / np.linalg.norm(amps))


def uniform(count: int) -> np.ndarray:
    return np.full(count, 1.0 / np.sqrt(count), dtype=np.complex128)


def basis(count: int, index: int) -> np.ndarray:
    vec = np.zeros(count, dtype=np.complex128)
    vec[index] = 1.0
    return vec


def antisymmetric() -> np.ndarray:
    """(|0> - |1>)/sqrt(2) on a one-qubit register."""
    return np.array([_SQRT_HALF, -_SQRT_HALF], dtype=np.complex128)


def xor_table(state: _Amplitudes, values: np.ndarray) -> np.ndarray:
    """Permute amplitudes (k, x, v) -> (k, x, v ^ values[k, x])."""
    k_count, x_count, v_count = state.layout.shape
    values = np.asarray(values, dtype=np.int64)
    if values.shape != (k_count, x_count):
        raise ValueError(
            f"value table shape {values.shape} does not match layout {(k_count, x_count)}"
        )
    if values.min(initial=0) < 0 or values.max(initial=0) >= v_count:
        raise ValueError("table values do not fit in the V register")
    tensor = state.amplitudes.reshape(state.layout.shape)
    target = np.arange(v_count)[None, None, :] ^ values[:, :, None]
    out = np.empty_like(tensor)
    np.put_along_axis(out, target, tensor, axis=2)
    return out.reshape(-1)


def apply_oracle_xor(state: StateVector, family: OracleFamily) -> StateVector:
    """Black-box evaluation |k>|x>|v> -> |k>|x>|v xor f_k(x)>."""
    if family.layout != state.layout:
        raise ValueError(
            f"state layout {state.layout.shape} does not match family layout "
            f"{family.layout.shape}"
        )
    return StateVector(state.layout, xor_table(state, family.values))


def _walsh_hadamard(tensor: np.ndarray, n: int) -> np.ndarray:
    # in-place butterflies over the X axis, one qubit per pass
    k_count, x_count, v_count = tensor.shape
    out = tensor.copy()
    for bit in range(n):
        stride = 1 << bit
        view = out.reshape(k_count, x_count // (2 * stride), 2, stride, v_count)
        lo = view[:, :, 0].copy()
        hi = view[:, :, 1]
        view[:, :, 0] = (lo + hi) * _SQRT_HALF
        view[:, :, 1] = (lo - hi) * _SQRT_HALF
    return out


def apply_hadamard_x(state: StateVector) -> StateVector:
    """n-fold Hadamard on the X register only."""
    tensor = state.amplitudes.reshape(state.layout.shape)
    out = _walsh_hadamard(tensor, state.layout.n)
    return StateVector(state.layout, out.reshape(-1))


def apply_grover_u(state: StateVector) -> StateVector:
    """Grover's transformation U on X: inversion about the mean.

    Built as H, a sign flip on |0...0>_X obtained by XOR-ing delta(0, x) into
    the antisymmetric V register, then H again. That composition equals
    ``-(2|u><u| - I)``; the overall -1 is removed so that U sends the marked
    state ``-|0..0> + sum_{x != 0} |x>`` to ``+|0..0>``.
    """
    layout = state.layout
    if layout.v_count != 2:
        raise ValueError("U requires a one-qubit V register")
    zero_test = np.zeros((layout.k_count, layout.x_count), dtype=np.int64)
    zero_test[:, 0] = 1
    out = apply_hadamard_x(state)
    out = StateVector(layout, xor_table(out, zero_test))
    out = apply_hadamard_x(out)
    return -out


def marginal_distribution(state: _Amplitudes, register: Register | str) -> np.ndarray:
    register = Register(register)
    probs = np.abs(state.amplitudes.reshape(state.layout.shape)) ** 2
    axes = {Register.K: (1, 2), Register.X: (0, 2), Register.V: (0, 1)}[register]
    return probs.sum(axis=axes)


def conditional_distribution(
    state: StateVector, given: Register | str, outcome: int, register: Register | str
) -> np.ndarray:
    """Distribution of ``register`` after projecting ``given`` onto ``outcome``."""
    probs = marginal_distribution(_project(state, Register(given), outcome), register)
    total = probs.sum()
    if total <= 0.0:
        raise ValueError(f"outcome {outcome} of {Register(given).value} has zero probability")
    return probs / total


def _project(state: StateVector, register: Register, outcome: int) -> RawSum:
    tensor = state.amplitudes.reshape(state.layout.shape)
    mask = np.zeros(state.layout.dim(register), dtype=bool)
    mask[outcome] = True
    shape = [1, 1, 1]
    axis = "KXV".index(register.value)
    shape[axis] = -1
    projected = np.where(mask.reshape(shape), tensor, 0.0)
    return RawSum(state.layout, projected.reshape(-1))


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def measure_register(
    state: StateVector, register: Register | str, rng_seed=None
) -> tuple[MeasurementRecord, StateVector]:
    """Projective measurement of one register in the computational basis.

    ``rng_seed`` is an integer seed or a ``numpy.random.Generator``; pass a
    generator to draw several measurements from one stream.
    """
    register = Register(register)
    probs = marginal_distribution(state, register)
    probs = np.clip(probs, 0.0, None)
    total = probs.sum()
    outcome = int(_rng(rng_seed).choice(probs.size, p=probs / total))
    projected = _project(state, register, outcome)
    if projected.norm == 0.0:
        raise RuntimeError(
            f"internal error: zero-norm projection on {register.value}={outcome}"
        )
    record = MeasurementRecord(register, outcome, float(probs[outcome]))
    return record, projected.normalized()


def states_close(a: _Amplitudes, b: _Amplitudes, tol: float = NORM_TOL) -> bool:
    """Componentwise comparison; global phase is significant."""
    return max_deviation(a, b) <= tol


def max_deviation(a: _Amplitudes, b: _Amplitudes) -> float:
    if a.layout != b.layout:
        raise ValueError(f"layout mismatch: {a.layout.shape} vs {b.layout.shape}")
    return float(np.max(np.abs(a.amplitudes - b.amplitudes)))


def total_variation(p: Sequence[float], q: Sequence[float]) -> float:
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())


def state_to_dict(state: _Amplitudes, digits: int = 15) -> dict:
    def r(value: float) -> float:
        return float(f"{value:.{digits}g}") + 0.0

    return {
        "layout": {
            "k_count": state.layout.k_count,
            "x_count": state.layout.x_count,
            "v_count": state.layout.v_count,
        },
        "amplitudes": [[r(a.real), r(a.imag)] for a in state.amplitudes],
    }


def state_to_json(state: _Amplitudes) -> str:
    return json.dumps(state_to_dict(state))


def state_from_dict(payload: dict) -> StateVector:
    layout = RegisterLayout(**payload["layout"])
    amps = np.array([complex(re, im) for re, im in payload["amplitudes"]])
    return StateVector(layout, amps)


def state_from_json(text: str) -> StateVector:
    return state_from_dict(json.loads(text))
