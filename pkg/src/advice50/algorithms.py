"""The extended algorithms (K in superposition), their backdated variants
(K prepared in a basis state), and Simon/Grover classical post-processing."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from advice50 import qstate
from advice50.families import (
    BALANCED,
    CONSTANT,
    Kind,
    OracleFamily,
    SolutionCharacter,
    bits,
    character,
    enumerate_family,
)
from advice50.qstate import (
    MeasurementRecord,
    Register,
    StateVector,
    apply_grover_u,
    apply_hadamard_x,
    apply_oracle_xor,
    make_product,
    measure_register,
)


class InconsistentSystemError(ValueError):
    """The measured strings span all of GF(2)^n; no nonzero h is orthogonal."""


@dataclass
class RunResult:
    kind: Kind
    n: int
    final_state: StateVector | None
    transcript: list[MeasurementRecord] = field(default_factory=list)
    solution: SolutionCharacter | None = None
    oracle_queries: int = 0
    k_index: int | None = None
    k_suffix: str | None = None
    success: bool | None = None
    samples: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind.value,
            "n": self.n,
            "k": self.k_suffix,
            "transcript": [r.to_dict() for r in self.transcript],
            "solution": None if self.solution is None else str(self.solution),
            "oracle_queries": self.oracle_queries,
        }
        if self.success is not None:
            out["success"] = self.success
        if self.samples:
            out["samples"] = list(self.samples)
        return out


def canonical_v(family: OracleFamily) -> np.ndarray:
    """Initial V: antisymmetric for one-bit outputs, |0...0> for Simon."""
    if family.kind is Kind.SIMON:
        return qstate.basis(family.layout.v_count, 0)
    return qstate.antisymmetric()


def initial_state(family: OracleFamily, k_index: int | None = None) -> StateVector:
    """Step (0): K uniform (or |k> when backdated), X uniform, V canonical."""
    layout = family.layout
    k_amps = (
        qstate.uniform(layout.k_count)
        if k_index is None
        else qstate.basis(layout.k_count, k_index)
    )
    return make_product(layout, k_amps, qstate.uniform(layout.x_count), canonical_v(family))


def _stages(family: OracleFamily, k_index: int | None = None) -> list[StateVector]:
    psi0 = initial_state(family, k_index)
    psi1 = apply_oracle_xor(psi0, family)
    psi2 = apply_hadamard_x(psi1)
    return [psi0, psi1, psi2]


def deutsch_stages(k_index: int | None = None) -> list[StateVector]:
    """[psi0, psi1, psi2] of the extended Deutsch algorithm."""
    return _stages(enumerate_family(Kind.DEUTSCH, 1), k_index)


def deutsch_jozsa_stages(n: int, k_index: int | None = None) -> list[StateVector]:
    return _stages(enumerate_family(Kind.DJ, n), k_index)


def simon_stages(n: int, k_index: int | None = None) -> list[StateVector]:
    return _stages(enumerate_family(Kind.SIMON, n), k_index)


def grover_stages(
    n: int, iterations: int = 1, k_index: int | None = None
) -> list[StateVector]:
    """[psi0, after oracle 1, after U 1, after oracle 2, ...]."""
    family = enumerate_family(Kind.GROVER, n)
    states = [initial_state(family, k_index)]
    for _ in range(iterations):
        states.append(apply_oracle_xor(states[-1], family))
        states.append(apply_grover_u(states[-1]))
    return states


def _measure_k_then_x(state: StateVector, rng) -> tuple[list[MeasurementRecord], int, int]:
    k_rec, collapsed = measure_register(state, Register.K, rng)
    x_rec, _ = measure_register(collapsed, Register.X, rng)
    return [k_rec, x_rec], k_rec.outcome, x_rec.outcome


def _run_one_shot(kind: Kind, n: int, seed) -> RunResult:
    family = enumerate_family(kind, n)
    final = _stages(family)[-1]
    result = RunResult(kind, n, final, oracle_queries=1)
    if seed is not None:
        transcript, k, x = _measure_k_then_x(final, np.random.default_rng(seed))
        result.transcript = transcript
        result.k_index = k
        result.k_suffix = family.tables[k].suffix
        result.solution = CONSTANT if x == 0 else BALANCED
    return result


def run_deutsch(seed: int | None = None) -> RunResult:
    """Extended Deutsch algorithm. With a seed, K then X are measured and the
    X outcome is read as constant (0) or balanced (1)."""
    return _run_one_shot(Kind.DEUTSCH, 1, seed)


def run_deutsch_jozsa(n: int, seed: int | None = None) -> RunResult:
    return _run_one_shot(Kind.DJ, n, seed)


def run_simon_iteration(
    family: OracleFamily, k_index: int | None = None, rng_seed=None
) -> RunResult:
    """One pass of Simon's quantum part.

    With ``k_index=None`` the oracle's choice is drawn by measuring K on the
    extended state; otherwise K is left in its post-measurement state ``|k>``
    and only X is measured.
    """
    if family.kind is not Kind.SIMON:
        raise ValueError(f"expected a Simon family, got {family.kind.value}")
    rng = qstate._rng(rng_seed)
    final = _stages(family, k_index)[-1]
    transcript = []
    if k_index is None:
        k_rec, final_collapsed = measure_register(final, Register.K, rng)
        transcript.append(k_rec)
        k_index = k_rec.outcome
    else:
        final_collapsed = final
    x_rec, _ = measure_register(final_collapsed, Register.X, rng)
    transcript.append(x_rec)
    s = bits(x_rec.outcome, family.n)
    return RunResult(
        Kind.SIMON,
        family.n,
        final,
        transcript,
        SolutionCharacter("orthogonal_string", s),
        oracle_queries=1,
        k_index=k_index,
        k_suffix=family.tables[k_index].suffix,
        samples=[s],
    )


class GF2Solution(NamedTuple):
    rank: int
    h: str | None  # None while underdetermined


def _row_reduce(vectors: list[int], n: int) -> list[tuple[int, int]]:
    """Reduced echelon basis as (pivot bit, row) pairs."""
    basis: list[tuple[int, int]] = []
    for vec in vectors:
        for pivot, row in basis:
            if vec >> pivot & 1:
                vec ^= row
        if vec:
            pivot = vec.bit_length() - 1
            basis = [(p, r ^ vec if r >> pivot & 1 else r) for p, r in basis]
            basis.append((pivot, vec))
    return basis


def gf2_rank_and_solve(strings: list[str], n: int | None = None) -> GF2Solution:
    """Gaussian elimination over GF(2) for the h orthogonal to every string.

    Returns the rank of the span and, when the rank is n-1, the unique
    nonzero solution. Rank n means no nonzero h exists.
    """
    if n is None:
        if not strings:
            raise ValueError("n is required when no strings are given")
        n = len(strings[0])
    if any(len(s) != n for s in strings):
        raise ValueError(f"all strings must have {n} bits")
    basis = _row_reduce([int(s, 2) for s in strings], n)
    rank = len(basis)
    if rank == n:
        raise InconsistentSystemError(
            f"strings span GF(2)^{n}; input is not from a Simon oracle"
        )
    if rank < n - 1:
        return GF2Solution(rank, None)
    pivots = {p for p, _ in basis}
    (free,) = [b for b in range(n) if b not in pivots]
    h = 1 << free
    for pivot, row in basis:
        # row has bits {pivot} plus possibly the free bit
        if row >> free & 1:
            h |= 1 << pivot
    return GF2Solution(rank, bits(h, n))


def run_simon_full(
    n: int, max_iterations: int, rng_seed=None, k_index: int | None = None
) -> RunResult:
    """Iterate Simon's quantum part until n-1 independent strings are known.

    On budget exhaustion ``success`` is False and ``solution`` is None.
    """
    family = enumerate_family(Kind.SIMON, n)
    rng = qstate._rng(rng_seed)
    transcript: list[MeasurementRecord] = []
    samples: list[str] = []
    queries = 0
    solution = None
    final = None
    while queries < max_iterations:
        step = run_simon_iteration(family, k_index, rng)
        k_index = step.k_index
        final = step.final_state
        transcript.extend(step.transcript)
        samples.extend(step.samples)
        queries += step.oracle_queries
        solved = gf2_rank_and_solve(samples, n)
        if solved.h is not None:
            solution = SolutionCharacter("hidden_string", solved.h)
            break
    result = RunResult(
        Kind.SIMON,
        n,
        final,
        transcript,
        solution,
        oracle_queries=queries,
        k_index=k_index,
        k_suffix=None if k_index is None else family.tables[k_index].suffix,
        success=solution is not None,
        samples=samples,
    )
    if solution is not None and solution != character(family, k_index):
        raise RuntimeError("internal error: recovered h disagrees with the table")
    return result


def simon_success_rate(n: int, iterations: int, trials: int, seed: int) -> float:
    """Fraction of seeded trials that recover h within ``iterations``.

    Trial i draws from its own generator seeded with ``seed ^ i``.
    """
    wins = sum(
        run_simon_full(n, iterations, np.random.default_rng(seed ^ i)).success
        for i in range(trials)
    )
    return wins / trials


def grover_success_curve(n: int, max_iterations: int) -> list[float]:
    """P(X = k) after t = 0..max_iterations rounds, by the two-amplitude
    recurrence (marked amplitude a, each unmarked amplitude b)."""
    size = 1 << n
    a = b = 1.0 / np.sqrt(size)
    curve = [a * a]
    for _ in range(max_iterations):
        a = -a
        mean = (a + (size - 1) * b) / size
        a, b = 2 * mean - a, 2 * mean - b
        curve.append(a * a)
    return curve


@lru_cache(maxsize=None)
def grover_default_iterations(n: int) -> int:
    """First t in [0, 2 * 2^(n/2)] maximizing the worst-k success probability."""
    t_max = int(np.floor(2 * 2 ** (n / 2)))
    curve = grover_success_curve(n, t_max)
    best = max(curve)
    return next(t for t, p in enumerate(curve) if p >= best - 1e-12)


def run_grover(
    n: int, iterations: int | None = None, seed: int | None = None, k_index: int | None = None
) -> RunResult:
    family = enumerate_family(Kind.GROVER, n)
    if iterations is None:
        iterations = grover_default_iterations(n)
    if iterations < 0:
        raise ValueError("iterations must be >= 0")
    state = initial_state(family, k_index)
    for _ in range(iterations):
        state = apply_grover_u(apply_oracle_xor(state, family))
    result = RunResult(Kind.GROVER, n, state, oracle_queries=iterations, k_index=k_index)
    if k_index is not None:
        result.k_suffix = family.tables[k_index].suffix
    if seed is not None:
        rng = np.random.default_rng(seed)
        if k_index is None:
            transcript, k, x = _measure_k_then_x(state, rng)
        else:
            x_rec, _ = measure_register(state, Register.X, rng)
            transcript, k, x = [x_rec], k_index, x_rec.outcome
        result.transcript = transcript
        result.k_index = k
        result.k_suffix = family.tables[k].suffix
        result.solution = SolutionCharacter("location", bits(x, n))
    return result


def run_backdated(
    kind: Kind | str,
    n: int,
    k_index: int,
    seed: int | None = None,
    iterations: int | None = None,
) -> RunResult:
    """The original algorithm for one fixed oracle choice.

    K holds only the chosen table, so the state is |k> (x) X (x) V with a
    one-dimensional K register.
    """
    kind = Kind(kind)
    family = enumerate_family(kind, n)
    if not 0 <= k_index < len(family):
        raise IndexError(f"k index {k_index} out of range")
    single = OracleFamily(kind, n, family.m, (family.tables[k_index],))
    if kind is Kind.GROVER:
        if iterations is None:
            iterations = grover_default_iterations(n)
        if iterations < 0:
            raise ValueError("iterations must be >= 0")
        final = initial_state(single)
        for _ in range(iterations):
            final = apply_grover_u(apply_oracle_xor(final, single))
        queries = iterations
    elif kind is Kind.SIMON and seed is not None:
        result = run_simon_iteration(single, 0, seed)
        result.k_index, result.k_suffix = k_index, family.tables[k_index].suffix
        return result
    else:
        final = _stages(single)[-1]
        queries = 1
    result = RunResult(
        kind, n, final, oracle_queries=queries, k_index=k_index,
        k_suffix=family.tables[k_index].suffix,
    )
    if seed is not None:
        x_rec, _ = measure_register(final, Register.X, seed)
        result.transcript = [x_rec]
        if kind is Kind.GROVER:
            result.solution = SolutionCharacter("location", bits(x_rec.outcome, n))
        else:
            result.solution = CONSTANT if x_rec.outcome == 0 else BALANCED
    return result


def extended_final_state(kind: Kind | str, n: int, iterations: int | None = None) -> StateVector:
    kind = Kind(kind)
    if kind is Kind.GROVER:
        return run_grover(n, iterations).final_state
    return _stages(enumerate_family(kind, n))[-1]
