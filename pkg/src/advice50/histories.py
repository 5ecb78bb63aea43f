"""Computation histories of the classical algorithm that is given half of the
solution-specifying information in advance.

Each history is rendered as a phased product state before and after the one
oracle evaluation it performs. Summed over every history (and every k), they
reproduce the quantum function-evaluation stage.
"""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from advice50 import qstate
from advice50.algorithms import canonical_v, initial_state
from advice50.families import Kind, OracleFamily, character
from advice50.qstate import RawSum, StateVector, apply_oracle_xor, make_product


class Mode(str, enum.Enum):
    LITERAL = "literal"
    SHORTCUT = "shortcut"


@dataclass(frozen=True)
class AdviceSpec:
    """Half of the table rows as (x, f(x)) pairs, or for Grover half of the
    bits of k as (position, bit) pairs; positions index the suffix string."""

    form: str  # "rows" | "bits"
    entries: tuple[tuple[int, int], ...]

    @property
    def positions(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.entries)

    def consistent_with(self, family: OracleFamily, k_index: int) -> bool:
        table = family.tables[k_index]
        if self.form == "bits":
            return all(int(table.suffix[p]) == b for p, b in self.entries)
        return all(table.values[x] == v for x, v in self.entries)

    def to_dict(self) -> dict:
        return {"form": self.form, "entries": [list(e) for e in self.entries]}


def is_good(family: OracleFamily, advice: AdviceSpec) -> bool:
    """Good advice leaves the solution undetermined.

    DJ halves must repeat one value and Simon halves must not repeat any.
    From n = 3 on, some repeat-free Simon halves still force h (their xor
    offsets cover only one coset), so undeterminedness is checked directly.
    """
    if family.kind is Kind.DJ:
        if len({v for _, v in advice.entries}) != 1:
            return False
    elif family.kind is Kind.SIMON:
        values = [v for _, v in advice.entries]
        if len(set(values)) != len(values):
            return False
    else:
        return True
    chars = {character(family, k) for k in consistent_ks(family, advice)}
    return len(chars) >= 2


def enumerate_good_advice(family: OracleFamily, k_index: int) -> list[AdviceSpec]:
    table = family.tables[k_index]
    if family.kind is Kind.GROVER:
        n = family.n
        return [
            AdviceSpec("bits", tuple((p, int(table.suffix[p])) for p in positions))
            for positions in itertools.combinations(range(n), n // 2)
        ]
    size = family.x_count
    out = []
    for rows in itertools.combinations(range(size), size // 2):
        spec = AdviceSpec("rows", tuple((x, table.values[x]) for x in rows))
        if is_good(family, spec):
            out.append(spec)
    return out


def all_good_advice(family: OracleFamily) -> list[AdviceSpec]:
    """Every good advice spec over the whole family, deduplicated, sorted."""
    specs = {spec for k in range(len(family)) for spec in enumerate_good_advice(family, k)}
    return sorted(specs, key=lambda s: (s.positions, s.entries))


def consistent_ks(family: OracleFamily, advice: AdviceSpec | None) -> list[int]:
    if advice is None:
        return list(range(len(family)))
    return [k for k in range(len(family)) if advice.consistent_with(family, k)]


@dataclass(frozen=True, eq=False)
class History:
    k_index: int
    advice: AdviceSpec | None
    query_x: tuple[int, ...]
    v_initial: int | None  # None: V in its canonical superposition
    phase: int
    pre_state: StateVector
    post_state: StateVector

    def to_dict(self, family: OracleFamily) -> dict:
        return {
            "k": family.tables[self.k_index].suffix,
            "advice": None if self.advice is None else self.advice.to_dict(),
            "query": list(self.query_x),
            "v": self.v_initial,
            "phase": self.phase,
        }


def _history(family, k, advice, query_x, v_initial, phase, v_amps) -> History:
    layout = family.layout
    x_amps = np.zeros(layout.x_count, dtype=np.complex128)
    x_amps[list(query_x)] = 1.0
    pre = make_product(layout, phase * qstate.basis(layout.k_count, k), x_amps, v_amps)
    return History(k, advice, tuple(query_x), v_initial, phase, pre, apply_oracle_xor(pre, family))


def _literal_queries(family: OracleFamily, advice: AdviceSpec) -> tuple[int, ...]:
    outside = tuple(x for x in range(family.x_count) if x not in advice.positions)
    if family.kind is Kind.DEUTSCH:
        (missing,) = outside
        return (missing,)
    return outside


def build_histories(family: OracleFamily, k_index: int, mode: Mode | str) -> list[History]:
    """Histories for one oracle choice.

    ``literal``: one history per (good advice, v_initial); for one-bit
    outputs V starts in |0> with phase +1 or |1> with phase -1, for Simon in
    |0...0> with phase +1. ``shortcut``: the single bunch with X uniform and
    V in its canonical state.
    """
    mode = Mode(mode)
    layout = family.layout
    if mode is Mode.SHORTCUT:
        return [
            _history(
                family, k_index, None, tuple(range(layout.x_count)), None, 1,
                canonical_v(family),
            )
        ]
    if family.kind is Kind.GROVER:
        raise ValueError(
            "literal histories are not defined for Grover; the advised bits "
            "leave some x unqueried for every k (use shortcut mode)"
        )
    if family.kind is Kind.SIMON:
        v_choices = [(0, 1)]
    else:
        v_choices = [(0, 1), (1, -1)]
    out = []
    for advice in enumerate_good_advice(family, k_index):
        query = _literal_queries(family, advice)
        for v, phase in v_choices:
            out.append(
                _history(
                    family, k_index, advice, query, v, phase,
                    qstate.basis(layout.v_count, v),
                )
            )
    return out


def sum_histories(histories: list[History]) -> RawSum:
    """Componentwise sum of the post-evaluation states, unnormalized."""
    if not histories:
        raise ValueError("no histories to sum")
    layout = histories[0].post_state.layout
    total = np.zeros(layout.size, dtype=np.complex128)
    for h in histories:
        if h.post_state.layout != layout:
            raise ValueError("histories have mismatched layouts")
        total += h.post_state.amplitudes
    return RawSum(layout, total)


def dedupe(histories: list[History]) -> tuple[list[History], list[int]]:
    """Drop histories whose (pre, post) states repeat; return multiplicities."""
    seen: dict[tuple[bytes, bytes], int] = {}
    kept: list[History] = []
    counts: list[int] = []
    for h in histories:
        key = (h.pre_state.amplitudes.tobytes(), h.post_state.amplitudes.tobytes())
        if key in seen:
            counts[seen[key]] += 1
        else:
            seen[key] = len(kept)
            kept.append(h)
            counts.append(1)
    return kept, counts


@dataclass
class HistoryReport:
    kind: Kind
    n: int
    mode: Mode
    tolerance: float
    history_count: int
    max_residual: float
    passed: bool
    residuals: dict[str, float] = field(default_factory=dict)
    multiplicities: dict[str, int] = field(default_factory=dict)
    global_norm_residual: float = 0.0

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "n": self.n,
            "mode": self.mode.value,
            "tolerance": self.tolerance,
            "history_count": self.history_count,
            "max_residual": self.max_residual,
            "passed": self.passed,
            "global_norm_residual": self.global_norm_residual,
            "residuals": self.residuals,
            "multiplicities": self.multiplicities,
        }


def _bunch(family: OracleFamily, k: int, mode: Mode) -> tuple[np.ndarray, int, int]:
    histories = build_histories(family, k, mode)
    kept, counts = dedupe(histories)
    raw = sum_histories(kept).amplitudes
    return raw, len(histories), sum(c - 1 for c in counts)


def history_sum_state(family: OracleFamily, mode: Mode | str) -> tuple[StateVector, RawSum, dict]:
    """Sum of every history over all k.

    Each k-bunch is scaled to the weight K carries in the even superposition
    before the bunches are added; the plain unweighted sum is returned too.
    """
    mode = Mode(mode)
    layout = family.layout
    weighted = np.zeros(layout.size, dtype=np.complex128)
    plain = np.zeros(layout.size, dtype=np.complex128)
    stats = {"count": 0, "duplicates": {}}
    k_weight = 1.0 / np.sqrt(layout.k_count)
    for k in range(layout.k_count):
        raw, count, duplicates = _bunch(family, k, mode)
        stats["count"] += count
        if duplicates:
            stats["duplicates"][family.tables[k].suffix] = duplicates
        plain += raw
        weighted += raw * (k_weight / np.linalg.norm(raw))
    return StateVector(layout, weighted), RawSum(layout, plain), stats


def verify_history_equivalence(
    family: OracleFamily, mode: Mode | str, tol: float = 1e-12
) -> HistoryReport:
    """Compare the history sum with the oracle stage applied to psi0."""
    mode = Mode(mode)
    expected = apply_oracle_xor(initial_state(family), family)
    summed, plain, stats = history_sum_state(family, mode)
    diff = np.abs(summed.tensor - expected.tensor).max(axis=(1, 2))
    residuals = {family.tables[k].suffix: float(d) for k, d in enumerate(diff)}
    max_res = float(diff.max())
    global_res = qstate.max_deviation(plain.normalized(), expected)
    return HistoryReport(
        family.kind,
        family.n,
        mode,
        tol,
        stats["count"],
        max_res,
        max_res <= tol,
        residuals,
        stats["duplicates"],
        global_res,
    )


def histories_jsonl(family: OracleFamily, mode: Mode | str) -> str:
    lines = []
    for k in range(len(family)):
        for h in build_histories(family, k, mode):
            lines.append(json.dumps(h.to_dict(family)))
    return "\n".join(lines) + "\n"


@dataclass
class PhaseTransferReport:
    kind: Kind
    n: int
    alpha: complex
    beta: complex
    symmetric_residual: float | None = None
    antisymmetric_residual: float | None = None
    combined_residual: float | None = None
    v_swap_residual: float | None = None

    def to_dict(self) -> dict:
        def c(z):
            return None if z is None else [z.real, z.imag]

        return {
            "kind": self.kind.value,
            "n": self.n,
            "alpha": c(complex(self.alpha)),
            "beta": c(complex(self.beta)),
            "symmetric_residual": self.symmetric_residual,
            "antisymmetric_residual": self.antisymmetric_residual,
            "combined_residual": self.combined_residual,
            "v_swap_residual": self.v_swap_residual,
        }


def _kickback(state: StateVector, family: OracleFamily) -> StateVector:
    signs = 1 - 2 * family.values
    return StateVector(state.layout, (state.tensor * signs[:, :, None]).reshape(-1))


def phase_transfer_analysis(family: OracleFamily, alpha: complex, beta: complex) -> PhaseTransferReport:
    """How the initial V phase decides what the oracle stage transfers.

    One-bit outputs: V = alpha (|0>+|1>)/sqrt2 + beta (|0>-|1>)/sqrt2. The
    symmetric part is left unchanged by the oracle; the antisymmetric part
    picks up (-1)^f(k,x). Simon: V = alpha|0> + beta|v> with v = 1; the
    |1>-branch equals the |0>-branch with V labels xored by 1.
    """
    if alpha == 0 and beta == 0:
        raise ValueError("alpha and beta cannot both be zero")
    layout = family.layout
    k_amps = qstate.uniform(layout.k_count)
    x_amps = qstate.uniform(layout.x_count)
    report = PhaseTransferReport(family.kind, family.n, alpha, beta)

    if family.kind is Kind.SIMON:
        branch0 = make_product(layout, k_amps, x_amps, qstate.basis(layout.v_count, 0))
        branch1 = make_product(layout, k_amps, x_amps, qstate.basis(layout.v_count, 1))
        out0 = apply_oracle_xor(branch0, family).tensor
        out1 = apply_oracle_xor(branch1, family).tensor
        swapped = out0[:, :, np.arange(layout.v_count) ^ 1]
        report.v_swap_residual = float(np.abs(out1 - swapped).max())
        mixed = make_product(layout, k_amps, x_amps, alpha * qstate.basis(layout.v_count, 0)
                             + beta * qstate.basis(layout.v_count, 1))
        norm = np.sqrt(abs(alpha) ** 2 + abs(beta) ** 2)
        lin = (alpha * out0 + beta * out1) / norm
        report.combined_residual = float(
            np.abs(apply_oracle_xor(mixed, family).tensor - lin).max()
        )
        return report

    if layout.v_count != 2:
        raise ValueError("phase transfer analysis needs a one-bit output register")
    sym = make_product(layout, k_amps, x_amps, np.array([1, 1]) / np.sqrt(2))
    anti = make_product(layout, k_amps, x_amps, qstate.antisymmetric())
    sym_out = apply_oracle_xor(sym, family)
    anti_out = apply_oracle_xor(anti, family)
    report.symmetric_residual = qstate.max_deviation(sym_out, sym)
    report.antisymmetric_residual = qstate.max_deviation(anti_out, _kickback(anti, family))
    full = make_product(
        layout, k_amps, x_amps,
        alpha * np.array([1, 1]) / np.sqrt(2) + beta * qstate.antisymmetric(),
    )
    norm = np.sqrt(abs(alpha) ** 2 + abs(beta) ** 2)
    lin = (alpha * sym.amplitudes + beta * anti_out.amplitudes) / norm
    report.combined_residual = float(
        np.abs(apply_oracle_xor(full, family).amplitudes - lin).max()
    )
    return report
