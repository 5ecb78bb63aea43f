"""Classical query complexity with and without advanced information.

Worst-case complexity of the best adaptive deterministic strategy, found by
exhaustive game-tree search over candidate sets of oracle choices. A
candidate set is terminal once a single answer fits every candidate, so the
last candidate can be inferred without a query.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from advice50 import algorithms
from advice50.families import Kind, OracleFamily, bits, character, enumerate_family, orthogonal_strings
from advice50.histories import AdviceSpec, all_good_advice, consistent_ks

SEARCH_CAP = 1 << 16
MEMO_CAP = 1 << 22


class Target(str, enum.Enum):
    CHARACTER = "character"
    HIDDEN_STRING = "hidden_string"
    ORTHOGONAL_STRING = "orthogonal_string"
    LOCATION = "location"


DEFAULT_TARGET = {
    Kind.DEUTSCH: Target.CHARACTER,
    Kind.DJ: Target.CHARACTER,
    Kind.SIMON: Target.HIDDEN_STRING,
    Kind.GROVER: Target.LOCATION,
}


def answers(family: OracleFamily, target: Target, k_index: int) -> frozenset[str]:
    """Answers acceptable for oracle choice k."""
    target = Target(target)
    char = character(family, k_index)
    if target is Target.ORTHOGONAL_STRING:
        if family.kind is not Kind.SIMON:
            raise ValueError("orthogonal-string target needs a Simon family")
        zero = bits(0, family.n)
        return frozenset(s for s in orthogonal_strings(char.value) if s != zero)
    expected = {
        Target.CHARACTER: "character",
        Target.HIDDEN_STRING: "hidden_string",
        Target.LOCATION: "location",
    }[target]
    if char.kind != expected:
        raise ValueError(f"target {target.value} does not apply to {family.kind.value}")
    return frozenset([char.value])


@dataclass(frozen=True)
class Leaf:
    candidates: frozenset[int]
    answer: str


@dataclass(frozen=True)
class Node:
    query: int
    children: dict  # outcome -> Leaf | Node


class _Game:
    """Memoized search over candidate sets held as bitmasks of k indices."""

    def __init__(self, family: OracleFamily, target: Target):
        self.family = family
        k_count = len(family)
        # value_masks[x][v]: candidates with f_k(x) = v
        self.value_masks: list[dict[int, int]] = []
        for x in range(family.x_count):
            parts: dict[int, int] = {}
            for k in range(k_count):
                v = family.tables[k].values[x]
                parts[v] = parts.get(v, 0) | (1 << k)
            self.value_masks.append(parts)
        accept: dict[str, int] = {}
        for k in range(k_count):
            for a in answers(family, target, k):
                accept[a] = accept.get(a, 0) | (1 << k)
        self.answer_masks = sorted(accept.items())
        self.memo: dict[int, tuple[int, int | None]] = {}

    def common_answer(self, mask: int) -> str | None:
        for answer, accepted in self.answer_masks:
            if mask & ~accepted == 0:
                return answer
        return None

    def split(self, mask: int, x: int) -> dict[int, int]:
        parts = {}
        for v, vm in self.value_masks[x].items():
            sub = mask & vm
            if sub:
                parts[v] = sub
        return parts

    def value(self, mask: int) -> int:
        return self.solve(mask)[0]

    def solve(self, mask: int) -> tuple[int, int | None]:
        hit = self.memo.get(mask)
        if hit is not None:
            return hit
        if self.common_answer(mask) is not None:
            result = (0, None)
        else:
            best, best_x = None, None
            for x in range(self.family.x_count):
                parts = [mask & vm for vm in self.value_masks[x].values()]
                parts = [p for p in parts if p]
                if len(parts) < 2:
                    continue
                worst = 0
                for sub in parts:
                    worst = max(worst, self.solve(sub)[0])
                    if best is not None and worst + 1 >= best:
                        break
                if best is None or worst + 1 < best:
                    best, best_x = worst + 1, x
                    if best == 1:
                        break
            if best is None:
                raise RuntimeError("internal error: undecidable candidate set")
            result = (best, best_x)
        if len(self.memo) > MEMO_CAP:
            raise MemoryError("minimax memo table exceeded its cap")
        self.memo[mask] = result
        return result

    def tree(self, mask: int):
        _, x = self.solve(mask)
        if x is None:
            return Leaf(frozenset(_members(mask)), self.common_answer(mask))
        return Node(x, {v: self.tree(sub) for v, sub in sorted(self.split(mask, x).items())})


def _members(mask: int) -> Iterable[int]:
    k = 0
    while mask:
        if mask & 1:
            yield k
        mask >>= 1
        k += 1


def _mask(ks: Iterable[int]) -> int:
    out = 0
    for k in ks:
        out |= 1 << k
    return out


def _advice_list(advice) -> list[AdviceSpec | None]:
    if advice is None or isinstance(advice, AdviceSpec):
        return [advice]
    return list(advice)


def minimax_queries(
    family: OracleFamily,
    target: Target | str | None = None,
    advice: AdviceSpec | Sequence[AdviceSpec] | None = None,
) -> int:
    """Optimal worst-case number of oracle queries to pin the target.

    ``advice`` may be a single spec or a collection of specs (an advice
    class); for a collection the worst spec counts.
    """
    target = DEFAULT_TARGET[family.kind] if target is None else Target(target)
    if len(family) > SEARCH_CAP:
        raise ValueError(f"family of {len(family)} tables exceeds the search cap")
    game = _Game(family, target)
    worst = 0
    for spec in _advice_list(advice):
        ks = consistent_ks(family, spec)
        if not ks:
            raise ValueError(f"no oracle choice is consistent with {spec}")
        worst = max(worst, game.value(_mask(ks)))
    return worst


def optimal_strategy(
    family: OracleFamily,
    target: Target | str | None = None,
    advice: AdviceSpec | None = None,
):
    """Decision tree (Node/Leaf) of an optimal strategy."""
    target = DEFAULT_TARGET[family.kind] if target is None else Target(target)
    game = _Game(family, target)
    return game.tree(_mask(consistent_ks(family, advice)))


def grover_queries_formula(candidates: int) -> int:
    """Worst case for a delta-function search among c candidates: c - 1."""
    return candidates - 1


@dataclass
class QueryReport:
    kind: Kind
    n: int
    target: Target
    worst_case_no_advice: int
    worst_case_with_advice: int
    quantum_queries: int
    rule_holds: bool
    no_advice_method: str = "game-tree"
    growth: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind.value,
            "n": self.n,
            "target": self.target.value,
            "no_advice": self.worst_case_no_advice,
            "with_advice": self.worst_case_with_advice,
            "quantum": self.quantum_queries,
            "holds": self.rule_holds,
            "no_advice_method": self.no_advice_method,
        }
        if self.growth:
            out["growth"] = self.growth
        return out


GROVER_GROWTH_NS = (2, 4, 6)
GROVER_FACTOR = 4.0
GROVER_SEARCH_MAX_N = 4


def _quantum_queries(kind: Kind, n: int) -> int:
    if kind is Kind.DEUTSCH:
        return algorithms.run_deutsch().oracle_queries
    if kind is Kind.DJ:
        return algorithms.run_deutsch_jozsa(n).oracle_queries
    if kind is Kind.SIMON:
        family = enumerate_family(Kind.SIMON, n)
        return algorithms.run_simon_iteration(family, 0, 0).oracle_queries
    return algorithms.run_grover(n).oracle_queries


def _grover_counts(n: int) -> tuple[int, int, str]:
    family = enumerate_family(Kind.GROVER, n)
    with_advice = minimax_queries(family, Target.LOCATION, all_good_advice(family))
    if n <= GROVER_SEARCH_MAX_N:
        return minimax_queries(family, Target.LOCATION), with_advice, "game-tree"
    return grover_queries_formula(len(family)), with_advice, "formula"


def grover_growth(ns: Sequence[int] = GROVER_GROWTH_NS) -> list[dict]:
    rows = []
    for n in ns:
        _, with_advice, _ = _grover_counts(n)
        quantum = algorithms.grover_default_iterations(n)
        scale = 2 ** (n / 2)
        rows.append(
            {
                "n": n,
                "scale": scale,
                "quantum": quantum,
                "with_advice": with_advice,
                "within_factor": all(
                    scale / GROVER_FACTOR <= c <= scale * GROVER_FACTOR
                    for c in (quantum, with_advice)
                ),
            }
        )
    return rows


def verify_50_rule(kind: Kind | str, n: int) -> QueryReport:
    kind = Kind(kind)
    family = enumerate_family(kind, n)
    quantum = _quantum_queries(kind, n)
    if kind is Kind.GROVER:
        no_advice, with_advice, method = _grover_counts(n)
        ns = sorted(set(GROVER_GROWTH_NS) | {n})
        growth = grover_growth(ns)
        holds = all(row["within_factor"] for row in growth) and (
            n != 2 or with_advice == quantum
        )
        return QueryReport(
            kind, n, Target.LOCATION, no_advice, with_advice, quantum, holds, method, growth
        )
    target = Target.ORTHOGONAL_STRING if kind is Kind.SIMON else Target.CHARACTER
    no_advice = minimax_queries(family, target)
    with_advice = minimax_queries(family, target, all_good_advice(family))
    return QueryReport(
        kind, n, target, no_advice, with_advice, quantum, with_advice == quantum
    )


@dataclass
class SpeedupTable:
    rows: list[dict]

    COLUMNS = ("kind", "n", "no_advice", "with_advice", "quantum", "holds", "speedup")

    def to_dict(self) -> dict:
        return {"rows": self.rows}

    def to_text(self) -> str:
        cells = [list(self.COLUMNS)] + [
            [str(row[c]).lower() if isinstance(row[c], bool) else str(row[c]) for c in self.COLUMNS]
            for row in self.rows
        ]
        widths = [max(len(r[i]) for r in cells) for i in range(len(self.COLUMNS))]
        lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
        return "\n".join(lines) + "\n"


_GROWTH_CLASS = {
    Kind.DEUTSCH: "2 -> 1",
    Kind.DJ: "exponential",
    Kind.SIMON: "exponential",
    Kind.GROVER: "quadratic",
}


def speedup_summary(reports: Sequence[QueryReport]) -> SpeedupTable:
    if not reports:
        raise ValueError("no reports to summarize")
    rows = [
        {
            "kind": r.kind.value,
            "n": r.n,
            "no_advice": r.worst_case_no_advice,
            "with_advice": r.worst_case_with_advice,
            "quantum": r.quantum_queries,
            "holds": r.rule_holds,
            "speedup": _GROWTH_CLASS[r.kind],
        }
        for r in reports
    ]
    return SpeedupTable(rows)
