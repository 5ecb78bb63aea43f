"""The four oracle function families, enumerated table by table.

Each function is named by its suffix: the bit string listing f_k(x) for
increasing x, one m-bit field per argument (for Grover the suffix is the
location k itself). Tables are ordered by suffix read as an unsigned integer.
"""

from __future__ import annotations

import enum
import itertools
import json
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from advice50.qstate import RegisterLayout

FAMILY_SIZE_CAP = 1 << 18


class CapExceededError(ValueError):
    pass


class Kind(str, enum.Enum):
    DEUTSCH = "deutsch"
    DJ = "dj"
    SIMON = "simon"
    GROVER = "grover"


def bits(value: int, width: int) -> str:
    return format(value, f"0{width}b") if width else ""


def dot(a: int, b: int) -> int:
    """GF(2) inner product of two bit strings held as integers."""
    return (a & b).bit_count() & 1


@dataclass(frozen=True)
class FunctionTable:
    index: int
    suffix: str
    values: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.values[x]


@dataclass(frozen=True)
class SolutionCharacter:
    """What the player must find: ``constant``/``balanced``, a hidden string
    ``h`` or a location."""

    kind: str  # "character" | "hidden_string" | "location"
    value: str

    def __str__(self) -> str:
        return self.value


CONSTANT = SolutionCharacter("character", "constant")
BALANCED = SolutionCharacter("character", "balanced")


@dataclass(frozen=True, eq=False)
class OracleFamily:
    kind: Kind
    n: int
    m: int
    tables: tuple[FunctionTable, ...]

    def __len__(self) -> int:
        return len(self.tables)

    @property
    def x_count(self) -> int:
        return 1 << self.n

    @cached_property
    def layout(self) -> RegisterLayout:
        return RegisterLayout(len(self.tables), self.x_count, 1 << self.m)

    @cached_property
    def values(self) -> np.ndarray:
        """(k_count, x_count) integer array of function values."""
        arr = np.array([t.values for t in self.tables], dtype=np.int64)
        arr.flags.writeable = False
        return arr

    @cached_property
    def suffixes(self) -> list[str]:
        return [t.suffix for t in self.tables]

    def index_of(self, suffix: str) -> int:
        try:
            return self._suffix_index[suffix]
        except KeyError:
            raise KeyError(f"{suffix!r} is not a {self.kind.value} n={self.n} table") from None

    @cached_property
    def _suffix_index(self) -> dict[str, int]:
        return {t.suffix: t.index for t in self.tables}

    def to_json(self) -> str:
        return json.dumps({"kind": self.kind.value, "n": self.n, "tables": self.suffixes})


def encode_suffix(kind: Kind, n: int, values) -> str:
    """Table of values -> suffix string."""
    values = list(values)
    if kind is Kind.GROVER:
        ones = [x for x, v in enumerate(values) if v]
        if len(ones) != 1:
            raise ValueError("a Grover table has exactly one marked location")
        return bits(ones[0], n)
    width = output_bits(kind, n)
    return "".join(bits(v, width) for v in values)


def decode_suffix(kind: Kind, n: int, suffix: str) -> tuple[int, ...]:
    """Suffix string -> table of values for increasing x."""
    if kind is Kind.GROVER:
        if len(suffix) != n:
            raise ValueError(f"Grover suffix must have {n} bits, got {suffix!r}")
        loc = int(suffix, 2)
        return tuple(int(x == loc) for x in range(1 << n))
    width = output_bits(kind, n)
    if len(suffix) != width << n:
        raise ValueError(f"suffix {suffix!r} has wrong length for {kind.value} n={n}")
    return tuple(int(suffix[i : i + width], 2) for i in range(0, len(suffix), width))


def output_bits(kind: Kind, n: int) -> int:
    return n - 1 if kind is Kind.SIMON else 1


def family_size(kind: Kind, n: int) -> int:
    if kind is Kind.DEUTSCH:
        return 4
    if kind is Kind.DJ:
        return 2 + math.comb(1 << n, 1 << (n - 1))
    if kind is Kind.SIMON:
        return ((1 << n) - 1) * math.factorial(1 << (n - 1))
    return 1 << n


def _check_n(kind: Kind, n: int) -> None:
    if kind is Kind.DEUTSCH and n != 1:
        raise ValueError("Deutsch's problem has n = 1")
    if kind is Kind.SIMON and n < 2:
        raise ValueError("Simon's problem needs n >= 2")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")


def _dj_tables(n: int):
    size = 1 << n
    yield (0,) * size
    yield (1,) * size
    for ones in itertools.combinations(range(size), size // 2):
        row = [0] * size
        for x in ones:
            row[x] = 1
        yield tuple(row)


def _simon_tables(n: int):
    size = 1 << n
    outputs = range(size // 2)
    for h in range(1, size):
        # coset representatives in ascending order: x < x ^ h
        reps = [x for x in range(size) if x < x ^ h]
        for perm in itertools.permutations(outputs):
            row = [0] * size
            for x, value in zip(reps, perm):
                row[x] = row[x ^ h] = value
            yield tuple(row)


def _grover_tables(n: int):
    size = 1 << n
    for loc in range(size):
        yield tuple(int(x == loc) for x in range(size))


def enumerate_family(kind: Kind | str, n: int) -> OracleFamily:
    kind = Kind(kind)
    _check_n(kind, n)
    size = family_size(kind, n)
    if size > FAMILY_SIZE_CAP:
        raise CapExceededError(
            f"{kind.value} n={n} has {size} tables, cap is {FAMILY_SIZE_CAP}"
        )
    m = output_bits(kind, n)
    if kind is Kind.DEUTSCH:
        rows = [(a, b) for a in (0, 1) for b in (0, 1)]
    elif kind is Kind.DJ:
        rows = list(_dj_tables(n))
    elif kind is Kind.SIMON:
        rows = list(_simon_tables(n))
    else:
        rows = list(_grover_tables(n))
    keyed = sorted((encode_suffix(kind, n, row), row) for row in rows)
    tables = tuple(
        FunctionTable(i, suffix, row) for i, (suffix, row) in enumerate(keyed)
    )
    family = OracleFamily(kind, n, m, tables)
    family.layout  # validates the joint dimension cap
    return family


def evaluate(family: OracleFamily, k_index: int, x: int) -> int:
    if not 0 <= k_index < len(family):
        raise IndexError(f"k index {k_index} out of range for {len(family)} tables")
    if not 0 <= x < family.x_count:
        raise IndexError(f"x = {x} out of range for n = {family.n}")
    return family.tables[k_index].values[x]


def hidden_string(values) -> int:
    """The nonzero offset h with f(x) = f(x ^ h) for all x."""
    size = len(values)
    for h in range(1, size):
        if all(values[x] == values[x ^ h] for x in range(size)):
            return h
    raise ValueError("table is not two-to-one under any xor offset")


def character(family: OracleFamily, k_index: int) -> SolutionCharacter:
    table = family.tables[k_index]
    if family.kind in (Kind.DEUTSCH, Kind.DJ):
        return CONSTANT if len(set(table.values)) == 1 else BALANCED
    if family.kind is Kind.SIMON:
        return SolutionCharacter("hidden_string", bits(hidden_string(table.values), family.n))
    return SolutionCharacter("location", table.suffix)


def orthogonal_strings(h: str) -> list[str]:
    """All n-bit strings s with s . h = 0 (mod 2), ascending."""
    n = len(h)
    h_int = int(h, 2) if n else 0
    if h_int == 0:
        raise ValueError("hidden string must be nonzero")
    return [bits(s, n) for s in range(1 << n) if not dot(s, h_int)]
