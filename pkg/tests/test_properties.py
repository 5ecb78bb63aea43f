"""Randomized and exhaustive properties, 200 hypothesis cases per property."""

from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from advice50 import algorithms
from advice50.advice import Target, answers
from advice50.families import Kind, character, dot, enumerate_family
from advice50.histories import all_good_advice, consistent_ks
from advice50.qstate import (
    StateVector,
    apply_grover_u,
    apply_hadamard_x,
    apply_oracle_xor,
    conditional_distribution,
    make_product,
    marginal_distribution,
    total_variation,
    uniform,
)

CASES = settings(max_examples=200, deadline=None)
TOL = 1e-12

IN_CAP = (
    [("deutsch", 1)]
    + [("dj", n) for n in (1, 2, 3)]
    + [("simon", n) for n in (2, 3)]
    + [("grover", n) for n in range(1, 11)]
)
SMALL = [("deutsch", 1), ("dj", 2), ("simon", 2), ("simon", 3), ("grover", 3)]


@lru_cache(maxsize=None)
def family(kind, n):
    return enumerate_family(kind, n)


@lru_cache(maxsize=None)
def extended(kind, n):
    return algorithms.extended_final_state(kind, n)


def random_state(layout, seed):
    rng = np.random.default_rng(seed)
    vec = rng.normal(size=layout.size) + 1j * rng.normal(size=layout.size)
    return StateVector(layout, vec / np.linalg.norm(vec))


case = st.sampled_from(SMALL)
seed = st.integers(0, 2**32 - 1)


class TestUnitarity:
    @CASES
    @given(case, seed, seed)
    def test_oracle_preserves_inner_products(self, kn, s1, s2):
        fam = family(*kn)
        a, b = random_state(fam.layout, s1), random_state(fam.layout, s2)
        before = np.vdot(a.amplitudes, b.amplitudes)
        after = np.vdot(apply_oracle_xor(a, fam).amplitudes, apply_oracle_xor(b, fam).amplitudes)
        assert abs(before - after) <= TOL

    @CASES
    @given(case, seed, seed)
    def test_hadamard_preserves_inner_products(self, kn, s1, s2):
        layout = family(*kn).layout
        a, b = random_state(layout, s1), random_state(layout, s2)
        before = np.vdot(a.amplitudes, b.amplitudes)
        after = np.vdot(apply_hadamard_x(a).amplitudes, apply_hadamard_x(b).amplitudes)
        assert abs(before - after) <= TOL

    @CASES
    @given(st.integers(1, 5), seed, seed)
    def test_grover_u_preserves_inner_products(self, n, s1, s2):
        layout = family("grover", n).layout
        a, b = random_state(layout, s1), random_state(layout, s2)
        before = np.vdot(a.amplitudes, b.amplitudes)
        after = np.vdot(apply_grover_u(a).amplitudes, apply_grover_u(b).amplitudes)
        assert abs(before - after) <= TOL

    @CASES
    @given(case, seed)
    def test_oracle_is_a_basis_permutation_and_involution(self, kn, s):
        fam = family(*kn)
        state = random_state(fam.layout, s)
        once = apply_oracle_xor(state, fam)
        assert np.allclose(np.sort(np.abs(once.amplitudes)), np.sort(np.abs(state.amplitudes)), atol=TOL)
        assert np.allclose(apply_oracle_xor(once, fam).amplitudes, state.amplitudes, atol=TOL)


@CASES
@given(st.sampled_from([("deutsch", 1), ("dj", 2), ("dj", 3), ("grover", 4)]), seed)
def test_phase_kickback(kn, s):
    fam = family(*kn)
    rng = np.random.default_rng(s)
    k_amps = rng.normal(size=fam.layout.k_count) + 1j * rng.normal(size=fam.layout.k_count)
    x_amps = rng.normal(size=fam.layout.x_count) + 1j * rng.normal(size=fam.layout.x_count)
    state = make_product(fam.layout, k_amps, x_amps, [1, -1])
    out = apply_oracle_xor(state, fam).tensor
    signs = (-1.0) ** fam.values
    assert np.allclose(out, state.tensor * signs[:, :, None], atol=TOL)


@CASES
@given(case, seed)
def test_hadamard_involution(kn, s):
    state = random_state(family(*kn).layout, s)
    assert np.allclose(apply_hadamard_x(apply_hadamard_x(state)).amplitudes, state.amplitudes, atol=TOL)


@pytest.mark.parametrize("n", [2, 3])
def test_simon_outcomes_orthogonal_exhaustive(n):
    fam = family("simon", n)
    final = extended("simon", n)
    for k in range(len(fam)):
        h = int(character(fam, k).value, 2)
        probs = conditional_distribution(final, "K", k, "X")
        for s in range(1 << n):
            expected = 0.0 if dot(s, h) else 1 / (1 << (n - 1))
            assert probs[s] == pytest.approx(expected, abs=TOL)


@CASES
@given(st.sampled_from(IN_CAP), st.data())
def test_backdating_total_variation(kn, data):
    fam = family(*kn)
    k = data.draw(st.integers(0, len(fam) - 1))
    back = marginal_distribution(algorithms.run_backdated(*kn, k).final_state, "X")
    cond = conditional_distribution(extended(*kn), "K", k, "X")
    assert total_variation(back, cond) < 1e-9


@CASES
@given(st.sampled_from(SMALL + [("dj", 3), ("grover", 2)]), seed)
def test_random_k_phases_leave_x_statistics(kn, s):
    fam = family(*kn)
    rng = np.random.default_rng(s)
    phases = np.exp(2j * np.pi * rng.random(fam.layout.k_count))
    psi0 = make_product(fam.layout, phases * uniform(fam.layout.k_count), uniform(fam.layout.x_count),
                        algorithms.canonical_v(fam))
    if fam.kind is Kind.GROVER:
        state = psi0
        for _ in range(algorithms.grover_default_iterations(fam.n)):
            state = apply_grover_u(apply_oracle_xor(state, fam))
    else:
        state = apply_hadamard_x(apply_oracle_xor(psi0, fam))
    reference = extended(*kn)
    assert np.allclose(marginal_distribution(state, "X"), marginal_distribution(reference, "X"), atol=TOL)
    k = int(rng.integers(len(fam)))
    assert np.allclose(
        conditional_distribution(state, "K", k, "X"),
        conditional_distribution(reference, "K", k, "X"),
        atol=TOL,
    )


SOUNDNESS = [
    ("deutsch", 1, Target.CHARACTER),
    ("dj", 1, Target.CHARACTER),
    ("dj", 2, Target.CHARACTER),
    ("dj", 3, Target.CHARACTER),
    ("simon", 2, Target.HIDDEN_STRING),
    ("simon", 3, Target.HIDDEN_STRING),
    ("grover", 2, Target.LOCATION),
]


def _extra_queries(fam, spec):
    """Rows outside a row advice; for bit advice, the x agreeing with the
    advised bits (any other x reads 0 for every remaining candidate)."""
    if spec.form == "rows":
        return [x for x in range(fam.x_count) if x not in spec.positions]
    width = fam.n
    return [
        x for x in range(fam.x_count)
        if all(format(x, f"0{width}b")[p] == str(b) for p, b in spec.entries)
    ]


@pytest.mark.parametrize("kind,n,target", SOUNDNESS)
def test_advice_goodness_soundness(kind, n, target):
    fam = family(kind, n)
    specs = all_good_advice(fam)
    assert specs
    for spec in specs:
        ks = consistent_ks(fam, spec)
        # the advice alone leaves more than one answer open
        assert not frozenset.intersection(*(answers(fam, target, k) for k in ks))
        for x in _extra_queries(fam, spec):
            for k in ks:
                same = [j for j in ks if fam.tables[j].values[x] == fam.tables[k].values[x]]
                assert frozenset.intersection(*(answers(fam, target, j) for j in same))
