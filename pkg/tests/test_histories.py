import json

import numpy as np
import pytest

from advice50.algorithms import initial_state
from advice50.families import enumerate_family
from advice50.histories import (
    AdviceSpec,
    Mode,
    all_good_advice,
    build_histories,
    consistent_ks,
    dedupe,
    enumerate_good_advice,
    histories_jsonl,
    history_sum_state,
    is_good,
    phase_transfer_analysis,
    sum_histories,
    verify_history_equivalence,
)
from advice50.qstate import apply_oracle_xor, states_close

TOL = 1e-12
CASES = [("deutsch", 1), ("dj", 2), ("dj", 3), ("simon", 2), ("simon", 3), ("grover", 2), ("grover", 4)]


class TestAdvice:
    def test_deutsch_advice_is_one_row(self):
        family = enumerate_family("deutsch", 1)
        specs = enumerate_good_advice(family, family.index_of("01"))
        assert [s.entries for s in specs] == [((0, 0),), ((1, 1),)]

    def test_dj2_good_advice_needs_equal_values(self):
        family = enumerate_family("dj", 2)
        assert is_good(family, AdviceSpec("rows", ((0, 1), (2, 1))))
        assert not is_good(family, AdviceSpec("rows", ((0, 0), (1, 1))))
        # balanced 0101: pairs {0,2} and {1,3} are the only equal-valued halves
        specs = enumerate_good_advice(family, family.index_of("0101"))
        assert [s.positions for s in specs] == [(0, 2), (1, 3)]
        assert len(enumerate_good_advice(family, family.index_of("0000"))) == 6

    def test_simon_good_advice_needs_distinct_values(self):
        family = enumerate_family("simon", 2)
        assert is_good(family, AdviceSpec("rows", ((0, 0), (1, 1))))
        assert not is_good(family, AdviceSpec("rows", ((0, 0), (1, 0))))

    def test_grover_advice_is_half_the_bits(self):
        family = enumerate_family("grover", 4)
        specs = enumerate_good_advice(family, family.index_of("1010"))
        assert len(specs) == 6
        assert all(len(s.entries) == 2 for s in specs)
        for spec in specs:
            assert len(consistent_ks(family, spec)) == 4

    @pytest.mark.parametrize("kind,n", [("dj", 2), ("dj", 3), ("simon", 2), ("simon", 3)])
    def test_good_advice_leaves_solution_open(self, kind, n):
        from advice50.families import character

        family = enumerate_family(kind, n)
        for spec in all_good_advice(family):
            chars = {character(family, k) for k in consistent_ks(family, spec)}
            assert len(chars) >= 2

    def test_consistent_ks_none(self):
        family = enumerate_family("deutsch", 1)
        assert consistent_ks(family, None) == [0, 1, 2, 3]


class TestHistories:
    def test_deutsch_literal_count(self):
        family = enumerate_family("deutsch", 1)
        total = sum(len(build_histories(family, k, "literal")) for k in range(4))
        assert total == 16

    def test_constant_zero_leaves_state_alone(self):
        family = enumerate_family("deutsch", 1)
        for h in build_histories(family, family.index_of("00"), "literal"):
            assert states_close(h.post_state, h.pre_state, 0.0)

    def test_deutsch_01_pair_cancels_to_kickback(self):
        family = enumerate_family("deutsch", 1)
        k = family.index_of("01")
        hs = build_histories(family, k, "literal")
        # the v = 0 and v = 1 histories querying x = 1 sum to a phase-flipped antisymmetric V
        pair = [h for h in hs if h.query_x == (1,)]
        assert [(h.v_initial, h.phase) for h in pair] == [(0, 1), (1, -1)]
        raw = sum_histories(pair).tensor[k, 1]
        assert np.allclose(raw, [-1, 1], atol=TOL)

    def test_grover_literal_undefined(self):
        family = enumerate_family("grover", 2)
        with pytest.raises(ValueError):
            build_histories(family, 0, "literal")

    def test_shortcut_is_one_history(self):
        family = enumerate_family("dj", 2)
        hs = build_histories(family, 3, Mode.SHORTCUT)
        assert len(hs) == 1 and hs[0].query_x == (0, 1, 2, 3)

    def test_dedupe(self):
        family = enumerate_family("dj", 2)
        hs = build_histories(family, family.index_of("0000"), "literal")
        kept, counts = dedupe(hs + hs[:1])
        assert len(kept) == len(hs) and counts[0] == 2

    @pytest.mark.parametrize("kind,n", CASES)
    def test_shortcut_equivalence(self, kind, n):
        report = verify_history_equivalence(enumerate_family(kind, n), "shortcut", TOL)
        assert report.passed, report.max_residual

    @pytest.mark.parametrize("kind,n", [c for c in CASES if c[0] != "grover"])
    def test_literal_equivalence(self, kind, n):
        report = verify_history_equivalence(enumerate_family(kind, n), "literal", TOL)
        assert report.passed, report.max_residual

    @pytest.mark.parametrize("kind,n", [("deutsch", 1), ("dj", 2), ("simon", 2), ("simon", 3)])
    def test_modes_agree(self, kind, n):
        family = enumerate_family(kind, n)
        a = history_sum_state(family, "literal")[0]
        b = history_sum_state(family, "shortcut")[0]
        assert states_close(a, b, TOL)

    def test_unweighted_literal_sum_differs_for_dj(self):
        # per-k bunches carry different history counts, so the plain sum is off
        report = verify_history_equivalence(enumerate_family("dj", 2), "literal")
        assert report.global_norm_residual > 0.05

    def test_unweighted_sum_matches_for_deutsch(self):
        family = enumerate_family("deutsch", 1)
        _, plain, _ = history_sum_state(family, "literal")
        expected = apply_oracle_xor(initial_state(family), family)
        assert states_close(plain.normalized(), expected, TOL)

    def test_jsonl(self):
        family = enumerate_family("deutsch", 1)
        lines = histories_jsonl(family, "literal").splitlines()
        assert len(lines) == 16
        first = json.loads(lines[0])
        assert set(first) == {"k", "advice", "query", "v", "phase"}

    def test_report_dict(self):
        payload = verify_history_equivalence(enumerate_family("simon", 2), "literal").to_dict()
        assert payload["passed"] is True
        assert set(payload["residuals"]) == {"0011", "0101", "0110", "1001", "1010", "1100"}


class TestPhaseTransfer:
    @pytest.mark.parametrize("kind,n", [("deutsch", 1), ("dj", 2), ("grover", 2)])
    def test_one_bit(self, kind, n):
        report = phase_transfer_analysis(enumerate_family(kind, n), 0.6, 0.8j)
        assert report.symmetric_residual <= TOL
        assert report.antisymmetric_residual <= TOL
        assert report.combined_residual <= TOL

    def test_simon(self):
        report = phase_transfer_analysis(enumerate_family("simon", 2), 1, 1)
        assert report.v_swap_residual <= TOL
        assert report.combined_residual <= TOL
        assert report.symmetric_residual is None

    def test_zero_weights(self):
        with pytest.raises(ValueError):
            phase_transfer_analysis(enumerate_family("deutsch", 1), 0, 0)
