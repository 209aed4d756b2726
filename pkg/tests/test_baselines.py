"""Brute force, enumeration tables + binary cache, MITM, MC annealer."""

import itertools
import math

import numpy as np
import pytest

from fibbraid import braids
from fibbraid.baselines import (
    BudgetExceededError,
    EnumerationTable,
    McConfig,
    brute_force,
    build_enumeration_table,
    load_or_build_table,
    mc_anneal,
    metropolis_accept,
    mitm_search,
    table_cache_path,
)
from fibbraid.braids import (
    custom_gate,
    distance_phase_invariant,
    evaluate,
    format_word,
    standard_gate,
    su2_keys_many,
)

H = standard_gate("H")
I2 = np.eye(2, dtype=complex)


def enumerate_all(target, length, alphabet):
    """Independent re-enumeration oracle (itertools, scalar evaluation)."""
    letters = braids.alphabet_indices(alphabet)
    best = None
    for combo in itertools.product(letters, repeat=length):
        word = np.array(combo, dtype=np.uint8)
        d = distance_phase_invariant(target.matrix, evaluate(word))
        text = format_word(word)
        if best is None or d < best[0] or (d == best[0] and text < best[1]):
            best = (d, text)
    return best


class TestBruteForce:
    def test_target_in_search_set(self):
        sigma1_inv = custom_gate(braids.generator_matrix(braids.Generator.SIGMA1_INV))
        report = brute_force(sigma1_inv, 1, "aB")
        assert report.best_word_text == "a"
        assert report.best_d < 1e-12
        assert report.evaluations == 2

    def test_length_zero(self):
        report = brute_force(H, 0, "aB")
        assert report.best_word_text == ""
        assert report.best_d == pytest.approx(
            distance_phase_invariant(H.matrix, I2), abs=1e-15
        )

    def test_matches_independent_enumeration(self):
        expected_d, expected_text = enumerate_all(H, 8, "aB")
        report = brute_force(H, 8, "aB")
        assert report.best_d == pytest.approx(expected_d, abs=1e-13)
        assert report.best_word_text == expected_text

    def test_lexicographic_tie_break(self):
        # the identity target over {A, a} at L=2: Aa and aA both evaluate to
        # the identity; the text-lex smaller Aa must win
        report = brute_force(custom_gate(I2), 2, "Aa")
        assert report.best_word_text == "Aa"
        assert report.best_d < 1e-12

    def test_budget_refusal_names_required_count(self):
        with pytest.raises(BudgetExceededError) as err:
            brute_force(H, 30, "aB", budget=1 << 20)
        assert err.value.required == 2**30

    def test_thread_count_invariance(self):
        a = brute_force(H, 12, "aB", threads=1)
        b = brute_force(H, 12, "aB", threads=3)
        assert a.best_word_text == b.best_word_text
        assert a.best_d == b.best_d

    def test_report_recomputable(self):
        report = brute_force(H, 6, "AaBb")
        again = distance_phase_invariant(H.matrix, evaluate(report.best_word))
        assert abs(report.best_d - again) < 1e-12


class TestEnumerationTable:
    def test_inverse_pair_collapse(self):
        table = build_enumeration_table(2, "Aa")
        # words {AA, Aa, aA, aa} hold 3 distinct matrices (Aa = aA = I)
        assert table.entry_count == 3
        texts = [format_word(w) for w in table.words]
        assert "Aa" in texts and "aA" not in texts

    def test_distinct_generators(self):
        table = build_enumeration_table(1, "aB")
        assert table.entry_count == 2

    def test_length_zero_table_is_identity(self):
        table = build_enumeration_table(0, "aB")
        assert table.entry_count == 1
        assert np.abs(table.matrices[0] - I2).max() < 1e-12

    def test_dedup_covers_every_matrix(self):
        # against direct enumeration: every word's matrix must agree with its
        # key-bucket representative to 1e-8 (collision-soundness audit)
        length = 10
        table = build_enumeration_table(length, "aB")
        assert table.entry_count < 2**length
        rep_by_key = {
            tuple(k): m
            for k, m in zip(su2_keys_many(table.matrices), table.matrices)
        }
        letters = braids.alphabet_indices("aB")
        for combo in itertools.product(letters, repeat=length):
            word = np.array(combo, dtype=np.uint8)
            mat = evaluate(word)
            key = tuple(su2_keys_many(mat[None])[0])
            assert key in rep_by_key
            assert np.abs(braids.to_su2(mat) - rep_by_key[key]).max() < 1e-8

    def test_entries_are_word_ordered_and_canonical(self):
        table = build_enumeration_table(4, "aB")
        texts = [format_word(w) for w in table.words]
        assert texts == sorted(texts)
        dets = np.linalg.det(table.matrices)
        assert np.abs(dets - 1.0).max() < 1e-10


class TestTableCache:
    def test_save_load_round_trip(self, tmp_path):
        table = build_enumeration_table(5, "aB")
        path = tmp_path / "t.tbl"
        table.save(path)
        loaded = EnumerationTable.load(path)
        assert loaded.length == 5
        assert loaded.alphabet == "aB"
        assert np.array_equal(loaded.words, table.words)
        assert np.array_equal(loaded.matrices, table.matrices)

    def test_load_or_build_uses_cache(self, tmp_path):
        t1 = load_or_build_table(4, "aB", cache_dir=tmp_path)
        path = table_cache_path(4, "aB", tmp_path)
        assert path.exists()
        t2 = load_or_build_table(4, "aB", cache_dir=tmp_path)
        assert np.array_equal(t1.words, t2.words)

    def test_corrupt_cache_is_rebuilt(self, tmp_path):
        load_or_build_table(3, "aB", cache_dir=tmp_path)
        path = table_cache_path(3, "aB", tmp_path)
        path.write_bytes(path.read_bytes()[: _half(path)])
        table = load_or_build_table(3, "aB", cache_dir=tmp_path)
        assert table.entry_count == build_enumeration_table(3, "aB").entry_count

    def test_garbage_header_is_rebuilt(self, tmp_path):
        path = table_cache_path(3, "aB", tmp_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(b"not a table at all")
        table = load_or_build_table(3, "aB", cache_dir=tmp_path)
        assert table.entry_count > 0

    def test_env_var_overrides_cache_dir(self, tmp_path, monkeypatch):
        monkeypatch.setenv("ANYON_CACHE_DIR", str(tmp_path / "envcache"))
        load_or_build_table(2, "aB")
        assert (tmp_path / "envcache").exists()
        assert table_cache_path(2, "aB").exists()

    def test_budget_refusal(self):
        with pytest.raises(BudgetExceededError):
            build_enumeration_table(30, "aB", budget=1 << 10)


def _half(path):
    return path.stat().st_size // 2


class TestMitm:
    def test_degenerate_identity_table_equals_brute_force(self):
        table = build_enumeration_table(6, "aB")
        identity_table = build_enumeration_table(0, "aB")
        via_mitm = mitm_search(H, table, identity_table)
        via_bf = brute_force(H, 6, "aB")
        assert via_mitm.best_d == pytest.approx(via_bf.best_d, abs=1e-13)
        assert via_mitm.L == 6

    def test_half_tables_equal_full_brute_force(self):
        table = build_enumeration_table(5, "aB")
        via_mitm = mitm_search(H, table, table)
        via_bf = brute_force(H, 10, "aB")
        assert abs(via_mitm.best_d - via_bf.best_d) < 1e-12
        assert via_mitm.L == 10
        assert via_mitm.evaluations == table.entry_count**2

    def test_eight_plus_eight_equals_sixteen(self):
        table = build_enumeration_table(8, "aB")
        via_mitm = mitm_search(H, table, table)
        via_bf = brute_force(H, 16, "aB")
        assert abs(via_mitm.best_d - via_bf.best_d) < 1e-12

    def test_mixed_alphabets_rejected(self):
        a = build_enumeration_table(2, "aB")
        b = build_enumeration_table(2, "Ab")
        with pytest.raises(ValueError):
            mitm_search(H, a, b)

    def test_thread_count_invariance(self):
        table = build_enumeration_table(7, "aB")
        a = mitm_search(H, table, table, threads=1)
        b = mitm_search(H, table, table, threads=4)
        assert a.best_word_text == b.best_word_text
        assert a.best_d == b.best_d

    def test_report_recomputable(self):
        table = build_enumeration_table(6, "aB")
        report = mitm_search(H, table, table)
        again = distance_phase_invariant(H.matrix, evaluate(report.best_word))
        assert abs(report.best_d - again) < 1e-12


class TestMcAnneal:
    def test_downhill_always_accepted(self, rng):
        assert all(metropolis_accept(-1e-9, 0.05, rng) for _ in range(100))

    def test_zero_temperature_limit_is_greedy(self, rng):
        # e^{-dE/T} underflows to 0 for T -> 0+, so uphill moves never pass
        assert not any(metropolis_accept(0.01, 1e-300, rng) for _ in range(100))

    def test_acceptance_statistics(self):
        rng = np.random.default_rng(5)
        temperature = 0.05
        n = 100_000
        accepted = sum(metropolis_accept(0.01, temperature, rng) for _ in range(n))
        p = math.exp(-0.01 / temperature)
        sigma = math.sqrt(n * p * (1 - p))
        assert abs(accepted - n * p) <= 3 * sigma

    def test_best_over_ten_seeds_matches_brute_force(self):
        bf = brute_force(H, 8, "aB")
        best = min(
            mc_anneal(H, McConfig(word_length=8, alphabet="aB", sweeps=200, rng_seed=s)).best_d
            for s in range(10)
        )
        assert abs(best - bf.best_d) < 1e-12

    def test_deterministic_and_recomputable(self):
        cfg = McConfig(word_length=10, sweeps=50, rng_seed=9)
        a = mc_anneal(H, cfg)
        b = mc_anneal(H, cfg)
        assert a.best_word_text == b.best_word_text
        assert a.best_d == b.best_d
        again = distance_phase_invariant(H.matrix, evaluate(a.best_word))
        assert abs(a.best_d - again) < 1e-12

    def test_uses_full_alphabet_by_default(self):
        cfg = McConfig(word_length=40, sweeps=30, rng_seed=2)
        report = mc_anneal(H, cfg)
        assert cfg.alphabet == "AaBb"
        assert report.evaluations == 1 + 40 * 30
        assert report.seed == 2

    def test_config_validation(self):
        with pytest.raises(ValueError):
            McConfig(word_length=0)
        with pytest.raises(ValueError):
            McConfig(temp_initial=0.0)
        with pytest.raises(ValueError):
            McConfig(sweeps=0)
