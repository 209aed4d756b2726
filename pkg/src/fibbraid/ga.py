"""Genetic-algorithm search for the best fixed-length braid word.

One generation: draw crossover_count parent pairs uniformly (with
replacement) from the ranked pool, splice each pair at a random cut to get
two children, mutate each child with probability mutation_prob (one random
position flipped to a different alphabet letter), then rank children plus
the previous best and keep the first parent_pool_size as the next pool.
Fitness is the phase-invariant distance to the target; lower is better.

Determinism contract: all randomness is drawn by the coordinator in a fixed
per-generation order (pair indices, cuts, mutation gates, positions, letter
offsets), so every child's random numbers are a fixed function of
(generation, child index) given the restart seed.  Fitness evaluation is a
pure function and may be farmed out to threads without changing results.
Restart seeds are spawned from the master seed via numpy SeedSequence.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np

from .braids import (
    alphabet_indices,
    distance_many,
    distance_phase_invariant,
    evaluate_many,
    format_word,
    parse_alphabet,
    target_matrix,
    target_name,
)

GA_REPORT_SCHEMA = "fibbraid.ga_report.v1"


@dataclass(frozen=True)
class GaConfig:
    """Hyperparameters; None for crossover_count / parent_pool_size means
    the derived defaults N/2 and min(2000, N)."""

    population_size: int = 3000
    crossover_count: int | None = None
    mutation_prob: float = 0.1
    generations: int = 10000
    parent_pool_size: int | None = None
    word_length: int = 30
    alphabet: str = "aB"
    restarts: int = 3
    rng_seed: int = 0
    early_stop_d: float | None = None
    rank_weighted: bool = False

    def __post_init__(self):
        if self.population_size < 1:
            raise ValueError("population_size must be positive")
        if not 0.0 <= self.mutation_prob <= 1.0:
            raise ValueError("mutation_prob must lie in [0, 1]")
        if self.generations < 1:
            raise ValueError("generations must be positive")
        if self.word_length < 1:
            raise ValueError("word_length must be positive")
        if self.restarts < 1:
            raise ValueError("restarts must be positive")
        object.__setattr__(self, "alphabet", parse_alphabet(self.alphabet))
        if self.crossover_count is not None and self.crossover_count < 1:
            raise ValueError("crossover_count must be positive")
        if self.parent_pool_size is not None and not (
            1 <= self.parent_pool_size <= self.population_size
        ):
            raise ValueError("parent_pool_size must lie in [1, population_size]")

    @property
    def resolved_crossover_count(self) -> int:
        return self.crossover_count if self.crossover_count is not None else max(
            1, self.population_size // 2
        )

    @property
    def resolved_pool_size(self) -> int:
        if self.parent_pool_size is not None:
            return self.parent_pool_size
        return min(2000, self.population_size)


@dataclass(frozen=True, eq=False)
class Individual:
    word: np.ndarray
    fitness_d: float


@dataclass(eq=False)
class GaRunReport:
    best: Individual
    best_per_generation: np.ndarray  # entry 0 is the initial population's best
    generations_run: int
    seed: int
    wall_time_s: float
    evaluations: int = 0
    restart_index: int = 0
    histories: list = field(default_factory=list)  # one history per restart


def init_population(cfg: GaConfig, target, rng: np.random.Generator, threads: int = 1):
    """Random population as parallel arrays (words (N, L), fitness (N,))."""
    alph = alphabet_indices(cfg.alphabet)
    words = alph[rng.integers(0, len(alph), size=(cfg.population_size, cfg.word_length))]
    fitness = distance_many(target_matrix(target), evaluate_many(words, threads=threads))
    return words, fitness


def crossover(parent_a, parent_b, cut: int):
    """Splice two equal-length words at 0 < cut < L; returns both children."""
    a = np.asarray(parent_a, dtype=np.uint8)
    b = np.asarray(parent_b, dtype=np.uint8)
    if a.shape != b.shape:
        raise ValueError("parents must have equal length")
    if not 0 < cut < len(a):
        raise ValueError("cut must satisfy 0 < cut < L")
    return (
        np.concatenate([a[:cut], b[cut:]]),
        np.concatenate([b[:cut], a[cut:]]),
    )


def mutate(word, mutation_prob: float, alphabet: str, rng: np.random.Generator) -> np.ndarray:
    """With probability P replace one uniform position by a different letter.

    A single-letter alphabet has no "other" letter, so the word is returned
    unchanged even when the mutation triggers.
    """
    w = np.array(word, dtype=np.uint8, copy=True)
    alph = alphabet_indices(alphabet)
    if rng.random() >= mutation_prob or len(alph) < 2:
        return w
    pos = int(rng.integers(0, len(w)))
    pos_in_alph = int(np.searchsorted(alph, w[pos]))
    offset = int(rng.integers(0, len(alph) - 1))
    w[pos] = alph[offset + (offset >= pos_in_alph)]
    return w


def _make_children(pool_words, cfg: GaConfig, rng: np.random.Generator) -> np.ndarray:
    n_pool = len(pool_words)
    n_cross = cfg.resolved_crossover_count
    length = cfg.word_length
    alph = alphabet_indices(cfg.alphabet)

    if cfg.rank_weighted:
        weights = np.arange(n_pool, 0, -1, dtype=float)
        weights /= weights.sum()
        pairs = rng.choice(n_pool, size=(n_cross, 2), p=weights)
    else:
        pairs = rng.integers(0, n_pool, size=(n_cross, 2))
    a = pool_words[pairs[:, 0]]
    b = pool_words[pairs[:, 1]]
    if length > 1:
        cuts = rng.integers(1, length, size=n_cross)
        keep_a = np.arange(length)[None, :] < cuts[:, None]
        c = np.where(keep_a, a, b)
        d = np.where(keep_a, b, a)
    else:  # no interior cut exists; crossover degenerates to cloning
        c, d = a.copy(), b.copy()
    children = np.empty((2 * n_cross, length), dtype=np.uint8)
    children[0::2] = c
    children[1::2] = d

    gates = rng.random(2 * n_cross) < cfg.mutation_prob
    positions = rng.integers(0, length, size=2 * n_cross)
    if len(alph) > 1:
        offsets = rng.integers(0, len(alph) - 1, size=2 * n_cross)
        hit = np.nonzero(gates)[0]
        cur = np.searchsorted(alph, children[hit, positions[hit]])
        children[hit, positions[hit]] = alph[offsets[hit] + (offsets[hit] >= cur)]
    return children


def evolve_generation(
    pool,
    cfg: GaConfig,
    target,
    best_so_far,
    rng: np.random.Generator,
    threads: int = 1,
):
    """One generation step.

    `pool` is (words, fitness) ranked ascending; `best_so_far` is
    (word, fitness).  Returns the new ranked pool and new best.  The
    previous best is appended after the children, so on exact fitness ties
    a child of the current generation outranks it (stable sort).
    """
    pool_words, _pool_d = pool
    best_word, best_d = best_so_far
    children = _make_children(pool_words, cfg, rng)
    child_d = distance_many(target_matrix(target), evaluate_many(children, threads=threads))

    cand_words = np.concatenate([children, best_word[None, :]])
    cand_d = np.concatenate([child_d, [best_d]])
    order = np.argsort(cand_d, kind="stable")[: cfg.resolved_pool_size]
    new_words = cand_words[order]
    new_d = cand_d[order]
    return (new_words, new_d), (new_words[0].copy(), float(new_d[0]))


def _run_single(cfg: GaConfig, target, seed_seq, threads: int):
    rng = np.random.default_rng(seed_seq)
    words, fitness = init_population(cfg, target, rng, threads=threads)
    order = np.argsort(fitness, kind="stable")[: cfg.resolved_pool_size]
    pool = (words[order], fitness[order])
    best = (pool[0][0].copy(), float(pool[1][0]))
    history = [best[1]]
    evaluations = cfg.population_size
    generations_run = 0
    for _ in range(cfg.generations):
        pool, best = evolve_generation(pool, cfg, target, best, rng, threads=threads)
        history.append(best[1])
        evaluations += 2 * cfg.resolved_crossover_count
        generations_run += 1
        if cfg.early_stop_d is not None and best[1] <= cfg.early_stop_d:
            break
    return best, np.asarray(history), generations_run, evaluations


def ga_search(target, cfg: GaConfig, threads: int = 1) -> GaRunReport:
    """Full search: `restarts` independent runs, report of the best one."""
    t0 = time.perf_counter()
    seed_seqs = np.random.SeedSequence(cfg.rng_seed).spawn(cfg.restarts)
    best_report = None
    histories = []
    total_evals = 0
    for idx, seq in enumerate(seed_seqs):
        (word, d), history, gens, evals = _run_single(cfg, target, seq, threads)
        histories.append(history)
        total_evals += evals
        if best_report is None or d < best_report[1]:
            best_report = (word, d, history, gens, idx)
    word, d, history, gens, idx = best_report
    # report the distance re-derived from the word itself (the scalar path
    # resolves near-zero distances that the batch fitness rounds off)
    d = distance_phase_invariant(target_matrix(target), evaluate_many(word[None, :])[0])
    return GaRunReport(
        best=Individual(word=word, fitness_d=d),
        best_per_generation=history,
        generations_run=gens,
        seed=cfg.rng_seed,
        wall_time_s=time.perf_counter() - t0,
        evaluations=total_evals,
        restart_index=idx,
        histories=histories,
    )


def planned_evaluations(cfg: GaConfig) -> int:
    """Distance evaluations a full (no early stop) search will spend."""
    per_restart = cfg.population_size + cfg.generations * 2 * cfg.resolved_crossover_count
    return cfg.restarts * per_restart


def report_json(report: GaRunReport, cfg: GaConfig, target) -> dict:
    """The GA run as a plain dict following the published report schema."""
    return {
        "schema": GA_REPORT_SCHEMA,
        "gate": target_name(target),
        "L": cfg.word_length,
        "alphabet": cfg.alphabet,
        "N": cfg.population_size,
        "T": cfg.resolved_crossover_count,
        "P": cfg.mutation_prob,
        "G": cfg.generations,
        "seed": cfg.rng_seed,
        "best_word": format_word(report.best.word),
        "best_d": report.best.fitness_d,
        "history": [float(x) for x in report.best_per_generation],
    }


def with_seed(cfg: GaConfig, seed: int, restarts: int | None = None) -> GaConfig:
    """Convenience for derived-seed engine calls."""
    if restarts is None:
        return replace(cfg, rng_seed=seed)
    return replace(cfg, rng_seed=seed, restarts=restarts)
