"""Reference searchers: brute force, meet-in-the-middle, MC annealing.

All searchers return a SearchReport whose best_d is recomputed from the
reported word at report time, so stored values can always be re-derived.
Brute force and MITM enumerate in text-lexicographic word order and break
exact distance ties toward the lexicographically smallest word, which makes
results independent of chunking and thread count.

Enumeration tables deduplicate words by a canonical matrix key (SU(2)
projection, sign branch, entrywise rounding at 1e-9) and keep the
lexicographically smallest word per key.  Tables persist to a small binary
cache: a fixed header followed by fixed-width records of 8 little-endian
float64 matrix components plus the word packed at 2 bits per letter.
"""

from __future__ import annotations

import math
import os
import struct
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .braids import (
    LETTERS,
    GENERATOR_MATRICES,
    alphabet_indices,
    distance_many,
    distance_phase_invariant,
    evaluate,
    evaluate_many,
    format_word,
    parse_alphabet,
    su2_keys_many,
    target_matrix,
    target_name,
    to_su2_many,
)

DEFAULT_BUDGET = 1 << 24
_ENUM_CHUNK = 1 << 15


class BudgetExceededError(ValueError):
    """Raised when an exhaustive operation would exceed its evaluation budget."""

    def __init__(self, required: int, budget: int, what: str = "enumeration"):
        self.required = required
        self.budget = budget
        super().__init__(
            f"{what} needs {required} evaluations, over the budget of {budget}; "
            "use mitm or ga instead, or raise the budget"
        )


@dataclass(eq=False)
class SearchReport:
    method: str  # BF | MITM | MC | GA
    gate: str
    L: int
    best_word: np.ndarray
    best_d: float
    evaluations: int
    wall_time_s: float
    seed: int | None = None

    @property
    def best_word_text(self) -> str:
        return format_word(self.best_word)


def _lex_alphabet(alphabet: str) -> np.ndarray:
    """Generator indices ordered so that enumeration order = text-lex order."""
    idx = alphabet_indices(alphabet)
    return idx[np.argsort([LETTERS[i] for i in idx])]


def _decode_words(start: int, stop: int, k: int, length: int, lex: np.ndarray) -> np.ndarray:
    """Words for integer codes [start, stop), most-significant digit first."""
    codes = np.arange(start, stop, dtype=np.int64)
    words = np.empty((len(codes), length), dtype=np.uint8)
    for pos in range(length - 1, -1, -1):
        words[:, pos] = lex[codes % k]
        codes //= k
    return words


def brute_force(
    target,
    length: int,
    alphabet: str = "aB",
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> SearchReport:
    """Global minimum over all |alphabet|^length words of exactly `length`."""
    t0 = time.perf_counter()
    tmat = target_matrix(target)
    alphabet = parse_alphabet(alphabet)
    lex = _lex_alphabet(alphabet)
    k = len(lex)
    total = k**length
    if total > budget:
        raise BudgetExceededError(total, budget, what=f"brute force at L={length}")

    def scan(bounds):
        start, stop = bounds
        words = _decode_words(start, stop, k, length, lex)
        d = distance_many(tmat, evaluate_many(words))
        i = int(np.argmin(d))
        return float(d[i]), start + i, words[i]

    chunks = [(s, min(s + _ENUM_CHUNK, total)) for s in range(0, total, _ENUM_CHUNK)]
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(scan, chunks))
    else:
        results = [scan(c) for c in chunks]
    best_d, _, best_word = min(results, key=lambda r: (r[0], r[1]))

    return SearchReport(
        method="BF",
        gate=target_name(target),
        L=length,
        best_word=best_word,
        best_d=distance_phase_invariant(tmat, evaluate(best_word)),
        evaluations=total,
        wall_time_s=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# enumeration tables and their binary cache
# ---------------------------------------------------------------------------

_CACHE_MAGIC = b"FBBT"
_CACHE_VERSION = 1
_HEADER = struct.Struct("<4sHHBBQ")  # magic, version, length, alphabet mask, pad, count


@dataclass(eq=False)
class EnumerationTable:
    """Deduplicated (matrix, representative word) pairs for one length.

    Entries are ordered by text-lex rank of the representative word;
    matrices are the canonical SU(2) projections.
    """

    length: int
    alphabet: str
    words: np.ndarray  # (m, length) uint8
    matrices: np.ndarray  # (m, 2, 2) complex128

    @property
    def entry_count(self) -> int:
        return len(self.words)

    def save(self, path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        mask = 0
        for i in alphabet_indices(self.alphabet):
            mask |= 1 << int(i)
        rec = np.zeros(self.entry_count, dtype=_record_dtype(self.length))
        rec["m"] = np.ascontiguousarray(self.matrices).view(np.float64).reshape(-1, 8)
        rec["w"] = _pack_words(self.words)
        tmp = path.with_suffix(path.suffix + ".tmp")
        with open(tmp, "wb") as fh:
            fh.write(_HEADER.pack(_CACHE_MAGIC, _CACHE_VERSION, self.length, mask, 0, self.entry_count))
            rec.tofile(fh)
        os.replace(tmp, path)

    @classmethod
    def load(cls, path) -> "EnumerationTable":
        with open(path, "rb") as fh:
            header = fh.read(_HEADER.size)
            if len(header) != _HEADER.size:
                raise ValueError("truncated table header")
            magic, version, length, mask, _, count = _HEADER.unpack(header)
            if magic != _CACHE_MAGIC or version != _CACHE_VERSION:
                raise ValueError("unrecognized table format")
            rec = np.fromfile(fh, dtype=_record_dtype(length))
            if fh.read(1):
                raise ValueError("trailing bytes in table file")
        if len(rec) != count:
            raise ValueError(f"expected {count} records, found {len(rec)}")
        alphabet = "".join(LETTERS[i] for i in range(4) if mask & (1 << i))
        words = _unpack_words(rec["w"], length)
        mats = np.ascontiguousarray(rec["m"]).view(np.complex128).reshape(-1, 2, 2)
        return cls(length=length, alphabet=alphabet, words=words, matrices=mats)


def _record_dtype(length: int) -> np.dtype:
    wbytes = max(1, (length + 3) // 4)
    return np.dtype([("m", "<f8", (8,)), ("w", "u1", (wbytes,))])


def _pack_words(words: np.ndarray) -> np.ndarray:
    n, length = words.shape
    wbytes = max(1, (length + 3) // 4)
    packed = np.zeros((n, wbytes), dtype=np.uint8)
    for pos in range(length):
        packed[:, pos // 4] |= words[:, pos] << (2 * (pos % 4))
    return packed


def _unpack_words(packed: np.ndarray, length: int) -> np.ndarray:
    n = len(packed)
    words = np.empty((n, length), dtype=np.uint8)
    for pos in range(length):
        words[:, pos] = (packed[:, pos // 4] >> (2 * (pos % 4))) & 3
    return words


def build_enumeration_table(
    length: int,
    alphabet: str = "aB",
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> EnumerationTable:
    """Evaluate every word of `length`, dedup by canonical matrix key."""
    alphabet = parse_alphabet(alphabet)
    lex = _lex_alphabet(alphabet)
    k = len(lex)
    total = k**length
    if total > budget:
        raise BudgetExceededError(total, budget, what=f"table build at l={length}")
    if length == 0:
        return EnumerationTable(
            length=0,
            alphabet=alphabet,
            words=np.empty((1, 0), dtype=np.uint8),
            matrices=np.eye(2, dtype=complex)[None, :, :],
        )

    def scan(bounds):
        start, stop = bounds
        words = _decode_words(start, stop, k, length, lex)
        mats = evaluate_many(words)
        keys = su2_keys_many(mats)
        _, first = np.unique(keys, axis=0, return_index=True)
        first.sort()
        return keys[first], words[first], to_su2_many(mats[first])

    chunks = [(s, min(s + _ENUM_CHUNK, total)) for s in range(0, total, _ENUM_CHUNK)]
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(scan, chunks))
    else:
        parts = [scan(c) for c in chunks]

    # chunks are in lex order, so keep-first across the concatenation keeps
    # the lexicographically smallest representative per key
    keys = np.concatenate([p[0] for p in parts])
    words = np.concatenate([p[1] for p in parts])
    mats = np.concatenate([p[2] for p in parts])
    _, first = np.unique(keys, axis=0, return_index=True)
    first.sort()
    return EnumerationTable(length=length, alphabet=alphabet, words=words[first], matrices=mats[first])


def default_cache_dir() -> Path:
    env = os.environ.get("ANYON_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "fibbraid"


def table_cache_path(length: int, alphabet: str, cache_dir=None) -> Path:
    base = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    return base / f"enum_v{_CACHE_VERSION}_l{length}_{parse_alphabet(alphabet)}.tbl"


def load_or_build_table(
    length: int,
    alphabet: str = "aB",
    cache_dir=None,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> EnumerationTable:
    """Load the cached table for (length, alphabet); rebuild on any mismatch."""
    alphabet = parse_alphabet(alphabet)
    path = table_cache_path(length, alphabet, cache_dir)
    if path.exists():
        try:
            table = EnumerationTable.load(path)
            if table.length == length and table.alphabet == alphabet:
                return table
        except (ValueError, OSError):
            pass  # corrupt or stale cache: fall through to rebuild
    table = build_enumeration_table(length, alphabet, budget=budget, threads=threads)
    table.save(path)
    return table


_MITM_ROW_CHUNK = 512


def mitm_search(target, table_a: EnumerationTable, table_b: EnumerationTable, threads: int = 1) -> SearchReport:
    """Minimum d over the Cartesian product of two enumeration tables.

    Tr(U0 (UA UB)^dag) = <vec(UA^dag U0), vec(UB)>, so each block of the
    product scan is a single complex matrix multiply.
    """
    if table_a.alphabet != table_b.alphabet:
        raise ValueError("tables must share the same alphabet")
    t0 = time.perf_counter()
    tmat = target_matrix(target)
    xa = np.matmul(table_a.matrices.conj().transpose(0, 2, 1), tmat).reshape(-1, 4)
    yb = table_b.matrices.reshape(-1, 4).conj()

    def scan(bounds):
        start, stop = bounds
        tr = np.abs(xa[start:stop] @ yb.T)
        flat = int(np.argmax(tr))
        i, j = divmod(flat, tr.shape[1])
        return float(tr[i, j]), start + i, j

    n_a = len(xa)
    chunks = [(s, min(s + _MITM_ROW_CHUNK, n_a)) for s in range(0, n_a, _MITM_ROW_CHUNK)]
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(scan, chunks))
    else:
        results = [scan(c) for c in chunks]
    # maximize |tr|; on exact ties the earliest (i, j) pair wins, which is
    # the lexicographically smallest combined word (tables are word-ordered)
    best_tr, best_i, best_j = max(results, key=lambda r: (r[0], -r[1], -r[2]))

    word = np.concatenate([table_a.words[best_i], table_b.words[best_j]])
    return SearchReport(
        method="MITM",
        gate=target_name(target),
        L=table_a.length + table_b.length,
        best_word=word,
        best_d=distance_phase_invariant(tmat, evaluate(word)),
        evaluations=len(xa) * len(yb),
        wall_time_s=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# Monte-Carlo spin-chain annealer
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class McConfig:
    """Annealer settings; temperature decays geometrically per sweep."""

    word_length: int = 30
    alphabet: str = "AaBb"
    sweeps: int = 200
    temp_initial: float = 0.1
    temp_decay: float = 0.97
    rng_seed: int = 0

    def __post_init__(self):
        if self.word_length < 1:
            raise ValueError("word_length must be positive")
        if self.sweeps < 1:
            raise ValueError("sweeps must be positive")
        if self.temp_initial <= 0.0 or self.temp_decay <= 0.0:
            raise ValueError("temperature schedule must stay positive")
        object.__setattr__(self, "alphabet", parse_alphabet(self.alphabet))


def metropolis_accept(delta_e: float, temperature: float, rng: np.random.Generator) -> bool:
    """Downhill moves always accepted, uphill with probability e^{-dE/T}."""
    if delta_e < 0.0:
        return True
    return rng.random() < math.exp(-delta_e / temperature)


def mc_anneal(target, cfg: McConfig) -> SearchReport:
    """Sweep positions left to right proposing single-letter changes.

    Each sweep rebuilds suffix products once and carries a running prefix,
    so a proposal costs two 2x2 multiplies.  Returns the best word ever
    visited, not the final chain state.
    """
    t0 = time.perf_counter()
    tmat = target_matrix(target)
    rng = np.random.default_rng(cfg.rng_seed)
    alph = alphabet_indices(cfg.alphabet)
    k = len(alph)
    length = cfg.word_length

    word = alph[rng.integers(0, k, size=length)]
    current = evaluate_many(word[None, :])[0]
    current_d = distance_phase_invariant(tmat, current)
    best_word = word.copy()
    best_d = current_d
    evaluations = 1

    temperature = cfg.temp_initial
    for _ in range(cfg.sweeps):
        # suffix[i] = product of letters i..L-1 under the current word
        suffix = np.empty((length + 1, 2, 2), dtype=complex)
        suffix[length] = np.eye(2)
        for i in range(length - 1, -1, -1):
            suffix[i] = GENERATOR_MATRICES[word[i]] @ suffix[i + 1]
        prefix = np.eye(2, dtype=complex)
        for i in range(length):
            if k > 1:
                pos_in_alph = int(np.searchsorted(alph, word[i]))
                offset = int(rng.integers(0, k - 1))
                proposal = alph[offset + (offset >= pos_in_alph)]
                candidate = prefix @ GENERATOR_MATRICES[proposal] @ suffix[i + 1]
                cand_d = distance_phase_invariant(tmat, candidate)
                evaluations += 1
                if metropolis_accept(cand_d - current_d, temperature, rng):
                    word[i] = proposal
                    current_d = cand_d
                    if cand_d < best_d:
                        best_d = cand_d
                        best_word = word.copy()
            prefix = prefix @ GENERATOR_MATRICES[word[i]]
        temperature *= cfg.temp_decay

    return SearchReport(
        method="MC",
        gate=target_name(target),
        L=length,
        best_word=best_word,
        best_d=distance_phase_invariant(tmat, evaluate(best_word)),
        evaluations=evaluations,
        wall_time_s=time.perf_counter() - t0,
        seed=cfg.rng_seed,
    )
