"""Recursive Solovay-Kitaev compiler over braid-word base engines.

The recursion improves an order-(n-1) approximation U_{n-1} of a target U by
decomposing the residual Delta = U U_{n-1}^dag as a balanced group
commutator V W V^dag W^dag and compiling V and W at order n-1:

    U_n = V_{n-1} W_{n-1} V_{n-1}^dag W_{n-1}^dag U_{n-1}

Word length grows exactly as l0 * 5^n and the (uncached) base-engine call
count as 3^n.

The commutator construction is the axis-angle one: for Delta a rotation by
theta, both seed rotations use the angle phi solving

    sin(theta/2) = 2 sin^2(phi/2) sqrt(1 - sin^4(phi/2)),

i.e. sin^2(phi/2) = sin(theta/4), about the x and y axes; a similarity
rotation then aligns the commutator's axis with Delta's.  This keeps
d(I, V) = d(I, W) = O(sqrt(d(I, Delta))), the balance the recursion needs.

Base engines are callables returning a BasicApproximation; stochastic
engines derive their per-call seed from the canonical key of the requested
matrix, so results do not depend on call order or on the memo cache.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import baselines
from .braids import (
    axis_angle,
    distance_phase_invariant,
    distance_quaternion,
    evaluate,
    format_word,
    inverse_word,
    rotation,
    simplify,
    su2_key,
    target_matrix,
    target_name,
    to_su2,
)
from .ga import GaConfig, ga_search

SK_RESULT_SCHEMA = "fibbraid.sk_result.v1"

_METRICS = {
    "phase_invariant": distance_phase_invariant,
    "quaternion": distance_quaternion,
}


class GcDecomposeError(ValueError):
    """Residual too far from the identity for a group-commutator split."""

    def __init__(self, distance: float, order: int | None = None):
        self.distance = distance
        self.order = order
        at = "" if order is None else f" at order {order}"
        super().__init__(
            f"group-commutator decomposition needs d(I, delta) < 0.5, got {distance:.4g}{at}; "
            "the base approximation is too coarse"
        )


@dataclass(frozen=True, eq=False)
class GcPair:
    v: np.ndarray
    w: np.ndarray


def _commutator_angle(theta: float) -> float:
    """Solve sin(theta/2) = 2 s sqrt(1 - s^2) with s = sin^2(phi/2).

    Closed form: s = sin(theta/4).  A bisection fallback guards against any
    residual in edge cases; it has never been needed on [0, pi].
    """
    s = math.sin(theta / 4.0)
    phi = 2.0 * math.asin(math.sqrt(max(s, 0.0)))
    if abs(2.0 * s * math.sqrt(1.0 - s * s) - math.sin(theta / 2.0)) <= 1e-14:
        return phi
    lo, hi = 0.0, math.pi / 2.0
    want = math.sin(theta / 2.0)
    for _ in range(200):
        mid = (lo + hi) / 2.0
        sm = math.sin(mid / 2.0) ** 2
        if 2.0 * sm * math.sqrt(1.0 - sm * sm) < want:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


def _axis_alignment(src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """SU(2) rotation taking unit vector src to dst."""
    cross = np.cross(src, dst)
    dot = float(np.dot(src, dst))
    s = float(np.linalg.norm(cross))
    if s < 1e-14:
        if dot > 0.0:
            return np.eye(2, dtype=complex)
        # antiparallel: rotate by pi about a perpendicular axis, built from
        # the smallest-index coordinate axis not parallel to src
        for k in range(3):
            e = np.zeros(3)
            e[k] = 1.0
            if abs(np.dot(e, src)) < 1.0 - 1e-9:
                perp = e - np.dot(e, src) * src
                return rotation(perp, math.pi)
    return rotation(cross / s, math.atan2(s, dot))


def gc_decompose(delta: np.ndarray) -> GcPair:
    """Balanced group-commutator split of a near-identity unitary.

    Returns V, W with V W V^dag W^dag = delta up to global phase and
    d(I, V) = d(I, W) ~ sqrt(d(I, delta)).  Requires d(I, delta) < 0.5.
    """
    delta = np.asarray(delta, dtype=complex)
    d0 = distance_phase_invariant(np.eye(2), delta)
    if d0 >= 0.5:
        raise GcDecomposeError(d0)
    du = to_su2(delta)
    theta, axis = axis_angle(du)
    phi = _commutator_angle(theta)
    v0 = rotation([1.0, 0.0, 0.0], phi)
    w0 = rotation([0.0, 1.0, 0.0], phi)
    commutator = v0 @ w0 @ v0.conj().T @ w0.conj().T
    _, comm_axis = axis_angle(to_su2(commutator))
    s = _axis_alignment(comm_axis, axis)
    return GcPair(v=s @ v0 @ s.conj().T, w=s @ w0 @ s.conj().T)


def recursion_cost(n: int) -> tuple[int, int]:
    """(word-length multiplier, base-engine call multiplier) at depth n."""
    if n < 0:
        raise ValueError("depth must be nonnegative")
    return 5**n, 3**n


# ---------------------------------------------------------------------------
# base engines
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class BasicApproximation:
    """A 0-order result: the found word (None for matrix-only engines) and
    the matrix the recursion should use for it."""

    word: np.ndarray | None
    matrix: np.ndarray


def derive_seed(master_seed: int, key: tuple[int, ...]) -> int:
    """Per-target seed from the master seed and a canonical matrix key."""
    entropy = [master_seed & 0xFFFFFFFFFFFFFFFF] + [x & 0xFFFFFFFFFFFFFFFF for x in key]
    return int(np.random.SeedSequence(entropy).generate_state(1, dtype=np.uint64)[0])


class GaEngine:
    """GA base engine; word_length of the config is the base length l0."""

    def __init__(self, cfg: GaConfig, threads: int = 1):
        self.cfg = cfg
        self.threads = threads
        self.evaluations = 0

    @property
    def word_length(self) -> int:
        return self.cfg.word_length

    def __call__(self, matrix: np.ndarray) -> BasicApproximation:
        seed = derive_seed(self.cfg.rng_seed, su2_key(matrix))
        report = ga_search(matrix, replace(self.cfg, rng_seed=seed), threads=self.threads)
        self.evaluations += report.evaluations
        word = report.best.word
        return BasicApproximation(word=word, matrix=evaluate(word))


class BfEngine:
    def __init__(self, length: int, alphabet: str = "aB",
                 budget: int = baselines.DEFAULT_BUDGET, threads: int = 1):
        self.length = length
        self.alphabet = alphabet
        self.budget = budget
        self.threads = threads
        self.evaluations = 0

    @property
    def word_length(self) -> int:
        return self.length

    def __call__(self, matrix: np.ndarray) -> BasicApproximation:
        report = baselines.brute_force(
            matrix, self.length, self.alphabet, budget=self.budget, threads=self.threads
        )
        self.evaluations += report.evaluations
        return BasicApproximation(word=report.best_word, matrix=evaluate(report.best_word))


class MitmEngine:
    """Meet-in-the-middle engine over cached half-length tables."""

    def __init__(self, length: int, alphabet: str = "aB", cache_dir=None,
                 budget: int = baselines.DEFAULT_BUDGET, threads: int = 1):
        self.length = length
        self.alphabet = alphabet
        self.cache_dir = cache_dir
        self.budget = budget
        self.threads = threads
        self.evaluations = 0
        self._tables = None

    @property
    def word_length(self) -> int:
        return self.length

    def _ensure_tables(self):
        if self._tables is None:
            la = self.length // 2
            lb = self.length - la
            ta = baselines.load_or_build_table(
                la, self.alphabet, cache_dir=self.cache_dir, budget=self.budget, threads=self.threads
            )
            tb = ta if lb == la else baselines.load_or_build_table(
                lb, self.alphabet, cache_dir=self.cache_dir, budget=self.budget, threads=self.threads
            )
            self._tables = (ta, tb)
        return self._tables

    def __call__(self, matrix: np.ndarray) -> BasicApproximation:
        ta, tb = self._ensure_tables()
        report = baselines.mitm_search(matrix, ta, tb, threads=self.threads)
        self.evaluations += report.evaluations
        return BasicApproximation(word=report.best_word, matrix=evaluate(report.best_word))


class McEngine:
    def __init__(self, cfg: baselines.McConfig):
        self.cfg = cfg
        self.evaluations = 0

    @property
    def word_length(self) -> int:
        return self.cfg.word_length

    def __call__(self, matrix: np.ndarray) -> BasicApproximation:
        seed = derive_seed(self.cfg.rng_seed, su2_key(matrix))
        report = baselines.mc_anneal(matrix, replace(self.cfg, rng_seed=seed))
        self.evaluations += report.evaluations
        return BasicApproximation(word=report.best_word, matrix=evaluate(report.best_word))


class ExactEngine:
    """Matrix-only engine returning the target perturbed by a fixed-angle
    rotation about a seed-derived axis; used to probe the recursion's
    contraction independent of any braid search."""

    def __init__(self, perturbation_angle: float = 0.1, rng_seed: int = 0):
        self.perturbation_angle = perturbation_angle
        self.rng_seed = rng_seed
        self.evaluations = 0
        self.word_length = 0

    def __call__(self, matrix: np.ndarray) -> BasicApproximation:
        rng = np.random.default_rng(derive_seed(self.rng_seed, su2_key(matrix)))
        axis = rng.normal(size=3)
        approx = to_su2(matrix) @ rotation(axis, self.perturbation_angle)
        return BasicApproximation(word=None, matrix=approx)


# ---------------------------------------------------------------------------
# the recursion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SkConfig:
    depth: int
    base_length: int
    base_engine: object
    metric: str = "phase_invariant"
    use_cache: bool = True

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError("depth must be nonnegative")
        if self.base_length < 1:
            raise ValueError("base_length must be positive")
        if self.metric not in _METRICS:
            raise ValueError(f"metric must be one of {sorted(_METRICS)}")


@dataclass(eq=False)
class SkResult:
    word: np.ndarray | None
    distance: float
    order: int
    length: int
    child_distances: list[float]
    base_calls: int
    gate: str

    @property
    def non_monotonic_orders(self) -> list[int]:
        """Orders whose distance did not improve on the previous one."""
        return [
            k
            for k in range(1, len(self.child_distances))
            if self.child_distances[k] > self.child_distances[k - 1]
        ]


@dataclass(eq=False)
class _Node:
    word: np.ndarray | None
    matrix: np.ndarray
    chain: list[float]  # d(target-of-this-node, U_k) for k = 0..n


def solovay_kitaev(target, cfg: SkConfig) -> SkResult:
    """Compile `target` to depth cfg.depth over cfg.base_engine."""
    tmat = target_matrix(target)
    metric = _METRICS[cfg.metric]
    engine = cfg.base_engine
    if engine.word_length not in (0, cfg.base_length):
        raise ValueError("base engine word length disagrees with cfg.base_length")
    cache: dict = {}
    calls = [0]

    def compile_node(u: np.ndarray, n: int) -> _Node:
        key = (n, su2_key(u)) if cfg.use_cache else None
        if key is not None and key in cache:
            return cache[key]
        if n == 0:
            calls[0] += 1
            approx = engine(u)
            if approx.word is not None and len(approx.word) != cfg.base_length:
                raise ValueError(
                    f"base engine returned a word of length {len(approx.word)}, "
                    f"expected {cfg.base_length}"
                )
            node = _Node(approx.word, approx.matrix, [metric(u, approx.matrix)])
        else:
            prev = compile_node(u, n - 1)
            delta = u @ prev.matrix.conj().T
            try:
                pair = gc_decompose(delta)
            except GcDecomposeError as err:
                raise GcDecomposeError(err.distance, order=n) from None
            v_node = compile_node(pair.v, n - 1)
            w_node = compile_node(pair.w, n - 1)
            matrix = (
                v_node.matrix
                @ w_node.matrix
                @ v_node.matrix.conj().T
                @ w_node.matrix.conj().T
                @ prev.matrix
            )
            word = None
            if prev.word is not None and v_node.word is not None and w_node.word is not None:
                word = np.concatenate(
                    [
                        v_node.word,
                        w_node.word,
                        inverse_word(v_node.word),
                        inverse_word(w_node.word),
                        prev.word,
                    ]
                )
            node = _Node(word, matrix, prev.chain + [metric(u, matrix)])
        if key is not None:
            cache[key] = node
        return node

    root = compile_node(tmat, cfg.depth)
    if root.word is not None:
        distance = metric(tmat, evaluate(root.word))
    else:
        distance = metric(tmat, root.matrix)
    return SkResult(
        word=root.word,
        distance=distance,
        order=cfg.depth,
        length=cfg.base_length * 5**cfg.depth,
        child_distances=root.chain,
        base_calls=calls[0],
        gate=target_name(target),
    )


def sk_result_json(result: SkResult, l0: int) -> dict:
    """Result as a plain dict following the published schema."""
    data = {
        "schema": SK_RESULT_SCHEMA,
        "gate": result.gate,
        "l0": l0,
        "order": result.order,
        "length": result.length,
        "d": result.distance,
        "word": None if result.word is None else format_word(result.word),
        "child_distances": [float(x) for x in result.child_distances],
    }
    if result.word is not None:
        data["simplified_length"] = int(len(simplify(result.word)))
    data["non_monotonic_orders"] = result.non_monotonic_orders
    return data
