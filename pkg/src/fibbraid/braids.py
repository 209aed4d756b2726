"""Exact algebra of Fibonacci-anyon braid generators and distance metrics.

The two elementary braid matrices are

    sigma_1 = diag(e^{-i 4pi/5}, e^{i 3pi/5})
    sigma_2 = [[-phi e^{-i pi/5},   sqrt(phi) e^{-i 3pi/5}],
               [sqrt(phi) e^{-i 3pi/5},  -phi]]

with phi = (sqrt(5)-1)/2 the golden-ratio conjugate (phi^2 + phi = 1, which
makes sigma_2 unitary).  Their inverses are the conjugate transposes.

Braid words are stored as uint8 arrays of generator indices; the text format
maps 'A' = sigma_1, 'a' = sigma_1^{-1}, 'B' = sigma_2, 'b' = sigma_2^{-1}.
A word evaluates to the ordered matrix product with letters[0] as the
leftmost factor.  All functions treat their array arguments as immutable.

Two error metrics are provided:

  * distance_phase_invariant(U0, U) = sqrt(1 - |Tr(U0 U^dag)| / 2), the
    global-phase-invariant distance used as the search fitness everywhere.
  * distance_quaternion(a, b)       = sqrt(1 - |<q_a, q_b>|) on the unit
    quaternions of the SU(2) projections (coincides with the former on
    unitary inputs; kept for cross-checking against rotation metrics).

The trace formula cannot resolve distances below ~1e-8 in double precision
(the sqrt amplifies the ~1e-16 trace rounding), so the scalar metrics fall
back to distance_angular -- the same quantity computed via the relative
rotation angle, accurate to ~1e-16 -- once the radicand drops below 1e-10.
The batched distance_many keeps the plain trace formula: it only ranks
search candidates, whose distances sit far above the floor.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

PHI = (math.sqrt(5.0) - 1.0) / 2.0

LETTERS = "AaBb"


class Generator(IntEnum):
    """The four elementary braids; even/odd pairs are mutual inverses."""

    SIGMA1 = 0
    SIGMA1_INV = 1
    SIGMA2 = 2
    SIGMA2_INV = 3

    @property
    def letter(self) -> str:
        return LETTERS[self]

    @property
    def inverse(self) -> "Generator":
        return Generator(self ^ 1)


def _build_generator_matrices() -> np.ndarray:
    s1 = np.array(
        [[np.exp(-4j * math.pi / 5), 0.0], [0.0, np.exp(3j * math.pi / 5)]],
        dtype=complex,
    )
    s2 = np.array(
        [
            [-PHI * np.exp(-1j * math.pi / 5), math.sqrt(PHI) * np.exp(-3j * math.pi / 5)],
            [math.sqrt(PHI) * np.exp(-3j * math.pi / 5), -PHI],
        ],
        dtype=complex,
    )
    return np.stack([s1, s1.conj().T, s2, s2.conj().T])


GENERATOR_MATRICES = _build_generator_matrices()
GENERATOR_MATRICES.setflags(write=False)

_IDENTITY = np.eye(2, dtype=complex)

_SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
_SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def generator_matrix(g: Generator | int) -> np.ndarray:
    """Return the 2x2 matrix of one elementary braid (a fresh copy)."""
    return GENERATOR_MATRICES[int(g)].copy()


# ---------------------------------------------------------------------------
# words: parsing, formatting, elementary rewriting
# ---------------------------------------------------------------------------

_LETTER_TO_INDEX = {c: i for i, c in enumerate(LETTERS)}


def parse_word(text: str) -> np.ndarray:
    """Parse the text format ('A'=s1, 'a'=s1^-1, 'B'=s2, 'b'=s2^-1).

    Raises ValueError naming the first offending character position.
    """
    out = np.empty(len(text), dtype=np.uint8)
    for i, c in enumerate(text):
        idx = _LETTER_TO_INDEX.get(c)
        if idx is None:
            raise ValueError(f"invalid braid letter {c!r} at position {i}")
        out[i] = idx
    return out


def format_word(word: np.ndarray) -> str:
    return "".join(LETTERS[int(g)] for g in np.asarray(word, dtype=np.uint8))


def as_word(word) -> np.ndarray:
    """Coerce a str / sequence of letters to a uint8 generator-index array."""
    if isinstance(word, str):
        return parse_word(word)
    arr = np.asarray(word, dtype=np.uint8)
    if arr.ndim != 1:
        raise ValueError("a braid word must be one-dimensional")
    if arr.size and arr.max() > 3:
        raise ValueError("generator indices must be in 0..3")
    return arr


def parse_alphabet(text: str) -> str:
    """Canonicalize an alphabet string: unique letters, generator-index order."""
    indices = sorted({int(i) for i in parse_word(text)})
    if not indices:
        raise ValueError("alphabet must be nonempty")
    return "".join(LETTERS[i] for i in indices)


def alphabet_indices(alphabet: str) -> np.ndarray:
    """Generator indices of a (canonicalized) alphabet."""
    return parse_word(parse_alphabet(alphabet))


def inverse_word(word) -> np.ndarray:
    """Reverse the word and invert each letter; evaluates to the dagger."""
    w = as_word(word)
    return (w[::-1] ^ 1).astype(np.uint8)


def simplify(word) -> np.ndarray:
    """Cancel adjacent inverse pairs until none remain (single stack pass)."""
    w = as_word(word)
    stack: list[int] = []
    for g in w:
        if stack and stack[-1] == int(g) ^ 1:
            stack.pop()
        else:
            stack.append(int(g))
    return np.array(stack, dtype=np.uint8)


# ---------------------------------------------------------------------------
# word evaluation
# ---------------------------------------------------------------------------

# Products of all 4^5 five-letter blocks, precomputed once.  Evaluating via
# block lookup + pairwise tree keeps the association fixed (deterministic
# floats independent of batch size or thread count).
_CHUNK = 5
_CHUNK_POWERS = (4 ** np.arange(_CHUNK - 1, -1, -1)).astype(np.int64)


def _build_chunk_table() -> np.ndarray:
    table = np.empty((4**_CHUNK, 2, 2), dtype=complex)
    for code in range(4**_CHUNK):
        m = _IDENTITY
        for shift in range(2 * (_CHUNK - 1), -2, -2):
            m = m @ GENERATOR_MATRICES[(code >> shift) & 3]
        table[code] = m
    table.setflags(write=False)
    return table


_CHUNK_TABLE = _build_chunk_table()


def _tree_product(mats: np.ndarray) -> np.ndarray:
    """Ordered product along axis 1 by pairwise halving."""
    while mats.shape[1] > 1:
        if mats.shape[1] % 2:
            last = mats[:, -1:]
            mats = np.concatenate([np.matmul(mats[:, 0:-1:2], mats[:, 1::2]), last], axis=1)
        else:
            mats = np.matmul(mats[:, 0::2], mats[:, 1::2])
    return mats[:, 0]


def _evaluate_block(words: np.ndarray) -> np.ndarray:
    n, length = words.shape
    if length == 0:
        return np.broadcast_to(_IDENTITY, (n, 2, 2)).copy()
    nfull, rem = divmod(length, _CHUNK)
    parts = []
    if nfull:
        codes = words[:, : nfull * _CHUNK].reshape(n, nfull, _CHUNK).astype(np.int64) @ _CHUNK_POWERS
        parts.append(_CHUNK_TABLE[codes])
    if rem:
        parts.append(GENERATOR_MATRICES[words[:, nfull * _CHUNK :]])
    mats = parts[0] if len(parts) == 1 else np.concatenate(parts, axis=1)
    return _tree_product(mats)


_EVAL_BLOCK_ROWS = 1 << 13  # fixed split so results never depend on threads


def evaluate_many(words: np.ndarray, threads: int = 1) -> np.ndarray:
    """Evaluate a batch of equal-length words, shape (n, L) -> (n, 2, 2)."""
    words = np.asarray(words, dtype=np.uint8)
    if words.ndim != 2:
        raise ValueError("expected a 2-d batch of words")
    n = words.shape[0]
    if threads <= 1 or n <= _EVAL_BLOCK_ROWS:
        return _evaluate_block(words)
    blocks = [words[i : i + _EVAL_BLOCK_ROWS] for i in range(0, n, _EVAL_BLOCK_ROWS)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(_evaluate_block, blocks))
    return np.concatenate(results, axis=0)


def evaluate(word) -> np.ndarray:
    """Ordered product of the word's generator matrices; [] -> identity."""
    return evaluate_many(as_word(word)[None, :])[0]


# ---------------------------------------------------------------------------
# unitary helpers
# ---------------------------------------------------------------------------


def is_unitary(u: np.ndarray, tol: float = 1e-12) -> bool:
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        return False
    if np.abs(u @ u.conj().T - _IDENTITY).max() > tol:
        return False
    return abs(abs(np.linalg.det(u)) - 1.0) <= tol


def to_su2(u: np.ndarray) -> np.ndarray:
    """Strip the global phase: u / sqrt(det u), sign fixed to Re(trace) >= 0."""
    u = np.asarray(u, dtype=complex)
    v = u / np.sqrt(np.linalg.det(u))
    if np.real(v[0, 0] + v[1, 1]) < 0.0:
        v = -v
    return v


def to_su2_many(us: np.ndarray) -> np.ndarray:
    us = np.asarray(us, dtype=complex)
    dets = us[:, 0, 0] * us[:, 1, 1] - us[:, 0, 1] * us[:, 1, 0]
    vs = us / np.sqrt(dets)[:, None, None]
    flip = np.real(vs[:, 0, 0] + vs[:, 1, 1]) < 0.0
    vs[flip] *= -1.0
    return vs


def su2_key(u: np.ndarray, resolution: float = 1e-9) -> tuple[int, ...]:
    """Canonical integer key of a unitary: SU(2) projection rounded entrywise.

    Words whose matrices agree up to global phase share a key; distinct braid
    matrices at the lengths we enumerate are separated by far more than the
    resolution, so key collisions mean algebraic equality.
    """
    v = to_su2(u)
    comps = np.concatenate([v.real.ravel(), v.imag.ravel()])
    return tuple(int(x) for x in np.rint(comps / resolution).astype(np.int64))


def su2_keys_many(us: np.ndarray, resolution: float = 1e-9) -> np.ndarray:
    """Batch form of su2_key; rows use the same component order."""
    vs = to_su2_many(us)
    comps = np.concatenate([vs.real.reshape(-1, 4), vs.imag.reshape(-1, 4)], axis=1)
    return np.rint(comps / resolution).astype(np.int64)


# ---------------------------------------------------------------------------
# distances
# ---------------------------------------------------------------------------


# Below this radicand (d < 1e-5) the trace formula only measures its own
# rounding, so the scalar distance switches to the equivalent angular form.
_TRACE_FORM_FLOOR = 1e-10


def distance_phase_invariant(u0: np.ndarray, u: np.ndarray) -> float:
    """Global-phase-invariant distance sqrt(1 - |Tr(U0 U^dag)| / 2) in [0, 1].

    Near-identical arguments are re-measured through the relative rotation
    angle (same quantity, stable floats), so d(U, e^{i theta} U) is ~1e-16
    instead of the trace formula's sqrt-of-rounding ~1e-8.
    """
    u0 = np.asarray(u0, dtype=complex)
    u = np.asarray(u, dtype=complex)
    tr = abs(np.vdot(u, u0))  # vdot conjugates u: sum conj(u_ij) u0_ij = Tr(U0 U^dag)
    radicand = min(max(1.0 - tr / 2.0, 0.0), 1.0)
    if radicand < _TRACE_FORM_FLOOR:
        return distance_angular(u0, u)
    return math.sqrt(radicand)


def distance_many(target: np.ndarray, us: np.ndarray) -> np.ndarray:
    """Phase-invariant distances of a (n, 2, 2) batch to one target."""
    target = np.asarray(target, dtype=complex)
    us = np.asarray(us, dtype=complex)
    tr = np.abs(us.reshape(len(us), 4).conj() @ target.reshape(4))
    return np.sqrt(np.clip(1.0 - tr / 2.0, 0.0, 1.0))


def axis_angle(u: np.ndarray) -> tuple[float, np.ndarray]:
    """Rotation angle in [0, pi] and unit axis of an SU(2) matrix.

    Callers must pass det = 1 input (use to_su2 first); the axis of the
    identity is (0, 0, 1) by convention.
    """
    u = np.asarray(u, dtype=complex)
    w = (u[0, 0].real + u[1, 1].real) / 2.0
    v = np.array(
        [
            -(u[0, 1].imag + u[1, 0].imag) / 2.0,
            (u[1, 0].real - u[0, 1].real) / 2.0,
            -(u[0, 0].imag - u[1, 1].imag) / 2.0,
        ]
    )
    s = float(np.linalg.norm(v))
    theta = 2.0 * math.atan2(s, w)
    if s == 0.0:
        return theta, np.array([0.0, 0.0, 1.0])
    return theta, v / s


def rotation(axis, angle: float) -> np.ndarray:
    """SU(2) rotation by `angle` about the (not necessarily unit) `axis`."""
    n = np.asarray(axis, dtype=float)
    n = n / np.linalg.norm(n)
    return (
        math.cos(angle / 2.0) * _IDENTITY
        - 1j * math.sin(angle / 2.0) * (n[0] * _SIGMA_X + n[1] * _SIGMA_Y + n[2] * _SIGMA_Z)
    )


def distance_angular(a: np.ndarray, b: np.ndarray) -> float:
    """distance_phase_invariant computed as sqrt(2)|sin(lambda/4)| from the
    relative rotation angle lambda; resolves near-identity separations that
    the trace formula loses to rounding."""
    m = to_su2(np.asarray(a, dtype=complex)).conj().T @ to_su2(np.asarray(b, dtype=complex))
    lam, _ = axis_angle(to_su2(m))
    return math.sqrt(2.0) * abs(math.sin(lam / 4.0))


# ---------------------------------------------------------------------------
# quaternions
# ---------------------------------------------------------------------------


def to_quaternion(u: np.ndarray) -> np.ndarray:
    """Unit quaternion (w, x, y, z) with u = w I - i(x sx + y sy + z sz).

    Requires det(u) = 1 (project with to_su2 first); raises otherwise.
    """
    u = np.asarray(u, dtype=complex)
    if abs(np.linalg.det(u) - 1.0) > 1e-9:
        raise ValueError("to_quaternion requires det = 1; apply to_su2 first")
    return np.array(
        [
            (u[0, 0].real + u[1, 1].real) / 2.0,
            -(u[0, 1].imag + u[1, 0].imag) / 2.0,
            (u[1, 0].real - u[0, 1].real) / 2.0,
            -(u[0, 0].imag - u[1, 1].imag) / 2.0,
        ]
    )


def quaternion_to_matrix(q: np.ndarray) -> np.ndarray:
    w, x, y, z = np.asarray(q, dtype=float)
    return w * _IDENTITY - 1j * (x * _SIGMA_X + y * _SIGMA_Y + z * _SIGMA_Z)


def distance_quaternion(a: np.ndarray, b: np.ndarray) -> float:
    """sqrt(1 - |<q_a, q_b>|); |.| absorbs the q ~ -q double cover.

    On unitary inputs this coincides with distance_phase_invariant
    (|Tr(a b^dag)| = 2 |<q_a, q_b>| on SU(2)); the same angular form covers
    the near-zero regime.
    """
    qa = to_quaternion(to_su2(a))
    qb = to_quaternion(to_su2(b))
    inner = abs(float(np.dot(qa, qb)))
    radicand = min(max(1.0 - inner, 0.0), 1.0)
    if radicand < _TRACE_FORM_FLOOR:
        return distance_angular(a, b)
    return math.sqrt(radicand)


def quaternion_inner_sign(a: np.ndarray, b: np.ndarray) -> int:
    """Sign of the (branch-dependent) quaternion inner product.

    -1 marks pairs where dropping the absolute value in distance_quaternion
    would change the result.
    """
    qa = to_quaternion(to_su2(a))
    qb = to_quaternion(to_su2(b))
    return -1 if float(np.dot(qa, qb)) < 0.0 else 1


# ---------------------------------------------------------------------------
# target gates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GateTarget:
    """A named compilation target; `matrix` must be unitary."""

    name: str
    matrix: np.ndarray

    def __post_init__(self):
        if not is_unitary(self.matrix, tol=1e-10):
            raise ValueError(f"gate {self.name!r}: matrix is not unitary")


_STANDARD_GATES = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0),
    "T": np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]], dtype=complex),
}


def standard_gate(name: str) -> GateTarget:
    """X, H or T with its textbook matrix."""
    try:
        matrix = _STANDARD_GATES[name]
    except KeyError:
        raise ValueError(f"unknown gate {name!r}; expected one of X, H, T") from None
    return GateTarget(name=name, matrix=matrix.copy())


def custom_gate(matrix: np.ndarray, name: str = "custom") -> GateTarget:
    return GateTarget(name=name, matrix=np.asarray(matrix, dtype=complex))


def target_matrix(target) -> np.ndarray:
    """Accept a GateTarget or a bare 2x2 array and return the matrix."""
    if isinstance(target, GateTarget):
        return target.matrix
    m = np.asarray(target, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError("target must be a GateTarget or a 2x2 matrix")
    return m


def target_name(target) -> str:
    return target.name if isinstance(target, GateTarget) else "custom"
