"""XOR game matrices: validation, the CHSH(n) family, symmetrization, classical bias.

A two-player XOR game is stored as a real matrix G with Σ_st |G_st| = 1; entry
G_st carries both the referee's question distribution π(s,t) = |G_st| and the
winning sign V(s,t) = sign(G_st).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

NORMALIZATION_TOL = 1e-12


class NotNormalized(ValueError):
    """Absolute entries of a game matrix must sum to 1."""


class ZeroMatrix(ValueError):
    """All-zero matrix cannot be normalized into a game."""


class InvalidN(ValueError):
    """CHSH(n) requires n >= 2."""


class TooLarge(ValueError):
    """Brute-force enumeration guard exceeded."""


@dataclass(frozen=True)
class XorGame:
    """Normalized real game matrix with question-set sizes."""

    n_alice: int
    n_bob: int
    matrix: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (self.n_alice, self.n_bob) or m.size == 0:
            raise ValueError(f"matrix shape {m.shape} does not match {self.n_alice}x{self.n_bob}")
        if not np.all(np.isfinite(m)):
            raise ValueError("game matrix contains non-finite entries")
        total = np.abs(m).sum()
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise NotNormalized(f"sum of |entries| is {total!r}, must be 1 within {NORMALIZATION_TOL}")
        object.__setattr__(self, "matrix", m)


def new_game(matrix, normalize: bool = False, labels: tuple[str, ...] | None = None) -> XorGame:
    """Validate a real matrix as an XOR game; optionally rescale to unit ℓ1 mass."""
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.size == 0:
        raise ValueError(f"game matrix must be non-empty 2-d, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("game matrix contains non-finite entries")
    total = np.abs(m).sum()
    if total == 0.0:
        raise ZeroMatrix("all entries are zero; normalization impossible")
    if normalize:
        m = m / total
    return XorGame(m.shape[0], m.shape[1], m, labels)


@dataclass(frozen=True)
class ChshnIndex:
    """Column order for Bob's ordered-pair questions in CHSH(n).

    Unordered pairs ascend lexicographically and each emits (i,j) then (j,i):
    (1,2),(2,1),(1,3),(3,1),...,(n-1,n),(n,n-1).
    """

    n: int
    pairs: tuple[tuple[int, int], ...]
    _col_of: dict = field(repr=False, hash=False, compare=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "_col_of", {p: c for c, p in enumerate(self.pairs)})

    def column(self, i: int, j: int) -> int:
        return self._col_of[(i, j)]

    def pair(self, column: int) -> tuple[int, int]:
        return self.pairs[column]


def chshn_pair_order(n: int) -> tuple[tuple[int, int], ...]:
    pairs = []
    for i, j in itertools.combinations(range(1, n + 1), 2):
        pairs.append((i, j))
        pairs.append((j, i))
    return tuple(pairs)


def chsh_game(n: int) -> tuple[XorGame, ChshnIndex]:
    """The CHSH(n) game: Alice gets i ∈ {1..n}, Bob an ordered pair (i,j).

    Each unordered pair {i<j} contributes weight 1/(4·C(n,2)) to the four
    cells (i,(i,j)), (j,(i,j)), (i,(j,i)) and -1/(4·C(n,2)) to (j,(j,i)).
    """
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise InvalidN(f"CHSH(n) needs integer n >= 2, got {n!r}")
    pairs = chshn_pair_order(n)
    index = ChshnIndex(int(n), pairs)
    w = 1.0 / (2 * n * (n - 1))
    m = np.zeros((n, len(pairs)))
    for c, (a, b) in enumerate(pairs):
        i, j = min(a, b), max(a, b)
        m[i - 1, c] = w
        m[j - 1, c] = w if a < b else -w
    labels = tuple(f"{a},{b}" for a, b in pairs)
    return XorGame(int(n), len(pairs), m, labels), index


def symmetrize(g: XorGame) -> np.ndarray:
    """The symmetric objective [[0, G/2], [Gᵀ/2, 0]] fed to the SDP."""
    n, m = g.n_alice, g.n_bob
    out = np.zeros((n + m, n + m))
    out[:n, n:] = g.matrix / 2
    out[n:, :n] = g.matrix.T / 2
    return out


def classical_bias(g: XorGame) -> float:
    """Best deterministic bias max_{a,b ∈ {±1}} Σ G_st a_s b_t by enumeration."""
    if g.n_alice + g.n_bob > 24:
        raise TooLarge(f"{g.n_alice}+{g.n_bob} questions exceed the enumeration guard of 24")
    best = -np.inf
    for bits in itertools.product((-1.0, 1.0), repeat=g.n_alice):
        row = np.asarray(bits) @ g.matrix
        best = max(best, float(np.abs(row).sum()))
    return best
