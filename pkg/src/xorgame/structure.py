"""Structure of optimal and near-optimal CHSH(n) strategies.

Optimal strategies are rigid: Schmidt coefficients come in equal blocks of
length 2^⌊n/2⌋, Alice's observables anticommute on the state's support, and
Bob's observables are the matched ±combinations of Alice's.  For strategies
that are only ε-optimal, an approximate intertwiner T maps the canonical
strategy into the given one with Frobenius-norm error O(n²√ε); this module
builds T, measures every residual, and checks the quantitative bounds.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .games import InvalidN, XorGame
from .linalg import (
    DimensionMismatch,
    frobenius,
    hermitian_eig,
    kron,
    matrix_to_vec,
    schmidt,
    sign_normalize,
    vec_to_matrix,
)
from .strategies import Observable, Strategy, bias, canonical_chshn

TSIRELSON_BIAS = 1.0 / np.sqrt(2.0)


class IndexOutOfRange(ValueError):
    """Observable index outside 1..n."""


@dataclass(frozen=True)
class BitString:
    """A length-n tuple of bits selecting which observables enter a product."""

    n: int
    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if len(bits) != self.n:
            raise DimensionMismatch(f"got {len(bits)} bits, expected {self.n}")
        if any(b not in (0, 1) for b in bits):
            raise ValueError(f"bits must be 0/1, got {bits!r}")
        object.__setattr__(self, "bits", bits)

    @staticmethod
    def all_strings(n: int) -> list["BitString"]:
        return [BitString(n, bits) for bits in itertools.product((0, 1), repeat=n)]


def chain_product(obs: list[Observable], j: BitString) -> np.ndarray:
    """Ordered product O_1^{j_1} ··· O_n^{j_n}; identity for the zero string."""
    if len(obs) != j.n:
        raise DimensionMismatch(f"got {len(obs)} observables for {j.n} bits")
    d = obs[0].dim if obs else 1
    acc = np.eye(d, dtype=complex)
    for o, b in zip(obs, j.bits):
        if o.dim != d:
            raise DimensionMismatch("observables have mixed dimensions")
        if b:
            acc = acc @ o.matrix
    return acc


def insertion_sign_left(i: int, j: BitString) -> int:
    """Sign picked up by moving one anticommuting factor from the left of a
    chain into slot i: (−1)^(number of set bits before i)."""
    if not 1 <= i <= j.n:
        raise IndexOutOfRange(f"i={i} outside 1..{j.n}")
    return -1 if sum(j.bits[: i - 1]) % 2 else 1


def insertion_sign_right(j: BitString, k: int) -> int:
    """Sign picked up by moving one anticommuting factor from the right of a
    chain into slot k: (−1)^(number of set bits after k)."""
    if not 1 <= k <= j.n:
        raise IndexOutOfRange(f"k={k} outside 1..{j.n}")
    return -1 if sum(j.bits[k:]) % 2 else 1


def canonical_vector_family(n: int) -> list[np.ndarray]:
    """The 2ⁿ orthonormal vectors (Ã^j ⊗ I)|ψ̃⟩ of the canonical strategy."""
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise InvalidN(f"need integer n >= 2, got {n!r}")
    ref = canonical_chshn(n)
    d = ref.d_A
    return [
        matrix_to_vec(chain_product(list(ref.alice), j)) / np.sqrt(d)
        for j in BitString.all_strings(n)
    ]


def build_intertwiner(s: Strategy, n: int) -> np.ndarray:
    """T = (1/√2ⁿ) Σ_j (A^j ⊗ I)|ψ⟩ ⟨ψ̃|(Ã^j ⊗ I)†, as a d_A·d_B × d² matrix.

    The reference vectors are orthonormal and each A^j is unitary, so
    ‖T‖_F = 1 for every valid strategy.
    """
    if len(s.alice) != n:
        raise DimensionMismatch(f"strategy has {len(s.alice)} Alice observables, expected {n}")
    mpsi = vec_to_matrix(s.state, s.d_A, s.d_B)
    strings = BitString.all_strings(n)
    alice = list(s.alice)
    x = np.column_stack(
        [matrix_to_vec(chain_product(alice, j) @ mpsi) for j in strings]
    )
    y = np.column_stack(canonical_vector_family(n))
    return (x @ y.conj().T) / np.sqrt(2.0**n)


@dataclass(frozen=True)
class IntertwinerReport:
    """T together with its per-observable intertwining residuals and bounds."""

    t: np.ndarray
    frob_norm: float
    alice_residuals: tuple[float, ...]
    bob_residuals: tuple[float, ...]
    epsilon: float
    alice_bound: float
    bob_bound: float
    bounds_hold: bool


def intertwiner_report(g: XorGame, s: Strategy, n: int) -> IntertwinerReport:
    """Build T and measure ‖(O⊗I)T − T(Õ⊗I)‖_F for every observable.

    ε is the bias deficit relative to 1/√2; residuals are compared against
    12n²√ε (Alice) and 17n²√ε (Bob) with a 1e-12 floating-point margin.
    """
    want_bob = n * (n - 1)
    if len(s.bob) != want_bob:
        raise DimensionMismatch(f"strategy has {len(s.bob)} Bob observables, expected {want_bob}")
    t = build_intertwiner(s, n)
    ref = canonical_chshn(n)
    d = ref.d_A
    eye_b = np.eye(s.d_B, dtype=complex)
    eye_a = np.eye(s.d_A, dtype=complex)
    eye_d = np.eye(d, dtype=complex)
    eps = max(0.0, 1.0 - bias(g, s) / TSIRELSON_BIAS)
    alice_res = tuple(
        frobenius(kron(s.alice[i].matrix, eye_b) @ t - t @ kron(ref.alice[i].matrix, eye_d))
        for i in range(n)
    )
    bob_res = tuple(
        frobenius(kron(eye_a, s.bob[j].matrix) @ t - t @ kron(eye_d, ref.bob[j].matrix))
        for j in range(want_bob)
    )
    a_bound = 12.0 * n * n * np.sqrt(eps)
    b_bound = 17.0 * n * n * np.sqrt(eps)
    holds = all(r <= a_bound + 1e-12 for r in alice_res) and all(
        r <= b_bound + 1e-12 for r in bob_res
    )
    return IntertwinerReport(
        t=t,
        frob_norm=frobenius(t),
        alice_residuals=alice_res,
        bob_residuals=bob_res,
        epsilon=eps,
        alice_bound=a_bound,
        bob_bound=b_bound,
        bounds_hold=holds,
    )


def anticommutation_residual(s: Strategy, n: int) -> float:
    """Σ_{i<j} ‖((A_iA_j + A_jA_i)/2 ⊗ I)|ψ⟩‖²; bounded by (1+√2)² n(n−1) ε."""
    if len(s.alice) != n:
        raise DimensionMismatch(f"strategy has {len(s.alice)} Alice observables, expected {n}")
    mpsi = vec_to_matrix(s.state, s.d_A, s.d_B)
    total = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            ac = (s.alice[i].matrix @ s.alice[j].matrix + s.alice[j].matrix @ s.alice[i].matrix) / 2.0
            total += float((np.abs(ac @ mpsi) ** 2).sum())
    return total


def _pair_columns(n: int):
    from .games import chshn_pair_order

    order = chshn_pair_order(n)
    return {ab: t for t, ab in enumerate(order)}


def ab_switch_check(s: Strategy, n: int, k: int) -> tuple[int, float]:
    """Best Bob-side surrogate for Alice's k-th observable.

    Minimizes ‖(A_k⊗I)|ψ⟩ − (I⊗N_l)|ψ⟩‖ over l ≠ k, where N_l is the
    sign-normalization of ±B_kl + B_lk (+ for k < l, − for k > l).  Returns
    the minimizing l and the deviation; bounded by (2√2+2)√n·√ε.
    """
    if not 1 <= k <= n:
        raise IndexOutOfRange(f"k={k} outside 1..{n}")
    if len(s.bob) != n * (n - 1):
        raise DimensionMismatch(f"strategy has {len(s.bob)} Bob observables, expected {n*(n-1)}")
    col = _pair_columns(n)
    mpsi = vec_to_matrix(s.state, s.d_A, s.d_B)
    ak = s.alice[k - 1].matrix
    best = None
    for l in range(1, n + 1):
        if l == k:
            continue
        sign = 1.0 if k < l else -1.0
        op = sign * s.bob[col[(k, l)]].matrix + s.bob[col[(l, k)]].matrix
        nrm = sign_normalize(op)
        dev = frobenius(ak @ mpsi - mpsi @ nrm.T)
        if best is None or dev < best[1]:
            best = (l, dev)
    return best


def normalization_lemma_check(
    r: Observable, s: Observable
) -> tuple[np.ndarray, np.ndarray, float]:
    """Closed form for the normalization error of (R+S)/√2.

    With C = (RS+SR)/2, the square of (R+S)/√2 − sgn(R+S) equals
    C·(2I + C + 2√(I+C))⁻¹·C, and that square is dominated by C².  Returns
    (lhs², rhs², min eigenvalue of C² − lhs²).

    Since (R+S)² = 2(I+C), the rhs is evaluated on the eigenbasis of R+S with
    √(1+λ_C) = |λ_{R+S}|/√2, which is exact even when R+S is nearly singular.
    """
    if r.dim != s.dim:
        raise DimensionMismatch(f"dimensions differ: {r.dim} vs {s.dim}")
    rm, sm = r.matrix, s.matrix
    c = (rm @ sm + sm @ rm) / 2.0
    total = rm + sm
    lhs = total / np.sqrt(2.0) - sign_normalize(total)
    lhs_sq = lhs @ lhs
    mu, vecs = hermitian_eig(total)
    lam = mu * mu / 2.0 - 1.0
    root = np.abs(mu) / np.sqrt(2.0)
    rhs_eigs = (lam / (1.0 + root)) ** 2
    rhs_sq = (vecs * rhs_eigs) @ vecs.conj().T
    gap = c @ c - lhs_sq
    gap_eigs, _ = hermitian_eig((gap + gap.conj().T) / 2.0)
    return lhs_sq, rhs_sq, float(gap_eigs[0].real)


@dataclass(frozen=True)
class StructureReport:
    """Deviations of a strategy from the rigid optimal CHSH(n) form."""

    schmidt_rank: int
    block_size: int
    rank_divisible: bool
    blocks_equal: bool
    blocks_max_deviation: float
    support_invariant_A: float
    support_invariant_B: float
    anticommute_on_support: float
    b_block_relation: float
    verdict: bool


def verify_optimal_form(s: Strategy, n: int, tol: float = 1e-8) -> StructureReport:
    """Check the rigid form of an optimal CHSH(n) strategy.

    Schmidt coefficients must be equal within blocks of 2^⌊n/2⌋ and the rank
    divisible by the block size; the observables must preserve the Schmidt
    supports, Alice's must anticommute there, and Bob's must act on the state
    as the matched (A_a ± A_b)/√2.
    """
    if len(s.alice) != n or len(s.bob) != n * (n - 1):
        raise DimensionMismatch(
            f"strategy has {len(s.alice)}x{len(s.bob)} observables, "
            f"expected {n}x{n*(n-1)}"
        )
    dec = schmidt(s.state, s.d_A, s.d_B)
    rank = dec.rank
    block = 2 ** (n // 2)
    divisible = rank % block == 0
    coeffs = np.sort(dec.coefficients)[::-1]
    blocks_dev = 0.0
    for start in range(0, rank, block):
        chunk = coeffs[start : start + block]
        blocks_dev = max(blocks_dev, float(chunk.max() - chunk.min()))
    blocks_equal = divisible and blocks_dev <= tol
    p_a = dec.left_basis @ dec.left_basis.conj().T
    p_b = dec.right_basis @ dec.right_basis.conj().T
    eye_a = np.eye(s.d_A, dtype=complex)
    eye_b = np.eye(s.d_B, dtype=complex)
    inv_a = max(
        frobenius((eye_a - p_a) @ o.matrix @ p_a) for o in s.alice
    )
    inv_b = max(
        frobenius((eye_b - p_b) @ o.matrix @ p_b) for o in s.bob
    )
    anti = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            ac = s.alice[i].matrix @ s.alice[j].matrix + s.alice[j].matrix @ s.alice[i].matrix
            anti = max(anti, frobenius(p_a @ ac @ p_a))
    col = _pair_columns(n)
    mpsi = vec_to_matrix(s.state, s.d_A, s.d_B)
    b_dev = 0.0
    for (a, b), t in col.items():
        if a < b:
            comb = (s.alice[a - 1].matrix + s.alice[b - 1].matrix) / np.sqrt(2.0)
        else:
            comb = (s.alice[b - 1].matrix - s.alice[a - 1].matrix) / np.sqrt(2.0)
        b_dev = max(b_dev, frobenius(comb @ mpsi - mpsi @ s.bob[t].matrix.T))
    verdict = (
        divisible
        and blocks_dev <= tol
        and inv_a <= tol
        and inv_b <= tol
        and anti <= tol
        and b_dev <= tol
    )
    return StructureReport(
        schmidt_rank=rank,
        block_size=block,
        rank_divisible=divisible,
        blocks_equal=blocks_equal,
        blocks_max_deviation=blocks_dev,
        support_invariant_A=float(inv_a),
        support_invariant_B=float(inv_b),
        anticommute_on_support=float(anti),
        b_block_relation=float(b_dev),
        verdict=bool(verdict),
    )
