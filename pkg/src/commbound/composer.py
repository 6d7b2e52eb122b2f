"""Block-composed sign matrices and the witness matrices built from dual functions.

The composed function applies an outer Boolean f to n independent inner
evaluations g(x^i, y^i).  Tensor structure does the heavy lifting: the sign
matrix of a composed character is a Kronecker product of copies of M_g and
the all-ones matrix, and a strongly balanced g makes those products mutually
orthogonal, which yields the exact rank formula and the spectral-norm bounds
verified here.

Multi-index convention: block 1 is the most significant tensor factor, and
block i corresponds to bit i-1 of subset/point masks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .approx import DualWitness
from .boolfn import BoolFunction, character_sums
from .errors import ResourceLimitError
from .matrices import SignMatrix, balance_check, exact_rank, spectrum

DEFAULT_MEMORY_CAP = 2 ** 24  # entries per materialized matrix


@dataclass(frozen=True)
class Composition:
    f: BoolFunction
    g: SignMatrix
    n: int
    matrix: SignMatrix


@dataclass(frozen=True)
class WitnessMatrix:
    """Real matrix B certifying approximate-norm lower bounds for f o g^n."""

    B: np.ndarray
    source: DualWitness
    mu: np.ndarray | None
    l1: float
    correlation: float
    spectral_norm: float


@dataclass(frozen=True)
class OrthogonalityReport:
    n: int
    pairs_checked: int
    max_violation: int
    orthogonal: bool


@dataclass(frozen=True)
class RankTheoremReport:
    formula_rank: int
    composed_rank: int
    equal: bool
    inner_rank: int
    support: tuple


def _check_cap(rows: int, cols: int, memory_cap: int) -> None:
    need = rows * cols
    if need > memory_cap:
        raise ResourceLimitError(
            f"composed matrix needs {need} entries "
            f"({rows}x{cols}), above the cap of {memory_cap}")


def char_compose(T: int, g: SignMatrix, n: int,
                 memory_cap: int = DEFAULT_MEMORY_CAP) -> SignMatrix:
    """Sign matrix of chi_T composed with g^n: Kronecker factors M_g for
    blocks in T and all-ones otherwise, block 1 leftmost."""
    if T < 0 or T >= 2 ** n:
        raise ValueError(f"mask {T} does not fit in {n} bits")
    _check_cap(g.rows ** n, g.cols ** n, memory_cap)
    out = np.ones((1, 1), dtype=np.int64)
    for i in range(n):
        factor = g.entries if (T >> i) & 1 else np.ones(
            (g.rows, g.cols), dtype=np.int64)
        out = np.kron(out, factor)
    return SignMatrix(out)


def _pointwise_compose(f: BoolFunction, g: SignMatrix, n: int) -> np.ndarray:
    rows = g.rows ** n
    cols = g.cols ** n
    mask = np.zeros((rows, cols), dtype=np.int64)
    row_idx = np.arange(rows)
    col_idx = np.arange(cols)
    for i in range(n):
        xi = (row_idx // g.rows ** (n - 1 - i)) % g.rows
        yi = (col_idx // g.cols ** (n - 1 - i)) % g.cols
        zi = g.entries[np.ix_(xi, yi)]
        mask |= ((zi == -1).astype(np.int64)) << i
    return f.table[mask]


_EXACT_CHECK_LIMIT = 2 ** 16  # exhaustive dual-path comparison up to this size


def compose_block(f: BoolFunction, g: SignMatrix, n: int | None = None,
                  memory_cap: int = DEFAULT_MEMORY_CAP) -> Composition:
    """Materialize the sign matrix of f composed with g on n blocks.

    The matrix is built by direct pointwise evaluation; within the exhaustive
    check limit it is also rebuilt through the Fourier expansion
    sum_T f_hat[T] * char_compose(T) in exact integer arithmetic, and the two
    must agree entrywise.
    """
    if n is None:
        n = f.n
    if n != f.n:
        raise ValueError(f"block count {n} must equal the outer arity {f.n}")
    _check_cap(g.rows ** n, g.cols ** n, memory_cap)
    entries = _pointwise_compose(f, g, n)

    if entries.size <= _EXACT_CHECK_LIMIT:
        sums = character_sums(f)  # 2^n * f_hat[T], exact integers
        acc = np.zeros(entries.shape, dtype=np.int64)
        for T in range(2 ** n):
            if sums[T] == 0:
                continue
            acc += sums[T] * char_compose(T, g, n, memory_cap).entries
        if not np.array_equal(acc, entries * 2 ** n):
            raise RuntimeError(
                "Fourier-expansion and pointwise composition disagree; "
                "this indicates an internal indexing bug")

    return Composition(f=f, g=g, n=n, matrix=SignMatrix(entries))


def verify_orthogonality(g: SignMatrix, n: int,
                         memory_cap: int = DEFAULT_MEMORY_CAP) -> OrthogonalityReport:
    """Exact integer check that distinct composed characters are orthogonal.

    For every pair S != T of masks, both M_T M_S^dag and M_T^dag M_S must
    vanish identically.  Reports the largest absolute entry seen across all
    pairs (zero iff orthogonal).
    """
    mats = [char_compose(T, g, n, memory_cap).entries for T in range(2 ** n)]
    worst = 0
    pairs = 0
    for T in range(2 ** n):
        for S in range(T + 1, 2 ** n):
            left = np.abs(mats[T] @ mats[S].T).max()
            right = np.abs(mats[T].T @ mats[S]).max()
            worst = max(worst, int(left), int(right))
            pairs += 1
    return OrthogonalityReport(n=n, pairs_checked=pairs,
                               max_violation=worst, orthogonal=worst == 0)


def verify_rank_theorem(f: BoolFunction, g: SignMatrix,
                        memory_cap: int = DEFAULT_MEMORY_CAP) -> RankTheoremReport:
    """Compare the composed rank with sum of rk(M_g)^|T| over the spectrum support.

    Both sides are exact integers: the formula uses Bareiss rank of g, the
    left side Bareiss rank of the materialized composition.  Requires g
    strongly balanced (the formula does not hold otherwise).
    """
    if not balance_check(g).strongly_balanced:
        raise ValueError("inner matrix must be strongly balanced for the "
                         "rank formula to apply")
    rank_g = exact_rank(g)
    sums = character_sums(f)
    support = tuple(T for T in range(2 ** f.n) if sums[T] != 0)
    formula = sum(rank_g ** bin(T).count("1") for T in support)
    composed = compose_block(f, g, memory_cap=memory_cap)
    actual = exact_rank(composed.matrix)
    return RankTheoremReport(formula_rank=formula, composed_rank=actual,
                             equal=formula == actual, inner_rank=rank_g,
                             support=support)


def _kron_power(w: np.ndarray, n: int) -> np.ndarray:
    out = np.ones((1, 1))
    for _ in range(n):
        out = np.kron(out, w)
    return out


def build_witness(w: DualWitness, g: SignMatrix, mu=None,
                  memory_cap: int = DEFAULT_MEMORY_CAP) -> WitnessMatrix:
    """Compose the dual function with g^n and normalize into a witness matrix.

    Without mu (requires strongly balanced g):
        B[x,y] = (2^n / size(M_g)^n) * v(g(x^1,y^1), ..., g(x^n,y^n)).
    With a probability matrix mu balanced against g (sum mu*g = 0):
        B[x,y] = 2^n * v(g(...)) * prod_i mu(x^i, y^i).
    Either way ||B||_1 = 1 and <M_{f o g^n}, B> equals the witness correlation.
    """
    n = w.v.n
    _check_cap(g.rows ** n, g.cols ** n, memory_cap)

    if mu is None:
        if not balance_check(g).strongly_balanced:
            raise ValueError("witness construction without mu requires a "
                             "strongly balanced inner matrix")
        weights = None
        scale = (2.0 ** n) / float(g.size) ** n
        factor = 1.0
    else:
        weights = np.asarray(getattr(mu, "weights", mu), dtype=float)
        if weights.shape != (g.rows, g.cols):
            raise ValueError("mu must have the same shape as the inner matrix")
        if (weights < 0).any() or abs(weights.sum() - 1.0) > 1e-12:
            raise ValueError("mu must be a probability distribution")
        if abs(float((weights * g.entries).sum())) > 1e-9:
            raise ValueError("mu must be balanced with respect to g "
                             "(sum of mu*g must vanish)")
        scale = 2.0 ** n
        factor = _kron_power(weights, n)

    rows = g.rows ** n
    cols = g.cols ** n
    mask = np.zeros((rows, cols), dtype=np.int64)
    row_idx = np.arange(rows)
    col_idx = np.arange(cols)
    for i in range(n):
        xi = (row_idx // g.rows ** (n - 1 - i)) % g.rows
        yi = (col_idx // g.cols ** (n - 1 - i)) % g.cols
        zi = g.entries[np.ix_(xi, yi)]
        mask |= ((zi == -1).astype(np.int64)) << i
    B = scale * w.v.table[mask] * factor

    l1 = float(np.abs(B).sum())
    if abs(l1 - 1.0) > 1e-9:
        raise RuntimeError(
            f"witness l1 mass {l1} differs from 1; balance preconditions "
            "should have forced it")
    B.setflags(write=False)
    return WitnessMatrix(B=B, source=w, mu=weights, l1=l1,
                         correlation=w.correlation,
                         spectral_norm=spectrum(B).spectral_norm)


def witness_spectral_bound(w: DualWitness, g: SignMatrix) -> float:
    """Proof-side ceiling for ||B||: (||M_g||/sqrt(size))^d * size^(-n/2)."""
    sp = spectrum(g)
    ratio = sp.spectral_norm / np.sqrt(g.size)
    return float(ratio ** w.d * (1.0 / g.size) ** (w.v.n / 2.0))
