"""Approximate polynomial degree via LP, and the dual witness that certifies it.

The primal side finds, for each candidate degree d, the best sup-norm
approximation of f by polynomials of degree at most d (a Chebyshev LP).  The
dual side produces a point function v with unit l1 mass, zero correlation
with every character below degree d, and correlation at least epsilon with f.
All inner products here are plain sums over the 2^n points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boolfn import BoolFunction, FourierSpectrum, RealPointFunction, wht
from .simplex import OPTIMAL, SimplexError, solve_lp

ORTHOGONALITY_SLACK = 1e-8
L1_SLACK = 1e-9
CORRELATION_SLACK = 1e-8
_FEAS_TOL = 1e-9


@dataclass(frozen=True)
class DualWitness:
    """Certificate that deg_epsilon(f) >= d (see verify_dual for the checks)."""

    v: RealPointFunction
    d: int
    epsilon: float
    correlation: float
    l1: float


@dataclass(frozen=True)
class ApproxDegreeResult:
    d: int
    approximant: FourierSpectrum
    max_error: float
    lp_status: str


@dataclass(frozen=True)
class DualCheck:
    orthogonality_max: float
    orthogonality_ok: bool
    l1: float
    l1_ok: bool
    correlation: float
    correlation_margin: float
    correlation_ok: bool

    @property
    def ok(self) -> bool:
        return self.orthogonality_ok and self.l1_ok and self.correlation_ok


def _character_matrix(n: int, masks) -> np.ndarray:
    """Rows chi_T over all 2^n points, for T in masks."""
    N = 2 ** n
    out = np.empty((len(masks), N))
    xs = np.arange(N)
    for k, T in enumerate(masks):
        bits = np.zeros(N, dtype=np.int64)
        v = xs & T
        while v.any():
            bits += v & 1
            v >>= 1
        out[k] = np.where(bits % 2 == 1, -1.0, 1.0)
    return out


def _masks_up_to_degree(n: int, d: int) -> list[int]:
    return [T for T in range(2 ** n) if bin(T).count("1") <= d]


def best_approximation(f: BoolFunction, d: int) -> tuple[float, FourierSpectrum]:
    """Minimal sup-norm error over real polynomials of degree <= d (Chebyshev LP).

    Variables are the coefficients (split into positive/negative parts) plus
    the error bound; constraints are two inequalities per point.
    """
    n = f.n
    N = 2 ** n
    masks = _masks_up_to_degree(n, d)
    chi = _character_matrix(n, masks)  # k x N
    k = len(masks)
    # columns: c+ (k), c- (k), delta
    A_ub = np.zeros((2 * N, 2 * k + 1))
    b_ub = np.zeros(2 * N)
    fv = f.table.astype(float)
    # f(x) - p(x) <= delta   and   p(x) - f(x) <= delta
    A_ub[:N, :k] = -chi.T
    A_ub[:N, k:2 * k] = chi.T
    A_ub[:N, -1] = -1.0
    b_ub[:N] = -fv
    A_ub[N:, :k] = chi.T
    A_ub[N:, k:2 * k] = -chi.T
    A_ub[N:, -1] = -1.0
    b_ub[N:] = fv
    c = np.zeros(2 * k + 1)
    c[-1] = 1.0
    res = solve_lp(c, A_ub=A_ub, b_ub=b_ub)
    if res.status != OPTIMAL:
        raise SimplexError(f"Chebyshev LP at degree {d} returned {res.status}")
    coeffs = np.zeros(N)
    raw = res.x[:k] - res.x[k:2 * k]
    for idx, T in enumerate(masks):
        coeffs[T] = raw[idx]
    return float(res.x[-1]), FourierSpectrum(n=n, coeffs=tuple(coeffs))


def error_profile(f: BoolFunction) -> list[float]:
    """Best achievable sup-norm error at every degree 0..n."""
    return [best_approximation(f, d)[0] for d in range(f.n + 1)]


def approx_degree(f: BoolFunction, epsilon: float) -> ApproxDegreeResult:
    """Smallest d whose degree-<=d Chebyshev LP is feasible at error epsilon.

    epsilon = 0 takes the exact path: the transform itself is the (unique)
    errorless approximant at the exact degree.
    """
    if not 0 <= epsilon < 1:
        raise ValueError(f"epsilon must lie in [0, 1), got {epsilon}")
    if epsilon == 0:
        from .boolfn import degree as exact_degree

        d = exact_degree(f)
        return ApproxDegreeResult(d=d, approximant=wht(f), max_error=0.0,
                                  lp_status="exact")
    for d in range(f.n + 1):
        err, approximant = best_approximation(f, d)
        if err <= epsilon + _FEAS_TOL:
            return ApproxDegreeResult(d=d, approximant=approximant,
                                      max_error=err, lp_status="optimal")
    raise SimplexError(
        "no feasible degree found; the full-degree LP should always be exact")


def dual_polynomial(f: BoolFunction, epsilon: float) -> DualWitness:
    """Solve the dual LP for the degree certificate witness.

    Maximizes sum_x v(x) f(x) subject to sum_x |v(x)| <= 1 and plain-sum
    orthogonality to every character below the certified degree d.  The LP
    leaves ||v||_1 <= 1; the witness is rescaled to ||v||_1 = 1, which keeps
    orthogonality and can only raise the correlation.
    """
    if not 0 <= epsilon < 1:
        raise ValueError(f"epsilon must lie in [0, 1), got {epsilon}")
    n = f.n
    N = 2 ** n
    d = approx_degree(f, epsilon).d
    low_masks = [T for T in range(N) if bin(T).count("1") < d]
    chi = _character_matrix(n, low_masks) if low_masks else np.zeros((0, N))
    # variables: v+ (N), v- (N)
    A_eq = np.hstack([chi, -chi]) if low_masks else None
    b_eq = np.zeros(len(low_masks)) if low_masks else None
    A_ub = np.ones((1, 2 * N))
    b_ub = np.array([1.0])
    fv = f.table.astype(float)
    c = np.concatenate([-fv, fv])  # maximize sum v f
    res = solve_lp(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq)
    if res.status != OPTIMAL:
        raise SimplexError(
            f"dual LP at degree {d} unexpectedly returned {res.status}")
    v = res.x[:N] - res.x[N:]
    l1 = float(np.abs(v).sum())
    if l1 <= 0:
        raise SimplexError("dual LP returned the zero witness")
    v = v / l1
    correlation = float(v @ fv)
    return DualWitness(v=RealPointFunction(n, v), d=d, epsilon=epsilon,
                       correlation=correlation, l1=float(np.abs(v).sum()))


def verify_dual(w: DualWitness, f: BoolFunction) -> DualCheck:
    """Re-check the three witness properties independently of the LP."""
    if w.v.n != f.n:
        raise ValueError(f"arity mismatch: witness {w.v.n}, function {f.n}")
    n = f.n
    N = 2 ** n
    v = w.v.table
    low_masks = [T for T in range(N) if bin(T).count("1") < w.d]
    if low_masks:
        chi = _character_matrix(n, low_masks)
        orth_max = float(np.abs(chi @ v).max())
    else:
        orth_max = 0.0
    l1 = float(np.abs(v).sum())
    corr = float(v @ f.table.astype(float))
    return DualCheck(
        orthogonality_max=orth_max,
        orthogonality_ok=orth_max <= ORTHOGONALITY_SLACK,
        l1=l1,
        l1_ok=l1 <= 1.0 + L1_SLACK,
        correlation=corr,
        correlation_margin=corr - w.epsilon,
        correlation_ok=corr >= w.epsilon - CORRELATION_SLACK,
    )
