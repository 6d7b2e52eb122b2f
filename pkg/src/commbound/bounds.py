"""Complexity-measure evaluators: discrepancy, dual-norm enclosures, and the
lower-bound main terms for composed functions.

Discrepancy is computed exactly by enumerating row subsets (the column side
has a closed form for fixed rows).  The dual factorization norm is never
computed directly; a certified enclosure [disc, K_G * disc] from
Grothendieck's inequality replaces it, with K_G over-approximated by 1.7823.
Every theorem evaluator reports a main term only: unquantified additive
constants are excluded and flagged in the warnings list.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .approx import approx_degree
from .boolfn import BoolFunction
from .composer import WitnessMatrix
from .errors import ResourceLimitError
from .matrices import SignMatrix, balance_check, exact_rank, spectrum

#: Documented upper bound on Grothendieck's constant (1.78...).
GROTHENDIECK_UPPER = 1.7823

DEFAULT_ENUMERATION_CAP = 24

OMITTED_CONSTANT_WARNING = "additive O(1) constant omitted from main_term"


class DistributionMatrix:
    """Probability distribution on the entries of a matrix."""

    __slots__ = ("weights",)

    def __init__(self, weights):
        arr = np.asarray(weights, dtype=float)
        if arr.ndim != 2:
            raise ValueError("distribution must be a 2-d array")
        if (arr < 0).any():
            raise ValueError("distribution entries must be nonnegative")
        if abs(arr.sum() - 1.0) > 1e-12:
            raise ValueError(f"distribution must sum to 1, got {arr.sum()!r}")
        arr = arr.copy()
        arr.setflags(write=False)
        self.weights = arr

    @property
    def rows(self) -> int:
        return self.weights.shape[0]

    @property
    def cols(self) -> int:
        return self.weights.shape[1]

    @classmethod
    def uniform(cls, rows: int, cols: int) -> "DistributionMatrix":
        return cls(np.full((rows, cols), 1.0 / (rows * cols)))

    @classmethod
    def from_text(cls, text: str) -> "DistributionMatrix":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        m, n = (int(t) for t in lines[0].split())
        rows = [[float(t) for t in ln.split()] for ln in lines[1:1 + m]]
        arr = np.asarray(rows)
        if arr.shape != (m, n):
            raise ValueError("distribution grid does not match its header")
        return cls(arr)


@dataclass
class BoundReport:
    """Evaluated lower-bound main term with intermediates and warnings."""

    theorem: str
    applicable: bool
    main_term: float | None
    intermediates: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)


@dataclass(frozen=True)
class SpectralDiscCert:
    """Candidate certificate (submatrix, distribution, r) for spectral discrepancy."""

    row_indices: tuple
    col_indices: tuple
    mu: DistributionMatrix
    r: float


@dataclass(frozen=True)
class SpectralDiscReport:
    balance_residual: float
    balanced: bool
    cond2_value: float
    cond2_ok: bool
    cond3_value: float
    cond3_ok: bool
    minimal_r: float


@dataclass(frozen=True)
class ShaltielReport:
    lhs: float
    disc: float
    ok: bool


@dataclass(frozen=True)
class ApproxNormBound:
    trace_lb: float
    gamma2_lb: float
    qcc_main_term: float | None
    applicable: bool


def discrepancy(A: SignMatrix, P: DistributionMatrix,
                cap: int = DEFAULT_ENUMERATION_CAP) -> float:
    """Exact discrepancy max_{x,y in {0,1}} |x (A*P) y| by row-subset enumeration.

    For a fixed row subset the optimal column subset takes either all positive
    or all negative column sums, so only 2^rows cases are enumerated (Gray
    code, one row toggled per step).
    """
    if (A.rows, A.cols) != (P.rows, P.cols):
        raise ValueError("matrix and distribution dimensions must match")
    m = A.rows
    if m > cap:
        raise ResourceLimitError(
            f"discrepancy enumeration needs 2^{m} row subsets (cap 2^{cap}); "
            "fall back to the bound disc <= ||A||/sqrt(size(A))")
    W = A.entries * P.weights
    col = np.zeros(A.cols)
    best = 0.0
    prev = 0
    for k in range(1, 2 ** m):
        gray = k ^ (k >> 1)
        bit = gray ^ prev
        row = bit.bit_length() - 1
        if gray & bit:
            col += W[row]
        else:
            col -= W[row]
        prev = gray
        pos = col[col > 0].sum()
        neg = -col[col < 0].sum()
        val = max(pos, neg)
        if val > best:
            best = float(val)
    return best


def uniform_discrepancy(A: SignMatrix, cap: int = DEFAULT_ENUMERATION_CAP) -> float:
    return discrepancy(A, DistributionMatrix.uniform(A.rows, A.cols), cap)


def shaltiel_verify(A: SignMatrix, cap: int = DEFAULT_ENUMERATION_CAP) -> ShaltielReport:
    """Check (1/108)(||A||/sqrt(size))^3 <= disc_U(A), with 1e-9 slack."""
    ratio = spectrum(A).spectral_norm / math.sqrt(A.size)
    lhs = ratio ** 3 / 108.0
    disc = uniform_discrepancy(A, cap)
    return ShaltielReport(lhs=lhs, disc=disc, ok=lhs <= disc + 1e-9)


def gamma2_star_interval(A: SignMatrix, P: DistributionMatrix,
                         cap: int = DEFAULT_ENUMERATION_CAP) -> tuple:
    """Certified enclosure [disc, K_G*disc] of the dual factorization norm of A*P."""
    disc = discrepancy(A, P, cap)
    return (disc, GROTHENDIECK_UPPER * disc)


def verify_spectral_disc(A: SignMatrix, cert: SpectralDiscCert) -> SpectralDiscReport:
    """Check the three spectral-discrepancy conditions for a supplied certificate.

    Also reports the smallest r consistent with conditions (2) and (3) for
    this particular submatrix and distribution.  With a uniform mu, condition
    (3) holds automatically.
    """
    rows = list(cert.row_indices)
    cols = list(cert.col_indices)
    if not rows or not cols:
        raise ValueError("certificate index sets must be non-empty")
    if max(rows) >= A.rows or max(cols) >= A.cols or min(rows) < 0 or min(cols) < 0:
        raise ValueError("certificate indices out of range")
    sub = A.entries[np.ix_(rows, cols)]
    mu = cert.mu.weights
    if mu.shape != sub.shape:
        raise ValueError("mu shape must match the selected submatrix")
    size = sub.size
    weighted = sub * mu
    balance_residual = abs(float(weighted.sum()))
    norm2 = spectrum(weighted).spectral_norm
    norm3 = spectrum(np.abs(weighted)).spectral_norm
    rt = math.sqrt(size)
    return SpectralDiscReport(
        balance_residual=balance_residual,
        balanced=balance_residual <= 1e-9,
        cond2_value=norm2,
        cond2_ok=norm2 <= cert.r / rt + 1e-9,
        cond3_value=norm3,
        cond3_ok=norm3 <= (1.0 + cert.r) / rt + 1e-9,
        minimal_r=max(norm2 * rt, norm3 * rt - 1.0),
    )


def approx_trace_lower(A: SignMatrix, B: WitnessMatrix,
                       epsilon: float) -> ApproxNormBound:
    """Witness-certified lower bounds on the approximate trace and factorization norms.

    trace_lb = (<A,B> - eps ||B||_1) / ||B||, gamma2_lb = trace_lb/sqrt(size),
    and the communication main term is log2(gamma2_lb).  A non-positive
    numerator makes the bound vacuous and is flagged instead of hidden.
    """
    if A.entries.shape != B.B.shape:
        raise ValueError("matrix and witness dimensions must match")
    if B.spectral_norm <= 0:
        raise ValueError("witness has zero spectral norm")
    inner = float((A.entries * B.B).sum())
    trace_lb = (inner - epsilon * B.l1) / B.spectral_norm
    gamma2_lb = trace_lb / math.sqrt(A.size)
    if gamma2_lb > 0:
        return ApproxNormBound(trace_lb, gamma2_lb, math.log2(gamma2_lb), True)
    return ApproxNormBound(trace_lb, gamma2_lb, None, False)


def sherstov_bound(f: BoolFunction, g: SignMatrix,
                   epsilon0: float) -> BoundReport:
    """Main term of the strongly-balanced composition bound:
    deg_eps0(f) * log2(sqrt(size(M_g)) / ||M_g||)."""
    if not 0 < epsilon0 < 1:
        raise ValueError(f"epsilon0 must lie in (0, 1), got {epsilon0}")
    report = BoundReport(theorem="sherstov", applicable=True, main_term=None,
                         warnings=[OMITTED_CONSTANT_WARNING])
    bal = balance_check(g)
    if not bal.strongly_balanced:
        report.applicable = False
        report.warnings.append("inner matrix is not strongly balanced")
        return report
    d = approx_degree(f, epsilon0).d
    sp = spectrum(g)
    ratio = math.sqrt(g.size) / sp.spectral_norm
    rank_g = exact_rank(g)
    report.main_term = d * math.log2(ratio)
    report.intermediates = {
        "d": d,
        "epsilon0": epsilon0,
        "spectral_norm": sp.spectral_norm,
        "size": g.size,
        "ratio": ratio,
        "inner_rank": rank_g,
    }
    if rank_g == 1:
        report.warnings.append(
            "inner matrix has rank 1: the composed complexity can be O(1) "
            "and this bound carries no content")
    return report


def disc_bound(f: BoolFunction, g: SignMatrix,
               cap: int = DEFAULT_ENUMERATION_CAP) -> BoundReport:
    """Discrepancy form of the composition bound:
    (1/3) deg_{1/3}(f) (log2(1/disc_U(M_g)) - 7)."""
    report = BoundReport(theorem="disc", applicable=True, main_term=None,
                         warnings=[OMITTED_CONSTANT_WARNING])
    bal = balance_check(g)
    if not bal.strongly_balanced:
        report.applicable = False
        report.warnings.append("inner matrix is not strongly balanced")
        return report
    d = approx_degree(f, 1.0 / 3.0).d
    disc = uniform_discrepancy(g, cap)
    inner = math.log2(1.0 / disc) - 7.0
    report.main_term = d * inner / 3.0
    report.intermediates = {
        "d": d,
        "disc_u": disc,
        "log_term": inner,
    }
    if inner <= 0:
        report.warnings.append(
            "discrepancy is at least 2^-7, the bound is vacuous")
    return report


def shizhu_bound(f: BoolFunction, g: SignMatrix, mu: DistributionMatrix,
                 epsilon0: float, cap: int = DEFAULT_ENUMERATION_CAP) -> BoundReport:
    """Degree main term under the dual-norm smallness condition.

    Requires mu balanced with respect to g.  The condition
    gamma2*(M_g * mu) <= d/(2 e n) is tested conservatively against the
    upper end of the Grothendieck enclosure; when it fails the measured gap
    is reported and the bound is marked inapplicable.
    """
    if not 0 < epsilon0 < 1:
        raise ValueError(f"epsilon0 must lie in (0, 1), got {epsilon0}")
    if (g.rows, g.cols) != (mu.rows, mu.cols):
        raise ValueError("mu dimensions must match the inner matrix")
    if abs(float((mu.weights * g.entries).sum())) > 1e-9:
        raise ValueError("mu must be balanced with respect to g")
    report = BoundReport(theorem="shizhu", applicable=True, main_term=None,
                         warnings=[OMITTED_CONSTANT_WARNING])
    d = approx_degree(f, epsilon0).d
    n = f.n
    low, high = gamma2_star_interval(g, mu, cap)
    threshold = d / (2.0 * math.e * n)
    report.intermediates = {
        "d": d,
        "n": n,
        "gamma2_star_low": low,
        "gamma2_star_high": high,
        "threshold": threshold,
        "gap": high - threshold,
    }
    if high <= threshold:
        report.main_term = float(d)
    else:
        report.applicable = False
        report.warnings.append(
            f"condition fails: certified gamma2* upper bound {high:.6g} "
            f"exceeds d/(2en) = {threshold:.6g}")
    return report
