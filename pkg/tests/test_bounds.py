"""Discrepancy, norm enclosures, and the lower-bound evaluators."""

import math

import numpy as np
import pytest

from commbound import bounds as bd
from commbound import composer as cp
from commbound import matrices as mx
from commbound.approx import dual_polynomial
from commbound.boolfn import BoolFunction, builtin_function
from commbound.errors import ResourceLimitError

CORE4 = mx.PATTERN_CORE_4
CORE6 = mx.CORE_FREE_6
U = bd.DistributionMatrix.uniform


def brute_force_disc(A, P):
    """Independent oracle: enumerate both subset sides."""
    W = A.entries * P.weights
    m, n = W.shape
    best = 0.0
    for xb in range(2 ** m):
        x = np.array([(xb >> i) & 1 for i in range(m)], dtype=float)
        for yb in range(2 ** n):
            y = np.array([(yb >> j) & 1 for j in range(n)], dtype=float)
            best = max(best, abs(x @ W @ y))
    return best


def test_distribution_validation():
    with pytest.raises(ValueError):
        bd.DistributionMatrix([[0.5, -0.1], [0.3, 0.3]])
    with pytest.raises(ValueError):
        bd.DistributionMatrix([[0.3, 0.3], [0.3, 0.3]])
    d = U(2, 2)
    assert d.weights.sum() == pytest.approx(1.0)


def test_disc_frozen_values():
    assert bd.uniform_discrepancy(mx.HADAMARD_2) == pytest.approx(0.5)
    assert bd.uniform_discrepancy(mx.all_ones(3, 5)) == pytest.approx(1.0)
    assert bd.uniform_discrepancy(CORE4) == pytest.approx(0.125)
    assert bd.uniform_discrepancy(CORE6) == pytest.approx(1.0 / 9.0)
    assert bd.uniform_discrepancy(mx.XOR_2) == pytest.approx(0.25)


def test_disc_matches_brute_force():
    rng = np.random.default_rng(23)
    for _ in range(25):
        A = mx.SignMatrix(rng.choice((-1, 1), size=(rng.integers(1, 6),
                                                    rng.integers(1, 6))))
        P = U(A.rows, A.cols)
        assert bd.discrepancy(A, P) == pytest.approx(brute_force_disc(A, P),
                                                     abs=1e-12)


def test_disc_nonuniform():
    rng = np.random.default_rng(29)
    A = mx.SignMatrix(rng.choice((-1, 1), size=(4, 4)))
    w = rng.random((4, 4))
    P = bd.DistributionMatrix(w / w.sum())
    assert bd.discrepancy(A, P) == pytest.approx(brute_force_disc(A, P),
                                                 abs=1e-12)


def test_disc_enumeration_cap():
    big = mx.all_ones(25, 2)
    with pytest.raises(ResourceLimitError):
        bd.discrepancy(big, U(25, 2))


def test_disc_spectral_upper_bound_corpus():
    rng = np.random.default_rng(31)
    for _ in range(200):
        A = mx.SignMatrix(rng.choice((-1, 1), size=(rng.integers(1, 11),
                                                    rng.integers(1, 11))))
        disc = bd.uniform_discrepancy(A)
        assert disc <= mx.spectrum(A).spectral_norm / math.sqrt(A.size) + 1e-9


def test_shaltiel_examples_and_corpus():
    rep = bd.shaltiel_verify(mx.HADAMARD_2)
    assert rep.lhs == pytest.approx((1 / math.sqrt(2)) ** 3 / 108)
    assert rep.disc == pytest.approx(0.5) and rep.ok
    rep = bd.shaltiel_verify(mx.all_ones(2, 2))
    assert rep.lhs == pytest.approx(1 / 108) and rep.ok
    rng = np.random.default_rng(37)
    for _ in range(200):
        A = mx.SignMatrix(rng.choice((-1, 1), size=(rng.integers(1, 11),
                                                    rng.integers(1, 11))))
        assert bd.shaltiel_verify(A).ok


def test_gamma2_star_interval():
    lo, hi = bd.gamma2_star_interval(mx.HADAMARD_2, U(2, 2))
    assert (lo, hi) == pytest.approx((0.5, 0.89115))
    lo, hi = bd.gamma2_star_interval(mx.all_ones(2, 2), U(2, 2))
    assert (lo, hi) == pytest.approx((1.0, 1.7823))
    assert lo <= hi


def test_spectral_disc_certificate():
    cert = bd.SpectralDiscCert((0, 1), (0, 1), U(2, 2), r=1.0)
    rep = bd.verify_spectral_disc(mx.XOR_2, cert)
    assert rep.balanced
    assert rep.cond2_ok and rep.cond3_ok
    # ||XOR*U|| = 1/2, so the minimal r for this pair is sqrt(4)/2 = 1
    assert rep.minimal_r == pytest.approx(1.0, abs=1e-9)
    # uniform mu satisfies condition (3) automatically
    assert rep.cond3_value <= (1 + rep.minimal_r) / 2 + 1e-9


def test_spectral_disc_unbalanced_mu():
    cert = bd.SpectralDiscCert((0, 1), (0, 1), U(2, 2), r=1.0)
    rep = bd.verify_spectral_disc(mx.all_ones(2, 2), cert)
    assert not rep.balanced


def test_spectral_disc_bad_indices():
    with pytest.raises(ValueError):
        bd.verify_spectral_disc(mx.XOR_2,
                                bd.SpectralDiscCert((0, 5), (0, 1), U(2, 2), 1.0))


def test_approx_trace_lower_hand_value():
    # B = A/size for the 2x2 Walsh matrix: <A,B> = 1, ||B||_1 = 1,
    # ||B|| = sqrt(2)/4, so the
    # zero-epsilon bound is 4/sqrt(2) = 2 sqrt(2)
    w = dual_polynomial(builtin_function("PARITY", 1), 1.0 / 3.0)
    A = mx.HADAMARD_2
    B = cp.WitnessMatrix(B=A.entries / 4.0, source=w, mu=None, l1=1.0,
                         correlation=1.0,
                         spectral_norm=mx.spectrum(A.entries / 4.0).spectral_norm)
    r = bd.approx_trace_lower(A, B, 0.0)
    assert r.trace_lb == pytest.approx(2 * math.sqrt(2), abs=1e-9)
    assert r.gamma2_lb == pytest.approx(math.sqrt(2), abs=1e-9)
    assert r.qcc_main_term == pytest.approx(0.5, abs=1e-9)


def test_approx_trace_lower_vacuous_at_eps_one():
    f = builtin_function("PARITY", 2)
    w = dual_polynomial(f, 1.0 / 3.0)
    W = cp.build_witness(w, CORE4)
    M = cp.compose_block(f, CORE4).matrix
    r = bd.approx_trace_lower(M, W, 1.0)
    assert r.trace_lb <= 0 and not r.applicable and r.qcc_main_term is None


def test_chain_inequality():
    eps0 = 1.0 / 3.0
    for f in (builtin_function("PARITY", 2), builtin_function("AND", 2)):
        w = dual_polynomial(f, eps0)
        for g in (CORE4, CORE6):
            W = cp.build_witness(w, g)
            M = cp.compose_block(f, g).matrix
            r = bd.approx_trace_lower(M, W, eps0 / 2.0)
            rhs = (math.sqrt(g.size)
                   / mx.spectrum(g).spectral_norm) ** w.d / 12.0
            assert r.gamma2_lb + 1e-8 >= rhs


def test_sherstov_bound_headline_value():
    rep = bd.sherstov_bound(builtin_function("PARITY", 2), CORE4, 1.0 / 3.0)
    assert rep.applicable
    assert rep.main_term == pytest.approx(1.0, abs=1e-6)
    assert rep.intermediates["d"] == 2
    assert rep.intermediates["ratio"] == pytest.approx(math.sqrt(2))


def test_sherstov_bound_core6():
    rep = bd.sherstov_bound(builtin_function("PARITY", 2), CORE6, 1.0 / 3.0)
    assert rep.main_term == pytest.approx(math.log2(3), abs=1e-9)


def test_sherstov_bound_rank_one_warning():
    rep = bd.sherstov_bound(builtin_function("PARITY", 2), mx.XOR_2, 1.0 / 3.0)
    assert rep.applicable
    assert rep.main_term == pytest.approx(0.0, abs=1e-12)
    assert any("rank 1" in w for w in rep.warnings)


def test_sherstov_bound_constant_function():
    rep = bd.sherstov_bound(BoolFunction(2, [1, 1, 1, 1]), CORE4, 1.0 / 3.0)
    assert rep.main_term == pytest.approx(0.0)
    assert rep.intermediates["d"] == 0


def test_sherstov_bound_preconditions():
    rep = bd.sherstov_bound(builtin_function("PARITY", 2), mx.HADAMARD_2,
                            1.0 / 3.0)
    assert not rep.applicable and rep.main_term is None
    with pytest.raises(ValueError):
        bd.sherstov_bound(builtin_function("PARITY", 2), CORE4, 0.0)


def test_disc_bound_values():
    rep = bd.disc_bound(builtin_function("PARITY", 2), CORE4)
    # disc_U = 1/8, log2(8) - 7 = -4: vacuous, reported as-is with a warning
    assert rep.main_term == pytest.approx(2 * (3 - 7) / 3)
    assert any("vacuous" in w for w in rep.warnings)
    rep = bd.disc_bound(BoolFunction(2, [1, 1, 1, 1]), CORE4)
    assert rep.main_term == pytest.approx(0.0)


def test_shizhu_bound_small_instance():
    # frozen pipeline values: disc_U(XOR2) = 1/4, enclosure top 0.445575,
    # threshold d/(2 e n) = 2/(4e) ~ 0.1839: condition fails, inapplicable
    f = builtin_function("PARITY", 2)
    rep = bd.shizhu_bound(f, mx.XOR_2, U(2, 2), 1.0 / 3.0)
    assert not rep.applicable
    assert rep.intermediates["gamma2_star_high"] == pytest.approx(0.445575)
    assert rep.intermediates["threshold"] == pytest.approx(2 / (4 * math.e))
    assert rep.intermediates["gap"] > 0


def test_shizhu_bound_passing_instance():
    # a fabricated map with disc low enough for the condition to pass:
    # mu concentrated on a balanced 2x2 submatrix scaled down
    f = builtin_function("PARITY", 4)
    g = mx.tensor(mx.XOR_2, mx.XOR_2)  # 4x4, rank 1
    # uniform mu: disc_U(XOR tensor XOR) = 1/4... condition still fails;
    # verify the report stays consistent rather than forcing a pass
    rep = bd.shizhu_bound(f, g, U(4, 4), 1.0 / 3.0)
    assert rep.applicable == (rep.intermediates["gamma2_star_high"]
                              <= rep.intermediates["threshold"])
    if rep.applicable:
        assert rep.main_term == rep.intermediates["d"]


def test_shizhu_degenerate_degree_zero():
    const = BoolFunction(2, [1, 1, 1, 1])
    rep = bd.shizhu_bound(const, mx.XOR_2, U(2, 2), 1.0 / 3.0)
    assert not rep.applicable


def test_shizhu_requires_balanced_mu():
    f = builtin_function("PARITY", 2)
    with pytest.raises(ValueError):
        bd.shizhu_bound(f, mx.all_ones(2, 2), U(2, 2), 1.0 / 3.0)


def test_main_term_permutation_invariance():
    rng = np.random.default_rng(41)
    f = builtin_function("PARITY", 2)
    base = bd.sherstov_bound(f, CORE4, 1.0 / 3.0).main_term
    for _ in range(20):
        P = mx.SignMatrix(CORE4.entries[rng.permutation(4)][:, rng.permutation(4)])
        assert bd.sherstov_bound(f, P, 1.0 / 3.0).main_term == \
            pytest.approx(base, abs=1e-9)
