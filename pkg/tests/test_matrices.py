"""Sign-matrix primitives: ranks, spectra, balance, containment, search."""

import math

import numpy as np
import pytest

from commbound import matrices as mx


def test_sign_matrix_validation():
    with pytest.raises(ValueError):
        mx.SignMatrix([[1, 0], [1, -1]])
    with pytest.raises(ValueError):
        mx.SignMatrix([1, -1])
    M = mx.SignMatrix([[1, -1], [-1, 1]])
    with pytest.raises(ValueError):
        M.entries[0, 0] = -1  # frozen


def test_named_matrices_shapes():
    assert (mx.PATTERN_CORE_4.rows, mx.PATTERN_CORE_4.cols) == (4, 4)
    assert (mx.CORE_FREE_6.rows, mx.CORE_FREE_6.cols) == (6, 6)
    assert mx.builtin_matrix("xor2") == mx.XOR_2


# --- exact rank -----------------------------------------------------------

def test_exact_rank_examples():
    assert mx.exact_rank(mx.all_ones(4, 4)) == 1
    # rows 3,4 are the negations of rows 2,1
    assert mx.exact_rank(mx.PATTERN_CORE_4) == 2
    # frozen from a fraction-free elimination oracle
    assert mx.exact_rank(mx.CORE_FREE_6) == 5


def test_exact_rank_vs_floating_rank():
    rng = np.random.default_rng(7)
    for _ in range(100):
        A = rng.choice((-1, 1), size=(rng.integers(1, 9), rng.integers(1, 9)))
        assert mx.exact_rank(mx.SignMatrix(A)) == np.linalg.matrix_rank(A)


# --- spectrum -------------------------------------------------------------

def test_spectrum_all_ones():
    for m, n in [(2, 3), (4, 4), (1, 5)]:
        sp = mx.spectrum(mx.all_ones(m, n))
        assert sp.spectral_norm == pytest.approx(math.sqrt(m * n), abs=1e-12)
        assert sp.numeric_rank == 1


def test_spectrum_hadamard_2():
    sp = mx.spectrum(mx.HADAMARD_2)
    assert sp.singular_values == pytest.approx((math.sqrt(2),) * 2, abs=1e-12)


def test_spectrum_pattern_core():
    sp = mx.spectrum(mx.PATTERN_CORE_4)
    assert sp.spectral_norm == pytest.approx(2 * math.sqrt(2), abs=1e-12)
    assert sp.numeric_rank == 2
    # Gram eigenvalues are {8, 8, 0, 0}
    assert sp.singular_values[:2] == pytest.approx((2 * math.sqrt(2),) * 2)
    assert sp.singular_values[2:] == pytest.approx((0.0, 0.0), abs=1e-9)


def test_spectrum_core_free_6():
    sp = mx.spectrum(mx.CORE_FREE_6)
    assert sp.spectral_norm == pytest.approx(2 * math.sqrt(3), abs=1e-12)
    assert sp.numeric_rank == 5


def test_spectrum_matches_numpy_svd():
    rng = np.random.default_rng(11)
    for i in range(60):
        m, n = rng.integers(1, 9, 2)
        if i % 2:
            A = rng.normal(size=(m, n))
        else:
            A = rng.normal(size=(m, n)) + 1j * rng.normal(size=(m, n))
        got = np.array(mx.spectrum(A).singular_values)
        want = np.linalg.svd(np.asarray(A, complex))[1]
        assert np.allclose(got, want, atol=1e-9)


def test_spectrum_rejects_bad_tolerance():
    with pytest.raises(ValueError):
        mx.spectrum(mx.XOR_2, tolerance=0.0)


def test_frobenius_identity_for_sign_matrices():
    rng = np.random.default_rng(3)
    for _ in range(50):
        A = mx.SignMatrix(rng.choice((-1, 1),
                                     size=(rng.integers(1, 9),
                                           rng.integers(1, 9))))
        assert abs(mx.spectrum(A).frobenius_norm - math.sqrt(A.size)) <= 1e-9


# --- balance --------------------------------------------------------------

def test_balance_examples():
    assert mx.balance_check(mx.PATTERN_CORE_4).strongly_balanced
    assert mx.balance_check(mx.CORE_FREE_6).strongly_balanced
    rep = mx.balance_check(mx.all_ones(3, 3))
    assert not rep.balanced and not rep.strongly_balanced
    # balanced but not strongly balanced
    rep = mx.balance_check(mx.SignMatrix([[1, 1], [-1, -1]]))
    assert rep.balanced and not rep.strongly_balanced
    assert rep.row_sums == (2, -2)


# --- products -------------------------------------------------------------

def test_tensor_and_entrywise():
    assert mx.tensor(mx.HADAMARD_2, mx.SignMatrix([[1]])) == mx.HADAMARD_2
    assert mx.entrywise(mx.PATTERN_CORE_4, mx.PATTERN_CORE_4) == mx.all_ones(4, 4)
    assert mx.exact_rank(mx.tensor(mx.XOR_2, mx.XOR_2)) == 1
    with pytest.raises(ValueError):
        mx.entrywise(mx.XOR_2, mx.all_ones(2, 3))


def test_tensor_rank_multiplicative():
    rng = np.random.default_rng(5)
    for _ in range(40):
        A = mx.SignMatrix(rng.choice((-1, 1), size=(rng.integers(1, 5),
                                                    rng.integers(1, 5))))
        B = mx.SignMatrix(rng.choice((-1, 1), size=(rng.integers(1, 5),
                                                    rng.integers(1, 5))))
        assert mx.exact_rank(mx.tensor(A, B)) == \
            mx.exact_rank(A) * mx.exact_rank(B)


# --- containment ----------------------------------------------------------

def test_containment_identity():
    hit = mx.contains_pattern(mx.PATTERN_CORE_4, mx.PATTERN_CORE_4, "ordered")
    assert hit.found
    assert hit.row_indices == (0, 1, 2, 3)
    assert hit.col_indices == (0, 1, 2, 3)


def test_core_free_6_avoids_the_core():
    # verified against an exhaustive 15 x 15 x 576 oracle before freezing
    assert not mx.contains_pattern(mx.CORE_FREE_6, mx.PATTERN_CORE_4,
                                   "up_to_permutation").found
    assert not mx.contains_pattern(mx.CORE_FREE_6, mx.PATTERN_CORE_4,
                                   "ordered").found


def test_all_ones_has_no_core():
    assert not mx.contains_pattern(mx.all_ones(4, 4), mx.PATTERN_CORE_4).found


def test_containment_finds_planted_pattern():
    rng = np.random.default_rng(13)
    core = mx.PATTERN_CORE_4.entries
    M = rng.choice((-1, 1), size=(6, 6))
    M[1:5, 2:6] = core[rng.permutation(4)][:, rng.permutation(4)]
    hit = mx.contains_pattern(mx.SignMatrix(M), mx.PATTERN_CORE_4)
    assert hit.found


def test_containment_rejects_oversized_pattern():
    with pytest.raises(ValueError):
        mx.contains_pattern(mx.XOR_2, mx.PATTERN_CORE_4)


# --- canonical forms ------------------------------------------------------

def test_canonical_form_is_orbit_minimum():
    rng = np.random.default_rng(17)
    M = mx.SignMatrix(rng.choice((-1, 1), size=(3, 3)))
    base = mx.canonical_form(M)
    for _ in range(20):
        P = mx.SignMatrix(M.entries[rng.permutation(3)][:, rng.permutation(3)])
        assert mx.canonical_form(P) == base
    assert mx.is_canonical(base)


# --- strongly balanced search ---------------------------------------------

def test_search_rejects_odd_dimensions():
    with pytest.raises(ValueError):
        list(mx.search_strongly_balanced(3, 4))


def test_search_2x2():
    found = list(mx.search_strongly_balanced(2, 2, min_rank=1))
    assert found == [mx.XOR_2]


def test_search_4x4_canonical_classes():
    """Exhaustive 4x4: 90 strongly balanced matrices in 2 permutation classes
    (frozen from a brute-force enumeration over all 2^16 sign matrices)."""
    found = list(mx.search_strongly_balanced(4, 4))
    assert len(found) == 2
    assert sorted(mx.exact_rank(M) for M in found) == [1, 2]
    for M in found:
        assert mx.balance_check(M).strongly_balanced
        assert mx.is_canonical(M)
    # the rank-2 class is the pattern core's class
    rank2 = next(M for M in found if mx.exact_rank(M) == 2)
    assert mx.canonical_form(mx.PATTERN_CORE_4) == rank2


def test_search_4x4_brute_force_cross_check():
    """Independent enumeration of all 2^16 sign matrices."""
    count = 0
    reps = set()
    for bits in range(2 ** 16):
        E = np.array([[1 - 2 * ((bits >> (4 * i + j)) & 1) for j in range(4)]
                      for i in range(4)], dtype=np.int64)
        if (E.sum(axis=0) == 0).all() and (E.sum(axis=1) == 0).all():
            count += 1
            reps.add(mx.canonical_form(mx.SignMatrix(E)))
    assert count == 90
    assert reps == set(mx.search_strongly_balanced(4, 4))


def test_search_non_square_cross_check():
    """Non-square shapes against brute-force enumeration."""
    for rows, cols in [(2, 4), (4, 2)]:
        reps = set()
        for bits in range(2 ** (rows * cols)):
            E = np.array([[1 - 2 * ((bits >> (cols * i + j)) & 1)
                           for j in range(cols)] for i in range(rows)])
            if (E.sum(axis=0) == 0).all() and (E.sum(axis=1) == 0).all():
                reps.add(mx.canonical_form(mx.SignMatrix(E)))
        assert set(mx.search_strongly_balanced(rows, cols)) == reps
        assert len(reps) == 1


def test_search_4x4_core_free_is_empty():
    # frozen from the same brute-force oracle: no 4x4 strongly balanced
    # matrix of rank >= 2 avoids the pattern core
    found = list(mx.search_strongly_balanced(4, 4, min_rank=2,
                                             forbidden=mx.PATTERN_CORE_4))
    assert found == []


def test_search_6x6_core_free_exists():
    found = list(mx.search_strongly_balanced(6, 6, min_rank=2,
                                             forbidden=mx.PATTERN_CORE_4,
                                             limit=1))
    assert len(found) == 1
    M = found[0]
    assert mx.balance_check(M).strongly_balanced
    assert mx.exact_rank(M) >= 2
    assert not mx.contains_pattern(M, mx.PATTERN_CORE_4).found
    # the published 6x6 example passes the same filter
    assert mx.balance_check(mx.CORE_FREE_6).strongly_balanced
    assert mx.exact_rank(mx.CORE_FREE_6) >= 2


def test_search_respects_limit():
    found = list(mx.search_strongly_balanced(4, 4, limit=1))
    assert len(found) == 1


# --- text format ----------------------------------------------------------

def test_text_round_trip():
    text = mx.format_sign_matrix(mx.CORE_FREE_6)
    assert mx.parse_sign_matrix(text) == mx.CORE_FREE_6
    assert text.splitlines()[0] == "6 6"
    assert set(text.split()) - {"6"} == {"+1", "-1"}


def test_text_short_tokens():
    assert mx.parse_sign_matrix("2 2\n+ -\n- +") == mx.XOR_2


def test_text_errors():
    with pytest.raises(ValueError):
        mx.parse_sign_matrix("")
    with pytest.raises(ValueError):
        mx.parse_sign_matrix("2 2\n+1 -1")
    with pytest.raises(ValueError):
        mx.parse_sign_matrix("1 2\n+1 0")
