"""Approximate degree, the dual witness, and their verification."""

import numpy as np
import pytest

from commbound.approx import (approx_degree, best_approximation,
                              dual_polynomial, error_profile, verify_dual)
from commbound.boolfn import (BoolFunction, RealPointFunction, all_functions,
                              builtin_function)

AND2 = builtin_function("AND", 2)


def test_error_profiles_frozen():
    # frozen from an independent LP oracle run
    assert error_profile(AND2) == pytest.approx([1.0, 0.5, 0.0], abs=1e-8)
    assert error_profile(builtin_function("AND", 3)) == pytest.approx(
        [1.0, 2.0 / 3.0, 0.25, 0.0], abs=1e-8)
    assert error_profile(builtin_function("OR", 2)) == pytest.approx(
        [1.0, 0.5, 0.0], abs=1e-8)
    assert error_profile(builtin_function("MAJ", 3)) == pytest.approx(
        [1.0, 0.5, 0.5, 0.0], abs=1e-8)


def test_parity_needs_full_degree():
    for n in range(1, 5):
        f = builtin_function("PARITY", n)
        assert approx_degree(f, 1.0 / 3.0).d == n
        # one degree less leaves the maximal error
        err, _ = best_approximation(f, n - 1)
        assert err == pytest.approx(1.0, abs=1e-8)


def test_tiny_epsilon_gives_exact_degree():
    # any nonzero best error at n <= 3 is at least 2^-n (checked by oracle),
    # so an epsilon below that forces the exact degree
    from commbound.boolfn import degree

    for n in (1, 2, 3):
        eps = 2.0 ** (-n) / 2.0
        for f in all_functions(n):
            assert approx_degree(f, eps).d == degree(f)


def test_epsilon_zero_exact_path():
    r = approx_degree(AND2, 0.0)
    assert r.d == 2 and r.lp_status == "exact" and r.max_error == 0.0


def test_constant_function():
    const = BoolFunction(2, [1, 1, 1, 1])
    assert approx_degree(const, 1.0 / 3.0).d == 0
    w = dual_polynomial(const, 1.0 / 3.0)
    assert w.d == 0
    assert verify_dual(w, const).ok


def test_approximant_quality():
    r = approx_degree(AND2, 1.0 / 3.0)
    assert r.d == 2
    # reconstruct the approximant pointwise and check the sup error
    from commbound.boolfn import iwht

    values = iwht(r.approximant).table
    assert np.abs(values - AND2.table).max() <= 1.0 / 3.0 + 1e-8
    # no coefficients above the certified degree
    for T in range(4):
        if bin(T).count("1") > r.d:
            assert r.approximant.coeff(T) == pytest.approx(0.0, abs=1e-9)


def test_epsilon_validation():
    with pytest.raises(ValueError):
        approx_degree(AND2, 1.0)
    with pytest.raises(ValueError):
        approx_degree(AND2, -0.1)
    with pytest.raises(ValueError):
        dual_polynomial(AND2, 1.0)


def test_parity_dual_witness_is_scaled_parity():
    f = builtin_function("PARITY", 3)
    w = dual_polynomial(f, 1.0 / 3.0)
    assert w.d == 3
    assert w.correlation == pytest.approx(1.0, abs=1e-8)
    assert w.l1 == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(w.v.table, f.table / 8.0, atol=1e-8)


def test_and2_dual_witness():
    w = dual_polynomial(AND2, 1.0 / 3.0)
    # dual optimum equals the best degree-1 error, 1/2
    assert w.correlation == pytest.approx(0.5, abs=1e-8)
    assert verify_dual(w, AND2).ok


def test_verify_dual_catches_scaling():
    w = dual_polynomial(AND2, 1.0 / 3.0)
    doubled = type(w)(v=RealPointFunction(2, 2.0 * w.v.table), d=w.d,
                      epsilon=w.epsilon, correlation=2 * w.correlation,
                      l1=2 * w.l1)
    chk = verify_dual(doubled, AND2)
    assert not chk.l1_ok and not chk.ok


def test_verify_dual_catches_orthogonality_shift():
    w = dual_polynomial(AND2, 1.0 / 3.0)
    shifted = type(w)(v=RealPointFunction(2, w.v.table + 1e-3), d=w.d,
                      epsilon=w.epsilon, correlation=w.correlation, l1=w.l1)
    chk = verify_dual(shifted, AND2)
    # the constant-character inner product moves by 1e-3 * 2^n
    assert chk.orthogonality_max == pytest.approx(4e-3, abs=1e-9)
    assert not chk.orthogonality_ok


def test_verify_dual_arity_mismatch():
    w = dual_polynomial(AND2, 1.0 / 3.0)
    with pytest.raises(ValueError):
        verify_dual(w, builtin_function("AND", 3))


def test_weak_duality_all_n2():
    for f in all_functions(2):
        profile = error_profile(f)
        w = dual_polynomial(f, 1.0 / 3.0)
        if w.d >= 1:
            assert w.correlation == pytest.approx(profile[w.d - 1], abs=1e-7)
