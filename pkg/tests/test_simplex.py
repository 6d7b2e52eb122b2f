"""The in-package simplex against scipy's LP solver as an oracle."""

import numpy as np
import pytest
from scipy.optimize import linprog

from commbound.simplex import INFEASIBLE, OPTIMAL, UNBOUNDED, solve_lp

_STATUS = {0: OPTIMAL, 2: INFEASIBLE, 3: UNBOUNDED}


def test_simple_bounded():
    # min -x - y  s.t. x + y <= 1
    res = solve_lp([-1.0, -1.0], A_ub=[[1.0, 1.0]], b_ub=[1.0])
    assert res.status == OPTIMAL
    assert res.objective == pytest.approx(-1.0)


def test_equality_only():
    res = solve_lp([1.0, 2.0], A_eq=[[1.0, 1.0]], b_eq=[3.0])
    assert res.status == OPTIMAL
    assert res.x == pytest.approx([3.0, 0.0])


def test_infeasible():
    res = solve_lp([1.0], A_eq=[[1.0]], b_eq=[-2.0])
    assert res.status == INFEASIBLE


def test_unbounded():
    res = solve_lp([-1.0])
    assert res.status == UNBOUNDED


def test_redundant_equality_rows():
    # a dependent equality leaves an artificial stuck in the basis at zero;
    # phase 2 must still solve correctly
    res = solve_lp([1.0, 1.0], A_eq=[[1.0, 1.0], [2.0, 2.0]], b_eq=[1.0, 2.0])
    assert res.status == OPTIMAL
    assert res.objective == pytest.approx(1.0)
    res = solve_lp([-1.0, -2.0], A_ub=[[1.0, 1.0]], b_ub=[2.0],
                   A_eq=[[1.0, 1.0], [3.0, 3.0]], b_eq=[2.0, 6.0])
    assert res.status == OPTIMAL
    assert res.objective == pytest.approx(-4.0)


def test_degenerate_cycling_guard():
    # classic Beale-style degeneracy; Bland's rule must terminate
    c = [-0.75, 150.0, -0.02, 6.0]
    A_ub = [[0.25, -60.0, -0.04, 9.0],
            [0.5, -90.0, -0.02, 3.0],
            [0.0, 0.0, 1.0, 0.0]]
    b_ub = [0.0, 0.0, 1.0]
    res = solve_lp(c, A_ub=A_ub, b_ub=b_ub)
    assert res.status == OPTIMAL
    assert res.objective == pytest.approx(-0.05)


def test_against_scipy_corpus():
    rng = np.random.default_rng(42)
    for _ in range(200):
        n = int(rng.integers(1, 8))
        m_ub = int(rng.integers(0, 6))
        m_eq = int(rng.integers(0, 4))
        c = rng.normal(size=n).round(3)
        A_ub = rng.normal(size=(m_ub, n)).round(3) if m_ub else None
        b_ub = rng.normal(size=m_ub).round(3) if m_ub else None
        A_eq = rng.normal(size=(m_eq, n)).round(3) if m_eq else None
        b_eq = rng.normal(size=m_eq).round(3) if m_eq else None
        res = solve_lp(c, A_ub, b_ub, A_eq, b_eq)
        ref = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq,
                      bounds=[(0, None)] * n, method="highs")
        assert res.status == _STATUS.get(ref.status), (res.status, ref.status)
        if res.status == OPTIMAL:
            assert res.objective == pytest.approx(ref.fun, abs=1e-6)
            if A_ub is not None:
                assert (A_ub @ res.x <= b_ub + 1e-7).all()
            if A_eq is not None:
                assert np.allclose(A_eq @ res.x, b_eq, atol=1e-7)
            assert (res.x >= -1e-9).all()
