import math

import numpy as np
import pytest

from taumres.discretization import (FIRST_ORDER, SECOND_ORDER, FractionalParams,
                                    GridSpec, assemble_operator)
from taumres.krylov import MinresConfig, pminres
from taumres.pde import (FractionalProblem, example1_problem, example2_problem,
                         run_example1, run_example2, run_steps, sample_grid,
                         step_first_order, step_second_order)
from taumres.tau import build_preconditioner


# ---------------------------------------------------------------------------
# sampling

def test_sample_constant():
    grid = GridSpec((0.0, 0.0), (1.0, 1.0), (2, 3))
    out = sample_grid(grid, lambda x1, x2: 4.5 + 0.0 * x1 * x2)
    assert np.array_equal(out, np.full(6, 4.5))


def test_sample_1d_coordinates():
    grid = GridSpec((0.0,), (1.0,), (3,))
    assert sample_grid(grid, lambda x: x) == pytest.approx([0.25, 0.5, 0.75], abs=1e-15)


def test_sample_2d_lexicographic():
    grid = GridSpec((0.0, 0.0), (3.0, 3.0), (2, 2))
    out = sample_grid(grid, lambda x1, x2: x1 + 10.0 * x2)
    # points (1,1),(1,2),(2,1),(2,2) in units of h=1
    assert out == pytest.approx([11.0, 21.0, 12.0, 22.0], abs=1e-14)


def test_sample_passes_time():
    grid = GridSpec((0.0,), (1.0,), (2,))
    out = sample_grid(grid, lambda x, t: x * t, 3.0)
    assert out == pytest.approx([1.0, 2.0], abs=1e-14)


# ---------------------------------------------------------------------------
# single steps

def scalar_problem():
    return FractionalProblem(
        grid=GridSpec((0.0,), (1.0,), (1,)),
        params=FractionalParams((1.5,), (1.0,), (1.0,), SECOND_ORDER),
        T=1.0, M=4,
        source=lambda x, t: 3.0 + 0.0 * x,
        u0=lambda x: 2.0 + 0.0 * x,
    )


def test_problem_invariants():
    prob = scalar_problem()
    assert prob.nu * prob.tau_step == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(ValueError):
        FractionalProblem(prob.grid, prob.params, 1.0, 0, prob.source, prob.u0)


def test_second_order_zero_step():
    prob = FractionalProblem(
        grid=GridSpec((0.0,), (1.0,), (7,)),
        params=FractionalParams((1.5,), (1.0,), (2.0,), SECOND_ORDER),
        T=1.0, M=8,
        source=lambda x, t: 0.0 * x,
        u0=lambda x: 0.0 * x,
    )
    A = assemble_operator(prob.params, prob.grid, prob.nu)
    P = build_preconditioner(prob.params, prob.grid, prob.nu)
    u1, rep = step_second_order(prob, A, P, np.zeros(7), 0.0)
    assert np.array_equal(u1, np.zeros(7))
    assert rep.iters <= 1
    assert rep.converged


def test_second_order_scalar_closed_form():
    prob = scalar_problem()
    A = assemble_operator(prob.params, prob.grid, prob.nu)
    P = build_preconditioner(prob.params, prob.grid, prob.nu)
    u0 = sample_grid(prob.grid, prob.u0)
    u1, rep = step_second_order(prob, A, P, u0, 0.0, MinresConfig(tol=1e-13))
    B = 2.0 * (1.0 / (2.0 * 0.5 ** 1.5)) * 0.875
    nu = prob.nu
    expect = ((nu - B) * 2.0 + 3.0) / (nu + B)
    assert u1[0] == pytest.approx(expect, abs=1e-13)
    assert rep.step == 1
    assert rep.err_inf is None


def test_second_order_rejects_first_order_params():
    prob = example1_problem(3, (1.5, 1.5))
    A = assemble_operator(prob.params, prob.grid, prob.nu)
    with pytest.raises(ValueError):
        step_second_order(prob, A, None, np.zeros(9), 0.0)


def test_first_order_zero_step():
    prob = FractionalProblem(
        grid=GridSpec((0.0,), (1.0,), (5,)),
        params=FractionalParams((1.5,), (1.0,), (2.0,), FIRST_ORDER),
        T=1.0, M=8,
        source=lambda x, t: 0.0 * x,
        u0=lambda x: 0.0 * x,
    )
    A = assemble_operator(prob.params, prob.grid, prob.nu)
    u1, rep = step_first_order(prob, A, None, np.zeros(5), prob.tau_step)
    assert np.array_equal(u1, np.zeros(5))
    assert rep.iters <= 1
    assert rep.converged


def test_first_order_scalar_closed_form():
    prob = FractionalProblem(
        grid=GridSpec((0.0,), (1.0,), (1,)),
        params=FractionalParams((1.5,), (1.0,), (1.0,), FIRST_ORDER),
        T=1.0, M=4,
        source=lambda x, t: 3.0 + 0.0 * x,
        u0=lambda x: 2.0 + 0.0 * x,
    )
    A = assemble_operator(prob.params, prob.grid, prob.nu)
    u_prev = sample_grid(prob.grid, prob.u0)
    u1, rep = step_first_order(prob, A, None, u_prev, prob.tau_step,
                               MinresConfig(tol=1e-13))
    # (nu + B) u1 = nu*u0 + f with B = 2 * (1/0.5^1.5) * 1.5 (first-order scaling)
    B = 2.0 * (1.0 / 0.5 ** 1.5) * 1.5
    expect = (prob.nu * 2.0 + 3.0) / (prob.nu + B)
    assert u1[0] == pytest.approx(expect, abs=1e-13)
    assert rep.step == 1


def test_example1_first_step_converges():
    prob = example1_problem(15, (1.5, 1.5))
    A = assemble_operator(prob.params, prob.grid, prob.nu)
    P = build_preconditioner(prob.params, prob.grid, prob.nu)
    u1, rep = step_first_order(prob, A, P, np.zeros(prob.grid.size), prob.tau_step)
    assert rep.converged
    assert rep.err_inf is None
    assert np.max(np.abs(u1)) > 0


def test_example2_first_step_error_matches_frozen_run():
    prob = example2_problem(15, (1.5, 1.5))
    A = assemble_operator(prob.params, prob.grid, prob.nu)
    P = build_preconditioner(prob.params, prob.grid, prob.nu)
    u0 = sample_grid(prob.grid, prob.u0)
    u1, rep = step_second_order(prob, A, P, u0, 0.0)
    assert rep.converged
    assert rep.err_inf is not None
    # frozen from the dense-verified reference run of this implementation;
    # coarse-grid error is pre-asymptotic, an order above the fine-grid trend
    assert rep.err_inf == pytest.approx(0.015322140913161822, rel=1e-6)


def test_symmetric_degeneracy_matches_direct_solve(rng):
    # d+ = d- makes A symmetric: solving YAx = Yb must agree with MINRES on A
    params = FractionalParams((1.5, 1.7), (1.0, 2.0), (1.0, 2.0), SECOND_ORDER)
    grid = GridSpec((0, 0), (1, 1), (7, 7))
    A = assemble_operator(params, grid, 5.0)
    dense = A.materialize()
    assert np.array_equal(dense, dense.T)
    b = rng.standard_normal(49)
    via_flip = pminres(A.apply_symmetrized, None, b[::-1].copy(),
                       MinresConfig(tol=1e-12, maxit=300))
    direct = pminres(A.apply, None, b, MinresConfig(tol=1e-12, maxit=300))
    assert via_flip.converged and direct.converged
    assert np.max(np.abs(via_flip.x - direct.x)) <= 1e-9 * max(np.max(np.abs(direct.x)), 1.0)


# ---------------------------------------------------------------------------
# experiment runners

def test_run_example1_row_shape():
    rows = run_example1(9, alphas=((1.5, 1.5),))
    assert [r["preconditioner"] for r in rows] == ["tau", "identity"]
    for r in rows:
        assert r["n"] == 81
        assert r["err_inf"] is None
        assert r["iters"] >= 1
        assert r["wall_seconds"] > 0
    assert rows[0]["iters"] < rows[1]["iters"]


def test_run_example2_row_shape():
    rows = run_example2(9, alphas=((1.9, 1.9),))
    (row,) = rows
    assert row["preconditioner"] == "tau"
    assert row["converged"] is True
    assert row["err_inf"] > 0
    assert row["relres"] <= 1e-8


def test_example1_mesh_independence_sample():
    its = []
    for n1 in (31, 63):
        (row,) = run_example1(n1, alphas=((1.5, 1.5),), preconditioners=("tau",))
        assert row["converged"]
        its.append(row["iters"])
    assert abs(its[0] - its[1]) <= 2
    assert max(its) <= 16


def test_example2_error_ratio_sample():
    errs = []
    for n1 in (63, 127):
        (row,) = run_example2(n1, alphas=((1.5, 1.5),))
        errs.append(row["err_inf"])
    assert 3.0 <= errs[0] / errs[1] <= 5.0


def test_run_steps_marches_and_tracks_error():
    prob = example2_problem(7, (1.5, 1.5))
    u, reports = run_steps(prob, num_steps=3)
    assert len(reports) == 3
    assert [r.step for r in reports] == [1, 2, 3]
    assert all(r.converged for r in reports)
    # compose manually and compare
    A = assemble_operator(prob.params, prob.grid, prob.nu)
    P = build_preconditioner(prob.params, prob.grid, prob.nu)
    v = sample_grid(prob.grid, prob.u0)
    for k in range(3):
        v, _ = step_second_order(prob, A, P, v, k * prob.tau_step)
    assert np.max(np.abs(u - v)) <= 1e-12


def test_run_steps_first_order():
    prob = example1_problem(5, (1.5, 1.9))
    u, reports = run_steps(prob, num_steps=2)
    assert len(reports) == 2
    assert all(r.converged for r in reports)
    assert np.max(np.abs(u)) > 0
