"""Shared fixtures: the worked configuration at several resolutions plus the
continuation studies, computed once per session."""
import numpy as np
import pytest

from dcns.diagnostics import trajectory_records
from dcns.fields import Grid
from dcns.initial_data import InitSpec, gen_initial
from dcns.params import ModelParams, validate_params
from dcns.picard import ContinuationPlan, RunSetup, continuation_run, picard_solve

WORKED_T = 0.01
WORKED_EPS = 1e-3


@pytest.fixture(scope="session")
def dc_std():
    return validate_params(ModelParams(gamma=1.4, nu=1.0, alpha=1.0, beta=0.0))


@pytest.fixture(scope="session")
def worked_spec():
    return InitSpec(kappa=0.7, q=24.0, u0_amp=0.5, u0_radius=2.0,
                    s0_amp=0.1, eta=1e-2)


def solve_worked(dc, spec, n, dt_max, tol=1e-12, max_iters=40):
    grid = Grid(L=5.0, N=n)
    r0 = gen_initial(spec, grid, dc, eps=WORKED_EPS)
    result = picard_solve(r0, dc, WORKED_T, tol=tol, max_iters=max_iters,
                          cfl=0.4, dt_max=dt_max, eps=WORKED_EPS)
    records = trajectory_records(result.trajectory.times,
                                 result.trajectory.states, dc)
    return r0, result, records


@pytest.fixture(scope="session")
def worked_run(dc_std, worked_spec):
    return solve_worked(dc_std, worked_spec, 512, 2.5e-4)


@pytest.fixture(scope="session")
def worked_run_coarse(dc_std, worked_spec):
    return solve_worked(dc_std, worked_spec, 256, 5e-4)


@pytest.fixture(scope="session")
def worked_run_refined(dc_std, worked_spec):
    return solve_worked(dc_std, worked_spec, 1024, 1.25e-4)


@pytest.fixture(scope="session")
def static_run(dc_std):
    spec = InitSpec(kappa=0.0, q=24.0, u0_amp=0.0, u0_radius=1.0,
                    s0_amp=0.0, eta=1e-2)
    grid = Grid(L=1.0, N=128)
    with np.testing.suppress_warnings() as sup:
        sup.filter(UserWarning)
        r0 = gen_initial(spec, grid, dc_std, strict=False)
    result = picard_solve(r0, dc_std, 0.01, tol=1e-12, max_iters=20,
                          cfl=0.4, dt_max=1e-3, eps=1e-3)
    records = trajectory_records(result.trajectory.times,
                                 result.trajectory.states, dc_std)
    return r0, result, records


def continuation_setup(dc, spec, n=512, tol=1e-26, max_iters=60):
    return RunSetup(grid=Grid(L=5.0, N=n), dc=dc, init=spec, T=WORKED_T,
                    cfl=0.4, dt_max=2.5e-4, eps=WORKED_EPS, tol=tol,
                    max_iters=max_iters)


@pytest.fixture(scope="session")
def eps_legs(dc_std, worked_spec):
    plan = ContinuationPlan(param="eps", start=1e-2, factor=0.5, count=5, R0=2.5)
    return continuation_run(plan, continuation_setup(dc_std, worked_spec))


@pytest.fixture(scope="session")
def eta_legs(dc_std, worked_spec):
    plan = ContinuationPlan(param="eta", start=1e-1, factor=0.5, count=5, R0=2.5)
    return continuation_run(plan, continuation_setup(dc_std, worked_spec))
