import numpy as np
import pytest

from dcns.errors import InadmissibleKappa, NonpositiveCoefficient, SupportTooWide
from dcns.fields import Grid
from dcns.initial_data import (InitSpec, check_compatibility, gen_initial,
                               kappa_bounds, velocity_bump)
from dcns.params import ModelParams, validate_params
from dcns.reformulation import ReformState, pospow


@pytest.fixture
def grid():
    return Grid(L=5.0, N=256)


def test_kappa_interval_worked_values(dc_std):
    lo, hi = kappa_bounds(dc_std, 24.0)
    assert lo == pytest.approx(0.625, abs=1e-12)
    assert hi == pytest.approx(0.875 / 1.2, abs=1e-12)


def test_admissible_kappa_accepted(grid, dc_std, worked_spec):
    r0 = gen_initial(worked_spec, grid, dc_std)
    assert np.all(r0.phi > worked_spec.eta)
    assert np.all(r0.l > 0)


def test_empty_interval_rejected(grid, dc_std):
    spec = InitSpec(kappa=0.7, q=6.0, u0_amp=0.0, u0_radius=1.0, eta=1e-2)
    with pytest.raises(InadmissibleKappa, match="empty"):
        gen_initial(spec, grid, dc_std)


def test_out_of_interval_rejected_strict_warned_lenient(grid, dc_std):
    spec = InitSpec(kappa=0.3, q=24.0, u0_amp=0.0, u0_radius=1.0, eta=1e-2)
    with pytest.raises(InadmissibleKappa, match="kappa"):
        gen_initial(spec, grid, dc_std)
    with pytest.warns(UserWarning, match="kappa"):
        gen_initial(spec, grid, dc_std, strict=False)


def test_support_and_lift_guards(grid, dc_std):
    with pytest.raises(SupportTooWide):
        gen_initial(InitSpec(kappa=0.7, u0_radius=5.0, eta=1e-2), grid, dc_std)
    with pytest.raises(NonpositiveCoefficient):
        gen_initial(InitSpec(kappa=0.7, u0_radius=1.0, eta=0.0), grid, dc_std)


def test_zero_amplitude_velocity(grid, dc_std, worked_spec):
    from dataclasses import replace
    r0 = gen_initial(replace(worked_spec, u0_amp=0.0), grid, dc_std)
    assert np.allclose(r0.u, 0.0)


def test_bump_is_c3_compact():
    x = np.linspace(-3, 3, 1201)
    b = velocity_bump(x, 1.0, 2.0)
    assert np.all(b[np.abs(x) >= 2.0] == 0.0)
    assert b[600] == pytest.approx(1.0)
    # third divided difference stays bounded through the seam
    d3 = np.diff(b, 3) / (x[1] - x[0]) ** 3
    assert np.max(np.abs(d3)) < 10.0


def test_eta_lift_monotone(grid, dc_std, worked_spec):
    from dataclasses import replace
    r1 = gen_initial(worked_spec, grid, dc_std)
    r2 = gen_initial(replace(worked_spec, eta=2e-2), grid, dc_std)
    assert np.min(r2.phi) > np.min(r1.phi)
    assert np.allclose(r1.u, r2.u)
    assert np.allclose(r1.l, r2.l)


def test_psi0_bounded_and_refinement_stable(dc_std, worked_spec):
    norms = []
    for n in (256, 512):
        r0 = gen_initial(worked_spec, Grid(L=5.0, N=n), dc_std)
        norms.append(np.max(np.abs(r0.psi)))
    assert np.isfinite(norms).all()
    assert abs(norms[1] / norms[0] - 1.0) < 0.1


def test_compat_zero_data_zero_norms(grid, dc_std, worked_spec):
    from dataclasses import replace
    r0 = gen_initial(replace(worked_spec, u0_amp=0.0, s0_amp=0.0), grid, dc_std)
    rep = check_compatibility(r0, dc_std)
    assert rep.g1_l2 == 0.0 and rep.g2_l2 == 0.0 and rep.g3_l2 == 0.0
    assert rep.g4_l2 == pytest.approx(0.0, abs=1e-12)


def test_compat_norms_finite_and_refinement_stable(dc_std, worked_spec):
    coarse = check_compatibility(
        gen_initial(worked_spec, Grid(L=5.0, N=256), dc_std), dc_std)
    fine = check_compatibility(
        gen_initial(worked_spec, Grid(L=5.0, N=512), dc_std), dc_std,
        coarse=coarse)
    for key, ratio in fine.trend.items():
        assert abs(ratio - 1.0) < 0.1, f"{key} trend {ratio}"
    assert fine.passed


def _slow_entropy_state(L, dc, kappa=4.0, p=0.05, n_per_unit=32):
    # lenient decay exponents: the singular weight grows fast enough that a
    # slowly decaying entropy tail pushes g4 out of L^2
    grid = Grid(L=L, N=int(n_per_unit * L))
    eta = 1e-2
    rho0 = (1.0 + grid.x ** 2) ** (-kappa)
    phi0 = dc.phi_coef * pospow(rho0, dc.gamma - 1.0, "rho") + eta
    l0 = np.exp((1.0 + grid.x ** 2) ** (-p) / dc.c_v)
    h0 = pospow(phi0, 2 * dc.iota, "phi")
    psi0 = (dc.a * dc.delta / (dc.delta - 1.0)) * grid.ddx(h0)
    n0 = pospow(dc.a * h0, dc.b, "ah")
    return ReformState(grid=grid, phi=phi0, u=np.zeros(grid.N), l=l0, h=h0,
                       psi=psi0, n=n0, eta=eta)


def test_compat_flags_slowly_decaying_entropy(dc_std):
    rep_small = check_compatibility(_slow_entropy_state(5.0, dc_std), dc_std)
    rep_large = check_compatibility(_slow_entropy_state(10.0, dc_std), dc_std)
    assert rep_large.g4_l2 > 1.4 * rep_small.g4_l2
    gated = check_compatibility(_slow_entropy_state(10.0, dc_std), dc_std,
                                threshold=rep_small.g4_l2 * 1.2)
    assert not gated.passed


def test_grad_sqrt_h_reported(grid, dc_std, worked_spec):
    rep = check_compatibility(gen_initial(worked_spec, grid, dc_std), dc_std)
    assert np.isfinite(rep.grad_sqrt_h_l6)
    assert rep.grad_sqrt_h_l6 > 0.0


def test_family_side_condition(grid):
    # gamma + delta > 2 has no proven admissible family member
    dc = validate_params(ModelParams(gamma=1.9, nu=0.5, alpha=1.0, beta=0.0),
                         strict=False)
    spec = InitSpec(kappa=0.8, q=24.0, u0_radius=1.0, eta=1e-2)
    with pytest.raises(InadmissibleKappa, match="gamma \\+ delta"):
        gen_initial(spec, grid, dc)
