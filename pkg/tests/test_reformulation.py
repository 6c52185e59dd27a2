import math

import numpy as np
import pytest

from dcns.errors import NonpositiveDensity, NonpositiveField
from dcns.fields import Grid
from dcns.params import ModelParams, validate_params
from dcns.reformulation import (PhysState, ReformState, from_reformulated,
                                h_of, lame_of, pospow, q_of, to_reformulated)


@pytest.fixture
def grid():
    return Grid(L=2.0, N=128)


def _phys(grid, dc, rho, u=None, S=None):
    u = np.zeros(grid.N) if u is None else u
    S = np.zeros(grid.N) if S is None else S
    return PhysState.from_primitives(grid, rho, u, S, dc)


def test_uniform_state_values(grid, dc_std):
    r = to_reformulated(_phys(grid, dc_std, np.ones(grid.N)), dc_std)
    assert np.allclose(r.phi, 3.5, rtol=1e-14)
    assert np.allclose(r.l, 1.0, rtol=1e-14)
    assert np.allclose(r.n, 1.0, rtol=1e-12)
    assert np.allclose(r.psi, 0.0, atol=1e-12)


def test_power_family_maps_through(grid, dc_std):
    kappa = 0.7
    rho = (1.0 + grid.x ** 2) ** (-kappa)
    r = to_reformulated(_phys(grid, dc_std, rho), dc_std)
    expected_phi = 3.5 * (1.0 + grid.x ** 2) ** (-kappa * (dc_std.gamma - 1.0))
    assert np.allclose(r.phi, expected_phi, rtol=1e-13)


def test_constant_entropy_gives_far_field_l(grid):
    dc = validate_params(ModelParams(gamma=1.4, nu=1.0, alpha=1.0, beta=0.0,
                                     S_bar=0.3))
    S = np.full(grid.N, 0.3)
    r = to_reformulated(_phys(grid, dc, np.ones(grid.N), S=S), dc)
    assert np.allclose(r.l, dc.l_bar, rtol=1e-14)


def test_round_trip_identity(grid, dc_std):
    rng = np.random.default_rng(5)
    rho = np.exp(rng.uniform(np.log(1e-5), np.log(50.0), size=grid.N))
    u = rng.normal(size=grid.N)
    S = rng.uniform(-2.0, 2.0, size=grid.N)
    p = _phys(grid, dc_std, rho, u=u, S=S)
    back = from_reformulated(to_reformulated(p, dc_std), dc_std)
    assert np.max(np.abs(back.rho / rho - 1.0)) < 1e-12
    assert np.allclose(back.u, u, atol=1e-15)
    assert np.max(np.abs(back.S - S)) < 1e-12
    assert np.max(np.abs(back.theta / p.theta - 1.0)) < 1e-12
    assert np.max(np.abs(back.P / p.P - 1.0)) < 1e-12


def test_inverse_map_values(grid, dc_std):
    r = ReformState(grid=grid, phi=np.full(grid.N, 3.5), u=np.zeros(grid.N),
                    l=np.full(grid.N, math.e), h=np.ones(grid.N),
                    psi=np.zeros(grid.N), n=np.ones(grid.N))
    p = from_reformulated(r, dc_std)
    assert np.allclose(p.rho, 1.0, rtol=1e-13)
    assert np.allclose(p.S, dc_std.c_v, rtol=1e-13)


def test_positivity_errors(grid, dc_std):
    rho = np.ones(grid.N)
    rho[3] = 0.0
    with pytest.raises(NonpositiveDensity):
        _phys(grid, dc_std, rho)
    bad = ReformState(grid=grid, phi=np.zeros(grid.N), u=np.zeros(grid.N),
                      l=np.ones(grid.N), h=np.ones(grid.N),
                      psi=np.zeros(grid.N), n=np.ones(grid.N))
    with pytest.raises(NonpositiveField):
        from_reformulated(bad, dc_std)
    with pytest.raises(NonpositiveField):
        pospow(np.array([-1.0]), 0.5, "x")


def test_viscous_operators_on_constants(grid, dc_std):
    u = np.full(grid.N, 2.0)
    mp = dc_std.params
    assert np.allclose(q_of(u, grid, mp), 0.0, atol=1e-13)
    assert np.allclose(h_of(u, grid, mp), 0.0, atol=1e-13)
    assert np.allclose(lame_of(u, grid, mp), 0.0, atol=1e-11)


def test_dissipation_matches_closed_form(dc_std):
    grid = Grid(L=2.0, N=256)
    u = np.sin(grid.x)
    expected = 2.0 * np.cos(grid.x) ** 2
    assert np.max(np.abs(h_of(u, grid, dc_std.params) - expected)) < 5e-4


def test_dissipation_nonnegative(dc_std):
    grid = Grid(L=2.0, N=128)
    rng = np.random.default_rng(9)
    for _ in range(5):
        u = rng.normal(size=grid.N)
        assert np.all(h_of(u, grid, dc_std.params) >= 0.0)


def test_h_form_equivalence_refines_at_second_order(dc_std):
    # div(u Q(u)) - u div Q(u) against the closed dissipation form
    mp = dc_std.params
    errs = []
    for n in (128, 256, 512):
        grid = Grid(L=2.0, N=n)
        u = np.sin(grid.x)
        q = q_of(u, grid, mp)
        two_form = grid.ddx(u * q) - u * grid.ddx(q)
        errs.append(grid.lp_norm(two_form - h_of(u, grid, mp), 2))
    slope = math.log2(errs[-2] / errs[-1])
    assert slope >= 1.8


def test_psi_consistent_with_density_gradient_form(grid, dc_std):
    # a*h equals rho^(delta-1) pointwise, so the two psi forms agree
    rho = (1.0 + grid.x ** 2) ** (-0.7)
    r = to_reformulated(_phys(grid, dc_std, rho), dc_std)
    alt = (dc_std.delta / (dc_std.delta - 1.0)) * grid.ddx(
        pospow(rho, dc_std.delta - 1.0, "rho"))
    assert np.max(np.abs(r.psi - alt)) < 1e-10 * max(1.0, np.max(np.abs(alt)))


def test_exponent_identity_through_both_maps(grid, dc_std):
    rng = np.random.default_rng(12)
    rho = np.exp(rng.uniform(np.log(1e-6), np.log(1e3), size=grid.N))
    r = to_reformulated(_phys(grid, dc_std, rho), dc_std)
    lhs = pospow(dc_std.a * pospow(r.phi, 2 * dc_std.iota, "phi"), dc_std.b, "ah")
    rho_back = from_reformulated(r, dc_std).rho
    rhs = pospow(rho_back, 2.0 - dc_std.delta - dc_std.gamma, "rho")
    assert np.max(np.abs(lhs / rhs - 1.0)) < 1e-10
