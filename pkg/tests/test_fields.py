import numpy as np
import pytest

from dcns.errors import DcnsError
from dcns.fields import Grid, ScalarField, ddx, integrate, lp_norm


def test_grid_nodes():
    g = Grid(L=1.0, N=10)
    assert g.dx == pytest.approx(0.2)
    assert g.x[0] == pytest.approx(-0.9)
    assert g.x[-1] == pytest.approx(0.9)
    assert np.all(np.diff(g.x) > 0)


def test_grid_validation():
    with pytest.raises(DcnsError):
        Grid(L=1.0, N=4)
    with pytest.raises(DcnsError):
        Grid(L=-1.0, N=16)
    g = Grid(L=1.0, N=16)
    with pytest.raises(DcnsError):
        g.check(np.zeros(8))
    with pytest.raises(DcnsError):
        g.check(np.full(16, np.nan))


def test_ddx_constant_and_linear_exact():
    g = Grid(L=1.5, N=32)
    assert np.allclose(g.ddx(np.full(32, 3.7)), 0.0, atol=1e-14)
    # one-sided second-order end stencils are exact for linears too
    assert np.allclose(g.ddx(g.x), 1.0, rtol=0, atol=1e-13)


def test_ddx_second_order_refinement():
    errs = []
    for n in (64, 128):
        g = Grid(L=1.0, N=n)
        f = np.sin(np.pi * g.x / g.L)
        exact = (np.pi / g.L) * np.cos(np.pi * g.x / g.L)
        errs.append(np.max(np.abs(g.ddx(f) - exact)))
    assert 3.0 < errs[0] / errs[1] < 5.0


def test_d2dx2_quadratic_exact():
    g = Grid(L=1.0, N=32)
    out = g.d2dx2(g.x ** 2)
    assert np.allclose(out, 2.0, rtol=0, atol=1e-11)


def test_operators_linear():
    g = Grid(L=2.0, N=64)
    rng = np.random.default_rng(0)
    f, h = rng.normal(size=64), rng.normal(size=64)
    a, b = 1.7, -0.3
    assert np.allclose(g.ddx(a * f + b * h), a * g.ddx(f) + b * g.ddx(h),
                       atol=1e-12)
    assert np.allclose(g.d2dx2(a * f + b * h), a * g.d2dx2(f) + b * g.d2dx2(h),
                       atol=1e-10)


def test_integrate_constant_exact():
    g = Grid(L=1.0, N=100)
    assert g.integrate(np.ones(100)) == pytest.approx(2.0, abs=1e-14)


def test_l2_norm_of_sine():
    g = Grid(L=1.0, N=400)
    f = np.sin(np.pi * g.x)
    # integral of sin^2 over [-1, 1] is 1
    assert g.lp_norm(f, 2) == pytest.approx(1.0, abs=1e-4)


def test_norm_variants_and_errors():
    g = Grid(L=1.0, N=16)
    f = np.linspace(-1, 2, 16)
    assert g.lp_norm(f, np.inf) == pytest.approx(2.0)
    with pytest.raises(DcnsError):
        g.lp_norm(f, 0)


def test_discrete_hoelder_bound():
    g = Grid(L=1.0, N=64)
    rng = np.random.default_rng(1)
    for _ in range(10):
        f = rng.normal(size=64)
        for p in (1, 2, 3, 6):
            assert g.lp_norm(f, np.inf) >= g.lp_norm(f, p) * (2 * g.L) ** (-1.0 / p) - 1e-12


def test_upwind_deriv_direction():
    g = Grid(L=1.0, N=16)
    f = g.x.copy()
    v_pos = np.ones(16)
    v_neg = -np.ones(16)
    assert np.allclose(g.upwind_deriv(f, v_pos, f[0] - g.dx, f[-1] + g.dx), 1.0)
    assert np.allclose(g.upwind_deriv(f, v_neg, f[0] - g.dx, f[-1] + g.dx), 1.0)


def test_window_mask():
    g = Grid(L=2.0, N=32)
    mask = g.window(1.0)
    assert np.all(np.abs(g.x[mask]) <= 1.0)
    assert np.all(np.abs(g.x[~mask]) > 1.0)


def test_scalar_field_wrappers():
    g = Grid(L=1.0, N=16)
    f = ScalarField(g, g.x ** 2)
    assert np.allclose(ddx(f).values, 2 * g.x, atol=1e-12)
    assert integrate(f) == pytest.approx(2.0 / 3.0, abs=1e-2)
    assert lp_norm(f, np.inf) <= 1.0
    with pytest.raises(DcnsError):
        ScalarField(g, np.ones(4))
