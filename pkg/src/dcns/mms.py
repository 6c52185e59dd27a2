"""Convergence-order suites built on exact and manufactured solutions.

Transport uses the exact characteristic solution of a translating profile;
the momentum step gets a manufactured steady solution (spatial order, with
the analytic forcing generated symbolically) and a semi-discrete exponential
decay (temporal order, with forcing built from the actual discrete operator
so the spatial error vanishes identically).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import sympy as sym

from .fields import Grid
from .linearized_solver import FrozenCoeffs, StepParams, step_phi, step_u
from .params import DerivedConsts, ModelParams, validate_params


@dataclass
class OrderResult:
    name: str
    order: float
    expected: tuple[float, float]
    errors: list[tuple[float, float]]

    @property
    def ok(self) -> bool:
        lo, hi = self.expected
        return lo <= self.order <= hi


def _default_consts() -> DerivedConsts:
    return validate_params(ModelParams(gamma=1.4, nu=1.0, alpha=1.0, beta=0.0))


def transport_order(levels: tuple[int, ...] = (128, 256, 512),
                    scheme: str = "upwind") -> OrderResult:
    """Order of the transport step on a translating smooth profile."""
    dc = _default_consts()
    L, speed, T, far = 2.0, 1.0, 0.5, 1.0
    cfl = 0.5
    errors: list[tuple[float, float]] = []
    for n in levels:
        grid = Grid(L=L, N=n)
        dt = cfl * grid.dx / speed
        steps = max(1, round(T / dt))
        dt = T / steps
        sp = StepParams(dt=dt, eps=0.0, cfl=cfl, scheme=scheme)
        v = np.full(grid.N, speed)
        coeffs = FrozenCoeffs(v=v, g=np.ones(grid.N), w=np.ones(grid.N))
        phi = far + np.exp(-4.0 * grid.x ** 2)
        for _ in range(steps):
            phi = step_phi(phi, coeffs, sp, dc, grid, far)
        exact = far + np.exp(-4.0 * (grid.x - speed * T) ** 2)
        errors.append((float(n), grid.lp_norm(phi - exact, 1)))
    order = math.log2(errors[-2][1] / errors[-1][1])
    expected = (0.7, 1.3) if scheme == "upwind" else (1.3, 4.0)
    return OrderResult(name=f"transport ({scheme})", order=order,
                       expected=expected, errors=errors)


def _momentum_symbolic(dc: DerivedConsts, eps: float):
    """Analytic fields and the forcing that makes u_star steady."""
    x = sym.symbols("x")
    u_s = (1 - x ** 2) ** 3 * sym.sin(2 * sym.pi * x)
    v_s = sym.Rational(3, 10) * (1 - x ** 2) ** 2 * sym.sin(sym.pi * x)
    phi_s = 2 + sym.cos(sym.pi * x) / 2
    l_s = sym.Rational(12, 10) + sym.sin(sym.pi * x) / 4
    h_s = sym.Rational(1, 2) + sym.cos(2 * sym.pi * x) / 8
    g_s = sym.Rational(4, 10) + sym.cos(sym.pi * x) / 10

    visc = dc.params.visc
    psi_s = dc.a * dc.delta / (dc.delta - 1.0) * sym.diff(h_s, x)
    q_v = visc * sym.diff(v_s, x)
    l_nu = l_s ** dc.nu
    forcing = (dc.a2 * l_nu * sym.sqrt(h_s ** 2 + eps ** 2) * (-visc) * sym.diff(u_s, x, 2)
               + v_s * sym.diff(v_s, x)
               + dc.a1 * phi_s * sym.diff(l_s, x)
               + l_s * sym.diff(phi_s, x)
               - dc.a2 * g_s * sym.diff(l_nu, x) * q_v
               - dc.a3 * l_nu * psi_s * q_v)
    names = {"u": u_s, "v": v_s, "phi": phi_s, "l": l_s, "h": h_s,
             "g": g_s, "psi": psi_s, "forcing": forcing}
    return {k: sym.lambdify(x, expr, "numpy") for k, expr in names.items()}


def momentum_spatial_order(levels: tuple[int, ...] = (64, 128, 256)) -> OrderResult:
    """Spatial order of the implicit momentum step with the full right side.

    A huge dt drives the backward-Euler update onto the discrete steady
    solution in a few solves, so the measured error is purely spatial.
    """
    dc = _default_consts()
    eps = 0.3
    funcs = _momentum_symbolic(dc, eps)
    errors: list[tuple[float, float]] = []
    for n in levels:
        grid = Grid(L=1.0, N=n)
        x = grid.x
        sp = StepParams(dt=1e6, eps=eps, cfl=1.0)
        coeffs = FrozenCoeffs(v=funcs["v"](x), g=funcs["g"](x),
                              w=np.ones(grid.N))
        phi, l, h = funcs["phi"](x), funcs["l"](x), funcs["h"](x)
        psi = funcs["psi"](x)
        forcing = funcs["forcing"](x)
        u = np.zeros(grid.N)
        for _ in range(3):
            u = step_u(u, phi, l, h, psi, coeffs, sp, dc, grid, forcing=forcing)
        errors.append((float(n), grid.lp_norm(u - funcs["u"](x), 2)))
    order = math.log2(errors[-2][1] / errors[-1][1])
    return OrderResult(name="momentum (spatial)", order=order,
                       expected=(1.7, 2.3), errors=errors)


def momentum_temporal_order(n: int = 64,
                            dts: tuple[int, ...] = (8, 16, 32)) -> OrderResult:
    """Temporal order of backward Euler against a semi-discrete exact decay."""
    dc = _default_consts()
    grid = Grid(L=1.0, N=n)
    x = grid.x
    y = x / grid.L
    w_vec = (1 - y ** 2) ** 3 * np.sin(2 * np.pi * y)
    phi = np.full(grid.N, 2.0)
    l = np.full(grid.N, 1.3)
    h = np.full(grid.N, 0.6)
    psi = np.zeros(grid.N)
    eps = 0.2
    coef = dc.a2 * l[0] ** dc.nu * math.sqrt(h[0] ** 2 + eps ** 2) * dc.params.visc

    # zero-ghost Laplacian, identical to the implicit matrix stencil
    wm = np.concatenate(([0.0], w_vec[:-1]))
    wp = np.concatenate((w_vec[1:], [0.0]))
    lap_w = (wm - 2.0 * w_vec + wp) / grid.dx ** 2

    T = 0.4
    coeffs = FrozenCoeffs(v=np.zeros(grid.N), g=np.zeros(grid.N),
                          w=np.ones(grid.N))
    errors: list[tuple[float, float]] = []
    for m in dts:
        dt = T / m
        sp = StepParams(dt=dt, eps=eps, cfl=1.0)
        u = w_vec.copy()
        for j in range(m):
            t_next = (j + 1) * dt
            forcing = -math.exp(-t_next) * (w_vec + coef * lap_w)
            u = step_u(u, phi, l, h, psi, coeffs, sp, dc, grid, forcing=forcing)
        exact = math.exp(-T) * w_vec
        errors.append((dt, grid.lp_norm(u - exact, np.inf)))
    order = math.log2(errors[-2][1] / errors[-1][1])
    return OrderResult(name="momentum (temporal)", order=order,
                       expected=(0.7, 1.3), errors=errors)


def run_suite(which: str = "all") -> list[OrderResult]:
    results = []
    if which in ("all", "transport"):
        results.append(transport_order())
    if which in ("all", "momentum"):
        results.append(momentum_spatial_order())
        results.append(momentum_temporal_order())
    if not results:
        raise ValueError(f"unknown mms suite {which!r}")
    return results
