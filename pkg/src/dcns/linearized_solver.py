"""One time step of the linearized system with frozen coefficients (v, g, w).

Sub-steps, in dependency order phi -> h -> psi -> l -> u:

    phi_t + v phi_x + (gamma-1) phi v_x = 0        (transport + reaction)
    h_t   + v h_x   + (delta-1) g   v_x = 0        (source uses frozen g)
    psi   = (a delta/(delta-1)) h_x                (reconstructed, not evolved)
    l_t   + v l_x   = a4 w^nu (a h)^b g^2 H(v)     (nonnegative source)
    u_t + v v_x + a1 phi l_x + l phi_x + a2 l^nu sqrt(h^2+eps^2) L u
        = a2 g (l^nu)_x Q(v) + a3 l^nu psi Q(v)

Transport is first-order upwind (monotone, so the entropy-floor and
positivity invariants are literally assertable); a cubic semi-Lagrangian
variant exists for accuracy studies and is exempt from those invariants.
Only the Lame term is implicit: its coefficient a2 l^nu sqrt(h^2+eps^2)
blows up where the flow nears vacuum (iota < 0 makes h large there), and
backward Euler removes the dt ~ dx^2/coefficient restriction at the price
of one tridiagonal solve per step.  Far-field ghost values are the
constants (eta, 0, l_bar, eta^(2 iota)) of the lifted problem.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .errors import CFLViolation, NonpositiveCoefficient, SingularTridiagonal
from .fields import Grid
from .params import DerivedConsts
from .reformulation import ReformState, pospow

UPWIND = "upwind"
SEMI_LAGRANGIAN = "semi_lagrangian"


@dataclass
class FrozenCoeffs:
    """Previous-iterate fields frozen for one linear pass.

    v is the velocity iterate, g the h-iterate, w the l-iterate.  w must be
    strictly positive where it is consumed (w^nu in the entropy source);
    that is checked at the point of use so manufactured-solution studies can
    carry sign-free g.
    """

    v: np.ndarray
    g: np.ndarray
    w: np.ndarray


@dataclass(frozen=True)
class StepParams:
    """Time-step controls: dt, artificial viscosity eps, advective CFL target."""

    dt: float
    eps: float = 0.0
    cfl: float = 0.9
    scheme: str = UPWIND

    def __post_init__(self):
        if not (self.dt > 0.0 and math.isfinite(self.dt)):
            raise CFLViolation(f"dt = {self.dt} must be positive and finite")
        if self.eps < 0.0:
            raise NonpositiveCoefficient(f"eps = {self.eps} must be >= 0")
        if self.scheme not in (UPWIND, SEMI_LAGRANGIAN):
            raise NonpositiveCoefficient(f"unknown advection scheme {self.scheme!r}")


def _check_cfl(grid: Grid, v: np.ndarray, sp: StepParams) -> None:
    vmax = float(np.max(np.abs(v))) if v.size else 0.0
    if sp.dt * vmax > sp.cfl * grid.dx * (1.0 + 1e-12):
        raise CFLViolation(
            f"dt = {sp.dt:g} exceeds cfl*dx/|v|_inf = {sp.cfl * grid.dx / vmax:g}")


def advect(grid: Grid, f: np.ndarray, v: np.ndarray, sp: StepParams,
           far_left: float, far_right: float) -> np.ndarray:
    """Pure transport update for f_t + v f_x = 0 over one step."""
    _check_cfl(grid, v, sp)
    if sp.scheme == UPWIND:
        return f - sp.dt * v * grid.upwind_deriv(f, v, far_left, far_right)
    return _semi_lagrangian(grid, f, v, sp.dt, far_left, far_right)


def _semi_lagrangian(grid: Grid, f: np.ndarray, v: np.ndarray, dt: float,
                     far_left: float, far_right: float) -> np.ndarray:
    # Cubic Lagrange interpolation at the characteristic feet x - v*dt.
    # Three constant ghost cells per side cover feet up to CFL <= 1 plus the
    # interpolation stencil; beyond that the constant far field is exact.
    pad = 3
    ext = np.concatenate((np.full(pad, far_left), f, np.full(pad, far_right)))
    feet = grid.x - v * dt
    s = (feet + grid.L) / grid.dx - 0.5 + pad
    j = np.clip(np.floor(s).astype(int), 1, ext.size - 3)
    t = s - j
    fm1, f0, f1, f2 = ext[j - 1], ext[j], ext[j + 1], ext[j + 2]
    w_m1 = -t * (t - 1.0) * (t - 2.0) / 6.0
    w_0 = (t * t - 1.0) * (t - 2.0) / 2.0
    w_1 = -t * (t + 1.0) * (t - 2.0) / 2.0
    w_2 = t * (t * t - 1.0) / 6.0
    return w_m1 * fm1 + w_0 * f0 + w_1 * f1 + w_2 * f2


def step_phi(phi: np.ndarray, coeffs: FrozenCoeffs, sp: StepParams,
             dc: DerivedConsts, grid: Grid, far_phi: float) -> np.ndarray:
    """Transport phi and apply the (gamma-1) phi div v contraction factor."""
    phi_adv = advect(grid, phi, coeffs.v, sp, far_phi, far_phi)
    divv = grid.ddx(coeffs.v)
    return phi_adv * (1.0 - (dc.gamma - 1.0) * sp.dt * divv)


def step_h(h: np.ndarray, coeffs: FrozenCoeffs, sp: StepParams,
           dc: DerivedConsts, grid: Grid, far_h: float) -> np.ndarray:
    """Transport h with the frozen-g source (delta-1) g div v."""
    h_adv = advect(grid, h, coeffs.v, sp, far_h, far_h)
    divv = grid.ddx(coeffs.v)
    return h_adv - sp.dt * (dc.delta - 1.0) * coeffs.g * divv


def psi_from_h(h: np.ndarray, dc: DerivedConsts, grid: Grid) -> np.ndarray:
    """Reconstruct psi = (a delta/(delta-1)) h_x."""
    return (dc.a * dc.delta / (dc.delta - 1.0)) * grid.ddx(h)


def step_l(l: np.ndarray, h_new: np.ndarray, coeffs: FrozenCoeffs,
           sp: StepParams, dc: DerivedConsts, grid: Grid,
           far_l: float) -> np.ndarray:
    """Transport l and add the nonnegative dissipation source."""
    if not np.all(coeffs.w > 0.0):
        raise NonpositiveCoefficient(f"min w = {coeffs.w.min():g} <= 0")
    if not np.all(h_new > 0.0):
        raise NonpositiveCoefficient(f"min h = {h_new.min():g} <= 0")
    l_adv = advect(grid, l, coeffs.v, sp, far_l, far_l)
    vx = grid.ddx(coeffs.v)
    h_v = dc.params.visc * vx * vx
    n_new = pospow(dc.a * h_new, dc.b, "a*h")
    source = dc.a4 * pospow(coeffs.w, dc.nu, "w") * n_new * coeffs.g ** 2 * h_v
    return l_adv + sp.dt * source


def implicit_diffusion(grid: Grid, rhs: np.ndarray, coef: np.ndarray,
                       dt: float) -> np.ndarray:
    """Solve (I - dt * coef * Lap) u = rhs with zero-ghost Dirichlet ends.

    coef is the per-node diffusion coefficient; it must be nonnegative for
    the tridiagonal matrix to stay diagonally dominant.
    """
    coef = np.asarray(coef, dtype=float)
    if not np.all(np.isfinite(coef)):
        raise SingularTridiagonal("non-finite diffusion coefficient")
    if np.any(coef < 0.0):
        raise SingularTridiagonal(
            f"negative diffusion coefficient (min = {coef.min():g}) breaks "
            "diagonal dominance")
    r = dt * coef / grid.dx ** 2
    diag = 1.0 + 2.0 * r
    upper = np.concatenate(([0.0], -r[:-1]))
    lower = np.concatenate((-r[1:], [0.0]))
    ab = np.vstack((upper, diag, lower))
    u = solve_banded((1, 1), ab, rhs)
    if not np.all(np.isfinite(u)):
        raise SingularTridiagonal("banded solve returned non-finite values")
    return u


def step_u(u: np.ndarray, phi_new: np.ndarray, l_new: np.ndarray,
           h_new: np.ndarray, psi_new: np.ndarray, coeffs: FrozenCoeffs,
           sp: StepParams, dc: DerivedConsts, grid: Grid,
           forcing: np.ndarray | None = None) -> np.ndarray:
    """Backward-Euler momentum update; only the Lame term is implicit."""
    v = coeffs.v
    vx = grid.ddx(v)
    q_v = dc.params.visc * vx
    l_nu = pospow(l_new, dc.nu, "l")
    rhs = (-v * vx
           - dc.a1 * phi_new * grid.ddx(l_new)
           - l_new * grid.ddx(phi_new)
           + dc.a2 * coeffs.g * grid.ddx(l_nu) * q_v
           + dc.a3 * l_nu * psi_new * q_v)
    if forcing is not None:
        rhs = rhs + forcing
    coef = dc.a2 * l_nu * np.sqrt(h_new * h_new + sp.eps * sp.eps) * dc.params.visc
    return implicit_diffusion(grid, u + sp.dt * rhs, coef, sp.dt)


def advance(state: ReformState, coeffs: FrozenCoeffs, sp: StepParams,
            dc: DerivedConsts) -> ReformState:
    """One full linearized step in the order phi -> h -> psi -> l -> u."""
    grid = state.grid
    if not state.eta > 0.0:
        raise NonpositiveCoefficient(
            f"eta = {state.eta:g} must be > 0 for far-field ghost values")
    far_h = state.eta ** (2.0 * dc.iota)
    phi1 = step_phi(state.phi, coeffs, sp, dc, grid, state.eta)
    h1 = step_h(state.h, coeffs, sp, dc, grid, far_h)
    psi1 = psi_from_h(h1, dc, grid)
    l1 = step_l(state.l, h1, coeffs, sp, dc, grid, dc.l_bar)
    u1 = step_u(state.u, phi1, l1, h1, psi1, coeffs, sp, dc, grid)
    n1 = pospow(dc.a * h1, dc.b, "a*h")
    return ReformState(grid=grid, phi=phi1, u=u1, l=l1, h=h1, psi=psi1, n=n1,
                       eta=state.eta, eps=sp.eps)
