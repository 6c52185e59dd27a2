"""Maps between physical (rho, u, S) and entropy-weighted (phi, u, l, h, psi, n)
variables, plus the 1-D viscous operators.

In one dimension the viscous flux, its dissipation, and the Lame operator
collapse to scalars:

    Q(u) = (2*alpha+beta) u_x,   H(u) = (2*alpha+beta) u_x^2,
    L(u) = -(2*alpha+beta) u_xx.

Fractional powers are evaluated as exp(p*log(x)) on strictly positive inputs;
nonpositive inputs raise instead of being clamped.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import NonpositiveDensity, NonpositiveField
from .fields import Grid
from .params import DerivedConsts, ModelParams


def pospow(x: np.ndarray, p: float, name: str) -> np.ndarray:
    """x**p via exp/log, requiring x > 0 everywhere."""
    x = np.asarray(x, dtype=float)
    if not np.all(x > 0.0):
        raise NonpositiveField(f"{name} must be strictly positive, min = {x.min():g}")
    return np.exp(p * np.log(x))


@dataclass
class PhysState:
    """Physical state (rho, u, S) with derived temperature, pressure, energy."""

    grid: Grid
    rho: np.ndarray
    u: np.ndarray
    S: np.ndarray
    theta: np.ndarray
    P: np.ndarray
    e: np.ndarray

    @classmethod
    def from_primitives(cls, grid: Grid, rho: np.ndarray, u: np.ndarray,
                        S: np.ndarray, dc: DerivedConsts) -> "PhysState":
        rho = grid.check(rho)
        u = grid.check(u)
        S = grid.check(S)
        if not np.all(rho > 0.0):
            raise NonpositiveDensity(f"min rho = {rho.min():g} <= 0")
        l = np.exp(S / dc.c_v)
        theta = (dc.A / dc.R) * pospow(rho, dc.gamma - 1.0, "rho") * l
        P = dc.A * pospow(rho, dc.gamma, "rho") * l
        e = dc.c_v * theta
        return cls(grid=grid, rho=rho, u=u, S=S, theta=theta, P=P, e=e)


@dataclass
class ReformState:
    """Solver state (phi, u, l, h, psi, n) at one time level.

    eta is the density lift of the current run, eps the artificial-viscosity
    parameter; both ride along so steps and diagnostics see them.  Relation
    residuals (h vs phi^(2 iota), psi vs its gradient form) are diagnostics,
    not construction-time asserts.
    """

    grid: Grid
    phi: np.ndarray
    u: np.ndarray
    l: np.ndarray
    h: np.ndarray
    psi: np.ndarray
    n: np.ndarray
    eta: float = 0.0
    eps: float = 0.0

    def copy(self) -> "ReformState":
        return replace(self, phi=self.phi.copy(), u=self.u.copy(), l=self.l.copy(),
                       h=self.h.copy(), psi=self.psi.copy(), n=self.n.copy())


def to_reformulated(p: PhysState, dc: DerivedConsts) -> ReformState:
    """Forward change of variables; psi is the numerical gradient of h."""
    if not np.all(p.rho > 0.0):
        raise NonpositiveDensity(f"min rho = {p.rho.min():g} <= 0")
    phi = dc.phi_coef * pospow(p.rho, dc.gamma - 1.0, "rho")
    l = np.exp(p.S / dc.c_v)
    h = pospow(phi, 2.0 * dc.iota, "phi")
    n = pospow(dc.a * h, dc.b, "a*h")
    psi = (dc.a * dc.delta / (dc.delta - 1.0)) * p.grid.ddx(h)
    return ReformState(grid=p.grid, phi=phi, u=p.u.copy(), l=l, h=h, psi=psi, n=n)


def from_reformulated(r: ReformState, dc: DerivedConsts) -> PhysState:
    """Invert the change of variables; requires phi > 0 and l > 0."""
    rho = pospow(r.phi / dc.phi_coef, 1.0 / (dc.gamma - 1.0), "phi")
    if not np.all(r.l > 0.0):
        raise NonpositiveField(f"min l = {r.l.min():g} <= 0")
    S = dc.c_v * np.log(r.l)
    return PhysState.from_primitives(r.grid, rho, r.u.copy(), S, dc)


def q_of(u: np.ndarray, grid: Grid, mp: ModelParams) -> np.ndarray:
    """Viscous flux Q(u) = (2*alpha+beta) u_x."""
    return mp.visc * grid.ddx(u)


def h_of(u: np.ndarray, grid: Grid, mp: ModelParams) -> np.ndarray:
    """Viscous dissipation H(u) = (2*alpha+beta) u_x^2, nonnegative."""
    ux = grid.ddx(u)
    return mp.visc * ux * ux


def lame_of(u: np.ndarray, grid: Grid, mp: ModelParams) -> np.ndarray:
    """Lame operator L(u) = -(2*alpha+beta) u_xx."""
    return -mp.visc * grid.d2dx2(u)
