"""Nonlinear outer loop: iterate the linear solver against its own output.

Each pass freezes the previous iterate's trajectory as coefficients
(v, g, w) = (u^k, l^k, h^k) and re-solves the linear problem from the same
initial state.  The zeroth iterate seeds the loop by transporting
(phi, l, h) along the fixed initial velocity and diffusing u with the
transported h as coefficient.  Contraction is monitored through the
functional

    Gamma = sup_t ||phi_bar||_H1^2 + sup_t |psi_bar|_2^2
          + sup_t |(l_bar)_x|_2^2 + alpha a2 v1 sup_t |sqrt(h) (u_bar)_x|_2^2
          + sup_t |l^(-nu/2) u_bar|_2^2,

where bars are differences of consecutive iterates and the weights use the
newer iterate's fields.  Failure of the ratio test signals that the time
window is too large; the halving wrapper mirrors the shrinking existence
time of the underlying construction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import CFLViolation, LegFailed, NoContraction, ShapeMismatch
from .fields import Grid
from .initial_data import InitSpec, gen_initial
from .linearized_solver import (FrozenCoeffs, StepParams, advance, advect,
                                implicit_diffusion)
from .params import DerivedConsts
from .reformulation import ReformState, pospow

VELOCITY_FLOOR = 1e-12


@dataclass
class Trajectory:
    """Time samples of one iterate: states[j] at times[j]."""

    times: np.ndarray
    states: list[ReformState]

    @property
    def final(self) -> ReformState:
        return self.states[-1]

    def __len__(self) -> int:
        return len(self.states)


@dataclass
class IterationReport:
    """Contraction bookkeeping for one Picard pass."""

    k: int
    gamma_metric: float
    components: dict[str, float]
    ratio: float | None
    converged: bool
    ratio_history: list[float] = field(default_factory=list)


@dataclass
class PicardResult:
    trajectory: Trajectory
    reports: list[IterationReport]
    converged: bool
    T: float
    dt: float
    halvings: int = 0


@dataclass(frozen=True)
class ContinuationPlan:
    """Geometric schedule for one regularization parameter.

    param is "eps" or "eta"; legs use value_j = start * factor^j for
    j = 0..count-1.  R0 bounds the compact window used for eta studies,
    norm_p the comparison norm exponent.
    """

    param: str
    start: float
    factor: float
    count: int
    R0: float
    norm_p: float = 2.0


@dataclass
class LegResult:
    value: float
    iterations: int
    diff_u: float | None
    diff_phi: float | None
    min_phi_window: float | None


@dataclass(frozen=True)
class RunSetup:
    """Everything a picard run needs besides the schedule parameter."""

    grid: Grid
    dc: DerivedConsts
    init: InitSpec
    T: float
    cfl: float = 0.4
    dt_max: float = 2.5e-4
    eps: float = 0.0
    tol: float = 1e-12
    max_iters: int = 30
    upsilon1: float = 1.0
    max_halvings: int = 6
    strict: bool = True
    scheme: str = "upwind"


def _time_grid(r0: ReformState, T: float, cfl: float, dt_max: float) -> tuple[float, int]:
    vmax = max(float(np.max(np.abs(r0.u))), VELOCITY_FLOOR)
    dt = min(cfl * r0.grid.dx / vmax, dt_max, T)
    n = max(1, math.ceil(T / dt - 1e-12))
    return T / n, n


def _zeroth_iterate(r0: ReformState, dc: DerivedConsts, sp: StepParams,
                    n_steps: int) -> Trajectory:
    """Seed trajectory: transport (phi, l, h) along u0, diffuse u with h."""
    grid = r0.grid
    far_h = r0.eta ** (2.0 * dc.iota)
    states = [r0.copy()]
    state = r0.copy()
    v0 = r0.u.copy()
    for _ in range(n_steps):
        phi = advect(grid, state.phi, v0, sp, r0.eta, r0.eta)
        l = advect(grid, state.l, v0, sp, dc.l_bar, dc.l_bar)
        h = advect(grid, state.h, v0, sp, far_h, far_h)
        u = implicit_diffusion(grid, state.u, h, sp.dt)
        psi = (dc.a * dc.delta / (dc.delta - 1.0)) * grid.ddx(h)
        n = pospow(dc.a * h, dc.b, "a*h")
        state = ReformState(grid=grid, phi=phi, u=u, l=l, h=h, psi=psi, n=n,
                            eta=r0.eta, eps=sp.eps)
        states.append(state)
    times = sp.dt * np.arange(n_steps + 1)
    return Trajectory(times=times, states=states)


def _linear_pass(r0: ReformState, dc: DerivedConsts, frozen: Trajectory,
                 sp: StepParams) -> Trajectory:
    states = [r0.copy()]
    state = r0.copy()
    for j in range(len(frozen) - 1):
        prev = frozen.states[j]
        coeffs = FrozenCoeffs(v=prev.u, g=prev.h, w=prev.l)
        state = advance(state, coeffs, sp, dc)
        states.append(state)
    return Trajectory(times=frozen.times.copy(), states=states)


def gamma_components(prev: Trajectory, new: Trajectory, dc: DerivedConsts,
                     upsilon1: float) -> dict[str, float]:
    """Sup-in-time norms of the iterate differences (unsquared)."""
    if len(prev) != len(new):
        raise ShapeMismatch(f"{len(prev)} vs {len(new)} time samples")
    if not np.allclose(prev.times, new.times):
        raise ShapeMismatch("iterate trajectories sample different times")
    grid = new.states[0].grid
    if prev.states[0].grid is not grid and prev.states[0].grid != grid:
        raise ShapeMismatch("iterate trajectories live on different grids")
    sup = dict.fromkeys(("phi_h1", "psi_l2", "grad_l_l2",
                         "sqrt_h_grad_u_l2", "weighted_u_l2"), 0.0)
    for sp_, sn in zip(prev.states, new.states):
        dphi = sn.phi - sp_.phi
        du = sn.u - sp_.u
        dl = sn.l - sp_.l
        dpsi = sn.psi - sp_.psi
        phi_h1 = math.sqrt(grid.lp_norm(dphi, 2) ** 2
                           + grid.lp_norm(grid.ddx(dphi), 2) ** 2)
        sup["phi_h1"] = max(sup["phi_h1"], phi_h1)
        sup["psi_l2"] = max(sup["psi_l2"], grid.lp_norm(dpsi, 2))
        sup["grad_l_l2"] = max(sup["grad_l_l2"], grid.lp_norm(grid.ddx(dl), 2))
        sup["sqrt_h_grad_u_l2"] = max(
            sup["sqrt_h_grad_u_l2"],
            grid.lp_norm(pospow(sn.h, 0.5, "h") * grid.ddx(du), 2))
        sup["weighted_u_l2"] = max(
            sup["weighted_u_l2"],
            grid.lp_norm(pospow(sn.l, -dc.nu / 2.0, "l") * du, 2))
    return sup


def gamma_metric(prev: Trajectory, new: Trajectory, dc: DerivedConsts,
                 upsilon1: float = 1.0) -> float:
    """Weighted sum of squared sup norms; zero iff the iterates coincide."""
    c = gamma_components(prev, new, dc, upsilon1)
    return (c["phi_h1"] ** 2 + c["psi_l2"] ** 2 + c["grad_l_l2"] ** 2
            + dc.params.alpha * dc.a2 * upsilon1 * c["sqrt_h_grad_u_l2"] ** 2
            + c["weighted_u_l2"] ** 2)


def picard_solve(r0: ReformState, dc: DerivedConsts, T: float, *,
                 tol: float = 1e-12, max_iters: int = 30,
                 upsilon1: float = 1.0, cfl: float = 0.4,
                 dt_max: float = 2.5e-4, eps: float | None = None,
                 scheme: str = "upwind") -> PicardResult:
    """Iterate the linear solver to its fixed point over [0, T].

    Convergence: Gamma < tol, or three consecutive contracting ratios with
    Gamma < 10 tol.  Three consecutive non-contracting ratios raise
    NoContraction (the window is too large), except on a round-off plateau
    within 100 tol, which counts as converged.
    """
    if eps is None:
        eps = r0.eps
    dt, n_steps = _time_grid(r0, T, cfl, dt_max)
    sp = StepParams(dt=dt, eps=eps, cfl=cfl, scheme=scheme)
    r0 = replace(r0, eps=eps)

    prev = _zeroth_iterate(r0, dc, sp, n_steps)
    reports: list[IterationReport] = []
    ratios: list[float] = []
    gamma_prev: float | None = None
    rising = 0
    falling = 0
    converged = False

    for k in range(1, max_iters + 1):
        new = _linear_pass(r0, dc, prev, sp)
        comps = gamma_components(prev, new, dc, upsilon1)
        gam = (comps["phi_h1"] ** 2 + comps["psi_l2"] ** 2
               + comps["grad_l_l2"] ** 2
               + dc.params.alpha * dc.a2 * upsilon1 * comps["sqrt_h_grad_u_l2"] ** 2
               + comps["weighted_u_l2"] ** 2)
        ratio = (gam / gamma_prev) if gamma_prev not in (None, 0.0) else None
        if ratio is not None:
            ratios.append(ratio)
            if ratio < 1.0:
                falling += 1
                rising = 0
            else:
                rising += 1
                falling = 0
        prev = new
        gamma_prev = gam
        done = gam < tol or (falling >= 3 and gam < 10.0 * tol)
        plateau = rising >= 3 and gam < 100.0 * tol
        reports.append(IterationReport(k=k, gamma_metric=gam, components=comps,
                                       ratio=ratio, converged=done or plateau,
                                       ratio_history=list(ratios)))
        if done or plateau:
            converged = True
            break
        if rising >= 3:
            raise NoContraction(
                f"Gamma ratio >= 1 for 3 consecutive iterates at k = {k} "
                f"(Gamma = {gam:.3e}); the time window T = {T:g} is too large")

    return PicardResult(trajectory=prev, reports=reports, converged=converged,
                        T=T, dt=dt)


def solve_with_halving(r0: ReformState, dc: DerivedConsts, T: float, *,
                       max_halvings: int = 6, **kwargs) -> PicardResult:
    """Retry picard_solve on shrinking windows after contraction failures."""
    halvings = 0
    while True:
        try:
            result = picard_solve(r0, dc, T, **kwargs)
            result.halvings = halvings
            return result
        except (NoContraction, CFLViolation):
            if halvings >= max_halvings:
                raise
            halvings += 1
            T *= 0.5


def fixed_point_residual(result: PicardResult, r0: ReformState,
                         dc: DerivedConsts, upsilon1: float = 1.0) -> float:
    """Gamma distance produced by re-feeding the converged trajectory."""
    sp = StepParams(dt=result.dt, eps=result.trajectory.final.eps,
                    cfl=1.0, scheme="upwind")
    refed = _linear_pass(r0, dc, result.trajectory, sp)
    return gamma_metric(result.trajectory, refed, dc, upsilon1)


def _window_norm(grid: Grid, f: np.ndarray, mask: np.ndarray, p: float) -> float:
    return float((np.sum(np.abs(f[mask]) ** p) * grid.dx) ** (1.0 / p))


def continuation_run(plan: ContinuationPlan, setup: RunSetup) -> list[LegResult]:
    """Run the geometric schedule and tabulate pairwise leg differences.

    eps legs compare final velocities in L^p over the whole box; eta legs
    compare (phi - eta) and u on the compact window [-R0, R0] and record the
    window minimum of phi over the whole trajectory (the discrete locally
    uniform positivity level).  Legs share one time window; a leg that fails
    to converge raises LegFailed.
    """
    if plan.param not in ("eps", "eta"):
        raise LegFailed(0, f"unknown continuation parameter {plan.param!r}")
    grid, dc = setup.grid, setup.dc
    mask = grid.window(plan.R0)
    results: list[LegResult] = []
    prev_final: ReformState | None = None
    prev_value: float | None = None
    for j in range(plan.count):
        value = plan.start * plan.factor ** j
        init = setup.init
        eps = setup.eps
        if plan.param == "eps":
            eps = value
        else:
            init = replace(init, eta=value)
        r0 = gen_initial(init, grid, dc, strict=setup.strict, eps=eps)
        try:
            res = picard_solve(r0, dc, setup.T, tol=setup.tol,
                               max_iters=setup.max_iters,
                               upsilon1=setup.upsilon1, cfl=setup.cfl,
                               dt_max=setup.dt_max, eps=eps,
                               scheme=setup.scheme)
        except NoContraction as exc:
            raise LegFailed(j, str(exc)) from exc
        if not res.converged:
            raise LegFailed(j, f"no convergence within {setup.max_iters} iterates")
        final = res.trajectory.final

        diff_u = diff_phi = min_phi = None
        if plan.param == "eta":
            min_phi = min(float(np.min(s.phi[mask])) for s in res.trajectory.states)
        if prev_final is not None:
            if plan.param == "eps":
                diff_u = grid.lp_norm(final.u - prev_final.u, plan.norm_p)
            else:
                diff_u = _window_norm(grid, final.u - prev_final.u, mask, plan.norm_p)
                diff_phi = _window_norm(
                    grid, (final.phi - value) - (prev_final.phi - prev_value),
                    mask, plan.norm_p)
        results.append(LegResult(value=value, iterations=len(res.reports),
                                 diff_u=diff_u, diff_phi=diff_phi,
                                 min_phi_window=min_phi))
        prev_final, prev_value = final, value
    return results
