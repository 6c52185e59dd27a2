"""Uniform cell-centered 1-D grid and discrete calculus.

The domain is the truncated box [-L, L] with N cells and nodes at the cell
centers x_i = -L + (i+1/2)*dx.  Derivatives use centered second-order stencils
in the interior and one-sided second-order stencils at the two boundary nodes,
so no ghost values enter the calculus; ghosts appear only in upwind advection
and the implicit momentum solve, where they carry the far-field constants.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DcnsError


@dataclass(frozen=True)
class Grid:
    """Uniform mesh on [-L, L] with N cell-centered nodes."""

    L: float
    N: int

    def __post_init__(self):
        if not (self.L > 0.0 and np.isfinite(self.L)):
            raise DcnsError(f"half-width L = {self.L} must be positive and finite")
        if self.N < 8:
            raise DcnsError(f"cell count N = {self.N} must be >= 8")

    @property
    def dx(self) -> float:
        return 2.0 * self.L / self.N

    @cached_property
    def x(self) -> np.ndarray:
        return -self.L + (np.arange(self.N) + 0.5) * self.dx

    def check(self, f: np.ndarray) -> np.ndarray:
        f = np.asarray(f, dtype=float)
        if f.shape != (self.N,):
            raise DcnsError(f"field shape {f.shape} does not match grid N = {self.N}")
        if not np.all(np.isfinite(f)):
            raise DcnsError("field contains non-finite values")
        return f

    def ddx(self, f: np.ndarray) -> np.ndarray:
        """First derivative: centered interior, one-sided second order at ends."""
        f = np.asarray(f, dtype=float)
        out = np.empty_like(f)
        dx = self.dx
        out[1:-1] = (f[2:] - f[:-2]) / (2.0 * dx)
        out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx)
        out[-1] = (3.0 * f[-1] - 4.0 * f[-2] + f[-3]) / (2.0 * dx)
        return out

    def d2dx2(self, f: np.ndarray) -> np.ndarray:
        """Second derivative: 3-point interior, one-sided second order at ends."""
        f = np.asarray(f, dtype=float)
        out = np.empty_like(f)
        dx2 = self.dx * self.dx
        out[1:-1] = (f[2:] - 2.0 * f[1:-1] + f[:-2]) / dx2
        out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / dx2
        out[-1] = (2.0 * f[-1] - 5.0 * f[-2] + 4.0 * f[-3] - f[-4]) / dx2
        return out

    def lp_norm(self, f: np.ndarray, p: float) -> float:
        """Discrete L^p norm (sum |f|^p dx)^(1/p); p = inf gives max |f|."""
        f = np.asarray(f, dtype=float)
        if np.isinf(p):
            return float(np.max(np.abs(f))) if f.size else 0.0
        if p <= 0:
            raise DcnsError(f"p = {p} must be positive or inf")
        return float((np.sum(np.abs(f) ** p) * self.dx) ** (1.0 / p))

    def integrate(self, f: np.ndarray) -> float:
        """Midpoint-rule integral over the box."""
        return float(np.sum(np.asarray(f, dtype=float)) * self.dx)

    def window(self, radius: float) -> np.ndarray:
        """Boolean mask of nodes inside [-radius, radius]."""
        return np.abs(self.x) <= radius

    def upwind_deriv(self, f: np.ndarray, v: np.ndarray,
                     left: float, right: float) -> np.ndarray:
        """First-order upwind approximation of f_x against velocity v.

        `left`/`right` are ghost values just outside the box (far-field
        constants on a truncated domain).
        """
        f = np.asarray(f, dtype=float)
        dx = self.dx
        fm = np.concatenate(([left], f[:-1]))
        fp = np.concatenate((f[1:], [right]))
        backward = (f - fm) / dx
        forward = (fp - f) / dx
        return np.where(v > 0.0, backward, forward)


@dataclass
class ScalarField:
    """A validated point-sampled real field on a grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        self.values = self.grid.check(self.values)

    def ddx(self) -> "ScalarField":
        return ScalarField(self.grid, self.grid.ddx(self.values))

    def d2dx2(self) -> "ScalarField":
        return ScalarField(self.grid, self.grid.d2dx2(self.values))

    def norm(self, p: float) -> float:
        return self.grid.lp_norm(self.values, p)

    def integral(self) -> float:
        return self.grid.integrate(self.values)


def ddx(f: ScalarField) -> ScalarField:
    return f.ddx()


def d2dx2(f: ScalarField) -> ScalarField:
    return f.d2dx2()


def lp_norm(f: ScalarField, p: float) -> float:
    return f.norm(p)


def integrate(f: ScalarField) -> float:
    return f.integral()
