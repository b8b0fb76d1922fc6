"""Two-panel computational grid and the log-space trial function.

The grid puts x = 1 exactly on a node shared by two uniform panels [0, 1]
and [1, x_max], so the downward jump of the mixing term never sits inside a
quadrature stencil.  The trial function spans a dynamic range of order
exp(-2 g S0(x_max)) (e^-120 and beyond), so it is stored as (sign, log
magnitude) per node and all ratios are formed from log differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import closed_forms as cf
from .closed_forms import PotentialParams
from .errors import GridError

__all__ = ["Grid", "LogGridFunction", "TrialFunction", "build_trial", "trial_log_ratio"]


@dataclass(frozen=True)
class Grid:
    """Two uniform panels [0, 1] and [1, x_max] with shared node x = 1.

    n_per_panel is the number of intervals in each panel (must be even so the
    composite Simpson rule applies; >= 8 so the cubic interval stencils fit).
    """

    x_max: float = 4.0
    n_per_panel: int = 2000
    nodes: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not self.x_max > 1.0:
            raise GridError(f"x_max must exceed 1, got {self.x_max}")
        n = self.n_per_panel
        if n < 8 or n % 2 != 0:
            raise GridError(f"n_per_panel must be even and >= 8, got {n}")
        inner = np.linspace(0.0, 1.0, n + 1)
        outer = np.linspace(1.0, self.x_max, n + 1)
        nodes = np.concatenate([inner, outer[1:]])
        object.__setattr__(self, "nodes", nodes)

    @property
    def n_points(self) -> int:
        return self.nodes.size

    @property
    def h_inner(self) -> float:
        return 1.0 / self.n_per_panel

    @property
    def h_outer(self) -> float:
        return (self.x_max - 1.0) / self.n_per_panel

    @property
    def i_one(self) -> int:
        """Index of the shared node x = 1."""
        return self.n_per_panel

    def panel_slice(self, panel: int) -> slice:
        """Slice of .nodes covering panel 0 ([0,1]) or 1 ([1,x_max]),
        both including the shared node."""
        n = self.n_per_panel
        return slice(0, n + 1) if panel == 0 else slice(n, 2 * n + 1)

    def panel_nodes(self, panel: int) -> np.ndarray:
        return self.nodes[self.panel_slice(panel)]

    def panel_h(self, panel: int) -> float:
        return self.h_inner if panel == 0 else self.h_outer

    def split(self, values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Split node values of a continuous function into per-panel views."""
        if values.shape != self.nodes.shape:
            raise GridError(f"expected {self.nodes.shape} node values, got {values.shape}")
        return values[self.panel_slice(0)], values[self.panel_slice(1)]


@dataclass(frozen=True)
class LogGridFunction:
    """Grid samples stored as sign * exp(log_mag).

    Ratios must be formed as sign ratios times exp(log_mag difference); two
    separate exponentials would overflow/underflow long before the ratio does.
    """

    grid: Grid
    log_mag: np.ndarray
    sign: np.ndarray

    def __post_init__(self):
        if self.log_mag.shape != self.grid.nodes.shape or self.sign.shape != self.grid.nodes.shape:
            raise GridError("log_mag/sign arrays must match the grid nodes")

    def values(self) -> np.ndarray:
        """Reconstructed values; underflows to 0 harmlessly in the far tail."""
        return self.sign * np.exp(self.log_mag)

    def value(self, i: int) -> float:
        return float(self.sign[i]) * math.exp(float(self.log_mag[i]))

    def ratio(self, i: int, j: int) -> float:
        """value(i) / value(j) via a single exponential of the log difference."""
        if self.sign[j] == 0:
            raise ZeroDivisionError("ratio against a zero sample")
        return float(self.sign[i] * self.sign[j]) * math.exp(
            float(self.log_mag[i] - self.log_mag[j])
        )


@dataclass(frozen=True)
class TrialFunction:
    """Even trial function phi and companions on the grid, in log space.

    phi_plus/phi_minus are the decaying/growing branches exp(-g S0(+-x) - S1);
    phi mixes them with coefficient Gamma below x=1 and continues as a
    constant multiple of phi_plus above (the multiple is fixed from the node
    values at x=1, which makes phi exactly C^1 there since S0'(+-1) = 0).
    psi0 is phi normalized so psi0(0) = 1.  log_mag of phi peaks at exactly 0
    to maximize floating-point headroom downstream.
    """

    params: PotentialParams
    grid: Grid
    phi: LogGridFunction
    phi_plus: LogGridFunction
    phi_minus: LogGridFunction
    psi0: LogGridFunction

    @property
    def log_phi(self) -> np.ndarray:
        return self.phi.log_mag


def build_trial(p: PotentialParams, grid: Grid | None = None) -> TrialFunction:
    """Construct the trial function on the grid; requires Gamma > 0
    (ConvergenceDomainError otherwise)."""
    p.require_mixing_positive()
    if grid is None:
        grid = Grid()
    x = grid.nodes
    if not np.any(x == 1.0):
        raise GridError("x = 1 must be a grid node")

    log_plus = -p.g * cf.eval_S0(p, x) - cf.eval_S1(p, x)
    log_minus = -p.g * cf.eval_S0_mirror(p, x) - cf.eval_S1(p, x)

    log_phi = np.empty_like(x)
    inner, outer = grid.panel_slice(0), grid.panel_slice(1)
    # below the matching point: phi = phi_plus (1 + Gamma phi_-/phi_+)
    rho_inner = np.exp(log_minus[inner] - log_plus[inner])
    log_phi[inner] = log_plus[inner] + np.log1p(p.Gamma * rho_inner)
    # above: the same expression frozen at the x=1 node values
    i1 = grid.i_one
    match_log = math.log1p(p.Gamma * math.exp(float(log_minus[i1] - log_plus[i1])))
    log_phi[outer] = log_plus[outer] + match_log

    offset = float(log_phi.max())
    ones = np.ones_like(x, dtype=np.int8)
    phi = LogGridFunction(grid, log_phi - offset, ones)
    phi_plus = LogGridFunction(grid, log_plus - offset, ones)
    phi_minus = LogGridFunction(grid, log_minus - offset, ones)
    psi0 = LogGridFunction(grid, log_phi - log_phi[0], ones)
    return TrialFunction(p, grid, phi, phi_plus, phi_minus, psi0)


def trial_log_ratio(t: TrialFunction, i: int, j: int) -> float:
    """log of phi^2(x_i)/phi^2(x_j) = 2 (log phi_i - log phi_j).

    Callers fold this into quadrature weights and exponentiate once; i and j
    are node indices.
    """
    lm = t.phi.log_mag
    return 2.0 * float(lm[i] - lm[j])
