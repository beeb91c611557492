"""Unregularized planar Stark problem.

An electron attracted by a proton at the origin inside a constant
electric field of strength eps pointing along the first axis:

    V(q) = -1/|q| + eps*q1,      H(q, p) = |p|^2/2 + V(q).

Energies are normalized to -1/2 (the general case is reached through the
rescaling symmetry ``rescale_state``).  The potential has a single saddle
at (-1/sqrt(eps), 0) with critical value -2*sqrt(eps); for
0 < eps < 1/16 the accessible region {V <= -1/2} splits into a bounded
oval around the origin and an unbounded tail behind the saddle, and
``hill_classify`` decides membership by flood fill on a grid.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import ndimage

from .errors import DomainError, NumericsError, RegimeError

__all__ = [
    "TORIC_LIMIT",
    "PlanarState",
    "HillClass",
    "HillGrid",
    "potential",
    "hamiltonian",
    "critical_point",
    "critical_value",
    "rescale_state",
    "hill_classify",
    "hill_grid",
    "hill_component_count",
]

TORIC_LIMIT = 1.0 / 16.0
HILL_SEED = 0.01  # seed offset on the positive q1-axis for the bounded component

_CROSS = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)


def check_field_strength(eps: float, positive: bool = False) -> float:
    eps = float(eps)
    if not np.isfinite(eps) or eps < 0.0 or (positive and eps == 0.0):
        bound = "positive" if positive else "nonnegative"
        raise DomainError(f"field strength must be a finite {bound} number, got {eps}")
    return eps


def check_toric(eps: float) -> float:
    eps = check_field_strength(eps, positive=True)
    if eps >= TORIC_LIMIT:
        raise RegimeError(
            f"field strength {eps} is not below 1/16; the accessible region "
            "no longer has a bounded component"
        )
    return eps


@dataclass
class PlanarState:
    """Phase-space point (q, p) with the origin excluded from configuration."""

    q: np.ndarray
    p: np.ndarray

    def __post_init__(self) -> None:
        self.q = np.asarray(self.q, dtype=float).reshape(2)
        self.p = np.asarray(self.p, dtype=float).reshape(2)
        if np.hypot(*self.q) == 0.0:
            raise DomainError("planar state cannot sit at the collision point q = 0")


class HillClass(enum.Enum):
    BOUNDED = "B"
    UNBOUNDED = "U"
    FORBIDDEN = "F"
    COLLISION_LOCUS = "C"


def potential(q, eps: float) -> float:
    """-1/|q| + eps*q1; undefined at the origin."""
    eps = check_field_strength(eps)
    q = np.asarray(q, dtype=float).reshape(2)
    r = np.hypot(q[0], q[1])
    if r == 0.0:
        raise DomainError("potential is singular at q = 0")
    return -1.0 / r + eps * q[0]


def hamiltonian(state: PlanarState, eps: float) -> float:
    """Kinetic energy plus potential."""
    return 0.5 * float(state.p @ state.p) + potential(state.q, eps)


def critical_point(eps: float) -> PlanarState:
    """The unique equilibrium: saddle of V at (-1/sqrt(eps), 0), rest momentum."""
    eps = check_field_strength(eps, positive=True)
    return PlanarState(q=(-1.0 / np.sqrt(eps), 0.0), p=(0.0, 0.0))


def critical_value(eps: float) -> float:
    """Energy of the unique equilibrium, -2*sqrt(eps)."""
    eps = check_field_strength(eps, positive=True)
    return -2.0 * np.sqrt(eps)


def rescale_state(a: float, state: PlanarState) -> PlanarState:
    """Symmetry (q, p) -> (a q, p/sqrt(a)).

    Pulls the Hamiltonian back as H_eps(a q, p/sqrt(a)) =
    (1/a) H_{a^2 eps}(q, p), trading field strength against energy.
    """
    a = float(a)
    if not (a > 0.0) or not np.isfinite(a):
        raise DomainError("rescaling factor must be positive and finite")
    return PlanarState(q=a * state.q, p=state.p / np.sqrt(a))


# --- Hill region ---------------------------------------------------------


@dataclass
class HillGrid:
    """Labelled flood-fill grid of the accessible set inside the disk |q| <= radius."""

    eps: float
    radius: float
    centers: np.ndarray  # cell-center coordinates along one axis
    allowed: np.ndarray  # (n, n) bool, indexed [i_q1, i_q2]
    labels: np.ndarray  # (n, n) int component labels, 0 = not allowed
    n_components: int
    bounded_label: int

    @property
    def step(self) -> float:
        return self.centers[1] - self.centers[0]


def _allowed_mask(q1: np.ndarray, q2: np.ndarray, eps: float) -> np.ndarray:
    r = np.hypot(q1, q2)
    with np.errstate(divide="ignore"):
        v = -1.0 / r + eps * q1
    return v <= -0.5


def analysis_radius(eps: float) -> float:
    """Disk radius large enough to contain both accessible components.

    The bounded component stays within |q| <= 6 for every eps below 1/16;
    the unbounded one reaches in to q1 = -(1 + sqrt(1 - 16 eps))/(4 eps),
    which is within 1/(2 eps) of the origin.
    """
    return 0.5 / eps + 4.0 / np.sqrt(eps)


def hill_grid(eps: float, resolution: int) -> HillGrid:
    """Flood-fill the accessible set on a resolution^2 grid over the analysis disk."""
    eps = check_toric(eps)
    n = int(resolution)
    if n < 8:
        raise DomainError("hill grid resolution must be at least 8")
    radius = analysis_radius(eps)
    centers = (np.arange(n) + 0.5) * (2.0 * radius / n) - radius
    q1 = centers[:, None]
    q2 = centers[None, :]
    allowed = _allowed_mask(q1, q2, eps) & (np.hypot(q1, q2) <= radius)
    labels, n_components = ndimage.label(allowed, structure=_CROSS)
    i_seed = min(int((HILL_SEED + radius) / (2.0 * radius) * n), n - 1)
    j_seed = min(int(radius / (2.0 * radius) * n), n - 1)
    bounded_label = int(labels[i_seed, j_seed])
    if bounded_label == 0:
        raise NumericsError("flood-fill seed cell fell outside the accessible set")
    return HillGrid(eps, radius, centers, allowed, labels, int(n_components), bounded_label)


@lru_cache(maxsize=8)
def _stable_hill_grid(eps: float) -> HillGrid:
    """Refine the grid until the component count settles at two."""
    prev_two = False
    for n in (256, 512, 1024, 2048, 4096):
        grid = hill_grid(eps, n)
        if grid.n_components == 2:
            if prev_two:
                return grid
            prev_two = True
        else:
            prev_two = False
    raise NumericsError(
        f"accessible-set component count did not stabilize at two for eps={eps}"
    )


def hill_component_count(eps: float, resolution: int | None = None) -> int:
    """Number of connected components of {V <= -1/2} seen by the flood fill."""
    if resolution is None:
        return _stable_hill_grid(check_toric(eps)).n_components
    return hill_grid(eps, resolution).n_components


def hill_classify(q, eps: float) -> HillClass:
    """Classify a configuration point against the energy -1/2 shadow.

    FORBIDDEN where V > -1/2, COLLISION_LOCUS at the origin (it adjoins the
    bounded component in the regularized picture), otherwise BOUNDED or
    UNBOUNDED according to flood-fill connectivity.
    """
    eps = check_toric(eps)
    q = np.asarray(q, dtype=float).reshape(2)
    r = np.hypot(q[0], q[1])
    if r == 0.0:
        return HillClass.COLLISION_LOCUS
    if potential(q, eps) > -0.5:
        return HillClass.FORBIDDEN
    grid = _stable_hill_grid(eps)
    if r > grid.radius:
        return HillClass.UNBOUNDED
    n = len(grid.centers)
    i = min(int((q[0] + grid.radius) / (2.0 * grid.radius) * n), n - 1)
    j = min(int((q[1] + grid.radius) / (2.0 * grid.radius) * n), n - 1)
    label = int(grid.labels[i, j])
    if label == 0:
        label = _nearest_allowed_label(grid, q, i, j)
    return HillClass.BOUNDED if label == grid.bounded_label else HillClass.UNBOUNDED


def _nearest_allowed_label(grid: HillGrid, q: np.ndarray, i: int, j: int) -> int:
    """Label of the nearest accessible cell, for points whose own cell straddles
    the boundary curve."""
    n = len(grid.centers)
    best = None
    best_d2 = np.inf
    for ring in range(1, 9):
        lo_i, hi_i = max(i - ring, 0), min(i + ring + 1, n)
        lo_j, hi_j = max(j - ring, 0), min(j + ring + 1, n)
        window = grid.labels[lo_i:hi_i, lo_j:hi_j]
        ii, jj = np.nonzero(window)
        if ii.size:
            cx = grid.centers[lo_i + ii] - q[0]
            cy = grid.centers[lo_j + jj] - q[1]
            d2 = cx * cx + cy * cy
            k = int(np.argmin(d2))
            if d2[k] < best_d2:
                best_d2 = float(d2[k])
                best = int(window[ii[k], jj[k]])
            break
    if best is None:
        raise NumericsError("no accessible cell near query point; grid too coarse")
    return best
