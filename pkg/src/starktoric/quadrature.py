"""Adaptive quadrature on finite intervals.

Gauss-Kronrod-style scheme: every panel is estimated with an embedded
Gauss-Legendre pair (10 and 21 points), the difference serving as the
error estimate, and the panel with the largest estimate is bisected until
the summed estimate meets the tolerance.  Integrands must accept numpy
arrays (all node evaluations of a panel happen in one call).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import DomainError, ToleranceNotMet

__all__ = ["QuadratureSpec", "DEFAULT_QUADRATURE", "integrate"]

_LOW_ORDER = 10
_HIGH_ORDER = 21
_MAX_PANELS = 20_000


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and refinement budget for adaptive integration."""

    abs_tol: float = 1e-11
    rel_tol: float = 1e-11
    max_refinements: int = 30

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("quadrature tolerances must be strictly positive")
        if self.max_refinements < 1:
            raise DomainError("max_refinements must be at least 1")


DEFAULT_QUADRATURE = QuadratureSpec()


@lru_cache(maxsize=8)
def _gauss_nodes(order: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


def _panel_estimate(f: Callable, a: float, b: float) -> tuple[float, float]:
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x_lo, w_lo = _gauss_nodes(_LOW_ORDER)
    x_hi, w_hi = _gauss_nodes(_HIGH_ORDER)
    y = f(mid + half * np.concatenate([x_lo, x_hi]))
    y = np.asarray(y, dtype=float)
    i_lo = half * float(w_lo @ y[:_LOW_ORDER])
    i_hi = half * float(w_hi @ y[_LOW_ORDER:])
    return i_hi, abs(i_hi - i_lo)


def integrate(
    f: Callable,
    a: float,
    b: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """Integrate a vectorized callable over [a, b] to the spec tolerances.

    Raises ToleranceNotMet when the refinement budget is exhausted before
    the combined error estimate drops below max(abs_tol, rel_tol * |I|).
    """
    if not (np.isfinite(a) and np.isfinite(b)):
        raise DomainError("integration limits must be finite")
    if b < a:
        return -integrate(f, b, a, spec)
    if a == b:
        return 0.0

    value, err = _panel_estimate(f, a, b)
    # heap entries: (-err, tiebreak, a, b, value, depth)
    heap = [(-err, 0, a, b, value, 0)]
    total = value
    total_err = err
    counter = 1
    while total_err > max(spec.abs_tol, spec.rel_tol * abs(total)):
        neg_err, _, pa, pb, pval, depth = heapq.heappop(heap)
        if depth >= spec.max_refinements:
            raise ToleranceNotMet(
                f"quadrature error {total_err:.3e} above tolerance after "
                f"{spec.max_refinements} refinement levels"
            )
        if len(heap) >= _MAX_PANELS:
            raise ToleranceNotMet("quadrature panel budget exhausted")
        mid = 0.5 * (pa + pb)
        left_val, left_err = _panel_estimate(f, pa, mid)
        right_val, right_err = _panel_estimate(f, mid, pb)
        total += left_val + right_val - pval
        total_err += left_err + right_err + neg_err  # neg_err = -parent error
        heapq.heappush(heap, (-left_err, counter, pa, mid, left_val, depth + 1))
        heapq.heappush(heap, (-right_err, counter + 1, mid, pb, right_val, depth + 1))
        counter += 2
    return total
