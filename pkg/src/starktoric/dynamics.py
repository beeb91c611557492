"""Symplectic integration of the Stark flows.

All Hamiltonians here are separable (kinetic |p|^2/2 plus a position-only
potential), so splitting integrators apply: second-order leapfrog and the
fourth-order Yoshida composition of it (coefficients from Yoshida 1990 /
the triple-jump construction).

Three flows are integrated:

* the raw planar problem, with a collision cutoff at |q| = 1e-3 since the
  field -q/|q|^3 - (eps, 0) is singular at the origin;
* the separated oscillator factors z' = w, w' = -z -+ 2 eps z^3, which
  need no cutoff (that is the point of the regularization);
* the full regularized energy flow on (z, w), together with the physical
  time t(s) = int |z|^2 ds accumulated by Simpson's rule at the
  integrator's own order.

On top of these sit a section-return period measurement (flow-based
oracle for the elliptic-integral periods), the torus action obtained by
flowing each factor for a fraction of its own period, and the check that
the regularized flow, reparametrized, reproduces the raw one.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    CollisionApproach,
    DomainError,
    LevelSetError,
    NoReturnError,
    SeparatrixEscape,
)
from .levi_civita import RegularizedState, energy_split, lc_lift, regularized_energy
from .periods import OscillatorSelector, tau1, tau2, turning_point
from .stark_model import PlanarState, check_field_strength

__all__ = [
    "Scheme",
    "IntegratorSpec",
    "Trajectory",
    "COLLISION_CUTOFF",
    "integrate_planar",
    "integrate_oscillator",
    "integrate_regularized",
    "measure_period",
    "torus_act",
    "flow_equivalence",
]

COLLISION_CUTOFF = 1e-3


class Scheme(enum.Enum):
    LEAPFROG2 = "leapfrog2"
    YOSHIDA4 = "yoshida4"


_W1 = 1.0 / (2.0 - 2.0 ** (1.0 / 3.0))
_W0 = -(2.0 ** (1.0 / 3.0)) / (2.0 - 2.0 ** (1.0 / 3.0))

# drift coefficients (len kicks + 1) and kick coefficients per scheme
_COEFFS = {
    Scheme.LEAPFROG2: ((0.5, 0.5), (1.0,)),
    Scheme.YOSHIDA4: (
        (0.5 * _W1, 0.5 * (_W0 + _W1), 0.5 * (_W0 + _W1), 0.5 * _W1),
        (_W1, _W0, _W1),
    ),
}


@dataclass(frozen=True)
class IntegratorSpec:
    """Fixed-step integrator configuration (step in the flow's own time)."""

    step: float = 1e-3
    scheme: Scheme = Scheme.YOSHIDA4
    max_steps: int = 10_000_000

    def __post_init__(self) -> None:
        if not (self.step > 0.0 and np.isfinite(self.step)):
            raise DomainError("integrator step must be positive and finite")
        if self.max_steps < 1:
            raise DomainError("max_steps must be at least 1")


DEFAULT_INTEGRATOR = IntegratorSpec()


@dataclass
class Trajectory:
    """Sampled orbit: times, states (one row per time), max energy deviation."""

    times: np.ndarray
    states: np.ndarray
    energy_drift: float


def _steps_for(duration: float, spec: IntegratorSpec) -> int:
    if not (duration >= 0.0 and np.isfinite(duration)):
        raise DomainError("duration must be nonnegative and finite")
    n = math.ceil(duration / spec.step - 1e-12)
    if n > spec.max_steps:
        raise DomainError(
            f"duration {duration} needs {n} steps, above max_steps={spec.max_steps}"
        )
    return n


def _step_pair(q, p, h, force, coeffs):
    """One splitting step for vector (or scalar) q, p."""
    cs, ds = coeffs
    for c, d in zip(cs, ds):
        q = q + c * h * p
        p = p + d * h * force(q)
    return q + cs[-1] * h * p, p


# --- concrete force fields -------------------------------------------------


def _planar_force(eps: float):
    field = np.array([eps, 0.0])

    def force(q):
        r = np.hypot(q[0], q[1])
        if r < COLLISION_CUTOFF:
            raise CollisionApproach(
                f"|q| = {r:.3e} fell below the collision cutoff {COLLISION_CUTOFF}"
            )
        return -q / r**3 - field

    return force


def _planar_step(q, p, h, force, coeffs):
    """Splitting step for the raw problem with collision detection along
    each drift segment (the numerical path is piecewise straight, and a
    fast passage can hop across the singularity between force calls)."""
    cs, ds = coeffs
    for c, d in zip(cs, ds):
        q = _checked_drift(q, c * h * p)
        p = p + d * h * force(q)
    return _checked_drift(q, cs[-1] * h * p), p


def _checked_drift(q, dq):
    q_new = q + dq
    len2 = dq[0] * dq[0] + dq[1] * dq[1]
    if len2 > 0.0:
        t = min(max(-(q[0] * dq[0] + q[1] * dq[1]) / len2, 0.0), 1.0)
        r_min = np.hypot(q[0] + t * dq[0], q[1] + t * dq[1])
    else:
        r_min = np.hypot(q[0], q[1])
    if r_min < COLLISION_CUTOFF:
        raise CollisionApproach(
            f"trajectory passed within {r_min:.3e} of the collision point"
        )
    return q_new


def _oscillator_force(eps: float, sel: OscillatorSelector):
    two_eps = 2.0 * eps
    if sel is OscillatorSelector.PLUS:
        return lambda z: -z - two_eps * z * z * z
    return lambda z: -z + two_eps * z * z * z


def _regularized_force(eps: float):
    two_eps = 2.0 * eps

    def force(z):
        return np.array(
            [-z[0] - two_eps * z[0] ** 3, -z[1] + two_eps * z[1] ** 3]
        )

    return force


# --- public integrators -----------------------------------------------------


def integrate_planar(
    state: PlanarState,
    eps: float,
    spec: IntegratorSpec = DEFAULT_INTEGRATOR,
    duration: float = 1.0,
) -> Trajectory:
    """Integrate the raw Stark flow; raises CollisionApproach near the origin."""
    eps = check_field_strength(eps)
    n = _steps_for(duration, spec)
    force = _planar_force(eps)
    coeffs = _COEFFS[spec.scheme]
    kin = lambda p: 0.5 * (p[0] * p[0] + p[1] * p[1])
    pot = lambda q: -1.0 / np.hypot(q[0], q[1]) + eps * q[0]

    q, p = state.q.copy(), state.p.copy()
    times = np.empty(n + 1)
    states = np.empty((n + 1, 4))
    times[0] = 0.0
    states[0] = (*q, *p)
    e0 = kin(p) + pot(q)
    drift = 0.0
    h = spec.step
    for i in range(1, n + 1):
        hh = min(h, duration - (i - 1) * h)
        q, p = _planar_step(q, p, hh, force, coeffs)
        times[i] = min(i * h, duration)
        states[i] = (*q, *p)
        drift = max(drift, abs(kin(p) + pot(q) - e0))
    return Trajectory(times, states, drift)


def integrate_oscillator(
    z0: float,
    w0: float,
    eps: float,
    sel: OscillatorSelector,
    spec: IntegratorSpec = DEFAULT_INTEGRATOR,
    duration: float = 1.0,
) -> Trajectory:
    """Integrate one separated factor; the soft factor must stay in its well."""
    eps = check_field_strength(eps)
    n = _steps_for(duration, spec)
    force = _oscillator_force(eps, sel)
    coeffs = _COEFFS[spec.scheme]
    sign = 1.0 if sel is OscillatorSelector.PLUS else -1.0
    energy = lambda z, w: 0.5 * w * w + 0.5 * z * z + sign * 0.5 * eps * z**4
    saddle = 1.0 / math.sqrt(2.0 * eps) if (sel is OscillatorSelector.MINUS and eps > 0) else None
    if saddle is not None:
        if abs(z0) > saddle:
            raise DomainError("soft-oscillator start lies outside the bounded well")
        if energy(z0, w0) >= 1.0 / (8.0 * eps):
            raise DomainError("soft-oscillator energy at or above the separatrix")

    z, w = float(z0), float(w0)
    times = np.empty(n + 1)
    states = np.empty((n + 1, 2))
    times[0] = 0.0
    states[0] = (z, w)
    e0 = energy(z, w)
    drift = 0.0
    h = spec.step
    for i in range(1, n + 1):
        hh = min(h, duration - (i - 1) * h)
        z, w = _step_pair(z, w, hh, force, coeffs)
        if saddle is not None and abs(z) > saddle:
            raise SeparatrixEscape(
                "soft-oscillator trajectory crossed the separatrix (step too coarse)"
            )
        times[i] = min(i * h, duration)
        states[i] = (z, w)
        drift = max(drift, abs(energy(z, w) - e0))
    return Trajectory(times, states, drift)


def integrate_regularized(
    state: RegularizedState,
    eps: float,
    spec: IntegratorSpec = DEFAULT_INTEGRATOR,
    duration: float = 1.0,
) -> tuple[Trajectory, np.ndarray]:
    """Integrate the regularized energy flow in its own time s.

    Returns the trajectory (states are rows (z1, z2, w1, w2)) and the
    accumulated physical time t(s) = int |z|^2 ds at each sample, computed
    by Simpson's rule on half-steps so the time change carries the same
    fourth-order accuracy as the default scheme.
    """
    eps = check_field_strength(eps)
    n = _steps_for(duration, spec)
    force = _regularized_force(eps)
    coeffs = _COEFFS[spec.scheme]

    z = state.z.copy()
    w = state.w.copy()
    times = np.empty(n + 1)
    states = np.empty((n + 1, 4))
    phys = np.empty(n + 1)
    times[0] = 0.0
    states[0] = (*z, *w)
    phys[0] = 0.0
    e0 = regularized_energy(state, eps)
    drift = 0.0
    h = spec.step
    r2 = lambda zz: zz[0] * zz[0] + zz[1] * zz[1]
    for i in range(1, n + 1):
        hh = min(h, duration - (i - 1) * h)
        r_a = r2(z)
        z, w = _step_pair(z, w, 0.5 * hh, force, coeffs)
        r_m = r2(z)
        z, w = _step_pair(z, w, 0.5 * hh, force, coeffs)
        r_b = r2(z)
        times[i] = min(i * h, duration)
        states[i] = (*z, *w)
        phys[i] = phys[i - 1] + hh / 6.0 * (r_a + 4.0 * r_m + r_b)
        e = regularized_energy(RegularizedState(z, w), eps)
        drift = max(drift, abs(e - e0))
    return Trajectory(times, states, drift), phys


# --- section return, torus action, flow equivalence -------------------------


def measure_period(
    eps: float,
    c: float,
    sel: OscillatorSelector,
    spec: IntegratorSpec = DEFAULT_INTEGRATOR,
) -> float:
    """Flow-based period: start at the turning point and time the return.

    The orbit leaves (z_max, 0) with w turning negative, crosses w = 0
    upward at the opposite turning point, and completes the period on the
    next downward crossing with z > 0; that crossing time is refined by
    bisection to 1e-10.
    """
    eps = check_field_strength(eps)
    force = _oscillator_force(eps, sel)
    coeffs = _COEFFS[spec.scheme]
    z = turning_point(eps, c, sel)
    w = 0.0
    h = spec.step
    saddle = 1.0 / math.sqrt(2.0 * eps) if (sel is OscillatorSelector.MINUS and eps > 0) else None
    t = 0.0
    for _ in range(spec.max_steps):
        z1, w1 = _step_pair(z, w, h, force, coeffs)
        if saddle is not None and abs(z1) > saddle:
            raise SeparatrixEscape("period run crossed the separatrix")
        if w > 0.0 and w1 <= 0.0 and z1 > 0.0:
            lo, hi = 0.0, h
            while hi - lo > 1e-10:
                mid = 0.5 * (lo + hi)
                _, wm = _step_pair(z, w, mid, force, coeffs)
                if wm > 0.0:
                    lo = mid
                else:
                    hi = mid
            return t + 0.5 * (lo + hi)
        z, w, t = z1, w1, t + h
    raise NoReturnError("orbit did not return to the section within max_steps")


def _flow_factor(z, w, duration, force, coeffs, h):
    """Flow a single oscillator factor for a nonnegative time."""
    n_full, rem = divmod(duration, h)
    for _ in range(int(n_full)):
        z, w = _step_pair(z, w, h, force, coeffs)
    if rem > 1e-15 * max(1.0, duration):
        z, w = _step_pair(z, w, rem, force, coeffs)
    return z, w


def torus_act(
    t1: float,
    t2: float,
    state: RegularizedState,
    eps: float,
    spec: IntegratorSpec = DEFAULT_INTEGRATOR,
) -> RegularizedState:
    """Act by (t1, t2): flow each factor for that fraction of its own period.

    Times are taken literally (t = 1 flows one full period numerically
    rather than collapsing to the identity), so periodicity is a genuine
    check of the integration.
    """
    eps = check_field_strength(eps, positive=True)
    for t in (t1, t2):
        if not np.isfinite(t) or t < 0.0:
            raise DomainError("torus action times must be finite and nonnegative")
    split = energy_split(state, eps)
    if split.e2 >= 1.0 / (8.0 * eps) or abs(state.z[1]) > 1.0 / math.sqrt(2.0 * eps):
        raise DomainError("state is not on a bounded soft-factor orbit")
    coeffs = _COEFFS[spec.scheme]
    h = spec.step
    z1, w1 = _flow_factor(
        state.z[0],
        state.w[0],
        t1 * tau1(eps, split.e1),
        _oscillator_force(eps, OscillatorSelector.PLUS),
        coeffs,
        h,
    )
    z2, w2 = _flow_factor(
        state.z[1],
        state.w[1],
        t2 * tau2(eps, split.e2),
        _oscillator_force(eps, OscillatorSelector.MINUS),
        coeffs,
        h,
    )
    return RegularizedState(z=(z1, z2), w=(w1, w2))


def flow_equivalence(
    state: RegularizedState,
    eps: float,
    spec: IntegratorSpec = DEFAULT_INTEGRATOR,
    s_duration: float = 5.0,
) -> float:
    """Certify that the regularized flow reproduces the raw one.

    Integrates the regularized flow from a zero-level state, converts
    elapsed regularized time to physical time through t(s) = int |z|^2 ds,
    integrates the raw flow from the lifted start to each physical
    checkpoint, and returns the largest phase-space distance between the
    lifted regularized state and the raw state.
    """
    eps = check_field_strength(eps)
    e = regularized_energy(state, eps)
    if abs(e) > 1e-9:
        raise LevelSetError(f"state is off the zero level set: E = {e:.3e}")
    traj, phys = integrate_regularized(state, eps, spec, s_duration)

    planar = lc_lift(state)
    q, p = planar.q.copy(), planar.p.copy()
    force = _planar_force(eps)
    coeffs = _COEFFS[spec.scheme]
    h = spec.step
    max_dev = 0.0
    for i in range(1, len(phys)):
        dt = phys[i] - phys[i - 1]
        n_sub = max(1, math.ceil(dt / h))
        h_sub = dt / n_sub
        for _ in range(n_sub):
            q, p = _planar_step(q, p, h_sub, force, coeffs)
        lifted = lc_lift(RegularizedState(traj.states[i, :2], traj.states[i, 2:]))
        dev = math.hypot(*(lifted.q - q), *(lifted.p - p))
        max_dev = max(max_dev, dev)
    return max_dev
