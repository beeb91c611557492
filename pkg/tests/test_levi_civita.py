import math

import numpy as np
import pytest

from starktoric.errors import DomainError
from starktoric.levi_civita import (
    RegularizedState,
    conformal_factor,
    energy_split,
    lc_base,
    lc_lift,
    regularized_energy,
)
from starktoric.stark_model import hamiltonian

OMEGA = np.block(
    [[np.zeros((2, 2)), np.eye(2)], [-np.eye(2), np.zeros((2, 2))]]
)


def test_base_map_values():
    assert lc_base((1.0, 0.0)) == pytest.approx([0.5, 0.0])
    assert lc_base((0.0, 1.0)) == pytest.approx([-0.5, 0.0])
    assert lc_base((1.0, 1.0)) == pytest.approx([0.0, 1.0])


def test_base_map_two_to_one():
    rng = np.random.default_rng(5)
    for _ in range(50):
        z = rng.uniform(-3, 3, 2)
        assert np.array_equal(lc_base(z), lc_base(-z))


def test_lift_values_and_domain():
    s = RegularizedState(z=(1.0, 0.0), w=(0.0, 0.0))
    out = lc_lift(s)
    assert out.q == pytest.approx([0.5, 0.0]) and out.p == pytest.approx([0.0, 0.0])
    s = RegularizedState(z=(1.0, 0.0), w=(2.0, 0.0))
    assert lc_lift(s).p == pytest.approx([2.0, 0.0])
    with pytest.raises(DomainError):
        lc_lift(RegularizedState(z=(0.0, 0.0), w=(1.0, 0.0)))


def _lift_vec(v):
    out = lc_lift(RegularizedState(z=v[:2], w=v[2:]))
    return np.concatenate([out.q, out.p])


def test_lift_is_symplectic():
    # fourth-order finite-difference Jacobian J must satisfy J^T Omega J = Omega
    rng = np.random.default_rng(9)
    h = 1e-4
    for _ in range(10):
        v = rng.uniform(-2, 2, 4)
        if np.hypot(v[0], v[1]) < 0.3:
            continue
        jac = np.empty((4, 4))
        for k in range(4):
            dv = np.zeros(4)
            dv[k] = h
            jac[:, k] = (
                8.0 * (_lift_vec(v + dv) - _lift_vec(v - dv))
                - (_lift_vec(v + 2 * dv) - _lift_vec(v - 2 * dv))
            ) / (12.0 * h)
        assert np.max(np.abs(jac.T @ OMEGA @ jac - OMEGA)) < 1e-10


def test_regularized_energy_values():
    s = RegularizedState(z=(1.0, 0.0), w=(0.0, 0.0))
    assert regularized_energy(s, 0.05) == pytest.approx(-1.475, rel=1e-15)
    # zero state sits at the bottom: e1 = e2 = 0, total -2
    split = energy_split(RegularizedState(z=(0.0, 0.0), w=(0.0, 0.0)), 0.1)
    assert split.e1 == 0.0 and split.e2 == 0.0 and split.total == -2.0


def test_zero_field_level_set_is_round_sphere():
    rng = np.random.default_rng(13)
    for _ in range(50):
        u = rng.normal(size=4)
        u *= 2.0 / np.linalg.norm(u)  # radius-2 sphere
        s = RegularizedState(z=u[:2], w=u[2:])
        assert abs(regularized_energy(s, 0.0)) < 1e-14


def test_split_identity_is_exact():
    rng = np.random.default_rng(17)
    for _ in range(50):
        s = RegularizedState(z=rng.uniform(-2, 2, 2), w=rng.uniform(-2, 2, 2))
        sp = energy_split(s, 0.07)
        assert regularized_energy(s, 0.07) == sp.e1 + sp.e2 - 2.0


def test_soft_factor_critical_points():
    eps = 0.05
    saddle = 1.0 / math.sqrt(2.0 * eps)
    sp = energy_split(RegularizedState(z=(0.0, saddle), w=(0.0, 0.0)), eps)
    assert sp.e2 == pytest.approx(1.0 / (8.0 * eps), rel=1e-12)
    # gradient of e2 vanishes at all three critical points
    h = 1e-5
    for z2 in (0.0, saddle, -saddle):
        e2 = lambda z, w: energy_split(RegularizedState(z=(0.0, z), w=(0.0, w)), eps).e2
        gz = (e2(z2 + h, 0.0) - e2(z2 - h, 0.0)) / (2 * h)
        gw = (e2(z2, h) - e2(z2, -h)) / (2 * h)
        assert abs(gz) < 1e-8 and abs(gw) < 1e-8


def test_pullback_identity():
    rng = np.random.default_rng(23)
    eps = 0.05
    for _ in range(500):
        z = rng.uniform(-3, 3, 2)
        if np.hypot(*z) < 0.1:
            continue
        s = RegularizedState(z=z, w=rng.uniform(-3, 3, 2))
        e = regularized_energy(s, eps)
        lifted = conformal_factor(s) * (hamiltonian(lc_lift(s), eps) + 0.5)
        assert abs(e - lifted) <= 1e-12 * (1.0 + abs(e))


def test_conformal_factor():
    assert conformal_factor(RegularizedState(z=(0.0, 0.0), w=(1.0, 2.0))) == 0.0
    assert conformal_factor(RegularizedState(z=(3.0, 4.0), w=(0.0, 0.0))) == 25.0
