from __future__ import annotations

import math

import numpy as np
import pytest

from trikurv.errors import RadicandNegative
from trikurv.jets import Jet
from trikurv.kenmotsu import (Explicit, Legendre, ManifoldParams, Slant, coeff_A, coeff_B,
                              curvature_op, eta_from_model, eta_transport_residual)
from trikurv.tension import random_unit


def params(f=0.0, fp=0.0, r=0.0, eta=(1.0, 0.0, 0.0)):
    return ManifoldParams(Jet((f, fp)), r, *eta)


def random_params(rng):
    f, fp, r = rng.uniform(-5, 5, 3)
    return params(f, fp, r, tuple(random_unit(rng)))


def test_coefficients():
    p = params(r=2.0)
    assert (coeff_A(p), coeff_B(p)) == (1.0, 1.0)
    p = params(4.5, -4.5, -189 / 2)
    assert coeff_A(p) == pytest.approx(-63 / 4)
    assert coeff_B(p) == 0.0
    # r = 3 k1^2 with f^2 + f' = -k1^2/2 at k1 = 1 gives A = k1^2/2
    p = params(0.0, -0.5, 3.0)
    assert (coeff_A(p), coeff_B(p)) == (0.5, 0.0)


def test_eta_must_be_unit():
    with pytest.raises(ValueError):
        params(eta=(1.0, 1.0, 0.0))


def test_curvature_examples():
    p = params(r=2.0, eta=(0.6, 0.8, 0.0))
    T = (1.0, 0.0, 0.0)
    assert np.allclose(curvature_op(T, T, (0.3, -1.0, 2.0), p), 0.0)
    space = params(0.0, -1.0, 6.0)
    assert coeff_B(space) == 0.0 and coeff_A(space) == 1.0
    assert np.allclose(curvature_op(T, (0, 1, 0), (0, 1, 0), space), (1, 0, 0))


def test_curvature_symmetries():
    rng = np.random.default_rng(0)
    for _ in range(300):
        p = random_params(rng)
        X, Y, Z, W = (rng.normal(size=3) for _ in range(4))
        R = curvature_op(X, Y, Z, p)
        assert np.allclose(R, -curvature_op(Y, X, Z, p), rtol=0, atol=1e-12 * (1 + abs(R).max()))
        bianchi = R + curvature_op(Y, Z, X, p) + curvature_op(Z, X, Y, p)
        assert abs(bianchi).max() <= 1e-10 * (1 + abs(R).max())
        lhs = R @ W
        rhs = -(curvature_op(X, Y, W, p) @ Z)
        assert abs(lhs - rhs) <= 1e-10 * (1 + abs(lhs))


def test_curvature_sectional_values():
    # K(X, xi) = A - B and K(X, Y) = A for X, Y orthogonal to xi
    rng = np.random.default_rng(1)
    p = random_params(rng)
    xi = p.eta
    X = np.cross(xi, rng.normal(size=3))
    X /= np.linalg.norm(X)
    Y = np.cross(xi, X)
    assert curvature_op(X, xi, xi, p) @ X == pytest.approx(coeff_A(p) - coeff_B(p))
    assert curvature_op(X, Y, Y, p) @ X == pytest.approx(coeff_A(p))


def test_eta_models():
    assert eta_from_model(Slant(math.pi / 2), 1.0, 2.0) == pytest.approx((0, -0.5, math.sqrt(3) / 2))
    assert eta_from_model(Legendre(), 3.0, 1.0) == (0.0, -1.0, 0.0)
    assert eta_from_model(Slant(0.0), 3.0, 1.0) == (1.0, 0.0, 0.0)
    assert eta_from_model(Explicit(0.6, 0.0, 0.8), 0, 1) == (0.6, 0.0, 0.8)
    with pytest.raises(RadicandNegative):
        eta_from_model(Slant(math.pi / 2), 3.0, 1.0)


def test_slant_eta_is_unit():
    rng = np.random.default_rng(2)
    for _ in range(200):
        th = rng.uniform(0, math.pi)
        k1 = rng.uniform(0.1, 3)
        f = rng.uniform(-1, 1) * k1 / max(abs(math.sin(th)), 1e-12)
        e = eta_from_model(Slant(th), f, k1)
        assert abs(sum(x * x for x in e) - 1) <= 1e-12


def _constant(c):
    return lambda s: c


def test_transport_slant_path():
    th, f, k1 = 0.8, 0.4, 1.3
    e = eta_from_model(Slant(th), f, k1)
    rT, _, _ = eta_transport_residual(Jet.constant(k1), Jet.constant(0.0), Jet.constant(f),
                                      [_constant(x) for x in e], 1.0)
    assert rT == pytest.approx(0.0, abs=1e-14)


def test_transport_tangent_to_xi():
    rT, rN, rB = eta_transport_residual(Jet.constant(1.0), Jet.constant(0.5), Jet.constant(2.0),
                                        [_constant(1.0), _constant(0.0), _constant(0.0)], 1.0)
    assert rT == 0.0


def test_transport_incompatible_path():
    rT, _, _ = eta_transport_residual(Jet.constant(1.0), Jet.constant(0.0), Jet.constant(1.0),
                                      [_constant(0.5), _constant(0.0), _constant(math.sqrt(0.75))],
                                      1.0)
    assert rT == pytest.approx(0.75)


def test_transport_preserves_norm():
    # the transport right-hand side is tangent to the unit sphere when |eta| = 1
    rng = np.random.default_rng(3)
    for _ in range(50):
        e = random_unit(rng)
        k1, k2, f = rng.uniform(-2, 2, 3)
        rhs = np.array(eta_transport_residual(Jet.constant(k1), Jet.constant(k2),
                                              Jet.constant(f), [_constant(x) for x in e], 0.5))
        assert abs(rhs @ e) <= 1e-12
