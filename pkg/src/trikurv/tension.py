"""Polyharmonic tension fields of Frenet curves in f-Kenmotsu 3-manifolds.

Two independent routes are provided:

* :func:`tau_k` builds tau_k = nabla^{2k-1} T + sum_l (-1)^l R(nabla^{2k-3-l} T, nabla^l T) T
  from the Frenet recursion and the curvature operator;
* :func:`tau3_expanded` and :func:`residual_system` evaluate the closed-form
  polynomials for tau_3 and its (T, N, B) projections term by term.

The closed forms are evaluated in :class:`~trikurv.scaled.Scaled`
arithmetic so every value comes with the magnitude of its largest monomial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .frenet import nabla_chain
from .jets import Jet
from .kenmotsu import ManifoldParams, curvature_op
from .scaled import Scaled

# folded tau_3 = (-5 E1, +E2, +E3); see calibrate_fold_factors for the calibration
FOLD_FACTORS = (-5.0, 1.0, 1.0)


@dataclass(frozen=True)
class CurvePoint:
    s: float
    k1: Jet
    k2: Jet
    params: ManifoldParams

    def __post_init__(self):
        if not self.k1[0] > 0:
            raise ValueError(f"non-geodesic curve required: k1 = {self.k1[0]!r}")


@dataclass(frozen=True)
class Tau3Components:
    """Brackets of tau_3 = cT T + cN N + cB B - cXi xi."""

    cT: Scaled
    cN: Scaled
    cB: Scaled
    cXi: Scaled

    @property
    def scale(self) -> float:
        return max(self.cT.scale, self.cN.scale, self.cB.scale, self.cXi.scale)


def tau_k(k: int, pt: CurvePoint) -> np.ndarray:
    """Frame components of tau_k, k in {1, 2, 3}."""
    if k not in (1, 2, 3):
        raise ValueError("k must be 1, 2 or 3")
    chain = nabla_chain(2 * k - 1, pt.k1, pt.k2)
    vals = [np.array(v.values()) for v in chain]
    out = vals[2 * k - 1].copy()
    for l in range(k - 1):
        out += (-1) ** l * curvature_op(vals[2 * k - 3 - l], vals[l], vals[0], pt.params)
    return out


class _Sym:
    """Scaled symbols of a curve point: k1 derivatives a[i], k2 derivatives
    b[i], the curvature coefficients A and B, and eta components."""

    def __init__(self, pt: CurvePoint):
        self.a = [Scaled(pt.k1[i]) for i in range(5)]
        self.b = [Scaled(pt.k2[i]) for i in range(4)]
        p = pt.params
        r, f, fp = Scaled(p.r), Scaled(p.f), Scaled(p.fp)
        self.A = r * 0.5 + 2 * (f * f + fp)
        self.B = r * 0.5 + 3 * (f * f + fp)
        self.eT, self.eN, self.eB = Scaled(p.etaT), Scaled(p.etaN), Scaled(p.etaB)


def curvature_pieces_printed(pt: CurvePoint) -> tuple[Tau3Components, Tau3Components]:
    """Closed forms of R(nabla^3 T, T)T and R(nabla^2 T, nabla T)T.

    Each is returned as (T, N, B, xi) brackets with the xi bracket stored so
    that the vector equals cT T + cN N + cB B - cXi xi.
    """
    q = _Sym(pt)
    a, b, A, B, eT, eN, eB = q.a, q.b, q.A, q.B, q.eT, q.eN, q.eB
    P3 = a[2] - a[0] ** 3 - a[0] * b[0] ** 2
    Q = 2 * a[1] * b[0] + a[0] * b[1]
    r3 = Tau3Components(
        P3 * B * eN * eT + Q * B * eB * eT,
        P3 * A - P3 * B * eT ** 2,
        Q * A - Q * B * eT ** 2,
        P3 * B * eN + Q * B * eB,
    )
    r2 = Tau3Components(
        a[0] ** 3 * B * eN * eT,
        a[0] ** 3 * A - a[0] ** 3 * B * eT ** 2 + a[0] ** 2 * b[0] * B * eB * eT,
        -(a[0] ** 2 * b[0]) * B * eN * eT,
        a[0] ** 3 * B * eN,
    )
    return r3, r2


def tau3_expanded(pt: CurvePoint) -> Tau3Components:
    """The four brackets of the expanded triharmonicity condition."""
    q = _Sym(pt)
    a, b, A, B, eT, eN, eB = q.a, q.b, q.A, q.B, q.eT, q.eN, q.eB
    P = a[2] - 2 * a[0] ** 3 - a[0] * b[0] ** 2
    Q = 2 * a[1] * b[0] + a[0] * b[1]
    cT = (10 * a[0] ** 3 * a[1] + 5 * a[0] * a[1] * b[0] ** 2 - 5 * a[0] * a[3]
          - 10 * a[1] * a[2] + 5 * b[0] * b[1] * a[0] ** 2
          + P * B * eN * eT
          + Q * B * eB * eT)
    cN = (a[0] ** 5 + 2 * a[0] ** 3 * b[0] ** 2 - 10 * a[0] ** 2 * a[2]
          - 15 * a[0] * a[1] ** 2 - 12 * b[0] * b[1] * a[1] - 6 * b[0] ** 2 * a[2]
          - 3 * a[0] * b[1] ** 2 - 4 * a[0] * b[0] * b[2] + a[0] * b[0] ** 4 + a[4]
          + P * (A - B * eT ** 2)
          - a[0] ** 2 * b[0] * B * eB * eT)
    cB = (-9 * a[0] ** 2 * b[0] * a[1] - 4 * b[0] ** 3 * a[1] - 6 * a[0] * b[0] ** 2 * b[1]
          + 4 * a[3] * b[0] + 6 * a[2] * b[1] + 4 * a[1] * b[2] + a[0] * b[3]
          - b[1] * a[0] ** 3
          + Q * (A - B * eT ** 2)
          + a[0] ** 2 * b[0] * B * eN * eT)
    cXi = P * B * eN + Q * B * eB
    return Tau3Components(cT, cN, cB, cXi)


def fold_components(c: Tau3Components, params: ManifoldParams) -> tuple[Scaled, Scaled, Scaled]:
    """Expand xi = eta(T) T + eta(N) N + eta(B) B and collect (T, N, B)."""
    eT, eN, eB = Scaled(params.etaT), Scaled(params.etaN), Scaled(params.etaB)
    return (c.cT - c.cXi * eT, c.cN - c.cXi * eN, c.cB - c.cXi * eB)


def residual_system(pt: CurvePoint) -> tuple[Scaled, Scaled, Scaled]:
    """Left-hand sides (E1, E2, E3) of the triharmonicity system."""
    q = _Sym(pt)
    a, b, A, B, eT, eN, eB = q.a, q.b, q.A, q.B, q.eT, q.eN, q.eB
    P = a[2] - 2 * a[0] ** 3 - a[0] * b[0] ** 2
    Q = 2 * b[0] * a[1] + a[0] * b[1]
    E1 = (a[0] * a[3] + 2 * a[1] * a[2] - 2 * a[0] ** 3 * a[1]
          - b[0] ** 2 * a[0] * a[1] - a[0] ** 2 * b[0] * b[1])
    E2 = (a[4] - 10 * a[0] ** 2 * a[2] - 6 * b[0] ** 2 * a[2] - 4 * a[0] * b[0] * b[2]
          - 15 * a[0] * a[1] ** 2 - 12 * b[0] * b[1] * a[1] - 3 * a[0] * b[1] ** 2
          + a[0] ** 5 + a[0] * b[0] ** 4 + 2 * a[0] ** 3 * b[0] ** 2
          + P * (A - B * (eT ** 2 + eN ** 2))
          - (a[0] ** 2 * b[0] * eT + Q * eN) * B * eB)
    E3 = (4 * b[0] * a[3] + 6 * a[2] * b[1] + 4 * a[1] * b[2] - 9 * a[0] ** 2 * b[0] * a[1]
          - 4 * b[0] ** 3 * a[1] - 6 * a[0] * b[0] ** 2 * b[1] - b[1] * a[0] ** 3 + a[0] * b[3]
          + Q * (A - B * (eT ** 2 + eB ** 2))
          + (a[0] ** 2 * b[0] * eT - P * eB) * B * eN)
    return E1, E2, E3


# ---------------------------------------------------------------------------
# random sampling and calibration
# ---------------------------------------------------------------------------

def random_unit(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def random_curve_point(rng: np.random.Generator) -> CurvePoint:
    """Jet entries in [-2, 2], k1 in (0.1, 3), unit eta, f, f', r in [-5, 5]."""
    k1 = rng.uniform(-2, 2, 5)
    k1[0] = rng.uniform(0.1, 3)
    k2 = rng.uniform(-2, 2, 5)
    eta = random_unit(rng)
    f, fp, r = rng.uniform(-5, 5, 3)
    params = ManifoldParams(Jet((f, fp)), float(r), *map(float, eta))
    return CurvePoint(float(rng.uniform(0.5, 5)), Jet(tuple(k1)), Jet(tuple(k2)), params)


def calibrate_fold_factors(n: int = 200, seed: int = 0) -> tuple[float, float, float]:
    """Empirically determine the factors c with folded tau_3 = c * (E1, E2, E3).

    Each factor is fitted by least squares over ``n`` random points and
    rounded; a non-integral or sign-inconsistent fit raises ValueError.
    """
    rng = np.random.default_rng(seed)
    num = np.zeros(3)
    den = np.zeros(3)
    for _ in range(n):
        pt = random_curve_point(rng)
        folded = fold_components(tau3_expanded(pt), pt.params)
        E = residual_system(pt)
        for i in range(3):
            num[i] += folded[i].value * E[i].value
            den[i] += E[i].value ** 2
    fit = num / den
    out = tuple(float(round(x)) for x in fit)
    if any(abs(x - y) > 1e-9 * max(1.0, abs(y)) for x, y in zip(fit, out)):
        raise ValueError(f"no integral fold factors: {fit}")
    return out


def max_scale(values) -> float:
    return max((v.scale for v in values), default=0.0)


def within(value: Scaled, rtol: float, atol_scale: float = 0.0) -> bool:
    """``|value| <= rtol * (atol_scale + scale)``."""
    return abs(value.value) <= rtol * (atol_scale + value.scale) or (
        value.value == 0.0)


def is_finite_point(pt: CurvePoint) -> bool:
    return all(math.isfinite(x) for x in pt.k1.usable() + pt.k2.usable())
