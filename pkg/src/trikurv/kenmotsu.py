"""Pointwise data of a 3-dimensional f-Kenmotsu manifold along the curve.

Only the components of the Reeb field xi in the Frenet frame are modelled,
eta = (eta(T), eta(N), eta(B)); the structure tensor phi never enters the
triharmonicity conditions.  The curvature tensor is

    R(X,Y)Z = A (g(Y,Z) X - g(X,Z) Y)
              - B (g(Y,Z) eta(X) xi - g(X,Z) eta(Y) xi
                   - eta(X) eta(Z) Y + eta(Y) eta(Z) X)

with A = r/2 + 2(f^2 + f') and B = r/2 + 3(f^2 + f').
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .errors import RadicandNegative
from .jets import Jet, fd_jet

ETA_NORM_TOL = 1e-9


@dataclass(frozen=True)
class ManifoldParams:
    f_jet: Jet
    r: float
    etaT: float
    etaN: float
    etaB: float

    def __post_init__(self):
        n2 = self.etaT ** 2 + self.etaN ** 2 + self.etaB ** 2
        if abs(n2 - 1.0) > ETA_NORM_TOL:
            raise ValueError(f"eta components must form a unit vector (|eta|^2 = {n2!r})")

    @property
    def f(self) -> float:
        return self.f_jet[0]

    @property
    def fp(self) -> float:
        return self.f_jet[1]

    @property
    def eta(self) -> np.ndarray:
        return np.array([self.etaT, self.etaN, self.etaB])

    @property
    def A(self) -> float:
        return coeff_A(self)

    @property
    def B(self) -> float:
        return coeff_B(self)


def coeff_A(p: ManifoldParams) -> float:
    return p.r / 2 + 2 * (p.f ** 2 + p.fp)


def coeff_B(p: ManifoldParams) -> float:
    return p.r / 2 + 3 * (p.f ** 2 + p.fp)


def curvature_op(X: Sequence[float], Y: Sequence[float], Z: Sequence[float],
                 p: ManifoldParams) -> np.ndarray:
    """Frame components of R(X, Y)Z for pointwise frame triples."""
    X, Y, Z = (np.asarray(v, dtype=float) for v in (X, Y, Z))
    xi = p.eta
    A, B = coeff_A(p), coeff_B(p)
    gYZ, gXZ = Y @ Z, X @ Z
    eX, eY, eZ = X @ xi, Y @ xi, Z @ xi
    return (A * (gYZ * X - gXZ * Y)
            - B * (gYZ * eX * xi - gXZ * eY * xi - eX * eZ * Y + eY * eZ * X))


# ---------------------------------------------------------------------------
# eta models
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Explicit:
    etaT: float
    etaN: float
    etaB: float


@dataclass(frozen=True)
class Slant:
    theta: float


@dataclass(frozen=True)
class Legendre:
    pass


EtaModel = Union[Explicit, Slant, Legendre]


def slant_radicand(theta: float, f: float, k1: float) -> float:
    return k1 ** 2 - f ** 2 * math.sin(theta) ** 2


def eta_from_model(m: EtaModel, f: float, k1: float) -> tuple[float, float, float]:
    """(eta(T), eta(N), eta(B)) for the current f and k1.

    Slant curves use eta(N) = -(f/k1) sin^2 theta and the nonnegative branch
    eta(B) = (|sin theta|/k1) sqrt(k1^2 - f^2 sin^2 theta).
    """
    if isinstance(m, Explicit):
        return (m.etaT, m.etaN, m.etaB)
    if isinstance(m, Legendre):
        return (0.0, -1.0, 0.0)
    if isinstance(m, Slant):
        if not k1 > 0:
            raise ValueError("slant eta needs k1 > 0")
        sn = math.sin(m.theta)
        rad = slant_radicand(m.theta, f, k1)
        if rad < 0:
            raise RadicandNegative(rad, "slant admissibility k1^2 >= f^2 sin^2(theta) fails")
        return (math.cos(m.theta), -(f / k1) * sn ** 2, abs(sn) / k1 * math.sqrt(rad))
    raise TypeError(f"unknown eta model {m!r}")


def eta_transport_residual(k1: Jet, k2: Jet, f: Jet,
                           eta_path: Sequence[Callable[[float], float]],
                           s: float, h: float = 1e-4) -> tuple[float, float, float]:
    """Residuals of the transport of eta along the curve.

    Differentiating eta(V) = g(V, xi) with nabla_T xi = f (T - eta(T) xi)
    gives, for a compatible path,

        eta(T)' = k1 eta(N) + f (1 - eta(T)^2)
        eta(N)' = -k1 eta(T) + k2 eta(B) - f eta(T) eta(N)
        eta(B)' = -k2 eta(N) - f eta(T) eta(B)

    Each residual is right-hand side minus the finite-difference derivative
    of the supplied path.
    """
    eT, eN, eB = (fn(s) for fn in eta_path)
    dT, dN, dB = (fd_jet(fn, s, h)[1] for fn in eta_path)
    K1, K2, F = k1[0], k2[0], f[0]
    rT = K1 * eN + F * (1 - eT ** 2) - dT
    rN = -K1 * eT + K2 * eB - F * eT * eN - dN
    rB = -K2 * eN - F * eT * eB - dB
    return (rT, rN, rB)
