"""Vector fields along the curve in the Frenet frame (T, N, B)."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UsableOrderExhausted
from .jets import Jet, jet_mul, jet_pow, jet_shift


@dataclass(frozen=True)
class FrameVector:
    aT: Jet
    aN: Jet
    aB: Jet

    @classmethod
    def tangent(cls) -> FrameVector:
        return cls(Jet.constant(1.0), Jet.constant(0.0), Jet.constant(0.0))

    @property
    def order(self) -> float:
        return min(self.aT.order, self.aN.order, self.aB.order)

    def values(self) -> tuple[float, float, float]:
        return (self.aT[0], self.aN[0], self.aB[0])

    def norm2(self) -> float:
        return sum(x * x for x in self.values())


def covariant_derivative(v: FrameVector, k1: Jet, k2: Jet) -> FrameVector:
    """Apply nabla_T using T' = k1 N, N' = -k1 T + k2 B, B' = -k2 N."""
    if v.order < 1:
        raise UsableOrderExhausted("frame vector has usable order 0")
    aT = jet_shift(v.aT) - jet_mul(k1, v.aN)
    aN = jet_shift(v.aN) + jet_mul(k1, v.aT) - jet_mul(k2, v.aB)
    aB = jet_shift(v.aB) + jet_mul(k2, v.aN)
    return FrameVector(aT, aN, aB)


def _need(k: int, k1: Jet, k2: Jet) -> None:
    if k1.order < k - 1 or k2.order < max(k - 2, 0):
        raise UsableOrderExhausted(
            f"nabla^{k} T needs k1 to order {k - 1} and k2 to order {max(k - 2, 0)}")


def nabla_chain(n: int, k1: Jet, k2: Jet) -> list[FrameVector]:
    """``[T, nabla_T T, ..., nabla_T^n T]``."""
    _need(n, k1, k2)
    out = [FrameVector.tangent()]
    for _ in range(n):
        out.append(covariant_derivative(out[-1], k1, k2))
    return out


def nabla_power(k: int, k1: Jet, k2: Jet) -> FrameVector:
    """nabla_T^k T by repeated covariant differentiation of T."""
    if not 1 <= k <= 5:
        raise ValueError("k must be in 1..5")
    return nabla_chain(k, k1, k2)[k]


def derivative_list(j: Jet, n: int) -> list[Jet]:
    """``[j, j', ..., j^(n)]`` as jets of decreasing usable order."""
    out = [j]
    for _ in range(n):
        out.append(jet_shift(out[-1]))
    return out


def nabla_coefficients(k: int, a, b):
    """Closed-form (T, N, B) coefficients of nabla_T^k T, k = 1..5.

    ``a`` and ``b`` list the derivatives of k1 and k2; entries may be any
    ring-like values (floats, jets, :class:`~trikurv.scaled.Scaled`).
    """
    if k == 1:
        return (0.0 * a[0], a[0], 0.0 * a[0])
    if k == 2:
        return (-(a[0] ** 2), a[1], a[0] * b[0])
    if k == 3:
        return (-3 * a[0] * a[1],
                -(a[0] ** 3) - a[0] * b[0] ** 2 + a[2],
                2 * a[1] * b[0] + a[0] * b[1])
    if k == 4:
        return (a[0] ** 4 + a[0] ** 2 * b[0] ** 2 - 4 * a[2] * a[0] - 3 * a[1] ** 2,
                -(6 * a[0] ** 2 * a[1] + 3 * b[0] ** 2 * a[1] + 3 * a[0] * b[0] * b[1] - a[3]),
                3 * a[2] * b[0] + a[0] * b[2] + 3 * a[1] * b[1] - b[0] * a[0] ** 3
                - a[0] * b[0] ** 3)
    if k == 5:
        return (10 * a[0] ** 3 * a[1] + 5 * a[0] * a[1] * b[0] ** 2 - 5 * a[0] * a[3]
                - 10 * a[1] * a[2] + 5 * b[0] * b[1] * a[0] ** 2,
                a[0] ** 5 + 2 * a[0] ** 3 * b[0] ** 2 - 10 * a[0] ** 2 * a[2]
                - 15 * a[0] * a[1] ** 2 - 12 * b[0] * b[1] * a[1] - 6 * b[0] ** 2 * a[2]
                - 3 * a[0] * b[1] ** 2 - 4 * a[0] * b[0] * b[2] + a[0] * b[0] ** 4 + a[4],
                -9 * a[0] ** 2 * b[0] * a[1] - 4 * b[0] ** 3 * a[1] - 6 * a[0] * b[0] ** 2 * b[1]
                + 4 * a[3] * b[0] + 6 * a[2] * b[1] + 4 * a[1] * b[2] + a[0] * b[3]
                - b[1] * a[0] ** 3)
    raise ValueError("k must be in 1..5")


def nabla_power_hardcoded(k: int, k1: Jet, k2: Jet) -> FrameVector:
    """nabla_T^k T from the closed-form coefficient polynomials (k = 2..5).

    The polynomials are evaluated in jet arithmetic, so the result carries
    the coefficient functions' derivatives as far as they are determined.
    """
    if not 2 <= k <= 5:
        raise ValueError("k must be in 2..5")
    _need(k, k1, k2)
    a = derivative_list(k1, k - 1)
    b = derivative_list(k2, max(k - 2, 0))
    b += [None] * (4 - len(b))
    return FrameVector(*nabla_coefficients(k, a, b))
