"""Truncated derivative sequences ``(f, f', f'', f''', f'''')`` at a point.

A :class:`Jet` tracks how many of its slots are trustworthy.  Shifting
(differentiating) a jet loses one usable slot; reading past the usable
order raises :class:`UsableOrderExhausted`.  Exact constants carry an
infinite usable order, since all their derivatives are known to vanish.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

from . import dsl
from .errors import DomainError, UsableOrderExhausted

MAX_ORDER = 4
_N = MAX_ORDER + 1
_BINOM = [[math.comb(k, i) for i in range(k + 1)] for k in range(_N)]


@dataclass(frozen=True)
class Jet:
    d: tuple[float, ...]
    order: float = MAX_ORDER

    def __post_init__(self):
        d = tuple(float(x) for x in self.d)
        if len(d) > _N:
            raise ValueError(f"jets hold at most {_N} entries")
        usable = min(self.order, len(d) - 1)
        fill = 0.0 if self.order == math.inf else math.nan
        d = d + (fill,) * (_N - len(d))
        object.__setattr__(self, "d", d)
        if self.order != math.inf:
            object.__setattr__(self, "order", int(usable))

    @classmethod
    def constant(cls, c: float) -> Jet:
        return cls((c, 0.0, 0.0, 0.0, 0.0), math.inf)

    @classmethod
    def variable(cls, s: float) -> Jet:
        """Jet of the identity function ``s -> s`` at ``s``."""
        return cls((s, 1.0, 0.0, 0.0, 0.0))

    def __getitem__(self, k: int) -> float:
        if k < 0 or k > MAX_ORDER:
            raise IndexError(k)
        if k > self.order:
            raise UsableOrderExhausted(
                f"derivative {k} requested from a jet of usable order {self.order}")
        return self.d[k]

    @property
    def value(self) -> float:
        return self.d[0]

    def usable(self) -> tuple[float, ...]:
        n = MAX_ORDER if self.order == math.inf else self.order
        return self.d[: n + 1]

    def __add__(self, other: Jet) -> Jet:
        return jet_add(self, other)

    def __sub__(self, other: Jet) -> Jet:
        return jet_sub(self, other)

    def __neg__(self) -> Jet:
        return jet_scale(self, -1.0)

    def __mul__(self, other):
        if isinstance(other, Jet):
            return jet_mul(self, other)
        return jet_scale(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Jet:
        return jet_pow(self, n)

    def __repr__(self) -> str:
        return f"Jet({self.usable()!r}, order={self.order})"


def jet_add(a: Jet, b: Jet) -> Jet:
    return Jet(tuple(x + y for x, y in zip(a.d, b.d)), min(a.order, b.order))


def jet_sub(a: Jet, b: Jet) -> Jet:
    return Jet(tuple(x - y for x, y in zip(a.d, b.d)), min(a.order, b.order))


def jet_scale(a: Jet, c: float) -> Jet:
    return Jet(tuple(c * x for x in a.d), a.order)


def jet_mul(a: Jet, b: Jet) -> Jet:
    """Leibniz product, ``(ab)^(k) = sum_i C(k,i) a^(i) b^(k-i)``."""
    order = min(a.order, b.order)
    out = []
    for k in range(_N):
        if k > order:
            out.append(math.nan)
            continue
        row = _BINOM[k]
        out.append(math.fsum(row[i] * a.d[i] * b.d[k - i] for i in range(k + 1)))
    return Jet(tuple(out), order)


def jet_shift(a: Jet) -> Jet:
    """Jet of the derivative; usable order drops by one."""
    if a.order < 1:
        raise UsableOrderExhausted("cannot differentiate a jet of usable order 0")
    if a.order == math.inf:
        return Jet(a.d[1:] + (0.0,), math.inf)
    return Jet(a.d[1:] + (math.nan,), a.order - 1)


def jet_pow(a: Jet, n: int) -> Jet:
    out = Jet.constant(1.0)
    for _ in range(n):
        out = jet_mul(out, a)
    return out


def jet_from_expr(e: dsl.Expr, s: float, pole_guard: float = 0.0) -> Jet:
    """Exact derivatives 0..4 of ``e`` at ``s`` via symbolic differentiation."""
    return Jet(tuple(dsl.evaluate(t, s, pole_guard) for t in dsl.derivatives(e, MAX_ORDER)))


# central-difference stencils (offset multiples of h, weights, power of h)
_STENCILS = (
    ((0,), (1.0,), 0),
    ((-1, 1), (-0.5, 0.5), 1),
    ((-1, 0, 1), (1.0, -2.0, 1.0), 2),
    ((-2, -1, 1, 2), (-0.5, 1.0, -1.0, 0.5), 3),
    ((-2, -1, 0, 1, 2), (1.0, -4.0, 6.0, -4.0, 1.0), 4),
)


def fd_jet(fn: Callable[[float], float], s: float, h: float) -> Jet:
    """Second-order central finite-difference estimate of derivatives 0..4.

    Independent of :mod:`trikurv.dsl`; used as an oracle.
    """
    if not h > 0:
        raise ValueError("step must be positive")
    cache: dict[int, float] = {}

    def f(m: int) -> float:
        if m not in cache:
            x = s + m * h
            try:
                v = fn(x)
            except DomainError:
                raise
            except (ArithmeticError, ValueError) as exc:
                raise DomainError("fd stencil", x, str(exc)) from None
            if not math.isfinite(v):
                raise DomainError("fd stencil", x, "non-finite value")
            cache[m] = v
        return cache[m]

    d = []
    for offsets, weights, p in _STENCILS:
        d.append(math.fsum(w * f(m) for m, w in zip(offsets, weights)) / h ** p)
    return Jet(tuple(d))


def jets_close(a: Jet, b: Jet, rtol: float, atol: float = 0.0,
               orders: Iterable[int] = range(_N)) -> bool:
    return all(abs(a[k] - b[k]) <= atol + rtol * max(abs(a[k]), abs(b[k])) for k in orders)
