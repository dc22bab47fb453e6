"""Random inputs shared by the test modules."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from trikurv import dsl
from trikurv.jets import Jet

# oracle steps for the derivative comparison: d0..d3 and d4 use separate h
FD_H, FD_H4 = 1e-3, 2e-3
# probe points; tan(s/4) has a pole near 6.28 and the Riccati form near 2.22
CORPUS_S = (0.6, 1.0, 1.5, 2.7)


def fd_tolerance(k: int, dk: float) -> float:
    return max(1e-4, 1e-4 * abs(dk)) if k < 4 else 1e-2 * max(1.0, abs(dk))


def random_jet(rng: np.random.Generator, positive: bool = False) -> Jet:
    d = rng.uniform(-2, 2, 5)
    if positive:
        d[0] = rng.uniform(0.1, 3)
    return Jet(tuple(d))


def _const(rng, lo=0.5, hi=2.0) -> dsl.Expr:
    return dsl.Const(float(np.round(rng.uniform(lo, hi), 3)))


def positive_expr(rng: np.random.Generator, depth: int) -> dsl.Expr:
    """An expression that stays positive for s > 0."""
    if depth == 0:
        return dsl.S if rng.random() < 0.6 else _const(rng)
    k = rng.integers(7)
    a = positive_expr(rng, depth - 1)
    if k == 0:
        return dsl.Add(a, positive_expr(rng, depth - 1))
    if k == 1:
        return dsl.Mul(a, positive_expr(rng, depth - 1))
    if k == 2:
        return dsl.Div(a, positive_expr(rng, depth - 1))
    if k == 3:
        return dsl.Func("sqrt", a)
    if k == 4:
        return dsl.Pow(a, Fraction(int(rng.integers(-3, 4)), int(rng.choice([1, 2, 3]))))
    if k == 5:
        return dsl.Func("exp", dsl.Func("sin", a))
    return dsl.Add(dsl.Const(1.0), dsl.Pow(smooth_expr(rng, depth - 1), Fraction(2)))


def smooth_expr(rng: np.random.Generator, depth: int) -> dsl.Expr:
    """A smooth expression on s in [0.5, 3] built from safe compositions."""
    if depth == 0:
        return dsl.S if rng.random() < 0.6 else _const(rng, -2.0, 2.0)
    k = rng.integers(8)
    a = smooth_expr(rng, depth - 1)
    if k == 0:
        return dsl.Add(a, smooth_expr(rng, depth - 1))
    if k == 1:
        return dsl.Sub(a, smooth_expr(rng, depth - 1))
    if k == 2:
        return dsl.Mul(a, smooth_expr(rng, depth - 1))
    if k == 3:
        return dsl.Neg(a)
    if k == 4:
        return dsl.Func("sin", a)
    if k == 5:
        return dsl.Func("cos", a)
    if k == 6:
        return dsl.Func("ln", positive_expr(rng, depth - 1))
    return dsl.Div(a, positive_expr(rng, depth - 1))


def expression_corpus(n: int = 50, seed: int = 7) -> list[dsl.Expr]:
    rng = np.random.default_rng(seed)
    fixed = [dsl.parse(t) for t in (
        "sqrt(5)/s", "9/(2*s)", "s^3", "tan(s/4)", "exp(-s)*cos(2*s)", "ln(1 + s^2)",
        "s^(1/2) - s^(-3/2)", "sin(s)^2 + cos(s)^2", "1/(1 + s)^2",
        "0.7071067811865476*tan((-1.4142135623730951*s)/2)",
    )]
    out = list(fixed)
    while len(out) < n:
        out.append(smooth_expr(rng, int(rng.integers(1, 4))))
    return out
