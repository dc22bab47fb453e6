"""Floats that remember the size of the largest monomial they were built from.

Sums keep the larger magnitude and products multiply magnitudes, so after
evaluating a polynomial the ``scale`` equals the largest absolute value of
any monomial of its expanded form.  Residuals are judged against it.
"""

from __future__ import annotations


class Scaled:
    __slots__ = ("value", "scale")

    def __init__(self, value: float, scale: float | None = None):
        self.value = float(value)
        self.scale = abs(self.value) if scale is None else float(scale)

    @staticmethod
    def lift(x) -> Scaled:
        return x if isinstance(x, Scaled) else Scaled(x)

    def __add__(self, other):
        o = Scaled.lift(other)
        return Scaled(self.value + o.value, max(self.scale, o.scale))

    __radd__ = __add__

    def __sub__(self, other):
        o = Scaled.lift(other)
        return Scaled(self.value - o.value, max(self.scale, o.scale))

    def __rsub__(self, other):
        return Scaled.lift(other) - self

    def __neg__(self):
        return Scaled(-self.value, self.scale)

    def __mul__(self, other):
        o = Scaled.lift(other)
        return Scaled(self.value * o.value, self.scale * o.scale)

    __rmul__ = __mul__

    def __truediv__(self, other):
        # division by a single factor, treated as a monomial factor
        o = Scaled.lift(other)
        return Scaled(self.value / o.value, self.scale / abs(o.value))

    def __pow__(self, n: int):
        out = Scaled(1.0)
        for _ in range(n):
            out = out * self
        return out

    def __float__(self) -> float:
        return self.value

    def relative(self) -> float:
        """``|value| / scale`` (0 when both vanish)."""
        if self.scale == 0.0:
            return 0.0 if self.value == 0.0 else float("inf")
        return abs(self.value) / self.scale

    def __repr__(self) -> str:
        return f"Scaled({self.value!r}, scale={self.scale!r})"
