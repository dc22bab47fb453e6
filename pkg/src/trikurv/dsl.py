"""Closed-form scalar functions of the arclength ``s``.

Grammar (whitespace-insensitive)::

    sum     := product (('+' | '-') product)*
    product := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' exponent)?
    exponent:= ['-'] INT | '(' ['-'] INT ['/' INT] ')'
    atom    := NUMBER | 's' | 'pi' | FUNC '(' sum ')' | '(' sum ')'

with FUNC one of sqrt, sin, cos, tan, exp, ln.  Trees are immutable and
compare structurally.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError, NearPole, ParseError

FUNCTIONS = ("sqrt", "sin", "cos", "tan", "exp", "ln")


class Expr:
    """Base class of expression nodes."""

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Const(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    pass


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: Fraction


@dataclass(frozen=True)
class Func(Expr):
    name: str
    arg: Expr

    def __post_init__(self):
        if self.name not in FUNCTIONS:
            raise ValueError(f"unknown function {self.name!r}")


S = Var()

# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()−])
""", re.VERBOSE)


@dataclass
class _Tok:
    kind: str  # num, ident, op, end
    text: str
    offset: int  # byte offset


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        boff = len(text[:pos].encode())
        if m is None:
            raise ParseError(boff, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        if kind != "ws":
            tok = m.group()
            if tok == "−":
                tok = "-"
            toks.append(_Tok(kind, tok, boff))
        pos = m.end()
    toks.append(_Tok("end", "", len(text.encode())))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def _advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def _is_op(self, *ops: str) -> bool:
        return self.tok.kind == "op" and self.tok.text in ops

    def _expect_op(self, op: str) -> None:
        if not self._is_op(op):
            raise ParseError(self.tok.offset, f"expected '{op}'", repr(op))
        self._advance()

    def parse(self) -> Expr:
        e = self.sum()
        if self.tok.kind != "end":
            raise ParseError(self.tok.offset, f"trailing input {self.tok.text!r}",
                             "end of input")
        return e

    def sum(self) -> Expr:
        e = self.product()
        while self._is_op("+", "-"):
            op = self._advance().text
            rhs = self.product()
            e = Add(e, rhs) if op == "+" else Sub(e, rhs)
        return e

    def product(self) -> Expr:
        e = self.unary()
        while self._is_op("*", "/"):
            op = self._advance().text
            rhs = self.unary()
            e = Mul(e, rhs) if op == "*" else Div(e, rhs)
        return e

    def unary(self) -> Expr:
        if self._is_op("-"):
            self._advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self._is_op("^"):
            self._advance()
            return Pow(base, self.exponent())
        return base

    def _int(self) -> int:
        t = self.tok
        if t.kind != "num" or not t.text.isdigit():
            raise ParseError(t.offset, "expected integer exponent", "integer")
        self._advance()
        return int(t.text)

    def exponent(self) -> Fraction:
        if self._is_op("("):
            self._advance()
            sign = -1 if self._is_op("-") else 1
            if sign < 0:
                self._advance()
            num = self._int()
            den = 1
            if self._is_op("/"):
                self._advance()
                off = self.tok.offset
                den = self._int()
                if den == 0:
                    raise ParseError(off, "zero denominator in exponent", "nonzero integer")
            self._expect_op(")")
            return Fraction(sign * num, den)
        sign = -1 if self._is_op("-") else 1
        if sign < 0:
            self._advance()
        return Fraction(sign * self._int())

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "num":
            self._advance()
            return Const(float(t.text))
        if t.kind == "ident":
            self._advance()
            if t.text == "s":
                return S
            if t.text == "pi":
                return Const(math.pi)
            if t.text in FUNCTIONS:
                self._expect_op("(")
                arg = self.sum()
                self._expect_op(")")
                return Func(t.text, arg)
            raise ParseError(t.offset, f"unknown identifier {t.text!r}",
                             "s, pi or a function name")
        if self._is_op("("):
            self._advance()
            e = self.sum()
            self._expect_op(")")
            return e
        raise ParseError(t.offset, "expected expression", "expression")


def parse(text: str) -> Expr:
    """Parse ``text`` into an expression tree; raises ParseError."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------

_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4}


def _prec(e: Expr) -> int:
    return _PREC.get(type(e), 5)


def _fmt_const(v: float) -> str:
    if not math.isfinite(v):
        raise ValueError(f"cannot print non-finite constant {v!r}")
    if v < 0 or math.copysign(1.0, v) < 0:
        return f"(-{_fmt_const(-v)})"
    return repr(v)


def _fmt_exponent(q: Fraction) -> str:
    if q.denominator == 1 and q >= 0:
        return str(q.numerator)
    return f"({q.numerator})" if q.denominator == 1 else f"({q.numerator}/{q.denominator})"


def to_text(e: Expr) -> str:
    """Render ``e`` in the grammar accepted by :func:`parse`."""
    if isinstance(e, Const):
        return _fmt_const(e.value)
    if isinstance(e, Var):
        return "s"
    if isinstance(e, Func):
        return f"{e.name}({to_text(e.arg)})"
    if isinstance(e, Neg):
        inner = to_text(e.arg)
        return f"-({inner})" if _prec(e.arg) < 3 else f"-{inner}"
    if isinstance(e, Pow):
        base = to_text(e.base)
        if _prec(e.base) < 5:
            base = f"({base})"
        return f"{base}^{_fmt_exponent(e.exponent)}"
    op = {Add: "+", Sub: "-", Mul: "*", Div: "/"}[type(e)]
    p = _PREC[type(e)]
    left, right = to_text(e.left), to_text(e.right)
    if _prec(e.left) < p:
        left = f"({left})"
    if _prec(e.right) <= p:
        right = f"({right})"
    return f"{left} {op} {right}"


# ---------------------------------------------------------------------------
# differentiation
# ---------------------------------------------------------------------------

ZERO = Const(0.0)
ONE = Const(1.0)


def _is(e: Expr, v: float) -> bool:
    return isinstance(e, Const) and e.value == v


def _add(a: Expr, b: Expr) -> Expr:
    if _is(a, 0.0):
        return b
    if _is(b, 0.0):
        return a
    return Add(a, b)


def _sub(a: Expr, b: Expr) -> Expr:
    if _is(b, 0.0):
        return a
    if _is(a, 0.0):
        return _neg(b)
    return Sub(a, b)


def _neg(a: Expr) -> Expr:
    if _is(a, 0.0):
        return ZERO
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def _mul(a: Expr, b: Expr) -> Expr:
    if _is(a, 0.0) or _is(b, 0.0):
        return ZERO
    if _is(a, 1.0):
        return b
    if _is(b, 1.0):
        return a
    return Mul(a, b)


def _div(a: Expr, b: Expr) -> Expr:
    if _is(a, 0.0):
        return ZERO
    if _is(b, 1.0):
        return a
    return Div(a, b)


def _num(q: Fraction) -> Expr:
    c = Const(float(abs(q)))
    return Neg(c) if q < 0 else c


def _pow(base: Expr, q: Fraction) -> Expr:
    if q == 0:
        return ONE
    if q == 1:
        return base
    return Pow(base, q)


@lru_cache(maxsize=4096)
def differentiate(e: Expr) -> Expr:
    """Exact derivative of ``e`` with respect to ``s``.

    Only trivial zero/one folding is applied; no further simplification.
    """
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Var):
        return ONE
    if isinstance(e, Neg):
        return _neg(differentiate(e.arg))
    if isinstance(e, Add):
        return _add(differentiate(e.left), differentiate(e.right))
    if isinstance(e, Sub):
        return _sub(differentiate(e.left), differentiate(e.right))
    if isinstance(e, Mul):
        a, b = e.left, e.right
        return _add(_mul(differentiate(a), b), _mul(a, differentiate(b)))
    if isinstance(e, Div):
        a, b = e.left, e.right
        da, db = differentiate(a), differentiate(b)
        if _is(db, 0.0):
            return _div(da, b)
        return _div(_sub(_mul(da, b), _mul(a, db)), _pow(b, Fraction(2)))
    if isinstance(e, Pow):
        q = e.exponent
        return _mul(_mul(_num(q), _pow(e.base, q - 1)), differentiate(e.base))
    if isinstance(e, Func):
        u = e.arg
        du = differentiate(u)
        if e.name == "sqrt":
            outer = _div(ONE, Mul(Const(2.0), e))
        elif e.name == "sin":
            outer = Func("cos", u)
        elif e.name == "cos":
            outer = _neg(Func("sin", u))
        elif e.name == "tan":
            outer = _div(ONE, Pow(Func("cos", u), Fraction(2)))
        elif e.name == "exp":
            outer = e
        else:  # ln
            outer = _div(ONE, u)
        return _mul(outer, du)
    raise TypeError(f"not an expression node: {e!r}")


def derivatives(e: Expr, n: int) -> tuple[Expr, ...]:
    """``(e, e', ..., e^(n))``."""
    out = [e]
    for _ in range(n):
        out.append(differentiate(out[-1]))
    return tuple(out)


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def evaluate(e: Expr, s: float, pole_guard: float = 0.0) -> float:
    """Evaluate ``e`` at ``s`` in double precision.

    With ``pole_guard > 0`` any ``tan`` node whose argument has
    ``|cos| <= pole_guard`` raises :class:`NearPole`.
    """
    v = _eval(e, float(s), pole_guard)
    if not math.isfinite(v):
        raise DomainError(to_text(e), v, "non-finite result")
    return v


def _eval(e: Expr, s: float, guard: float) -> float:
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return s
    if isinstance(e, Neg):
        return -_eval(e.arg, s, guard)
    if isinstance(e, Add):
        return _eval(e.left, s, guard) + _eval(e.right, s, guard)
    if isinstance(e, Sub):
        return _eval(e.left, s, guard) - _eval(e.right, s, guard)
    if isinstance(e, Mul):
        return _eval(e.left, s, guard) * _eval(e.right, s, guard)
    if isinstance(e, Div):
        num = _eval(e.left, s, guard)
        den = _eval(e.right, s, guard)
        if den == 0.0:
            raise DomainError(to_text(e), den, "division by zero")
        return num / den
    if isinstance(e, Pow):
        b = _eval(e.base, s, guard)
        q = e.exponent
        if b == 0.0 and q < 0:
            raise DomainError(to_text(e), b, "zero to a negative power")
        if q.denominator == 1:
            try:
                return b ** q.numerator
            except OverflowError:
                raise DomainError(to_text(e), b, "overflow") from None
        if b < 0.0:
            if q.denominator % 2 == 0:
                raise DomainError(to_text(e), b, "even root of a negative number")
            return -((-b) ** float(q)) if q.numerator % 2 else (-b) ** float(q)
        try:
            return b ** float(q)
        except OverflowError:
            raise DomainError(to_text(e), b, "overflow") from None
    if isinstance(e, Func):
        u = _eval(e.arg, s, guard)
        name = e.name
        if name == "sqrt":
            if u < 0.0:
                raise DomainError(to_text(e), u, "sqrt of a negative number")
            return math.sqrt(u)
        if name == "ln":
            if u <= 0.0:
                raise DomainError(to_text(e), u, "log of a nonpositive number")
            return math.log(u)
        if name == "exp":
            try:
                return math.exp(u)
            except OverflowError:
                raise DomainError(to_text(e), u, "overflow") from None
        if name == "tan":
            c = math.cos(u)
            if c == 0.0 or abs(c) <= guard:
                raise NearPole(to_text(e), u, f"tan pole guard |cos|={abs(c):.3g}")
            return math.tan(u)
        return math.sin(u) if name == "sin" else math.cos(u)
    raise TypeError(f"not an expression node: {e!r}")
