"""Reduced triharmonicity systems, explicit solutions and nonexistence checks.

Every case evaluates its displayed left-hand sides verbatim.  Where two
printed versions of an equation disagree, each version is available as a
named *variant*; :func:`audit_variants` decides which ones agree with the
general system of :func:`trikurv.tension.residual_system`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from . import dsl
from .errors import HypothesisViolation, NearPole, RadicandNonpositive
from .jets import Jet, jet_from_expr, jet_mul, jet_shift
from .kenmotsu import ManifoldParams, Slant, coeff_A, coeff_B, eta_from_model, slant_radicand
from .scaled import Scaled
from .tension import CurvePoint, random_unit, residual_system

HYPOTHESIS_RTOL = 1e-9
POLE_GUARD = 1e-3


class CaseId(str, Enum):
    CaseI = "case-i"
    CaseI_Helix = "case-i-helix"
    CaseII = "case-ii"
    SubcaseII1 = "subcase-ii1"
    SubcaseII2 = "subcase-ii2"
    CaseIII = "case-iii"
    CaseIV = "case-iv"
    SubcaseIV1 = "subcase-iv1"
    SubcaseIV2 = "subcase-iv2"
    SlantGeneral = "slant"
    SlantCaseI = "slant-case-i"
    SlantCaseII = "slant-case-ii"
    Legendre = "legendre"

    @classmethod
    def lookup(cls, key: str) -> CaseId:
        for c in cls:
            if key in (c.name, c.value):
                return c
        raise KeyError(f"unknown case {key!r}")


@dataclass(frozen=True)
class Residual:
    name: str
    value: float
    scale: float

    @classmethod
    def of(cls, name: str, v: Scaled) -> Residual:
        return cls(name, v.value, v.scale)

    def passes(self, tol: float) -> bool:
        return abs(self.value) <= tol * self.scale

    @property
    def relative(self) -> float:
        if self.scale == 0.0:
            return 0.0 if self.value == 0.0 else math.inf
        return abs(self.value) / self.scale


@dataclass(frozen=True)
class FirstIntegralConstants:
    c1: float
    c2: float

    def __post_init__(self):
        if not (math.isfinite(self.c1) and math.isfinite(self.c2)):
            raise ValueError("integration constants must be finite")


@dataclass
class Finding:
    """A structured statement about the printed formulas, with evidence."""

    kind: str
    subject: str
    statement: str
    consistent: bool
    evidence: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"kind": self.kind, "subject": self.subject, "statement": self.statement,
                "consistent": self.consistent, "evidence": self.evidence}


# ---------------------------------------------------------------------------
# hypothesis predicates
# ---------------------------------------------------------------------------

def _tol(x: float) -> float:
    return HYPOTHESIS_RTOL * (1.0 + abs(x))


def k1_constant(pt: CurvePoint) -> bool:
    return all(abs(pt.k1[i]) <= _tol(pt.k1[0]) for i in range(1, 5))


def k2_zero(pt: CurvePoint) -> bool:
    return all(abs(pt.k2[i]) <= _tol(pt.k1[0]) for i in range(4))


def k2_constant(pt: CurvePoint) -> bool:
    return all(abs(pt.k2[i]) <= _tol(pt.k2[0]) for i in range(1, 4))


def k2_nonzero(pt: CurvePoint) -> bool:
    return abs(pt.k2[0]) > _tol(pt.k1[0])


def B_zero(pt: CurvePoint) -> bool:
    p = pt.params
    scale = max(abs(p.r) / 2, 3 * p.f ** 2, 3 * abs(p.fp))
    return abs(coeff_B(p)) <= HYPOTHESIS_RTOL * (1.0 + scale)


def etaB_zero(pt: CurvePoint) -> bool:
    return abs(pt.params.etaB) <= HYPOTHESIS_RTOL


def slant_theta(pt: CurvePoint) -> float:
    """Contact angle in [0, pi] read off eta(T) = cos(theta)."""
    return math.acos(max(-1.0, min(1.0, pt.params.etaT)))


def is_slant(pt: CurvePoint, theta: float) -> bool:
    p = pt.params
    try:
        model = eta_from_model(Slant(theta), p.f, pt.k1[0])
    except Exception:
        return False
    return all(abs(x - y) <= 1e-9 for x, y in zip(model, (p.etaT, p.etaN, p.etaB)))


def is_legendre(pt: CurvePoint) -> bool:
    p = pt.params
    return max(abs(p.etaT), abs(p.etaN + 1.0), abs(p.etaB)) <= HYPOTHESIS_RTOL


_K1C = ("k1 constant", k1_constant)
_K1N = ("k1 nonconstant", lambda pt: not k1_constant(pt))
_K2Z = ("k2 = 0", k2_zero)
_K2C = ("k2 constant", k2_constant)
_K2NZ = ("k2 nonzero", k2_nonzero)
_BZ = ("r/2 + 3(f^2 + f') = 0", B_zero)
_EBZ = ("eta(B) = 0", etaB_zero)
_LEG = ("eta = (0, -1, 0)", is_legendre)

HYPOTHESES: dict[CaseId, tuple] = {
    CaseId.CaseI: (_K1C,),
    CaseId.CaseI_Helix: (_K1C, _K2C, _K2NZ),
    CaseId.CaseII: (_K1C, _K2Z),
    CaseId.SubcaseII1: (_K1C, _K2Z, _BZ),
    CaseId.SubcaseII2: (_K1C, _K2Z, _EBZ),
    CaseId.CaseIII: (_K1N, _K2C, _K2NZ),
    CaseId.CaseIV: (_K1N, _K2Z),
    CaseId.SubcaseIV1: (_K1N, _K2Z, _BZ),
    CaseId.SubcaseIV2: (_K1N, _K2Z, _EBZ),
    CaseId.SlantGeneral: (),
    CaseId.SlantCaseI: (_K1C, _K2C, _K2NZ),
    CaseId.SlantCaseII: (_K1C, _K2Z),
    CaseId.Legendre: (_LEG, _K2Z),
}

PARENT: dict[CaseId, CaseId] = {
    CaseId.CaseI_Helix: CaseId.CaseI,
    CaseId.SubcaseII1: CaseId.CaseII,
    CaseId.SubcaseII2: CaseId.CaseII,
    CaseId.SubcaseIV1: CaseId.CaseIV,
    CaseId.SubcaseIV2: CaseId.CaseIV,
    CaseId.SlantCaseI: CaseId.SlantGeneral,
    CaseId.SlantCaseII: CaseId.SlantGeneral,
}

SLANT_CASES = (CaseId.SlantGeneral, CaseId.SlantCaseI, CaseId.SlantCaseII)


def check_hypothesis(case: CaseId, pt: CurvePoint, theta: float | None = None) -> float | None:
    """Raise HypothesisViolation unless ``pt`` lies in ``case``.

    Returns the contact angle for slant cases.
    """
    for label, pred in HYPOTHESES[case]:
        if not pred(pt):
            raise HypothesisViolation(case.value, label)
    if case in SLANT_CASES:
        th = slant_theta(pt) if theta is None else theta
        if slant_radicand(th, pt.params.f, pt.k1[0]) < 0:
            raise HypothesisViolation(case.value, "slant admissibility k1^2 >= f^2 sin^2(theta)")
        if not is_slant(pt, th):
            raise HypothesisViolation(case.value, f"eta is the slant frame for theta={th!r}")
        return th
    return None


# ---------------------------------------------------------------------------
# displayed systems
# ---------------------------------------------------------------------------

class _Sym:
    def __init__(self, pt: CurvePoint, theta: float | None = None):
        self.a = [Scaled(pt.k1[i]) for i in range(5)]
        self.b = [Scaled(pt.k2[i]) for i in range(4)]
        p = pt.params
        self.r, self.f, self.fp = Scaled(p.r), Scaled(p.f), Scaled(p.fp)
        self.A = self.r * 0.5 + 2 * (self.f * self.f + self.fp)
        self.B = self.r * 0.5 + 3 * (self.f * self.f + self.fp)
        self.eT, self.eN, self.eB = Scaled(p.etaT), Scaled(p.etaN), Scaled(p.etaB)
        if theta is not None:
            k1 = pt.k1[0]
            self.cos = Scaled(math.cos(theta))
            self.sin2 = Scaled(math.sin(theta) ** 2)
            self.sabs = Scaled(abs(math.sin(theta)))
            self.root = Scaled(math.sqrt(max(slant_radicand(theta, p.f, k1), 0.0)))


def _case_I(q: _Sym, variant: str):
    a, b, A, B, eT, eN, eB = q.a, q.b, q.A, q.B, q.eT, q.eN, q.eB
    return [
        ("I.1", a[0] ** 2 * b[0] * b[1]),
        ("I.2", 4 * a[0] * b[0] * b[2] + 3 * a[0] * b[1] ** 2 - a[0] ** 5 - a[0] * b[0] ** 4
         - 2 * a[0] ** 3 * b[0] ** 2
         + (2 * a[0] ** 3 + a[0] * b[0] ** 2) * (A - B * (eT ** 2 + eN ** 2))
         + (a[0] ** 2 * b[0] * eT + a[0] * b[1] * eN) * B * eB),
        ("I.3", 6 * a[0] * b[0] ** 2 * b[1] + b[1] * a[0] ** 3 - a[0] * b[3]
         - (a[0] * b[1]) * (A - B * (eT ** 2 + eB ** 2))
         - (a[0] ** 2 * b[0] * eT + (2 * a[0] ** 3 + a[0] * b[0] ** 2) * eB) * B * eN),
    ]


def _case_I_helix(q: _Sym, variant: str):
    a, b, A, B, eT, eN, eB = q.a, q.b, q.A, q.B, q.eT, q.eN, q.eB
    k1, k2 = a[0], b[0]
    return [
        ("helix.1", (k1 ** 2 + k2 ** 2) ** 2
         - (2 * k1 ** 2 + k2 ** 2) * (A - B * (eT ** 2 + eN ** 2))
         - k1 * k2 * eT * eB * B),
        ("helix.2", (k1 * k2 * eT + (2 * k1 ** 2 + k2 ** 2) * eB) * B * eN),
    ]


def _case_II(q: _Sym, variant: str):
    a, A, B, eT, eN, eB = q.a, q.A, q.B, q.eT, q.eN, q.eB
    return [
        ("II.1", a[0] ** 5 - 2 * a[0] ** 3 * (A - B * (eT ** 2 + eN ** 2))),
        ("II.2", 2 * a[0] ** 3 * B * eN * eB),
    ]


def _subcase_II1(q: _Sym, variant: str):
    a = q.a
    return [
        ("II-1.reduced", a[0] ** 2 + 2 * (q.f * q.f + q.fp)),
        ("II-1.r", q.r - 3 * a[0] ** 2),
    ]


def _subcase_II2(q: _Sym, variant: str):
    a, A, B, eT, eN = q.a, q.A, q.B, q.eT, q.eN
    return [
        ("II-2.reduced", a[0] ** 5 - 2 * a[0] ** 3 * (A - B * (eT ** 2 + eN ** 2))),
        ("II-2.k1", a[0] ** 2 - 2 * (A - B * (eT ** 2 + eN ** 2))),
    ]


CASE_III_VARIANTS = {
    # name: (power of k2 in the 4 k2^p k1' term, sign in front of B(eta(T)^2 + eta(B)^2))
    "printed": (3, +1),
    "theorem": (2, +1),
    "sign-corrected": (3, -1),
    "theorem-sign-corrected": (2, -1),
}


def _case_III(q: _Sym, variant: str):
    a, b, A, B, eT, eN, eB = q.a, q.b, q.A, q.B, q.eT, q.eN, q.eB
    power, sign = CASE_III_VARIANTS[variant]
    P = a[2] - 2 * a[0] ** 3 - a[0] * b[0] ** 2
    return [
        ("III.1", a[0] * a[3] + 2 * a[1] * a[2] - 2 * a[0] ** 3 * a[1] - b[0] ** 2 * a[0] * a[1]),
        ("III.2", a[4] - 10 * a[0] ** 2 * a[2] - 6 * b[0] ** 2 * a[2] - 15 * a[0] * a[1] ** 2
         + a[0] ** 5 + a[0] * b[0] ** 4 + 2 * a[0] ** 3 * b[0] ** 2
         + P * (A - B * (eT ** 2 + eN ** 2))
         - (a[0] ** 2 * b[0] * eT + 2 * b[0] * a[1] * eN) * B * eB),
        ("III.3", 4 * b[0] * a[3] - 9 * a[0] ** 2 * b[0] * a[1] - 4 * b[0] ** power * a[1]
         + (2 * a[1] * b[0]) * (A + sign * B * (eT ** 2 + eB ** 2))
         + (a[0] ** 2 * b[0] * eT - P * eB) * B * eN),
    ]


def _case_IV(q: _Sym, variant: str):
    a, A, B, eT, eN, eB = q.a, q.A, q.B, q.eT, q.eN, q.eB
    return [
        ("IV.1", a[0] * a[3] + 2 * a[1] * a[2] - 2 * a[0] ** 3 * a[1]),
        ("IV.2", a[4] - 10 * a[0] ** 2 * a[2] - 15 * a[0] * a[1] ** 2 + a[0] ** 5
         + (a[2] - 2 * a[0] ** 3) * (A - B * (eT ** 2 + eN ** 2))),
        ("IV.3", (a[2] - 2 * a[0] ** 3) * B * eB * eN),
    ]


def _subcase_IV1(q: _Sym, variant: str):
    a, A = q.a, q.A
    return [
        ("IV-1.1", a[0] * a[3] + 2 * a[1] * a[2] - 2 * a[0] ** 3 * a[1]),
        ("IV-1.2", a[4] - 10 * a[0] ** 2 * a[2] - 15 * a[0] * a[1] ** 2 + a[0] ** 5
         + (a[2] - 2 * a[0] ** 3) * A),
    ]


def _subcase_IV2(q: _Sym, variant: str):
    return [(n.replace("IV.", "IV-2."), v) for n, v in _case_IV(q, variant)[:2]]


SLANT_VARIANTS = {"printed": +1, "sign-corrected": -1}


def _slant_general(q: _Sym, variant: str):
    a, b, A, B = q.a, q.b, q.A, q.B
    sign = SLANT_VARIANTS[variant]
    c, s2, F = q.cos, q.sin2, q.f
    etaB = q.sabs / a[0] * q.root
    P = a[2] - 2 * a[0] ** 3 - a[0] * b[0] ** 2
    Q = 2 * b[0] * a[1] + a[0] * b[1]
    return [
        ("S.1", a[0] * a[3] + 2 * a[2] * a[1] - 2 * a[0] ** 3 * a[1] - b[0] ** 2 * a[0] * a[1]
         - a[0] ** 2 * b[0] * b[1]),
        ("S.2", a[4] - 10 * a[0] ** 2 * a[2] - 6 * b[0] ** 2 * a[2] - 4 * a[0] * b[0] * b[2]
         - 15 * a[0] * a[1] ** 2 - 12 * b[0] * b[1] * a[1] - 3 * a[0] * b[1] ** 2
         + a[0] ** 5 + a[0] * b[0] ** 4 + 2 * a[0] ** 3 * b[0] ** 2
         + P * (A - B * (c ** 2 + F ** 2 / a[0] / a[0] * s2 ** 2))
         - (a[0] ** 2 * b[0] * c - Q * F / a[0] * s2) * B * etaB),
        ("S.3", 4 * b[0] * a[3] + 6 * a[2] * b[1] + 4 * a[1] * b[2] - 9 * a[0] ** 2 * b[0] * a[1]
         - 4 * b[0] ** 3 * a[1] - 6 * a[0] * b[0] ** 2 * b[1] - b[1] * a[0] ** 3 + a[0] * b[3]
         + Q * (A + sign * B * (c ** 2 + s2 / a[0] / a[0] * (a[0] ** 2 - F ** 2 * s2)))
         - (a[0] ** 2 * b[0] * c - P * etaB) * B * F / a[0] * s2),
    ]


def _slant_case_I(q: _Sym, variant: str):
    a, b, A, B = q.a, q.b, q.A, q.B
    c, s2, F = q.cos, q.sin2, q.f
    k1, k2 = a[0], b[0]
    etaB = q.sabs / k1 * q.root
    return [
        ("slant-helix.1", (k1 ** 2 + k2 ** 2) ** 2 - (2 * k1 ** 2 + k2 ** 2) * A
         + ((2 * k1 ** 2 + k2 ** 2) * (c ** 2 + F ** 2 / k1 / k1 * s2 ** 2)
            - k1 * k2 * c * etaB) * B),
        ("slant-helix.2", (k1 * k2 * c + (2 * k1 ** 2 + k2 ** 2) * etaB) * B * F / k1 * s2),
    ]


def _slant_case_II(q: _Sym, variant: str):
    a, A, B = q.a, q.A, q.B
    c, s2, F = q.cos, q.sin2, q.f
    k1 = a[0]
    return [
        ("slant-II.1", k1 ** 5 - 2 * k1 ** 3 * A
         + 2 * k1 ** 3 * B * (c ** 2 + F ** 2 / k1 / k1 * s2 ** 2)),
        ("slant-II.2", 2 * k1 ** 3 * q.sabs / k1 * q.root * B * F / k1 * s2),
    ]


def _legendre(q: _Sym, variant: str):
    a = q.a
    return [
        ("L.1", a[0] * a[3] + 2 * a[2] * a[1] - 2 * a[0] ** 3 * a[1]),
        ("L.2", a[4] - 10 * a[0] ** 2 * a[2] - 15 * a[0] * a[1] ** 2 + a[0] ** 5
         - (a[2] - 2 * a[0] ** 3) * (q.f * q.f + q.fp)),
        ("L.k1=f", a[0] - q.f),
    ]


_EVALUATORS: dict[CaseId, Callable] = {
    CaseId.CaseI: _case_I,
    CaseId.CaseI_Helix: _case_I_helix,
    CaseId.CaseII: _case_II,
    CaseId.SubcaseII1: _subcase_II1,
    CaseId.SubcaseII2: _subcase_II2,
    CaseId.CaseIII: _case_III,
    CaseId.CaseIV: _case_IV,
    CaseId.SubcaseIV1: _subcase_IV1,
    CaseId.SubcaseIV2: _subcase_IV2,
    CaseId.SlantGeneral: _slant_general,
    CaseId.SlantCaseI: _slant_case_I,
    CaseId.SlantCaseII: _slant_case_II,
    CaseId.Legendre: _legendre,
}

VARIANTS: dict[CaseId, tuple[str, ...]] = {
    CaseId.CaseIII: tuple(CASE_III_VARIANTS),
    CaseId.SlantGeneral: tuple(SLANT_VARIANTS),
}


def _one(pt):
    return 1.0


def _minus(pt):
    return -1.0


def _inv_k1(pt):
    return 1.0 / pt.k1[0]


def _inv_k1_cubed(pt):
    return 1.0 / pt.k1[0] ** 3


# residual name -> (index into (E1, E2, E3), factor) with residual = factor * E
RELATIONS: dict[str, tuple[int, Callable[[CurvePoint], float]]] = {
    "I.1": (0, _minus), "I.2": (1, _minus), "I.3": (2, _minus),
    "helix.1": (1, _inv_k1), "helix.2": (2, _inv_k1),
    "II.1": (1, _one), "II.2": (2, _one),
    "II-1.reduced": (1, _inv_k1_cubed),
    "II-2.reduced": (1, _one), "II-2.k1": (1, _inv_k1_cubed),
    "III.1": (0, _one), "III.2": (1, _one), "III.3": (2, _one),
    "IV.1": (0, _one), "IV.2": (1, _one), "IV.3": (2, _minus),
    "IV-1.1": (0, _one), "IV-1.2": (1, _one),
    "IV-2.1": (0, _one), "IV-2.2": (1, _one),
    "S.1": (0, _one), "S.2": (1, _one), "S.3": (2, _one),
    "slant-helix.1": (1, _inv_k1), "slant-helix.2": (2, lambda pt: -1.0 / pt.k1[0]),
    "slant-II.1": (1, _one), "slant-II.2": (2, _minus),
    "L.1": (0, _one), "L.2": (1, _one),
}


def case_residuals(case: CaseId, pt: CurvePoint, theta: float | None = None,
                   variant: str = "printed", check: bool = True) -> list[Residual]:
    """Evaluate the displayed equations of ``case`` at ``pt``.

    Slant cases take the contact angle from ``theta`` or, if omitted, from
    eta(T) = cos(theta).  ``variant`` selects between printed versions for
    cases listed in :data:`VARIANTS`.
    """
    case = CaseId(case)
    if variant != "printed" and variant not in VARIANTS.get(case, ()):
        raise ValueError(f"{case.value} has no variant {variant!r}")
    if check:
        th = check_hypothesis(case, pt, theta)
    else:
        th = theta if theta is not None else (slant_theta(pt) if case in SLANT_CASES else None)
    q = _Sym(pt, th)
    return [Residual.of(name, v) for name, v in _EVALUATORS[case](q, variant)]


def reduction_discrepancies(case: CaseId, pt: CurvePoint, theta: float | None = None,
                            variant: str = "printed") -> dict[str, float]:
    """Per-equation ``|case - factor * general| / (1 + scale)``."""
    res = case_residuals(case, pt, theta, variant)
    if case in SLANT_CASES:
        th = slant_theta(pt) if theta is None else theta
        p = pt.params
        eta = eta_from_model(Slant(th), p.f, pt.k1[0])
        pt = CurvePoint(pt.s, pt.k1, pt.k2, ManifoldParams(p.f_jet, p.r, *eta))
    E = residual_system(pt)
    out = {}
    for r in res:
        if r.name not in RELATIONS:
            continue
        idx, fac = RELATIONS[r.name]
        g = fac(pt)
        scale = max(r.scale, abs(g) * E[idx].scale)
        out[r.name] = abs(r.value - g * E[idx].value) / (1.0 + scale)
    return out


def _with_slant_eta(pt: CurvePoint, theta: float) -> CurvePoint:
    p = pt.params
    eta = eta_from_model(Slant(theta), p.f, pt.k1[0])
    return CurvePoint(pt.s, pt.k1, pt.k2, ManifoldParams(p.f_jet, p.r, *eta))


def slant_residuals(pt: CurvePoint, theta: float, variant: str = "printed") -> list[Residual]:
    """The slant system at contact angle ``theta``.

    Only k1, k2, f, f' and r are read from ``pt``; eta is substituted from
    theta.  Raises RadicandNegative when k1^2 < f^2 sin^2(theta).
    """
    pt = _with_slant_eta(pt, theta)
    return case_residuals(CaseId.SlantGeneral, pt, theta, variant, check=False)


def slant_crosscheck(pt: CurvePoint, theta: float, variant: str = "printed") -> dict[str, dict]:
    """Compare each slant equation with the general system at the slant eta."""
    pt = _with_slant_eta(pt, theta)
    E = residual_system(pt)
    out = {}
    for r, g in zip(slant_residuals(pt, theta, variant), E):
        scale = max(r.scale, g.scale)
        out[r.name] = {"slant": r.value, "general": g.value, "scale": scale,
                       "discrepancy": abs(r.value - g.value)}
    return out


# ---------------------------------------------------------------------------
# random points inside a case
# ---------------------------------------------------------------------------

def random_case_point(case: CaseId, rng: np.random.Generator,
                      theta: float | None = None) -> tuple[CurvePoint, float | None]:
    """A random point satisfying the hypotheses of ``case``."""
    k1 = rng.uniform(-2, 2, 5)
    k1[0] = rng.uniform(0.1, 3)
    k2 = rng.uniform(-2, 2, 5)
    f, fp, r = (float(x) for x in rng.uniform(-5, 5, 3))
    labels = {lab for lab, _ in HYPOTHESES[case]}
    if "k1 constant" in labels:
        k1[1:] = 0.0
    if "k2 = 0" in labels:
        k2[:] = 0.0
    if "k2 constant" in labels:
        k2[1:] = 0.0
        k2[0] = rng.choice([-1, 1]) * rng.uniform(0.2, 2)
    if "r/2 + 3(f^2 + f') = 0" in labels:
        r = -6 * (f * f + fp)
    eta = random_unit(rng)
    if "eta(B) = 0" in labels:
        phi = rng.uniform(0, 2 * math.pi)
        eta = np.array([math.cos(phi), math.sin(phi), 0.0])
    th = None
    if case in SLANT_CASES:
        th = float(rng.uniform(0.05, math.pi - 0.05)) if theta is None else theta
        sn = abs(math.sin(th))
        if sn > 0:
            f = float(rng.uniform(-1, 1) * k1[0] / sn)
        eta = np.array(eta_from_model(Slant(th), f, float(k1[0])))
    if case is CaseId.Legendre:
        eta = np.array([0.0, -1.0, 0.0])
    params = ManifoldParams(Jet((f, fp)), float(r), *map(float, eta))
    return CurvePoint(float(rng.uniform(0.5, 5)), Jet(tuple(k1)), Jet(tuple(k2)), params), th


def audit_variants(n: int = 300, seed: int = 0, tol: float = 1e-10) -> list[Finding]:
    """Check every displayed equation (and variant) against the general system.

    A variant is consistent when its worst discrepancy over ``n`` random
    admissible points is below ``tol``.
    """
    rng = np.random.default_rng(seed)
    findings = []
    for case in CaseId:
        variants = VARIANTS.get(case, ("printed",))
        worst = {v: {} for v in variants}
        for _ in range(n):
            pt, th = random_case_point(case, rng)
            for v in variants:
                for name, d in reduction_discrepancies(case, pt, th, v).items():
                    worst[v][name] = max(worst[v].get(name, 0.0), d)
        for v in variants:
            bad = {k: d for k, d in worst[v].items() if d > tol}
            ok = not bad
            subject = case.value if v == "printed" else f"{case.value}[{v}]"
            if ok:
                stmt = "displayed equations agree with the general system"
            else:
                stmt = "disagrees with the general system in " + ", ".join(sorted(bad))
            findings.append(Finding("reduction", subject, stmt, ok,
                                    {"max_discrepancy": worst[v], "samples": n,
                                     "tolerance": tol}))
    return findings


def typo_findings(n: int = 300, seed: int = 0, tol: float = 1e-10) -> list[Finding]:
    """Adjudicate the printed variants of the equations known to differ."""
    out = []
    by_subject = {f.subject: f for f in audit_variants(n, seed, tol)}
    for case, eq in ((CaseId.CaseIII, "III.3"), (CaseId.SlantGeneral, "S.3")):
        evid = {}
        good = []
        for v in VARIANTS[case]:
            subj = case.value if v == "printed" else f"{case.value}[{v}]"
            d = by_subject[subj].evidence["max_discrepancy"][eq]
            evid[v] = d
            if d <= tol:
                good.append(v)
        if case is CaseId.CaseIII:
            desc = ("third equation: 4 k2^3 k1' vs 4 k2^2 k1', each with '+' and with '-' "
                    "before B(eta(T)^2+eta(B)^2)")
        else:
            desc = ("third equation: '+' vs '-' before "
                    "B(cos^2 theta + sin^2 theta (k1^2 - f^2 sin^2 theta)/k1^2)")
        stmt = (f"{desc}; consistent variant(s): {', '.join(good) or 'none'}")
        out.append(Finding("typo", f"{case.value}:{eq}", stmt, len(good) == 1,
                           {"max_discrepancy": evid, "consistent_variants": good,
                            "samples": n, "tolerance": tol}))
    return out


# ---------------------------------------------------------------------------
# explicit solutions
# ---------------------------------------------------------------------------

def subcase_II1_f_expr(k1: float, c1: float) -> dsl.Expr:
    """f(s) = (k1/sqrt 2) tan((sqrt2 k1 c1 - sqrt2 k1 s) / 2) as an expression."""
    r2k = math.sqrt(2.0) * k1
    arg = dsl.Div(dsl.Sub(dsl.Mul(dsl.Const(r2k), dsl.Const(c1)),
                          dsl.Mul(dsl.Const(r2k), dsl.S)), dsl.Const(2.0))
    return dsl.Mul(dsl.Const(k1 / math.sqrt(2.0)), dsl.Func("tan", arg))


def subcase_II1_f(k1: float, c1: float, s: float) -> float:
    arg = (math.sqrt(2.0) * k1 * c1 - math.sqrt(2.0) * k1 * s) / 2
    c = math.cos(arg)
    if abs(c) <= POLE_GUARD:
        raise NearPole("subcase II-1 f", arg, f"|cos| = {abs(c):.3g} within pole guard")
    return k1 / math.sqrt(2.0) * math.tan(arg)


def subcase_II2_k1(params: ManifoldParams) -> float:
    """k1 = sqrt(2 (A - B (eta(T)^2 + eta(N)^2))) for eta(B) = 0."""
    if abs(params.etaB) > HYPOTHESIS_RTOL:
        raise HypothesisViolation(CaseId.SubcaseII2.value, "eta(B) = 0",
                                  f"eta(B) = {params.etaB!r}")
    rad = 2 * (coeff_A(params) - coeff_B(params) * (params.etaT ** 2 + params.etaN ** 2))
    if rad <= 0:
        raise RadicandNonpositive(rad)
    return math.sqrt(rad)


def first_integrals(k1: Jet, consts: FirstIntegralConstants) -> tuple[Residual, Residual]:
    """Residuals of 5 k1^2 k1'' - 2 k1^5 = c1 and 5 k1'^2 = k1^4 - 2 c1/k1 + c2."""
    if not k1[0] > 0:
        raise ValueError("k1 must be positive")
    a = [Scaled(k1[i]) for i in range(3)]
    c1, c2 = Scaled(consts.c1), Scaled(consts.c2)
    r1 = 5 * a[0] ** 2 * a[2] - 2 * a[0] ** 5 - c1
    r2 = 5 * a[1] ** 2 - a[0] ** 4 + 2 * c1 / a[0] - c2
    return Residual.of("first-integral.1", r1), Residual.of("first-integral.2", r2)


def first_integral_jet(k1: Jet, c1: float) -> Jet:
    """Jet of 5 k1^2 k1'' - 2 k1^5 - c1 (usable order two below k1's)."""
    k1pp = jet_shift(jet_shift(k1))
    return 5 * jet_mul(jet_mul(k1, k1), k1pp) - 2 * k1 ** 5 - Jet.constant(c1)


# ---------------------------------------------------------------------------
# Legendre nonexistence
# ---------------------------------------------------------------------------

SQRT5 = math.sqrt(5.0)


@dataclass
class LegendreRow:
    s: float
    k1: float
    f: float
    gap: float
    eq1_residual: Residual
    forced_f2_plus_fp: float
    expected_f2_plus_fp: float
    profile_f2_plus_fp: float
    first_integrals: tuple[Residual, Residual]
    direct_eq2_residual: Residual

    def as_dict(self) -> dict:
        return {
            "s": self.s, "k1": self.k1, "f": self.f, "gap": self.gap,
            "eq1_residual": self.eq1_residual.value, "eq1_scale": self.eq1_residual.scale,
            "forced_f2_plus_fp": self.forced_f2_plus_fp,
            "expected_f2_plus_fp": self.expected_f2_plus_fp,
            "profile_f2_plus_fp": self.profile_f2_plus_fp,
            "first_integral_residuals": [r.value for r in self.first_integrals],
            "eq2_residual_with_f_equal_k1": self.direct_eq2_residual.value,
            "eq2_scale_with_f_equal_k1": self.direct_eq2_residual.scale,
        }


@dataclass
class LegendreVerdict:
    verdict: str
    rows: list[LegendreRow]
    steps: dict[str, bool]
    c1: float
    c2: float

    def as_dict(self) -> dict:
        return {"verdict": self.verdict, "c1": self.c1, "c2": self.c2, "steps": self.steps,
                "rows": [r.as_dict() for r in self.rows]}


def _k1_profile_jet(s: float) -> Jet:
    return Jet(tuple(SQRT5 * c / s ** (k + 1) for k, c in enumerate((1, -1, 2, -6, 24))))


def legendre_check(c1: float = 0.0, c2: float = 0.0,
                   s_samples: Sequence[float] = (0.5, 1.0, 2.0, 5.0),
                   tol: float = 1e-10) -> LegendreVerdict:
    """Walk the nonexistence argument for Legendre curves sample by sample.

    (i) k1 = sqrt5/s solves the first Legendre equation (and, for
    c1 = c2 = 0, both first integrals); (ii) the second equation then
    forces f^2 + f' = 63/(4 s^2), met by f = 9/(2s); (iii) the Legendre
    constraint k1 = f fails by |sqrt5 - 9/2|/s.  The second equation is
    also evaluated directly with f = k1 for the record.
    """
    if any(not s > 0 for s in s_samples):
        raise ValueError("s samples must be positive")
    consts = FirstIntegralConstants(c1, c2)
    legendre_eta = (0.0, -1.0, 0.0)
    rows = []
    for s in s_samples:
        k1 = _k1_profile_jet(s)
        f_val, fp_val = 4.5 / s, -4.5 / s ** 2
        a = [k1[i] for i in range(5)]
        pt = CurvePoint(s, k1, Jet.constant(0.0),
                        ManifoldParams(Jet((f_val, fp_val)), 0.0, *legendre_eta))
        eq1 = case_residuals(CaseId.Legendre, pt)[0]
        num = a[4] - 10 * a[0] ** 2 * a[2] - 15 * a[0] * a[1] ** 2 + a[0] ** 5
        forced = num / (a[2] - 2 * a[0] ** 3)
        direct_pt = CurvePoint(s, k1, Jet.constant(0.0),
                               ManifoldParams(Jet((a[0], a[1])), 0.0, *legendre_eta))
        direct = case_residuals(CaseId.Legendre, direct_pt)[1]
        rows.append(LegendreRow(
            s=s, k1=a[0], f=f_val, gap=abs(a[0] - f_val), eq1_residual=eq1,
            forced_f2_plus_fp=forced, expected_f2_plus_fp=63 / (4 * s * s),
            profile_f2_plus_fp=f_val ** 2 + fp_val,
            first_integrals=first_integrals(k1, consts), direct_eq2_residual=direct))
    steps = {
        "k1_solves_first_equation": all(r.eq1_residual.passes(tol) for r in rows),
        "first_integrals_hold": all(x.passes(tol) for r in rows for x in r.first_integrals),
        "forced_f2_plus_fp_is_63_over_4s2": all(
            abs(r.forced_f2_plus_fp - r.expected_f2_plus_fp) <= tol * r.expected_f2_plus_fp
            for r in rows),
        "f_9_over_2s_meets_forced_value": all(
            abs(r.profile_f2_plus_fp - r.expected_f2_plus_fp) <= tol * r.expected_f2_plus_fp
            for r in rows),
        "legendre_constraint_fails": all(r.gap > 1e-6 * r.k1 for r in rows),
        "second_equation_fails_with_f_equal_k1": all(
            not r.direct_eq2_residual.passes(1e-6) for r in rows),
    }
    verdict = "nonexistence confirmed" if all(steps.values()) else "inconclusive"
    return LegendreVerdict(verdict, rows, steps, c1, c2)


# ---------------------------------------------------------------------------
# sign of the scalar curvature in the constant-curvature subcases
# ---------------------------------------------------------------------------

def adjudicate_r_sign(k1: float = 1.0, c1: float = 0.0,
                      s_samples: Sequence[float] = tuple(np.linspace(0.2, 1.6, 15)),
                      theta: float = math.pi / 6, tol: float = 1e-8) -> Finding:
    """Decide between r = 3 k1^2 and r = -3 k1^2 for k1 const, k2 = 0, B = 0.

    With f from the tan profile, f^2 + f' = -k1^2/2; the B = 0 hypothesis
    gives r = -6 (f^2 + f').  Both printed values of r are substituted and
    the Case II / slant Case II residuals evaluated.
    """
    f_expr = subcase_II1_f_expr(k1, c1)
    derived, res_plus, res_minus, b_minus = [], [], [], []
    for s in s_samples:
        fj = jet_from_expr(f_expr, s, POLE_GUARD)
        f, fp = fj[0], fj[1]
        derived.append(-6 * (f * f + fp))
        for r, bucket in ((3 * k1 ** 2, res_plus), (-3 * k1 ** 2, res_minus)):
            eta = eta_from_model(Slant(theta), f, k1)
            pt = CurvePoint(s, Jet.constant(k1), Jet.constant(0.0),
                            ManifoldParams(Jet((f, fp)), r, *eta))
            worst = 0.0
            for case in (CaseId.CaseII, CaseId.SlantCaseII):
                for x in case_residuals(case, pt, theta):
                    worst = max(worst, x.relative)
            bucket.append(worst)
            if r < 0:
                b_minus.append(coeff_B(pt.params))
    target = 3 * k1 ** 2
    derived_ok = all(abs(d - target) <= tol * target for d in derived)
    plus_ok = max(res_plus) <= tol
    minus_ok = max(res_minus) <= tol
    if plus_ok and not minus_ok and derived_ok:
        winner = "r = 3 k1^2"
    elif minus_ok and not plus_ok:
        winner = "r = -3 k1^2"
    else:
        winner = "undecided"
    stmt = (f"under r/2 + 3(f^2 + f') = 0 the scalar curvature is r = -6(f^2 + f') = "
            f"{target!r}; consistent printed value: {winner}")
    return Finding("sign", "scalar curvature in subcase II-1 vs slant case II", stmt,
                   winner == "r = 3 k1^2",
                   {"k1": k1, "c1": c1, "theta": theta, "s": list(map(float, s_samples)),
                    "r_derived": derived,
                    "max_relative_residual_r_plus_3k1sq": max(res_plus),
                    "max_relative_residual_r_minus_3k1sq": max(res_minus),
                    "B_with_r_minus_3k1sq": b_minus,
                    "consistent": winner})


# ---------------------------------------------------------------------------
# theorem verification on built-in data
# ---------------------------------------------------------------------------

DEFAULT_GRID = (0.5, 5.0, 100)
VERIFIABLE = (CaseId.SubcaseIV1, CaseId.SubcaseII1, CaseId.SubcaseII2, CaseId.CaseI_Helix,
              CaseId.SlantCaseII, CaseId.Legendre)


def verify_theorem(case: CaseId, tol: float = 1e-8, grid: tuple = DEFAULT_GRID):
    """Scan the built-in data of ``case`` and return a ResidualReport."""
    from .profile import BUILTIN_PROFILES
    from .report import ResidualReport
    from .solver import grid_points, grid_scan

    case = CaseId(case)
    if case is CaseId.Legendre:
        lo, hi, n = grid
        v = legendre_check(s_samples=grid_points(lo, hi, n))
        rows = [{"s": r.s, "residuals": {"gap": r.gap, "L.1": r.eq1_residual.value},
                 "scales": {"gap": r.k1, "L.1": r.eq1_residual.scale},
                 "verdict": "pass"} for r in v.rows]
        rep = ResidualReport(
            rows=rows, names=["gap", "L.1"],
            max_residuals={"gap": max(r.gap for r in v.rows),
                           "L.1": max(abs(r.eq1_residual.value) for r in v.rows)},
            max_relative={"gap": max(r.gap / r.k1 for r in v.rows),
                          "L.1": max(r.eq1_residual.relative for r in v.rows)},
            scales={"gap": max(r.k1 for r in v.rows),
                    "L.1": max(r.eq1_residual.scale for r in v.rows)},
            skipped=0, verdict=v.verdict, tol=tol,
            config={"theorem": case.value, "grid": list(grid)})
        rep.details = {"steps": v.steps, "gap_at_1": abs(SQRT5 - 4.5),
                       "samples": [r.as_dict() for r in v.rows]}
        return rep
    if case not in BUILTIN_PROFILES:
        raise KeyError(f"no built-in data for {case.value}")
    prof = BUILTIN_PROFILES[case]
    table = grid_scan(prof, grid[0], grid[1], grid[2], tol)
    findings = []
    if case in (CaseId.SubcaseII1, CaseId.SlantCaseII):
        findings.append(adjudicate_r_sign().as_dict())
    return ResidualReport.from_scan(table, {"theorem": case.value, "profile": prof.as_dict(),
                                            "grid": list(grid)}, findings=findings)
