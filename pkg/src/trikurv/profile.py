"""Curve and manifold data given as expressions in the arclength s."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

from . import dsl
from .casebook import CaseId, subcase_II1_f_expr
from .errors import DomainError
from .jets import Jet, jet_from_expr
from .kenmotsu import EtaModel, Explicit, Legendre, ManifoldParams, Slant, eta_from_model
from .tension import CurvePoint

POLE_GUARD = 1e-3


@dataclass(frozen=True)
class Profile:
    k1: str
    k2: str
    f: str
    r: str
    eta: EtaModel
    case: CaseId | None = None

    @cached_property
    def exprs(self) -> tuple[dsl.Expr, dsl.Expr, dsl.Expr, dsl.Expr]:
        return tuple(dsl.parse(t) for t in (self.k1, self.k2, self.f, self.r))

    @property
    def theta(self) -> float | None:
        return self.eta.theta if isinstance(self.eta, Slant) else None

    def point(self, s: float) -> CurvePoint:
        """Curve point at ``s``.

        Raises NearPole/DomainError when an expression is not admissible,
        RadicandNegative for an inadmissible slant sample.
        """
        e1, e2, ef, er = self.exprs
        k1 = jet_from_expr(e1, s, POLE_GUARD)
        k2 = jet_from_expr(e2, s, POLE_GUARD)
        fj = jet_from_expr(ef, s, POLE_GUARD)
        r = dsl.evaluate(er, s, POLE_GUARD)
        if not k1[0] > 0:
            raise DomainError("k1", k1[0], "curvature must be positive")
        eta = eta_from_model(self.eta, fj[0], k1[0])
        return CurvePoint(s, k1, k2, ManifoldParams(Jet((fj[0], fj[1])), r, *eta))

    def as_dict(self) -> dict:
        return {"k1": self.k1, "k2": self.k2, "f": self.f, "r": self.r,
                "eta": eta_to_json(self.eta),
                "case": None if self.case is None else self.case.value}


def eta_to_json(m: EtaModel):
    if isinstance(m, Explicit):
        return {"explicit": [m.etaT, m.etaN, m.etaB]}
    if isinstance(m, Slant):
        return {"slant": m.theta}
    if isinstance(m, Legendre):
        return "legendre"
    raise TypeError(m)


GENERIC_ETA = Explicit(0.48, 0.6, 0.64)


def _riccati_f(k1: float, c1: float) -> str:
    return dsl.to_text(subcase_II1_f_expr(k1, c1))


BUILTIN_PROFILES: dict[CaseId, Profile] = {
    CaseId.SubcaseIV1: Profile("sqrt(5)/s", "0", "9/(2*s)", "-189/(2*s^2)", GENERIC_ETA,
                               CaseId.SubcaseIV1),
    CaseId.SubcaseII1: Profile("1", "0", _riccati_f(1.0, 0.0), "3", GENERIC_ETA,
                               CaseId.SubcaseII1),
    CaseId.SubcaseII2: Profile("2", "0", _riccati_f(2.0, 0.0), "1", Explicit(0.6, 0.8, 0.0),
                               CaseId.SubcaseII2),
    CaseId.CaseI_Helix: Profile("sqrt(3)/2", "sqrt(3)/2", _riccati_f(math.sqrt(2.0), 0.0), "6",
                                GENERIC_ETA, CaseId.CaseI_Helix),
    CaseId.SlantCaseII: Profile("1", "0", _riccati_f(1.0, 0.0), "3", Slant(math.pi / 6),
                                CaseId.SlantCaseII),
}
