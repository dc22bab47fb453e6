"""Helix root finding and residual scans along a grid of arclength samples."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
from scipy.stats import qmc

from .casebook import PARENT, CaseId, HYPOTHESIS_RTOL, case_residuals
from .errors import DomainError, HypothesisViolation, NoConvergence, RadicandNegative
from .jets import Jet
from .kenmotsu import ManifoldParams, Slant, coeff_B, eta_from_model
from .profile import Profile
from .tension import CurvePoint, fold_components, tau3_expanded

MAX_ITER = 100
MAX_HALVINGS = 30
CONV_RTOL = 1e-11
DEDUP_DIST = 1e-6
VERIFY_TOL = 1e-9


@dataclass(frozen=True)
class SlantHelixModel:
    """Slant helix data: contact angle and the pointwise f, f', r."""

    theta: float
    f: float
    fp: float
    r: float


HelixModel = Union[ManifoldParams, SlantHelixModel]


@dataclass(frozen=True)
class RootResult:
    k1: float
    k2: float
    residual_norm: float
    iterations: int
    start: tuple[float, float]
    closure: str | None = None

    def as_dict(self) -> dict:
        return {"k1": self.k1, "k2": self.k2, "residual_norm": self.residual_norm,
                "iterations": self.iterations, "start": list(self.start),
                "closure": self.closure}


@dataclass(frozen=True)
class Bounds:
    k1lo: float
    k1hi: float
    k2lo: float
    k2hi: float

    def __post_init__(self):
        if not (0 < self.k1lo <= self.k1hi and self.k2lo <= self.k2hi):
            raise ValueError("bounds need 0 < k1lo <= k1hi and k2lo <= k2hi")

    @classmethod
    def parse(cls, text: str) -> Bounds:
        parts = [float(x) for x in text.split(",")]
        if len(parts) != 4:
            raise ValueError("bounds are k1lo,k1hi,k2lo,k2hi")
        return cls(*parts)

    @property
    def k2_pinned(self) -> bool:
        return self.k2lo == self.k2hi

    def contains(self, k1: float, k2: float, slack: float = 1e-9) -> bool:
        return (self.k1lo - slack <= k1 <= self.k1hi + slack
                and self.k2lo - slack <= k2 <= self.k2hi + slack)


class _System:
    """Residual map for the helix equations of one model."""

    def __init__(self, model: HelixModel, k2_fixed: float | None):
        self.model = model
        self.k2_fixed = k2_fixed
        self.slant = isinstance(model, SlantHelixModel)
        if self.slant:
            m = model
            B = m.r / 2 + 3 * (m.f ** 2 + m.fp)
            scale = max(abs(m.r) / 2, 3 * m.f ** 2, 3 * abs(m.fp))
            degenerate = (abs(B) <= HYPOTHESIS_RTOL * (1 + scale) or m.f == 0.0
                          or abs(math.sin(m.theta)) <= HYPOTHESIS_RTOL)
        else:
            p = model
            scale = max(abs(p.r) / 2, 3 * p.f ** 2, 3 * abs(p.fp))
            degenerate = (abs(coeff_B(p)) <= HYPOTHESIS_RTOL * (1 + scale)
                          or abs(p.etaN) <= HYPOTHESIS_RTOL)
        # with the second helix equation identically zero the system is
        # underdetermined; close it with k1 = k2
        self.closure = "k1=k2" if degenerate and k2_fixed is None else None
        if k2_fixed is None:
            self.case = CaseId.SlantCaseI if self.slant else CaseId.CaseI_Helix
        elif k2_fixed == 0.0:
            self.case = CaseId.SlantCaseII if self.slant else CaseId.CaseII
        else:
            self.case = CaseId.SlantCaseI if self.slant else CaseId.CaseI_Helix

    def unpack(self, x: np.ndarray) -> tuple[float, float]:
        if self.k2_fixed is None:
            return float(x[0]), float(x[1])
        return float(x[0]), self.k2_fixed

    def point(self, k1: float, k2: float) -> CurvePoint:
        if self.slant:
            m = self.model
            eta = eta_from_model(Slant(m.theta), m.f, k1)
            params = ManifoldParams(Jet((m.f, m.fp)), m.r, *eta)
        else:
            params = self.model
        return CurvePoint(0.0, Jet.constant(k1), Jet.constant(k2), params)

    def residuals(self, k1: float, k2: float, check: bool = False):
        theta = self.model.theta if self.slant else None
        return case_residuals(self.case, self.point(k1, k2), theta, check=check)

    def __call__(self, x: np.ndarray) -> tuple[np.ndarray, float] | None:
        k1, k2 = self.unpack(x)
        if not (k1 > 0 and math.isfinite(k1) and math.isfinite(k2)):
            return None
        try:
            res = self.residuals(k1, k2)
        except (RadicandNegative, ValueError):
            return None
        vals = [r.value for r in res]
        scale = max(r.scale for r in res)
        if self.closure:
            vals.append(k1 - k2)
        return np.array(vals), scale


def _jacobian(F: _System, x: np.ndarray, fx: np.ndarray) -> np.ndarray | None:
    J = np.empty((fx.size, x.size))
    for j in range(x.size):
        h = 1e-7 * max(1.0, abs(x[j]))
        xp = x.copy()
        xp[j] += h
        out = F(xp)
        if out is None:
            xp[j] = x[j] - h
            out = F(xp)
            if out is None:
                return None
            h = -h
        J[:, j] = (out[0] - fx) / h
    return J


def _polish(F: _System, x: np.ndarray, norm: float, scale: float, steps: int = 3):
    """A few undamped Newton steps past the tolerance, kept only if they help."""
    for _ in range(steps):
        out = F(x)
        J = _jacobian(F, x, out[0])
        if J is None or norm == 0.0:
            break
        trial_x = x + np.linalg.lstsq(J, -out[0], rcond=None)[0]
        trial = F(trial_x)
        if trial is None or not np.linalg.norm(trial[0]) < norm:
            break
        x, norm, scale = trial_x, float(np.linalg.norm(trial[0])), trial[1]
    return x, norm, scale


def _newton(F: _System, x0: np.ndarray) -> tuple[np.ndarray, float, float, int, str]:
    x = x0.astype(float)
    out = F(x)
    if out is None:
        return x, math.inf, 0.0, 0, "inadmissible start"
    fx, scale = out
    norm = float(np.linalg.norm(fx))
    for it in range(1, MAX_ITER + 1):
        if norm <= CONV_RTOL * (1.0 + scale):
            x, norm, scale = _polish(F, x, norm, scale)
            return x, norm, scale, it - 1, "converged"
        J = _jacobian(F, x, fx)
        if J is None:
            return x, norm, scale, it, "jacobian unavailable"
        dx = np.linalg.lstsq(J, -fx, rcond=None)[0]
        t = 1.0
        for _ in range(MAX_HALVINGS + 1):
            trial = F(x + t * dx)
            if trial is not None and np.linalg.norm(trial[0]) < norm:
                break
            t /= 2
        else:
            return x, norm, scale, it, "step halving exhausted"
        x = x + t * dx
        fx, scale = trial
        norm = float(np.linalg.norm(fx))
    if norm <= CONV_RTOL * (1.0 + scale):
        return x, norm, scale, MAX_ITER, "converged"
    return x, norm, scale, MAX_ITER, "iteration limit"


def halton_starts(bounds: Bounds, n: int) -> np.ndarray:
    dim = 1 if bounds.k2_pinned else 2
    u = qmc.Halton(d=dim, scramble=False).random(n)
    lo = np.array([bounds.k1lo, bounds.k2lo][:dim])
    hi = np.array([bounds.k1hi, bounds.k2hi][:dim])
    return lo + u * (hi - lo)


def find_helix_roots(model: HelixModel, bounds: Bounds, n_starts: int = 16,
                     starts: Sequence[Sequence[float]] | None = None) -> list[RootResult]:
    """Damped Newton from quasi-random starts; roots are re-verified and sorted.

    ``starts`` overrides the Halton sequence (used to check order independence).
    """
    if n_starts < 1:
        raise ValueError("n_starts must be at least 1")
    k2_fixed = bounds.k2lo if bounds.k2_pinned else None
    F = _System(model, k2_fixed)
    pts = np.asarray(starts, float) if starts is not None else halton_starts(bounds, n_starts)
    roots: list[RootResult] = []
    diagnostics = []
    for x0 in pts:
        x, norm, scale, its, status = _newton(F, np.array(x0, float))
        k1, k2 = F.unpack(x)
        start = (float(x0[0]), float(x0[1]) if x0.size > 1 else k2_fixed)
        diag = {"start": list(start), "end": [k1, k2], "residual_norm": norm,
                "iterations": its, "status": status}
        diagnostics.append(diag)
        if status != "converged":
            continue
        if not bounds.contains(k1, k2):
            diag["status"] = "converged outside bounds"
            continue
        try:
            ok = all(r.passes(VERIFY_TOL) for r in F.residuals(k1, k2, check=True))
        except (HypothesisViolation, RadicandNegative, ValueError) as exc:
            diag["status"] = f"re-verification failed: {exc}"
            continue
        if not ok:
            diag["status"] = "re-verification failed"
            continue
        if any(math.hypot(k1 - r.k1, k2 - r.k2) <= DEDUP_DIST for r in roots):
            continue
        roots.append(RootResult(k1, k2, norm, its, start, F.closure))
    if not roots:
        raise NoConvergence("no verified helix root in bounds", diagnostics)
    return sorted(roots, key=lambda r: (r.k1, r.k2))


# ---------------------------------------------------------------------------
# grid scans
# ---------------------------------------------------------------------------

@dataclass
class ScanRow:
    s: float
    residuals: dict[str, float] = field(default_factory=dict)
    scales: dict[str, float] = field(default_factory=dict)
    verdict: str = "pass"
    note: str = ""


@dataclass
class ScanTable:
    rows: list[ScanRow]
    names: list[str]
    tol: float

    @property
    def evaluated(self) -> list[ScanRow]:
        return [r for r in self.rows if r.verdict != "skipped"]

    @property
    def skipped(self) -> int:
        return sum(r.verdict == "skipped" for r in self.rows)

    def max_residuals(self) -> dict[str, float]:
        return {n: max((abs(r.residuals[n]) for r in self.evaluated if n in r.residuals),
                       default=0.0) for n in self.names}

    def max_scales(self) -> dict[str, float]:
        return {n: max((r.scales[n] for r in self.evaluated if n in r.scales), default=0.0)
                for n in self.names}

    def max_relative(self) -> dict[str, float]:
        out = {}
        for n in self.names:
            worst = 0.0
            for r in self.evaluated:
                if n not in r.residuals:
                    continue
                v, sc = abs(r.residuals[n]), r.scales[n]
                rel = 0.0 if v == 0.0 else (v / sc if sc > 0 else math.inf)
                worst = max(worst, rel)
            out[n] = worst
        return out

    @property
    def verdict(self) -> str:
        ev = self.evaluated
        return "pass" if ev and all(r.verdict == "pass" for r in ev) else "fail"


def grid_points(lo: float, hi: float, n: int) -> list[float]:
    """Uniform samples; nested grids (n, 2n-1) share their common points exactly."""
    return [lo + (i * (hi - lo)) / (n - 1) for i in range(n)]


def case_chain(case: CaseId) -> list[CaseId]:
    """``case`` followed by the cases it specializes."""
    out = [case]
    while out[-1] in PARENT:
        out.append(PARENT[out[-1]])
    return out


def evaluate_sample(profile: Profile, s: float, tol: float) -> ScanRow:
    row = ScanRow(s)
    try:
        pt = profile.point(s)
    except DomainError as exc:
        row.verdict, row.note = "skipped", f"{type(exc).__name__}: {exc}"
        return row
    except RadicandNegative as exc:
        row.verdict, row.note = "skipped", f"slant radicand: {exc}"
        return row
    folded = fold_components(tau3_expanded(pt), pt.params)
    named = list(zip(("tau3.T", "tau3.N", "tau3.B"), folded))
    for name, v in named:
        row.residuals[name], row.scales[name] = v.value, v.scale
    if profile.case is not None:
        try:
            for case in case_chain(profile.case):
                for r in case_residuals(case, pt, profile.theta):
                    row.residuals[r.name], row.scales[r.name] = r.value, r.scale
        except HypothesisViolation as exc:
            row.verdict, row.note = "fail", str(exc)
            return row
    ok = all(abs(v) <= tol * row.scales[n] for n, v in row.residuals.items())
    row.verdict = "pass" if ok else "fail"
    return row


def grid_scan(profile: Profile, s_lo: float, s_hi: float, n: int,
              tol: float = 1e-8) -> ScanTable:
    if not (0 < s_lo < s_hi):
        raise ValueError("grid needs 0 < s_lo < s_hi")
    if n < 2:
        raise ValueError("grid needs at least two samples")
    rows = [evaluate_sample(profile, s, tol) for s in grid_points(s_lo, s_hi, n)]
    if all(r.verdict == "skipped" for r in rows):
        raise DomainError("grid", s_lo, "every sample is inadmissible: " + rows[0].note)
    names: list[str] = []
    for r in rows:
        for name in r.residuals:
            if name not in names:
                names.append(name)
    return ScanTable(rows, names, tol)
