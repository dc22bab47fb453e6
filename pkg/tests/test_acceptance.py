"""Acceptance checks. Each test prints one PASS/FAIL line (run with -s to see them)."""

from __future__ import annotations

import json
import math
import time

import numpy as np
import pytest

from helpers import CORPUS_S, FD_H, FD_H4, expression_corpus, fd_tolerance, random_jet
from trikurv import casebook as cb
from trikurv import dsl
from trikurv.casebook import CaseId
from trikurv.cli import main
from trikurv.errors import NearPole, RadicandNonpositive
from trikurv.frenet import nabla_power, nabla_power_hardcoded
from trikurv.jets import Jet, fd_jet, jet_from_expr
from trikurv.kenmotsu import ManifoldParams, Slant, eta_from_model
from trikurv.profile import BUILTIN_PROFILES
from trikurv.solver import Bounds, find_helix_roots, grid_scan
from trikurv.tension import CurvePoint, fold_components, random_curve_point, tau3_expanded, tau_k

GENERIC_ETA = (0.48, 0.6, 0.64)


def verdict(n: int, ok: bool, detail: str) -> None:
    print(f"\n[acceptance {n:2d}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, detail


def test_01_sqrt5_profile_reproduction():
    t0 = time.perf_counter()
    table = grid_scan(BUILTIN_PROFILES[CaseId.SubcaseIV1], 0.5, 5.0, 100)
    elapsed = time.perf_counter() - t0
    rel = table.max_relative()
    worst = max(rel[n] for n in ("tau3.T", "tau3.N", "tau3.B"))
    ok = len(table.evaluated) == 100 and worst <= 1e-8 and elapsed < 1.0
    verdict(1, ok, f"max relative tau3 residual {worst:.3e} over 100 samples in {elapsed:.3f} s")


def test_02_expansion_certification():
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(1000):
        pt = random_curve_point(rng)
        for x, y in zip(fold_components(tau3_expanded(pt), pt.params), tau_k(3, pt)):
            worst = max(worst, abs(x.value - y) / (1 + x.scale))
    findings = {f.subject: f for f in cb.typo_findings(300, seed=0)}
    iii = findings["case-iii:III.3"]
    consistent = iii.evidence["consistent_variants"]
    ok = worst <= 1e-10 and len(consistent) == 1
    verdict(2, ok, f"expansion worst {worst:.3e}; third-equation variant pair resolves to "
                   f"{consistent} (typo finding: {iii.statement})")


def test_03_frenet_chain_certification():
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(500):
        k1, k2 = random_jet(rng, True), random_jet(rng)
        for k in range(2, 6):
            x = nabla_power(k, k1, k2).values()
            y = nabla_power_hardcoded(k, k1, k2).values()
            scale = 1 + max(map(abs, x + y))
            worst = max(worst, max(abs(p - q) for p, q in zip(x, y)) / scale)
    verdict(3, worst <= 1e-10, f"recursion vs closed form, k = 2..5, 500 pairs: {worst:.3e}")


def test_04_first_integrals():
    e = dsl.parse("sqrt(5)/s")
    consts = cb.FirstIntegralConstants(0.0, 0.0)
    worst = 0.0
    for s in np.linspace(0.5, 5.0, 20):
        for r in cb.first_integrals(jet_from_expr(e, float(s)), consts):
            worst = max(worst, r.relative)
    verdict(4, worst <= 1e-10, f"first integrals along sqrt(5)/s at 20 samples: {worst:.3e}")


def test_05_riccati_potential():
    rng = np.random.default_rng(5)
    riccati = case_ii = 0.0
    done = 0
    while done < 50:
        k1, c1, s = (float(x) for x in (rng.uniform(0.2, 2), rng.uniform(-2, 2),
                                        rng.uniform(0.5, 5)))
        try:
            cb.subcase_II1_f(k1, c1, s)
        except NearPole:
            continue
        j = jet_from_expr(cb.subcase_II1_f_expr(k1, c1), s, 1e-3)
        g = j[0] ** 2 + j[1]
        riccati = max(riccati, abs(g + k1 ** 2 / 2))
        pt = CurvePoint(s, Jet.constant(k1), Jet.constant(0.0),
                        ManifoldParams(Jet((j[0], j[1])), -6 * g, *GENERIC_ETA))
        for r in cb.case_residuals(CaseId.CaseII, pt):
            case_ii = max(case_ii, abs(r.value) / r.scale if r.value else 0.0)
        done += 1
    ok = riccati <= 1e-9 and case_ii <= 1e-8
    verdict(5, ok, f"Riccati identity {riccati:.3e}; relative residual of the k2 = 0 system "
                   f"{case_ii:.3e} over 50 samples")


def test_06_constant_curvature_formula():
    rng = np.random.default_rng(6)
    worst = 0.0
    raised_ok = True
    n_ok = n_raised = 0
    while n_ok < 100:
        phi = rng.uniform(0, 2 * math.pi)
        eta = (math.cos(phi), math.sin(phi), 0.0)
        A, B = rng.uniform(-5, 5, 2)
        g = B - A
        p = ManifoldParams(Jet((0.0, g)), 2 * (A - 2 * g), *eta)
        rad = 2 * (p.A - p.B * (eta[0] ** 2 + eta[1] ** 2))
        try:
            k1 = cb.subcase_II2_k1(p)
        except RadicandNonpositive:
            raised_ok &= rad <= 0
            n_raised += 1
            continue
        raised_ok &= rad > 0
        pt = CurvePoint(0.0, Jet.constant(k1), Jet.constant(0.0), p)
        for r in cb.case_residuals(CaseId.CaseII, pt):
            worst = max(worst, abs(r.value) / r.scale if r.value else 0.0)
        n_ok += 1
    ok = worst <= 1e-10 and raised_ok
    verdict(6, ok, f"100 admissible draws, worst relative residual {worst:.3e}; "
                   f"{n_raised} nonpositive radicands raised")


def test_07_legendre_nonexistence(capsys):
    code = main(["verify", "legendre"])
    rep = json.loads(capsys.readouterr().out)
    gap = rep["details"]["gap_at_1"]
    ok = code == 0 and rep["verdict"] == "nonexistence confirmed" and abs(gap - 2.2639320) <= 1e-6
    verdict(7, ok, f"verdict {rep['verdict']!r}, gap at s = 1 is {gap:.7f}")


def test_08_helix_root():
    g = -1.0  # A = 1, B = 0
    p = ManifoldParams(Jet((0.0, g)), 2 * (1 - 2 * g), *GENERIC_ETA)
    roots = find_helix_roots(p, Bounds(0.1, 2, 0.1, 2))
    target = math.sqrt(3) / 2
    (root,) = roots
    pt = CurvePoint(0.0, Jet.constant(root.k1), Jet.constant(root.k2), p)
    reverify = max(abs(r.value) for r in cb.case_residuals(CaseId.CaseI_Helix, pt))
    ok = (abs(root.k1 - target) <= 1e-9 and abs(root.k2 - target) <= 1e-9
          and all(r.passes(1e-9) for r in cb.case_residuals(CaseId.CaseI_Helix, pt)))
    verdict(8, ok, f"root ({root.k1:.10f}, {root.k2:.10f}), helix residual {reverify:.3e}")


def test_09_slant_consistency():
    rng = np.random.default_rng(9)
    corrected = printed = 0.0
    for _ in range(100):
        k1, k2 = random_jet(rng, True), random_jet(rng)
        f, fp, r = (float(x) for x in rng.uniform(-5, 5, 3))
        for theta, fval in ((0.0, f), (math.pi / 2, 0.0)):
            pt = CurvePoint(1.0, k1, k2, ManifoldParams(Jet((fval, fp)), r, 1, 0, 0))
            for d in cb.slant_crosscheck(pt, theta, "sign-corrected").values():
                corrected = max(corrected, d["discrepancy"] / d["scale"] if d["discrepancy"] else 0)
            for d in cb.slant_crosscheck(pt, theta, "printed").values():
                printed = max(printed, d["discrepancy"] / d["scale"] if d["discrepancy"] else 0)
    unit = 0.0
    for _ in range(200):
        th = rng.uniform(0, math.pi)
        k1 = rng.uniform(0.1, 3)
        f = rng.uniform(-1, 1) * k1 / max(abs(math.sin(th)), 1e-12)
        unit = max(unit, abs(sum(x * x for x in eta_from_model(Slant(th), f, k1)) - 1))
    ok = corrected <= 1e-10 and unit <= 1e-12
    verdict(9, ok, f"sign-corrected slant system vs general {corrected:.3e}, unit norm "
                   f"{unit:.3e}; finding: printed third slant equation differs by {printed:.3g}")


def test_10_oracle_differentiation():
    worst = 0.0
    for e in expression_corpus():
        for s in CORPUS_S:
            exact = jet_from_expr(e, s)
            fd = fd_jet(lambda x: dsl.evaluate(e, x), s, FD_H)
            fd4 = fd_jet(lambda x: dsl.evaluate(e, x), s, FD_H4)
            for k in range(5):
                approx = fd[k] if k < 4 else fd4[4]
                worst = max(worst, abs(exact[k] - approx) / fd_tolerance(k, exact[k]))
    e1 = abs(fd_jet(lambda x: x ** 3, 2.0, 1e-2)[1] - 12)
    e2 = abs(fd_jet(lambda x: x ** 3, 2.0, 5e-3)[1] - 12)
    ratio = e1 / e2
    ok = worst <= 1.0 and 3 <= ratio <= 5
    verdict(10, ok, f"50-expression corpus, worst error/tolerance {worst:.3f}; "
                    f"h-halving ratio {ratio:.3f}")


def test_11_r_sign_adjudication():
    f = cb.adjudicate_r_sign()
    ev = f.evidence
    ok = (f.consistent and ev["consistent"] == "r = 3 k1^2"
          and ev["max_relative_residual_r_plus_3k1sq"] <= 1e-8
          and ev["max_relative_residual_r_minus_3k1sq"] > 1e-2)
    verdict(11, ok, f"{f.statement} (residual {ev['max_relative_residual_r_plus_3k1sq']:.3e} "
                    f"vs {ev['max_relative_residual_r_minus_3k1sq']:.3g})")
