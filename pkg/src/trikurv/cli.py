"""Command-line front end.

Exit codes: 0 pass, 1 fail (or no root), 2 configuration/parse error,
3 domain error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

from . import __version__, dsl
from .casebook import (VERIFIABLE, CaseId, adjudicate_r_sign, audit_variants, typo_findings,
                       verify_theorem)
from .errors import DomainError, NoConvergence, ParseError
from .jets import Jet, jet_from_expr
from .kenmotsu import EtaModel, Explicit, Legendre, ManifoldParams, Slant
from .profile import POLE_GUARD, Profile, eta_to_json
from .report import ResidualReport
from .solver import Bounds, SlantHelixModel, find_helix_roots, grid_scan

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_DOMAIN = 0, 1, 2, 3
DEFAULT_TOL = 1e-8
DEFAULT_GRID = {"lo": 0.5, "hi": 5.0, "n": 100}
ETA_UNIT_TOL = 1e-6
CONFIG_FIELDS = {"k1", "k2", "f", "r", "eta", "case", "grid", "tol"}


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    k1: str | None
    k2: str
    f: str
    r: str
    eta: EtaModel
    case: CaseId | None
    grid: dict
    tol: float | None

    def profile(self) -> Profile:
        if self.k1 is None:
            raise ConfigError("field 'k1' is required")
        return Profile(self.k1, self.k2, self.f, self.r, self.eta, self.case)

    def echo(self) -> dict:
        return {"k1": self.k1, "k2": self.k2, "f": self.f, "r": self.r,
                "eta": eta_to_json(self.eta),
                "case": None if self.case is None else self.case.value,
                "grid": self.grid, "tol": self.tol}


def _expr_field(raw: dict, key: str, default=None, required=True) -> str | None:
    if key not in raw:
        if required and default is None:
            raise ConfigError(f"field {key!r} is required")
        return default
    v = raw[key]
    if isinstance(v, bool) or not isinstance(v, (str, int, float)):
        raise ConfigError(f"field {key!r} must be an expression string or a number")
    text = v if isinstance(v, str) else repr(float(v))
    try:
        dsl.parse(text)
    except ParseError as exc:
        raise ConfigError(f"field {key!r}: {exc}") from None
    return text


def _eta_field(v) -> EtaModel:
    if v == "legendre":
        return Legendre()
    if isinstance(v, dict) and len(v) == 1:
        (kind, val), = v.items()
        if kind == "explicit":
            if not (isinstance(val, list) and len(val) == 3
                    and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in val)):
                raise ConfigError("eta.explicit must be a list of three numbers")
            n = math.sqrt(sum(float(x) ** 2 for x in val))
            if abs(n - 1.0) > ETA_UNIT_TOL:
                raise ConfigError(f"eta not unit (|eta| = {n!r})")
            return Explicit(*(float(x) / n for x in val))
        if kind == "slant":
            if isinstance(val, bool) or not isinstance(val, (int, float)) or not math.isfinite(val):
                raise ConfigError("eta.slant must be an angle in radians")
            return Slant(float(val))
    raise ConfigError("eta must be {\"explicit\": [eT, eN, eB]}, {\"slant\": theta} or \"legendre\"")


def _grid_field(v) -> dict:
    if v is None:
        return dict(DEFAULT_GRID)
    if not isinstance(v, dict) or set(v) != {"lo", "hi", "n"}:
        raise ConfigError("grid must be {\"lo\": .., \"hi\": .., \"n\": ..}")
    lo, hi, n = v["lo"], v["hi"], v["n"]
    if not (isinstance(n, int) and not isinstance(n, bool) and n >= 2):
        raise ConfigError("grid.n must be an integer >= 2")
    if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in (lo, hi)):
        raise ConfigError("grid bounds must be numbers")
    if not (0 < lo < hi):
        raise ConfigError("grid bounds must satisfy 0 < lo < hi")
    return {"lo": float(lo), "hi": float(hi), "n": n}


def parse_config(raw) -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(raw) - CONFIG_FIELDS)
    if unknown:
        raise ConfigError(f"unknown field(s): {', '.join(unknown)}")
    case = None
    if raw.get("case") is not None:
        try:
            case = CaseId.lookup(str(raw["case"]))
        except KeyError as exc:
            raise ConfigError(str(exc)) from None
    if "eta" not in raw:
        raise ConfigError("field 'eta' is required")
    tol = raw.get("tol")
    if tol is not None and (isinstance(tol, bool) or not isinstance(tol, (int, float))
                            or not tol > 0):
        raise ConfigError("tol must be a positive number")
    return RunConfig(
        k1=_expr_field(raw, "k1", required=False),
        k2=_expr_field(raw, "k2", default="0"),
        f=_expr_field(raw, "f"),
        r=_expr_field(raw, "r"),
        eta=_eta_field(raw["eta"]),
        case=case,
        grid=_grid_field(raw.get("grid")),
        tol=None if tol is None else float(tol),
    )


def load_config(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    return parse_config(raw)


def resolve_tol(flag: float | None, config: RunConfig | None = None) -> float:
    """--tol, then the config's tol, then TRIKURV_TOL, then the default."""
    if flag is not None:
        if not flag > 0:
            raise ConfigError("--tol must be positive")
        return flag
    if config is not None and config.tol is not None:
        return config.tol
    env = os.environ.get("TRIKURV_TOL")
    if env is not None:
        try:
            val = float(env)
        except ValueError:
            raise ConfigError(f"TRIKURV_TOL is not a number: {env!r}") from None
        if not (val > 0 and math.isfinite(val)):
            raise ConfigError("TRIKURV_TOL must be positive")
        return val
    return DEFAULT_TOL


def _emit(report: ResidualReport, csv_path: str | None) -> int:
    sys.stdout.write(report.to_json())
    if csv_path:
        with open(csv_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(report.to_csv())
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_residual(args) -> int:
    cfg = load_config(args.config)
    tol = resolve_tol(args.tol, cfg)
    g = cfg.grid
    table = grid_scan(cfg.profile(), g["lo"], g["hi"], g["n"], tol)
    return _emit(ResidualReport.from_scan(table, cfg.echo()), args.csv)


def cmd_verify(args) -> int:
    tol = resolve_tol(args.tol)
    return _emit(verify_theorem(CaseId.lookup(args.theorem), tol), args.csv)


def helix_model(cfg: RunConfig, s: float):
    fj = jet_from_expr(dsl.parse(cfg.f), s, POLE_GUARD)
    r = dsl.evaluate(dsl.parse(cfg.r), s, POLE_GUARD)
    if isinstance(cfg.eta, Slant):
        return SlantHelixModel(cfg.eta.theta, fj[0], fj[1], r)
    if isinstance(cfg.eta, Legendre):
        raise ConfigError("Legendre curves have no helix system to solve")
    e = cfg.eta
    return ManifoldParams(Jet((fj[0], fj[1])), r, e.etaT, e.etaN, e.etaB)


def cmd_solve_helix(args) -> int:
    cfg = load_config(args.config)
    try:
        bounds = Bounds.parse(args.bounds)
    except ValueError as exc:
        raise ConfigError(f"--bounds: {exc}") from None
    if args.starts < 1:
        raise ConfigError("--starts must be at least 1")
    model = helix_model(cfg, args.at)
    try:
        roots = find_helix_roots(model, bounds, args.starts)
    except NoConvergence as exc:
        sys.stdout.write("[]\n")
        sys.stderr.write(json.dumps({"error": str(exc), "diagnostics": exc.diagnostics},
                                    indent=2) + "\n")
        return EXIT_FAIL
    sys.stdout.write(json.dumps([r.as_dict() for r in roots], indent=2) + "\n")
    return EXIT_PASS


def cmd_parse_check(args) -> int:
    e = dsl.parse(args.expr)
    jet = jet_from_expr(e, args.at)
    print(f"text:  {dsl.to_text(e)}")
    print(f"tree:  {e!r}")
    for k, d in enumerate(dsl.derivatives(e, 4)[1:], start=1):
        print(f"d{k}:    {dsl.to_text(d)}")
    print(f"jet at s={args.at!r}: ({', '.join(repr(x) for x in jet.usable())})")
    return EXIT_PASS


def cmd_audit(args) -> int:
    findings = typo_findings(args.samples, args.seed) + [adjudicate_r_sign()]
    reductions = audit_variants(args.samples, args.seed)
    out = {"version": __version__, "seed": args.seed, "samples": args.samples,
           "findings": [f.as_dict() for f in findings],
           "reductions": [f.as_dict() for f in reductions]}
    sys.stdout.write(json.dumps(out, indent=2) + "\n")
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="trikurv", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"trikurv {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("residual", help="scan a configured curve and report residuals")
    p.add_argument("--config", required=True)
    p.add_argument("--csv")
    p.add_argument("--tol", type=float)
    p.set_defaults(func=cmd_residual)

    p = sub.add_parser("verify", help="verify a theorem on its built-in data")
    p.add_argument("theorem", choices=[c.value for c in VERIFIABLE])
    p.add_argument("--csv")
    p.add_argument("--tol", type=float)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve-helix", help="find (k1, k2) solving the helix system")
    p.add_argument("--config", required=True)
    p.add_argument("--bounds", required=True, help="k1lo,k1hi,k2lo,k2hi")
    p.add_argument("--starts", type=int, default=16)
    p.add_argument("--at", type=float, default=1.0, help="arclength where f and r are read")
    p.set_defaults(func=cmd_solve_helix)

    p = sub.add_parser("parse-check", help="parse an expression and print its jet")
    p.add_argument("expr")
    p.add_argument("--at", type=float, default=1.0)
    p.set_defaults(func=cmd_parse_check)

    p = sub.add_parser("audit", help="check printed formula variants against the general system")
    p.add_argument("--samples", type=int, default=300)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_audit)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_PASS
    try:
        return args.func(args)
    except (ConfigError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
