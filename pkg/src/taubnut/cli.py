"""Command-line front end.

Each subcommand builds a :class:`RunConfig` (from ``--config`` JSON, then
inline flags on top), validates it, computes, and writes CSV or JSON to
``--out`` or stdout. Exit codes: 0 ok, 2 domain/validation error, 3 boundary
hit, 4 solver non-convergence, 64 usage error.
"""

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import BoundaryHitError, TaubNutError, ValidationError
from .hamiltonian import RadialState, SystemParams, effective_potential, eval_radial_hamiltonian
from .oracle import IntegratorConfig, integrate_radial
from .orbits import (
    flat_third_law_ratio,
    ratio_from_frequency,
    third_law_expansion_residual,
    third_law_ratio,
    trace_orbit,
)
from .regimes import classify, time_reversed_potential
from .sampling import random_bound_states
from .sga import bracket_relation_residuals, factorization_residual, level_set_residual, q_constants, verify_su11
from .trajectory import orbit_geometry, radial_state_of_time, solve_kepler

EXIT_USAGE = 64

COMMANDS = ("simulate", "trajectory", "orbit", "potential", "brackets-check", "third-law", "regime")

COLUMNS = {
    "simulate": ["t", "r", "p", "H", "H_drift", "Q_drift"],
    "trajectory": ["t", "r", "p", "psi", "H_residual"],
    "orbit": ["theta", "r", "x", "y"],
    "potential": ["r", "V_eff", "V_tilde"],
}


@dataclass
class RunConfig:
    params: SystemParams = field(default_factory=lambda: SystemParams(eta=0.1))
    energy: float = -1.0
    theta0: float = 0.0
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    output_path: str = None
    format: str = None
    t_final: float = None
    samples: int = None
    seed: int = 0
    r0: float = None
    p0: float = None
    alpha: float = None

    @classmethod
    def from_dict(cls, doc):
        doc = dict(doc)
        _reject_unknown(doc, cls.__dataclass_fields__, "config")
        if "params" in doc:
            _reject_unknown(doc["params"], SystemParams.__dataclass_fields__, "params")
            doc["params"] = SystemParams(**doc["params"])
        if "integrator" in doc:
            _reject_unknown(doc["integrator"], IntegratorConfig.__dataclass_fields__, "integrator")
            doc["integrator"] = IntegratorConfig(**doc["integrator"])
        cfg = cls(**doc)
        cfg.validate()
        return cfg

    def validate(self):
        if self.format not in (None, "csv", "json"):
            raise ValidationError(f"format must be csv or json, got {self.format!r}")
        for name in ("energy", "theta0"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"{name} must be finite")
        if self.t_final is not None and not self.t_final > 0:
            raise ValidationError("t_final must be positive")
        if self.samples is not None and self.samples < 1:
            raise ValidationError("samples must be positive")


def _reject_unknown(doc, allowed, where):
    if not isinstance(doc, dict):
        raise ValidationError(f"{where} must be a JSON object")
    unknown = sorted(set(doc) - set(allowed))
    if unknown:
        raise ValidationError(f"unknown keys in {where}: {', '.join(unknown)}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="taubnut", description="Deformed Kepler (Taub-NUT) analyses.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON RunConfig file")
        for flag in ("m", "k", "l", "eta", "energy", "theta0", "t-final", "r0", "p0", "alpha"):
            p.add_argument(f"--{flag}", type=float)
        p.add_argument("--samples", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--out")
        p.add_argument("--format", choices=["csv", "json"])
    return parser


def config_from_args(args):
    if args.config:
        try:
            with open(args.config) as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read config {args.config}: {exc}") from exc
        cfg = RunConfig.from_dict(doc)
    else:
        cfg = RunConfig()
    overrides = {name: getattr(args, name) for name in ("m", "k", "l", "eta") if getattr(args, name) is not None}
    if overrides:
        cfg.params = SystemParams(**{**asdict(cfg.params), **overrides})
    for name in ("energy", "theta0", "t_final", "r0", "p0", "alpha", "samples", "seed", "format"):
        v = getattr(args, name)
        if v is not None:
            setattr(cfg, name, v)
    if args.out is not None:
        cfg.output_path = args.out
    if cfg.alpha is not None:
        cfg.params = cfg.params.with_eta(-cfg.alpha * cfg.params.lambda_scale)
    cfg.validate()
    return cfg


def _fmt(x):
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def _json_value(x):
    if isinstance(x, (np.floating, np.integer)):
        x = x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return None
    if isinstance(x, dict):
        return {k: _json_value(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_value(v) for v in x]
    return x


def _render_table(columns, rows, fmt):
    if fmt == "json":
        return json.dumps(_json_value({"columns": columns, "rows": [list(r) for r in rows]}), indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _render_doc(doc):
    return json.dumps(_json_value(doc), indent=2, sort_keys=True) + "\n"


def cmd_simulate(cfg):
    params, E = cfg.params, cfg.energy
    if cfg.r0 is not None:
        if cfg.p0 is None:
            raise ValidationError("--r0 requires --p0")
        s0 = RadialState(cfg.r0, cfg.p0)
        t_final = cfg.t_final or 10.0
    else:
        g = orbit_geometry(E, params)
        s0 = RadialState(g.r_plus, 0.0)
        t_final = cfg.t_final or 3 * g.tau
    status = 0
    try:
        traj = integrate_radial(s0, params, t_final, cfg.integrator)
    except BoundaryHitError as exc:
        traj, status = exc.trajectory, exc.exit_code
        print(f"boundary reached at t = {exc.t_event!r}", file=sys.stderr)
    if cfg.samples:
        ts = np.linspace(0.0, traj.t_final, cfg.samples)
        states = [RadialState(*traj.sol(t)[:2]) for t in ts]
    else:
        ts = traj.t
        states = [s.state for s in traj.samples]
    h0 = eval_radial_hamiltonian(s0, params)
    q_ref = None
    rows = []
    for t, s in zip(ts, states):
        h = eval_radial_hamiltonian(s, params)
        q_drift = math.nan
        if h0 < 0:
            qp = q_constants(s, t, params)[0]
            q_ref = qp if q_ref is None else q_ref
            q_drift = abs(qp - q_ref)
        rows.append([t, s.r, s.p, h, h - h0, q_drift])
    return _render_table(COLUMNS["simulate"], rows, cfg.format or "csv"), status


def cmd_trajectory(cfg):
    params, E = cfg.params, cfg.energy
    g = orbit_geometry(E, params)
    n = cfg.samples or 200
    ts = np.linspace(0.0, cfg.t_final or g.tau, n)
    rows = []
    for t in ts:
        s = radial_state_of_time(t, E, cfg.theta0, params)
        psi = solve_kepler(t - (math.pi - cfg.theta0) / g.omega, E, params).psi
        rows.append([t, s.r, s.p, psi, eval_radial_hamiltonian(s, params) - E])
    return _render_table(COLUMNS["trajectory"], rows, cfg.format or "csv"), 0


def cmd_orbit(cfg):
    rows = trace_orbit(cfg.energy, cfg.theta0, cfg.samples or 360, cfg.params)
    return _render_table(COLUMNS["orbit"], rows.tolist(), cfg.format or "csv"), 0


def cmd_potential(cfg):
    params = cfg.params
    n = cfg.samples or 400
    w = -params.eta
    r_max = max(1.0, 4 * abs(params.eta), 8 * params.lambda_scale)
    rows = []
    for r in np.linspace(r_max / n, r_max, n):
        if abs(r + params.eta) <= 1e-9:
            continue
        v_tilde = time_reversed_potential(r, params) if params.eta < 0 and r < w else math.nan
        rows.append([r, effective_potential(r, params), v_tilde])
    return _render_table(COLUMNS["potential"], rows, cfg.format or "csv"), 0


def brackets_report(params, samples, seed):
    rng = np.random.default_rng(seed)
    states = random_bound_states(params, samples, rng)
    fac = lvl = 0.0
    brk = [0.0, 0.0, 0.0]
    su = [0.0, 0.0, 0.0]
    for s in states:
        fac = max(fac, factorization_residual(s, params))
        lvl = max(lvl, abs(level_set_residual(s, params)))
        brk = [max(a, b) for a, b in zip(brk, bracket_relation_residuals(s, params))]
        su = [max(a, b) for a, b in zip(su, verify_su11(s, params))]
    worst = max([fac, lvl] + brk + su)
    return {
        "seed": seed,
        "eta": params.eta,
        "samples": samples,
        "factorization": fac,
        "level_set": lvl,
        "H_Aplus": brk[0],
        "H_Aminus": brk[1],
        "Aplus_Aminus": brk[2],
        "su11_A0_Aplus": su[0],
        "su11_A0_Aminus": su[1],
        "su11_Aplus_Aminus": su[2],
        "max_residual": worst,
        "pass": worst <= 1e-10,
    }


def cmd_brackets_check(cfg):
    return _render_doc(brackets_report(cfg.params, cfg.samples or 100, cfg.seed)), 0


def cmd_third_law(cfg):
    E, params = cfg.energy, cfg.params
    doc = {
        "energy": E,
        "eta": params.eta,
        "ratio": third_law_ratio(E, params),
        "flat_ratio": flat_third_law_ratio(params),
        "ratio_from_frequency": ratio_from_frequency(E, params),
        "expansion_residual": third_law_expansion_residual(E, params),
    }
    return _render_doc(doc), 0


def cmd_regime(cfg):
    if cfg.r0 is None:
        raise ValidationError("regime needs --r0")
    report = classify(cfg.energy, cfg.r0, cfg.params)
    return _render_doc(report.to_dict()), 0


HANDLERS = {
    "simulate": cmd_simulate,
    "trajectory": cmd_trajectory,
    "orbit": cmd_orbit,
    "potential": cmd_potential,
    "brackets-check": cmd_brackets_check,
    "third-law": cmd_third_law,
    "regime": cmd_regime,
}


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        cfg = config_from_args(args)
        text, status = HANDLERS[args.command](cfg)
    except TaubNutError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if cfg.output_path:
        with open(cfg.output_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


def main():
    sys.exit(run())
