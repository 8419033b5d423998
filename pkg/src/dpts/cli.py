"""Command-line driver: single-point analysis, sweeps, mu optimisation, simulation, oracle checks.

Configuration is a line-oriented ``section.key = value`` file (sections
``source``, ``encoding``, ``channel``, ``receiver``, ``run``); every key can
also be given as ``--section.key=value`` and flags win over the file.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import holevo, oracle
from .baselines import baseline_cow, baseline_dps
from .keyrate import secret_key_rate
from .optimize import OBJECTIVES, PROTOCOLS, optimize_mu
from .params import ParameterError, SystemParams, field_names, problems
from .simulator import compare_with_analytics, run_experiment

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_IO = 4
EXIT_ORACLE_MISMATCH = 5
EXIT_NO_SECURE_POINT = 6

ORACLE_TOL = 1e-9
DEFAULT_MU_GRID = tuple(round(0.05 * k, 2) for k in range(1, 11))
DEFAULT_T_GRID = (0.001, 0.01, 0.1, 0.5, 0.9)

SWEEP_VARIABLES = {"distance_km": "length_km", "visibility": "visibility", "mu": "mu"}
PROTOCOL_FIELDS = (
    "mu", "mu_optimized", "t", "r_click", "r_total", "prefactor_f",
    "e1", "e2", "e3", "e4", "i_ab", "chi0", "chi1", "chi",
    "rsk_bits_per_pulse", "rsk_bits_per_second", "secure",
)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    params: SystemParams = field(default_factory=SystemParams)
    sweep: str = "distance_km"
    sweep_from: float = 0.0
    sweep_to: float = 200.0
    steps: int = 41
    protocols: tuple[str, ...] = PROTOCOLS
    seed: int = 1
    n_subblocks: int = 100_000
    out: str | None = None
    optimize_mu: bool = False
    objective: str = "bits_per_second"
    mu_lo: float = 1e-3
    mu_hi: float = 1.0
    mu_dps: float | None = None
    mu_cow: float | None = None
    workers: int = 1

    def mu_for(self, protocol: str) -> float:
        own = {"dps": self.mu_dps, "cow": self.mu_cow}.get(protocol)
        return self.params.source.mu if own is None else own


# run.<key> -> (RunConfig field, parser)
def _parse_bool(text):
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_int(text):
    x = float(text)
    if not x.is_integer():
        raise ValueError(f"not an integer: {text!r}")
    return int(x)


def _parse_protocols(text):
    return tuple(p.strip().lower() for p in text.split(",") if p.strip())


def _parse_optional_float(text):
    return None if text.strip().lower() in ("", "none") else float(text)


_RUN_KEYS = {
    "sweep": ("sweep", str.strip),
    "from": ("sweep_from", float),
    "to": ("sweep_to", float),
    "steps": ("steps", _parse_int),
    "protocols": ("protocols", _parse_protocols),
    "seed": ("seed", _parse_int),
    "n_subblocks": ("n_subblocks", _parse_int),
    "out": ("out", str.strip),
    "optimize_mu": ("optimize_mu", _parse_bool),
    "objective": ("objective", str.strip),
    "mu_lo": ("mu_lo", float),
    "mu_hi": ("mu_hi", float),
    "mu_dps": ("mu_dps", _parse_optional_float),
    "mu_cow": ("mu_cow", _parse_optional_float),
    "workers": ("workers", _parse_int),
}
_PARAM_KEYS = set(field_names())
_INT_PARAMS = {"encoding.n_max"}


def config_keys() -> list[str]:
    return field_names() + [f"run.{k}" for k in _RUN_KEYS]


def _assignments(text: str, origin: str = "line"):
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{origin} {lineno}: expected 'section.key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in seen:
            raise ConfigError(f"{origin} {lineno}: duplicate key {key!r} (first set on {origin} {seen[key]})")
        seen[key] = lineno
        yield lineno, key, value


def parse_config(text: str = "", overrides=()) -> RunConfig:
    """Parse and validate a configuration.

    ``overrides`` is a sequence of ``(key, value)`` string pairs applied after
    the file.  Raises :class:`ConfigError` for syntax problems or unknown keys
    and :class:`ParameterError` listing every invalid value.
    """
    values: dict[str, tuple[str, str]] = {}
    for lineno, key, value in _assignments(text):
        values[key] = (value, f"line {lineno}")
    for key, value in overrides:
        values[key] = (value, f"flag --{key}")

    param_updates, run_updates = {}, {}
    for key, (value, where) in values.items():
        if key in _PARAM_KEYS:
            try:
                param_updates[key] = _parse_int(value) if key in _INT_PARAMS else float(value)
            except ValueError:
                raise ConfigError(f"{where}: {key} expects a number, got {value!r}") from None
        elif key.startswith("run.") and key[4:] in _RUN_KEYS:
            name, parse = _RUN_KEYS[key[4:]]
            try:
                run_updates[name] = parse(value)
            except ValueError as exc:
                raise ConfigError(f"{where}: {key}: {exc}") from None
        else:
            raise ConfigError(f"{where}: unknown key {key!r}")

    params = SystemParams().replace(**param_updates)
    cfg = RunConfig(params=params, **run_updates)
    errs = config_problems(cfg)
    if errs:
        raise ParameterError(errs)
    return cfg


def config_problems(cfg: RunConfig) -> list[str]:
    errs = list(problems(cfg.params))
    if cfg.sweep not in SWEEP_VARIABLES:
        errs.append(f"sweep must be one of {sorted(SWEEP_VARIABLES)}")
    elif not errs:
        for end in (cfg.sweep_from, cfg.sweep_to):
            errs += [f"sweep endpoint {end}: {e}" for e in problems(_at(cfg.params, cfg.sweep, end))]
    if not cfg.sweep_from < cfg.sweep_to:
        errs.append("run.from must be smaller than run.to")
    if cfg.steps < 2:
        errs.append("run.steps must be at least 2")
    if not cfg.protocols:
        errs.append("at least one protocol is required")
    errs += [f"unknown protocol {p!r}" for p in cfg.protocols if p not in PROTOCOLS]
    if len(set(cfg.protocols)) != len(cfg.protocols):
        errs.append("protocols must not repeat")
    if cfg.seed < 0:
        errs.append("run.seed must be non-negative")
    if cfg.n_subblocks < 2:
        errs.append("run.n_subblocks must be at least 2")
    if cfg.objective not in OBJECTIVES:
        errs.append(f"run.objective must be one of {OBJECTIVES}")
    if not 0 < cfg.mu_lo < cfg.mu_hi <= 2:
        errs.append("mu bounds must satisfy 0 < run.mu_lo < run.mu_hi <= 2")
    for name in ("mu_dps", "mu_cow"):
        v = getattr(cfg, name)
        if v is not None and not (math.isfinite(v) and v > 0):
            errs.append(f"run.{name} must be positive")
    if cfg.workers < 1:
        errs.append("run.workers must be at least 1")
    if cfg.sweep == "mu" and cfg.optimize_mu:
        errs.append("cannot optimise mu while sweeping it")
    return errs


def _at(params: SystemParams, sweep: str, value: float) -> SystemParams:
    return params.replace(**{SWEEP_VARIABLES[sweep]: value})


# ---------------------------------------------------------------- evaluation


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    if x is None:
        return ""
    return format(float(x) + 0.0, ".9g")  # no "-0"


def protocol_row(params: SystemParams, protocol: str, mu_optimized: bool = False) -> dict:
    """Flat record of one protocol at one operating point (``PROTOCOL_FIELDS``)."""
    if protocol == "dpts":
        r = secret_key_rate(params)
        b, e = r.breakdown, r.eve
        return dict(
            mu=params.source.mu, mu_optimized=mu_optimized, t=b.t, r_click=b.r_click,
            r_total=b.r_total, prefactor_f=b.prefactor_f,
            e1=b.err[0], e2=b.err[1], e3=b.err[2], e4=b.err[3],
            i_ab=b.i_ab, chi0=e.chi0, chi1=e.chi1, chi=e.chi,
            rsk_bits_per_pulse=r.rsk_bits_per_pulse,
            rsk_bits_per_second=r.rsk_bits_per_second, secure=r.secure,
        )
    rep = baseline_dps(params) if protocol == "dps" else baseline_cow(params)
    return dict(
        mu=rep.mu, mu_optimized=mu_optimized, t=rep.t, r_click=rep.click_prob,
        r_total=rep.click_total, prefactor_f=rep.prefactor,
        e1=rep.qber, e2=0.0, e3=0.0, e4=0.0,
        i_ab=rep.i_ab_bits, chi0=rep.chi_bits, chi1=0.0, chi=rep.chi_bits,
        rsk_bits_per_pulse=rep.secret_bits_per_pulse,
        rsk_bits_per_second=rep.secret_bits_per_second, secure=rep.secure,
    )


def evaluate_point(cfg: RunConfig, params: SystemParams, protocol: str) -> dict:
    if cfg.optimize_mu:
        opt = optimize_mu(params, protocol, (cfg.mu_lo, cfg.mu_hi), objective=cfg.objective)
        return protocol_row(params.replace(mu=opt.mu), protocol, mu_optimized=True)
    mu = params.source.mu if cfg.sweep == "mu" else cfg.mu_for(protocol)
    return protocol_row(params.replace(mu=mu), protocol)


def sweep_header(cfg: RunConfig) -> list[str]:
    return [cfg.sweep] + [f"{p}_{f}" for p in cfg.protocols for f in PROTOCOL_FIELDS]


def _sweep_point(args):
    cfg, value = args
    params = _at(cfg.params, cfg.sweep, value)
    row = [value]
    for p in cfg.protocols:
        rec = evaluate_point(cfg, params, p)
        row += [rec[f] for f in PROTOCOL_FIELDS]
    return row


def sweep_rows(cfg: RunConfig) -> list[list]:
    """One row per grid point, always in grid order."""
    grid = [float(v) for v in np.linspace(cfg.sweep_from, cfg.sweep_to, cfg.steps)]
    jobs = [(cfg, v) for v in grid]
    if cfg.workers == 1:
        return [_sweep_point(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(_sweep_point, jobs))


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def oracle_table(mu_grid=DEFAULT_MU_GRID, t_grid=DEFAULT_T_GRID, *, flip_sign=False, printed_bracket=False):
    """Closed form against brute-force Gram eigenvalues on a ``(mu, t)`` grid."""
    rows = []
    for mu in mu_grid:
        for t in t_grid:
            g = holevo.gamma(mu, t)
            brute = oracle.holevo_brute(mu, t)
            chi0 = holevo.holevo_primary(g, printed_sign=flip_sign)
            bracket = holevo.time_bit_holevo(g, printed=printed_bracket)
            rows.append(
                [mu, t, g, chi0, brute.chi0, abs(chi0 - brute.chi0),
                 bracket, brute.chi1_bracket, abs(bracket - brute.chi1_bracket)]
            )
    return rows


ORACLE_HEADER = [
    "mu", "t", "gamma", "chi0_closed", "chi0_numeric", "chi0_abs_diff",
    "bracket_closed", "bracket_numeric", "bracket_abs_diff",
]


# ---------------------------------------------------------------- commands


def _emit(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)


def cmd_analyze(cfg: RunConfig, args) -> int:
    params = cfg.params
    if cfg.optimize_mu:
        params = params.replace(mu=optimize_mu(params, "dpts", (cfg.mu_lo, cfg.mu_hi), objective=cfg.objective).mu)
    r = secret_key_rate(params)
    b, e = r.breakdown, r.eve
    rows = [
        ("mu", params.source.mu), ("t", b.t), ("r_click", b.r_click), ("r_total", b.r_total),
        ("prefactor_f", b.prefactor_f), ("e1", b.err[0]), ("e2", b.err[1]), ("e3", b.err[2]),
        ("e4", b.err[3]), ("h_a_given_b", b.h_a_given_b), ("i_ab", b.i_ab),
        ("gamma", e.gamma), ("p_eve", e.p_eve), ("chi0", e.chi0), ("chi1", e.chi1), ("chi", e.chi),
        ("rsk_per_measurement", r.rsk_per_measurement), ("rsk_bits_per_pulse", r.rsk_bits_per_pulse),
        ("rsk_bits_per_second", r.rsk_bits_per_second), ("secure", r.secure),
    ]
    _emit(_csv_text(["quantity", "value"], rows), cfg.out)
    return EXIT_OK


def cmd_sweep(cfg: RunConfig, args) -> int:
    rows = sweep_rows(cfg)
    _emit(_csv_text(sweep_header(cfg), rows), cfg.out)
    secure_cols = [i for i, h in enumerate(sweep_header(cfg)) if h.endswith("_secure")]
    if not any(row[i] for row in rows for i in secure_cols):
        print("warning: no grid point yields a secure key for any protocol", file=sys.stderr)
        return EXIT_NO_SECURE_POINT
    return EXIT_OK


def cmd_optimize_mu(cfg: RunConfig, args) -> int:
    rows = []
    for p in cfg.protocols:
        opt = optimize_mu(cfg.params, p, (cfg.mu_lo, cfg.mu_hi), objective=cfg.objective)
        rows.append([p, cfg.params.channel.length_km, opt.mu, cfg.objective,
                     opt.bits_per_pulse, opt.bits_per_second, opt.secure])
    header = ["protocol", "length_km", "mu_opt", "objective", "bits_per_pulse", "bits_per_second", "secure"]
    _emit(_csv_text(header, rows), cfg.out)
    return EXIT_OK


def cmd_compare(cfg: RunConfig, args) -> int:
    rows = []
    for p in cfg.protocols:
        rec = evaluate_point(dataclasses.replace(cfg, sweep="distance_km"), cfg.params, p)
        rows.append([p, "base4" if p == "dpts" else "bits"] + [rec[f] for f in PROTOCOL_FIELDS])
    _emit(_csv_text(["protocol", "info_unit", *PROTOCOL_FIELDS], rows), cfg.out)
    return EXIT_OK


def cmd_simulate(cfg: RunConfig, args) -> int:
    ex = run_experiment(cfg.params, cfg.seed, cfg.n_subblocks)
    s = ex.stats
    rows = [
        ["seed", cfg.seed, "", "", ""],
        ["n_subblocks", len(ex.train), "", "", ""],
        ["measurements_attempted", s.measurements_attempted, "", "", ""],
        ["clicks", s.clicks, "", "", ""],
        ["dark_clicks", s.dark_clicks, "", "", ""],
        ["dead_time_removed", s.dead_time_removed, "", "", ""],
        ["decoy_clicks", s.decoy_clicks, "", "", ""],
        ["discarded_boundary", s.discarded_boundary, "", "", ""],
        ["sifted_length", s.sifted_length, "", "", ""],
        ["sift_fraction", s.sift_fraction, "", "", ""],
        ["secret_rate_estimate", s.secret_rate_estimate, secret_key_rate(cfg.params).rsk_per_measurement, "", ""],
        ["elapsed_time_s", s.elapsed_time_s, "", "", ""],
    ]
    if s.visibility is None:
        rows.append(["visibility", "", cfg.params.receiver.visibility, "", ""])
    for c in compare_with_analytics(s, cfg.params):
        rows.append([c.quantity, c.empirical, c.analytic, c.sigma, c.sigma_distance])
    _emit(_csv_text(["quantity", "value", "analytic", "sigma", "sigma_distance"], rows), cfg.out)
    worst = max((c.sigma_distance for c in compare_with_analytics(s, cfg.params)), default=0.0)
    print(
        f"simulated {s.measurements_attempted} windows: {s.clicks} clicks, "
        f"{s.sifted_length} sifted symbols, max sigma distance {worst:.2f}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_oracle_check(cfg: RunConfig, args) -> int:
    rows = oracle_table(
        args.mu_grid or DEFAULT_MU_GRID,
        args.t_grid or DEFAULT_T_GRID,
        flip_sign=args.flip_sign,
        printed_bracket=args.printed_bracket,
    )
    _emit(_csv_text(ORACLE_HEADER, rows), cfg.out)
    d0 = max(r[5] for r in rows)
    d1 = max(r[8] for r in rows)
    print(f"max |chi0 closed - numeric| = {d0:.3e}; max |bracket closed - numeric| = {d1:.3e}", file=sys.stderr)
    return EXIT_OK if max(d0, d1) <= ORACLE_TOL else EXIT_ORACLE_MISMATCH


COMMANDS = {
    "analyze": (cmd_analyze, "closed-form DPTS rate breakdown at one operating point"),
    "sweep": (cmd_sweep, "key rates over a distance / visibility / mu grid"),
    "optimize-mu": (cmd_optimize_mu, "optimal mean photon number per protocol"),
    "simulate": (cmd_simulate, "Monte-Carlo run with analytic comparison"),
    "oracle-check": (cmd_oracle_check, "closed-form Holevo bounds against Gram-matrix numerics"),
    "compare": (cmd_compare, "DPTS, DPS and COW side by side at one operating point"),
}


def _epilog() -> str:
    cols = ", ".join(PROTOCOL_FIELDS)
    keys = "\n  ".join(config_keys())
    return (
        "sweep CSV columns: <sweep variable>, then for each protocol in --protocols order\n"
        f"  <protocol>_<field> for field in: {cols}\n"
        "  DPTS information columns are base-4 (1 = 2 bits); DPS/COW columns are bits.\n"
        "  For DPS/COW e1 is the QBER, chi0 = chi, and e2..e4, chi1 are 0.\n\n"
        "config keys (file lines 'key = value' or flags --key=value):\n  " + keys + "\n\n"
        f"exit status: {EXIT_OK} ok, {EXIT_PARSE} parse error, {EXIT_VALIDATION} invalid values, "
        f"{EXIT_IO} I/O error, {EXIT_ORACLE_MISMATCH} oracle mismatch, "
        f"{EXIT_NO_SECURE_POINT} sweep without any secure point"
    )


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def _float_list(text):
    return tuple(float(x) for x in text.split(",") if x.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="dpts",
        description=__doc__.splitlines()[0],
        epilog=_epilog(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text, epilog=_epilog(),
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        p.add_argument("--config", help="configuration file")
        p.add_argument("--seed", help="master RNG seed (run.seed)")
        p.add_argument("--out", help="output CSV path, '-' for stdout (run.out)")
        p.add_argument("--protocols", help="comma list of dpts, dps, cow (run.protocols)")
        p.add_argument("--optimize-mu", action="store_true", default=None,
                       help="optimise mu per point and protocol (run.optimize_mu)")
        p.add_argument("--workers", help="parallel worker processes for sweeps (run.workers)")
        if name == "oracle-check":
            p.add_argument("--mu-grid", type=_float_list, help="comma list of mu values")
            p.add_argument("--t-grid", type=_float_list, help="comma list of transmittances")
            p.add_argument("--flip-sign", action="store_true",
                           help="add instead of subtract the conditioned-entropy term in chi0")
            p.add_argument("--printed-bracket", action="store_true",
                           help="use the all-overlaps-gamma^2 spectrum for the time-bit bracket")
    return parser


def _split_overrides(extra: list[str]) -> list[tuple[str, str]]:
    out, i = [], 0
    while i < len(extra):
        tok = extra[i]
        if not tok.startswith("--") or "." not in tok.split("=", 1)[0]:
            raise ConfigError(f"unrecognised argument {tok!r}")
        if "=" in tok:
            key, value = tok[2:].split("=", 1)
        else:
            if i + 1 >= len(extra):
                raise ConfigError(f"missing value for {tok}")
            key, value = tok[2:], extra[i + 1]
            i += 1
        out.append((key, value))
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    try:
        overrides = _split_overrides(extra)
        flag_map = {"seed": "run.seed", "out": "run.out", "protocols": "run.protocols", "workers": "run.workers"}
        for attr, key in flag_map.items():
            if getattr(args, attr) is not None:
                overrides.append((key, getattr(args, attr)))
        if args.optimize_mu:
            overrides.append(("run.optimize_mu", "true"))
        text = ""
        if args.config:
            try:
                with open(args.config, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                print(f"dpts: cannot read config: {exc}", file=sys.stderr)
                return EXIT_IO
        cfg = parse_config(text, overrides)
    except ConfigError as exc:
        print(f"dpts: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ParameterError as exc:
        for e in exc.errors:
            print(f"dpts: invalid: {e}", file=sys.stderr)
        return EXIT_VALIDATION

    command = COMMANDS[args.command][0]
    try:
        return command(cfg, args)
    except OSError as exc:
        print(f"dpts: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
