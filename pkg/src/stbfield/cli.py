"""Command line front end.

Subcommands: simulate, scenario, sampler-check, regions, bench. Exit codes:
0 ok, 2 config error, 3 invalid/non-simulatable model (the violated
inequality is printed), 4 numeric failure. A key=value config file, when
given, overrides command-line flags. The effective configuration is echoed
into output metadata in the same key=value form and reparses identically.
"""

import argparse
import csv
import sys
import time
from dataclasses import dataclass, fields, replace

import numpy as np

from . import engine, samplers, validate
from .models import (CorrelationModel, GHParams, KummerParams, MaternParams,
                     RegionClass, gh_classify_region)
from .samplers import RngStream


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    subcommand: str = ""
    model: str = ""
    nu: float = None
    mu: float = None
    alpha: float = None
    beta: float = None
    a: float = None
    l: str = "0.5"  # numeric literal or 'hyp' for l = d/2 + nu
    sill: float = 1.0
    dim: int = 2
    n: int = 1000
    L: int = engine.DEFAULT_L
    seed: int = 0
    replicates: int = 1
    domain: float = 1.0
    locations: str = None
    out: str = None
    outdir: str = "."
    format: str = "csv"
    preset: str = None
    scenarios: str = None
    desk_scale: bool = True
    draws: int = 20000
    nu_range: str = "0:3:31"
    mu_range: str = "0:10:101"

    def __post_init__(self):
        if self.L < 1:
            raise ConfigError("L must be >= 1")
        if self.replicates < 1:
            raise ConfigError("replicates must be >= 1")
        if self.format not in ("csv", "bin"):
            raise ConfigError("format must be csv or bin")


_BOOL_FIELDS = {"desk_scale"}
_INT_FIELDS = {"dim", "n", "L", "seed", "replicates", "draws"}
_FLOAT_FIELDS = {"nu", "mu", "alpha", "beta", "a", "sill", "domain"}


def _coerce(key, raw):
    if key in _BOOL_FIELDS:
        if raw.lower() in ("true", "1", "yes"):
            return True
        if raw.lower() in ("false", "0", "no"):
            return False
        raise ConfigError("boolean value expected for %s, got %r" % (key, raw))
    if key in _INT_FIELDS:
        try:
            return int(raw)
        except ValueError:
            raise ConfigError("integer expected for %s, got %r" % (key, raw))
    if key in _FLOAT_FIELDS:
        try:
            return float(raw)
        except ValueError:
            raise ConfigError("number expected for %s, got %r" % (key, raw))
    return raw


def parse_config_text(text):
    """key = value lines; '#' starts a comment; blank lines ignored."""
    out = {}
    names = {f.name for f in fields(RunConfig)}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("line %d: expected key = value" % lineno)
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in names:
            raise ConfigError("line %d: unknown key %r" % (lineno, key))
        out[key] = _coerce(key, raw)
    return out


def effective_config_lines(cfg):
    """The full effective configuration, one key = value per line."""
    lines = []
    for f in fields(RunConfig):
        v = getattr(cfg, f.name)
        if v is None:
            continue
        if isinstance(v, bool):
            v = "true" if v else "false"
        elif isinstance(v, float):
            v = repr(v)
        lines.append("%s = %s" % (f.name, v))
    return lines


def _merge_config(args):
    overrides = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                overrides = parse_config_text(fh.read())
        except OSError as exc:
            raise ConfigError("cannot read config file: %s" % exc)
    base = {f.name: getattr(args, f.name) for f in fields(RunConfig)
            if hasattr(args, f.name) and getattr(args, f.name) is not None}
    base.update(overrides)  # the config file wins over flags
    return RunConfig(**base)


def _resolve_l(cfg):
    if cfg.l == "hyp":
        if cfg.nu is None:
            raise ConfigError("l = hyp needs nu")
        return cfg.dim / 2.0 + cfg.nu
    try:
        return float(cfg.l)
    except ValueError:
        raise ConfigError("l must be a number or 'hyp', got %r" % cfg.l)


def _require(cfg, *names):
    for name in names:
        if getattr(cfg, name) is None:
            raise ConfigError("--%s is required for model %r"
                              % (name, cfg.model))


def make_model(cfg):
    if cfg.model == "matern":
        _require(cfg, "nu", "alpha")
        params = MaternParams(cfg.nu, cfg.alpha)
    elif cfg.model == "kummer":
        _require(cfg, "nu", "mu", "beta")
        params = KummerParams(cfg.nu, cfg.mu, cfg.beta)
    elif cfg.model in ("gh", "gw"):
        _require(cfg, "nu", "mu", "a")
        l = 0.5 if cfg.model == "gw" else _resolve_l(cfg)
        params = GHParams(cfg.nu, cfg.mu, l, cfg.a, cfg.dim)
    else:
        raise ConfigError("unknown model %r (matern, kummer, gh, gw)"
                          % cfg.model)
    return CorrelationModel(params=params, sill=cfg.sill)


def _load_locations(cfg):
    if cfg.locations:
        pts = np.loadtxt(cfg.locations, delimiter=",", comments="#",
                         skiprows=0, ndmin=2)
        if pts.shape[1] != cfg.dim:
            raise ConfigError("locations file has %d columns, dim is %d"
                              % (pts.shape[1], cfg.dim))
        return pts
    if cfg.n < 1:
        raise ConfigError("n must be >= 1")
    return cfg.domain * RngStream(cfg.seed, 1).gen.random((cfg.n, cfg.dim))


def cmd_simulate(cfg):
    model = make_model(cfg)
    locations = _load_locations(cfg)
    print("model: %s sill=%r dim=%d" % (model.kind, model.sill, cfg.dim))
    if isinstance(model.params, GHParams):
        print("region: %s" % gh_classify_region(model.params).value)
    sampler = engine.chosen_sampler(model)
    print("sampler: %s" % sampler)
    started = time.perf_counter()
    real = engine.simulate(model, cfg.dim, locations, L=cfg.L, seed=cfg.seed)
    elapsed = time.perf_counter() - started
    out = cfg.out or ("field.csv" if cfg.format == "csv" else "field.bin")
    config_lines = effective_config_lines(cfg)
    if cfg.format == "csv":
        engine.write_field_csv(real, out, comments=config_lines)
    else:
        engine.write_field_binary(real, out, config_lines=config_lines)
    print("wrote %s (%d values) in %.2f s" % (out, len(real.values), elapsed))
    return 0


_TABLE1 = [
    (1, 0.0, 6.0, 0.1), (2, 1.0, 7.0, 0.1),
    (3, 0.0, 6.0, 0.5), (4, 1.0, 7.0, 0.5),
]
_TABLE2 = [
    (5, 0.0, 2.0, 0.1), (6, 1.0, 3.0, 0.1),
    (7, 0.0, 2.0, 0.5), (8, 1.0, 3.0, 0.5),
]
_TABLE3 = [
    (9, 0.5, 0.101, 3.5), (10, 0.5, 0.013, 0.25),
    (11, 1.5, 0.059, 3.5), (12, 1.5, 0.032, 0.25),
    (13, 1.5, 0.293, 3.5), (14, 0.5, 0.064, 0.25),
]


def preset_models(name, dim=2, sill=1.0):
    """(label, CorrelationModel) rows for a scenario preset."""
    if name in ("table1", "table2"):
        rows = _TABLE1 if name == "table1" else _TABLE2
        return [("scenario-%02d" % sid,
                 CorrelationModel(GHParams(nu, mu, 0.5, a, dim), sill))
                for sid, nu, mu, a in rows]
    if name == "table3":
        return [("scenario-%02d" % sid,
                 CorrelationModel(KummerParams(nu, mu, beta), sill))
                for sid, nu, beta, mu in _TABLE3]
    raise ConfigError("unknown preset %r (table1, table2, table3)" % name)


def cmd_scenario(cfg):
    if cfg.preset:
        entries = preset_models(cfg.preset, dim=cfg.dim, sill=cfg.sill)
    else:
        entries = [("scenario", make_model(cfg))]
    if cfg.scenarios:
        wanted = {s.strip() for s in cfg.scenarios.split(",")}
        entries = [e for e in entries if e[0].split("-")[-1].lstrip("0")
                   in wanted or e[0] in wanted]
        if not entries:
            raise ConfigError("no preset rows match %r" % cfg.scenarios)
    if cfg.desk_scale:
        n, reps = 2000, 200
    else:
        n, reps = 5000, 1000
    if cfg.preset is None:
        n, reps = cfg.n, cfg.replicates
    failures = 0
    for label, model in entries:
        scfg = validate.ScenarioConfig(
            model=model, dim=cfg.dim, n=n, L=cfg.L, replicates=reps,
            seed=cfg.seed, domain=cfg.domain, label=label)
        report = validate.run_scenario(scfg)
        base = "%s/%s" % (cfg.outdir.rstrip("/"), label)
        validate.write_report_csv(report, base + ".csv")
        validate.write_report_summary(report, base + ".txt")
        for line in validate.summary_lines(report):
            print("[%s] %s" % (label, line))
        if report.chol_band_ok is False:
            failures += 1
    print("%d scenario(s), %d band failure(s)" % (len(entries), failures))
    return 0


def cmd_regions(cfg):
    lo1, hi1, n1 = _parse_range(cfg.nu_range, "nu-range")
    lo2, hi2, n2 = _parse_range(cfg.mu_range, "mu-range")
    out = cfg.out or "regions.csv"
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["nu", "mu", "l", "region"])
        for nu in np.linspace(lo1, hi1, n1):
            l = cfg.dim / 2.0 + nu if cfg.l == "hyp" else _resolve_l(
                replace(cfg, nu=float(nu)))
            for mu in np.linspace(lo2, hi2, n2):
                if mu <= 0.0 or nu <= -0.5:
                    region = RegionClass.INVALID
                else:
                    region = gh_classify_region(
                        GHParams(float(nu), float(mu), float(l), 1.0, cfg.dim))
                writer.writerow([repr(float(nu)), repr(float(mu)),
                                 repr(float(l)), region.value])
    print("wrote %s (%d x %d grid)" % (out, n1, n2))
    return 0


def _parse_range(raw, name):
    parts = raw.split(":")
    if len(parts) != 3:
        raise ConfigError("%s must be lo:hi:count" % name)
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError("%s must be lo:hi:count" % name)
    if count < 1 or hi < lo:
        raise ConfigError("%s is ill-formed" % name)
    return lo, hi, count


def cmd_sampler_check(cfg):
    model = make_model(cfg)
    p = model.params
    draws = int(cfg.draws)
    rng = RngStream(cfg.seed, 0)
    out = cfg.out or "sampler-check.csv"
    rows = []
    if isinstance(p, MaternParams):
        print("no rejection stage (closed-form scale mixture)")
        omega = samplers.sample_matern_freq(p, cfg.dim, rng, size=draws)
        radii = np.linalg.norm(omega, axis=1)
        ks = _ks_stat(radii, lambda r: samplers.matern_radius_cdf(
            p, cfg.dim, r))
        rows.append(["matern-mixture", "", "", "", "", "%.6f" % ks, draws])
    elif isinstance(p, KummerParams):
        print("no rejection stage (closed-form scale mixture)")
        omega = samplers.sample_kummer_freq(p, cfg.dim, rng, size=draws)
        radii = np.linalg.norm(omega, axis=1)
        if p.mu > cfg.dim / 2.0:
            ks = _ks_stat(radii, samplers.kummer_radius_cdf(p, cfg.dim))
            rows.append(["betaprime-mixture", "", "", "", "", "%.6f" % ks,
                         draws])
        else:
            print("spectral law not absolutely continuous (mu <= d/2); "
                  "radius KS skipped")
            rows.append(["betaprime-mixture", "", "", "", "", "", draws])
    else:
        region = gh_classify_region(p)
        print("region: %s" % region.value)
        stats = {}
        if region is RegionClass.VALID_BETA_MIXTURE:
            print("sampler: beta-mixture")
            omega = samplers.sample_gh_beta_freq(p, rng, size=draws,
                                                 stats=stats)
            env = samplers.build_universal_T_envelope(p.nu, p.dim)
            cdf = samplers.gh_beta_radius_cdf(p)
            label = "beta-mixture"
        else:
            print("sampler: gasper-mixture")
            table = samplers.build_gasper_weights(
                p, truncation_tol=1e-10, max_terms=2500,
                allow_truncation=True)
            omega = samplers.sample_gh_gasper_freq(p, table, rng, size=draws,
                                                   stats=stats)
            env = samplers._build_component_envelope(0, table.eta, p.dim)
            cdf = samplers.gh_gasper_radius_cdf(p, table)
            label = "gasper-mixture"
        acc = stats["accepts"] / stats["proposals"]
        radii = np.linalg.norm(omega, axis=1)
        ks = _ks_stat(radii, cdf)
        rows.append([label, "%.6f" % acc, repr(env.m1), repr(env.m2),
                     repr(env.t0), "%.6f" % ks, draws])
        print("acceptance = %.4f" % acc)
        print("t0 = %.6g" % env.t0)
        print("m1 = %.6g" % env.m1)
        print("m2 = %.6g" % env.m2)
        print("tail_exponent = %.6g" % env.tail_exponent)
        if label == "gasper-mixture":
            print("weight_terms = %d" % len(table.weights))
            print("truncation_mass = %.3g" % table.truncation_mass)
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["sampler", "acceptance", "m1", "m2", "t0",
                         "ks_stat", "draws"])
        writer.writerows(rows)
    print("wrote %s" % out)
    return 0


def _ks_stat(samples, cdf):
    x = np.sort(np.asarray(samples, dtype=float))
    f = np.asarray(cdf(x))
    n = len(x)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


def cmd_bench(cfg):
    model = make_model(cfg)
    out = cfg.out or "bench.csv"
    sizes = [max(cfg.n // 2, 1), cfg.n]
    comps = [max(cfg.L // 2, 1), cfg.L]
    rows = []
    for n in sizes:
        for L in comps:
            loc = cfg.domain * RngStream(cfg.seed, 1).gen.random((n, cfg.dim))
            started = time.perf_counter()
            engine.simulate(model, cfg.dim, loc, L=L, seed=cfg.seed)
            rows.append([n, L, "%.4f" % (time.perf_counter() - started)])
            print("n=%d L=%d: %s s" % (n, L, rows[-1][2]))
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "L", "seconds"])
        writer.writerows(rows)
    print("wrote %s" % out)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="stbfield",
        description="Spectral turning-bands simulation of Gaussian fields")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_model_flags(sp):
        sp.add_argument("--model", choices=["matern", "kummer", "gh", "gw"])
        sp.add_argument("--nu", type=float)
        sp.add_argument("--mu", type=float)
        sp.add_argument("--alpha", type=float)
        sp.add_argument("--beta", type=float)
        sp.add_argument("--a", type=float)
        sp.add_argument("--l", type=str, help="number, or 'hyp' for d/2 + nu")
        sp.add_argument("--sill", type=float)
        sp.add_argument("--dim", type=int)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--config", type=str,
                        help="key = value file overriding flags")

    sim = sub.add_parser("simulate", help="simulate one field realization")
    add_model_flags(sim)
    sim.add_argument("--n", type=int)
    sim.add_argument("--L", type=int)
    sim.add_argument("--domain", type=float)
    sim.add_argument("--locations", type=str)
    sim.add_argument("--out", type=str)
    sim.add_argument("--format", choices=["csv", "bin"])

    sce = sub.add_parser("scenario", help="replicated semivariogram study")
    add_model_flags(sce)
    sce.add_argument("--preset", type=str)
    sce.add_argument("--scenarios", type=str,
                     help="comma-separated preset row ids")
    sce.add_argument("--n", type=int)
    sce.add_argument("--L", type=int)
    sce.add_argument("--replicates", type=int)
    sce.add_argument("--domain", type=float)
    sce.add_argument("--outdir", type=str)
    group = sce.add_mutually_exclusive_group()
    group.add_argument("--desk-scale", dest="desk_scale",
                       action="store_true", default=None)
    group.add_argument("--full-scale", dest="desk_scale",
                       action="store_false", default=None)

    chk = sub.add_parser("sampler-check", help="sampler diagnostics")
    add_model_flags(chk)
    chk.add_argument("--draws", type=int)
    chk.add_argument("--out", type=str)

    reg = sub.add_parser("regions", help="classify the (nu, mu) plane")
    reg.add_argument("--nu-range", dest="nu_range", type=str)
    reg.add_argument("--mu-range", dest="mu_range", type=str)
    reg.add_argument("--l", type=str)
    reg.add_argument("--dim", type=int)
    reg.add_argument("--out", type=str)
    reg.add_argument("--config", type=str)

    ben = sub.add_parser("bench", help="wall-time scaling check")
    add_model_flags(ben)
    ben.add_argument("--n", type=int)
    ben.add_argument("--L", type=int)
    ben.add_argument("--domain", type=float)
    ben.add_argument("--out", type=str)
    return parser


_DISPATCH = {
    "simulate": cmd_simulate,
    "scenario": cmd_scenario,
    "sampler-check": cmd_sampler_check,
    "regions": cmd_regions,
    "bench": cmd_bench,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _merge_config(args)
        cfg = replace(cfg, subcommand=args.subcommand)
        return _DISPATCH[args.subcommand](cfg)
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2
    except ValueError as exc:
        print("invalid model: %s" % exc, file=sys.stderr)
        return 3
    except (ArithmeticError, RuntimeError, np.linalg.LinAlgError) as exc:
        print("numeric failure: %s" % exc, file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
