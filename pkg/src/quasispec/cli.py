"""Command-line front end emitting deterministic CSV/JSON plot data.

Every subcommand is a thin adapter over one library operation family. Output
floats are fixed at 12 significant digits so repeated runs (and golden-file
tests) are byte-identical; ordering never depends on the thread count. An
optional config file holds ``key = value`` lines; command-line flags override
file entries. Exit codes: 0 success, 2 bad flags or domain errors, 3 I/O
failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, fields
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from . import bands as bands_mod
from . import cantor as cantor_mod
from . import ids as ids_mod
from . import scattering as scat_mod
from . import tracemap as trace_mod
from .errors import DomainError
from .numutil import as_float
from .potentials import (
    GOLDEN_MEAN,
    NAMED_RULES,
    PotentialSpec,
    SubstitutionRule,
    approximant_by_denominator,
    periodic_approximant,
)
from .transfer import lyapunov_grid
from .tracemap import fibonacci_trace_orbit, fricke_invariant

COMMANDS = ("spectrum", "butterfly", "ids", "lyapunov", "resistance",
            "tracemap", "gaps", "cantor")

_DEFAULTS = {
    "model": "free", "alpha": "golden", "omega": 0.0, "lam": 1.0,
    "value": 0.0, "values": None, "letter_values": None, "rule_file": None,
    "rounding": "floor", "approx_q": None, "order": None, "method": "floquet",
    "size": 1000, "grid": 200, "emin": -3.0, "emax": 3.0,
    "qmax": 5, "depth": 10, "nmax": 20, "steps": 10, "n": 10000,
    "energy": 0.0, "lengths": "1:100", "leads": "pi-half",
    "kmax": 13, "labels": "k-over-q", "tol": 0.02,
    "what": "function", "xmin": 0.0, "xmax": 1.0, "tmax": 50.0, "factors": 60,
    "out": None, "format": "csv", "threads": max(1, os.cpu_count() or 1),
    "dump_config": False, "config": None,
}

_FIELD_TYPES = {
    "model": str, "alpha": str, "omega": float, "lam": float, "value": float,
    "values": str, "letter_values": str, "rule_file": str, "rounding": str,
    "approx_q": int, "order": int, "method": str, "size": int, "grid": int,
    "emin": float,
    "emax": float, "qmax": int, "depth": int, "nmax": int, "steps": int,
    "n": int, "energy": float, "lengths": str, "leads": str, "kmax": int,
    "labels": str, "tol": float, "what": str, "xmin": float, "xmax": float,
    "tmax": float, "factors": int, "out": str, "format": str, "threads": int,
}


@dataclass
class RunConfig:
    command: str
    model: str = "free"
    alpha: str = "golden"
    omega: float = 0.0
    lam: float = 1.0
    value: float = 0.0
    values: str | None = None
    letter_values: str | None = None
    rule_file: str | None = None
    rounding: str = "floor"
    approx_q: int | None = None
    order: int | None = None
    method: str = "floquet"
    size: int = 1000
    grid: int = 200
    emin: float = -3.0
    emax: float = 3.0
    qmax: int = 5
    depth: int = 10
    nmax: int = 20
    steps: int = 10
    n: int = 10000
    energy: float = 0.0
    lengths: str = "1:100"
    leads: str = "pi-half"
    kmax: int = 13
    labels: str = "k-over-q"
    tol: float = 0.02
    what: str = "function"
    xmin: float = 0.0
    xmax: float = 1.0
    tmax: float = 50.0
    factors: int = 60
    out: str | None = None
    format: str = "csv"
    threads: int = 1
    dump_config: bool = False


def _fmt(x) -> str:
    """Fixed 12-significant-digit float formatting (platform-stable)."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    if x == 0.0:
        x = 0.0  # normalize -0
    return f"{x:.12g}"


def _jround(x) -> float:
    return float(_fmt(x))


def _parse_lengths(text: str) -> list[int]:
    if ":" in text:
        parts = [int(p) for p in text.split(":")]
        if len(parts) == 2:
            a, b = parts
            return list(range(a, b + 1))
        a, b, step = parts
        return list(range(a, b + 1, step))
    return [int(p) for p in text.split(",")]


def _parse_letter_values(text: str) -> dict[str, float]:
    out = {}
    for item in text.split(","):
        k, _, v = item.partition("=")
        out[k.strip()] = float(v)
    return out


def _resolve_alpha(text: str) -> float:
    if text == "golden":
        return GOLDEN_MEAN
    return float(text)


def build_spec(cfg: RunConfig) -> PotentialSpec:
    """Translate CLI model flags into a potential description."""
    model = cfg.model
    if model == "free":
        return PotentialSpec.constant(0.0)
    if model == "constant":
        return PotentialSpec.constant(cfg.value)
    if model == "fibonacci":
        return PotentialSpec.sturmian(GOLDEN_MEAN, cfg.lam, cfg.omega, cfg.rounding)
    if model == "sturmian":
        return PotentialSpec.sturmian(_resolve_alpha(cfg.alpha), cfg.lam, cfg.omega,
                                      cfg.rounding)
    if model == "almost-mathieu":
        return PotentialSpec.almost_mathieu(_resolve_alpha(cfg.alpha), cfg.lam, cfg.omega)
    if model == "circle":
        return PotentialSpec.circle(_resolve_alpha(cfg.alpha), cfg.lam, cfg.omega)
    if model in NAMED_RULES:
        rule = NAMED_RULES[model]
        lv = (_parse_letter_values(cfg.letter_values) if cfg.letter_values
              else {rule.alphabet[0]: cfg.lam,
                    **{a: 0.0 for a in rule.alphabet[1:]}})
        return PotentialSpec.substitution(rule, lv)
    if model == "explicit":
        if not cfg.values:
            raise DomainError("explicit model needs --values v1,v2,...")
        return PotentialSpec.explicit([float(v) for v in cfg.values.split(",")])
    if model == "substitution":
        if not cfg.rule_file:
            raise DomainError("substitution model needs --rule-file")
        with open(cfg.rule_file) as fh:
            data = json.load(fh)
        rule = SubstitutionRule(tuple(data["alphabet"]), dict(data["images"]))
        return PotentialSpec.substitution(
            rule, {k: float(v) for k, v in data["letter_values"].items()})
    raise DomainError(f"unknown model {model!r}")


def _periodic_values(cfg: RunConfig, spec: PotentialSpec):
    if spec.kind in ("constant", "explicit-periodic"):
        return periodic_approximant(spec, 1)
    if spec.kind == "substitution":
        if cfg.order is None:
            raise DomainError("substitution models need --order for a periodic block")
        return periodic_approximant(spec, cfg.order)
    if cfg.approx_q is None:
        raise DomainError("this model needs --approx-q to pick an approximant")
    return approximant_by_denominator(spec, cfg.approx_q)


def _grid(cfg: RunConfig) -> np.ndarray:
    if cfg.grid < 2 or cfg.emax <= cfg.emin:
        raise DomainError("need emax > emin and at least 2 grid points")
    return np.linspace(cfg.emin, cfg.emax, cfg.grid)


def _chunked(fn, grid: np.ndarray, threads: int) -> np.ndarray:
    """Apply fn to grid chunks in parallel; assembly order is fixed."""
    if threads <= 1 or len(grid) < 32:
        return np.asarray(fn(grid))
    chunks = np.array_split(grid, threads * 4)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(fn, chunks))
    return np.concatenate(parts)


# -- subcommand bodies (each returns CSV lines and a JSON object) -------------


def _run_spectrum(cfg: RunConfig):
    if cfg.method == "bounded":
        if cfg.model not in ("fibonacci", "sturmian"):
            raise DomainError("the bounded-trace estimate runs on the "
                              "golden-mean recursion; use --model fibonacci")
        window = (cfg.emin, cfg.emax) if cfg.emin < cfg.emax else \
            (-2.0 - abs(cfg.lam) - 1.0, 2.0 + abs(cfg.lam) + 1.0)
        bs = trace_mod.bounded_spectrum(cfg.lam, window, cfg.depth, cfg.nmax)
        lines = ["band_lo,band_hi"]
        lines += [f"{_fmt(lo)},{_fmt(hi)}" for lo, hi in bs.bands]
        return lines, {"bands": [[_jround(lo), _jround(hi)] for lo, hi in bs.bands],
                       "gap_labels": []}
    spec = build_spec(cfg)
    periodic = _periodic_values(cfg, spec)
    bs = bands_mod.gap_labels(bands_mod.band_spectrum(periodic), periodic.period)
    lines = ["band_lo,band_hi"]
    lines += [f"{_fmt(lo)},{_fmt(hi)}" for lo, hi in bs.bands]
    obj = {"period": periodic.period,
           "bands": [[_jround(lo), _jround(hi)] for lo, hi in bs.bands],
           "gap_labels": [_jround(x) for x in (bs.gap_labels or ())]}
    return lines, obj


def _run_butterfly(cfg: RunConfig):
    rows = bands_mod.butterfly(cfg.lam, cfg.qmax, cfg.omega, threads=cfg.threads)
    lines = ["p,q,band_lo,band_hi"]
    out_rows = []
    for p, q, bs in rows:
        for lo, hi in bs.bands:
            lines.append(f"{p},{q},{_fmt(lo)},{_fmt(hi)}")
        out_rows.append({"p": p, "q": q,
                         "bands": [[_jround(lo), _jround(hi)] for lo, hi in bs.bands]})
    return lines, {"rows": out_rows}


def _run_ids(cfg: RunConfig):
    spec = build_spec(cfg)
    grid = _grid(cfg)
    # The library counts strictly below E; the emitted convention is
    # "at or below", obtained by a +1e-12 shift of the count points.
    curve = ids_mod.ids_curve(spec, None, cfg.size, grid + 1e-12)
    lines = ["E,N"]
    lines += [f"{_fmt(e)},{_fmt(v)}" for e, v in zip(grid, curve.values)]
    obj = {"size": curve.size,
           "energies": [_jround(e) for e in grid],
           "values": [_jround(v) for v in curve.values]}
    return lines, obj


def _run_lyapunov(cfg: RunConfig):
    spec = build_spec(cfg)
    grid = _grid(cfg)
    gam = _chunked(lambda g: lyapunov_grid(spec, g, cfg.n), grid, cfg.threads)
    lines = ["E,gamma"]
    lines += [f"{_fmt(e)},{_fmt(g)}" for e, g in zip(grid, gam)]
    return lines, {"energies": [_jround(e) for e in grid],
                   "gamma": [_jround(g) for g in gam]}


def _run_resistance(cfg: RunConfig):
    spec = build_spec(cfg)
    leads = {"pi-half": "at-energy", "zero": "zero"}.get(cfg.leads)
    if leads is None:
        raise DomainError("leads must be 'pi-half' or 'zero'")
    profile = scat_mod.resistance_profile(spec, cfg.energy,
                                          _parse_lengths(cfg.lengths), leads)
    lines = ["L,log10R"]
    lines += [f"{p.length},{_fmt(p.log10_resistance)}" for p in profile]
    return lines, {"profile": [[p.length, _jround(p.log10_resistance)]
                               for p in profile]}


def _fricke_exact(t2: float, t1: float, t0: float) -> float:
    # Exact rational arithmetic: the naive float expression cancels
    # catastrophically once the triple product reaches ~1e16.
    a, b, c = Fraction(t2), Fraction(t1), Fraction(t0)
    return float(a * a + b * b + c * c - a * b * c - 4)


def _run_tracemap(cfg: RunConfig):
    if cfg.model not in ("fibonacci", "sturmian"):
        raise DomainError("tracemap runs on the golden-mean recursion; "
                          "use --model fibonacci")
    orbit = fibonacci_trace_orbit(cfg.energy, cfg.lam, cfg.steps)
    lines = ["n,tau,invariant"]
    rows = []

    def running_invariant(n: int) -> float:
        top = max(n, 1)
        triple = [orbit.tau(top), orbit.tau(top - 1), orbit.tau(top - 2)]
        if any(isinstance(t, tuple) for t in triple):
            return fricke_invariant(*(as_float(t) for t in triple))
        return _fricke_exact(*triple)

    for n in range(-1, cfg.steps + 1):
        tau = as_float(orbit.tau(n))
        inv = running_invariant(n)
        lines.append(f"{n},{_fmt(tau)},{_fmt(inv)}")
        rows.append({"n": n, "tau": _jround(tau), "invariant": _jround(inv)})
    return lines, {"rows": rows, "escape_index": orbit.escape_index}


def _run_gaps(cfg: RunConfig):
    spec = build_spec(cfg)
    periodic = _periodic_values(cfg, spec)
    bs = bands_mod.band_spectrum(periodic)
    if len(bs.bands) < 2:
        return ["gap_index,energy,ids_value,label,deviation,within_tol"], {"gaps": []}
    span = bs.bands[-1][1] - bs.bands[0][0]
    # Sample the IDS exactly at the gap midpoints; a uniform grid would smear
    # the counts across the band edges.
    mids = [0.5 * (lo + hi) for lo, hi in bs.gaps()]
    grid = np.array([bs.bands[0][0] - 0.1 * span] + mids + [bs.bands[-1][1] + 0.1 * span])
    curve = ids_mod.ids_curve(PotentialSpec.explicit(periodic.values), None,
                              cfg.size, grid)
    if cfg.labels == "sturmian":
        labels = cantor_mod.sturmian_label_set(_resolve_alpha(cfg.alpha),
                                               cfg.kmax).values
    elif cfg.labels == "k-over-q":
        labels = [k / periodic.period for k in range(1, periodic.period)]
    else:
        raise DomainError("labels must be 'k-over-q' or 'sturmian'")
    report = bands_mod.match_gap_labels(bs, curve, labels, cfg.tol)
    lines = ["gap_index,energy,ids_value,label,deviation,within_tol"]
    rows = []
    for m in report:
        lines.append(f"{m.gap_index},{_fmt(m.energy)},{_fmt(m.ids_value)},"
                     f"{_fmt(m.label)},{_fmt(m.deviation)},{int(m.within_tol)}")
        rows.append({"gap_index": m.gap_index, "energy": _jround(m.energy),
                     "ids_value": _jround(m.ids_value), "label": _jround(m.label),
                     "deviation": _jround(m.deviation), "within_tol": m.within_tol})
    return lines, {"gaps": rows}


def _run_cantor(cfg: RunConfig):
    if cfg.what == "function":
        xs = np.linspace(cfg.xmin, cfg.xmax, max(cfg.grid, 2))
        lines = ["x,alpha"]
        lines += [f"{_fmt(x)},{_fmt(cantor_mod.cantor_alpha(float(x)))}" for x in xs]
        return lines, {"x": [_jround(x) for x in xs],
                       "alpha": [_jround(cantor_mod.cantor_alpha(float(x))) for x in xs]}
    if cfg.what == "fourier":
        ts = np.linspace(0.0, cfg.tmax, max(cfg.grid, 2))
        lines = ["t,re,im,abs"]
        rows = []
        for t in ts:
            z = cantor_mod.cantor_fourier(float(t), cfg.factors)
            lines.append(f"{_fmt(t)},{_fmt(z.real)},{_fmt(z.imag)},{_fmt(abs(z))}")
            rows.append([_jround(t), _jround(z.real), _jround(z.imag), _jround(abs(z))])
        return lines, {"rows": rows}
    if cfg.what == "labels":
        ls = cantor_mod.sturmian_label_set(_resolve_alpha(cfg.alpha), cfg.kmax)
        lines = ["label"] + [_fmt(v) for v in ls.values]
        return lines, {"labels": [_jround(v) for v in ls.values]}
    if cfg.what == "hierarchical":
        ls = cantor_mod.hierarchical_labels(cfg.kmax)
        lines = ["label"] + [_fmt(v) for v in ls.values]
        return lines, {"labels": [_jround(v) for v in ls.values]}
    raise DomainError("cantor --what must be function, fourier, labels or hierarchical")


_RUNNERS = {
    "spectrum": _run_spectrum,
    "butterfly": _run_butterfly,
    "ids": _run_ids,
    "lyapunov": _run_lyapunov,
    "resistance": _run_resistance,
    "tracemap": _run_tracemap,
    "gaps": _run_gaps,
    "cantor": _run_cantor,
}


# -- argument handling ---------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quasispec",
                                     description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", default=None)
        p.add_argument("--dump-config", action="store_true", dest="dump_config")
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=["csv", "json"], default=None)
        p.add_argument("--threads", type=int, default=None)
        p.add_argument("--model", default=None)
        p.add_argument("--alpha", default=None)
        p.add_argument("--omega", type=float, default=None)
        p.add_argument("--lambda", type=float, dest="lam", default=None)
        p.add_argument("--value", type=float, default=None)
        p.add_argument("--values", default=None)
        p.add_argument("--letter-values", dest="letter_values", default=None)
        p.add_argument("--rule-file", dest="rule_file", default=None)
        p.add_argument("--rounding", choices=["floor", "ceil"], default=None)
        p.add_argument("--approx-q", type=int, dest="approx_q", default=None)
        p.add_argument("--order", type=int, default=None)
        p.add_argument("--method", choices=["floquet", "bounded"], default=None)
        p.add_argument("--size", type=int, default=None)
        p.add_argument("--grid", type=int, default=None)
        p.add_argument("--emin", type=float, default=None)
        p.add_argument("--emax", type=float, default=None)
        p.add_argument("--qmax", type=int, default=None)
        p.add_argument("--depth", type=int, default=None)
        p.add_argument("--nmax", type=int, default=None)
        p.add_argument("--steps", type=int, default=None)
        p.add_argument("--n", type=int, default=None)
        p.add_argument("--energy", type=float, default=None)
        p.add_argument("--lengths", default=None)
        p.add_argument("--leads", default=None)
        p.add_argument("--kmax", type=int, default=None)
        p.add_argument("--labels", default=None)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--what", default=None)
        p.add_argument("--xmin", type=float, default=None)
        p.add_argument("--xmax", type=float, default=None)
        p.add_argument("--tmax", type=float, default=None)
        p.add_argument("--factors", type=int, default=None)
    return parser


def _load_config_file(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise DomainError(f"bad config line: {raw.rstrip()}")
            key = key.strip().replace("-", "_")
            value = value.strip()
            if key == "command":
                continue
            if key not in _FIELD_TYPES:
                raise DomainError(f"unknown config key {key!r}")
            out[key] = _FIELD_TYPES[key](value)
    return out


def parse_config(argv) -> RunConfig:
    ns = _build_parser().parse_args(argv)
    file_vals = _load_config_file(ns.config) if ns.config else {}
    merged = {"command": ns.command}
    for f in fields(RunConfig):
        if f.name == "command":
            continue
        cli_val = getattr(ns, f.name, None)
        if cli_val is not None and cli_val is not False:
            merged[f.name] = cli_val
        elif f.name in file_vals:
            merged[f.name] = file_vals[f.name]
        else:
            merged[f.name] = _DEFAULTS[f.name]
    return RunConfig(**merged)


def dump_config(cfg: RunConfig) -> str:
    lines = [f"command = {cfg.command}"]
    for f in fields(RunConfig):
        if f.name in ("command", "dump_config"):
            continue
        val = getattr(cfg, f.name)
        if val is None:
            continue
        lines.append(f"{f.name} = {val}")
    return "\n".join(lines) + "\n"


def run(cfg: RunConfig) -> int:
    """Execute a parsed configuration; returns the process exit code."""
    try:
        lines, obj = _RUNNERS[cfg.command](cfg)
        text = "\n".join(lines) + "\n" if cfg.format == "csv" else \
            json.dumps(obj, separators=(",", ":")) + "\n"
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        if cfg.out:
            with open(cfg.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    return 0


def main(argv=None) -> int:
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if cfg.dump_config:
        sys.stdout.write(dump_config(cfg))
        return 0
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
