"""Batch command-line front end.

Every output starts with ``# config: <canonical json>`` (CSV) or carries a
``config`` object (JSON); ``rmtlab replay FILE`` re-executes from that
header alone.  Exit codes: 0 success, 2 usage or configuration error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .determinantal import (
    DegenerateIntervalError,
    TruncationError,
    gap_probabilities,
    tracy_widom_cdf,
)
from .dyson import StepFailureError, dyson_simulate
from .ensembles import EntryDistribution
from .linalg import ConvergenceError, SpectralSample
from .orthopoly import airy_kernel, cd_kernel, sine_kernel
from .rng import RngState
from .rsk import lis_length, lpp_grid, random_permutation, sample_geometric_matrix
from .spectral_stats import (
    EnsembleSpec,
    _loglog_slope,
    _wigner_scaled,
    histogram,
    measure_moment,
    stieltjes_transform,
)

__all__ = ["RunConfig", "main", "run"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
HEADER = "# config: "
ENSEMBLES = ("wigner", "goe", "gue", "wishart", "beta")
NUMERIC_ERRORS = (ConvergenceError, TruncationError, DegenerateIntervalError, StepFailureError,
                  FloatingPointError, np.linalg.LinAlgError)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Validated command configuration; ``params`` holds the command-specific keys."""

    command: str
    seed: int = 0
    reps: int = 1
    format: str = "csv"
    params: dict = field(default_factory=dict)

    def canonical(self) -> dict:
        out = {"command": self.command, "seed": self.seed, "reps": self.reps, "format": self.format}
        out.update(self.params)
        return out

    def canonical_json(self) -> str:
        return json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_canonical(cls, data: dict) -> "RunConfig":
        data = dict(data)
        base = {k: data.pop(k) for k in ("command", "seed", "reps", "format")}
        return cls(params=data, **base)

    def get(self, key, default=None):
        return self.params.get(key, default)


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

_ENSEMBLE_DEFAULTS = {"ensemble": "gue", "n": 100, "m_cols": None, "beta": None, "entry_law": "gaussian"}
_DEFAULTS = {
    "sample": dict(_ENSEMBLE_DEFAULTS),
    "histogram": {**_ENSEMBLE_DEFAULTS, "bins": 50, "range": None},
    "moments": {**_ENSEMBLE_DEFAULTS, "k_max": 8, "input": None},
    "stieltjes": {**_ENSEMBLE_DEFAULTS, "z": [[0.0, 1.0]], "input": None},
    "variance-scan": {**_ENSEMBLE_DEFAULTS, "ensemble": "wigner", "k": 2, "sizes": [50, 100, 200]},
    "tracy-widom": {"s_range": [-10.0, 6.0], "step": 0.05, "nodes": 60},
    "gap": {"kernel": "sine", "n": 10, "interval": [0.0, 1.0], "nodes": 40, "m_max": 5},
    "dyson": {"n": 10, "beta": 2.0, "t_end": 1.0, "dt": 1e-4, "snapshot_every": 1000, "init": "zeros-perturbed"},
    "lis": {"n": 100},
    "lpp": {"n": 10, "m_cols": 10, "q": 0.5},
}
_REPS_DEFAULT = {"histogram": 10, "moments": 10, "stieltjes": 10, "variance-scan": 30, "lis": 10, "lpp": 10}


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output path ('-' for stdout)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--threads", type=int, help="worker threads (does not change results)")
    p.add_argument("--config", help="file of key=value lines; command-line flags take precedence")


def _add_ensemble(p: argparse.ArgumentParser, reps: bool = True):
    p.add_argument("--ensemble", choices=ENSEMBLES)
    p.add_argument("--n", type=int)
    p.add_argument("--m-cols", type=int, help="Wishart column count m (result is m x m)")
    p.add_argument("--beta", type=float)
    p.add_argument("--entry-law", choices=[e.value for e in EntryDistribution])
    if reps:
        p.add_argument("--reps", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rmtlab", description="Random-matrix experiments with reproducible output.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="eigenvalues of one matrix")
    _add_ensemble(p, reps=False)
    p = sub.add_parser("histogram", help="pooled eigenvalue histogram on the [-2, 2] scale")
    _add_ensemble(p)
    p.add_argument("--bins", type=int)
    p.add_argument("--range", type=float, nargs=2, metavar=("LO", "HI"))
    p = sub.add_parser("moments", help="moments <L_N, x^k> over repetitions")
    _add_ensemble(p)
    p.add_argument("--k-max", type=int)
    p.add_argument("--input", help="eigenvalue file (one value per line or sample output) instead of sampling")
    p = sub.add_parser("stieltjes", help="averaged Stieltjes transform")
    _add_ensemble(p)
    p.add_argument("--z", type=float, nargs=2, action="append", metavar=("RE", "IM"))
    p.add_argument("--input")
    p = sub.add_parser("variance-scan", help="variance of a moment across sizes")
    _add_ensemble(p)
    p.add_argument("--k", type=int)
    p.add_argument("--sizes", type=int, nargs="+")
    p = sub.add_parser("tracy-widom", help="F_2 table")
    p.add_argument("--s-range", type=float, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--step", type=float)
    p.add_argument("--nodes", type=int)
    p = sub.add_parser("gap", help="gap probabilities A_0..A_m")
    p.add_argument("--kernel", choices=("sine", "airy", "cd"))
    p.add_argument("--n", type=int, help="N for the cd kernel")
    p.add_argument("--interval", type=float, nargs=2, metavar=("A", "B"))
    p.add_argument("--nodes", type=int)
    p.add_argument("--m-max", type=int)
    p = sub.add_parser("dyson", help="Dyson Brownian motion trajectory")
    p.add_argument("--n", type=int)
    p.add_argument("--beta", type=float)
    p.add_argument("--t-end", type=float)
    p.add_argument("--dt", type=float)
    p.add_argument("--snapshot-every", type=int)
    p.add_argument("--init", choices=("zeros-perturbed", "sample"))
    p = sub.add_parser("lis", help="longest increasing subsequence of uniform permutations")
    p.add_argument("--n", type=int)
    p.add_argument("--reps", type=int)
    p = sub.add_parser("lpp", help="last passage times on geometric grids (rows = --n, cols = --m-cols)")
    p.add_argument("--n", type=int)
    p.add_argument("--m-cols", type=int)
    p.add_argument("--q", type=float)
    p.add_argument("--reps", type=int)
    p = sub.add_parser("replay", help="re-run the command recorded in an output header")
    p.add_argument("input")

    for name, sp in sub.choices.items():
        _add_common(sp)
    return parser


def _read_config_file(path: str) -> dict[str, str]:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            key, value = (part.strip() for part in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


def _apply_config_file(ns: argparse.Namespace, parser: argparse.ArgumentParser, values: dict[str, str]):
    sub = parser._subparsers._group_actions[0].choices[ns.command]
    actions = {a.dest: a for a in sub._actions}
    for key, text in values.items():
        if key not in actions or key in ("config", "help"):
            raise ConfigError(f"unknown config key {key!r} for {ns.command}")
        if getattr(ns, key) is not None:
            continue
        act = actions[key]
        conv = act.type or str
        tokens = text.split()
        try:
            value = conv(text) if act.nargs is None else [conv(t) for t in tokens]
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {text!r}") from exc
        if isinstance(act, argparse._AppendAction):
            value = [value]
        if act.choices is not None and value not in act.choices:
            raise ConfigError(f"{key} must be one of {sorted(act.choices)}")
        setattr(ns, key, value)


def _positive_int(params, key, minimum=1):
    v = params.get(key)
    if v is None or int(v) != v or v < minimum:
        raise ConfigError(f"{key} must be an integer >= {minimum}, got {v!r}")


def _validate(cfg: RunConfig):
    p = cfg.params
    if cfg.reps < 1:
        raise ConfigError("reps must be positive")
    if cfg.format not in ("csv", "json"):
        raise ConfigError("format must be csv or json")
    if "ensemble" in p and p.get("input") is None:
        _positive_int(p, "n")
        if p["ensemble"] == "wishart":
            _positive_int(p, "m_cols")
        if p["ensemble"] == "beta" and not (p.get("beta") or 0) > 0:
            raise ConfigError("beta ensemble needs --beta > 0")
    if cfg.command == "variance-scan":
        if len(p["sizes"]) < 2:
            raise ConfigError("need at least two sizes")
        for s in p["sizes"]:
            if s < 1:
                raise ConfigError("sizes must be positive")
    if cfg.command in ("histogram",) and p.get("bins") is not None:
        _positive_int(p, "bins")
    if cfg.command == "moments":
        _positive_int(p, "k_max")
    if cfg.command == "tracy-widom":
        lo, hi = p["s_range"]
        if not (-10.0 <= lo <= hi <= 6.0) or not p["step"] > 0:
            raise ConfigError("s-range must lie in [-10, 6] with step > 0")
        _positive_int(p, "nodes", 10)
    if cfg.command == "gap":
        a, b = p["interval"]
        if b < a:
            raise ConfigError("interval endpoints out of order")
        _positive_int(p, "nodes", 10)
        _positive_int(p, "m_max", 0)
        if p["kernel"] == "cd":
            _positive_int(p, "n")
    if cfg.command == "dyson":
        _positive_int(p, "n")
        _positive_int(p, "snapshot_every")
        if not p["beta"] > 0 or not p["dt"] > 0 or not p["t_end"] >= 0:
            raise ConfigError("need beta > 0, dt > 0, t_end >= 0")
    if cfg.command in ("lis",):
        _positive_int(p, "n", 0)
    if cfg.command == "lpp":
        _positive_int(p, "n")
        _positive_int(p, "m_cols")
        if not 0 < p["q"] < 1:
            raise ConfigError("q must lie in (0, 1)")


def config_from_namespace(ns: argparse.Namespace) -> RunConfig:
    cmd = ns.command
    params = {}
    for key, default in _DEFAULTS[cmd].items():
        value = getattr(ns, key, None)
        params[key] = default if value is None else value
    if "interval" in params or "s_range" in params or "range" in params:
        for key in ("interval", "s_range", "range"):
            if params.get(key) is not None:
                params[key] = [float(v) for v in params[key]]
    if "z" in params:
        params["z"] = [[float(a), float(b)] for a, b in params["z"]]
    reps = getattr(ns, "reps", None)
    reps = _REPS_DEFAULT.get(cmd, 1) if reps is None else reps
    cfg = RunConfig(cmd, 0 if ns.seed is None else ns.seed, reps, ns.format or "csv", params)
    _validate(cfg)
    return cfg


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

@dataclass
class Table:
    columns: list[str]
    rows: list[list]


def _pmap(fn: Callable, items: Sequence, threads: int):
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _ensemble(cfg: RunConfig, n: int | None = None) -> EnsembleSpec:
    p = cfg.params
    return EnsembleSpec(p["ensemble"], int(n or p["n"]), p.get("m_cols"), p.get("beta"), EntryDistribution(p["entry_law"]))


def _spectra(cfg: RunConfig, threads: int, n: int | None = None) -> list[SpectralSample]:
    spec = _ensemble(cfg, n)
    root = RngState(cfg.seed)
    return _pmap(lambda rep: spec.sample(root.child(spec.n, rep)), list(range(cfg.reps)), threads)


def _read_eigenvalue_file(path: str) -> np.ndarray:
    values = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            last = line.split(",")[-1]
            try:
                values.append(float(last))
            except ValueError:
                continue  # header row
    if not values:
        raise ConfigError(f"{path}: no eigenvalues found")
    return np.array(values)


def _input_or_spectra(cfg, threads):
    if cfg.get("input") is not None:
        return [_read_eigenvalue_file(cfg.get("input"))]
    return [_wigner_scaled(s) for s in _spectra(cfg, threads)]


def cmd_sample(cfg: RunConfig, threads: int) -> Table:
    spec = _ensemble(cfg)
    ev = spec.sample(RngState(cfg.seed).child(spec.n, 0)).eigenvalues
    return Table(["index", "value"], [[i, float(v)] for i, v in enumerate(ev)])


def cmd_histogram(cfg: RunConfig, threads: int) -> Table:
    pooled = np.concatenate([_wigner_scaled(s) for s in _spectra(cfg, threads)])
    rng = cfg.get("range")
    h = histogram(pooled, cfg.get("bins"), None if rng is None else tuple(rng), density=True)
    vals = h.values
    return Table(["bin_lo", "bin_hi", "count", "density"],
                 [[float(h.edges[i]), float(h.edges[i + 1]), int(h.counts[i]), float(vals[i])]
                  for i in range(h.counts.size)])


def cmd_moments(cfg: RunConfig, threads: int) -> Table:
    spectra = _input_or_spectra(cfg, threads)
    rows = []
    for k in range(1, cfg.get("k_max") + 1):
        vals = np.array([measure_moment(s, k) for s in spectra])
        var = float(vals.var(ddof=1)) if vals.size > 1 else 0.0
        rows.append([k, float(vals.mean()), var, int(vals.size)])
    return Table(["k", "mean", "variance", "reps"], rows)


def cmd_stieltjes(cfg: RunConfig, threads: int) -> Table:
    spectra = _input_or_spectra(cfg, threads)
    rows = []
    for re_z, im_z in cfg.get("z"):
        z = complex(re_z, im_z)
        g = complex(np.mean([stieltjes_transform(s, z) for s in spectra]))
        rows.append([float(re_z), float(im_z), g.real, g.imag])
    return Table(["re_z", "im_z", "re_g", "im_g"], rows)


def cmd_variance_scan(cfg: RunConfig, threads: int) -> Table:
    k = cfg.get("k")
    rows, variances = [], []
    for size in cfg.get("sizes"):
        vals = np.array([measure_moment(_wigner_scaled(s), k) for s in _spectra(cfg, threads, size)])
        var = float(vals.var(ddof=1)) if vals.size > 1 else 0.0
        variances.append(var)
        rows.append(["size", k, int(size), float(vals.mean()), var, cfg.reps, None])
    slope = _loglog_slope(cfg.get("sizes"), variances)
    rows.append(["fit", k, None, None, None, cfg.reps, slope])
    return Table(["record", "k", "n", "mean", "variance", "reps", "slope"], rows)


def cmd_tracy_widom(cfg: RunConfig, threads: int) -> Table:
    lo, hi = cfg.get("s_range")
    step = cfg.get("step")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    grid = [lo + i * step for i in range(count)]
    nodes = cfg.get("nodes")
    values = _pmap(lambda s: tracy_widom_cdf(s, nodes), grid, threads)
    return Table(["s", "F2"], [[float(s), float(f)] for s, f in zip(grid, values)])


def cmd_gap(cfg: RunConfig, threads: int) -> Table:
    name = cfg.get("kernel")
    kernel = {"sine": sine_kernel, "airy": airy_kernel}.get(name, lambda: cd_kernel(cfg.get("n")))()
    a = gap_probabilities(kernel, tuple(cfg.get("interval")), cfg.get("nodes"), cfg.get("m_max"))
    return Table(["m", "A_m"], [[i, float(v)] for i, v in enumerate(a)])


def cmd_dyson(cfg: RunConfig, threads: int) -> Table:
    n = cfg.get("n")
    tr = dyson_simulate(n, cfg.get("beta"), cfg.get("t_end"), cfg.get("dt"), RngState(cfg.seed),
                        cfg.get("init"), cfg.get("snapshot_every"))
    cols = ["t"] + [f"lambda_{i}" for i in range(1, n + 1)]
    return Table(cols, [[float(t)] + [float(v) for v in lam] for t, lam in zip(tr.times, tr.snapshots)])


def cmd_lis(cfg: RunConfig, threads: int) -> Table:
    n = cfg.get("n")
    root = RngState(cfg.seed)
    ls = _pmap(lambda rep: lis_length(random_permutation(n, root.child(rep))), list(range(cfg.reps)), threads)
    return Table(["rep", "n", "l"], [[rep, n, int(v)] for rep, v in enumerate(ls)])


def cmd_lpp(cfg: RunConfig, threads: int) -> Table:
    rows_, cols_, q = cfg.get("n"), cfg.get("m_cols"), cfg.get("q")
    root = RngState(cfg.seed)
    gs = _pmap(lambda rep: lpp_grid(sample_geometric_matrix(rows_, cols_, q, root.child(rep))),
               list(range(cfg.reps)), threads)
    return Table(["rep", "rows", "cols", "q", "G"], [[rep, rows_, cols_, float(q), int(g)] for rep, g in enumerate(gs)])


COMMANDS: dict[str, Callable[[RunConfig, int], Table]] = {
    "sample": cmd_sample,
    "histogram": cmd_histogram,
    "moments": cmd_moments,
    "stieltjes": cmd_stieltjes,
    "variance-scan": cmd_variance_scan,
    "tracy-widom": cmd_tracy_widom,
    "gap": cmd_gap,
    "dyson": cmd_dyson,
    "lis": cmd_lis,
    "lpp": cmd_lpp,
}


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------

def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % float(v)
    return str(v)


def _json_value(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else None
    return v


def render(cfg: RunConfig, table: Table) -> str:
    if cfg.format == "json":
        records = [{c: _json_value(v) for c, v in zip(table.columns, row)} for row in table.rows]
        return json.dumps({"config": cfg.canonical(), "records": records}, sort_keys=True, indent=1) + "\n"
    lines = [HEADER + cfg.canonical_json(), ",".join(table.columns)]
    lines.extend(",".join(_csv_cell(v) for v in row) for row in table.rows)
    return "\n".join(lines) + "\n"


def run(cfg: RunConfig, threads: int = 1) -> str:
    """Execute a validated configuration and return the rendered output."""
    return render(cfg, COMMANDS[cfg.command](cfg, max(1, threads)))


def read_header(path: str) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.startswith(HEADER):
        data = json.loads(text.splitlines()[0][len(HEADER):])
    else:
        try:
            data = json.loads(text)["config"]
        except (ValueError, KeyError, TypeError) as exc:
            raise ConfigError(f"{path}: no config header found") from exc
    cfg = RunConfig.from_canonical(data)
    if cfg.command not in COMMANDS:
        raise ConfigError(f"unknown command {cfg.command!r} in header")
    _validate(cfg)
    return cfg


def _emit(text: str, out: str | None):
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    threads = ns.threads or 1
    try:
        if ns.config:
            _apply_config_file(ns, parser, _read_config_file(ns.config))
        if ns.command == "replay":
            cfg = read_header(ns.input)
            if ns.format:
                cfg = RunConfig(cfg.command, cfg.seed, cfg.reps, ns.format, cfg.params)
        else:
            cfg = config_from_namespace(ns)
        text = run(cfg, threads)
        _emit(text, ns.out)
    except NUMERIC_ERRORS as exc:
        print(f"rmtlab: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigError, ValueError, TypeError, OSError) as exc:
        print(f"rmtlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
