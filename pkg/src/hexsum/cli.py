"""Batch experiment driver.

Subcommands: verify (invariant battery), kernel (mean + series cross
check), bernstein (derivative-integral ladder), approximate (deviation
sweeps), rates (log-log slope fits), kfun (K-functional brackets).

Sweep radii follow the geometric ladder rho = 1 - 2^{-k}: every rate in
the library is a power of 1 - rho, so log2 spacing makes fitted slopes
directly readable.  Reports go to CSV (header row, LF endings, 17
significant digits) or JSON; identical config + seed produces
byte-identical files.

Exit codes: 0 all assertions pass, 1 assertion failure, 2 bad
configuration / unreadable input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, fields, replace

import numpy as np

from .families import FamilySpec, builtin_families
from .fourier import (
    HexGrid,
    SpectralFormatError,
    make_grid,
    load_spectral,
    spectral_from_json_dict,
    spectral_to_json_dict,
)
from .kernels import (
    R_MAX,
    bernstein_integral,
    hex_kernel_closed_values,
    hex_kernel_series_values,
)
from .means import (
    SummationParams,
    deviation_l2_spectral,
    deviation_norm,
    kfun_estimate,
)
from .verify import run_all_checks

COMMANDS = ("verify", "kernel", "bernstein", "approximate", "rates", "kfun")

#: series cutoff used by the kernel command's closed-vs-series cross check
KERNEL_CUTOFF = 400


class ConfigError(Exception):
    """Invalid configuration, flag value, or config file."""


@dataclass(frozen=True)
class ExperimentConfig:
    command: str
    k_min: int = 1
    k_max: int = 7
    r: int = 1
    n: int = 1
    p: float = 2.0
    grid_n: int | str = "auto"
    input_path: str | None = None
    output_path: str | None = None
    fmt: str = "csv"
    seed: int = 0


#: config-file / flag name -> dataclass field
_KEY_TO_FIELD = {
    "rho-kmin": "k_min",
    "rho-kmax": "k_max",
    "r": "r",
    "n": "n",
    "p": "p",
    "grid": "grid_n",
    "input": "input_path",
    "out": "output_path",
    "format": "fmt",
    "seed": "seed",
}


def _coerce_int(key: str, value) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{key} must be an integer, got {value!r}")
    return value


def _coerce_p(value) -> float:
    if isinstance(value, str):
        if value.strip().lower() == "inf":
            return math.inf
        try:
            value = float(value)
        except ValueError:
            raise ConfigError(f"p must be a number or 'inf', got {value!r}") from None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"p must be a number or 'inf', got {value!r}")
    p = float(value)
    if not p >= 1.0:
        raise ConfigError(f"p must satisfy p >= 1, got {p}")
    return p


def _coerce_grid(value) -> int | str:
    if isinstance(value, str):
        if value.strip().lower() == "auto":
            return "auto"
        try:
            value = int(value)
        except ValueError:
            raise ConfigError(f"grid must be an integer or 'auto', got {value!r}") from None
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"grid must be an integer or 'auto', got {value!r}")
    if value < 4:
        raise ConfigError(f"grid resolution must be at least 4, got {value}")
    return value


_COERCERS = {
    "rho-kmin": _coerce_int,
    "rho-kmax": _coerce_int,
    "r": _coerce_int,
    "n": _coerce_int,
    "seed": _coerce_int,
    "p": lambda key, v: _coerce_p(v),
    "grid": lambda key, v: _coerce_grid(v),
    "input": lambda key, v: str(v),
    "out": lambda key, v: str(v),
    "format": lambda key, v: str(v),
}


def _coerce(key: str, value):
    return _COERCERS[key](key, value)


def _load_config_file(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    unknown = set(doc) - set(_KEY_TO_FIELD)
    if unknown:
        raise ConfigError(
            f"config file {path} has unknown keys: {sorted(unknown)}"
        )
    return doc


def validate_config(cfg: ExperimentConfig) -> None:
    if cfg.command not in COMMANDS:
        raise ConfigError(f"unknown command {cfg.command!r}")
    if cfg.k_min > cfg.k_max:
        raise ConfigError(f"rho-kmin {cfg.k_min} exceeds rho-kmax {cfg.k_max}")
    if cfg.k_min < 0:
        raise ConfigError(f"rho-kmin must be nonnegative, got {cfg.k_min}")
    if cfg.fmt not in ("csv", "json"):
        raise ConfigError(f"format must be 'csv' or 'json', got {cfg.fmt!r}")
    if cfg.command == "bernstein" and not 0 <= cfg.r <= R_MAX:
        raise ConfigError(f"bernstein needs 0 <= r <= {R_MAX}, got {cfg.r}")
    if cfg.command in ("approximate", "rates") and cfg.r < 1:
        raise ConfigError(f"{cfg.command} needs r >= 1, got {cfg.r}")
    if cfg.command == "kfun":
        if cfg.n < 1:
            raise ConfigError(f"kfun needs n >= 1, got {cfg.n}")
        if cfg.k_min < 1:
            raise ConfigError(
                "kfun needs rho-kmin >= 1 so every delta = 2^-k stays in (0, 1/2]"
            )
    if cfg.command == "rates" and cfg.p != 2.0:
        raise ConfigError("rates uses the exact spectral L2 deviation; p must be 2")


def build_config(ns: argparse.Namespace) -> ExperimentConfig:
    cfg = ExperimentConfig(command=ns.command)
    if ns.config is not None:
        doc = _load_config_file(ns.config)
        for key in _KEY_TO_FIELD:  # fixed order, not file order
            if key in doc:
                cfg = replace(cfg, **{_KEY_TO_FIELD[key]: _coerce(key, doc[key])})
    flag_values = {
        "rho-kmin": ns.rho_kmin,
        "rho-kmax": ns.rho_kmax,
        "r": ns.r,
        "n": ns.n,
        "p": ns.p,
        "grid": ns.grid,
        "input": ns.input,
        "out": ns.out,
        "format": ns.format,
        "seed": ns.seed,
    }
    for key, value in flag_values.items():
        if value is not None:
            cfg = replace(cfg, **{_KEY_TO_FIELD[key]: _coerce(key, value)})
    validate_config(cfg)
    return cfg


def rho_ladder(cfg: ExperimentConfig) -> list[tuple[int, float]]:
    return [(k, 1.0 - 2.0**-k) for k in range(cfg.k_min, cfg.k_max + 1)]


def _explicit_grid(cfg: ExperimentConfig) -> HexGrid | None:
    return None if cfg.grid_n == "auto" else make_grid(cfg.grid_n)


def _sweep_families(cfg: ExperimentConfig) -> list[FamilySpec]:
    if cfg.input_path is None:
        return builtin_families(64)
    f = load_spectral(cfg.input_path)
    return [FamilySpec(f"input({cfg.input_path})", f, 0.0)]


# --------------------------------------------------------------------------
# runners: each returns (rows, assertions)
# --------------------------------------------------------------------------

def run_verify(cfg: ExperimentConfig):
    results = run_all_checks(cfg.seed)
    if cfg.input_path is not None:
        f = load_spectral(cfg.input_path)
        back = spectral_from_json_dict(spectral_to_json_dict(f))
        gap = max(
            [abs(f.coeff(k) - back.coeff(k)) for k, _ in f.items()], default=0.0
        )
        from .verify import CheckResult

        results.append(
            CheckResult(
                "input.serialization_roundtrip", gap == 0.0, gap, 0.0, cfg.input_path
            )
        )
    rows = [
        {
            "check": r.name,
            "passed": r.passed,
            "residual": r.residual,
            "tol": r.tol,
            "seed": cfg.seed,
            "detail": r.detail,
        }
        for r in results
    ]
    assertions = [(r.name, r.passed) for r in results]
    return rows, assertions


def run_kernel(cfg: ExperimentConfig):
    rng = np.random.default_rng([cfg.seed, 101])
    t1 = rng.uniform(-3.0, 3.0, size=200)
    t2 = rng.uniform(-3.0, 3.0, size=200)
    t3 = -(t1 + t2)
    grid = _explicit_grid(cfg)
    rows = []
    mean_ok = True
    gap_ok = True
    for k, rho in rho_ladder(cfg):
        try:
            res = bernstein_integral(rho, 0, grid)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        closed = hex_kernel_closed_values(rho, t1, t2, t3)
        series, tail = hex_kernel_series_values(rho, t1, t2, t3, KERNEL_CUTOFF)
        gap = float(np.abs(closed - series.real).max())
        row_mean_ok = abs(res.value - 1.0) <= 1e-6
        row_gap_ok = gap <= tail + 1e-12
        mean_ok &= row_mean_ok
        gap_ok &= row_gap_ok
        rows.append(
            {
                "k": k,
                "rho": rho,
                "grid_n": res.grid_n,
                "full_resolution": res.full_resolution,
                "mean": res.value,
                "mean_abs_err": abs(res.value - 1.0),
                "series_gap": gap,
                "tail_bound": tail,
                "cutoff": KERNEL_CUTOFF,
                "sample_points": 200,
                "seed": cfg.seed,
                "status": "ok" if (row_mean_ok and row_gap_ok) else "fail",
            }
        )
    assertions = [
        ("kernel mean equals 1 within 1e-6 across the ladder", mean_ok),
        ("closed form within the series tail bound at all sample points", gap_ok),
    ]
    return rows, assertions


def run_bernstein(cfg: ExperimentConfig):
    grid = _explicit_grid(cfg)
    rows = []
    scaled_values = []
    for k, rho in rho_ladder(cfg):
        try:
            res = bernstein_integral(rho, cfg.r, grid)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        scaled = res.value * (1.0 - rho) ** cfg.r
        scaled_values.append(scaled)
        rows.append(
            {
                "row_type": "point",
                "k": k,
                "rho": rho,
                "r": cfg.r,
                "integral": res.value,
                "scaled": scaled,
                "grid_n": res.grid_n,
                "cap_hit": not res.full_resolution,
            }
        )
    c_emp = max(scaled_values)
    ratio = (
        scaled_values[-1] / scaled_values[-2] if len(scaled_values) >= 2 else math.nan
    )
    if cfg.r == 0:
        ok = all(abs(s - 1.0) <= 1e-6 for s in scaled_values)
        label = "order-0 scaled integral equals 1 within 1e-6"
    elif len(scaled_values) >= 2:
        ok = 0.9 <= ratio <= 1.1
        label = "last-two scaled ratio within [0.9, 1.1]"
    else:
        ok = True
        label = "single ladder point: ratio check skipped"
    rows.append(
        {
            "row_type": "summary",
            "r": cfg.r,
            "c_emp": c_emp,
            "ratio_last_two": ratio,
            "points": len(scaled_values),
            "status": "ok" if ok else "fail",
        }
    )
    return rows, [(label, ok)]


def run_approximate(cfg: ExperimentConfig):
    spectral_exact = cfg.p == 2.0 and cfg.grid_n == "auto"
    if not spectral_exact and cfg.grid_n == "auto":
        raise ConfigError("p != 2 requires an explicit --grid N")
    grid = _explicit_grid(cfg)
    rows = []
    assertions = []
    for fam in _sweep_families(cfg):
        prev = None
        monotone = True
        devs = []
        for k, rho in rho_ladder(cfg):
            params = SummationParams(rho, cfg.r)
            if spectral_exact:
                dev = deviation_l2_spectral(fam.function, params)
                gn = 0
            else:
                dev = deviation_norm(fam.function, params, cfg.p, grid)
                gn = grid.n
            if prev is not None and dev > prev * (1.0 + 1e-12):
                monotone = False
            prev = dev
            devs.append(dev)
            rows.append(
                {
                    "row_type": "point",
                    "family": fam.name,
                    "k": k,
                    "rho": rho,
                    "r": cfg.r,
                    "p": cfg.p,
                    "deviation": dev,
                    "grid_n": gn,
                    "tail_l2": fam.tail_l2,
                }
            )
        rows.append(
            {
                "row_type": "summary",
                "family": fam.name,
                "r": cfg.r,
                "max_deviation": max(devs),
                "min_deviation": min(devs),
                "status": "ok" if (monotone or not spectral_exact) else "fail",
            }
        )
        if spectral_exact:
            assertions.append(
                (f"deviation nonincreasing along the ladder [{fam.name}]", monotone)
            )
    return rows, assertions


def _fit_slope(ks: list[int], devs: list[float]) -> tuple[float, float]:
    """Least-squares slope of log2 dev against log2(1 - rho) = -k."""
    xs = [-float(k) for k in ks]
    ys = [math.log2(d) for d in devs]
    m = len(xs)
    xbar = math.fsum(xs) / m
    ybar = math.fsum(ys) / m
    sxx = math.fsum((x - xbar) ** 2 for x in xs)
    sxy = math.fsum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
    slope = sxy / sxx
    resid = math.fsum(
        (y - ybar - slope * (x - xbar)) ** 2 for x, y in zip(xs, ys)
    )
    stderr = math.sqrt(resid / (m - 2) / sxx) if m > 2 else math.nan
    return slope, stderr


def run_rates(cfg: ExperimentConfig):
    ladder = rho_ladder(cfg)
    if len(ladder) < 4:
        raise ConfigError(
            f"rate fits require at least 4 ladder points, got {len(ladder)}"
        )
    rows = []
    assertions = []
    for fam in _sweep_families(cfg):
        devs = []
        for k, rho in ladder:
            dev = deviation_l2_spectral(fam.function, SummationParams(rho, cfg.r))
            devs.append(dev)
            rows.append(
                {
                    "row_type": "point",
                    "family": fam.name,
                    "k": k,
                    "rho": rho,
                    "r": cfg.r,
                    "deviation": dev,
                    "log2_deviation": math.log2(dev) if dev > 0.0 else math.nan,
                }
            )
        if all(d == 0.0 for d in devs):
            rows.append(
                {
                    "row_type": "summary",
                    "family": fam.name,
                    "r": cfg.r,
                    "slope": math.nan,
                    "stderr": math.nan,
                    "points": len(devs),
                    "status": "exact-zero",
                }
            )
            assertions.append(
                (f"deviation identically zero (degree < r) [{fam.name}]", True)
            )
            continue
        if any(d == 0.0 for d in devs):
            rows.append(
                {
                    "row_type": "summary",
                    "family": fam.name,
                    "r": cfg.r,
                    "slope": math.nan,
                    "stderr": math.nan,
                    "points": len(devs),
                    "status": "mixed-zero",
                }
            )
            assertions.append(
                (f"deviations all positive or all zero [{fam.name}]", False)
            )
            continue
        slope, stderr = _fit_slope([k for k, _ in ladder], devs)
        rows.append(
            {
                "row_type": "summary",
                "family": fam.name,
                "r": cfg.r,
                "slope": slope,
                "stderr": stderr,
                "points": len(devs),
                "status": "ok",
            }
        )
        assertions.append((f"slope fitted over {len(devs)} points [{fam.name}]", True))
    return rows, assertions


def run_kfun(cfg: ExperimentConfig):
    spectral_exact = cfg.p == 2.0 and cfg.grid_n == "auto"
    if not spectral_exact and cfg.grid_n == "auto":
        raise ConfigError("p != 2 requires an explicit --grid N")
    grid = _explicit_grid(cfg)
    rows = []
    assertions = []
    for fam in _sweep_families(cfg):
        ratios = []
        violated = False
        for k in range(cfg.k_min, cfg.k_max + 1):
            delta = 2.0**-k
            est = kfun_estimate(
                fam.function, delta, cfg.n, cfg.p, None if spectral_exact else grid
            )
            if est.upper == 0.0:
                if est.lower_proxy > 1e-13:
                    violated = True
            else:
                ratios.append(est.lower_proxy / est.upper)
            rows.append(
                {
                    "row_type": "point",
                    "family": fam.name,
                    "k": k,
                    "delta": delta,
                    "n": cfg.n,
                    "p": cfg.p,
                    "upper": est.upper,
                    "lower_proxy": est.lower_proxy,
                    "winner": est.argmin_candidate,
                    "grid_n": 0 if spectral_exact else grid.n,
                }
            )
        rows.append(
            {
                "row_type": "summary",
                "family": fam.name,
                "n": cfg.n,
                "c_observed": max(ratios) if ratios else 0.0,
                "points": cfg.k_max - cfg.k_min + 1,
                "status": "violated" if violated else "ok",
            }
        )
        assertions.append(
            (f"lower proxy within a finite multiple of upper [{fam.name}]", not violated)
        )
    return rows, assertions


_RUNNERS = {
    "verify": run_verify,
    "kernel": run_kernel,
    "bernstein": run_bernstein,
    "approximate": run_approximate,
    "rates": run_rates,
    "kfun": run_kfun,
}


# --------------------------------------------------------------------------
# report writing
# --------------------------------------------------------------------------

def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.17g" % float(value)
    text = str(value)
    if "," in text or '"' in text or "\n" in text:
        text = '"' + text.replace('"', '""') + '"'
    return text


def _csv_text(rows: list[dict]) -> str:
    header: list[str] = []
    for row in rows:
        for key in row:
            if key not in header:
                header.append(key)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_format_cell(row.get(key)) for key in header))
    return "\n".join(lines) + "\n"


def _json_safe(value):
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return v if math.isfinite(v) else repr(v)
    if isinstance(value, np.integer):
        return int(value)
    return value


def _json_text(cfg: ExperimentConfig, rows: list[dict]) -> str:
    doc = {
        "command": cfg.command,
        "config": {f.name: _json_safe(getattr(cfg, f.name)) for f in fields(cfg)},
        "rows": [{k: _json_safe(v) for k, v in row.items()} for row in rows],
    }
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def write_report(cfg: ExperimentConfig, rows: list[dict]) -> str:
    path = cfg.output_path or f"{cfg.command}_report.{cfg.fmt}"
    text = _csv_text(rows) if cfg.fmt == "csv" else _json_text(cfg, rows)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


# --------------------------------------------------------------------------
# entry points
# --------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hexsum",
        description="Verification suites and sweep experiments for hexagonal "
        "Fourier summation.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--rho-kmin", type=int, default=None, metavar="K",
                        help="ladder start: rho = 1 - 2^-K (default 1)")
    parser.add_argument("--rho-kmax", type=int, default=None, metavar="K",
                        help="ladder end (default 7)")
    parser.add_argument("--r", type=int, default=None,
                        help="derivative / mean order (default 1)")
    parser.add_argument("--n", type=int, default=None,
                        help="K-functional order for kfun (default 1)")
    parser.add_argument("--p", type=str, default=None,
                        help="norm order, a number or 'inf' (default 2)")
    parser.add_argument("--grid", type=str, default=None, metavar="N|auto",
                        help="grid resolution (default auto)")
    parser.add_argument("--input", type=str, default=None, metavar="PATH",
                        help="spectral-function JSON input")
    parser.add_argument("--out", type=str, default=None, metavar="PATH",
                        help="report path (default <command>_report.<format>)")
    parser.add_argument("--format", type=str, default=None, choices=("csv", "json"))
    parser.add_argument("--config", type=str, default=None, metavar="PATH",
                        help="JSON config file with flag-style keys")
    parser.add_argument("--seed", type=int, default=None,
                        help="seed for randomized checks (default 0)")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = build_config(ns)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        rows, assertions = _RUNNERS[cfg.command](cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SpectralFormatError as exc:
        print(f"error: invalid spectral input: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        path = write_report(cfg, rows)
    except OSError as exc:
        print(f"error: cannot write report: {exc}", file=sys.stderr)
        return 2
    failed = 0
    for label, ok in assertions:
        print(("PASS" if ok else "FAIL") + f": {label}")
        failed += 0 if ok else 1
    print(
        f"{cfg.command}: {len(assertions) - failed}/{len(assertions)} assertions "
        f"passed; report written to {path}"
    )
    return 0 if failed == 0 else 1


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
