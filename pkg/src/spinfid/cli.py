"""Batch command-line front end.

Six subcommands drive the library: `fidelity` (one configuration), `sweep`
(exact vs predicted fidelity over a size range), `scaling` (tabulate a
scaling function), `crossover` (slope curves and crossover fits), `quench`
(excitation density), and `verify` (closed-form residuals).  Every run writes
one CSV or JSON artifact carrying a manifest (resolved configuration, tool
version, wall time) so the run is reproducible from its own output; the data
section is byte-identical across repeated runs and across parallelism
settings.  Exit codes: 0 success, 2 invalid configuration, 3 numerical
failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from datetime import datetime, timezone
from multiprocessing import Pool, cpu_count
from typing import Any, Callable, Optional

import numpy as np

from . import __version__
from .crossover import (
    find_slope_crossing,
    gamma_crossing,
    local_slopes,
    log_grid,
    powerlaw_fit,
    shift_crossing,
    size_crossing,
)
from .errors import ConfigError, NumericsError, SpinfidError
from .fidelity import fidelity_product
from .models import ExtIsingPath, PathA, PathB, PathC, PathD, PathSpec, resolve_path
from .quench import excitation_density
from .scaling import (
    predict_lnF,
    scaling_A,
    scaling_A_mcp,
    scaling_A_mps,
    scaling_B,
    scaling_dB_dc_near1,
)
from .verify import residual_pathA, residual_pathB

_SCALING_FUNCS: dict[str, Callable[[float], float]] = {
    "A": scaling_A,
    "A_mcp": scaling_A_mcp,
    "A_mps": scaling_A_mps,
    "B": scaling_B,
    "dB_dc_near1": scaling_dB_dc_near1,
}


def _fmt(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "%.17g" % v
    return str(v)


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ConfigError(msg)


def _parse_count_range(text: str, name: str) -> np.ndarray:
    parts = text.split(":")
    _require(len(parts) == 3, f"{name} must be start:stop:count, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"bad {name} {text!r}: {exc}") from None
    _require(n >= 2, f"{name} needs count >= 2")
    return np.linspace(lo, hi, n)


def _parse_step_range(text: str, name: str) -> list[int]:
    parts = text.split(":")
    _require(len(parts) == 3, f"{name} must be start:stop:step, got {text!r}")
    try:
        lo, hi, step = int(parts[0]), int(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"bad {name} {text!r}: {exc}") from None
    _require(0 < lo <= hi and step > 0, f"{name} needs 0 < start <= stop and step > 0")
    return list(range(lo, hi + 1, step))


def _parse_log_range(text: str, name: str, per_decade: int) -> np.ndarray:
    parts = text.split(":")
    _require(len(parts) in (2, 3), f"{name} must be lo:hi or lo:hi:count, got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
        n = int(parts[2]) if len(parts) == 3 else 0
    except ValueError as exc:
        raise ConfigError(f"bad {name} {text!r}: {exc}") from None
    _require(0.0 < lo < hi, f"{name} needs 0 < lo < hi")
    if n >= 3:
        return np.logspace(math.log10(lo), math.log10(hi), n)
    return log_grid(lo, hi, per_decade)


def _parse_float_list(text: str, name: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad {name} {text!r}: {exc}") from None
    _require(len(vals) >= 1, f"{name} is empty")
    return vals


def _even_int(x: Any, name: str) -> int:
    try:
        n = int(x)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be an integer, got {x!r}") from None
    _require(n >= 2 and n % 2 == 0, f"{name} must be even and >= 2, got {n}")
    return n


def build_path_spec(cfg: dict) -> PathSpec:
    """Construct the path from the resolved configuration (validates flags)."""
    path = cfg.get("path")
    _require(path in ("A", "B", "C", "D", "ext"), f"unknown --path {path!r}")
    delta = cfg.get("delta")
    c = cfg.get("c")
    _require(delta is not None, "--delta is required")
    _require(c is not None, "--c is required")
    try:
        if path == "A":
            _require(cfg.get("gamma") is not None, "path A needs --gamma")
            return PathA(gamma=float(cfg["gamma"]), delta=float(delta), c=float(c))
        if path == "B":
            _require(cfg.get("g") is not None, "path B needs --g")
            return PathB(g=float(cfg["g"]), delta=float(delta), c=float(c))
        if path == "C":
            return PathC(delta=float(delta), c=float(c))
        if path == "D":
            _require(cfg.get("alpha") is not None, "path D needs --alpha")
            return PathD(alpha=float(cfg["alpha"]), delta=float(delta), c=float(c))
        return ExtIsingPath(delta=float(delta), c=float(c))
    except SpinfidError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


# ---------------------------------------------------------------------------
# row workers (module level so a fork-based pool can pickle them)

def _fidelity_row(args: tuple[dict, int]) -> dict:
    cfg, N = args
    spec = build_path_spec(cfg)
    p1, p2 = resolve_path(spec)
    res = fidelity_product(p1, p2, N)
    pred = predict_lnF(spec, N)
    return {
        "N": N,
        "lnF": res.lnF,
        "F": res.F,
        "exact_zero": res.exact_zero,
        "pred_lnF_per_site": pred.lnF_per_site,
        "pred_F": math.exp(N * pred.lnF_per_site) if math.isfinite(pred.lnF_per_site) else 0.0,
        "prefactor": pred.prefactor,
        "oscillatory": pred.oscillatory,
        "formula": pred.formula_id,
        "validity": json.dumps(pred.validity, sort_keys=True),
    }


def _scaling_row(args: tuple[str, float]) -> dict:
    fname, c = args
    return {"c": c, "value": _SCALING_FUNCS[fname](c)}


def _quench_row(args: tuple[dict, float]) -> dict:
    cfg, c = args
    res = excitation_density(float(cfg["gamma"]), float(cfg["delta"]), c,
                             int(cfg["N"]), with_integral=not cfg.get("no_integral", False))
    row = {
        "c": c,
        "n_ex": res.n_ex,
        "n_ex_integral": res.n_ex_integral if res.n_ex_integral is not None else float("nan"),
        "nex_over_delta": res.n_ex / abs(float(cfg["delta"])),
        "B_c": scaling_B(c),
        "survival": res.survival,
    }
    return row


def _verify_row(args: tuple[dict, float]) -> dict:
    cfg, c = args
    if cfg["which"] == "pathA":
        s = residual_pathA(float(cfg["gamma"]), float(cfg["delta"]), c)
        return {"gamma": s.gamma, "delta": s.delta, "c": s.c, "E": s.E,
                "normalized": s.normalized}
    s = residual_pathB(float(cfg["g"]), float(cfg["delta"]), c)
    return {"g": s.g, "delta": s.delta, "c": s.c, "E": s.E, "normalized": s.normalized}


def _crossover_point(args: tuple[dict, float]) -> dict:
    """One crossing for one fixed value: N for gamma/delta scans, delta for N scans."""
    cfg, v = args
    scan = cfg["scan"]
    grid = cfg["_grid"]
    target = float(cfg["target"])
    if scan == "gamma":
        n = max(2, int(round(v / 2.0)) * 2)
        cr = gamma_crossing(n, float(cfg["delta"]), float(cfg["c"]), grid, target=target)
        v = n
    elif scan == "N":
        cr = size_crossing(float(v), float(cfg["c"]), grid,
                           alpha=float(cfg["alpha"]), target=target)
    else:
        n = max(2, int(round(v / 2.0)) * 2)
        cr = shift_crossing(n, float(cfg["c"]), grid,
                            alpha=float(cfg["alpha"]), target=target)
        v = n
    return {"sweep_value": float(v), "crossing": cr.x, "multiple": cr.multiple}


def _map_ordered(fn: Callable, tasks: list, parallelism: int) -> list:
    if parallelism == 0:
        parallelism = cpu_count()
    if parallelism <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with Pool(processes=min(parallelism, len(tasks))) as pool:
        return pool.map(fn, tasks)


# ---------------------------------------------------------------------------
# commands

def _cmd_fidelity(cfg: dict) -> tuple[list[dict], dict]:
    N = _even_int(cfg.get("N"), "--N")
    rows = [_fidelity_row((cfg, N))]
    return rows, {}


def _cmd_sweep(cfg: dict) -> tuple[list[dict], dict]:
    _require(cfg.get("N_range") is not None, "sweep needs --N-range start:stop:step")
    Ns = [n for n in _parse_step_range(cfg["N_range"], "--N-range") if n % 2 == 0]
    _require(len(Ns) >= 1, "--N-range contains no even sizes")
    build_path_spec(cfg)  # validate once before dispatch
    rows = _map_ordered(_fidelity_row, [(cfg, n) for n in Ns], cfg["parallelism"])
    return rows, {}


def _cmd_scaling(cfg: dict) -> tuple[list[dict], dict]:
    fname = cfg.get("function")
    _require(fname in _SCALING_FUNCS, f"--function must be one of {sorted(_SCALING_FUNCS)}")
    _require(cfg.get("c_range") is not None, "scaling needs --c-range start:stop:count")
    cs = _parse_count_range(cfg["c_range"], "--c-range")
    rows = _map_ordered(_scaling_row, [(fname, float(c)) for c in cs], cfg["parallelism"])
    return rows, {}


def _cmd_quench(cfg: dict) -> tuple[list[dict], dict]:
    for key in ("gamma", "delta", "N"):
        _require(cfg.get(key) is not None, f"quench needs --{key}")
    _even_int(cfg["N"], "--N")
    if cfg.get("c_range"):
        cs = [float(c) for c in _parse_count_range(cfg["c_range"], "--c-range")]
    else:
        _require(cfg.get("c") is not None, "quench needs --c or --c-range")
        cs = [float(cfg["c"])]
    rows = _map_ordered(_quench_row, [(cfg, c) for c in cs], cfg["parallelism"])
    return rows, {}


def _cmd_verify(cfg: dict) -> tuple[list[dict], dict]:
    which = cfg.get("which")
    _require(which in ("pathA", "pathB"), "--which must be pathA or pathB")
    _require(cfg.get("delta") is not None, "verify needs --delta")
    if which == "pathA":
        _require(cfg.get("gamma") is not None, "verify pathA needs --gamma")
    else:
        _require(cfg.get("g") is not None, "verify pathB needs --g")
    _require(cfg.get("c_range") is not None, "verify needs --c-range start:stop:count")
    cs = [float(c) for c in _parse_count_range(cfg["c_range"], "--c-range")]
    rows = _map_ordered(_verify_row, [(cfg, c) for c in cs], cfg["parallelism"])
    return rows, {}


def _cmd_crossover(cfg: dict) -> tuple[list[dict], dict]:
    scan = cfg.get("scan")
    _require(scan in ("gamma", "N", "delta"), "--scan must be gamma, N, or delta")
    _require(cfg.get("range") is not None, "crossover needs --range lo:hi[:count]")
    per_dec = int(cfg.get("per_decade") or 20)
    grid = _parse_log_range(cfg["range"], "--range", per_dec)
    _require(cfg.get("c") is not None, "crossover needs --c")
    target = float(cfg.get("target") if cfg.get("target") is not None
                   else (1.75 if scan == "delta" else 1.5))
    cfg = dict(cfg)
    cfg["target"] = target
    cfg["_grid"] = [float(v) for v in grid]
    if scan in ("N", "delta"):
        _require(cfg.get("alpha") is not None, f"--scan {scan} needs --alpha")

    sweep_list = cfg.get("sweep_list")
    if sweep_list:
        if scan == "gamma":
            _require(cfg.get("delta") is not None, "--scan gamma needs --delta")
        vals = _parse_float_list(sweep_list, "--sweep-list")
        rows = _map_ordered(_crossover_point, [(cfg, v) for v in vals], cfg["parallelism"])
        extras: dict = {"target": target}
        if len(rows) >= 3:
            fit = powerlaw_fit([(r["sweep_value"], r["crossing"]) for r in rows])
            extras["fit"] = {"intercept": fit.intercept, "slope": fit.slope,
                             "intercept_se": fit.intercept_se, "slope_se": fit.slope_se,
                             "n_points": fit.n_points}
        return rows, extras

    # single sweep: emit the slope curve itself
    if scan == "gamma":
        _require(cfg.get("N") is not None and cfg.get("delta") is not None,
                 "--scan gamma needs --N and --delta")
        N = _even_int(cfg["N"], "--N")
        spec_of = lambda v: PathA(float(v), float(cfg["delta"]), float(cfg["c"]))
        ys = [-fidelity_product(*resolve_path(spec_of(v)), N).lnF for v in grid]
        curve = local_slopes(1.0 / grid[::-1], np.asarray(ys)[::-1])
        rows = [{"gamma": float(g), "minus_lnF": float(y), "slope": float(s)}
                for g, y, s in zip(grid, ys, curve.s[::-1])]
    elif scan == "N":
        _require(cfg.get("delta") is not None, "--scan N needs --delta")
        p1, p2 = resolve_path(PathD(float(cfg["alpha"]), float(cfg["delta"]), float(cfg["c"])))
        Ns = sorted({max(2, int(round(v / 2.0)) * 2) for v in grid})
        ys = [-fidelity_product(p1, p2, n).lnF for n in Ns]
        curve = local_slopes(np.asarray(Ns, dtype=float), np.asarray(ys))
        rows = [{"N": int(n), "minus_lnF": float(y), "slope": float(s)}
                for n, y, s in zip(Ns, ys, curve.s)]
    else:
        _require(cfg.get("N") is not None, "--scan delta needs --N")
        N = _even_int(cfg["N"], "--N")
        ys = [-fidelity_product(*resolve_path(
            PathD(float(cfg["alpha"]), float(v), float(cfg["c"]))), N).lnF for v in grid]
        curve = local_slopes(grid, np.asarray(ys))
        rows = [{"delta": float(v), "minus_lnF": float(y), "slope": float(s)}
                for v, y, s in zip(grid, ys, curve.s)]
    extras = {"target": target}
    try:
        cr = find_slope_crossing(curve, target)
        extras["crossing_ln"] = cr.x
        extras["crossing"] = math.exp(cr.x) if scan != "gamma" else math.exp(-cr.x)
        extras["crossing_multiple"] = cr.multiple
    except SpinfidError:
        extras["crossing"] = None
    return rows, extras


_COMMANDS = {
    "fidelity": _cmd_fidelity,
    "sweep": _cmd_sweep,
    "scaling": _cmd_scaling,
    "crossover": _cmd_crossover,
    "quench": _cmd_quench,
    "verify": _cmd_verify,
}


# ---------------------------------------------------------------------------
# output

def _emit_csv(rows: list[dict], config: dict, manifest: dict) -> str:
    lines = [f"# manifest: {json.dumps(manifest, sort_keys=True)}",
             f"# config: {json.dumps(config, sort_keys=True)}"]
    if rows:
        cols = list(rows[0].keys())
        lines.append(",".join(cols))
        for r in rows:
            lines.append(",".join(_fmt(r.get(cn)) for cn in cols))
    return "\n".join(lines) + "\n"


def _emit_json(rows: list[dict], config: dict, manifest: dict) -> str:
    return json.dumps({"config": config, "manifest": manifest, "rows": rows},
                      sort_keys=False, indent=1) + "\n"


def _public_config(cfg: dict) -> dict:
    return {k: v for k, v in sorted(cfg.items())
            if not k.startswith("_") and v is not None and k not in ("output", "config")}


def run(cfg: dict) -> tuple[str, int]:
    """Execute one resolved configuration; returns (artifact text, exit code)."""
    command = cfg.get("command")
    _require(command in _COMMANDS, f"unknown command {command!r}")
    par = cfg.get("parallelism")
    par = 1 if par is None else int(par)
    _require(par >= 0, "--parallelism must be >= 0")
    cfg = dict(cfg)
    cfg["parallelism"] = par
    t0 = time.perf_counter()
    rows, extras = _COMMANDS[command](cfg)
    wall = time.perf_counter() - t0
    manifest = {
        "tool": "spinfid",
        "version": __version__,
        "created_utc": datetime.now(timezone.utc).isoformat(),
        "wall_time_s": wall,
    }
    if extras:
        manifest["result"] = extras
    config = _public_config(cfg)
    text = (_emit_json if cfg.get("format") == "json" else _emit_csv)(rows, config, manifest)
    return text, 0


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spinfid",
                                 description="Ground-state fidelity of free-fermion spin chains")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--output", help="output file (default stdout)")
        p.add_argument("--format", choices=["csv", "json"], default=None)
        p.add_argument("--config", help="JSON config file; explicit flags win")
        p.add_argument("--parallelism", type=int, default=None,
                       help="worker processes for grid points (0 = auto, default 1)")

    def path_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--path", choices=["A", "B", "C", "D", "ext"])
        p.add_argument("--gamma", type=float)
        p.add_argument("--g", type=float)
        p.add_argument("--alpha", type=float)
        p.add_argument("--delta", type=float)
        p.add_argument("--c", type=float)

    p = sub.add_parser("fidelity", help="exact fidelity and prediction at one size")
    common(p); path_flags(p)
    p.add_argument("--N", type=int)

    p = sub.add_parser("sweep", help="exact vs predicted fidelity over a size range")
    common(p); path_flags(p)
    p.add_argument("--N-range", dest="N_range", help="start:stop:step (even sizes kept)")

    p = sub.add_parser("scaling", help="tabulate a scaling function")
    common(p)
    p.add_argument("--function", choices=sorted(_SCALING_FUNCS))
    p.add_argument("--c-range", dest="c_range", help="start:stop:count")

    p = sub.add_parser("crossover", help="slope curves and crossover scales")
    common(p)
    p.add_argument("--scan", choices=["gamma", "N", "delta"])
    p.add_argument("--range", help="lo:hi[:count] log grid for the scanned variable")
    p.add_argument("--per-decade", dest="per_decade", type=int)
    p.add_argument("--target", type=float)
    p.add_argument("--sweep-list", dest="sweep_list",
                   help="comma list of fixed values (N for gamma/delta scans, delta for N scans); "
                        "emits crossing per value plus a power-law fit")
    p.add_argument("--N", type=int)
    p.add_argument("--N-fixed", dest="N_fixed", type=int)
    p.add_argument("--delta", type=float)
    p.add_argument("--delta-fixed", dest="delta_fixed", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--c", type=float)

    p = sub.add_parser("quench", help="excitation density after a sudden shift")
    common(p)
    p.add_argument("--gamma", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--c", type=float)
    p.add_argument("--c-range", dest="c_range")
    p.add_argument("--N", type=int)
    p.add_argument("--no-integral", dest="no_integral", action="store_true", default=None)

    p = sub.add_parser("verify", help="residuals of the closed-form rates")
    common(p)
    p.add_argument("--which", choices=["pathA", "pathB"])
    p.add_argument("--gamma", type=float)
    p.add_argument("--g", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--c-range", dest="c_range")

    return ap


def _resolve_config(args: argparse.Namespace) -> dict:
    cfg: dict = {}
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                loaded = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from None
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a JSON object")
        cfg.update(loaded)
    for k, v in vars(args).items():
        if v is not None:
            cfg[k] = v
    cfg.setdefault("format", "csv")
    cfg["command"] = args.command
    return cfg


_VALUE_FLAGS = {"--c-range", "--range", "--sweep-list", "--c", "--delta", "--g", "--gamma",
                "--alpha", "--target"}


def _preprocess_argv(argv: list[str]) -> list[str]:
    """Join flag/value pairs whose value starts with '-' (ranges like -3:3:601)."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv: Optional[list[str]] = None) -> int:
    ap = _build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = ap.parse_args(_preprocess_argv(list(argv)))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _resolve_config(args)
        text, code = run(cfg)
    except ConfigError as exc:
        print(f"spinfid: invalid configuration: {exc}", file=sys.stderr)
        return 2
    except NumericsError as exc:
        print(f"spinfid: numerical failure: {exc}", file=sys.stderr)
        return 3
    except SpinfidError as exc:
        print(f"spinfid: invalid configuration: {exc}", file=sys.stderr)
        return 2
    out = cfg.get("output")
    try:
        if out:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"spinfid: cannot write output: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
