"""Crossover location by slope analysis of ln(-ln F) curves, plus power-law fits.

The small-system to thermodynamic crossover shows up as the local log-log
slope of -ln F drifting between two integer/half-integer plateaus (2 -> 1
against the inverse anisotropy, 2 -> 3/2 against the parameter shift near the
multicritical corner).  The crossover scale is read off as the abscissa where
the slope passes a half-way target, and the scales collected over a family of
sweeps are fitted to a power law on log-log axes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError
from .fidelity import fidelity_product
from .models import PathA, PathD, resolve_path


@dataclass(frozen=True)
class SlopeCurve:
    """Local slope s(x) of ln y against x = ln(abscissa), x strictly increasing."""
    x: np.ndarray
    s: np.ndarray

    def __post_init__(self):
        if np.any(np.diff(self.x) <= 0.0):
            raise DomainError("slope curve abscissa must be strictly increasing")
        if not (np.all(np.isfinite(self.x)) and np.all(np.isfinite(self.s))):
            raise DomainError("slope curve entries must be finite")


@dataclass(frozen=True)
class Crossing:
    """First slope crossing; multiple flags further crossings (noise near plateaus)."""
    x: float
    multiple: bool


@dataclass(frozen=True)
class PowerLawFit:
    """OLS fit ln y = intercept + slope ln x with standard errors."""
    intercept: float
    slope: float
    intercept_se: float
    slope_se: float
    n_points: int


def local_slopes(xs: Sequence[float], ys: Sequence[float]) -> SlopeCurve:
    """Centered finite-difference slopes of ln y vs ln x; one-sided at the ends.

    xs must be strictly monotone (either direction) and ys positive; a
    decreasing sweep is flipped so the returned curve has increasing x.
    """
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.size < 3:
        raise DomainError("need at least 3 points for local slopes")
    if np.any(ys <= 0.0) or np.any(xs <= 0.0):
        raise DomainError("slopes are defined for positive xs and ys")
    d = np.diff(xs)
    if np.all(d < 0.0):
        xs, ys = xs[::-1], ys[::-1]
    elif not np.all(d > 0.0):
        raise DomainError("xs must be strictly monotone")
    lx = np.log(xs)
    ly = np.log(ys)
    s = np.empty_like(lx)
    s[1:-1] = (ly[2:] - ly[:-2]) / (lx[2:] - lx[:-2])
    s[0] = (ly[1] - ly[0]) / (lx[1] - lx[0])
    s[-1] = (ly[-1] - ly[-2]) / (lx[-1] - lx[-2])
    return SlopeCurve(x=lx, s=s)


def find_slope_crossing(curve: SlopeCurve, target: float) -> Crossing:
    """Linear-interpolated abscissa of the first s = target crossing."""
    x, s = curve.x, curve.s
    hits = []
    for i in range(s.size - 1):
        d0, d1 = s[i] - target, s[i + 1] - target
        if d0 == 0.0:
            hits.append(x[i])
        elif d0 * d1 < 0.0:
            hits.append(x[i] + d0 / (d0 - d1) * (x[i + 1] - x[i]))
    if s[-1] == target:
        hits.append(x[-1])
    if not hits:
        raise DomainError(f"slope curve never crosses target {target}")
    return Crossing(x=float(hits[0]), multiple=len(hits) > 1)


def powerlaw_fit(points: Sequence[tuple[float, float]]) -> PowerLawFit:
    """Ordinary least squares on (ln x, ln y) with residual-variance standard errors."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 3:
        raise DomainError("need at least 3 (x, y) pairs")
    if np.any(pts <= 0.0):
        raise DomainError("power-law fit needs positive coordinates")
    lx = np.log(pts[:, 0])
    ly = np.log(pts[:, 1])
    n = lx.size
    mx = lx.mean()
    sxx = float(np.sum((lx - mx) ** 2))
    if sxx == 0.0:
        raise DomainError("degenerate abscissas: all x equal")
    slope = float(np.sum((lx - mx) * (ly - ly.mean())) / sxx)
    intercept = float(ly.mean() - slope * mx)
    resid = ly - (intercept + slope * lx)
    s2 = float(np.sum(resid ** 2)) / (n - 2) if n > 2 else 0.0
    slope_se = math.sqrt(s2 / sxx)
    intercept_se = math.sqrt(s2 * (1.0 / n + mx * mx / sxx))
    return PowerLawFit(intercept=intercept, slope=slope,
                       intercept_se=intercept_se, slope_se=slope_se, n_points=n)


def log_grid(lo: float, hi: float, per_decade: int = 20) -> np.ndarray:
    """Log-uniform grid, the default sweep resolution for slope analysis."""
    if not 0.0 < lo < hi:
        raise DomainError("need 0 < lo < hi")
    n = max(3, int(round(math.log10(hi / lo) * per_decade)) + 1)
    return np.logspace(math.log10(lo), math.log10(hi), n)


def _even(n: float) -> int:
    return max(2, int(round(n / 2.0)) * 2)


def gamma_crossing(N: int, delta: float, c: float, gammas: Sequence[float],
                   target: float = 1.5) -> Crossing:
    """Anisotropy at which the ln(-ln F) slope vs 1/gamma passes the target.

    Sweeps the Ising crossing at fixed (N, delta, c) over gammas; the slope is
    taken against x = 1/gamma so the small-system plateau reads 2 and the
    thermodynamic one reads 1.  Returns the crossing as gamma (not ln).
    """
    gammas = np.sort(np.asarray(gammas, dtype=np.float64))
    y = [-fidelity_product(*resolve_path(PathA(g, delta, c)), N).lnF for g in gammas]
    curve = local_slopes(1.0 / gammas[::-1], np.asarray(y)[::-1])
    cr = find_slope_crossing(curve, target)
    return Crossing(x=math.exp(-cr.x), multiple=cr.multiple)


def size_crossing(delta: float, c: float, Ns: Sequence[float], alpha: float = 1.0,
                  target: float = 1.5) -> Crossing:
    """System size at which the slope of ln(-ln F) vs ln N passes the target.

    Multicritical approach at fixed (delta, c); sizes are rounded to even.
    """
    Ns = np.asarray([_even(n) for n in Ns], dtype=np.float64)
    p1, p2 = resolve_path(PathD(alpha, delta, c))
    y = [-fidelity_product(p1, p2, int(n)).lnF for n in Ns]
    cr = find_slope_crossing(local_slopes(Ns, y), target)
    return Crossing(x=math.exp(cr.x), multiple=cr.multiple)


def shift_crossing(N: int, c: float, deltas: Sequence[float], alpha: float = 1.0,
                   target: float = 1.75) -> Crossing:
    """Parameter shift at which the slope of ln(-ln F) vs ln delta passes the target."""
    deltas = np.sort(np.asarray(deltas, dtype=np.float64))
    y = [-fidelity_product(*resolve_path(PathD(alpha, d, c)), N).lnF for d in deltas]
    cr = find_slope_crossing(local_slopes(deltas, y), target)
    return Crossing(x=math.exp(cr.x), multiple=cr.multiple)
