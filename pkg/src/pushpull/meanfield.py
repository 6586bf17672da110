"""Scalar mean-field equations for stable push/pull spreading.

Two self-consistency equations are solved on ``[0, 1]``:

* degree-conditioned rate: ``beta x = [1 - (1-alpha)(1 - gamma x)^k] (1 - x)``
* global rate:             ``beta x = [1 - (1-alpha) exp(-<k> gamma x)] (1 - x)``

Both are solved by a uniform grid scan followed by bisection on every sign
change; the smallest root is returned and the number of roots found is kept so
that multi-root cases stay visible.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .dynamics import EpidemicParams
from .errors import DomainError, ParameterError
from .graph import Graph

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-12
GRID_STEP = 1e-3
# gamma * <k> above this is outside the small-coupling regime the global equation assumes
SMALLNESS_THRESHOLD = 0.1


@dataclass(frozen=True)
class RootResult:
    value: float
    roots_found: int
    residual: float


@dataclass(frozen=True)
class DegreeRateProfile:
    rates: dict[int, float]
    counts: dict[int, int]
    roots_found: dict[int, int]
    params: EpidemicParams
    monotone_violations: list[int] = field(default_factory=list)

    def rows(self):
        for k in sorted(self.rates):
            yield k, self.counts.get(k, 0), self.rates[k]


@dataclass(frozen=True)
class GlobalMeanField:
    ibar: float
    avg_degree: float
    roots_found: int
    residual: float


def _bisect(f: Callable[[float], float], lo: float, hi: float, flo: float, tol: float) -> float:
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0 or abs(fm) <= tol or hi - lo <= 4e-16:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def scan_roots(f: Callable[[float], float], tol: float = DEFAULT_TOL, step: float = GRID_STEP) -> list[float]:
    """All roots of ``f`` on ``[0, 1]`` visible on a grid of spacing ``step``."""
    npts = int(round(1.0 / step)) + 1
    xs = np.linspace(0.0, 1.0, npts)
    fs = np.array([f(x) for x in xs])
    roots = []
    for j in range(npts):
        if fs[j] == 0.0:
            roots.append(float(xs[j]))
        elif j + 1 < npts and fs[j + 1] != 0.0 and (fs[j] > 0) != (fs[j + 1] > 0):
            roots.append(_bisect(f, xs[j], xs[j + 1], fs[j], tol))
    return roots


def degree_rate_residual(x: float, k: float, p: EpidemicParams) -> float:
    # (1 - gamma x)^k in log space so that very large k cannot underflow badly
    surv = math.exp(k * math.log1p(-p.gamma * x)) if p.gamma * x < 1.0 else (1.0 if k == 0 else 0.0)
    return (1.0 - (1.0 - p.alpha) * surv) * (1.0 - x) - p.beta * x


def global_rate_residual(x: float, avg_k: float, p: EpidemicParams) -> float:
    return (1.0 - (1.0 - p.alpha) * math.exp(-avg_k * p.gamma * x)) * (1.0 - x) - p.beta * x


def _solve(f, p, tol, step):
    if p.alpha == 0.0 and p.beta == 0.0:
        raise DomainError("alpha = beta = 0 leaves the equation degenerate; give alpha > 0 or beta > 0")
    if tol <= 0:
        raise ParameterError("tol must be positive")
    roots = scan_roots(f, tol, step)
    if not roots:
        raise DomainError("no root found on [0, 1]")  # unreachable for valid params: f(0) >= 0 >= f(1)
    x = roots[0]
    return RootResult(x, len(roots), abs(f(x)))


def solve_degree_rate(k: int, p: EpidemicParams, tol: float = DEFAULT_TOL, step: float = GRID_STEP) -> RootResult:
    """Infection probability of a degree-``k`` node when its neighbours share its rate."""
    if k < 0:
        raise ParameterError("degree must be nonnegative")
    return _solve(lambda x: degree_rate_residual(x, k, p), p, tol, step)


def degree_profile(g: Graph, p: EpidemicParams, tol: float = DEFAULT_TOL, step: float = GRID_STEP) -> DegreeRateProfile:
    """Solve the degree-conditioned equation for every degree present in ``g``."""
    hist = np.bincount(g.degree)
    rates, counts, nroots = {}, {}, {}
    for k in np.nonzero(hist)[0].tolist():
        r = solve_degree_rate(k, p, tol, step)
        rates[k], counts[k], nroots[k] = r.value, int(hist[k]), r.roots_found
    ks = sorted(rates)
    violations = [k2 for k1, k2 in zip(ks, ks[1:]) if rates[k2] < rates[k1] - 10 * tol]
    if violations:
        log.warning("degree rate decreases at degrees %s", violations)
    return DegreeRateProfile(rates, counts, nroots, p, violations)


def solve_global_rate(avg_k: float, p: EpidemicParams, tol: float = DEFAULT_TOL,
                      step: float = GRID_STEP) -> GlobalMeanField:
    """Global mean infection rate of the exponential mean-field equation."""
    if avg_k < 0:
        raise ParameterError("average degree must be nonnegative")
    r = _solve(lambda x: global_rate_residual(x, avg_k, p), p, tol, step)
    return GlobalMeanField(r.value, float(avg_k), r.roots_found, r.residual)


def coupling_is_small(avg_k: float, gamma: float, threshold: float = SMALLNESS_THRESHOLD) -> bool:
    return gamma * avg_k <= threshold


def degree_means(g: Graph, node_values: np.ndarray) -> dict[int, float]:
    """Mean of ``node_values`` over each degree class of ``g``."""
    deg = g.degree
    sums = np.bincount(deg, weights=np.asarray(node_values, dtype=np.float64))
    counts = np.bincount(deg)
    return {int(k): float(sums[k] / counts[k]) for k in np.nonzero(counts)[0]}
