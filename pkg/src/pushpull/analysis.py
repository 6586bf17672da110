"""Sufficient stability conditions, per-node infection bounds and the scalar
comparison map used to show the conditions are not necessary.

Every verdict is one-sided: a condition can certify stability (or die-out) but
its failure never certifies the opposite, so there is no "unstable" verdict.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .dynamics import DEFAULT_EQ_MAX_ITER, DEFAULT_EQ_TOL, EpidemicParams, find_equilibrium
from .errors import DomainError, ParameterError
from .graph import Graph
from .spectral import DEFAULT_MAX_ITER, DEFAULT_TOL, spectral_radius, stability_matrix_radius

STABLE = "stable"
INCONCLUSIVE = "inconclusive"
DIES_OUT = "dies_out"
NO_EQUILIBRIUM = "equilibrium_not_found"
LOW_BETA = "low_beta"
HIGH_BETA = "high_beta"
NOT_APPLICABLE = "not_applicable"


@dataclass
class StabilityReport:
    lambda1: float
    max_degree: int
    psi: float
    case_branch: str
    succinct_bound: float
    succinct_verdict: str
    general_radius: float | None = None
    general_verdict: str | None = None
    dieout_verdict: str | None = None
    params: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        for key in ("succinct_bound", "general_radius"):
            if isinstance(d[key], float) and not np.isfinite(d[key]):
                d[key] = "inf" if d[key] > 0 else None
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


@dataclass
class SuccinctResult:
    psi: float
    case_branch: str
    bound: float
    verdict: str


@dataclass
class GeneralResult:
    radius: float | None
    verdict: str
    equilibrium: object = None


def check_dieout_threshold(lambda1: float, p: EpidemicParams) -> str:
    """Push-only die-out check: ``lambda1 < beta / gamma``."""
    if p.alpha != 0.0:
        raise DomainError("the die-out condition only applies when alpha == 0")
    if p.gamma == 0.0:
        return DIES_OUT if p.beta > 0.0 else INCONCLUSIVE
    return DIES_OUT if lambda1 < p.beta / p.gamma else INCONCLUSIVE


def psi_value(p: EpidemicParams, m: int) -> float:
    q = (1.0 - p.alpha) * (1.0 - p.gamma) ** m
    return max(abs(1.0 - p.alpha - p.beta), abs(q - p.beta))


def check_succinct_threshold(lambda1: float, m: int, p: EpidemicParams) -> SuccinctResult:
    """Stability certificate ``psi + gamma(1-alpha) lambda1 < 1`` using only
    the spectral radius and the maximum degree ``m``."""
    if m < 0:
        raise ParameterError("max degree must be nonnegative")
    a, b, c = p.alpha, p.beta, p.gamma
    q = (1.0 - a) * (1.0 - c) ** m
    psi = psi_value(p, m)
    coupling = c * (1.0 - a)
    branch = LOW_BETA if b < (1.0 - a) * (1.0 + (1.0 - c) ** m) / 2.0 else HIGH_BETA
    if coupling == 0.0:
        bound = float("inf") if psi < 1.0 else float("-inf")
        stable = psi < 1.0
    else:
        bound = (a + b) / coupling if branch == LOW_BETA else (1.0 - b + q) / coupling
        # both forms are algebraically equal; requiring both keeps the verdict
        # conservative when rounding lands exactly on the boundary
        stable = (psi + coupling * lambda1 < 1.0) and (lambda1 < bound)
    return SuccinctResult(psi, branch, bound, STABLE if stable else INCONCLUSIVE)


def check_general_threshold(g: Graph, p: EpidemicParams, eq_tol: float = DEFAULT_EQ_TOL,
                            eq_max_iter: int = DEFAULT_EQ_MAX_ITER, tol: float = DEFAULT_TOL,
                            max_iter: int = DEFAULT_MAX_ITER, i0=None) -> GeneralResult:
    """Equilibrium-based certificate ``lambda_max(H + gamma(1-alpha)A) < 1``.

    The equilibrium is searched from ``i0`` (all zeros by default).
    """
    eq = find_equilibrium(g, p, i0, tol=eq_tol, max_iter=eq_max_iter)
    if not eq.converged:
        return GeneralResult(None, NO_EQUILIBRIUM, eq)
    est = stability_matrix_radius(g, p, eq, tol=tol, max_iter=max_iter)
    verdict = STABLE if est.converged and est.value < 1.0 else INCONCLUSIVE
    return GeneralResult(est.value, verdict, eq)


def analyze(g: Graph, p: EpidemicParams, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
            eq_tol: float = DEFAULT_EQ_TOL, eq_max_iter: int = DEFAULT_EQ_MAX_ITER) -> StabilityReport:
    """Run every applicable checker and collect a :class:`StabilityReport`."""
    lam = spectral_radius(g, tol=tol, max_iter=max_iter)
    m = int(g.degree.max())
    succ = check_succinct_threshold(lam.value, m, p)
    gen = check_general_threshold(g, p, eq_tol, eq_max_iter, tol, max_iter)
    notes = []
    if lam.note:
        notes.append(lam.note)
    if not lam.converged:
        notes.append(f"spectral radius did not converge (residual {lam.residual:.3g})")
    return StabilityReport(
        lambda1=lam.value,
        max_degree=m,
        psi=succ.psi,
        case_branch=succ.case_branch,
        succinct_bound=succ.bound,
        succinct_verdict=succ.verdict,
        general_radius=gen.radius,
        general_verdict=gen.verdict,
        dieout_verdict=check_dieout_threshold(lam.value, p) if p.alpha == 0.0 else None,
        params=p.to_dict(),
        notes=notes,
    )


@dataclass(frozen=True, eq=False)
class BoundsProfile:
    theta_plus: np.ndarray
    theta_minus: np.ndarray
    nu: float
    degree: np.ndarray

    def rows(self):
        for v, (d, lo, hi) in enumerate(zip(self.degree.tolist(), self.theta_minus.tolist(),
                                            self.theta_plus.tolist())):
            yield v, d, lo, hi

    def averages(self) -> tuple[float, float]:
        return float(self.theta_minus.mean()), float(self.theta_plus.mean())


def degree_bounds(deg, p: EpidemicParams) -> tuple[np.ndarray, np.ndarray, float]:
    """``(theta_minus, theta_plus, nu)`` for an array of (in-)degrees."""
    deg = np.asarray(deg, dtype=np.float64)
    a, b, c = p.alpha, p.beta, p.gamma
    nu = p.nu

    def one_minus_q(rate):
        # 1 - (1-a)(1-rate)^deg without cancellation when the product is close to 1
        with np.errstate(divide="ignore"):
            log_q = np.log1p(-a) + deg * np.log1p(-rate) if rate < 1.0 else np.where(deg > 0, -np.inf, np.log1p(-a))
        return -np.expm1(log_q)

    omq_hi = one_minus_q(c)
    omq_lo = one_minus_q(c * nu)
    with np.errstate(divide="ignore", invalid="ignore"):
        # 0/0 only when alpha = beta = 0 and no push pressure: nothing moves, so [0, 1] is all we know
        theta_plus = np.where(omq_hi + b > 0.0, omq_hi / np.minimum(b + omq_hi, 1.0), 1.0)
        branch1 = np.where(omq_lo + b > 0.0, omq_lo / (b + omq_lo), 0.0)
    q_lo = 1.0 - omq_lo
    branch2 = (q_lo - b) * theta_plus + omq_lo
    theta_minus = np.clip(np.where(q_lo >= b, branch1, branch2), 0.0, 1.0)
    return theta_minus, theta_plus, nu


def infection_bounds(g: Graph, p: EpidemicParams) -> BoundsProfile:
    """Per-node limits ``theta_minus <= liminf i_v(t)`` and ``limsup i_v(t) <= theta_plus``,
    valid whether or not the dynamics are stable."""
    lo, hi, nu = degree_bounds(g.degree, p)
    return BoundsProfile(hi, lo, nu, g.degree.copy())


@dataclass(frozen=True, eq=False)
class ScalarSeries:
    values: np.ndarray


def scalar_comparison_trajectory(gamma: float, x0: float, T: int) -> ScalarSeries:
    """Iterate ``x <- x - gamma x^2`` for ``T`` steps (``T + 1`` values).

    The map has derivative 1 at its only fixed point 0, yet every orbit from
    ``[0, 1]`` decays to 0 when ``0 < gamma < 1/2``.
    """
    if not 0.0 < gamma < 0.5:
        raise DomainError("gamma must satisfy 0 < gamma < 1/2")
    if not 0.0 <= x0 <= 1.0:
        raise DomainError("x0 must lie in [0, 1]")
    if T < 0:
        raise ParameterError("T must be nonnegative")
    out = np.empty(T + 1)
    x = float(x0)
    out[0] = x
    for t in range(1, T + 1):
        x = x - gamma * x * x
        out[t] = x
    return ScalarSeries(out)
