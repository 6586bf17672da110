"""Push/pull SIS dynamics: the deterministic master equation, its fixed point,
and a stochastic simulator of the per-node two-state machine."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError, PreconditionError
from .graph import Graph

DEFAULT_EQ_TOL = 1e-10
DEFAULT_EQ_MAX_ITER = 100_000
DEFAULT_BURN_IN = 10


@dataclass(frozen=True)
class EpidemicParams:
    """Per-step probabilities: pull infection ``alpha``, cure ``beta``,
    push infection per infected in-neighbour ``gamma``."""

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            val = getattr(self, name)
            if not (isinstance(val, (int, float)) and 0.0 <= float(val) <= 1.0):
                raise ParameterError(f"{name}={val!r} is not a probability in [0, 1]")
            object.__setattr__(self, name, float(val))

    @property
    def nu(self) -> float:
        return min(1.0 - self.beta, self.alpha)

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "beta": self.beta, "gamma": self.gamma}


@dataclass(frozen=True, eq=False)
class InfectionProfile:
    i: np.ndarray
    t: int = 0

    def __post_init__(self):
        arr = np.asarray(self.i, dtype=np.float64)
        object.__setattr__(self, "i", arr)

    @classmethod
    def uniform(cls, n: int, value: float, t: int = 0) -> "InfectionProfile":
        return cls(np.full(n, float(value)), t)

    @property
    def s(self) -> np.ndarray:
        return 1.0 - self.i

    @property
    def mean(self) -> float:
        return float(self.i.mean())


@dataclass(frozen=True, eq=False)
class StepDetail:
    delta: np.ndarray


@dataclass(frozen=True, eq=False)
class Trajectory:
    ibar: np.ndarray
    profiles: np.ndarray | None = None
    details: list[StepDetail] | None = None

    @property
    def steps(self) -> int:
        return len(self.ibar) - 1

    @property
    def final(self) -> np.ndarray | None:
        return None if self.profiles is None else self.profiles[-1]


@dataclass(frozen=True, eq=False)
class Equilibrium:
    i_star: np.ndarray
    residual: float
    iterations: int
    converged: bool
    tol: float = DEFAULT_EQ_TOL

    @property
    def mean(self) -> float:
        return float(self.i_star.mean())


def _validate_profile(g: Graph, i: np.ndarray) -> np.ndarray:
    i = np.asarray(i, dtype=np.float64)
    if i.shape != (g.n,):
        raise PreconditionError(f"profile has shape {i.shape}, expected ({g.n},)")
    if not np.all((i >= 0.0) & (i <= 1.0)):
        raise PreconditionError("infection probabilities must lie in [0, 1]")
    return i


def _log_survival(g: Graph, gamma: float, i: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        logs = np.log1p(-gamma * i)
    return g.adj.dot(logs)


def push_survival(g: Graph, gamma: float, i: np.ndarray) -> np.ndarray:
    """``prod_{(u,v) in E} (1 - gamma * i_u)`` for every node ``v``.

    Evaluated as ``exp(A @ log1p(-gamma * i))``; an empty product is 1.
    """
    if gamma == 0.0:
        return np.ones(g.n)
    return np.exp(_log_survival(g, gamma, i))


def push_infection(g: Graph, gamma: float, i: np.ndarray) -> np.ndarray:
    """``1 - prod (1 - gamma * i_u)``, the chance that some neighbour pushes.

    Uses ``-expm1`` so the value keeps full relative precision when it is tiny.
    """
    if gamma == 0.0:
        return np.zeros(g.n)
    return np.clip(-np.expm1(_log_survival(g, gamma, i)), 0.0, 1.0)


def _update(i, delta, a, b):
    # 1 - (1-a) prod = a + (1-a) delta
    out = (a + (1.0 - a) * delta) * (1.0 - i) + (1.0 - b) * i
    return np.clip(out, 0.0, 1.0, out=out)


def step(g: Graph, p: EpidemicParams, cur: InfectionProfile) -> tuple[InfectionProfile, StepDetail]:
    """One synchronous application of the master equation."""
    i = _validate_profile(g, cur.i)
    delta = push_infection(g, p.gamma, i)
    nxt = _update(i, delta, p.alpha, p.beta)
    return InfectionProfile(nxt, cur.t + 1), StepDetail(delta)


def step_map(g: Graph, p: EpidemicParams, i: np.ndarray) -> np.ndarray:
    """Array-in/array-out form of :func:`step` without validation."""
    return _update(i, push_infection(g, p.gamma, i), p.alpha, p.beta)


def integrate(g: Graph, p: EpidemicParams, i0: InfectionProfile | np.ndarray, T: int,
              record_profiles: bool = False, record_details: bool = False) -> Trajectory:
    if T < 1:
        raise ParameterError("T must be at least 1")
    i = _validate_profile(g, i0.i if isinstance(i0, InfectionProfile) else i0)
    ibar = np.empty(T + 1)
    ibar[0] = i.mean()
    profiles = None
    if record_profiles:
        profiles = np.empty((T + 1, g.n))
        profiles[0] = i
    details = [] if record_details else None
    for t in range(1, T + 1):
        delta = push_infection(g, p.gamma, i)
        if details is not None:
            details.append(StepDetail(delta))
        i = _update(i, delta, p.alpha, p.beta)
        ibar[t] = i.mean()
        if profiles is not None:
            profiles[t] = i
    return Trajectory(ibar, profiles, details)


def find_equilibrium(g: Graph, p: EpidemicParams, i0: InfectionProfile | np.ndarray | None = None,
                     tol: float = DEFAULT_EQ_TOL, max_iter: int = DEFAULT_EQ_MAX_ITER) -> Equilibrium:
    """Fixed point of the master equation by direct iteration.

    Stops at the first iterate ``i`` with ``max|f(i) - i| <= tol``; that defect
    is reported as the residual.  Non-convergence is reported, not raised.
    """
    if tol <= 0:
        raise ParameterError("tol must be positive")
    if i0 is None:
        i = np.zeros(g.n)
    else:
        i = _validate_profile(g, i0.i if isinstance(i0, InfectionProfile) else i0).copy()
    defect = np.inf
    it = 0
    for it in range(max_iter + 1):
        nxt = step_map(g, p, i)
        defect = float(np.max(np.abs(nxt - i))) if g.n else 0.0
        if defect <= tol:
            break
        if it < max_iter:
            i = nxt
    return Equilibrium(i, defect, it, defect <= tol, tol)


# --- Monte Carlo ---------------------------------------------------------------

def run_seed(master_seed: int, run_index: int) -> np.random.SeedSequence:
    """Independent per-run stream: SeedSequence entropy ``[master_seed, run_index]``."""
    return np.random.SeedSequence([int(master_seed) & 0xFFFFFFFFFFFFFFFF, int(run_index)])


@dataclass(frozen=True, eq=False)
class MonteCarloResult:
    ibar_mean: np.ndarray
    ibar_std: np.ndarray
    final_std: float
    runs: int
    node_freq: np.ndarray | None = None
    run_ibar: np.ndarray = field(default=None, repr=False)


def _simulate_block(g, p, k0, T, run_ids, master_seed, record_nodes):
    """Simulate the runs in ``run_ids`` side by side; returns (infected counts, node sums)."""
    n = g.n
    R = len(run_ids)
    gens = [np.random.Generator(np.random.PCG64(run_seed(master_seed, r))) for r in run_ids]
    state = np.zeros((n, R), dtype=bool)
    for j, rng in enumerate(gens):
        if k0:
            state[rng.choice(n, size=k0, replace=False), j] = True
    max_deg = int(g.degree.max()) if n else 0
    # probability of escaping infection given c infected in-neighbours
    escape = (1.0 - p.alpha) * (1.0 - p.gamma) ** np.arange(max_deg + 1)
    counts = np.zeros((T + 1, R), dtype=np.int64)
    node_sum = np.zeros((T + 1, n), dtype=np.int64) if record_nodes else None
    counts[0] = state.sum(axis=0)
    if record_nodes:
        node_sum[0] = state.sum(axis=1)
    adj = g.adj
    u = np.empty((n, R))
    for t in range(1, T + 1):
        infected_nbrs = np.rint(adj @ state.astype(np.float64)).astype(np.int64)
        for j, rng in enumerate(gens):
            u[:, j] = rng.random(n)
        catch = u < (1.0 - escape[infected_nbrs])
        stay = u >= p.beta
        state = np.where(state, stay, catch)
        counts[t] = state.sum(axis=0)
        if record_nodes:
            node_sum[t] = state.sum(axis=1)
    return counts, node_sum


def monte_carlo(g: Graph, p: EpidemicParams, initial_fraction: float, T: int, runs: int,
                master_seed: int, record_nodes: bool = True, workers: int = 1,
                block_size: int = 64) -> MonteCarloResult:
    """Average of ``runs`` independent realisations of the stochastic process.

    Each step is synchronous: a susceptible node with ``c`` infected in-neighbours
    is infected with probability ``1 - (1-alpha)(1-gamma)^c``; an infected node
    recovers with probability ``beta``.  One uniform draw per node per step
    decides the outcome.  Run ``r`` uses its own stream seeded from
    ``(master_seed, r)``, and run blocks are reduced in index order with integer
    counts, so results do not depend on ``workers`` or ``block_size``.
    """
    if runs < 1:
        raise ParameterError("runs must be at least 1")
    if T < 1:
        raise ParameterError("T must be at least 1")
    if not 0.0 <= initial_fraction <= 1.0:
        raise ParameterError("initial_fraction must be in [0, 1]")
    n = g.n
    k0 = min(n, math.ceil(initial_fraction * n - 1e-12))
    blocks = [list(range(s, min(s + block_size, runs))) for s in range(0, runs, block_size)]

    def work(ids):
        return _simulate_block(g, p, k0, T, ids, master_seed, record_nodes)

    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(work, blocks))
    else:
        results = [work(b) for b in blocks]

    counts = np.concatenate([c for c, _ in results], axis=1)
    run_ibar = (counts / n).T  # (runs, T+1)
    total = counts.sum(axis=1)
    ibar_mean = total / (n * runs)
    ibar_std = run_ibar.std(axis=0, ddof=1) if runs > 1 else np.zeros(T + 1)
    node_freq = None
    if record_nodes:
        node_total = results[0][1].copy()
        for _, ns in results[1:]:
            node_total += ns
        node_freq = node_total / runs
    return MonteCarloResult(ibar_mean, ibar_std, float(ibar_std[-1]), runs, node_freq, run_ibar)
