"""Sentinel panels and estimators of the global mean infection rate.

A panel is chosen from topology alone: nodes in the (resolved) average-degree
class, ranked by how close their second-order degree is to the class mean.
Estimators only read observed per-node infection series, never the epidemic
parameters.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, PreconditionError
from .graph import DegreeStats, Graph, degree_statistics

DEFAULT_T0 = 10
DEFAULT_PANEL_SIZES = (2, 4, 8, 16, 32, 64, 128, 256)


@dataclass(frozen=True, eq=False)
class MonitorPanel:
    nodes: np.ndarray
    k_hat: int
    target_2deg: float
    selection_distances: np.ndarray
    requested: int
    k_rounded: int | None = None

    @property
    def size(self) -> int:
        return int(self.nodes.size)

    @property
    def shortfall(self) -> int:
        return max(0, self.requested - self.size)

    @property
    def widened(self) -> bool:
        return self.k_rounded is not None and self.k_rounded != self.k_hat

    def to_dict(self) -> dict:
        return {"k_hat": self.k_hat, "target_2deg": self.target_2deg, "nodes": self.nodes.tolist()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def rank_average_degree_class(g: Graph, stats: DegreeStats | None = None):
    """All nodes of the resolved average-degree class in selection order."""
    if g.n < 1:
        raise ParameterError("cannot select a panel from an empty graph")
    stats = stats or degree_statistics(g)
    cls = np.flatnonzero(stats.degree == stats.k_hat)
    dist = np.abs(stats.second_order[cls] - stats.mean_2deg_at_avg)
    # lexsort: last key is primary, so distance first, node id breaks ties
    order = np.lexsort((cls, dist))
    return cls[order], dist[order], stats


def select_panel(g: Graph, x: int, stats: DegreeStats | None = None) -> MonitorPanel:
    """The ``x`` average-degree nodes whose second-order degree is closest to the class mean.

    Fewer nodes are returned when the class is smaller than ``x``.
    """
    if x < 1:
        raise ParameterError("panel size must be at least 1")
    nodes, dist, stats = rank_average_degree_class(g, stats)
    return MonitorPanel(nodes[:x].copy(), stats.k_hat, stats.mean_2deg_at_avg, dist[:x].copy(), x,
                        stats.k_rounded)


def average_degree_panel(g: Graph, stats: DegreeStats | None = None) -> MonitorPanel:
    """Every node of the average-degree class."""
    nodes, dist, stats = rank_average_degree_class(g, stats)
    return MonitorPanel(nodes, stats.k_hat, stats.mean_2deg_at_avg, dist, nodes.size, stats.k_rounded)


def full_panel(g: Graph) -> MonitorPanel:
    """Whole-population panel, in node order."""
    stats = degree_statistics(g)
    nodes = np.arange(g.n)
    return MonitorPanel(nodes, stats.k_hat, stats.mean_2deg_at_avg,
                        np.abs(stats.second_order - stats.mean_2deg_at_avg), g.n, stats.k_rounded)


@dataclass(frozen=True)
class PanelEstimate:
    value: float
    t0: int
    t1: int
    size: int


def _panel_series(series: np.ndarray, panel: MonitorPanel) -> np.ndarray:
    series = np.asarray(series, dtype=np.float64)
    if series.ndim != 2:
        raise PreconditionError("series must be a (time, node) array")
    if panel.size == 0:
        raise PreconditionError("panel is empty")
    if panel.size == series.shape[1] and np.array_equal(panel.nodes, np.arange(panel.size)):
        # same reduction as global_series, so the whole-population panel has zero error
        return global_series(series)
    return series[:, panel.nodes].mean(axis=1)


def global_series(series: np.ndarray) -> np.ndarray:
    """``ibar(t)`` from a (time, node) array."""
    return np.asarray(series, dtype=np.float64).mean(axis=1)


def window_mean(values: np.ndarray, t0: int, t1: int) -> float:
    """Mean of ``values[t0..t1]`` (inclusive)."""
    if not 0 <= t0 <= t1 < len(values):
        raise PreconditionError(f"window [{t0}, {t1}] outside series of length {len(values)}")
    return float(np.mean(values[t0:t1 + 1]))


def panel_estimate(series: np.ndarray, panel: MonitorPanel, t0: int, t1: int) -> PanelEstimate:
    """Average over ``t in [t0, t1]`` and over panel nodes of ``series[t, w]``."""
    per_t = _panel_series(series, panel)
    return PanelEstimate(window_mean(per_t, t0, t1), t0, t1, panel.size)


def running_estimate(series: np.ndarray, panel: MonitorPanel, t0: int = DEFAULT_T0) -> list[PanelEstimate]:
    """Panel average over ``[t0, t]`` for each ``t >= t0``."""
    per_t = _panel_series(series, panel)
    if not 0 <= t0 < len(per_t):
        raise PreconditionError(f"t0={t0} outside series of length {len(per_t)}")
    tail = per_t[t0:]
    running = np.cumsum(tail) / np.arange(1, tail.size + 1)
    return [PanelEstimate(float(v), t0, t0 + j, panel.size) for j, v in enumerate(running)]


def panel_error_sweep(series: np.ndarray, g: Graph, sizes, t0: int, t1: int,
                      stats: DegreeStats | None = None) -> list[tuple[int, float]]:
    """``(x, |panel[t0,t1] - ibar[t0,t1]|)`` for each panel size."""
    stats = stats or degree_statistics(g)
    target = window_mean(global_series(series), t0, t1)
    out = []
    for x in sizes:
        est = panel_estimate(series, select_panel(g, x, stats), t0, t1)
        out.append((x, abs(est.value - target)))
    return out
