"""Spectral radius of nonnegative sparse matrices by shifted power iteration."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import ParameterError, PreconditionError
from .graph import Graph

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 10_000
SHIFT = 1.0
# slack on the Collatz-Wielandt / row-sum brackets, relative to the radius
_BRACKET_SLACK = 1e-8


@dataclass(frozen=True)
class SpectralEstimate:
    value: float
    residual: float
    iterations: int
    converged: bool
    lower: float = float("nan")
    upper: float = float("nan")
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "residual": self.residual,
            "iterations": self.iterations,
            "converged": self.converged,
            "note": self.note,
        }


def _power_iteration(matvec, n, symmetric, tol, max_iter, shift=SHIFT):
    """Dominant eigenvalue of ``M`` where ``matvec`` computes ``M @ x``.

    Iterates on ``M + shift*I`` from the all-ones vector.  ``M`` must be
    nonnegative so the iterate stays strictly positive; this also yields the
    Collatz-Wielandt bracket ``min(Mx/x) <= rho <= max(Mx/x)``.

    The residual is the geometric-tail estimate ``d_k / (1 - q)`` of the
    remaining error, where ``d_k`` is the latest change of the estimate and
    ``q = d_k / d_{k-1}`` its observed contraction; a plain ``d_k`` test
    stops far too early when the spectrum is clustered.
    """
    x = np.ones(n) / np.sqrt(n)
    est = np.nan
    prev_change = np.nan
    residual = np.inf
    lower = upper = np.nan
    it = 0
    for it in range(1, max_iter + 1):
        mx = matvec(x)
        y = mx + shift * x
        # Rayleigh quotient of M itself, so the shift never costs precision
        new = float(x @ mx) if symmetric else float(np.linalg.norm(y)) - shift
        ratios = mx / x
        lower, upper = float(ratios.min()), float(ratios.max())
        if it > 1:
            change = abs(new - est)
            if change == 0.0:
                residual = 0.0
            elif prev_change > 0.0 and change < prev_change:
                residual = change / (1.0 - change / prev_change)
            else:
                residual = np.inf
            prev_change = change
        est = new
        norm = np.linalg.norm(y)
        if norm == 0.0:
            residual = 0.0
            break
        x = y / norm
        if residual <= tol:
            break
    value = est
    if lower <= upper:
        # rho always lies in the Collatz-Wielandt bracket of a positive vector
        value = min(max(value, lower), upper)
    return value, residual, it, residual <= tol, lower, upper


def _check_bracket(value, lower, upper, converged):
    if not converged:
        return
    slack = _BRACKET_SLACK * max(1.0, abs(value))
    if value < lower - slack or value > upper + slack:
        raise AssertionError(f"eigenvalue {value} escaped Collatz-Wielandt bracket [{lower}, {upper}]")


def spectral_radius(g: Graph, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> SpectralEstimate:
    """Largest eigenvalue of the adjacency matrix (the spectral radius)."""
    if g.n < 1:
        raise ParameterError("graph has no nodes")
    if tol <= 0:
        raise ParameterError("tol must be positive")
    adj = g.adj
    value, res, it, conv, lo, hi = _power_iteration(adj.dot, g.n, not g.directed, tol, max_iter)
    value = max(value, 0.0)
    _check_bracket(value, lo, hi, conv)
    note = "" if g.is_connected() else "graph is disconnected; value is the radius of the dominant component"
    return SpectralEstimate(value, res, it, conv, lo, hi, note)


def stability_matrix(g: Graph, h: np.ndarray, coupling: float) -> sp.csr_matrix:
    """Explicit sparse ``diag(h) + coupling * A`` (used by tests and small cases)."""
    return (sp.diags(h) + coupling * g.adj).tocsr()


def stability_matrix_radius(g: Graph, params, eq, tol: float = DEFAULT_TOL,
                            max_iter: int = DEFAULT_MAX_ITER) -> SpectralEstimate:
    """Spectral radius of ``H + gamma(1 - alpha) A`` at the equilibrium ``eq``.

    ``H = diag(h_v)`` with ``h_v = |(1 - alpha) prod_u (1 - gamma i_u*) - beta|``.
    The matrix is applied through the sparse adjacency and never formed densely.
    """
    # imported here to avoid a circular import
    from .dynamics import push_survival

    if eq.residual > eq.tol:
        raise PreconditionError(
            f"equilibrium residual {eq.residual:.3g} exceeds its tolerance {eq.tol:.3g}")
    a, b, c = params.alpha, params.beta, params.gamma
    h = np.abs((1.0 - a) * push_survival(g, c, eq.i_star) - b)
    coupling = c * (1.0 - a)
    adj = g.adj

    def matvec(x):
        return h * x + coupling * adj.dot(x)

    value, res, it, conv, lo, hi = _power_iteration(matvec, g.n, not g.directed, tol, max_iter)
    value = max(value, 0.0)
    _check_bracket(value, lo, hi, conv)
    if conv:
        rows = h + coupling * g.degree
        slack = _BRACKET_SLACK * max(1.0, value)
        if not (rows.min() - slack <= value <= rows.max() + slack):
            raise AssertionError(f"radius {value} outside row-sum bracket [{rows.min()}, {rows.max()}]")
        if value < h.max() - slack:
            raise AssertionError(f"radius {value} below max diagonal entry {h.max()}")
    note = "" if g.is_connected() else "graph is disconnected; value is the radius of the dominant component"
    return SpectralEstimate(value, res, it, conv, lo, hi, note)
