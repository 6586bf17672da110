"""Command-line front end.

Subcommands::

    pushpull graph-info --generate regular:2000:6 --seed 1
    pushpull analyze    --generate erdos_renyi:2000:6001 --alpha 0.4 --beta 0.6 --gamma 0.004 --out out/
    pushpull simulate   ... --steps 200 --runs 100
    pushpull meanfield  ... --sweep alpha
    pushpull monitor    ... --panel-sizes 2,4,8,16,32

Exit codes: 0 success, 2 usage/parameter/input error, 3 output I/O error.
Verdicts are data and never change the exit code.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import analyze, infection_bounds
from .config import ExperimentConfig, build_config, parse_float_list, parse_panel_sizes, read_config_file
from .dynamics import EpidemicParams, find_equilibrium, integrate, monte_carlo
from .errors import PushPullError
from .graph import Graph, degree_statistics, generate, parse_generator_spec, read_edge_list
from .meanfield import coupling_is_small, degree_means, degree_profile, solve_global_rate
from .monitoring import (average_degree_panel, full_panel, global_series, panel_estimate,
                         running_estimate, select_panel, window_mean)
from .outputs import (BOUNDS_HEADER, MC_HEADER, PROFILE_HEADER, PROFILE_MC_HEADER, RUNNING_HEADER,
                      SIMULATE_HEADER, SWEEP_HEADER, TRAJECTORY_HEADER, dumps, trajectory_rows,
                      write_json, write_table)
from .spectral import spectral_radius

log = logging.getLogger("pushpull")

EXIT_OK, EXIT_USAGE, EXIT_IO = 0, 2, 3

DEFAULT_SWEEPS = {
    "alpha": [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9],
    "beta": [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9],
    "gamma": [0.001, 0.002, 0.004, 0.008, 0.016, 0.032],
}


class InputError(Exception):
    """Unreadable input file (reported as a usage error)."""


class OutputError(Exception):
    """Failure writing results."""


# --- helpers ----------------------------------------------------------------

def load_graph(cfg: ExperimentConfig) -> tuple[Graph, dict | None]:
    if cfg.edges is not None:
        try:
            g, report = read_edge_list(cfg.edges, directed=cfg.directed)
        except OSError as exc:
            raise InputError(f"cannot read {cfg.edges}: {exc.strerror or exc}") from None
        return g, vars(report)
    model, n, param = parse_generator_spec(cfg.generate)
    return generate(model, n, param, cfg.seed), None


def params_of(cfg: ExperimentConfig) -> EpidemicParams:
    return EpidemicParams(cfg.alpha, cfg.beta, cfg.gamma)


def out_dir(cfg: ExperimentConfig) -> Path | None:
    if cfg.out is None:
        return None
    path = Path(cfg.out)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OutputError(f"cannot create {path}: {exc}") from None
    return path


def _emit(cfg, summary: dict, name: str, writes=()):
    """Print ``summary`` as JSON and write files under ``--out``."""
    sys.stdout.write(dumps(summary))
    d = out_dir(cfg)
    if d is None:
        return
    try:
        write_json(d / f"{name}.json", summary)
        for fname, header, rows in writes:
            write_table(d / fname, header, rows, cfg.format)
    except OSError as exc:
        raise OutputError(f"cannot write to {d}: {exc}") from None


def _initial_count(n: int, fraction: float) -> int:
    return min(n, int(np.ceil(fraction * n - 1e-12)))


# --- commands -----------------------------------------------------------------

def cmd_graph_info(cfg: ExperimentConfig) -> int:
    cfg.validate()
    g, report = load_graph(cfg)
    stats = degree_statistics(g)
    lam = spectral_radius(g, tol=cfg.tol, max_iter=cfg.max_iter)
    summary = {
        "nodes": g.n,
        "edges": g.num_edges,
        "arcs": g.num_arcs,
        "directed": g.directed,
        "connected": g.is_connected(),
        **stats.summary(),
        "lambda1": lam.value,
        "lambda1_converged": lam.converged,
        "lambda1_residual": lam.residual,
    }
    if lam.note:
        summary["note"] = lam.note
    if report is not None:
        summary["load_report"] = report
    hist = [(k, int(c)) for k, c in enumerate(stats.histogram.tolist()) if c]
    _emit(cfg, summary, "graph_info", [("degree_histogram", ("k", "count"), hist)])
    return EXIT_OK


def cmd_analyze(cfg: ExperimentConfig) -> int:
    cfg.validate(need_params=True)
    g, _ = load_graph(cfg)
    p = params_of(cfg)
    report = analyze(g, p, tol=cfg.tol, max_iter=cfg.max_iter, eq_tol=cfg.eq_tol, eq_max_iter=cfg.eq_max_iter)
    bounds = infection_bounds(g, p)
    summary = report.to_dict()
    summary["theta_minus_avg"], summary["theta_plus_avg"] = bounds.averages()
    summary["nu"] = bounds.nu
    _emit(cfg, summary, "stability_report", [("bounds", BOUNDS_HEADER, bounds.rows())])
    return EXIT_OK


def cmd_simulate(cfg: ExperimentConfig) -> int:
    cfg.validate(need_params=True)
    g, _ = load_graph(cfg)
    p = params_of(cfg)
    T = cfg.steps
    # deterministic start with the same expected infected fraction as the MC runs
    i0 = np.full(g.n, _initial_count(g.n, cfg.initial_fraction) / g.n)
    traj = integrate(g, p, i0, T)
    lo, hi = infection_bounds(g, p).averages()
    writes = [("trajectory", TRAJECTORY_HEADER, trajectory_rows(traj.ibar))]
    summary = {"params": p.to_dict(), "steps": T, "runs": cfg.runs, "seed": cfg.seed,
               "i_bar_model_final": float(traj.ibar[-1]), "theta_minus_avg": lo, "theta_plus_avg": hi}
    if cfg.runs > 0:
        mc = monte_carlo(g, p, cfg.initial_fraction, T, cfg.runs, cfg.seed, record_nodes=False,
                         workers=cfg.workers)
        rows = [(t, traj.ibar[t], mc.ibar_mean[t], mc.ibar_std[t], lo, hi) for t in range(T + 1)]
        writes.append(("mc", MC_HEADER, [(t, mc.ibar_mean[t], mc.ibar_std[t]) for t in range(T + 1)]))
        tail = np.abs(mc.ibar_mean - traj.ibar)[min(10, T):]
        summary.update(i_bar_mc_final=float(mc.ibar_mean[-1]), i_bar_mc_final_std=mc.final_std,
                       max_abs_gap_after_t10=float(tail.max()))
    else:
        rows = [(t, traj.ibar[t], None, None, lo, hi) for t in range(T + 1)]
    writes.insert(0, ("simulate", SIMULATE_HEADER, rows))
    _emit(cfg, summary, "simulate_summary", writes)
    return EXIT_OK


def _shape(values: list[float], increasing: bool, curvature: str | None) -> dict:
    d1 = np.diff(values)
    d2 = np.diff(values, 2)
    eps = 1e-12
    mono = bool(np.all(d1 >= -eps)) if increasing else bool(np.all(d1 <= eps))
    out = {"monotone": mono}
    if curvature == "concave":
        out["concave"] = bool(np.all(d2 <= eps))
    elif curvature == "convex":
        out["convex"] = bool(np.all(d2 >= -eps))
    return out


def cmd_meanfield(cfg: ExperimentConfig) -> int:
    cfg.validate(need_params=True)
    g, _ = load_graph(cfg)
    p = params_of(cfg)
    stats = degree_statistics(g)
    avg_k = stats.avg_degree
    warned: list[str] = []

    def check_small(gamma):
        if not coupling_is_small(avg_k, gamma, cfg.smallness) and not warned:
            msg = (f"gamma*<k> = {gamma * avg_k:.4g} exceeds {cfg.smallness}; "
                   "the global mean-field equation may be inaccurate")
            warned.append(msg)
            print(f"warning: {msg}", file=sys.stderr)

    check_small(p.gamma)
    prof = degree_profile(g, p)
    writes = []
    if cfg.runs > 0:
        mc = monte_carlo(g, p, cfg.initial_fraction, cfg.steps, cfg.runs, cfg.seed, workers=cfg.workers)
        per_node = mc.node_freq[cfg.burn():].mean(axis=0)
        mc_means = degree_means(g, per_node)
        rows = [(k, c, r, mc_means.get(k)) for k, c, r in prof.rows()]
        writes.append(("profile", PROFILE_MC_HEADER, rows))
    else:
        writes.append(("profile", PROFILE_HEADER, list(prof.rows())))
    glob = solve_global_rate(avg_k, p)
    eq = find_equilibrium(g, p, tol=cfg.eq_tol, max_iter=cfg.eq_max_iter)
    summary = {
        "params": p.to_dict(),
        "avg_degree": avg_k,
        "gamma_k": p.gamma * avg_k,
        "ibar_eq54": glob.ibar,
        "roots_found": glob.roots_found,
        "ibar_equilibrium": eq.mean,
        "equilibrium_converged": eq.converged,
        "degree_rate_monotone_violations": prof.monotone_violations,
    }
    if cfg.sweep:
        values = cfg.sweep_values or DEFAULT_SWEEPS[cfg.sweep]
        rows = []
        for v in values:
            q = EpidemicParams(**{**p.to_dict(), cfg.sweep: v})
            check_small(q.gamma)
            mf = solve_global_rate(avg_k, q).ibar
            e = find_equilibrium(g, q, tol=cfg.eq_tol, max_iter=cfg.eq_max_iter)
            rows.append((v, q.gamma * avg_k, mf, e.mean, e.converged))
        rule = {"alpha": (True, "concave"), "beta": (False, "convex"), "gamma": (True, None)}[cfg.sweep]
        summary["sweep"] = {
            "parameter": cfg.sweep,
            "values": list(values),
            "max_abs_gap": max(abs(r[2] - r[3]) for r in rows),
            "shape_eq54": _shape([r[2] for r in rows], *rule),
            "shape_equilibrium": _shape([r[3] for r in rows], *rule),
        }
        writes.append(("sweep", ("value", "gamma_k", "ibar_eq54", "ibar_equilibrium", "converged"), rows))
    summary["warnings"] = warned
    _emit(cfg, summary, "meanfield_summary", writes)
    return EXIT_OK


def _observed_series(g, p, cfg, seed) -> np.ndarray:
    """(time, node) infection series from the chosen engine."""
    if cfg.engine == "model":
        i0 = np.full(g.n, _initial_count(g.n, cfg.initial_fraction) / g.n)
        return integrate(g, p, i0, cfg.steps, record_profiles=True).profiles
    return monte_carlo(g, p, cfg.initial_fraction, cfg.steps, max(cfg.runs, 1), seed,
                       workers=cfg.workers).node_freq


def cmd_monitor(cfg: ExperimentConfig) -> int:
    cfg.validate(need_params=True, need_window=True)
    g, _ = load_graph(cfg)
    p = params_of(cfg)
    stats = degree_statistics(g)
    t0, t1 = cfg.window()
    panels = {x: (full_panel(g) if x == "all" else select_panel(g, x, stats)) for x in cfg.panel_sizes}
    n_seeds = cfg.seeds if cfg.engine == "mc" else 1
    errors = {x: [] for x in cfg.panel_sizes}
    first = None
    for s in range(n_seeds):
        series = _observed_series(g, p, cfg, cfg.seed + s)
        if first is None:
            first = series
        target = window_mean(global_series(series), t0, t1)
        for x, panel in panels.items():
            errors[x].append(abs(panel_estimate(series, panel, t0, t1).value - target))
    sweep = [(x, float(np.median(errors[x]))) for x in cfg.panel_sizes]
    writes = [("sweep", SWEEP_HEADER, sweep)]
    if n_seeds > 1:
        by_seed = [(cfg.seed + s, x, errors[x][s]) for s in range(n_seeds) for x in cfg.panel_sizes]
        writes.append(("sweep_by_seed", ("seed", "x", "abs_error"), by_seed))

    ibar = global_series(first)
    run_panel = select_panel(g, cfg.running_x, stats)
    running = running_estimate(first, run_panel, t0)
    writes.append(("running", RUNNING_HEADER, [(e.t1, ibar[e.t1], e.value) for e in running]))
    avg_panel = average_degree_panel(g, stats)
    avg_series = first[:, avg_panel.nodes].mean(axis=1)
    writes.append(("average_degree", ("t", "i_bar", "i_avg"),
                   [(t, ibar[t], avg_series[t]) for t in range(len(ibar))]))

    summary = {
        "params": p.to_dict(),
        "engine": cfg.engine,
        "window": [t0, t1],
        "k_hat": stats.k_hat,
        "k_rounded": stats.k_rounded,
        "avg_degree": stats.avg_degree,
        "class_size_at_avg": stats.class_size_at_avg,
        "target_2deg": stats.mean_2deg_at_avg,
        "seeds": n_seeds,
        "sweep": [{"x": x, "abs_error": e} for x, e in sweep],
        "running_x": cfg.running_x,
        "max_running_gap": float(max(abs(e.value - ibar[e.t1]) for e in running)),
        "avg_degree_max_gap": float(np.max(np.abs(avg_series - ibar)[t0:])),
    }
    panel_json = [{"x": x, "size": panels[x].size, "shortfall": panels[x].shortfall,
                   **panels[x].to_dict()} for x in cfg.panel_sizes]
    _emit(cfg, summary, "monitor_summary", writes)
    d = out_dir(cfg)
    if d is not None:
        try:
            write_json(d / "panels.json", panel_json)
        except OSError as exc:
            raise OutputError(f"cannot write to {d}: {exc}") from None
    return EXIT_OK


COMMANDS = {
    "graph-info": cmd_graph_info,
    "analyze": cmd_analyze,
    "simulate": cmd_simulate,
    "meanfield": cmd_meanfield,
    "monitor": cmd_monitor,
}


# --- argument parsing ----------------------------------------------------------

def _common_parser() -> argparse.ArgumentParser:
    # every default is None so that unset flags never override the config file
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("graph")
    src = g.add_mutually_exclusive_group()
    src.add_argument("--edges", metavar="PATH", help="edge-list file (two integer ids per line, '#' comments)")
    src.add_argument("--generate", metavar="MODEL:N:PARAM",
                     help="regular:N:D, erdos_renyi:N:M (or :P for a probability), preferential_attachment:N:M")
    d = g.add_mutually_exclusive_group()
    d.add_argument("--directed", dest="directed", action="store_const", const=True)
    d.add_argument("--undirected", dest="directed", action="store_const", const=False)
    e = p.add_argument_group("epidemic")
    e.add_argument("--alpha", type=float)
    e.add_argument("--beta", type=float)
    e.add_argument("--gamma", type=float)
    r = p.add_argument_group("run control")
    r.add_argument("--steps", type=int)
    r.add_argument("--runs", type=int)
    r.add_argument("--seed", type=int)
    r.add_argument("--seeds", type=int, help="number of consecutive seeds for monitor sweeps")
    r.add_argument("--initial-fraction", type=float)
    r.add_argument("--t0", type=int)
    r.add_argument("--t1", type=int)
    r.add_argument("--burn-in", type=int, help="first step used for per-degree MC means")
    r.add_argument("--panel-sizes", type=parse_panel_sizes, metavar="LIST")
    r.add_argument("--running-x", type=int)
    r.add_argument("--engine", choices=("mc", "model"))
    r.add_argument("--sweep", choices=("alpha", "beta", "gamma"))
    r.add_argument("--sweep-values", type=parse_float_list, metavar="LIST")
    r.add_argument("--smallness", type=float, help="warn when gamma*<k> exceeds this")
    r.add_argument("--tol", type=float)
    r.add_argument("--max-iter", type=int)
    r.add_argument("--eq-tol", type=float)
    r.add_argument("--eq-max-iter", type=int)
    r.add_argument("--workers", type=int)
    o = p.add_argument_group("output")
    o.add_argument("--out", metavar="DIR")
    o.add_argument("--format", choices=("csv", "json"))
    o.add_argument("--config", metavar="FILE", help="key = value file; flags override it")
    o.add_argument("-v", "--verbose", action="store_true", default=None)
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pushpull", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common_parser()
    helps = {
        "graph-info": "degree statistics and spectral radius",
        "analyze": "stability verdicts and per-node bounds",
        "simulate": "master equation vs Monte Carlo trajectories",
        "meanfield": "degree profile and global mean-field sweeps",
        "monitor": "sentinel panels and estimator errors",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text, description=text)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    values = vars(ns).copy()
    command = values.pop("command")
    config_path = values.pop("config", None)
    verbose = values.pop("verbose", None)
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        file_values = read_config_file(config_path) if config_path else {}
        cfg = build_config(file_values, values)
        return COMMANDS[command](cfg)
    except (PushPullError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OutputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
