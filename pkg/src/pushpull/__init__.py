"""Push- and pull-based SIS epidemic dynamics on arbitrary graphs."""

__version__ = "0.1.0"

from .analysis import (BoundsProfile, StabilityReport, analyze, check_dieout_threshold,
                       check_general_threshold, check_succinct_threshold, infection_bounds,
                       scalar_comparison_trajectory)
from .dynamics import (EpidemicParams, Equilibrium, InfectionProfile, MonteCarloResult, StepDetail,
                       Trajectory, find_equilibrium, integrate, monte_carlo, step)
from .graph import DegreeStats, Graph, LoadReport, degree_statistics, generate, load_edge_list
from .meanfield import degree_profile, solve_degree_rate, solve_global_rate
from .monitoring import MonitorPanel, PanelEstimate, panel_estimate, running_estimate, select_panel
from .spectral import SpectralEstimate, spectral_radius, stability_matrix_radius

__all__ = [
    "BoundsProfile", "DegreeStats", "EpidemicParams", "Equilibrium", "Graph", "InfectionProfile",
    "LoadReport", "MonitorPanel", "MonteCarloResult", "PanelEstimate", "SpectralEstimate",
    "StabilityReport", "StepDetail", "Trajectory", "analyze", "check_dieout_threshold",
    "check_general_threshold", "check_succinct_threshold", "degree_profile", "degree_statistics",
    "find_equilibrium", "generate", "infection_bounds", "integrate", "load_edge_list", "monte_carlo",
    "panel_estimate", "running_estimate", "scalar_comparison_trajectory", "select_panel",
    "solve_degree_rate", "solve_global_rate", "spectral_radius", "stability_matrix_radius", "step",
]
