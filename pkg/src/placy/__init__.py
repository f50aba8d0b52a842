"""Causal discovery on power-law spectral features of multivariate time series."""

__version__ = "0.1.0"

from .data import TimeSeriesSet
from .discovery import CausalGraph, DiscoveryConfig, discover, granger_baseline
from .granger import VarSpec, WaldResult, build_lagged_design, wald_granger_test
from .kernels import BACKEND
from .metrics import EvalReport, evaluate
from .numerics import LeastSquaresFit, Spectrum, chi2_sf, dft_amplitudes, solve_least_squares
from .spectral import (
    FeatureSeries,
    SpectralFit,
    WindowPlan,
    extract_features,
    fit_power_law,
    select_window_length,
)
from .synth import (
    GroundTruth,
    OUParams,
    ScenarioSpec,
    generate_dag,
    generate_ou,
    inject_causality,
    make_scenario,
)

__all__ = [
    "BACKEND",
    "CausalGraph",
    "DiscoveryConfig",
    "EvalReport",
    "FeatureSeries",
    "GroundTruth",
    "LeastSquaresFit",
    "OUParams",
    "ScenarioSpec",
    "SpectralFit",
    "Spectrum",
    "TimeSeriesSet",
    "VarSpec",
    "WaldResult",
    "WindowPlan",
    "build_lagged_design",
    "chi2_sf",
    "dft_amplitudes",
    "discover",
    "evaluate",
    "extract_features",
    "fit_power_law",
    "generate_dag",
    "generate_ou",
    "granger_baseline",
    "inject_causality",
    "make_scenario",
    "select_window_length",
    "solve_least_squares",
    "wald_granger_test",
]
