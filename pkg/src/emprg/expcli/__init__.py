"""Experiment pipelines, CSV output and the ``emprg`` command line."""
from .experiments import (
    EXPERIMENTS,
    Fig1Row,
    RgCompareRow,
    RunConfig,
    exact_ground_energy,
    fig1_point,
    run_correlator,
    run_fig1,
    run_ground,
    run_rg_compare,
)

__all__ = [
    "EXPERIMENTS",
    "Fig1Row",
    "RgCompareRow",
    "RunConfig",
    "exact_ground_energy",
    "fig1_point",
    "run_correlator",
    "run_fig1",
    "run_ground",
    "run_rg_compare",
]
