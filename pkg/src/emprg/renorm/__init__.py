"""Renormalization schemes: Wilson RG, DMRG projection and EMP."""
from .emp import OptimizerConfig, emp_projection_mixed, emp_projection_pure
from .projections import (
    Isometry,
    complement,
    dmrg_projection,
    dmrg_projection_mixed,
    orthonormalize,
    random_isometry,
    retained_weight,
    truncation_error,
)
from .runs import Block, RgRunReport, RgStep, dmrg_run, enlarge, initial_block, truncate, wilson_run

__all__ = [
    "Block",
    "Isometry",
    "OptimizerConfig",
    "RgRunReport",
    "RgStep",
    "complement",
    "dmrg_projection",
    "dmrg_projection_mixed",
    "dmrg_run",
    "emp_projection_mixed",
    "emp_projection_pure",
    "enlarge",
    "initial_block",
    "orthonormalize",
    "random_isometry",
    "retained_weight",
    "truncate",
    "truncation_error",
    "wilson_run",
]
