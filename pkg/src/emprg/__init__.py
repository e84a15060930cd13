"""Block renormalisation of small spin-1/2 chains.

Wilson's numerical RG, density-matrix (DMRG) truncation and
entanglement-maximising projections (EMP), together with the entanglement
measures used to compare them.
"""
from . import densemath, entangle, kernels, lattice, renorm, states
from .errors import ConfigError, DegenerateProjectionError, NotHermitianError
from .lattice import ModelSpec, build_hamiltonian
from .states import DensityMatrix, PureState, ground_state, reduce, thermal_state

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DegenerateProjectionError",
    "DensityMatrix",
    "ModelSpec",
    "NotHermitianError",
    "PureState",
    "build_hamiltonian",
    "densemath",
    "entangle",
    "ground_state",
    "kernels",
    "lattice",
    "reduce",
    "renorm",
    "states",
    "thermal_state",
]
