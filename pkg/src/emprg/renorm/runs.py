"""Iterative block-growth runs: Wilson's RG and infinite-system DMRG.

Blocks carry their Hamiltonian and the Pauli operators of their boundary site
in the current (possibly truncated) basis.  Truncation conjugates all of them
by the kept isometry, ``O -> W^dag O W``.
"""
from dataclasses import dataclass, field

import numpy as np

from .. import densemath as dm
from ..errors import ConfigError
from ..lattice import MAX_SITES, PAULI, ModelSpec, build_hamiltonian
from ..states import PureState
from .projections import dmrg_projection

I2 = np.eye(2)


@dataclass
class Block:
    sites: int
    h: np.ndarray
    edge: dict

    @property
    def dim(self):
        return self.h.shape[0]


@dataclass
class RgStep:
    sites: int
    kept: int
    energy: float
    energy_per_site: float
    observables: dict
    delta: float


@dataclass
class RgRunReport:
    method: str
    spec: ModelSpec
    m: int
    steps: list = field(default_factory=list)
    converged: bool = False
    final_block: Block = None

    @property
    def final_energy(self):
        return self.steps[-1].energy

    @property
    def final_sites(self):
        return self.steps[-1].sites

    def record(self, sites, kept, energy, observables):
        eps = energy / sites
        delta = abs(eps - self.steps[-1].energy_per_site) if self.steps else np.inf
        self.steps.append(RgStep(sites, kept, float(energy), float(eps), observables, float(delta)))
        return delta


def bond_couplings(spec):
    """``(site_h, [(coef, axis), ...])`` with bond term ``coef * s^a (x) s^a``."""
    J = float(spec.coupling)
    if spec.kind == "heisenberg":
        return np.zeros((2, 2), dtype=complex), [(0.5 * J, "x"), (0.5 * J, "y"), (0.5 * J, "z")]
    return -float(spec.field) * PAULI["x"], [(-J, "z")]


def _check_run(spec, m):
    if spec.boundary != "open":
        raise ConfigError("block-growth runs support open chains only")
    if m < 1:
        raise ConfigError(f"retained dimension must be positive, got {m}")
    if m > 2 ** spec.sites:
        raise ConfigError(f"m={m} exceeds the full dimension 2^{spec.sites}")


def initial_block(spec, sites):
    """Exact block of ``sites`` sites with the Paulis of its last site."""
    if sites == 1:
        h = bond_couplings(spec)[0].astype(complex)
    else:
        sub = ModelSpec(spec.kind, sites, spec.coupling, spec.field, "open")
        h = build_hamiltonian(sub).astype(complex)
    left = np.eye(2 ** (sites - 1))
    return Block(sites, h, {a: np.kron(left, PAULI[a]) for a in "xyz"})


def enlarge(block, spec):
    """Append one bare site to the right of ``block``."""
    site_h, couplings = bond_couplings(spec)
    eye = np.eye(block.dim)
    h = np.kron(block.h, I2) + np.kron(eye, site_h)
    for coef, a in couplings:
        h = h + coef * np.kron(block.edge[a], PAULI[a])
    return Block(block.sites + 1, h, {a: np.kron(eye, PAULI[a]) for a in "xyz"})


def truncate(block, w):
    """Conjugate every block operator by the isometry columns ``w``."""
    wd = w.conj().T
    return Block(block.sites, wd @ block.h @ w, {a: wd @ o @ w for a, o in block.edge.items()})


def _lowest(h):
    return dm.hermitian_eig(h)


def wilson_run(spec, m, block_init=2, max_iters=None, conv_threshold=1e-6):
    """Wilson's numerical RG: keep the ``m`` lowest block eigenstates, add a
    site, repeat until the chain has ``spec.sites`` sites or the energy per
    site changes by less than ``conv_threshold``.

    The kept dimension at each step is ``min(m, block dimension)``.
    """
    _check_run(spec, m)
    if not 1 <= block_init <= spec.sites or block_init > MAX_SITES:
        raise ConfigError(f"initial block of {block_init} sites is not valid for {spec.sites} sites")
    report = RgRunReport("wilson", spec, m)
    block = initial_block(spec, block_init)
    w, _ = _lowest(block.h)
    report.record(block.sites, block.dim, w[0], {})
    iters = 0
    while block.sites < spec.sites and (max_iters is None or iters < max_iters):
        w, v = _lowest(block.h)
        keep = min(m, block.dim)
        kept = truncate(block, v[:, :keep])
        block = enlarge(kept, spec)
        e, vec = _lowest(block.h)
        psi = vec[:, 0]
        # z-z correlation across the bond that was just added
        zz = np.vdot(psi, np.kron(kept.edge["z"], PAULI["z"]) @ psi).real
        delta = report.record(block.sites, keep, e[0], {"bond_zz": float(zz)})
        iters += 1
        if delta < conv_threshold:
            report.converged = True
            break
    report.final_block = block
    return report


def dmrg_run(spec, m, max_iters=None, conv_threshold=1e-6):
    """Infinite-system DMRG with a reflected environment.

    Each iteration builds the superblock ``block + site + site + mirror(block)``,
    finds its ground state, and truncates ``block + site`` to the ``m``
    dominant eigenvectors of its reduced density matrix.
    """
    _check_run(spec, m)
    if spec.sites % 2:
        raise ConfigError("reflected-environment DMRG needs an even number of sites")
    site_h, couplings = bond_couplings(spec)
    report = RgRunReport("dmrg", spec, m)
    block = Block(1, site_h.astype(complex), {a: PAULI[a].astype(complex) for a in "xyz"})
    iters = 0
    while True:
        if 2 * block.sites == spec.sites:
            # the target is reached by joining two blocks directly
            sys_blk = block
        else:
            sys_blk = enlarge(block, spec)
        d = sys_blk.dim
        if d * d > 2 ** MAX_SITES:
            raise ConfigError(f"superblock dimension {d * d} exceeds 2^{MAX_SITES}; reduce m")
        eye = np.eye(d)
        h = np.kron(sys_blk.h, eye) + np.kron(eye, sys_blk.h)
        for coef, a in couplings:
            h = h + coef * np.kron(sys_blk.edge[a], sys_blk.edge[a])
        e, vec = _lowest(h)
        psi = vec[:, 0]
        zz = np.vdot(psi, np.kron(sys_blk.edge["z"], sys_blk.edge["z"]) @ psi).real
        sites = 2 * sys_blk.sites
        delta = report.record(sites, min(m, d), e[0], {"bond_zz": float(zz)})
        iters += 1
        if sites >= spec.sites:
            break
        if delta < conv_threshold:
            report.converged = True
            break
        if max_iters is not None and iters >= max_iters:
            break
        state = PureState(psi / np.linalg.norm(psi), (d, d))
        keep = min(m, d)
        iso = dmrg_projection(state, ((0,), (1,)), keep)
        block = truncate(sys_blk, iso.columns)
    report.final_block = sys_blk
    return report
