"""Entanglement-maximising projections (EMP).

The kept subspace is searched on the Grassmannian: only the span of an
isometry matters, so ascent directions are restricted to ``perp @ X`` with
``perp`` spanning the orthogonal complement.  Gradients are central finite
differences evaluated by :mod:`emprg.kernels`, preconditioned with a short
L-BFGS memory; steps are retracted back onto orthonormal columns by QR and
sized by backtracking.

The DMRG subspace is always the first starting point, so the returned value
never falls below the DMRG value.
"""
from dataclasses import asdict, dataclass

import numpy as np

from .. import kernels
from ..errors import DegenerateProjectionError
from ..states import DensityMatrix, PureState, _check_split, reduce
from .projections import (
    Isometry,
    complement,
    dmrg_projection,
    dmrg_projection_mixed,
    orthonormalize,
    random_isometry,
)


@dataclass(frozen=True)
class OptimizerConfig:
    """Hyper-parameters of the EMP search."""

    restarts: int = 32
    seed: int = 0
    tol: float = 1e-8
    patience: int = 50
    max_steps: int = 5000
    fd_step: float = 1e-6
    initial_step: float = 0.5
    min_step: float = 1e-10
    grad_tol: float = 1e-9
    memory: int = 8

    def as_dict(self):
        return asdict(self)


class _EntropyObjective:
    def __init__(self, rho_a):
        self.rho = np.ascontiguousarray(rho_a, dtype=complex)

    def value(self, ws):
        return kernels.projected_entropy(self.rho, ws[0])

    def gradient(self, ws, perps, h):
        f, g = kernels.projected_entropy_grad(self.rho, ws[0], perps[0], h)
        return f, [g]


class _ConcurrenceObjective:
    # EoF is increasing in the concurrence, so both share their maximisers;
    # the unclipped concurrence keeps a gradient inside the separable region
    def __init__(self, rho_ab):
        self.rho = np.ascontiguousarray(rho_ab, dtype=complex)

    def value(self, ws):
        return kernels.projected_concurrence_margin(self.rho, ws[0], ws[1])

    def gradient(self, ws, perps, h):
        f, ga, gb = kernels.projected_margin_grad(self.rho, ws[0], ws[1], perps[0], perps[1], h)
        return f, [ga, gb]

    def eof(self, ws):
        return kernels.projected_eof(self.rho, ws[0], ws[1])


def _dot(a, b):
    return sum(float(np.vdot(x, y).real) for x, y in zip(a, b))


def _axpy(alpha, x, y):
    return [alpha * xi + yi for xi, yi in zip(x, y)]


def _project(ws, vecs):
    # horizontal (Grassmann tangent) part at ws
    return [v - w @ (w.conj().T @ v) for w, v in zip(ws, vecs)]


def _two_loop(g, memory):
    """L-BFGS direction ``H g`` for the minimisation of ``-f``."""
    q = g
    alphas = []
    for s, y, rho in reversed(memory):
        a = rho * _dot(s, q)
        q = _axpy(-a, y, q)
        alphas.append(a)
    if memory:
        s, y, _ = memory[-1]
        q = [_dot(s, y) / _dot(y, y) * x for x in q]
    for (s, y, rho), a in zip(memory, reversed(alphas)):
        b = rho * _dot(y, q)
        q = _axpy(a - b, s, q)
    return q


def _ascent_gradient(obj, ws, perps, h):
    f, gs = obj.gradient(ws, perps, h)
    return f, [p @ g for p, g in zip(perps, gs)]


def _ascend(obj, ws, cfg):
    """Quasi-Newton ascent on the Grassmannian from ``ws``.

    Directions come from an L-BFGS memory whose pairs are moved between
    tangent spaces by projection; steps are accepted by Armijo backtracking
    and retracted with QR.  Returns ``(ws, value, steps)``.
    """
    perps = [complement(w) for w in ws]
    f, g = _ascent_gradient(obj, ws, perps, cfg.fd_step)
    history = [f]
    memory = []
    for it in range(cfg.max_steps):
        g2 = _dot(g, g)
        if g2 < cfg.grad_tol ** 2:
            return ws, f, it
        d = _two_loop(g, memory)
        slope = _dot(g, d)
        if slope <= 0.0:
            memory.clear()
            d, slope = g, g2
        t = 1.0 if memory else cfg.initial_step
        dnorm = np.sqrt(_dot(d, d))
        t = min(t, 1.0 / dnorm)
        while True:
            trial = [orthonormalize(w + t * di) for w, di in zip(ws, d)]
            ft = obj.value(trial)
            if ft >= f + 1e-4 * t * slope:
                break
            t *= 0.5
            if t * dnorm < cfg.min_step:
                return ws, f, it
        new_perps = [complement(w) for w in trial]
        f_new, g_new = _ascent_gradient(obj, trial, new_perps, cfg.fd_step)
        s_vec = _project(trial, [t * di for di in d])
        y_vec = _axpy(-1.0, g_new, _project(trial, g))
        memory = [(_project(trial, s), _project(trial, y), r) for s, y, r in memory]
        sy = _dot(s_vec, y_vec)
        if sy > 1e-12 * np.sqrt(_dot(s_vec, s_vec) * _dot(y_vec, y_vec)):
            memory.append((s_vec, y_vec, 1.0 / sy))
            memory = memory[-cfg.memory:]
        ws, perps, f, g = trial, new_perps, f_new, g_new
        history.append(f)
        if len(history) > cfg.patience and f - history[-1 - cfg.patience] < cfg.tol:
            return ws, f, it + 1
    return ws, f, cfg.max_steps


def _search(obj, seeds, cfg):
    best = None
    usable = 0
    steps = []
    for ws in seeds:
        if not np.isfinite(obj.value(ws)):
            continue
        usable += 1
        ws, f, n = _ascend(obj, ws, cfg)
        steps.append(n)
        if best is None or f > best[1]:
            best = (ws, f)
    if best is None:
        raise DegenerateProjectionError("every starting projection annihilates the state")
    return best[0], best[1], {"starts": usable, "steps": steps}


def _random_seeds(dims_m, cfg):
    rng = np.random.default_rng(cfg.seed)
    return [[random_isometry(d, m, rng) for d, m in dims_m] for _ in range(cfg.restarts)]


def emp_projection_pure(psi, split, m, opt=None):
    """Rank-``m`` projection on ``A`` maximising the block entropy of the
    projected, renormalised state.

    Returns ``(isometry, entropy_bits)``.
    """
    cfg = opt or OptimizerConfig()
    if not isinstance(psi, PureState):
        raise TypeError("emp_projection_pure expects a PureState")
    a, _ = _check_split(split, len(psi.dims))
    rho_a = reduce(psi, a).matrix
    d = rho_a.shape[0]
    if not 1 <= m <= d:
        raise ValueError(f"cannot keep {m} states of a {d}-dimensional block")
    seed = dmrg_projection(psi, split, m)
    obj = _EntropyObjective(rho_a)
    if m == d:
        return Isometry(np.eye(d), meta={"starts": 1, "steps": [0]}), obj.value([np.eye(d)])
    seeds = [[seed.columns]] + _random_seeds([(d, m)], cfg)
    ws, f, info = _search(obj, seeds, cfg)
    info["dmrg_value"] = obj.value([seed.columns])
    return Isometry(orthonormalize(ws[0]), meta=info), float(f)


def _bipartite_matrix(rho_ab, split):
    a, b = _check_split(split, len(rho_ab.dims))
    order = list(a) + list(b)
    dims = rho_ab.dims
    n = len(dims)
    t = rho_ab.matrix.reshape(dims + dims).transpose(order + [n + i for i in order])
    da = int(np.prod([dims[i] for i in a]))
    db = int(np.prod([dims[i] for i in b]))
    return t.reshape(da * db, da * db), da, db


def emp_projection_mixed(rho_ab, split, m_a=2, m_b=2, opt=None):
    """Joint rank-2 projections on ``A`` and ``B`` maximising the two-qubit
    entanglement of formation of the compressed, renormalised state.

    The search climbs the concurrence before clipping at zero, which has the
    same maximisers wherever the optimum is entangled.

    Returns ``(isometry_a, isometry_b, eof)``.
    """
    cfg = opt or OptimizerConfig()
    if m_a * m_b != 4 or m_a != 2:
        raise ValueError(
            f"mixed EMP compresses to two qubits; got m_a={m_a}, m_b={m_b}"
        )
    if isinstance(rho_ab, PureState):
        rho_ab = rho_ab.density_matrix()
    if not isinstance(rho_ab, DensityMatrix):
        raise TypeError("emp_projection_mixed expects a DensityMatrix")
    rho, da, db = _bipartite_matrix(rho_ab, split)
    if da < 2 or db < 2:
        raise ValueError("both blocks must have dimension >= 2")
    obj = _ConcurrenceObjective(rho)
    seed_a = dmrg_projection_mixed(rho_ab, split, 2)
    seed_b = dmrg_projection_mixed(rho_ab, split[::-1], 2)
    seeds = [[seed_a.columns, seed_b.columns]] + _random_seeds([(da, 2), (db, 2)], cfg)
    ws, margin, info = _search(obj, seeds, cfg)
    ws = [orthonormalize(w) for w in ws]
    info["margin"] = float(margin)
    info["dmrg_value"] = obj.eof([seed_a.columns, seed_b.columns])
    return Isometry(ws[0], meta=info), Isometry(ws[1], meta=info), float(obj.eof(ws))
