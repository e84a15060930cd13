"""Backend selection for the hot kernels.

The compiled Cython module is preferred.  Set ``EMPRG_PURE_PYTHON=1`` to force
the numpy implementation (useful for debugging and for the benchmark).
"""
import os

if os.environ.get("EMPRG_PURE_PYTHON"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND
jacobi_eigh = _impl.jacobi_eigh
projected_concurrence_margin = _impl.projected_concurrence_margin
projected_entropy = _impl.projected_entropy
projected_entropy_grad = _impl.projected_entropy_grad
projected_eof = _impl.projected_eof
projected_eof_grad = _impl.projected_eof_grad
projected_margin_grad = _impl.projected_margin_grad

__all__ = [
    "BACKEND",
    "jacobi_eigh",
    "projected_concurrence_margin",
    "projected_entropy",
    "projected_entropy_grad",
    "projected_eof",
    "projected_eof_grad",
    "projected_margin_grad",
]
