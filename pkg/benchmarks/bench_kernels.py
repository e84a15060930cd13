"""Compare the compiled and pure-Python kernel backends.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from emprg import _kernels_py
from emprg.lattice import ModelSpec, build_hamiltonian
from emprg.renorm import complement, random_isometry
from emprg.states import thermal_state

try:
    from emprg import _kernels as _compiled
except ImportError:
    _compiled = None


def _cases():
    rng = np.random.default_rng(0)
    rho = thermal_state(build_hamiltonian(ModelSpec()), 0.5).matrix.astype(complex)
    wa, wb = random_isometry(4, 2, rng), random_isometry(4, 2, rng)
    pa, pb = complement(wa), complement(wb)
    herm = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
    herm = herm + herm.conj().T
    rho_a = rho.reshape(4, 4, 4, 4).trace(axis1=1, axis2=3)
    return {
        "jacobi_eigh 16x16": lambda k: k.jacobi_eigh(herm),
        "projected_entropy": lambda k: k.projected_entropy(rho_a, wa),
        "projected_eof": lambda k: k.projected_eof(rho, wa, wb),
        "projected_entropy_grad": lambda k: k.projected_entropy_grad(rho_a, wa, pa, 1e-6),
        "projected_eof_grad": lambda k: k.projected_eof_grad(rho, wa, wb, pa, pb, 1e-6),
    }


def _time(fn, repeat):
    number = max(1, int(0.2 / max(timeit.timeit(fn, number=1), 1e-7)))
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    backends = [("python", _kernels_py)]
    if _compiled is not None:
        backends.insert(0, ("cython", _compiled))
    else:
        print("compiled extension not built; timing the Python backend only")
    print(f"{'kernel':<26}" + "".join(f"{name:>14}" for name, _ in backends) + f"{'speedup':>10}")
    for label, call in _cases().items():
        times = [_time(lambda k=k: call(k), args.repeat) for _, k in backends]
        row = f"{label:<26}" + "".join(f"{t * 1e6:>11.1f} us" for t in times)
        if len(times) == 2:
            row += f"{times[1] / times[0]:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
