"""Compare the compiled and numpy kernels on the workloads the package runs.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--grid 101x100]
"""

from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from nmbqc import _pykernels
from nmbqc.channels import ADParams
from nmbqc.cluster import cluster_vectors
from nmbqc.grid import BlochGrid, grid_kets
from nmbqc.mbqc import GateKind, MeasurementSchedule, _branch_corrections, qubit_kraus
from nmbqc.qstate import HADAMARD

try:
    from nmbqc import _ckernels
except ImportError:
    _ckernels = None


def build_inputs(grid: BlochGrid):
    channel = ADParams()
    sched = MeasurementSchedule.from_codes((1, 1, 2, 3), channel)
    kets = grid_kets(grid)
    pairs = qubit_kraus(channel, sched)
    kraus = np.stack([np.stack([HADAMARD @ p.e1, HADAMARD @ p.e2]) for p in pairs[:4]] + [pairs[4].as_array()])
    targets = kets @ GateKind.X.unitary.T
    probes = np.einsum("bji,sj->sbi", _branch_corrections(GateKind.X).conj(), targets)
    uniform = np.stack([pairs[0].as_array()] * 5)
    return cluster_vectors(kets), kraus, probes, uniform


def timed(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return statistics.median(times)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--grid", default="101x100")
    args = parser.parse_args(argv)
    nt, nph = (int(s) for s in args.grid.split("x"))
    psis, kraus, probes, uniform = build_inputs(BlochGrid(nt, nph))

    backends = {"python": _pykernels}
    if _ckernels is not None:
        backends["cython"] = _ckernels
    else:
        print("compiled extension not built; timing numpy kernels only")

    results = {}
    for name, impl in backends.items():
        results[name] = (
            timed(lambda: impl.branch_blocks(psis, kraus, probes), args.repeat),
            timed(lambda: impl.channel_overlaps(psis, uniform), args.repeat),
        )

    print(f"{len(psis)} input states, median of {args.repeat} runs")
    print(f"{'backend':<8} {'branch_blocks':>14} {'channel_overlaps':>17}")
    for name, (tb, to) in results.items():
        print(f"{name:<8} {tb:>13.4f}s {to:>16.4f}s")
    if "cython" in results:
        py, cy = results["python"], results["cython"]
        print(f"speedup  {py[0] / cy[0]:>13.1f}x {py[1] / cy[1]:>16.1f}x")
        num_py, _ = _pykernels.branch_blocks(psis[:200], kraus, probes[:200])
        num_cy, _ = _ckernels.branch_blocks(psis[:200], kraus, probes[:200])
        print(f"max backend difference on 200 states: {np.max(np.abs(num_py - num_cy)):.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
