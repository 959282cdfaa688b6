"""Compiled kernels vs the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 3]

Times each hot kernel on production-sized inputs and the full regime-I
FSRS sweep (1200 shifts x 30 delays) under both backends.
"""

import argparse
import time

import numpy as np

from sleraman import _backend
from sleraman.numerics.faddeeva import COEFFS, L_PARAM
from sleraman.scenario import load
from sleraman.signals import fsrs_spectra, overlap_kernel
from sleraman.units import PS, cm_to_rad


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    model = load("regime-I").model()
    shifts = np.arange(600.0, 1800.0)
    x = model.pulses.detuning(cm_to_rad(shifts))
    kernel = overlap_kernel(model.rates, model.modes[0].gamma, model.p0)
    delta0 = model.pulses.probe_center_offset - x
    sigma = model.pulses.probe_sigma
    block = model.blocks()[0].M
    z = (np.random.default_rng(0).normal(size=20000) * 3
         + 1j * np.abs(np.random.default_rng(1).normal(size=20000)) * 3)
    u = np.linspace(-12 / sigma, 12 / sigma, 2048)
    delays = np.linspace(0.0, 15 * PS, 30)
    return {
        "faddeeva (20k points)":
            lambda: _backend.faddeeva_upper(z, COEFFS, L_PARAM),
        "gauss_pole_overlap (1200 x 10)":
            lambda: _backend.gauss_pole_overlap(kernel.poles, delta0, 5 * PS, sigma, COEFFS, L_PARAM),
        "shifted_solve (1200 shifts, 10x10)":
            lambda: _backend.shifted_solve(-block.T, -1j * x, np.ones(10, dtype=complex)),
        "pole_overlap_integrand (2048 x 32 x 10)":
            lambda: _backend.pole_overlap_integrand(u, 1e12, delta0[:32], 5 * PS, sigma,
                                                    kernel.poles, 1.0),
        "FSRS sweep (1200 x 30 delays)":
            lambda: fsrs_spectra(model, shifts, delays, workers=1),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    table = cases()
    backends = _backend.available()
    results = {}
    for name in backends:
        _backend.select(name)
        for label, fn in table.items():
            results[label, name] = best_of(fn, args.repeat)
    _backend.select(backends[0])
    width = max(len(k) for k in table)
    print(f"{'kernel':<{width}}  " + "  ".join(f"{b:>10}" for b in backends) + "   speedup")
    for label in table:
        row = [results[label, b] for b in backends]
        speed = row[-1] / row[0] if len(row) > 1 else 1.0
        print(f"{label:<{width}}  " + "  ".join(f"{t * 1e3:8.2f}ms" for t in row) + f"   {speed:6.1f}x")


if __name__ == "__main__":
    main()
