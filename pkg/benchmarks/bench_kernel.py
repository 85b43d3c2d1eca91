"""Benchmark the pure-Python kernel against the compiled one.

Runs a fixed engine workload (Groebner bases, minimal resolutions, the
bundled corpus script) in a subprocess per backend, forced through
RESIDUA_KERNEL, and reports best-of-N wall times.

    python3 benchmarks/bench_kernel.py [--repeat N]
"""

import argparse
import os
import subprocess
import sys
import time


def workload():
    import itertools

    from residua.cli import corpus_text, run_script
    from residua.groebner import Ideal, groebner_basis, normal_form
    from residua.homalg import free_resolution, minimalize
    from residua.polyring import PolynomialRing

    XYZ = PolynomialRing(("x", "y", "z"))
    XYZW = PolynomialRing(("x", "y", "z", "w"))

    # Groebner bases: cyclic-4 and a binomial system
    cyclic4 = Ideal(
        XYZW,
        tuple(
            XYZW.poly(s)
            for s in (
                "x + y + z + w",
                "x*y + y*z + z*w + w*x",
                "x*y*z + y*z*w + z*w*x + w*x*y",
                "x*y*z*w - 1",
            )
        ),
    )
    gb = groebner_basis(cyclic4)
    groebner_basis(
        Ideal(
            XYZW,
            tuple(
                XYZW.poly(s)
                for s in ("x^2*y - z*w", "y^2*z - x*w", "z^2*w - x*y", "w^2*x - y*z")
            ),
        )
    )

    # division stress: high-degree normal forms against the cyclic-4 basis
    s = XYZW.poly("x + 2*y + 3*z + 4*w")
    p = XYZW.one()
    for _ in range(8):
        p = p * s
    for i in range(5):
        normal_form(p * XYZW.poly(f"x^{i}"), gb)

    # syzygy stress: resolutions of power-of-maximal-ideal generators
    cubes3 = [XYZ.poly("*".join(m)) for m in itertools.combinations_with_replacement("xyz", 3)]
    minimalize(free_resolution(Ideal(XYZ, tuple(cubes3))))
    sq4 = [XYZW.poly("*".join(m)) for m in itertools.combinations_with_replacement("xyzw", 2)]
    minimalize(free_resolution(Ideal(XYZW, tuple(sq4))))

    # the full bundled script
    code, _, _ = run_script(corpus_text())
    assert code == 0


def run_worker() -> float:
    started = time.perf_counter()
    workload()
    return time.perf_counter() - started


def time_backend(backend: str, repeat: int) -> float:
    env = dict(os.environ, RESIDUA_KERNEL=backend)
    best = None
    for _ in range(repeat):
        proc = subprocess.run(
            [sys.executable, __file__, "--worker"],
            capture_output=True,
            text=True,
            env=env,
            check=True,
        )
        elapsed = float(proc.stdout.strip())
        best = elapsed if best is None else min(best, elapsed)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3, help="runs per backend (best-of)")
    parser.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()

    if args.worker:
        print(f"{run_worker():.6f}")
        return

    import residua.kernel  # fail early if the package is broken

    results = {}
    for backend in ("py", "c"):
        try:
            results[backend] = time_backend(backend, args.repeat)
        except subprocess.CalledProcessError as e:
            sys.stderr.write(e.stderr)
            print(f"{backend:>4}: failed (see stderr)")
    if "py" in results and "c" in results:
        print(f"{'backend':>8} {'best of ' + str(args.repeat):>12}")
        for backend in ("py", "c"):
            print(f"{backend:>8} {results[backend]:>11.3f}s")
        print(f"speedup: {results['py'] / results['c']:.2f}x (py/c)")


if __name__ == "__main__":
    main()
