"""Compare the two rational backends on the package's real kernels.

The backend is chosen at import time from TWISTLOG_RATIONALS, so each
measurement runs in a fresh subprocess.  Results must be bit-identical;
the harness checks a digest of one computed invariant across backends.

Usage: python3 benchmarks/bench_rationals.py [--repeat N]
"""

import argparse
import hashlib
import json
import os
import subprocess
import sys
import time

BACKENDS = ("gmpy2", "fraction")


def workload():
    from twistlog.expansion import build_symplectic
    from twistlog.johnson import (
        l_invariant_tensor,
        nonsep_curve,
        verify_dehn_twist_formula,
    )
    from twistlog.tensor import tensor_to_json
    from twistlog.words import word_from_string

    phases = {}

    t0 = time.perf_counter()
    theta = build_symplectic(2, 5)
    phases["build genus 2, degree 5"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    tensors = [
        l_invariant_tensor(theta, word_from_string(2, w))
        for w in ("a1", "a1 b2", "a1 b1 A1 B1 a2", "b2 A1 b1")
    ]
    phases["loop invariants (4 words)"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    cert = verify_dehn_twist_formula(build_symplectic(1, 5), nonsep_curve())
    assert cert.passed
    phases["dehn twist certificate genus 1, degree 5"] = time.perf_counter() - t0

    blob = json.dumps(tensor_to_json(tensors[1]), sort_keys=True)
    digest = hashlib.sha256(blob.encode()).hexdigest()
    return phases, digest


def run_child(repeat):
    from twistlog.rationals import BACKEND

    best = {}
    digest = None
    for _ in range(repeat):
        phases, digest = workload()
        for name, dt in phases.items():
            best[name] = min(best.get(name, dt), dt)
    print(json.dumps({"backend": BACKEND, "phases": best, "digest": digest}))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=1, help="take best of N runs")
    parser.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()

    if args.child:
        run_child(args.repeat)
        return

    results = {}
    for backend in BACKENDS:
        env = dict(os.environ, TWISTLOG_RATIONALS=backend)
        proc = subprocess.run(
            [sys.executable, __file__, "--child", "--repeat", str(args.repeat)],
            env=env,
            capture_output=True,
            text=True,
        )
        if proc.returncode != 0:
            print(f"{backend}: unavailable ({proc.stderr.strip().splitlines()[-1]})")
            continue
        results[backend] = json.loads(proc.stdout)

    if not results:
        sys.exit("no backend could run")

    digests = {r["digest"] for r in results.values()}
    if len(digests) > 1:
        sys.exit("backends disagree on an invariant; this is a bug")

    names = list(next(iter(results.values()))["phases"])
    width = max(map(len, names))
    header = f"{'phase':<{width}}" + "".join(f"  {b:>10}" for b in results)
    print(header)
    print("-" * len(header))
    for name in names:
        row = f"{name:<{width}}"
        for r in results.values():
            row += f"  {r['phases'][name]:>9.3f}s"
        print(row)
    if len(results) == 2:
        total = {b: sum(r["phases"].values()) for b, r in results.items()}
        ratio = total["fraction"] / total["gmpy2"]
        print(f"\ntotal: gmpy2 {total['gmpy2']:.3f}s, fraction "
              f"{total['fraction']:.3f}s ({ratio:.1f}x)")
        print("results are bit-identical across backends (digest checked)")


if __name__ == "__main__":
    main()
