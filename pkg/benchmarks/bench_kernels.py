"""Compiled kernels vs the pure-numpy fallback.

Each mode runs in its own interpreter because the switch is read at import.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, sys, time
from gelfand_morse import JIT_ENABLED, exponential, morse_index, solve_point
from gelfand_morse.radial_solver import shoot_radius

repeat = int(sys.argv[1])
f = exponential()
centers = (0.5, 3.0, 12.0)

def best(fn):
    fn()  # compile or warm caches
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)

points = [solve_point(f, 3, a) for a in centers]
out = {
    "jit": JIT_ENABLED,
    "shoot_radius": best(lambda: [shoot_radius(f, 3, a) for a in centers]),
    "solve_point": best(lambda: [solve_point(f, 3, a) for a in centers]),
    "morse_index": best(lambda: [morse_index(p, f) for p in points]),
}
print(json.dumps(out))
"""


def run(no_jit: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("GELFAND_MORSE_NO_JIT", None)
    if no_jit:
        env["GELFAND_MORSE_NO_JIT"] = "1"
    proc = subprocess.run([sys.executable, "-c", WORKLOAD, str(repeat)], env=env,
                          capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    fast = run(False, args.repeat)
    slow = run(True, args.repeat)
    print(f"{'kernel':<14}{'numba [ms]':>12}{'numpy [ms]':>12}{'speedup':>10}")
    for key in ("shoot_radius", "solve_point", "morse_index"):
        a, b = fast[key] * 1e3, slow[key] * 1e3
        print(f"{key:<14}{a:>12.2f}{b:>12.1f}{b / a:>9.0f}x")
    print("(3 center values, n = 3, f = e^t, default 2048-node grid; best of"
          f" {args.repeat})")


if __name__ == "__main__":
    main()
