"""Compare the compiled RNG core against the pure-Python fallback.

Runs each workload in a fresh subprocess so the backend choice (driven by
the TCSLSIM_PURE environment variable at import time) is honored, then
prints a small table of throughputs and the speedup ratio.

Usage: python3 benchmarks/bench_backends.py [--quick]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json
import sys
import time

from tcslsim.channel import Condition, SimulationConfig, generate_realization
from tcslsim.rng import BACKEND, Mt19937

n_u32, n_exp, n_real = json.loads(sys.argv[1])

rng = Mt19937(12345)
t0 = time.perf_counter()
for _ in range(n_u32):
    rng.next_u32()
t_u32 = time.perf_counter() - t0

t0 = time.perf_counter()
rng.exponentials(n_exp, 30.0)
t_exp = time.perf_counter() - t0

cfg = SimulationConfig(frequency_ghz=16.95, condition=Condition.NLOS, seed=7)
t0 = time.perf_counter()
for i in range(n_real):
    generate_realization(cfg, Mt19937(i + 1))
t_real = time.perf_counter() - t0

print(json.dumps({
    "backend": BACKEND,
    "u32_per_s": n_u32 / t_u32,
    "exp_per_s": n_exp / t_exp,
    "real_per_s": n_real / t_real,
}))
"""


def run(pure: bool, sizes) -> dict:
    env = dict(os.environ)
    env.pop("TCSLSIM_PURE", None)
    if pure:
        env["TCSLSIM_PURE"] = "1"
    out = subprocess.run(
        [sys.executable, "-c", WORKER, json.dumps(sizes)],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return json.loads(out.stdout)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--quick", action="store_true", help="smaller workloads for smoke runs"
    )
    args = parser.parse_args()
    sizes = [200_000, 200_000, 2_000] if args.quick else [2_000_000, 2_000_000, 20_000]

    rows = [run(pure=False, sizes=sizes), run(pure=True, sizes=sizes)]
    if rows[0]["backend"] == rows[1]["backend"]:
        print("warning: compiled core unavailable, both runs used the pure backend")

    print(f"{'backend':<10} {'u32 draws/s':>14} {'exponentials/s':>16} {'realizations/s':>16}")
    for row in rows:
        print(
            f"{row['backend']:<10} {row['u32_per_s']:>14,.0f} "
            f"{row['exp_per_s']:>16,.0f} {row['real_per_s']:>16,.1f}"
        )
    if rows[0]["backend"] != rows[1]["backend"]:
        for key, label in (
            ("u32_per_s", "u32"),
            ("exp_per_s", "exponentials"),
            ("real_per_s", "realizations"),
        ):
            print(f"speedup ({label}): {rows[0][key] / rows[1][key]:.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
