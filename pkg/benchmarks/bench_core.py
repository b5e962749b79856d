"""Compare the compiled kernels against the pure-Python fallback.

Run:  python3 benchmarks/bench_core.py
The pure backend is loaded in a subprocess with CGMOMENTS_PURE=1 so both
implementations are timed inside one report without import-order games.
"""

import json
import os
import subprocess
import sys
import time

CASES = [
    ("kronecker x 20000", """
from cgmoments._core import kronecker
def work():
    s = 0
    for n in range(1, 20001):
        s += kronecker(-19183, n)
    return s
"""),
    ("reduced_forms |D| ~ 1e5 x 20", """
from cgmoments._core import reduced_forms
def work():
    return sum(len(reduced_forms(D)) for D in (-99991, -99992, -99996,
               -99999, -100003) * 4)
"""),
    ("fundamental_discriminants 1e5 span", """
from cgmoments._core import fundamental_discriminants
def work():
    return len(fundamental_discriminants(-100000, -1000))
"""),
    ("chi_values to 3e5", """
from cgmoments._core import chi_values, smallest_prime_factors
spf = smallest_prime_factors(300000)
def work():
    return int(chi_values(-19183, 300000, spf)[:200].sum())
"""),
    ("lattice_values qmax 4e5 x 5", """
from cgmoments._core import lattice_values
def work():
    t = 0
    for _ in range(5):
        vals, counts = lattice_values(7, 3, 685, 400000)
        t += len(vals)
    return t
"""),
]

RUNNER = """
import json, sys, time
exec(sys.stdin.read())
work()  # warm
reps, best = 0, float("inf")
t_all = time.perf_counter()
while reps < 3 or time.perf_counter() - t_all < 0.6:
    t0 = time.perf_counter()
    check = work()
    best = min(best, time.perf_counter() - t0)
    reps += 1
print(json.dumps({"best": best, "check": repr(check)}))
"""


def run_case(src: str, pure: bool) -> dict:
    env = dict(os.environ)
    if pure:
        env["CGMOMENTS_PURE"] = "1"
    else:
        env.pop("CGMOMENTS_PURE", None)
    out = subprocess.run([sys.executable, "-c", RUNNER], input=src,
                         capture_output=True, text=True, env=env, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    print(f"{'case':<38} {'fast':>10} {'pure':>10} {'speedup':>8}")
    for name, src in CASES:
        fast = run_case(src, pure=False)
        pure = run_case(src, pure=True)
        if fast["check"] != pure["check"]:
            raise SystemExit(
                f"{name}: backends disagree: {fast['check']} vs {pure['check']}")
        ratio = pure["best"] / fast["best"]
        print(f"{name:<38} {fast['best'] * 1e3:>8.2f}ms {pure['best'] * 1e3:>8.2f}ms {ratio:>7.1f}x")


if __name__ == "__main__":
    main()
