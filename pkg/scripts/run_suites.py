"""Run acceptance suites and print their tables, checks and wall times.

Run: python scripts/run_suites.py [suite ...] (default: all suites)
"""

import sys
import time

from campanato.suites import SUITES, run_suite


def main(names):
    for name in names or list(SUITES):
        t0 = time.perf_counter()
        res = run_suite(name, seed=7)
        dt = time.perf_counter() - t0
        print(f"== {name} ({dt:.1f} s)")
        for key, value in res.rows:
            print(f"   {key} = {value:.6g}")
        for line in res.lines():
            print("  ", line)


if __name__ == "__main__":
    main(sys.argv[1:])
