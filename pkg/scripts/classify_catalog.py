"""Vanishing flags of every catalog function under the criterion space list.

Run: python scripts/classify_catalog.py [samples]
"""

import sys

from campanato.grid import GridSpec, catalog
from campanato.suites import criterion_spaces_1d
from campanato.vanishing import cross_space_compare

ENTRIES = [("loglog", None), ("log_abs", None), ("abs_pow", {"alpha": 0.5}), ("sign", None),
           ("bump", None), ("trig", {"seed": 1})]


def main(samples=4096):
    grid = GridSpec(1, 1.0, samples)
    spaces = criterion_spaces_1d(grid)
    print("function,space,bounded,small_vanish,far_vanish,large_vanish")
    for name, params in ENTRIES:
        f = catalog(name, params, grid)
        for r in cross_space_compare(f, 0.0, spaces).reports:
            print(",".join([name, r.space] + [str(v) for v in r.flag_vector]))


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 4096)
