"""Build the doubled-arc knots for a few generations and check them end to end."""

from __future__ import annotations

import sys
import time

from knotforge import brunnian_check, classify, gamma, verify_trivializer


def main(top: int = 2) -> None:
    for j in range(top + 1):
        t0 = time.perf_counter()
        g = gamma(j)
        v = classify(g.knot)
        rep = verify_trivializer(g.knot, g.marks)
        print(
            f"generation {j}: knot {len(g.knot.crossings)} crossings, aux link {len(g.aux_link.crossings)} crossings,"
            f" marks {list(g.marks)}"
        )
        print(f"   base {v.status} via {v.invariant}; trivializer {rep.status} order {rep.order}")
        if j <= 1:
            b = brunnian_check(g)
            print(f"   brunnian check {'passed' if b.passed else 'FAILED'} over {len(b.entries)} sublinks")
        print(f"   {time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 2)
