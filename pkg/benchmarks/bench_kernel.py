"""Compare the compiled scan kernel with the pure-Python reference.

    python3 benchmarks/bench_kernel.py [--quick]

Each case runs both backends on the same job, checks the counts agree and
prints wall times and the speedup.
"""

from __future__ import annotations

import argparse
import time
from pathlib import Path

from ratcurves.field import parse_field
from ratcurves.morspace import count_mor
from ratcurves.morspace.engine import BACKEND
from ratcurves.variety import build_spec, load_spec, preset_spec

SPECS = Path(__file__).resolve().parent.parent / "specs"


def cases(quick: bool):
    F3 = parse_field("p=3")
    yield "conic e=2 / F_5", build_spec(parse_field("p=5"), [1, 1, 1], ["x0", "x1", "x2"], ["x0*x2 - x1^2"]), 2, "naive"
    yield "Fermat surface e=1 / F_3", preset_spec("dp3-fermat", F3), 1, "naive"
    yield "Fermat surface e=2 / F_3", preset_spec("dp3-fermat", F3), 2, "interpolation"
    yield "dP2 e=2 / F_3", preset_spec("dp2", F3), 2, "auto"
    if not quick:
        yield "Fermat threefold e=1 / F_7", load_spec(SPECS / "fermat-threefold.spec"), 1, "interpolation"


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true", help="skip the threefold case")
    args = ap.parse_args()
    if BACKEND != "compiled":
        print("compiled kernel not available; only the pure backend would run")
        return
    print(f"{'case':32} {'strategy':14} {'compiled s':>11} {'pure s':>9} {'speedup':>8}  orbits")
    for label, spec, e, strategy in cases(args.quick):
        fast, tc = timed(lambda: count_mor(spec, e, strategy=strategy))
        slow, tp = timed(lambda: count_mor(spec, e, strategy=strategy, pure=True))
        assert fast.as_dict() == slow.as_dict(), label
        print(f"{label:32} {fast.strategy:14} {tc:11.3f} {tp:9.3f} {tp / max(tc, 1e-9):8.1f}  {fast.orbits}")


if __name__ == "__main__":
    main()
