"""Scan-count scaling table for build and full peel, written as CSV."""
from __future__ import annotations

import argparse
import csv
import math
import sys
import time
from dataclasses import dataclass

from convex_layers.layers import PeelStats, peel_layers
from convex_layers.testkit import KINDS, CounterReport, fit_scaling, generate


@dataclass
class BenchConfig:
    kind: str = "uniform-square"
    lo_exp: int = 10
    hi_exp: int = 17
    seed: int = 0
    out: str = "-"


def run(cfg: BenchConfig) -> int:
    sizes = [2 ** e for e in range(cfg.lo_exp, cfg.hi_exp + 1)]
    build, peel = CounterReport([], []), CounterReport([], [])
    rows = []
    for n in sizes:
        pts = generate(cfg.kind, n, cfg.seed).points
        st = PeelStats()
        t0 = time.perf_counter()
        ls = peel_layers(pts, stats=st)
        dt = time.perf_counter() - t0
        lg = n * math.log2(n)
        rows.append({
            "n": n, "k": ls.k, "seconds": round(dt, 3),
            "build_scans": st.build.scan_events, "peel_scans": st.peel.scan_events,
            "evictions": st.build.evictions, "promotions": st.peel.promotions,
            "build_ratio": round(st.build.scan_events / lg, 4), "peel_ratio": round(st.peel.scan_events / lg, 4),
        })
        print(f"n={n} k={ls.k} {dt:.2f}s", file=sys.stderr, flush=True)
        for rep, s in ((build, st.build.scan_events), (peel, st.peel.scan_events)):
            rep.sizes.append(n)
            rep.scan_events.append(s)
    out = sys.stdout if cfg.out == "-" else open(cfg.out, "w", newline="")
    w = csv.DictWriter(out, fieldnames=list(rows[0]))
    w.writeheader()
    w.writerows(rows)
    if out is not sys.stdout:
        out.close()
    if len(sizes) >= 4:
        for name, rep in (("build", build), ("peel", peel)):
            print(f"{name}:\n{fit_scaling(rep).format()}", file=sys.stderr)
    return 0


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kind", choices=KINDS, default=BenchConfig.kind)
    ap.add_argument("--lo-exp", type=int, default=BenchConfig.lo_exp)
    ap.add_argument("--hi-exp", type=int, default=BenchConfig.hi_exp)
    ap.add_argument("--seed", type=int, default=BenchConfig.seed)
    ap.add_argument("--out", default=BenchConfig.out)
    a = ap.parse_args()
    return run(BenchConfig(a.kind, a.lo_exp, a.hi_exp, a.seed, a.out))


if __name__ == "__main__":
    sys.exit(main())
