"""Build and peel one large instance, sampling the node census as it goes."""
from __future__ import annotations

import argparse
import resource
import sys
import time
from dataclasses import dataclass

from convex_layers.layers import PeelStats, peel_layers
from convex_layers.testkit import generate


@dataclass
class SmokeConfig:
    n: int = 10 ** 6
    seed: int = 0
    checkpoint_every: int = 100


def run(cfg: SmokeConfig) -> int:
    t0 = time.perf_counter()
    pts = generate("uniform-square", cfg.n, cfg.seed).points
    print(f"generated {cfg.n} points in {time.perf_counter() - t0:.1f}s", flush=True)
    st = PeelStats()
    t0 = time.perf_counter()
    ls = peel_layers(pts, stats=st, checkpoint_every=cfg.checkpoint_every)
    dt = time.perf_counter() - t0 - st.census_seconds
    bad = [(i, c) for i, c in enumerate(st.checkpoints) if c[0] != c[1]]
    rss = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024
    print(f"k={ls.k} time={dt:.1f}s (census {st.census_seconds:.1f}s) peak_rss={rss:.0f}MB")
    print(f"nodes after build={st.build_nodes} (4n={4 * cfg.n}); {len(st.checkpoints)} checkpoints, {len(bad)} mismatched")
    print(st.peel.as_record())
    return 1 if bad or st.build_nodes != 4 * cfg.n else 0


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=SmokeConfig.n)
    ap.add_argument("--seed", type=int, default=SmokeConfig.seed)
    ap.add_argument("--checkpoint-every", type=int, default=SmokeConfig.checkpoint_every)
    a = ap.parse_args()
    return run(SmokeConfig(a.n, a.seed, a.checkpoint_every))


if __name__ == "__main__":
    sys.exit(main())
