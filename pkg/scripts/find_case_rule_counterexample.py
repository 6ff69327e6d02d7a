"""Random search for point sets where a delete case rule breaks NW peeling.

Compares repeated root-hull extraction against the brute-force NW hull
oracle, then shrinks the first failure.
"""
from __future__ import annotations

import argparse
import random
import sys
from dataclasses import dataclass

from convex_layers.geometry import make_points
from convex_layers.hulltree import build_tree, extract_hull
from convex_layers.testkit import oracle_nw_hull, shrink


@dataclass
class SearchConfig:
    case_rule: str = "literal"
    trials: int = 3000
    max_n: int = 40
    span: int = 50
    seed: int = 1


def tree_peel(coords, rule):
    T = build_tree(make_points(coords), case_rule=rule)
    out = []
    while not T.is_empty:
        out.append(extract_hull(T).coords())
    return out


def oracle_peel(coords):
    rest, out = list(coords), []
    while rest:
        h = oracle_nw_hull(rest)
        out.append(h)
        rest = [c for c in rest if c not in set(h)]
    return out


def fails(coords, rule) -> bool:
    try:
        return tree_peel(coords, rule) != oracle_peel(coords)
    except AssertionError:
        return True


def run(cfg: SearchConfig) -> int:
    rng = random.Random(cfg.seed)
    for t in range(cfg.trials):
        n = rng.randint(2, cfg.max_n)
        coords = list({(rng.randint(0, cfg.span), rng.randint(0, cfg.span)) for _ in range(n)})
        if fails(coords, cfg.case_rule):
            small = shrink(coords, lambda c: fails(c, cfg.case_rule))
            print(f"trial {t}: rule {cfg.case_rule!r} fails; minimized to {len(small)} points: {sorted(small)}")
            print("tree:  ", tree_peel(small, cfg.case_rule) if not _raises(small, cfg.case_rule) else "raised")
            print("oracle:", oracle_peel(small))
            return 1
    print(f"no failure in {cfg.trials} trials for rule {cfg.case_rule!r}")
    return 0


def _raises(coords, rule) -> bool:
    try:
        tree_peel(coords, rule)
        return False
    except AssertionError:
        return True


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--case-rule", choices=["literal", "geometric"], default=SearchConfig.case_rule)
    ap.add_argument("--trials", type=int, default=SearchConfig.trials)
    ap.add_argument("--max-n", type=int, default=SearchConfig.max_n)
    ap.add_argument("--span", type=int, default=SearchConfig.span)
    ap.add_argument("--seed", type=int, default=SearchConfig.seed)
    a = ap.parse_args()
    return run(SearchConfig(a.case_rule, a.trials, a.max_n, a.span, a.seed))


if __name__ == "__main__":
    sys.exit(main())
