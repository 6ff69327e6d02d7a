"""Command line front end: compute, verify, bench, gen, plot.

Exit codes: 0 ok, 1 verification mismatch, 2 input error, 3 internal
invariant failure.
"""
from __future__ import annotations

import argparse
import json
import math
import re
import sys
import time
from pathlib import Path

from .geometry import Point
from .hulltree import InvariantError
from .layers import LayerSet, PeelStats, peel_layers
from .pointfile import InputError, format_points, read_points
from .testkit import (
    KINDS,
    CounterReport,
    fit_scaling,
    generate,
    oracle_layers,
    same_layers,
    shrink,
)

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


def _check_layers(points: list[Point], ls: LayerSet) -> None:
    """Cheap output sanity: partition of the ids, CCW convex layers."""
    ids = [p.id for layer in ls.layers for p in layer]
    if sorted(ids) != sorted(p.id for p in points):
        raise InvariantError("layers do not partition the input")
    for layer in ls.layers:
        m = len(layer)
        for i in range(m if m >= 3 else 0):
            a, b, c = layer[i], layer[(i + 1) % m], layer[(i + 2) % m]
            if (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x) <= 0:
                raise InvariantError("emitted layer is not strictly convex counterclockwise")


def _layers_json(points: list[Point], ls: LayerSet) -> str:
    return json.dumps({"n": len(points), "k": ls.k, "layers": [[[p.x, p.y] for p in layer] for layer in ls.layers]})


def _layers_csv(ls: LayerSet) -> str:
    rows = ["layer,idx,x,y"]
    for i, layer in enumerate(ls.layers, 1):
        rows += [f"{i},{j},{p.x},{p.y}" for j, p in enumerate(layer)]
    return "\n".join(rows)


def cmd_compute(args) -> int:
    pts = read_points(args.input, args.scale)
    ls = peel_layers(pts, mode=args.mode, max_layers=args.max_layers)
    if args.max_layers is None:
        _check_layers(pts, ls)
    print(_layers_json(pts, ls) if args.format == "json" else _layers_csv(ls))
    return EXIT_OK


def _describe_mismatch(points, mode) -> list[str]:
    got = peel_layers(points, mode=mode)
    want = oracle_layers(points)
    by_id = {p.id: p for p in points}
    bad = sorted(i for i in want.depth if want.depth[i] != got.depth.get(i))
    lines = [f"  point {i} ({by_id[i].x},{by_id[i].y}): oracle layer {want.depth[i]}, engine layer {got.depth.get(i)}"
             for i in bad]
    if not bad:
        lines.append("  same depths, different cyclic order")
    return lines


def _mismatch(points, mode) -> bool:
    from .geometry import make_points
    pts = make_points([(p.x, p.y) for p in points])
    return not same_layers(peel_layers(pts, mode=mode), oracle_layers(pts))


def cmd_verify(args) -> int:
    if args.input:
        cases = [("input", read_points(args.input, args.scale))]
    elif args.gen:
        cases = []
        for t in range(args.trials):
            inst = generate(args.gen, args.n, args.seed + t)
            cases.append((f"{args.gen} n={args.n} seed={args.seed + t}", inst.points))
    else:
        raise InputError("verify needs --input or --gen")
    for label, pts in cases:
        if not _mismatch(pts, args.mode):
            continue
        print(f"MISMATCH on {label} (mode={args.mode})")
        print("\n".join(_describe_mismatch(pts, args.mode)))
        small = shrink(pts, lambda q: _mismatch(q, args.mode))
        from .geometry import make_points
        small = make_points([(p.x, p.y) for p in small])
        print(f"minimized instance ({len(small)} points):")
        sys.stdout.write(format_points(small))
        print("\n".join(_describe_mismatch(small, args.mode)))
        return EXIT_MISMATCH
    print(f"ok: {len(cases)} instance(s) match the oracle (mode={args.mode})")
    return EXIT_OK


def parse_sizes(text: str) -> list[int]:
    """``2^10..2^17`` (doubling range), ``1024,4096`` or a single size."""
    def one(tok: str) -> int:
        tok = tok.strip()
        m = re.fullmatch(r"(\d+)\^(\d+)", tok)
        return int(m.group(1)) ** int(m.group(2)) if m else int(tok)

    try:
        if ".." in text:
            lo, hi = (one(t) for t in text.split(".."))
            out = []
            n = lo
            while n <= hi:
                out.append(n)
                n *= 2
            return out
        return [one(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise InputError(f"bad --sizes value {text!r}") from None


def cmd_bench(args) -> int:
    sizes = parse_sizes(args.sizes)
    run_tree = args.algo in ("hulltree", "both")
    run_brute = args.algo in ("bruteforce", "both")
    head = f"{'n':>8} {'k':>6}"
    if run_tree:
        head += f" {'tree_s':>8} {'peak_nodes':>10} {'build_scans':>11} {'peel_scans':>10} {'evict':>9} {'promo':>9} {'peel/nlgn':>9}"
    if run_brute:
        head += f" {'brute_s':>8}"
    if run_tree and run_brute:
        head += f" {'brute/tree':>10}"
    print(head)
    build_rep = CounterReport([], [])
    peel_rep = CounterReport([], [])
    for n in sizes:
        pts = generate(args.gen, n, args.seed).points
        row = f"{n:>8}"
        k = None
        tt = bt = None
        if run_tree:
            st = PeelStats()
            t0 = time.perf_counter()
            ls = peel_layers(pts, stats=st, checkpoint_every=0)
            tt = time.perf_counter() - t0
            k = ls.k
            lg = n * math.log2(n) if n > 1 else 1
            peak = st.build_nodes
            build_rep.sizes.append(n)
            build_rep.scan_events.append(st.build.scan_events)
            peel_rep.sizes.append(n)
            peel_rep.scan_events.append(st.peel.scan_events)
            tree_cols = (f" {tt:>8.3f} {peak:>10} {st.build.scan_events:>11} {st.peel.scan_events:>10}"
                         f" {st.build.evictions:>9} {st.peel.promotions:>9} {st.peel.scan_events / lg:>9.3f}")
        if run_brute:
            t0 = time.perf_counter()
            k = oracle_layers(pts).k
            bt = time.perf_counter() - t0
        row += f" {k:>6}"
        if run_tree:
            row += tree_cols
        if run_brute:
            row += f" {bt:>8.3f}"
        if run_tree and run_brute:
            row += f" {bt / tt:>10.2f}"
        print(row, flush=True)
    if run_tree and len(sizes) >= 4 and all(s > 1 for s in sizes):
        for name, rep in (("build", build_rep), ("peel", peel_rep)):
            v = fit_scaling(rep)
            print(f"{name}: scans/(n lg n) max/min = {v.spread:.3f} -> {'pass' if v.passed else 'FAIL'}")
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        inst = generate(args.kind, args.n, args.seed)
    except ValueError as e:
        raise InputError(str(e)) from None
    try:
        Path(args.out).write_text(format_points(inst.points), encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot write {args.out}: {e.strerror}") from None
    return EXIT_OK


_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"]


def render_svg(points: list[Point], ls: LayerSet, size: int = 800) -> str:
    xs = [p.x for p in points] or [0]
    ys = [p.y for p in points] or [0]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, 1)
    pad = 20
    scale = (size - 2 * pad) / span

    def xy(p):
        return f"{pad + (p.x - x0) * scale:.2f},{size - pad - (p.y - y0) * scale:.2f}"

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
           '<rect width="100%" height="100%" fill="white"/>']
    for i, layer in enumerate(ls.layers, 1):
        color = _PALETTE[(i - 1) % len(_PALETTE)]
        if len(layer) >= 3:
            pts = " ".join(xy(p) for p in layer)
            out.append(f'<polygon class="layer" data-depth="{i}" points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        elif len(layer) == 2:
            a, b = (xy(p).split(",") for p in layer)
            out.append(f'<line class="layer" data-depth="{i}" x1="{a[0]}" y1="{a[1]}" x2="{b[0]}" y2="{b[1]}" stroke="{color}" stroke-width="1.5"/>')
    for p in points:
        cx, cy = xy(p).split(",")
        d = ls.depth.get(p.id, 0)
        color = _PALETTE[(d - 1) % len(_PALETTE)] if d else "black"
        out.append(f'<circle class="point" cx="{cx}" cy="{cy}" r="3" fill="{color}"/>')
    out.append("</svg>")
    return "\n".join(out)


def cmd_plot(args) -> int:
    pts = read_points(args.input, args.scale)
    ls = peel_layers(pts, mode=args.mode)
    try:
        Path(args.out).write_text(render_svg(pts, ls), encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot write {args.out}: {e.strerror}") from None
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="convex-layers", description="Convex layers via hull trees.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("compute", help="peel a point file into convex layers")
    c.add_argument("--input", required=True)
    c.add_argument("--mode", choices=["purge", "literal"], default="purge")
    c.add_argument("--format", choices=["json", "csv"], default="json")
    c.add_argument("--max-layers", type=int, default=None)
    c.add_argument("--scale", type=int, default=None, help="multiply decimal input by 10**SCALE")
    c.set_defaults(func=cmd_compute)

    v = sub.add_parser("verify", help="differential check against the brute-force oracle")
    src = v.add_mutually_exclusive_group()
    src.add_argument("--input")
    src.add_argument("--gen", choices=KINDS)
    v.add_argument("--n", type=int, default=64)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--trials", type=int, default=1)
    v.add_argument("--mode", choices=["purge", "literal"], default="purge")
    v.add_argument("--scale", type=int, default=None)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="time and count scans across sizes")
    b.add_argument("--gen", choices=KINDS, default="uniform-square")
    b.add_argument("--sizes", default="2^10..2^14")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--algo", choices=["hulltree", "bruteforce", "both"], default="hulltree")
    b.set_defaults(func=cmd_bench)

    g = sub.add_parser("gen", help="write a generated instance")
    g.add_argument("--kind", choices=KINDS, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    p = sub.add_parser("plot", help="draw the layers as SVG")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--mode", choices=["purge", "literal"], default="purge")
    p.add_argument("--scale", type=int, default=None)
    p.set_defaults(func=cmd_plot)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (InvariantError, AssertionError) as e:
        print(f"internal invariant failure: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
