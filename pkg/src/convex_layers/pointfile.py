"""Point files: one ``x,y`` pair per line, ``#`` comments, optional header."""
from __future__ import annotations

from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Iterable, Sequence

from .geometry import COORD_LIMIT, Point


class InputError(ValueError):
    pass


def _number(field: str, scale: int | None, lineno: int, source: str) -> int:
    field = field.strip()
    try:
        if scale is None:
            return int(field)
    except ValueError:
        raise InputError(f"{source}:{lineno}: {field!r} is not an integer (pass --scale for decimals)") from None
    try:
        d = Decimal(field)
    except InvalidOperation:
        raise InputError(f"{source}:{lineno}: {field!r} is not a number") from None
    if not d.is_finite():
        raise InputError(f"{source}:{lineno}: {field!r} is not finite")
    v = d.scaleb(scale)
    if v != v.to_integral_value():
        raise InputError(f"{source}:{lineno}: {field} * 10^{scale} is not an integer; refusing to round")
    return int(v)


def parse_points(lines: Iterable[str], scale: int | None = None, source: str = "<input>") -> list[Point]:
    """Parse point lines into Points with ids in file order.

    ``scale`` multiplies decimal input by 10**scale; the result must be an
    exact integer within the coordinate bound.
    """
    pts: list[Point] = []
    seen: dict[tuple[int, int], tuple[int, int]] = {}
    header_ok = True
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(",")]
        if header_ok and [p.lower() for p in parts] == ["x", "y"]:
            header_ok = False
            continue
        header_ok = False
        if len(parts) != 2:
            raise InputError(f"{source}:{lineno}: expected 'x,y', got {line!r}")
        x = _number(parts[0], scale, lineno, source)
        y = _number(parts[1], scale, lineno, source)
        if abs(x) > COORD_LIMIT or abs(y) > COORD_LIMIT:
            raise InputError(f"{source}:{lineno}: ({x}, {y}) exceeds the 2^30 coordinate bound")
        if (x, y) in seen:
            first_id, first_line = seen[(x, y)]
            raise InputError(
                f"{source}:{lineno}: duplicate point ({x}, {y}): ids {first_id} (line {first_line}) and {len(pts)}"
            )
        seen[(x, y)] = (len(pts), lineno)
        pts.append(Point(len(pts), x, y))
    return pts


def read_points(path: str | Path, scale: int | None = None) -> list[Point]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    return parse_points(text.splitlines(), scale, str(path))


def format_points(points: Sequence[Point]) -> str:
    return "".join(f"{p.x},{p.y}\n" for p in points)


def write_points(path: str | Path, points: Sequence[Point]) -> None:
    Path(path).write_text(format_points(points), encoding="utf-8")
