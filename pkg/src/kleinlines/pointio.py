"""Plain-text point-set files.

Line 1 is the header ``p=<modulus> n=<count>``; every later non-comment line
is one point ``x,y,z`` in least nonnegative residues.  ``#`` starts a comment.
"""

from __future__ import annotations

import io
from pathlib import Path
from typing import Iterable, TextIO, Union

from sympy import isprime

from .constructions import Point


class PointSetParseError(ValueError):
    pass


def format_pointset(p: int, points: Iterable[Point], comments: Iterable[str] = ()) -> str:
    points = list(points)
    buf = io.StringIO()
    buf.write(f"p={p} n={len(points)}\n")
    for c in comments:
        buf.write(f"# {c}\n")
    for x, y, z in points:
        buf.write(f"{x % p},{y % p},{z % p}\n")
    return buf.getvalue()


def write_pointset(target: Union[str, Path, TextIO], p: int, points: Iterable[Point],
                   comments: Iterable[str] = ()) -> None:
    text = format_pointset(p, points, comments)
    if isinstance(target, (str, Path)):
        Path(target).write_text(text)
    else:
        target.write(text)


def parse_pointset(text: str) -> tuple[int, list[Point]]:
    header = None
    points: list[Point] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            header = _parse_header(line, lineno)
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise PointSetParseError(f"line {lineno}: expected x,y,z, got {raw!r}")
        try:
            coords = tuple(int(v) for v in parts)
        except ValueError:
            raise PointSetParseError(f"line {lineno}: non-integer coordinate in {raw!r}") from None
        p = header[0]
        if any(not 0 <= c < p for c in coords):
            raise PointSetParseError(f"line {lineno}: coordinates must lie in [0, {p})")
        points.append(coords)
    if header is None:
        raise PointSetParseError("missing 'p=<modulus> n=<count>' header")
    p, n = header
    if len(points) != n:
        raise PointSetParseError(f"header announces n={n} points, file has {len(points)}")
    if len(set(points)) != len(points):
        raise PointSetParseError("duplicate points in file")
    return p, points


def _parse_header(line: str, lineno: int) -> tuple[int, int]:
    fields = {}
    for tok in line.split():
        key, sep, value = tok.partition("=")
        if not sep:
            raise PointSetParseError(f"line {lineno}: bad header token {tok!r}")
        fields[key] = value
    try:
        p, n = int(fields["p"]), int(fields["n"])
    except (KeyError, ValueError):
        raise PointSetParseError(f"line {lineno}: header must read 'p=<modulus> n=<count>'") from None
    if p == 2 or not isprime(p):
        raise PointSetParseError(f"line {lineno}: modulus must be an odd prime, got {p}")
    if n < 0:
        raise PointSetParseError(f"line {lineno}: negative point count")
    return p, n


def read_pointset(path: Union[str, Path]) -> tuple[int, list[Point]]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise PointSetParseError(f"cannot read {path}: {exc}") from None
    return parse_pointset(text)
