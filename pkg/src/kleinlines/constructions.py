"""Seeded point-set generators, including isotropic-line configurations.

Randomness comes from ``numpy.random.Generator(PCG64(seed))``; changing the
generator or the order of draws changes every generated file, so treat it as
part of the interface.

Points are plain ``(x, y, z)`` integer triples of least nonnegative residues.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .algebra import PrimeField

Point = tuple[int, int, int]

KINDS = ("random", "grid", "isotropic_stack", "parallel_isotropic_pairs")


class ConstructionError(ValueError):
    pass


class NoIsotropicDirectionError(ConstructionError):
    pass


def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def random_pointset(p: int, n: int, seed: int) -> list[Point]:
    """n distinct uniform points of F_p^3 by rejection sampling."""
    if n > p ** 3:
        raise ConstructionError(f"cannot draw {n} distinct points from F_{p}^3")
    rng = rng_for(seed)
    seen: dict[Point, None] = {}
    while len(seen) < n:
        x, y, z = (int(v) for v in rng.integers(0, p, size=3))
        seen.setdefault((x, y, z))
    return list(seen)


def grid_pointset(p: int, side: int) -> list[Point]:
    """{0..side-1}^3 reduced mod p; requires side <= p so points stay distinct."""
    if side > p:
        raise ConstructionError(f"grid side {side} exceeds p={p}; points would repeat")
    return [(x, y, z) for x in range(side) for y in range(side) for z in range(side)]


def isotropic_direction(p: int, u: int) -> Point:
    """The isotropic direction (alpha, i*beta, 2) with alpha = 1/u - u, beta = 1/u + u."""
    F = PrimeField(p)
    if not F.split:
        raise NoIsotropicDirectionError(f"-1 is not a square mod {p}; (1, i, 0)-type directions leave F_{p}^3")
    if u % p == 0:
        raise ConstructionError("u must be nonzero")
    w = pow(u, -1, p)
    alpha, beta = (w - u) % p, (w + u) % p
    return (alpha, F.i_witness * beta % p, 2 % p)


def _check_stack_field(p: int) -> None:
    if p % 4 != 1:
        raise NoIsotropicDirectionError(
            f"p={p} is 3 mod 4: isotropic stacks of this kind need a square root of -1 in F_p"
        )


def _line_points(base: Point, direction: Point, params, p: int) -> list[Point]:
    return [tuple((b + int(t) * d) % p for b, d in zip(base, direction)) for t in params]


def isotropic_stack(p: int, n: int, k: int, seed: int) -> list[Point]:
    """k isotropic lines carrying n/k points each, so every within-stack pair has distance 0."""
    _check_stack_field(p)
    if k <= 0 or n % k:
        raise ConstructionError(f"k={k} must divide n={n}")
    per = n // k
    if per > p:
        raise ConstructionError(f"{per} points per line exceed the {p} points of a line over F_{p}")
    rng = rng_for(seed)
    points: dict[Point, None] = {}
    stacks = 0
    while stacks < k:
        u = int(rng.integers(1, p))
        direction = isotropic_direction(p, u)
        base = tuple(int(v) for v in rng.integers(0, p, size=3))
        params = rng.choice(p, size=per, replace=False)
        new = _line_points(base, direction, params, p)
        if any(q in points for q in new):
            continue
        points.update(dict.fromkeys(new))
        stacks += 1
    return list(points)


def parallel_offset(p: int, direction: Point, r: int) -> Point:
    """Lexicographically least o with o . direction = 0 and o . o = r^2.

    Requires direction[2] != 0, which holds for every direction built by
    :func:`isotropic_direction`.
    """
    d1, d2, d3 = direction
    if d3 % p == 0:
        raise ConstructionError("offset search needs a direction with nonzero last coordinate")
    d3_inv = pow(d3, -1, p)
    target = r * r % p
    for x in range(p):
        for y in range(p):
            z = (-(x * d1 + y * d2) * d3_inv) % p
            if (x * x + y * y + z * z) % p == target:
                return (x, y, z)
    raise ConstructionError(f"no offset of squared length {target} orthogonal to {direction}")


@dataclass
class PairedLines:
    direction: Point
    centre_base: Point
    offset: Point


def parallel_isotropic_pairs(p: int, n: int, r: int, seed: int, k: int = 1,
                             record: Optional[list] = None) -> list[Point]:
    """k pairs of parallel isotropic lines, n/k points per pair split half and half.

    The second line of each pair is the first shifted by an offset o with
    o . d = 0 and |o| = r^2, so every cross pair is at distance r^2.  When
    ``record`` is a list, one :class:`PairedLines` per pair is appended to it.
    """
    _check_stack_field(p)
    if r % p == 0:
        raise ConstructionError("parallel isotropic pairs need r != 0")
    if k <= 0 or n % (2 * k):
        raise ConstructionError(f"n={n} must split evenly into {k} pairs of equal halves")
    half = n // (2 * k)
    if half > p:
        raise ConstructionError(f"{half} points per line exceed the {p} points of a line over F_{p}")
    rng = rng_for(seed)
    points: dict[Point, None] = {}
    made = 0
    while made < k:
        u = int(rng.integers(1, p))
        direction = isotropic_direction(p, u)
        base = tuple(int(v) for v in rng.integers(0, p, size=3))
        offset = parallel_offset(p, direction, r)
        shifted = tuple((b + o) % p for b, o in zip(base, offset))
        new = (_line_points(base, direction, rng.choice(p, size=half, replace=False), p)
               + _line_points(shifted, direction, rng.choice(p, size=half, replace=False), p))
        if len(set(new)) < len(new) or any(q in points for q in new):
            continue
        points.update(dict.fromkeys(new))
        if record is not None:
            record.append(PairedLines(direction, base, offset))
        made += 1
    return list(points)


def max_points_on_isotropic_line(A, p: int) -> int:
    """Largest number of points of A on one line of F_p^3 with isotropic direction."""
    X = np.array([[int(c) % p for c in a] for a in A], dtype=np.int64).reshape(len(A), 3)
    n = len(X)
    if n == 0:
        return 0
    i_idx, j_idx = np.triu_indices(n, k=1)
    d = (X[j_idx] - X[i_idx]) % p
    iso = ((d * d) % p).sum(axis=1) % p == 0
    if not iso.any():
        return 1
    i_idx, j_idx, d = i_idx[iso], j_idx[iso], d[iso]
    # canonical direction: first nonzero coordinate scaled to 1
    first = np.argmax(d != 0, axis=1)
    pivot = d[np.arange(len(d)), first]
    inv = np.array([pow(int(v), -1, p) for v in pivot], dtype=np.int64)
    d = d * inv[:, None] % p
    # canonical base point: the point of the line whose pivot coordinate is 0
    a = X[i_idx]
    base = (a - a[np.arange(len(a)), first][:, None] * d) % p
    keys = np.concatenate([d, base], axis=1)
    rows = np.concatenate([
        np.concatenate([keys, i_idx[:, None]], axis=1),
        np.concatenate([keys, j_idx[:, None]], axis=1),
    ])
    rows = np.unique(rows, axis=0)
    _, per_line = np.unique(rows[:, :6], axis=0, return_counts=True)
    return int(per_line.max())


@dataclass
class PointSetSpec:
    kind: str
    p: int
    n: int = 0
    k: Optional[int] = None
    r: Optional[int] = None
    seed: int = 0
    side: Optional[int] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConstructionError(f"unknown generator kind {self.kind!r}; choose from {', '.join(KINDS)}")

    def to_dict(self) -> dict:
        return {key: v for key, v in asdict(self).items() if v is not None}


@dataclass
class GeneratedSet:
    spec: PointSetSpec
    points: list[Point]
    meta: dict = field(default_factory=dict)


def default_stack_count(n: int) -> int:
    """ceil(sqrt(n)) // 2, and at least 1."""
    ceil_sqrt = math.isqrt(n - 1) + 1 if n > 0 else 0
    return max(1, ceil_sqrt // 2)


def generate(spec: PointSetSpec) -> GeneratedSet:
    if spec.kind == "random":
        return GeneratedSet(spec, random_pointset(spec.p, spec.n, spec.seed))
    if spec.kind == "grid":
        side = spec.side if spec.side is not None else round(spec.n ** (1 / 3))
        if spec.side is None and side ** 3 != spec.n:
            raise ConstructionError(f"grid needs n to be a cube or an explicit side, got n={spec.n}")
        return GeneratedSet(spec, grid_pointset(spec.p, side), {"side": side})
    if spec.kind == "isotropic_stack":
        k = spec.k if spec.k is not None else default_stack_count(spec.n)
        return GeneratedSet(spec, isotropic_stack(spec.p, spec.n, k, spec.seed), {"k": k})
    k = spec.k if spec.k is not None else 1
    if spec.r is None:
        raise ConstructionError("parallel_isotropic_pairs needs r")
    record: list[PairedLines] = []
    pts = parallel_isotropic_pairs(spec.p, spec.n, spec.r, spec.seed, k=k, record=record)
    return GeneratedSet(spec, pts, {"k": k, "pairs": [asdict(x) for x in record]})
