"""Exact counting engines for incidences, intersections and rich points.

Pair loops are split into contiguous row blocks; each block is counted
independently and the partial results are combined in block order, so the
answer does not depend on the number of workers.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Hashable, Iterable, Optional, Sequence

import numpy as np

from . import vectorized as vz
from .algebra import FieldElement, PrimeField, is_square_in_field, kernel
from .klein import (
    GeometryError,
    PlaneCoords,
    PluckerLine,
    ProjectivePoint3,
    Regulus,
    klein_form,
    line_in_plane,
    on_quadric,
    point_on_line,
)
from .linecomplex import LineComplex, pencil_plane


class DuplicateLineError(ValueError):
    pass


class MissingColorError(ValueError):
    pass


class EngineMismatchError(RuntimeError):
    pass


class DegeneratePencilError(GeometryError):
    """The plane-hyperplane intersection lies inside the Klein quadric."""


class RegimeWarning(UserWarning):
    pass


def _run_blocks(fn, jobs: list[tuple], workers: int) -> list:
    if workers <= 1 or len(jobs) <= 1:
        return [fn(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, *zip(*jobs)))


class LineSet:
    """An ordered family of distinct lines with optional colour labels.

    Duplicates are rejected within a colour class; the same line may carry
    two different colours.
    """

    def __init__(self, lines: Iterable[PluckerLine], colors: Optional[Sequence[Hashable]] = None):
        self.lines = list(lines)
        self.colors = list(colors) if colors is not None else None
        if self.colors is not None and len(self.colors) != len(self.lines):
            raise ValueError("one colour per line")
        seen = set()
        for k, l in enumerate(self.lines):
            key = (l, self.colors[k] if self.colors else None)
            if key in seen:
                raise DuplicateLineError(f"line {k} duplicates an earlier line: {l}")
            seen.add(key)

    @classmethod
    def bichromatic(cls, red: Sequence[PluckerLine], black: Sequence[PluckerLine]) -> "LineSet":
        return cls(list(red) + list(black), ["red"] * len(red) + ["black"] * len(black))

    def __len__(self) -> int:
        return len(self.lines)

    def __iter__(self):
        return iter(self.lines)

    def __getitem__(self, k: int) -> PluckerLine:
        return self.lines[k]

    @property
    def field(self) -> PrimeField:
        return self.lines[0].field

    @property
    def p(self) -> int:
        return self.field.p

    @cached_property
    def six(self) -> np.ndarray:
        return vz.pack([l.coords for l in self.lines], self.p)

    @cached_property
    def dual(self) -> np.ndarray:
        return vz.skew_from_six(vz.involution(self.six), self.p)

    @cached_property
    def primal(self) -> np.ndarray:
        return vz.skew_from_six(self.six, self.p)


def _points_array(points: Sequence[ProjectivePoint3], p: int) -> np.ndarray:
    return vz.pack([q.coords for q in points], p)


# --- incidences ------------------------------------------------------------


def _incidence_block(dual: np.ndarray, Q: np.ndarray, p: int) -> int:
    hit = np.ones((dual.shape[0], Q.shape[0]), dtype=bool)
    for row in range(4):
        hit &= vz.is_zero(vz.pair_form(dual[:, row], Q, p))
    return int(hit.sum())


def count_incidences_brute(points: Sequence[ProjectivePoint3], L: LineSet, workers: int = 1) -> int:
    """Evaluate the point-on-line predicate W q = 0 over every (q, l) pair."""
    if not points or not len(L):
        return 0
    p = L.p
    Q = _points_array(points, p)
    jobs = [(L.dual[s:e], Q, p) for s, e in vz.partition(len(L), workers)]
    return sum(_run_blocks(_incidence_block, jobs, workers))


def count_incidences_enumerate(points: Sequence[ProjectivePoint3], L: LineSet) -> int:
    """Walk every point of every line and look it up in a canonical point index."""
    if not points or not len(L):
        return 0
    F = L.field
    p = F.p
    index: dict[tuple, int] = {}
    for q in points:
        key = tuple(v for c in q.coords for v in (c.re, c.im))
        index[key] = index.get(key, 0) + 1
    if F.split:
        params = np.array([[t, 0] for t in range(p)], dtype=vz.dtype_for(p))
    else:
        params = np.array([[a, b] for a in range(p) for b in range(p)], dtype=vz.dtype_for(p))
    total = 0
    for l in L:
        a, b = l.spanning_points()
        A = vz.pack([a.coords], p)[0]
        B = vz.pack([b.coords], p)[0]
        rows = (A[None, :, :] + vz.mul(params[:, None, :], B[None, :, :], p)) % p
        rows = np.concatenate([rows, B[None]], axis=0)
        canon, _ = vz.canonicalize_rows(rows, p)
        for key in vz.row_keys(canon):
            total += index.get(key, 0)
    return total


def count_incidences(points: Sequence[ProjectivePoint3], L: LineSet, engine: str = "both", workers: int = 1) -> int:
    """Exact number of pairs (q, l) with q on l.

    ``engine`` is "brute", "enumerate" or "both"; with "both" the two engines
    are run and must agree.
    """
    if engine == "brute":
        return count_incidences_brute(points, L, workers)
    if engine == "enumerate":
        return count_incidences_enumerate(points, L)
    if engine != "both":
        raise ValueError(f"unknown engine {engine!r}")
    a = count_incidences_brute(points, L, workers)
    b = count_incidences_enumerate(points, L)
    if a != b:
        raise EngineMismatchError(f"brute-force engine counted {a}, enumeration engine {b}")
    return a


# --- pairwise intersections ---------------------------------------------------


def _meeting_block(six: np.ndarray, inv: np.ndarray, start: int, stop: int, p: int) -> np.ndarray:
    zero = vz.is_zero(vz.pair_form(six[start:stop], inv, p))
    rows, cols = np.nonzero(zero)
    rows = rows + start
    keep = cols > rows
    return np.stack([rows[keep], cols[keep]], axis=1)


def meeting_pairs(L: LineSet, workers: int = 1) -> np.ndarray:
    """All index pairs (i, j), i < j, of lines that meet (identical lines included)."""
    n = len(L)
    if n < 2:
        return np.zeros((0, 2), dtype=np.int64)
    inv = vz.involution(L.six)
    jobs = [(L.six, inv, s, e, L.p) for s, e in vz.partition(n, workers)]
    blocks = _run_blocks(_meeting_block, jobs, workers)
    return np.concatenate(blocks, axis=0).astype(np.int64)


def _first_nonzero_column(M: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    cols = np.swapaxes(M, 1, 2)  # (K, column, row, 2)
    nz = ~vz.is_zero(cols).all(axis=2)
    first = np.argmax(nz, axis=1)
    chosen = cols[np.arange(cols.shape[0]), first]
    canon, zero = vz.canonicalize_rows(chosen, p)
    return canon, zero


def pair_intersections(L: LineSet, pairs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Canonical common points of meeting pairs; second array flags identical pairs.

    Column k of L_j W_i is the point where l_j crosses the plane spanned by
    l_i and the k-th basis point, i.e. the common point or zero.
    """
    if not len(pairs):
        return np.zeros((0, 4, 2), dtype=L.six.dtype), np.zeros(0, dtype=bool)
    M = vz.batched_matmul(L.primal[pairs[:, 1]], L.dual[pairs[:, 0]], L.p)
    return _first_nonzero_column(M, L.p)


def pair_common_planes(L: LineSet, pairs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Canonical common planes of meeting pairs, via columns of W_i L_j."""
    if not len(pairs):
        return np.zeros((0, 4, 2), dtype=L.six.dtype), np.zeros(0, dtype=bool)
    M = vz.batched_matmul(L.dual[pairs[:, 0]], L.primal[pairs[:, 1]], L.p)
    return _first_nonzero_column(M, L.p)


def _key_to_coords(key: tuple[int, ...], F: PrimeField) -> tuple[FieldElement, ...]:
    return tuple(F(key[2 * k], key[2 * k + 1]) for k in range(len(key) // 2))


@dataclass
class RichPointHistogram:
    """Points where two or more lines of a family meet, with the lines through each."""

    entries: dict[ProjectivePoint3, tuple[int, ...]]
    meeting_pairs: int = 0
    identical_pairs: int = 0

    def multiplicity(self, q: ProjectivePoint3) -> int:
        return len(self.entries.get(q, ()))

    @property
    def max_multiplicity(self) -> int:
        return max((len(v) for v in self.entries.values()), default=0)

    def count_at_least(self, k: int) -> int:
        """|Q_k|: the number of points on at least k lines."""
        return sum(1 for v in self.entries.values() if len(v) >= k)

    def counts(self) -> dict[int, int]:
        return {k: self.count_at_least(k) for k in range(2, self.max_multiplicity + 1)}

    def exact_counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for v in self.entries.values():
            out[len(v)] = out.get(len(v), 0) + 1
        return dict(sorted(out.items()))

    def pair_count(self) -> int:
        """Sum over points of C(multiplicity, 2)."""
        return sum(math.comb(len(v), 2) for v in self.entries.values())

    def pair_identity_holds(self) -> bool:
        return self.pair_count() == self.meeting_pairs - self.identical_pairs


def _group_pairs(L: LineSet, pairs: np.ndarray, canon: np.ndarray, zero: np.ndarray) -> dict[tuple, set[int]]:
    groups: dict[tuple, set[int]] = {}
    keep = ~zero
    for key, (i, j) in zip(vz.row_keys(canon[keep]), pairs[keep].tolist()):
        g = groups.setdefault(key, set())
        g.add(i)
        g.add(j)
    return groups


def rich_points(L: LineSet, workers: int = 1) -> RichPointHistogram:
    pairs = meeting_pairs(L, workers)
    canon, zero = pair_intersections(L, pairs)
    F = L.field
    entries = {}
    for key, candidates in _group_pairs(L, pairs, canon, zero).items():
        q = ProjectivePoint3(_key_to_coords(key, F))
        through = tuple(sorted(k for k in candidates if point_on_line(q, L[k])))
        entries[q] = through
    return RichPointHistogram(entries, meeting_pairs=len(pairs), identical_pairs=int(zero.sum()))


def coplanar_line_groups(L: LineSet, workers: int = 1, min_size: int = 3) -> list[tuple[PlaneCoords, tuple[int, ...]]]:
    """Planes holding at least ``min_size`` lines of L, found from meeting pairs."""
    pairs = meeting_pairs(L, workers)
    canon, zero = pair_common_planes(L, pairs)
    F = L.field
    out = []
    for key, candidates in _group_pairs(L, pairs, canon, zero).items():
        plane = PlaneCoords(_key_to_coords(key, F))
        inside = tuple(sorted(k for k in candidates if line_in_plane(L[k], plane)))
        if len(inside) >= min_size:
            out.append((plane, inside))
    out.sort(key=lambda item: (-len(item[1]), item[1]))
    return out


def bichromatic_intersections(L: LineSet) -> int:
    """Number of meeting pairs with one line of each colour (identical lines meet)."""
    if L.colors is None:
        raise MissingColorError("bichromatic counting needs coloured lines")
    labels = sorted(set(L.colors), key=repr)
    if len(labels) != 2:
        raise MissingColorError(f"expected exactly two colours, found {len(labels)}")
    colors = np.array([labels.index(c) for c in L.colors])
    red = L.six[colors == 0]
    black = vz.involution(L.six[colors == 1])
    return int(vz.is_zero(vz.pair_form(red, black, L.p)).sum())


def check_pencil_property(C: LineComplex, L: LineSet, hist: RichPointHistogram) -> list[ProjectivePoint3]:
    """Rich points whose lines do not all lie in the pencil plane of C (should be none)."""
    bad = []
    for q, through in hist.entries.items():
        plane = pencil_plane(C, q)
        if not all(line_in_plane(L[k], plane) for k in through):
            bad.append(q)
    return bad


# --- distances ------------------------------------------------------------------


def _as_int_array(A, p: int) -> np.ndarray:
    rows = [[int(c) % p for c in a] for a in A]
    return np.array(rows, dtype=object if p >= 1 << 31 else np.int64).reshape(len(rows), 3)


def count_distance_pairs(A, r, p: int, block: int = 512) -> int:
    """Ordered pairs (a, b), a != b, with |a - b| = r^2, by direct evaluation."""
    X = _as_int_array(A, p)
    target = (int(r) ** 2) % p
    n = len(X)
    total = 0
    for s in range(0, n, block):
        d = (X[s:s + block, None, :] - X[None, :, :]) % p
        dist = ((d * d) % p).sum(axis=2) % p
        total += int((dist == target).sum())
    if target == 0:
        total -= n
    return total


# --- point-plane incidences ---------------------------------------------------


def count_point_plane_incidences(
    Q: Sequence[ProjectivePoint3],
    planes: Sequence[PlaneCoords],
    excluded: Iterable[PluckerLine] = (),
) -> int:
    """Pairs (q, pi) with q on pi, skipping pairs that share a line of ``excluded``."""
    if not Q or not planes:
        return 0
    p = Q[0].field.p
    Qa = vz.pack([q.coords for q in Q], p)
    Pa = vz.pack([pl.coords for pl in planes], p)
    hit = vz.is_zero(vz.pair_form(Qa, Pa, p))
    excluded = list(excluded)
    if excluded:
        Ls = LineSet(excluded)
        blocked = np.zeros_like(hit)
        for k in range(len(Ls)):
            on_q = np.ones(len(Q), dtype=bool)
            in_pi = np.ones(len(planes), dtype=bool)
            for row in range(4):
                on_q &= vz.is_zero(vz.pair_form(Ls.dual[k:k + 1, row], Qa, p))[0]
                in_pi &= vz.is_zero(vz.pair_form(Ls.primal[k:k + 1, row], Pa, p))[0]
            blocked |= np.outer(on_q, in_pi)
        hit &= ~blocked
    return int(hit.sum())


# --- reguli against complexes -------------------------------------------------


def regulus_complex_count(C2: LineComplex, R: Regulus) -> int:
    """Number of lines of the regulus R lying in the complex C2 (0, 1 or 2).

    The regulus plane meets the hyperplane of C2 in a line of P^5; the lines
    sought are the quadric points of that line, i.e. the projective roots of a
    binary quadratic form.
    """
    F = R.field
    coeffs = [sum((n * b for n, b in zip(C2.normal, B)), F.zero) for B in R.basis]
    if all(c.is_zero() for c in coeffs):
        raise DegeneratePencilError("regulus plane lies inside the complex hyperplane")
    s1, s2 = kernel([coeffs])
    X1, X2 = R.combine(*s1), R.combine(*s2)
    half_q = lambda X: X[0] * X[3] + X[1] * X[4] + X[2] * X[5]
    a, b, c = half_q(X1), klein_form(X1, X2), half_q(X2)
    if a.is_zero() and b.is_zero() and c.is_zero():
        raise DegeneratePencilError("intersection line lies in the Klein quadric")
    if a.is_zero():
        # [1 : 0] is a root; the rest of a s^2 + b s t + c t^2 is t (b s + c t)
        return 2 if not b.is_zero() else 1
    disc = b * b - 4 * a * c
    if disc.is_zero():
        return 1
    return 2 if is_square_in_field(disc) else 0


def regulus_complex_count_exhaustive(C2: LineComplex, R: Regulus) -> int:
    """Same count by scanning every projective point of the regulus plane."""
    total = 0
    for P in R.plane_points():
        if sum((n * x for n, x in zip(C2.normal, P)), R.field.zero).is_zero() and on_quadric(P):
            total += 1
    return total


# --- bounds ---------------------------------------------------------------------

# name -> (parameter names, radicand, root degree, rational offset)
_FORMULAS = {
    # |Q_k| for lines with few coplanar: (n/k)^(3/2)
    "rich_points_generic": (("n", "k"), lambda n, k: (Fraction(n, k) ** 3, 2, Fraction(0))),
    # |Q_k| for lines in one regular complex: n^2/k^4 + n/k
    "rich_points_complex": (("n", "k"), lambda n, k: (Fraction(0), 1, Fraction(n * n, k ** 4) + Fraction(n, k))),
    # incidences of m points with n complex lines: m^(3/4) n^(1/2) + m + n
    "complex_incidences": (("m", "n"), lambda m, n: (Fraction(m ** 3 * n ** 2), 4, Fraction(m + n))),
    # incidences of m isotropic lines with n points: m^(3/4) n^(1/2) + n + m
    "isotropic_incidences": (("m", "n"), lambda m, n: (Fraction(m ** 3 * n ** 2), 4, Fraction(m + n))),
    # single-distance count for n points, any field: n^(8/5)
    "distance_pairs": (("n",), lambda n: (Fraction(n ** 8), 5, Fraction(0))),
    # single-distance count when -1 is a nonsquare and r != 0: n^(3/2)
    "distance_pairs_nonsplit": (("n",), lambda n: (Fraction(n ** 3), 2, Fraction(0))),
    # bichromatic line intersections: n^(3/2)
    "bichromatic_intersections": (("n",), lambda n: (Fraction(n ** 3), 2, Fraction(0))),
    # point-plane incidences: |Q|^(3/2) + K |Q|
    "point_plane": (("q", "K"), lambda q, K: (Fraction(q ** 3), 2, Fraction(K * q))),
}

FORMULA_IDS = tuple(_FORMULAS)


def ceil_root_plus(radicand: Fraction, degree: int, offset: Fraction) -> int:
    """Exact ceiling of radicand**(1/degree) + offset."""
    def at_least(c: int) -> bool:
        gap = c - offset
        return gap >= 0 and gap ** degree >= radicand

    guess = math.ceil(float(radicand) ** (1.0 / degree) + float(offset)) if radicand else math.ceil(offset)
    c = guess
    while at_least(c - 1):
        c -= 1
    while not at_least(c):
        c += 1
    return c


@dataclass(frozen=True)
class BoundReport:
    formula: str
    measured: int
    bound_value: int
    ratio: Fraction
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "formula": self.formula,
            "params": dict(self.params),
            "measured": self.measured,
            "bound_value": self.bound_value,
            "ratio": f"{self.ratio.numerator}/{self.ratio.denominator}",
            "ratio_float": float(self.ratio),
        }


def bound_value(formula: str, **params: int) -> int:
    try:
        names, build = _FORMULAS[formula]
    except KeyError:
        raise ValueError(f"unknown bound formula {formula!r}; known: {', '.join(FORMULA_IDS)}") from None
    missing = [n for n in names if n not in params]
    if missing:
        raise ValueError(f"formula {formula!r} needs {missing}")
    radicand, degree, offset = build(*(int(params[n]) for n in names))
    return ceil_root_plus(radicand, degree, offset)


def evaluate_bound(formula: str, measured: int, **params: int) -> BoundReport:
    """Compare a measured count with a bound evaluated at constant 1."""
    value = bound_value(formula, **params)
    return BoundReport(formula, int(measured), value, Fraction(int(measured), max(value, 1)), dict(params))


def regime_warnings(p: int, n: int, exponent: Fraction) -> list[str]:
    """Warn (never fail) when n exceeds p**exponent."""
    # n > p^(a/b)  <=>  n^b > p^a
    if n ** exponent.denominator > p ** exponent.numerator:
        msg = f"n={n} exceeds p^{exponent} for p={p}; outside the bound's stated regime"
        warnings.warn(msg, RegimeWarning, stacklevel=2)
        return [msg]
    return []
