"""Quick invariant suites run by ``kleinlines selftest``.

Predicates are looked up through their modules at call time, so a patched
(mutated) predicate is caught.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Iterator

from . import algebra, klein, linecomplex


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    total: int = 0
    first_failure: str | None = None

    @property
    def ok(self) -> bool:
        return self.passed == self.total

    def record(self, label: str, check: Callable[[], bool]) -> None:
        self.total += 1
        try:
            good = bool(check())
        except Exception as exc:  # a crash inside a check is a failure, not an abort
            good = False
            label = f"{label} ({type(exc).__name__}: {exc})"
        if good:
            self.passed += 1
        elif self.first_failure is None:
            self.first_failure = label


def _random_point(F, rng) -> "klein.ProjectivePoint3":
    while True:
        coords = [F(rng.randrange(F.p), 0 if F.split else rng.randrange(F.p)) for _ in range(4)]
        if any(not c.is_zero() for c in coords):
            return klein.ProjectivePoint3(coords)


def _random_line(F, rng):
    while True:
        a, b = _random_point(F, rng), _random_point(F, rng)
        if a != b:
            return klein.plucker_from_points(a, b), a, b


def algebra_suite(primes=(7, 13), seed: int = 0) -> SuiteResult:
    res = SuiteResult("algebra")
    rng = random.Random(seed)
    for p in primes:
        F = algebra.PrimeField(p)
        squares = {x * x % p for x in range(p)}
        for v in range(p):
            res.record(f"euler criterion p={p} v={v}", lambda: algebra.is_square(F(v)) == (v in squares))
        res.record(f"i^2 = -1 p={p}", lambda: F.i * F.i == F(-1))
        for _ in range(20):
            a = F(rng.randrange(1, p), 0 if F.split else rng.randrange(p))
            b, c = F(rng.randrange(p)), F(rng.randrange(p))
            res.record(f"inverse p={p} a={a}", lambda: a * a.inverse() == F.one)
            res.record(f"associativity p={p}", lambda: (a + b) + c == a + (b + c) and (a * b) * c == a * (b * c))
            res.record(f"distributivity p={p}", lambda: a * (b + c) == a * b + a * c)
        for _ in range(10):
            rows = [[F(rng.randrange(3)) for _ in range(5)] for _ in range(3)]
            basis = algebra.kernel(rows)
            res.record(f"rank-nullity p={p}", lambda: algebra.rank(rows) + len(basis) == 5)
            res.record(f"kernel vectors p={p}",
                       lambda: all(all(x.is_zero() for x in algebra.matvec(rows, v)) for v in basis))
    return res


def klein_suite(primes=(7, 13), samples: int = 40, seed: int = 0) -> SuiteResult:
    res = SuiteResult("klein")
    rng = random.Random(seed)
    for p in primes:
        F = algebra.PrimeField(p)
        for _ in range(samples):
            (l1, a1, b1), (l2, a2, b2) = _random_line(F, rng), _random_line(F, rng)
            res.record(f"plucker relation p={p}", lambda: klein.on_quadric(l1.coords))
            res.record(f"meets symmetric p={p}", lambda: klein.meets(l1, l2) == klein.meets(l2, l1))
            res.record(f"meets involuted form p={p}", lambda: klein.meets(l1, l2) == klein.meets_involuted(l1, l2))
            res.record(f"meets vs coplanarity rank p={p}",
                       lambda: klein.meets(l1, l2) == (algebra.rank([a1.coords, b1.coords, a2.coords, b2.coords]) < 4))
            q = _random_point(F, rng)
            res.record(f"point_on_line vs span rank p={p}",
                       lambda: klein.point_on_line(q, l1) == (algebra.rank([a1.coords, b1.coords, q.coords]) < 3))
            res.record(f"spanning points on line p={p}",
                       lambda: klein.point_on_line(a1, l1) and klein.point_on_line(b1, l1))
            res.record(f"involution is involutive p={p}",
                       lambda: klein.involution(klein.involution(l1.coords)) == l1.coords)
    return res


def complex_suite(primes=(5, 7, 13), seed: int = 0) -> SuiteResult:
    res = SuiteResult("complex")
    rng = random.Random(seed)
    for p in primes:
        F = algebra.PrimeField(p)
        grid = list(itertools.product(range(2), repeat=3))
        radii = [0, 1, 2]
        lines = {(a, r): linecomplex.phi(F, a, r) for a in grid for r in radii}
        for (a, r), l in lines.items():
            C = linecomplex.normal_for_radius(F(r))
            res.record(f"phi on quadric p={p} a={a} r={r}", lambda: klein.on_quadric(l.coords))
            res.record(f"phi in complex p={p} a={a} r={r}", lambda: linecomplex.contains_line(C, l))
            res.record(f"complex regular p={p} r={r}", lambda: C.regular and C.null_polarity().nonsingular())
        for (a, r1), (b, r2) in itertools.product(lines, repeat=2):
            dist = sum((x - y) ** 2 for x, y in zip(a, b)) % p
            res.record(f"distance iff meet p={p} a={a} b={b} r1={r1} r2={r2}",
                       lambda: klein.meets(lines[a, r1], lines[b, r2]) == (dist == (r1 - r2) ** 2 % p))
        for _ in range(10):
            q = _random_point(F, rng)
            C = linecomplex.normal_for_radius(F(rng.randrange(p)))
            plane = linecomplex.pencil_plane(C, q)
            res.record(f"q on its pencil plane p={p}", lambda: plane.contains(q))
    return res


SUITES = (algebra_suite, klein_suite, complex_suite)


def run_selftest() -> Iterator[SuiteResult]:
    for suite in SUITES:
        try:
            yield suite()
        except Exception as exc:  # setup itself tripped over a broken invariant
            name = suite.__name__.removesuffix("_suite")
            yield SuiteResult(name, 0, 1, f"suite aborted ({type(exc).__name__}: {exc})")
