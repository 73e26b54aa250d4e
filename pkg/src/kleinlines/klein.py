"""Lines of P^3 as points of the Klein quadric in P^5.

Plücker 6-tuples are ordered ``[P01 : P02 : P03 : P23 : P31 : P12]`` and split
as ``[omega : v]``.  Note slot five is P31, not P13.  The quadric is
``omega . v = P01*P23 + P02*P31 + P03*P12 = 0``.

All projective objects are stored in canonical form (first nonzero coordinate
scaled to 1), so ``==`` and ``hash`` are projective equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .algebra import FieldElement, PrimeField, dot, kernel, matvec, rank


class GeometryError(ValueError):
    """Invalid geometric input (coincident points, skew lines, ...)."""


class CoincidentPointsError(GeometryError):
    pass


class SkewLinesError(GeometryError):
    pass


class IdenticalLinesError(GeometryError):
    pass


class NotOnQuadricError(GeometryError):
    pass


class DegenerateRankError(GeometryError):
    pass


def canonical(coords: Sequence[FieldElement]) -> tuple[FieldElement, ...]:
    """Scale a homogeneous tuple so its first nonzero entry is 1."""
    for c in coords:
        if not c.is_zero():
            if c.re == 1 and c.im == 0:
                return tuple(coords)
            inv = c.inverse()
            return tuple(x * inv for x in coords)
    raise GeometryError("homogeneous coordinates must not all vanish")


class _Projective:
    __slots__ = ("coords",)

    size = 0

    def __init__(self, coords: Sequence[FieldElement]):
        if len(coords) != self.size:
            raise GeometryError(f"{type(self).__name__} needs {self.size} coordinates")
        self.coords = canonical(coords)

    @property
    def field(self) -> PrimeField:
        return self.coords[0].field

    def __eq__(self, other) -> bool:
        return type(other) is type(self) and other.coords == self.coords

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.coords))

    def __iter__(self) -> Iterator[FieldElement]:
        return iter(self.coords)

    def __getitem__(self, k: int) -> FieldElement:
        return self.coords[k]

    def __repr__(self) -> str:
        return f"{type(self).__name__}({':'.join(map(repr, self.coords))})"

    def __reduce__(self):
        return (type(self), (self.coords,))


class ProjectivePoint3(_Projective):
    """A point (x0 : x1 : x2 : x3) of P^3; the affine chart is x0 = 1."""

    __slots__ = ()
    size = 4

    @classmethod
    def affine(cls, field: PrimeField, x, y, z) -> "ProjectivePoint3":
        return cls((field.one, field(x), field(y), field(z)))

    @classmethod
    def of(cls, field: PrimeField, *coords) -> "ProjectivePoint3":
        return cls(field.vector(coords))

    @property
    def at_infinity(self) -> bool:
        return self.coords[0].is_zero()

    def affine_coords(self) -> tuple[FieldElement, FieldElement, FieldElement]:
        if self.at_infinity:
            raise GeometryError("point at infinity has no affine coordinates")
        return self.coords[1], self.coords[2], self.coords[3]


class PlaneCoords(_Projective):
    """A plane of P^3; point q lies on it iff the two 4-tuples have zero dot product."""

    __slots__ = ()
    size = 4

    @classmethod
    def of(cls, field: PrimeField, *coords) -> "PlaneCoords":
        return cls(field.vector(coords))

    def contains(self, q: ProjectivePoint3) -> bool:
        return dot(self.coords, q.coords).is_zero()


class PluckerLine(_Projective):
    """The Klein image [omega : v] of a line in P^3."""

    __slots__ = ()
    size = 6

    def __init__(self, coords: Sequence[FieldElement]):
        super().__init__(coords)
        if not on_quadric(self.coords):
            raise NotOnQuadricError(f"{self.coords} is not on the Klein quadric")

    @classmethod
    def of(cls, field: PrimeField, *coords) -> "PluckerLine":
        return cls(field.vector(coords))

    @property
    def omega(self) -> tuple[FieldElement, FieldElement, FieldElement]:
        return self.coords[:3]

    @property
    def v(self) -> tuple[FieldElement, FieldElement, FieldElement]:
        return self.coords[3:]

    def dual_matrix(self) -> list[list[FieldElement]]:
        """4x4 skew matrix W with W q = 0 exactly for points q on the line."""
        return skew_matrix(involution(self.coords))

    def primal_matrix(self) -> list[list[FieldElement]]:
        """4x4 skew matrix L with L pi = 0 exactly for planes pi containing the line."""
        return skew_matrix(self.coords)

    def spanning_points(self) -> tuple[ProjectivePoint3, ProjectivePoint3]:
        """Two distinct points on the line, read off the primal matrix columns."""
        cols = list(zip(*self.primal_matrix()))
        first = None
        for col in cols:
            if any(not c.is_zero() for c in col):
                if first is None:
                    first = col
                elif rank([first, col]) == 2:
                    return ProjectivePoint3(first), ProjectivePoint3(col)
        raise DegenerateRankError("primal matrix has rank < 2")

    def points(self) -> Iterator[ProjectivePoint3]:
        """Every point of the line over the coordinate field (p+1 or p^2+1 of them)."""
        a, b = self.spanning_points()
        field = self.field
        yield b
        for t in _all_elements(field):
            yield ProjectivePoint3(tuple(x + t * y for x, y in zip(a.coords, b.coords)))


def _all_elements(field: PrimeField) -> Iterator[FieldElement]:
    if field.split:
        yield from field.elements()
    else:
        for re in range(field.p):
            for im in range(field.p):
                yield field(re, im)


# index pairs for the Plücker slots P01, P02, P03, P23, P31, P12
PLUCKER_PAIRS = ((0, 1), (0, 2), (0, 3), (2, 3), (3, 1), (1, 2))


def skew_matrix(six: Sequence[FieldElement]) -> list[list[FieldElement]]:
    """4x4 antisymmetric matrix with entries M_ij read from a 6-tuple in Plücker order."""
    field = six[0].field
    m = [[field.zero] * 4 for _ in range(4)]
    for (i, j), val in zip(PLUCKER_PAIRS, six):
        m[i][j] = val
        m[j][i] = -val
    return m


def plucker_from_points(a: ProjectivePoint3, b: ProjectivePoint3) -> PluckerLine:
    if a == b:
        raise CoincidentPointsError("a line needs two distinct points")
    x, y = a.coords, b.coords
    return PluckerLine(tuple(x[i] * y[j] - x[j] * y[i] for i, j in PLUCKER_PAIRS))


def plucker_from_direction(point: Sequence, direction: Sequence, field: PrimeField) -> PluckerLine:
    """Affine line through ``point`` with direction vector ``direction``."""
    a = ProjectivePoint3.affine(field, *point)
    b = ProjectivePoint3((field.zero,) + field.vector(direction))
    return plucker_from_points(a, b)


def _six(P) -> tuple[FieldElement, ...]:
    coords = P.coords if isinstance(P, _Projective) else tuple(P)
    if len(coords) != 6:
        raise GeometryError("expected a 6-tuple")
    return coords


def on_quadric(P) -> bool:
    P = _six(P)
    if all(c.is_zero() for c in P):
        raise GeometryError("the zero 6-tuple is not a projective point")
    return (P[0] * P[3] + P[1] * P[4] + P[2] * P[5]).is_zero()


def involution(P) -> tuple[FieldElement, ...]:
    """Swap the halves: [omega : v] -> [v : omega]."""
    P = _six(P)
    return P[3:] + P[:3]


def klein_form(P, Q) -> FieldElement:
    """The polar form omega . v' + omega' . v of the quadric."""
    P, Q = _six(P), _six(Q)
    return (P[0] * Q[3] + P[1] * Q[4] + P[2] * Q[5]
            + Q[0] * P[3] + Q[1] * P[4] + Q[2] * P[5])


def meets(l1: PluckerLine, l2: PluckerLine) -> bool:
    return klein_form(l1, l2).is_zero()


def meets_involuted(l1: PluckerLine, l2: PluckerLine) -> bool:
    """Same predicate written as P . I(P') = 0."""
    return dot(_six(l1), involution(l2)).is_zero()


def is_isotropic(direction: Sequence[FieldElement]) -> bool:
    if len(direction) != 3:
        raise GeometryError("direction must be a 3-tuple")
    if all(c.is_zero() for c in direction):
        raise GeometryError("zero direction vector")
    return dot(direction, direction).is_zero()


def point_on_line(q: ProjectivePoint3, l: PluckerLine) -> bool:
    return all(c.is_zero() for c in matvec(l.dual_matrix(), q.coords))


def line_in_plane(l: PluckerLine, plane: PlaneCoords) -> bool:
    return all(c.is_zero() for c in matvec(l.primal_matrix(), plane.coords))


def intersection_point(l1: PluckerLine, l2: PluckerLine) -> ProjectivePoint3:
    if l1 == l2:
        raise IdenticalLinesError("identical lines have no unique common point")
    if not meets(l1, l2):
        raise SkewLinesError("lines are skew")
    basis = kernel(l1.dual_matrix() + l2.dual_matrix())
    if len(basis) != 1:
        raise DegenerateRankError(f"expected a 1-dimensional kernel, got {len(basis)}")
    return ProjectivePoint3(basis[0])


def common_plane(l1: PluckerLine, l2: PluckerLine) -> PlaneCoords:
    if l1 == l2:
        raise IdenticalLinesError("identical lines have no unique common plane")
    if not meets(l1, l2):
        raise SkewLinesError("lines are skew")
    basis = kernel(l1.primal_matrix() + l2.primal_matrix())
    if len(basis) != 1:
        raise DegenerateRankError(f"expected a 1-dimensional kernel, got {len(basis)}")
    return PlaneCoords(basis[0])


def tangent_hyperplane(P0: PluckerLine) -> tuple[FieldElement, ...]:
    """Normal of the tangent hyperplane to the quadric at P0.

    A line lies in the hyperplane (plain dot product zero) iff it meets P0.
    """
    if not on_quadric(P0):
        raise NotOnQuadricError("tangent hyperplane needs a quadric point")
    return involution(P0)


@dataclass(frozen=True)
class Regulus:
    """A 2-plane of P^5, given by three basis 6-tuples; its quadric points form a conic of lines."""

    basis: tuple[tuple[FieldElement, ...], tuple[FieldElement, ...], tuple[FieldElement, ...]]

    @property
    def field(self) -> PrimeField:
        return self.basis[0][0].field

    def combine(self, s, t, u) -> tuple[FieldElement, ...]:
        b0, b1, b2 = self.basis
        return tuple(s * x + t * y + u * z for x, y, z in zip(b0, b1, b2))

    def plane_points(self) -> Iterator[tuple[FieldElement, ...]]:
        """All projective points of the plane over the coordinate field, one representative each."""
        F = self.field
        zero, one = F.zero, F.one
        yield self.combine(zero, zero, one)
        for t in _all_elements(F):
            yield self.combine(zero, one, t)
        for t in _all_elements(F):
            for u in _all_elements(F):
                yield self.combine(one, t, u)

    def lines(self) -> list[PluckerLine]:
        """Quadric points of the plane (exhaustive scan)."""
        return [PluckerLine(P) for P in self.plane_points() if on_quadric(P)]


def regulus_through(l1: PluckerLine, l2: PluckerLine, l3: PluckerLine) -> Regulus:
    """The 2-plane spanned by three Klein images."""
    return Regulus((l1.coords, l2.coords, l3.coords))


def regulus_complement(l1: PluckerLine, l2: PluckerLine, l3: PluckerLine) -> Regulus:
    """The plane of all common transversals of three pairwise skew lines."""
    if meets(l1, l2) or meets(l1, l3) or meets(l2, l3):
        raise GeometryError("regulus_complement needs pairwise skew lines")
    basis = kernel([tangent_hyperplane(l) for l in (l1, l2, l3)])
    if len(basis) != 3:
        raise DegenerateRankError(f"expected a 3-dimensional kernel, got {len(basis)}")
    return Regulus(tuple(basis))


def planes_skew(r1: Regulus, r2: Regulus) -> bool:
    """True iff two 2-planes of P^5 share no projective point."""
    return rank(list(r1.basis) + list(r2.basis)) == 6
