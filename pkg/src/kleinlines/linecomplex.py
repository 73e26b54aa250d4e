"""Regular linear line complexes and the sphere-to-line map.

A sphere with centre a = (x, y, z) and radius r maps to the line

    phi(a, r) = [1 : r - z : x - iy : r^2 - |a|^2 : -(z + r) : x + iy]

of the complex C_r with normal N_r = [2r : -1 : 0 : 0 : 1 : 0].  Two such
lines meet iff |a - b| = (r1 - r2)^2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .algebra import FieldElement, PrimeField, det, dot, matvec
from .klein import (
    GeometryError,
    PlaneCoords,
    PluckerLine,
    ProjectivePoint3,
    skew_matrix,
)


class SingularComplexError(GeometryError):
    pass


class InsufficientFieldError(ValueError):
    pass


@dataclass(frozen=True)
class LineComplex:
    """Lines whose Klein image lies in the hyperplane N . P = 0."""

    normal: tuple[FieldElement, ...]
    regular: bool = field(init=False)

    def __post_init__(self):
        if len(self.normal) != 6 or all(c.is_zero() for c in self.normal):
            raise GeometryError("a complex normal is a nonzero 6-tuple")
        n, m = self.normal[:3], self.normal[3:]
        object.__setattr__(self, "regular", not dot(n, m).is_zero())

    @property
    def field(self) -> PrimeField:
        return self.normal[0].field

    def null_polarity(self) -> "NullPolarity":
        return NullPolarity(self.normal)


@dataclass(frozen=True)
class NullPolarity:
    """The skew 4x4 matrix M with x^T M y = N . P(x, y)."""

    normal: tuple[FieldElement, ...]

    @property
    def matrix(self) -> list[list[FieldElement]]:
        return skew_matrix(self.normal)

    def determinant(self) -> FieldElement:
        return det(self.matrix)

    def nonsingular(self) -> bool:
        return not self.determinant().is_zero()

    def bilinear(self, x: ProjectivePoint3, y: ProjectivePoint3) -> FieldElement:
        return dot(x.coords, matvec(self.matrix, y.coords))

    def plane(self, q: ProjectivePoint3) -> PlaneCoords:
        return PlaneCoords(matvec(self.matrix, q.coords))


@dataclass(frozen=True)
class SpherePoint:
    center: tuple[FieldElement, FieldElement, FieldElement]
    radius: FieldElement

    @classmethod
    def of(cls, F: PrimeField, center: Sequence, radius) -> "SpherePoint":
        return cls(F.vector(center), F(radius))

    @property
    def field(self) -> PrimeField:
        return self.radius.field


def phi_map(s: SpherePoint) -> PluckerLine:
    x, y, z = s.center
    r = s.radius
    i = r.field.i
    return PluckerLine((
        r.field.one,
        r - z,
        x - i * y,
        r * r - x * x - y * y - z * z,
        -(z + r),
        x + i * y,
    ))


def phi(F: PrimeField, center: Sequence, radius) -> PluckerLine:
    """Shorthand for ``phi_map(SpherePoint.of(F, center, radius))``."""
    return phi_map(SpherePoint.of(F, center, radius))


def normal_for_radius(r: FieldElement) -> LineComplex:
    F = r.field
    return LineComplex((2 * r, -F.one, F.zero, F.zero, F.one, F.zero))


def contains_line(C: LineComplex, l: PluckerLine) -> bool:
    return dot(C.normal, l.coords).is_zero()


def pencil_plane(C: LineComplex, q: ProjectivePoint3) -> PlaneCoords:
    """The plane holding every line of C through q."""
    if not C.regular:
        raise SingularComplexError("pencil planes need a regular complex")
    return C.null_polarity().plane(q)


@dataclass(frozen=True)
class IsotropicWitness:
    """Line of sphere centres forced by a concurrency or coplanarity.

    ``base`` is a point of that line (None when no complex line can realise the
    configuration) and ``direction`` its isotropic direction vector.
    """

    direction: tuple[FieldElement, FieldElement, FieldElement]
    base: Optional[tuple[FieldElement, FieldElement, FieldElement]]
    branch: str

    def point(self, t) -> tuple[FieldElement, ...]:
        if self.base is None:
            raise GeometryError("witness has no realisable base point")
        return tuple(b + t * d for b, d in zip(self.base, self.direction))


def _alpha_beta(w: FieldElement) -> tuple[FieldElement, FieldElement]:
    w_inv = w.inverse()
    return w_inv - w, w_inv + w


def isotropic_witness_concurrent(u: ProjectivePoint3, r) -> IsotropicWitness:
    """Centres a whose lines phi(a, r) all pass through u lie on this line."""
    F = u.field
    r = F(r)
    i, one, zero = F.i, F.one, F.zero
    two_inv = F(2).inverse()
    if u.at_infinity:
        # all lines share omega = (1, r - z, x - iy)
        _, u1, u2, u3 = u.coords
        base = None
        if not u1.is_zero():
            w2, w3 = u2 / u1, u3 / u1
            base = (w3, zero, r - w2)
        return IsotropicWitness((one, -i, zero), base, "infinity")
    u1, u2, u3 = u.affine_coords()
    if u1.is_zero():
        return IsotropicWitness((one, i, zero), (-u2, zero, -u3 - r), "axis")
    alpha, beta = _alpha_beta(u1)
    c = u3 / u1
    base = ((beta * r + c - u2) * two_inv, i * (alpha * r + c + u2) * two_inv, zero)
    return IsotropicWitness((alpha, i * beta, F(2)), base, "generic")


def isotropic_witness_coplanar(u: Sequence, r) -> IsotropicWitness:
    """Centres a whose lines phi(a, r) lie in the plane (1 : u1 : u2 : u3)."""
    u1, u2, u3 = u
    F = u1.field
    r = F(r)
    i, one, zero = F.i, F.one, F.zero
    two_inv = F(2).inverse()
    if u2.is_zero() and u3.is_zero():
        raise GeometryError("coplanarity witness needs u2 or u3 nonzero")
    if u3.is_zero():
        u2_inv = u2.inverse()
        return IsotropicWitness((one, i, zero), (u2_inv, zero, r + u1 * u2_inv), "u3=0")
    if u2.is_zero():
        u3_inv = u3.inverse()
        return IsotropicWitness((one, -i, zero), (-u1 * u3_inv, zero, u3_inv - r), "u2=0")
    alpha, beta = _alpha_beta(u3 / u2)
    c1 = u2.inverse() - u1 / u3
    c2 = u2.inverse() + u1 / u3
    base = ((c1 - beta * r) * two_inv, i * (-alpha * r - c2) * two_inv, zero)
    return IsotropicWitness((alpha, i * beta, F(2)), base, "generic")


def generate_concurrent_family(u: ProjectivePoint3, r, count: int) -> list[SpherePoint]:
    """``count`` sphere centres whose C_r lines all pass through the affine point u."""
    F = u.field
    r = F(r)
    if u.at_infinity or u.coords[1].is_zero():
        raise GeometryError("concurrent family needs an affine u with nonzero first coordinate")
    if count > F.p:
        raise InsufficientFieldError(f"cannot place {count} distinct centres over F_{F.p}")
    witness = isotropic_witness_concurrent(u, r)
    # direction has third entry 2, so z sweeps 0, 1, 2, ... as t sweeps 0, 1/2, 1, ...
    half = F(2).inverse()
    return [SpherePoint(witness.point(half * z), r) for z in range(count)]
