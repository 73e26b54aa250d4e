"""Exact arithmetic in F_p and F_p[i], and small dense linear algebra over it.

When p = 3 (mod 4) the element ``re + im*i`` lives in the genuine quadratic
extension F_p[t]/(t^2 + 1).  When p = 1 (mod 4), -1 already has a square root
in F_p, so ``i`` is embedded as the canonical root (the smaller one) and every
element is reduced to the base field; the ring F_p[t]/(t^2 + 1) is never used.
"""

from __future__ import annotations

from typing import Iterator, Optional, Sequence

from sympy import isprime
from sympy.ntheory.residue_ntheory import sqrt_mod

MAX_MATRIX_DIM = 8


class PrimeField:
    """The prime field F_p together with a choice of square root of -1."""

    __slots__ = ("p", "i_witness", "_zero", "_one", "_i")

    def __init__(self, p: int):
        p = int(p)
        if p == 2 or not isprime(p):
            raise ValueError(f"modulus must be an odd prime, got {p}")
        self.p = p
        # 2 is invertible for every odd p; the concurrency equations divide by it.
        self.i_witness: Optional[int] = None
        if p % 4 == 1:
            self.i_witness = min(sqrt_mod(p - 1, p, all_roots=True))
        self._zero = FieldElement._make(0, 0, self)
        self._one = FieldElement._make(1, 0, self)
        if self.i_witness is None:
            self._i = FieldElement._make(0, 1, self)
        else:
            self._i = FieldElement._make(self.i_witness, 0, self)

    @property
    def split(self) -> bool:
        """True when -1 is a square in F_p, so F_p[i] = F_p."""
        return self.i_witness is not None

    @property
    def zero(self) -> "FieldElement":
        return self._zero

    @property
    def one(self) -> "FieldElement":
        return self._one

    @property
    def i(self) -> "FieldElement":
        return self._i

    def __call__(self, re: int | "FieldElement" = 0, im: int = 0) -> "FieldElement":
        if isinstance(re, FieldElement):
            if re.field is not self:
                if re.field != self:
                    raise ValueError("element belongs to a different field")
                return FieldElement._make(re.re, re.im, self)
            return re
        p = self.p
        re %= p
        im %= p
        if im and self.i_witness is not None:
            return FieldElement._make((re + im * self.i_witness) % p, 0, self)
        return FieldElement._make(re, im, self)

    def elements(self) -> Iterator["FieldElement"]:
        """Iterate over the base field F_p in the order 0, 1, ..., p-1."""
        for v in range(self.p):
            yield FieldElement._make(v, 0, self)

    def vector(self, values: Sequence) -> tuple["FieldElement", ...]:
        return tuple(self(v) for v in values)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("PrimeField", self.p))

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"

    def __reduce__(self):
        return (PrimeField, (self.p,))


class FieldElement:
    """An element ``re + im*i`` of F_p[i] with least nonnegative residues.

    ``im`` is always 0 when the field is split (p = 1 mod 4).
    """

    __slots__ = ("re", "im", "field")

    re: int
    im: int
    field: PrimeField

    @classmethod
    def _make(cls, re: int, im: int, field: PrimeField) -> "FieldElement":
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        obj.field = field
        return obj

    def __init__(self, re: int, im: int, field: PrimeField):
        e = field(re, im)
        self.re, self.im, self.field = e.re, e.im, field

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field.p != self.field.p:
                raise ValueError("cannot mix elements of different fields")
            return other
        if isinstance(other, int):
            return self.field(other)
        return NotImplemented

    @property
    def in_base_field(self) -> bool:
        return self.im == 0

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __add__(self, other) -> "FieldElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.field.p
        return FieldElement._make((self.re + o.re) % p, (self.im + o.im) % p, self.field)

    __radd__ = __add__

    def __sub__(self, other) -> "FieldElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.field.p
        return FieldElement._make((self.re - o.re) % p, (self.im - o.im) % p, self.field)

    def __rsub__(self, other) -> "FieldElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self) -> "FieldElement":
        p = self.field.p
        return FieldElement._make(-self.re % p, -self.im % p, self.field)

    def __mul__(self, other) -> "FieldElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.field.p
        a, b, c, d = self.re, self.im, o.re, o.im
        if not b and not d:
            return FieldElement._make(a * c % p, 0, self.field)
        return FieldElement._make((a * c - b * d) % p, (a * d + b * c) % p, self.field)

    __rmul__ = __mul__

    def conjugate(self) -> "FieldElement":
        return FieldElement._make(self.re, -self.im % self.field.p, self.field)

    def norm(self) -> int:
        """Norm down to F_p; equals re^2 when the field is split."""
        p = self.field.p
        return (self.re * self.re + self.im * self.im) % p

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        p = self.field.p
        if not self.im:
            return FieldElement._make(pow(self.re, -1, p), 0, self.field)
        # only reachable for p = 3 mod 4, where the norm never vanishes
        n_inv = pow(self.norm(), -1, p)
        return FieldElement._make(self.re * n_inv % p, -self.im * n_inv % p, self.field)

    def __truediv__(self, other) -> "FieldElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other) -> "FieldElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, exponent: int) -> "FieldElement":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = self.field.one
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.re == other.re and self.im == other.im and self.field.p == other.field.p
        if isinstance(other, int):
            p = self.field.p
            return self.im == 0 and self.re == other % p
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.re, self.im, self.field.p))

    def __int__(self) -> int:
        if self.im:
            raise ValueError(f"{self!r} is not in the base field")
        return self.re

    def __repr__(self) -> str:
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        return f"{self.re}+{self.im}i"

    def __reduce__(self):
        return (_rebuild_element, (self.re, self.im, self.field.p))


def _rebuild_element(re: int, im: int, p: int) -> FieldElement:
    return FieldElement._make(re, im, PrimeField(p))


def is_square(e: FieldElement) -> bool:
    """Euler's criterion for a base-field element; zero counts as a square."""
    if e.im:
        raise ValueError("is_square expects a base-field element")
    p = e.field.p
    return e.re == 0 or pow(e.re, (p - 1) // 2, p) == 1


def is_square_in_field(e: FieldElement) -> bool:
    """Whether e is a square in F_p[i], the field the geometry lives in.

    For p = 3 (mod 4) this is F_{p^2}, where every element of F_p is a square
    and x is a square iff its norm is a square in F_p.
    """
    if e.field.split:
        return is_square(e)
    if e.is_zero() or not e.im:
        return True
    p = e.field.p
    return pow(e.norm(), (p - 1) // 2, p) == 1


def sqrt(e: FieldElement) -> Optional[FieldElement]:
    """Square root of a base-field element, choosing the smaller representative."""
    if e.im:
        raise ValueError("sqrt is only defined here for base-field elements")
    if e.re == 0:
        return e.field.zero
    roots = sqrt_mod(e.re, e.field.p, all_roots=True)
    if not roots:
        return None
    return e.field(min(roots))


# --- linear algebra -------------------------------------------------------


def _check_dims(rows: Sequence[Sequence[FieldElement]]) -> tuple[int, int]:
    n_rows = len(rows)
    n_cols = len(rows[0]) if n_rows else 0
    if n_rows > MAX_MATRIX_DIM or n_cols > MAX_MATRIX_DIM:
        raise ValueError(f"matrix {n_rows}x{n_cols} exceeds {MAX_MATRIX_DIM}x{MAX_MATRIX_DIM}")
    if any(len(r) != n_cols for r in rows):
        raise ValueError("ragged matrix")
    return n_rows, n_cols


def rref(rows: Sequence[Sequence[FieldElement]]) -> tuple[list[list[FieldElement]], list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    _check_dims(rows)
    return _rref(rows)


def _rref(rows):
    n_rows = len(rows)
    n_cols = len(rows[0]) if n_rows else 0
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        pivot = next((k for k in range(r, n_rows) if not m[k][c].is_zero()), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for k in range(n_rows):
            if k != r and not m[k][c].is_zero():
                f = m[k][c]
                m[k] = [a - f * b for a, b in zip(m[k], m[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return m, pivots


def rank(rows: Sequence[Sequence[FieldElement]]) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def kernel(rows: Sequence[Sequence[FieldElement]]) -> list[tuple[FieldElement, ...]]:
    """Basis of the right null space {v : M v = 0}; empty iff M is injective."""
    n_rows, n_cols = _check_dims(rows)
    if n_rows == 0:
        raise ValueError("kernel of an empty matrix needs an explicit column count")
    field = rows[0][0].field
    m, pivots = rref(rows)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        v = [field.zero] * n_cols
        v[f] = field.one
        for r, c in enumerate(pivots):
            v[c] = -m[r][f]
        basis.append(tuple(v))
    return basis


def solve(rows: Sequence[Sequence[FieldElement]], rhs: Sequence[FieldElement]) -> Optional[tuple[FieldElement, ...]]:
    """One solution of M x = rhs, or None if the system is inconsistent."""
    n_rows, n_cols = _check_dims(rows)
    if len(rhs) != n_rows:
        raise ValueError("right-hand side length mismatch")
    field = rows[0][0].field
    m, pivots = _rref([list(r) + [b] for r, b in zip(rows, rhs)])
    if n_cols in pivots:
        return None
    x = [field.zero] * n_cols
    for r, c in enumerate(pivots):
        x[c] = m[r][n_cols]
    return tuple(x)


def det(rows: Sequence[Sequence[FieldElement]]) -> FieldElement:
    n_rows, n_cols = _check_dims(rows)
    if n_rows != n_cols:
        raise ValueError("determinant of a non-square matrix")
    field = rows[0][0].field
    m = [list(r) for r in rows]
    result = field.one
    for c in range(n_cols):
        pivot = next((k for k in range(c, n_rows) if not m[k][c].is_zero()), None)
        if pivot is None:
            return field.zero
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            result = -result
        result = result * m[c][c]
        inv = m[c][c].inverse()
        for k in range(c + 1, n_rows):
            if not m[k][c].is_zero():
                f = m[k][c] * inv
                m[k] = [a - f * b for a, b in zip(m[k], m[c])]
    return result


def matvec(rows: Sequence[Sequence[FieldElement]], v: Sequence[FieldElement]) -> tuple[FieldElement, ...]:
    out = []
    for row in rows:
        acc = row[0] * v[0]
        for a, b in zip(row[1:], v[1:]):
            acc = acc + a * b
        out.append(acc)
    return tuple(out)


def dot(u: Sequence[FieldElement], v: Sequence[FieldElement]) -> FieldElement:
    acc = u[0] * v[0]
    for a, b in zip(u[1:], v[1:]):
        acc = acc + a * b
    return acc
