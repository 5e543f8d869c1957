"""2x2 matrices over a finite field.

These represent the right translations of the constructed loops: the
scalar matrices b*I together with the family

    section_matrix(f, a, b) = [[r - b, f(b)/(-a)], [a, b]]   (a != 0)

which fills out the full conjugacy class of matrices whose characteristic
polynomial is the irreducible quadratic f(x) = x^2 - r*x + s.  Entries are
stored as integer element codes; row vectors act on the right.
"""

from __future__ import annotations

from .fields import FieldElement, FieldMismatchError, FiniteField, Quadratic


class SingularMatrixError(ValueError):
    """Raised when inverting a matrix with determinant zero."""


def _code(x) -> int:
    return x.code if isinstance(x, FieldElement) else int(x)


class Mat2:
    """Immutable 2x2 matrix with entries stored as field element codes."""

    __slots__ = ("field", "e11", "e12", "e21", "e22")

    def __init__(self, field: FiniteField, e11, e12, e21, e22):
        self.field = field
        self.e11 = _code(e11)
        self.e12 = _code(e12)
        self.e21 = _code(e21)
        self.e22 = _code(e22)

    @classmethod
    def identity(cls, field: FiniteField) -> "Mat2":
        return cls(field, 1, 0, 0, 1)

    @classmethod
    def scalar(cls, field: FiniteField, b) -> "Mat2":
        b = _code(b)
        return cls(field, b, 0, 0, b)

    @property
    def codes(self) -> tuple:
        return ((self.e11, self.e12), (self.e21, self.e22))

    def entry(self, i: int, j: int) -> FieldElement:
        return self.field.element(self.codes[i][j])

    def __mul__(self, other: "Mat2") -> "Mat2":
        if not isinstance(other, Mat2):
            return NotImplemented
        if self.field != other.field:
            raise FieldMismatchError("matrices over different fields")
        f = self.field
        return Mat2(
            f,
            f.add_c(f.mul_c(self.e11, other.e11), f.mul_c(self.e12, other.e21)),
            f.add_c(f.mul_c(self.e11, other.e12), f.mul_c(self.e12, other.e22)),
            f.add_c(f.mul_c(self.e21, other.e11), f.mul_c(self.e22, other.e21)),
            f.add_c(f.mul_c(self.e21, other.e12), f.mul_c(self.e22, other.e22)),
        )

    def scale(self, c) -> "Mat2":
        f, c = self.field, _code(c)
        return Mat2(
            f,
            f.mul_c(c, self.e11),
            f.mul_c(c, self.e12),
            f.mul_c(c, self.e21),
            f.mul_c(c, self.e22),
        )

    def det_code(self) -> int:
        f = self.field
        return f.sub_c(f.mul_c(self.e11, self.e22), f.mul_c(self.e12, self.e21))

    def trace_code(self) -> int:
        return self.field.add_c(self.e11, self.e22)

    def det(self) -> FieldElement:
        return self.field.element(self.det_code())

    def trace(self) -> FieldElement:
        return self.field.element(self.trace_code())

    def char_poly(self) -> Quadratic:
        """x^2 - trace*x + det."""
        return Quadratic(self.trace(), self.det())

    def inv(self) -> "Mat2":
        d = self.det_code()
        if d == 0:
            raise SingularMatrixError(f"matrix {self!r} is singular")
        f = self.field
        di = f.inv_c(d)
        return Mat2(
            f,
            f.mul_c(di, self.e22),
            f.mul_c(di, f.neg_c(self.e12)),
            f.mul_c(di, f.neg_c(self.e21)),
            f.mul_c(di, self.e11),
        )

    def is_identity(self) -> bool:
        return (self.e11, self.e12, self.e21, self.e22) == (1, 0, 0, 1)

    def is_scalar(self) -> bool:
        return self.e12 == 0 and self.e21 == 0 and self.e11 == self.e22

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Mat2)
            and self.field == other.field
            and (self.e11, self.e12, self.e21, self.e22)
            == (other.e11, other.e12, other.e21, other.e22)
        )

    def __hash__(self) -> int:
        return hash((self.field.q, self.e11, self.e12, self.e21, self.e22))

    def __repr__(self) -> str:
        return f"[[{self.e11},{self.e12}],[{self.e21},{self.e22}]]"


def section_matrix(f: Quadratic, a, b) -> Mat2:
    """Matrix for the right translation by [a, b].

    For a = 0 it is the scalar matrix b*I (b != 0 required); for a != 0 it
    is [[r - b, f(b)/(-a)], [a, b]], which has determinant s and trace r.
    """
    fld = f.field
    a, b = _code(a), _code(b)
    if a == 0 and b == 0:
        raise ValueError("the zero vector [0, 0] has no translation matrix")
    if a == 0:
        return Mat2.scalar(fld, b)
    fb = f(b).code
    top_right = fld.div_c(fb, fld.neg_c(a))
    return Mat2(fld, fld.sub_c(f.r.code, b), top_right, a, b)


def conjugacy_class_of_f(field: FiniteField, f: Quadratic) -> list:
    """All q^2 - q matrices with characteristic polynomial f, ordered by (a, b).

    Requires f irreducible; these are exactly one conjugacy class of the
    invertible 2x2 matrices over the field.
    """
    if f.field != field:
        raise FieldMismatchError("quadratic not over the given field")
    if not f.is_irreducible():
        raise ValueError(f"{f!r} is reducible; it has roots {f.roots()}")
    return [
        section_matrix(f, a, b)
        for a in range(1, field.q)
        for b in range(field.q)
    ]


def row_apply(v, mat: Mat2):
    """Row vector times matrix: [x, y] * M.

    Accepts a pair of FieldElements or integer codes; returns codes when
    given codes, FieldElements when given FieldElements.
    """
    x, y = v
    as_elements = isinstance(x, FieldElement)
    f = mat.field
    xc, yc = _code(x), _code(y)
    nx = f.add_c(f.mul_c(xc, mat.e11), f.mul_c(yc, mat.e21))
    ny = f.add_c(f.mul_c(xc, mat.e12), f.mul_c(yc, mat.e22))
    if as_elements:
        return (f.element(nx), f.element(ny))
    return (nx, ny)


def gl2_order(q: int) -> int:
    return (q * q - 1) * (q * q - q)


def all_gl2(field: FiniteField):
    """Iterate every invertible 2x2 matrix over the field (brute force)."""
    q = field.q
    for e11 in range(q):
        for e12 in range(q):
            for e21 in range(q):
                for e22 in range(q):
                    m = Mat2(field, e11, e12, e21, e22)
                    if m.det_code() != 0:
                        yield m
