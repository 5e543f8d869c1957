"""Build loops of order q^2 - 1 from an irreducible quadratic over F_q.

Elements are the nonzero row vectors [a, b] of F_q^2, ordered
lexicographically by (a, b) under the field's integer element codes, so
element 0 is always [0, 1] (the identity) and element i corresponds to the
pair with a*q + b = i + 1.  The product is

    [a, b] o [c, d] = [a, b] * section_matrix(f, c, d)

so the right translation by [c, d] is literally a 2x2 matrix; the table
view and the matrix view are kept side by side and their coherence is a
tested invariant.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .fields import FieldElement, FiniteField, Quadratic
from .loops import InvalidLoopError, LoopTable, Perm
from .matrices import Mat2, conjugacy_class_of_f, row_apply, section_matrix


class ReducibleQuadraticError(ValueError):
    """Raised when a loop is requested for a quadratic with a root."""

    def __init__(self, f: Quadratic, root):
        self.f = f
        self.root = root
        super().__init__(f"{f!r} is reducible: {root!r} is a root")


def _pair_code(x) -> int:
    return x.code if isinstance(x, FieldElement) else int(x)


class RccLoop:
    """A constructed loop together with its field and matrix section."""

    def __init__(self, field: FiniteField, f: Quadratic, pairs, table: LoopTable, mats):
        self.field = field
        self.f = f
        self.pairs = pairs  # (m, 2) int16 array of element codes
        self.table = table
        self.mats = mats  # (m, 4) int16 array: e11, e12, e21, e22 per element

    @property
    def order(self) -> int:
        return self.table.order

    @property
    def identity(self) -> int:
        return self.table.identity

    def element_index(self, pair) -> int:
        a, b = (_pair_code(v) for v in pair)
        if a == 0 and b == 0:
            raise ValueError("[0, 0] is not a loop element")
        if not (0 <= a < self.field.q and 0 <= b < self.field.q):
            raise ValueError(f"pair ({a}, {b}) out of range for q={self.field.q}")
        return a * self.field.q + b - 1

    def pair_of(self, index: int) -> tuple:
        a, b = divmod(index + 1, self.field.q)
        return (a, b)

    def label_of(self, index: int) -> str:
        a, b = self.pair_of(index)
        return f"[{a},{b}]"

    def section_matrix(self, index: int) -> Mat2:
        m = self.mats[index]
        return Mat2(self.field, int(m[0]), int(m[1]), int(m[2]), int(m[3]))

    def right_section(self) -> list:
        return [self.section_matrix(i) for i in range(self.order)]

    def section_permutation(self, v) -> Perm:
        """Right translation by v, as a permutation of element indices."""
        idx = v if isinstance(v, int) else self.element_index(v)
        return self.table.right_translation(idx)

    def circ(self, u, v) -> tuple:
        """The product [a,b] o [c,d], computed through the matrix view."""
        uc = tuple(_pair_code(x) for x in u)
        vc = tuple(_pair_code(x) for x in v)
        if uc == (0, 0) or vc == (0, 0):
            raise ValueError("[0, 0] is not a loop element")
        mat = self.section_matrix(self.element_index(vc))
        return row_apply(uc, mat)

    def matrix_index(self, mat: Mat2) -> int | None:
        """Index of a matrix in the section, or None if absent."""
        key = (mat.e11, mat.e12, mat.e21, mat.e22)
        return self._matrix_lookup().get(key)

    def _matrix_lookup(self) -> dict:
        if not hasattr(self, "_mat_lookup"):
            self._mat_lookup = {
                (int(r[0]), int(r[1]), int(r[2]), int(r[3])): i
                for i, r in enumerate(self.mats)
            }
        return self._mat_lookup

    def __repr__(self) -> str:
        return (
            f"RccLoop(q={self.field.q}, f=(r={self.f.r.code}, s={self.f.s.code}),"
            f" order={self.order})"
        )


def build_loop(field: FiniteField, f: Quadratic) -> RccLoop:
    """Construct the loop for an irreducible quadratic f = x^2 - r*x + s.

    The Cayley table is materialized column by column: each column is one
    matrix applied to all q^2 - 1 row vectors, so the build costs O(q^2)
    small matrix applications.  The result always passes verify_loop; the
    identity is element 0 = [0, 1].
    """
    if f.field != field:
        raise ValueError("quadratic is not over the given field")
    if not f.is_irreducible():
        raise ReducibleQuadraticError(f, f.roots()[0])
    q = field.q
    m = q * q - 1

    codes = np.arange(1, m + 1, dtype=np.int64)
    pairs = np.stack([codes // q, codes % q], axis=1).astype(np.int16)

    mats = np.empty((m, 4), dtype=np.int16)
    for i in range(m):
        a, b = int(pairs[i, 0]), int(pairs[i, 1])
        mat = section_matrix(f, a, b)
        mats[i] = (mat.e11, mat.e12, mat.e21, mat.e22)

    if not field._lut:  # loops are only materialized for table-backed fields
        raise ValueError(f"field of size {q} too large to materialize a loop")
    arr = _kernels.apply_sections(pairs, mats, field.mul_t, field.add_t, q)

    labels = [f"[{a},{b}]" for a, b in pairs]
    try:
        table = LoopTable(arr, identity=0, labels=labels, check=True)
    except InvalidLoopError as exc:  # pragma: no cover - construction theorem
        raise AssertionError(f"internal error: built table is not a loop: {exc}")
    loop = RccLoop(field, f, pairs, table, mats)

    scalars = [Mat2.scalar(field, b) for b in range(1, q)]
    expected = scalars + conjugacy_class_of_f(field, f)
    if [tuple(r) for r in mats] != [
        (mt.e11, mt.e12, mt.e21, mt.e22) for mt in expected
    ]:  # pragma: no cover - construction invariant
        raise AssertionError("internal error: section is not scalars + class")
    return loop


def sidecar_json(loop: RccLoop) -> dict:
    """JSON-able description of a built loop: field, quadratic, labels,
    and the per-element section matrices (integer element codes)."""
    return {
        "schema": 1,
        "field": {
            "p": loop.field.p,
            "n": loop.field.n,
            "q": loop.field.q,
            "modulus": list(loop.field.modulus),
        },
        "f": {"r": loop.f.r.code, "s": loop.f.s.code},
        "order": loop.order,
        "identity": loop.identity + 1,
        "labels": [loop.label_of(i) for i in range(loop.order)],
        "sections": [
            [[int(r[0]), int(r[1])], [int(r[2]), int(r[3])]] for r in loop.mats
        ],
    }
