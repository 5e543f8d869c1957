"""Finite loops whose right translations form a 2x2 matrix class over F_q.

The package builds the loops, verifies their structural properties
(Latin square, right conjugacy closure, right inverse property, nuclei,
normal subloops, simplicity), and classifies them up to isomorphism via
Frobenius orbits of the defining quadratics.
"""

from ._kernels import BACKEND
from .fields import (
    FieldElement,
    FieldMismatchError,
    FiniteField,
    Quadratic,
    enumerate_irreducible_quadratics,
    field_create,
    irreducible_quadratic_count,
    quadratic_from_codes,
)
from .loops import (
    ClosureCapError,
    InvalidLoopError,
    LoopTable,
    MalformedTableError,
    Perm,
    dump_table,
    enumerate_normal_subloops,
    is_normal,
    parse_table,
    perm_closure,
    quotient_loop,
    subloop_generated,
    verify_loop,
)
from .matrices import Mat2, conjugacy_class_of_f, gl2_order, row_apply, section_matrix
from .construct import ReducibleQuadraticError, RccLoop, build_loop, sidecar_json

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ClosureCapError",
    "FieldElement",
    "FieldMismatchError",
    "FiniteField",
    "InvalidLoopError",
    "LoopTable",
    "Mat2",
    "MalformedTableError",
    "Perm",
    "Quadratic",
    "RccLoop",
    "ReducibleQuadraticError",
    "build_loop",
    "conjugacy_class_of_f",
    "dump_table",
    "enumerate_irreducible_quadratics",
    "enumerate_normal_subloops",
    "field_create",
    "gl2_order",
    "irreducible_quadratic_count",
    "is_normal",
    "parse_table",
    "perm_closure",
    "quadratic_from_codes",
    "quotient_loop",
    "row_apply",
    "section_matrix",
    "sidecar_json",
    "subloop_generated",
    "verify_loop",
]
