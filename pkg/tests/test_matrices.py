"""2x2 matrix arithmetic and the section-matrix family."""

import numpy as np
import pytest

import rccloops as rl
from rccloops.matrices import Mat2, SingularMatrixError, all_gl2, gl2_order
from tests.conftest import TABLE1_CLASS_MATRICES


class TestMat2:
    def test_identity_inverse(self, f3):
        eye = Mat2.identity(f3)
        assert eye.inv() == eye

    def test_published_det_trace(self, f3):
        m = Mat2(f3, 2, 1, 2, 2)
        assert m.det().code == 2
        assert m.trace().code == 1

    def test_char_poly(self, f3):
        m = Mat2(f3, 2, 1, 2, 2)
        f = m.char_poly()
        assert f.codes == (1, 2)

    def test_singular_inverse_rejected(self, f3):
        with pytest.raises(SingularMatrixError):
            Mat2(f3, 1, 1, 1, 1).inv()

    def test_random_inverse_property(self, f9):
        rng = np.random.default_rng(20240809)
        eye = Mat2.identity(f9)
        count = 0
        while count < 100:
            e11, e12, e21, e22 = rng.integers(0, 9, size=4)
            m = Mat2(f9, int(e11), int(e12), int(e21), int(e22))
            if m.det_code() == 0:
                continue
            count += 1
            assert m * m.inv() == eye
            assert m.inv() * m == eye

    def test_scale_and_scalar(self, f3):
        assert Mat2.scalar(f3, 2) == Mat2.identity(f3).scale(2)
        assert Mat2.scalar(f3, 2).is_scalar()


class TestSectionMatrix:
    def test_published_examples(self, f3):
        f = rl.quadratic_from_codes(f3, 1, 2)
        assert rl.section_matrix(f, 1, 0).codes == ((1, 1), (1, 0))
        assert rl.section_matrix(f, 2, 2).codes == ((2, 1), (2, 2))

    def test_scalar_case_gives_identity(self, f3):
        f = rl.quadratic_from_codes(f3, 1, 2)
        assert rl.section_matrix(f, 0, 1) == Mat2.identity(f3)

    def test_zero_vector_rejected(self, f3):
        f = rl.quadratic_from_codes(f3, 1, 2)
        with pytest.raises(ValueError):
            rl.section_matrix(f, 0, 0)

    @pytest.mark.parametrize("p,n", [(3, 1), (2, 2), (5, 1)])
    def test_det_trace_invariants(self, p, n):
        field = rl.field_create(p, n)
        for f in rl.enumerate_irreducible_quadratics(field):
            for a in range(1, field.q):
                for b in range(field.q):
                    m = rl.section_matrix(f, a, b)
                    assert m.det_code() == f.s.code
                    assert m.trace_code() == f.r.code

    @pytest.mark.parametrize("p,n", [(3, 1), (2, 2), (5, 1)])
    def test_inverse_closed_form(self, p, n):
        # inv(M(a, b)) = (1/s) * [[b, f(b)/a], [-a, r-b]] for a != 0,
        # and inv(M(0, b)) = (1/b) * I
        field = rl.field_create(p, n)
        for f in rl.enumerate_irreducible_quadratics(field):
            r, s = f.codes
            for a in range(1, field.q):
                for b in range(field.q):
                    m = rl.section_matrix(f, a, b)
                    expected = Mat2(
                        field,
                        b,
                        field.div_c(f(b).code, a),
                        field.neg_c(a),
                        field.sub_c(r, b),
                    ).scale(field.inv_c(s))
                    assert m.inv() == expected
            for b in range(1, field.q):
                assert rl.section_matrix(f, 0, b).inv() == Mat2.scalar(
                    field, field.inv_c(b)
                )


class TestConjugacyClass:
    def test_published_class_for_table1(self, f3):
        f = rl.quadratic_from_codes(f3, 1, 2)
        cls = rl.conjugacy_class_of_f(f3, f)
        assert [m.codes for m in cls] == list(TABLE1_CLASS_MATRICES)

    def test_f2_class_by_brute_force(self):
        f2 = rl.field_create(2)
        f = rl.quadratic_from_codes(f2, 1, 1)
        cls = {m.codes for m in rl.conjugacy_class_of_f(f2, f)}
        brute = {m.codes for m in all_gl2(f2) if m.char_poly() == f}
        assert cls == brute
        assert len(cls) == 2

    @pytest.mark.parametrize("p,n", [(2, 1), (3, 1), (2, 2), (5, 1)])
    def test_class_equals_char_poly_fiber(self, p, n):
        # brute-force scan over every invertible matrix
        field = rl.field_create(p, n)
        for f in rl.enumerate_irreducible_quadratics(field):
            cls = {m.codes for m in rl.conjugacy_class_of_f(field, f)}
            brute = {
                m.codes for m in all_gl2(field) if m.char_poly() == f
            }
            assert cls == brute
            assert len(cls) == field.q * field.q - field.q

    def test_reducible_rejected(self, f3):
        with pytest.raises(ValueError, match="reducible"):
            rl.conjugacy_class_of_f(f3, rl.quadratic_from_codes(f3, 0, 2))

    def test_gl2_order(self):
        for p, n in [(2, 1), (3, 1), (2, 2)]:
            field = rl.field_create(p, n)
            assert sum(1 for _ in all_gl2(field)) == gl2_order(field.q)


class TestRowApply:
    def test_identity(self, f3):
        eye = Mat2.identity(f3)
        v = (f3.element(0), f3.element(1))
        assert rl.row_apply(v, eye) == v

    def test_published_products(self, f3):
        m = Mat2(f3, 2, 1, 2, 2)
        assert rl.row_apply((1, 2), m) == (0, 2)
        assert rl.row_apply((0, 1), m) == (2, 2)

    def test_codes_in_codes_out(self, f3):
        m = Mat2(f3, 2, 1, 2, 2)
        out = rl.row_apply((1, 2), m)
        assert all(isinstance(v, int) for v in out)
