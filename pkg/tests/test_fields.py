"""Field arithmetic, Frobenius maps, and quadratic enumeration."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import rccloops as rl
from rccloops.fields import (
    FieldMismatchError,
    FiniteField,
    _poly_mod,
    irreducible_quadratic_count,
)


class TestFieldCreate:
    def test_prime_field_modulus_is_t(self, f3):
        assert (f3.p, f3.n, f3.q) == (3, 1, 3)
        assert f3.modulus == (0, 1)

    def test_f4_modulus_is_unique_irreducible(self, f4):
        # oracle: enumerate all four monic quadratics over F_2 and check
        # roots directly; exactly one has none
        irreducible = []
        for c0, c1 in itertools.product((0, 1), repeat=2):
            if all((t * t + c1 * t + c0) % 2 != 0 for t in (0, 1)):
                irreducible.append((c0, c1, 1))
        assert irreducible == [(1, 1, 1)]
        assert f4.modulus == (1, 1, 1)

    def test_nonprime_p_rejected(self):
        with pytest.raises(ValueError, match="not prime"):
            FiniteField(4, 1)

    def test_bad_degree_rejected(self):
        with pytest.raises(ValueError):
            FiniteField(3, 0)

    def test_size_cap(self):
        with pytest.raises(ValueError, match="cap"):
            FiniteField(2, 17)
        # the cap itself is allowed: F_{2^16} in scalar (non-table) mode
        big = FiniteField(2, 16)
        assert big.q == 65536
        assert not big._lut

    def test_modulus_is_irreducible_by_trial_division(self, f9):
        # independent check: no monic linear polynomial divides it
        for c in range(3):
            assert _poly_mod(f9.modulus, (c, 1), 3) != ()

    def test_field_create_cached(self):
        assert rl.field_create(5) is rl.field_create(5)


class TestArithmetic:
    def test_f3_examples(self, f3):
        two = f3.element(2)
        assert (two * two).code == 1
        assert two.inverse().code == 2

    def test_f4_omega_squared(self, f4):
        # omega has code 2; modulo t^2+t+1, omega^2 = omega+1 (code 3)
        omega = f4.element(2)
        assert (omega * omega).code == 3

    def test_division_by_zero(self, f3):
        with pytest.raises(ZeroDivisionError):
            f3.element(1) / f3.element(0)
        with pytest.raises(ZeroDivisionError):
            f3.inv_c(0)

    def test_field_mismatch(self, f3, f4):
        with pytest.raises(FieldMismatchError):
            f3.element(1) + f4.element(1)

    def test_int_coercion_through_prime_subfield(self, f4):
        omega = f4.element(2)
        assert (omega + 1).code == 3
        assert (1 + omega).code == 3
        assert (omega - 1).code == 3  # -1 == 1 in characteristic 2

    @pytest.mark.parametrize("p,n", [(2, 3), (3, 2), (5, 1), (7, 1)])
    def test_lut_matches_scalar_polynomial_arithmetic(self, p, n):
        # dual route: dense tables vs direct polynomial computation
        field = rl.field_create(p, n)
        for a in range(field.q):
            for b in range(field.q):
                assert field.mul_c(a, b) == field._mul_scalar(a, b)

    @given(a=st.integers(0, 8), b=st.integers(0, 8), c=st.integers(0, 8))
    def test_f9_field_axioms(self, a, b, c):
        f9 = rl.field_create(3, 2)
        x, y, z = f9.element(a), f9.element(b), f9.element(c)
        assert (x + y) + z == x + (y + z)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert x + y == y + x
        assert x * y == y * x
        if a != 0:
            assert x * x.inverse() == f9.one

    def test_pow_and_inverse(self, f9):
        for code in range(1, 9):
            x = f9.element(code)
            assert x**8 == f9.one  # group of nonzero elements has order 8
            assert x ** (-1) == x.inverse()

    def test_scalar_mode_field_arithmetic(self):
        big = FiniteField(2, 13)  # 8192 elements, above the table cutoff
        a, b = 1234, 4567
        ab = big.mul_c(a, b)
        assert big.mul_c(ab, big.inv_c(b)) == a
        assert big.add_c(a, a) == 0  # characteristic 2

    def test_multiplicative_group_cyclic(self):
        for p, n in [(2, 2), (3, 1), (5, 1), (3, 2), (2, 4)]:
            field = rl.field_create(p, n)
            g = field.generator()
            assert field.element_order(g.code) == field.q - 1


class TestFrobenius:
    def test_prime_field_identity(self, f3):
        assert f3.element(2).frobenius(0) == f3.element(2)
        assert f3.element(2).frobenius(1) == f3.element(2)  # x^3 = x in F_3

    def test_f4_squares_omega(self, f4):
        omega = f4.element(2)
        assert omega.frobenius(1) == omega * omega  # code 3

    def test_f9_generator_cubed(self, f9):
        g = f9.generator()
        assert g.frobenius(1) == g**3

    @given(a=st.integers(0, 8), b=st.integers(0, 8), i=st.integers(0, 3))
    def test_frobenius_is_field_automorphism(self, a, b, i):
        f9 = rl.field_create(3, 2)
        x, y = f9.element(a), f9.element(b)
        assert (x + y).frobenius(i) == x.frobenius(i) + y.frobenius(i)
        assert (x * y).frobenius(i) == x.frobenius(i) * y.frobenius(i)

    @given(a=st.integers(0, 15), i=st.integers(0, 3), j=st.integers(0, 3))
    def test_frobenius_composition(self, a, i, j):
        f16 = rl.field_create(2, 4)
        x = f16.element(a)
        assert x.frobenius(i).frobenius(j) == x.frobenius((i + j) % 4)

    def test_fixes_prime_subfield(self, f9):
        for c in range(3):  # codes 0..p-1 are the prime subfield
            assert f9.element(c).frobenius(1) == f9.element(c)


class TestQuadratics:
    def test_f2_enumeration(self):
        f2 = rl.field_create(2)
        quads = rl.enumerate_irreducible_quadratics(f2)
        assert [f.codes for f in quads] == [(1, 1)]  # x^2 - x + 1 = x^2+x+1

    def test_f3_enumeration(self, f3):
        quads = rl.enumerate_irreducible_quadratics(f3)
        assert len(quads) == 3
        assert (1, 2) in {f.codes for f in quads}  # x^2 + 2x + 2

    def test_f8_count(self):
        f8 = rl.field_create(2, 3)
        assert len(rl.enumerate_irreducible_quadratics(f8)) == 28

    @pytest.mark.parametrize(
        "p,n", [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (2, 4)]
    )
    def test_count_formula(self, p, n):
        field = rl.field_create(p, n)
        quads = rl.enumerate_irreducible_quadratics(field)
        assert len(quads) == irreducible_quadratic_count(field.q)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_char2_trace_never_zero(self, n):
        # over characteristic 2, x^2 + s is a perfect square, so r != 0
        field = rl.field_create(2, n)
        for f in rl.enumerate_irreducible_quadratics(field):
            assert f.r.code != 0

    @pytest.mark.parametrize("p,n", [(2, 2), (3, 2), (2, 3)])
    def test_frobenius_preserves_irreducibility(self, p, n):
        field = rl.field_create(p, n)
        for f in rl.enumerate_irreducible_quadratics(field):
            for i in range(field.n):
                assert f.frobenius(i).is_irreducible()

    def test_irreducible_iff_no_root(self, f3):
        f = rl.quadratic_from_codes(f3, 0, 2)  # x^2 + 2 has root 1
        assert not f.is_irreducible()
        assert f3.element(1) in f.roots()

    def test_irreducible_implies_s_nonzero(self):
        for p, n in [(2, 1), (3, 1), (5, 1), (2, 2)]:
            field = rl.field_create(p, n)
            for f in rl.enumerate_irreducible_quadratics(field):
                assert f.s.code != 0

    def test_lexicographic_order(self, f3):
        quads = rl.enumerate_irreducible_quadratics(f3)
        assert [f.codes for f in quads] == sorted(f.codes for f in quads)


class TestTextForms:
    def test_parse_element_integer_code(self, f9):
        assert f9.parse_element("5").code == 5

    def test_parse_element_polynomial(self, f9):
        assert f9.parse_element("2+1*t").code == 5  # 2 + 3 = 5 in base-3 digits
        assert f9.parse_element("t").code == 3

    def test_poly_str_round_trip(self, f9):
        for code in range(9):
            x = f9.element(code)
            assert f9.parse_element(x.poly_str()) == x
