"""Exact arithmetic in finite fields F_{p^n}.

Conventions used throughout the package:

* An element of F_{p^n} is canonically encoded as an integer code in
  [0, p^n).  The base-p digits of the code are the coefficients of the
  residue polynomial, digit i being the coefficient of t^i.  Two elements
  are equal iff their codes are equal.
* The field modulus is the lexicographically smallest irreducible monic
  polynomial of degree n over F_p, comparing coefficient tuples from the
  constant term up.  This makes element encodings reproducible across
  runs and machines.  Prime fields use the degree-1 modulus t, so codes
  are plain residues mod p.
* Fields with at most ``_LUT_MAX`` elements carry dense add/mul/neg/inv
  lookup tables (numpy int16 arrays) that the sweep kernels index into;
  larger fields use scalar polynomial arithmetic only.

Everything here is immutable after construction and safe to share.
"""

from __future__ import annotations

import functools
import itertools
from typing import Iterator

import numpy as np

SIZE_CAP = 1 << 16  # largest supported field size
_LUT_MAX = 1 << 10  # largest field that gets dense lookup tables


class FieldMismatchError(ValueError):
    """Raised when combining elements of different fields."""


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m < 4:
        return True
    if m % 2 == 0:
        return False
    d = 3
    while d * d <= m:
        if m % d == 0:
            return False
        d += 2
    return True


# -- polynomial helpers over F_p ------------------------------------------
# Polynomials are tuples of residues, little-endian (index i = coeff of t^i),
# trimmed so the leading coefficient is nonzero; () is the zero polynomial.


def _trim(a):
    i = len(a)
    while i > 0 and a[i - 1] == 0:
        i -= 1
    return tuple(a[:i])


def _poly_add(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return _trim(out)


def _poly_mul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def _poly_divmod(a, b, p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    deg_b = len(b) - 1
    lead_inv = pow(b[-1], p - 2, p) if p > 2 else b[-1]
    quot = [0] * max(0, len(a) - deg_b)
    while len(_trim(a)) - 1 >= deg_b and _trim(a):
        a = list(_trim(a))
        shift = len(a) - 1 - deg_b
        factor = (a[-1] * lead_inv) % p
        quot[shift] = factor
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - factor * c) % p
    return _trim(quot), _trim(a)


def _poly_mod(a, b, p):
    return _poly_divmod(a, b, p)[1]


def _poly_inv_mod(a, m, p):
    """Inverse of a modulo m via the extended Euclidean algorithm."""
    if not a:
        raise ZeroDivisionError("inverting zero polynomial")
    r0, r1 = m, a
    s0, s1 = (), (1,)
    while r1:
        q, r = _poly_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_add(s0, _poly_mul(tuple((-c) % p for c in q), s1, p), p)
    # r0 is the gcd; it must be a nonzero constant since m is irreducible
    if len(r0) != 1:
        raise ZeroDivisionError("element not invertible modulo the field modulus")
    c_inv = pow(r0[0], p - 2, p) if p > 2 else r0[0]
    return _poly_mul((c_inv,), s0, p)


def _code_to_poly(code: int, p: int):
    out = []
    while code:
        code, d = divmod(code, p)
        out.append(d)
    return tuple(out)


def _poly_to_code(poly, p: int) -> int:
    code = 0
    for c in reversed(poly):
        code = code * p + c
    return code


class FiniteField:
    """The field F_{p^n} with a fixed deterministic modulus.

    Construction validates that p is prime, n >= 1 and p^n fits the size
    cap, and verifies irreducibility of the chosen modulus by trial
    division against all monic polynomials of degree <= n/2.
    """

    def __init__(self, p: int, n: int = 1):
        if not isinstance(p, int) or not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"extension degree must be >= 1, got {n}")
        if p**n > SIZE_CAP:
            raise ValueError(f"field size {p}^{n} exceeds cap {SIZE_CAP}")
        self.p = p
        self.n = n
        self.q = p**n
        self.modulus = self._find_modulus()
        self._generator_code = None
        self._lut = False
        if self.q <= _LUT_MAX:
            self._build_tables()
            self._lut = True

    # -- modulus selection -------------------------------------------------

    def _find_modulus(self):
        p, n = self.p, self.n
        if n == 1:
            return (0, 1)  # the polynomial t
        for lower in itertools.product(range(p), repeat=n):
            candidate = tuple(lower) + (1,)
            if self._is_irreducible_modulus(candidate):
                return candidate
        raise AssertionError("no irreducible polynomial found")  # unreachable

    def _is_irreducible_modulus(self, poly) -> bool:
        p = self.p
        n = len(poly) - 1
        if poly[0] == 0:
            return False  # divisible by t
        for d in range(1, n // 2 + 1):
            for lower in itertools.product(range(p), repeat=d):
                divisor = tuple(lower) + (1,)
                if not _poly_mod(poly, divisor, p):
                    return False
        return True

    # -- lookup tables -------------------------------------------------------

    def _build_tables(self):
        p, n, q = self.p, self.n, self.q
        codes = np.arange(q, dtype=np.int64)
        digits = np.empty((q, n), dtype=np.int64)
        rem = codes.copy()
        for i in range(n):
            rem, digits[:, i] = np.divmod(rem, p)[0], rem % p
        weights = p ** np.arange(n, dtype=np.int64)

        summed = (digits[:, None, :] + digits[None, :, :]) % p
        self.add_t = (summed * weights).sum(axis=2).astype(np.int16)
        self.neg_t = (((-digits) % p) * weights).sum(axis=1).astype(np.int16)

        g = self.generator().code
        exp = np.empty(q - 1, dtype=np.int64)
        exp[0] = 1
        for k in range(1, q - 1):
            exp[k] = self._mul_scalar(int(exp[k - 1]), g)
        log = np.zeros(q, dtype=np.int64)
        log[exp] = np.arange(q - 1)
        self._exp, self._log = exp, log

        mul = exp[(log[:, None] + log[None, :]) % (q - 1)]
        mul[0, :] = 0
        mul[:, 0] = 0
        self.mul_t = mul.astype(np.int16)
        inv = exp[(-log) % (q - 1)]
        inv[0] = 0  # guarded at call sites; 0 has no inverse
        self.inv_t = inv.astype(np.int16)

    # -- scalar code arithmetic ----------------------------------------------

    def _mul_scalar(self, a: int, b: int) -> int:
        prod = _poly_mul(_code_to_poly(a, self.p), _code_to_poly(b, self.p), self.p)
        return _poly_to_code(_poly_mod(prod, self.modulus, self.p), self.p)

    def add_c(self, a: int, b: int) -> int:
        if self._lut:
            return int(self.add_t[a, b])
        return _poly_to_code(
            _poly_add(_code_to_poly(a, self.p), _code_to_poly(b, self.p), self.p),
            self.p,
        )

    def neg_c(self, a: int) -> int:
        if self._lut:
            return int(self.neg_t[a])
        return _poly_to_code(
            tuple((-c) % self.p for c in _code_to_poly(a, self.p)), self.p
        )

    def sub_c(self, a: int, b: int) -> int:
        return self.add_c(a, self.neg_c(b))

    def mul_c(self, a: int, b: int) -> int:
        if self._lut:
            return int(self.mul_t[a, b])
        return self._mul_scalar(a, b)

    def inv_c(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverting 0 in a finite field")
        if self._lut:
            return int(self.inv_t[a])
        inv = _poly_inv_mod(_code_to_poly(a, self.p), self.modulus, self.p)
        return _poly_to_code(_poly_mod(inv, self.modulus, self.p), self.p)

    def div_c(self, a: int, b: int) -> int:
        return self.mul_c(a, self.inv_c(b))

    def pow_c(self, a: int, k: int) -> int:
        if a == 0:
            if k == 0:
                return 1
            if k < 0:
                raise ZeroDivisionError("inverting 0 in a finite field")
            return 0
        k %= self.q - 1
        result, base = 1, a
        while k:
            if k & 1:
                result = self.mul_c(result, base)
            base = self.mul_c(base, base)
            k >>= 1
        return result

    def frobenius_c(self, a: int, i: int) -> int:
        return self.pow_c(a, self.p ** (i % self.n))

    # -- element-level API ---------------------------------------------------

    def element(self, code: int) -> FieldElement:
        if not 0 <= code < self.q:
            raise ValueError(f"element code {code} out of range [0, {self.q})")
        return FieldElement(self, code)

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    def elements(self) -> Iterator[FieldElement]:
        for code in range(self.q):
            yield FieldElement(self, code)

    def element_order(self, code: int) -> int:
        """Multiplicative order of a nonzero element."""
        if code == 0:
            raise ValueError("0 has no multiplicative order")
        order = self.q - 1
        for ell in _prime_factors(self.q - 1):
            while order % ell == 0 and self.pow_c(code, order // ell) == 1:
                order //= ell
        return order

    def generator(self) -> FieldElement:
        """Smallest-code generator of the cyclic group of nonzero elements."""
        if self._generator_code is None:
            self._generator_code = self._find_generator()
        return FieldElement(self, self._generator_code)

    def _find_generator(self) -> int:
        if self.q == 2:
            return 1
        factors = _prime_factors(self.q - 1)
        for code in range(1, self.q):
            if all(
                self.pow_c(code, (self.q - 1) // ell) != 1 for ell in factors
            ):
                return code
        raise AssertionError("no generator found")  # unreachable

    def parse_element(self, text: str) -> FieldElement:
        """Parse an element from an integer code or a 'c0+c1*t+...' string."""
        text = text.strip()
        try:
            return self.element(int(text))
        except ValueError:
            pass
        coeffs = [0] * self.n
        for term in text.replace("-", "+-").split("+"):
            term = term.strip()
            if not term:
                continue
            if "t" in term:
                head, _, tail = term.partition("t")
                c = head.rstrip("*").strip()
                coeff = int(c) if c not in ("", "-") else (-1 if c == "-" else 1)
                power = int(tail.lstrip("^")) if tail.strip() else 1
            else:
                coeff, power = int(term), 0
            if power >= self.n:
                raise ValueError(f"term degree {power} >= field degree {self.n}")
            coeffs[power] = (coeffs[power] + coeff) % self.p
        return self.element(_poly_to_code(tuple(coeffs), self.p))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FiniteField)
            and self.p == other.p
            and self.n == other.n
            and self.modulus == other.modulus
        )

    def __hash__(self) -> int:
        return hash((self.p, self.n, self.modulus))

    def __repr__(self) -> str:
        return f"FiniteField({self.p}, {self.n})"


def _prime_factors(m: int):
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


@functools.lru_cache(maxsize=None)
def field_create(p: int, n: int = 1) -> FiniteField:
    """Cached field factory; F_{p^n} with the deterministic modulus."""
    return FiniteField(p, n)


class FieldElement:
    """An element of a FiniteField, identified by its integer code."""

    __slots__ = ("field", "code")

    def __init__(self, field: FiniteField, code: int):
        self.field = field
        self.code = code

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatchError(
                    f"elements of {self.field} and {other.field} cannot be combined"
                )
            return other
        if isinstance(other, int):
            # plain ints embed through the prime subfield
            return self.field.element(other % self.field.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.add_c(self.code, other.code))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.sub_c(self.code, other.code))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.mul_c(self.code, other.code))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.div_c(self.code, other.code))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg_c(self.code))

    def __pow__(self, k: int):
        return FieldElement(self.field, self.field.pow_c(self.code, k))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv_c(self.code))

    def frobenius(self, i: int) -> "FieldElement":
        """The automorphism x -> x^(p^i); i is reduced mod n."""
        return FieldElement(self.field, self.field.frobenius_c(self.code, i))

    @property
    def coeffs(self) -> tuple:
        poly = _code_to_poly(self.code, self.field.p)
        return poly + (0,) * (self.field.n - len(poly))

    def poly_str(self, var: str = "t") -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*{var}" if c != 1 else var)
            else:
                terms.append(f"{c}*{var}^{i}" if c != 1 else f"{var}^{i}")
        return "+".join(terms) if terms else "0"

    def __int__(self) -> int:
        return self.code

    def __bool__(self) -> bool:
        return self.code != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.code == other.code
        if isinstance(other, int):
            return self.code == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.p, self.field.n, self.code))

    def __repr__(self) -> str:
        return f"F{self.field.q}({self.code})"


class Quadratic:
    """A monic quadratic x^2 - r*x + s over a finite field."""

    __slots__ = ("r", "s", "_irreducible")

    def __init__(self, r: FieldElement, s: FieldElement):
        if r.field != s.field:
            raise FieldMismatchError("coefficients from different fields")
        self.r = r
        self.s = s
        self._irreducible = None

    @property
    def field(self) -> FiniteField:
        return self.r.field

    @property
    def codes(self) -> tuple:
        return (self.r.code, self.s.code)

    def __call__(self, t) -> FieldElement:
        if isinstance(t, int):
            t = self.field.element(t)
        return t * t - self.r * t + self.s

    def roots(self) -> list:
        return [t for t in self.field.elements() if not self(t)]

    def is_irreducible(self) -> bool:
        # degree 2: irreducible iff there is no root in the field
        if self._irreducible is None:
            fld = self.field
            rc, sc = self.r.code, self.s.code
            self._irreducible = all(
                fld.add_c(fld.sub_c(fld.mul_c(t, t), fld.mul_c(rc, t)), sc) != 0
                for t in range(fld.q)
            )
        return self._irreducible

    def frobenius(self, i: int) -> "Quadratic":
        return Quadratic(self.r.frobenius(i), self.s.frobenius(i))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Quadratic)
            and self.r == other.r
            and self.s == other.s
        )

    def __hash__(self) -> int:
        return hash((hash(self.r), hash(self.s)))

    def __repr__(self) -> str:
        neg_r = (-self.r).code
        mid = "" if neg_r == 0 else (f" + {neg_r}x" if neg_r != 1 else " + x")
        return f"x^2{mid} + {self.s.code} over F{self.field.q}"


def quadratic_from_codes(field: FiniteField, r: int, s: int) -> Quadratic:
    return Quadratic(field.element(r), field.element(s))


def enumerate_irreducible_quadratics(field: FiniteField) -> list:
    """All irreducible monic quadratics x^2 - r*x + s, lexicographic in (r, s).

    The count is always (q^2 - q) / 2.
    """
    out = []
    for rc in range(field.q):
        for sc in range(field.q):
            f = quadratic_from_codes(field, rc, sc)
            if f.is_irreducible():
                out.append(f)
    return out


def irreducible_quadratic_count(q: int) -> int:
    return (q * q - q) // 2
