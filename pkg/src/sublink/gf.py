"""Arithmetic over the binary extension fields GF(2^m).

Field elements are plain ints in ``[0, 2^m)`` whose bits are the
coefficients of a polynomial over GF(2); addition is XOR.  Multiplication
and inversion go through log/antilog tables built once per field from a
primitive element, so both are O(1) lookups.  The shipped default is
GF(2^8) under the primitive polynomial x^8 + x^4 + x^3 + x^2 + 1 (0x11d).
"""
from __future__ import annotations

# Conventional primitive polynomials, one per supported field size.  The
# x^m term is included in the mask.
PRIMITIVE_POLY = {
    4: 0b1_0011,            # x^4 + x + 1
    5: 0b10_0101,
    6: 0b100_0011,
    8: 0x11D,               # x^8 + x^4 + x^3 + x^2 + 1
}


class GF2m:
    """A GF(2^m) field with precomputed exp/log tables.

    Parameters
    ----------
    m : int
        Field degree. The field has ``2^m`` elements.
    primitive_poly : int, optional
        Binary reduction polynomial including the x^m term. Defaults to
        a conventional choice from ``PRIMITIVE_POLY``.

    Raises
    ------
    ValueError
        If no default polynomial is known for ``m``, or the supplied
        polynomial fails to generate all ``2^m - 1`` nonzero elements
        (i.e. is not primitive).
    """

    def __init__(self, m: int = 8, primitive_poly: int | None = None):
        if primitive_poly is None:
            if m not in PRIMITIVE_POLY:
                raise ValueError(f"no default primitive polynomial for m={m}")
            primitive_poly = PRIMITIVE_POLY[m]
        self.m = m
        self.order = 1 << m
        self.poly = primitive_poly

        size = self.order - 1
        self._exp = [0] * (2 * size)   # doubled so mul can skip one modulo
        self._log = [0] * self.order
        x = 1
        for i in range(size):
            if x == 1 and i > 0:
                raise ValueError(f"0x{primitive_poly:x} is not primitive for m={m}")
            self._exp[i] = x
            self._log[x] = i
            x <<= 1
            if x & self.order:
                x ^= primitive_poly
        if x != 1:
            raise ValueError(f"0x{primitive_poly:x} does not reduce back to 1")
        for i in range(size, 2 * size):
            self._exp[i] = self._exp[i - size]

    def mul(self, a: int, b: int) -> int:
        """Product of two field elements."""
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        """Multiplicative inverse.

        Raises
        ------
        ZeroDivisionError
            If ``a`` is zero; 0 has no inverse.
        """
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        return self._exp[(self.order - 1) - self._log[a]]

    def alpha_power(self, e: int) -> int:
        """alpha^e for the primitive element alpha, any integer exponent."""
        return self._exp[e % (self.order - 1)]

    def log(self, a: int) -> int:
        """Discrete log base alpha. Zero has no logarithm."""
        if a == 0:
            raise ValueError("0 has no discrete logarithm")
        return self._log[a]

    def eval_poly(self, coeffs: list[int], x: int) -> int:
        """Evaluate a polynomial with coefficients in this field (lowest
        degree first) at the point ``x``, by Horner's rule."""
        acc = 0
        for c in reversed(coeffs):
            acc = self.mul(acc, x) ^ c
        return acc

    def __repr__(self):
        return f"GF2m(m={self.m}, poly=0x{self.poly:x})"


_cache: dict[tuple[int, int | None], GF2m] = {}


def field(m: int = 8, primitive_poly: int | None = None) -> GF2m:
    """Shared GF2m instance (tables are built once per parameter set)."""
    key = (m, primitive_poly)
    if key not in _cache:
        _cache[key] = GF2m(m, primitive_poly)
    return _cache[key]
