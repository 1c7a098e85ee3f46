"""Field arithmetic checks against naive carry-less oracles."""
import numpy as np
import pytest

from sublink.gf import GF2m, PRIMITIVE_POLY, field


def clmul(a: int, b: int) -> int:
    # carry-less product, no reduction
    acc = 0
    while b:
        if b & 1:
            acc ^= a
        a <<= 1
        b >>= 1
    return acc


def reduce_mod(value: int, poly: int) -> int:
    deg = poly.bit_length() - 1
    while value.bit_length() - 1 >= deg:
        value ^= poly << (value.bit_length() - 1 - deg)
    return value


def test_known_product_in_aes_style_field():
    # 0x80 * 0x02 wraps once around the reduction polynomial
    gf = field(8)
    expected = reduce_mod(clmul(0x80, 0x02), PRIMITIVE_POLY[8])
    assert expected == 0x1D
    assert gf.mul(0x80, 0x02) == 0x1D


@pytest.mark.parametrize("m", [4, 5, 6, 8])
def test_mul_matches_oracle(m):
    gf = field(m)
    poly = PRIMITIVE_POLY[m]
    rng = np.random.default_rng(m)
    for _ in range(300):
        a = int(rng.integers(0, gf.order))
        b = int(rng.integers(0, gf.order))
        assert gf.mul(a, b) == reduce_mod(clmul(a, b), poly)


@pytest.mark.parametrize("m", [4, 8])
def test_every_nonzero_element_has_inverse(m):
    gf = field(m)
    for a in range(1, gf.order):
        assert gf.mul(a, gf.inv(a)) == 1


def test_inverse_of_zero_refused():
    with pytest.raises(ZeroDivisionError):
        field(8).inv(0)


def test_alpha_powers_cycle_and_log_inverts():
    gf = field(8)
    assert gf.alpha_power(0) == 1
    assert gf.alpha_power(255) == 1          # order of the multiplicative group
    assert gf.alpha_power(-1) == gf.alpha_power(254)
    for e in range(255):
        assert gf.log(gf.alpha_power(e)) == e


def test_log_of_zero_refused():
    with pytest.raises(ValueError):
        field(8).log(0)


def test_eval_poly_matches_term_by_term():
    gf = field(8)
    rng = np.random.default_rng(7)
    for _ in range(100):
        coeffs = [int(v) for v in rng.integers(0, 256, size=5)]
        x = int(rng.integers(1, 256))
        acc = 0
        for i, c in enumerate(coeffs):
            # naive sum of c_i * x^i
            term = c
            for _ in range(i):
                term = gf.mul(term, x)
            acc ^= term
        assert gf.eval_poly(coeffs, x) == acc


def test_non_primitive_polynomial_rejected():
    # x^8+x^4+x^3+x+1 is irreducible but its root has order 51
    with pytest.raises(ValueError):
        GF2m(8, 0x11B)


def test_reducible_polynomial_rejected():
    with pytest.raises(ValueError):
        GF2m(8, 0x100)
