"""Shortened binary BCH codes: construction, systematic encoding, decoding.

The shipped link code is a (72, 56) code correcting T=2 bit errors,
obtained by shortening the (255, 239) parent code over GF(2^8) by 183
positions.  Construction, encoding and decoding all work for other T and
message lengths as long as everything fits inside the parent code.

Bit conventions: index 0 of a message/codeword array is the first bit on
the wire and the highest-degree polynomial coefficient.  A transmitted
position ``p`` therefore corresponds to the coefficient of x^(n-1-p), and
the shortened (always zero) positions are the degrees from n up to 254.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .gf import GF2m, field

CLEAN = "clean"
CORRECTED = "corrected"
FAILURE = "failure"


class CodeConstructionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# polynomials over GF(2), packed into ints (bit i = coefficient of x^i)

def _gf2_deg(p: int) -> int:
    return p.bit_length() - 1


def _gf2_mul(a: int, b: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def _gf2_mod(a: int, b: int) -> int:
    db = _gf2_deg(b)
    while a.bit_length() - 1 >= db and a:
        a ^= b << (a.bit_length() - 1 - db)
    return a


def _minimal_polynomial(gf: GF2m, exponent: int) -> int:
    """Minimal polynomial over GF(2) of alpha^exponent, as an int."""
    size = gf.order - 1
    coset = []
    e = exponent % size
    while e not in coset:
        coset.append(e)
        e = (e * 2) % size
    # product of (x - alpha^c) over the coset; coefficients end up in GF(2)
    poly = [1]
    for c in coset:
        root = gf.alpha_power(c)
        nxt = [0] * (len(poly) + 1)
        for i, coef in enumerate(poly):
            nxt[i + 1] ^= coef
            nxt[i] ^= gf.mul(coef, root)
        poly = nxt
    out = 0
    for i, coef in enumerate(poly):
        if coef not in (0, 1):
            raise CodeConstructionError("minimal polynomial left the base field")
        out |= coef << i
    return out


@dataclass(frozen=True)
class BchCode:
    n: int
    k: int
    t: int
    m: int
    generator: int          # generator polynomial over GF(2), bit i = x^i
    shorten_by: int         # positions removed from the parent code
    gf: GF2m = dc_field(repr=False, compare=False, default=None)

    @property
    def parity_bits(self) -> int:
        return self.n - self.k


def build_code(t: int = 2, k: int = 56, m: int = 8) -> BchCode:
    """Construct the shortened BCH code correcting ``t`` errors on ``k``
    message bits over GF(2^m).

    The generator is the LCM of the minimal polynomials of alpha^1..alpha^2t
    (even exponents share cosets with odd ones, so the product runs over
    distinct cosets only).
    """
    if t < 1:
        raise CodeConstructionError(f"t must be >= 1, got {t}")
    if k < 1:
        raise CodeConstructionError(f"k must be >= 1, got {k}")
    gf = field(m)
    size = gf.order - 1
    seen: set[int] = set()
    generator = 1
    for a in range(1, 2 * t + 1):
        e = a % size
        if e in seen:
            continue
        coset = set()
        while e not in coset:
            coset.add(e)
            e = (e * 2) % size
        if coset & seen:
            seen |= coset
            continue
        seen |= coset
        generator = _gf2_mul(generator, _minimal_polynomial(gf, a))
    n = k + _gf2_deg(generator)
    if n > size:
        raise CodeConstructionError(
            f"k={k}, t={t} needs n={n} > {size} available positions in GF(2^{m})")
    return BchCode(n=n, k=k, t=t, m=m, generator=generator, shorten_by=size - n, gf=gf)


def encode(code: BchCode, message: np.ndarray) -> np.ndarray:
    """Systematic encoding: the codeword is the message followed by the
    remainder of message * x^r divided by the generator."""
    if len(message) != code.k:
        raise ValueError(f"message must be {code.k} bits, got {len(message)}")
    r = code.parity_bits
    msg_int = 0
    for b in message:
        msg_int = (msg_int << 1) | int(b)
    rem = _gf2_mod(msg_int << r, code.generator)
    cw = np.empty(code.n, dtype=np.uint8)
    cw[: code.k] = message
    for i in range(r):
        cw[code.k + i] = (rem >> (r - 1 - i)) & 1
    return cw


@dataclass(frozen=True)
class DecodeResult:
    status: str                      # CLEAN, CORRECTED or FAILURE
    message: np.ndarray | None       # k recovered bits, None on failure
    corrected_positions: tuple[int, ...] = ()


def _syndromes(code: BchCode, positions: np.ndarray) -> list[int]:
    gf = code.gf
    syn = []
    for i in range(1, 2 * code.t + 1):
        s = 0
        for p in positions:
            s ^= gf.alpha_power(i * (code.n - 1 - int(p)))
        syn.append(s)
    return syn


def _berlekamp_massey(gf: GF2m, syndromes: list[int]) -> list[int]:
    """Error locator polynomial from syndromes, lowest degree first."""
    c = [1]
    b = [1]
    L = 0
    gap = 1
    prev_d = 1
    for n, s in enumerate(syndromes):
        d = s
        for i in range(1, L + 1):
            if i < len(c):
                d ^= gf.mul(c[i], syndromes[n - i])
        if d == 0:
            gap += 1
            continue
        scale = gf.mul(d, gf.inv(prev_d))
        shifted = [0] * gap + [gf.mul(scale, x) for x in b]
        if 2 * L <= n:
            old_c = c[:]
            c = [x ^ y for x, y in zip(c + [0] * (len(shifted) - len(c)),
                                       shifted + [0] * (len(c) - len(shifted)))]
            L = n + 1 - L
            b = old_c
            prev_d = d
            gap = 1
        else:
            c = [x ^ y for x, y in zip(c + [0] * (len(shifted) - len(c)),
                                       shifted + [0] * (len(c) - len(shifted)))]
            gap += 1
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def _chien_search(code: BchCode, locator: list[int]) -> list[int]:
    """Transmitted positions whose locator evaluation hits zero.

    Roots landing in the shortened range (degrees >= n) are simply never
    visited, so a locator pointing there yields fewer roots than its
    degree and the caller must flag failure.
    """
    gf = code.gf
    hits = []
    for p in range(code.n):
        x = gf.alpha_power(-(code.n - 1 - p))
        if gf.eval_poly(locator, x) == 0:
            hits.append(p)
    return hits


def decode(code: BchCode, received: np.ndarray) -> DecodeResult:
    """Decode a hard-decision received word.

    Returns CLEAN when all syndromes vanish, CORRECTED after a successful
    correction of at most ``t`` flips, FAILURE otherwise.  A corrected word
    is re-checked: the claim is only made when the patched word's
    syndromes all vanish, so miscorrections beyond the design distance
    surface as FAILURE rather than silent garbage.
    """
    if len(received) != code.n:
        raise ValueError(f"received word must be {code.n} bits, got {len(received)}")
    positions = np.nonzero(received)[0]
    syn = _syndromes(code, positions)
    if not any(syn):
        return DecodeResult(CLEAN, received[: code.k].copy())

    locator = _berlekamp_massey(code.gf, syn)
    degree = len(locator) - 1
    if degree < 1 or degree > code.t:
        return DecodeResult(FAILURE, None)
    roots = _chien_search(code, locator)
    if len(roots) != degree:
        return DecodeResult(FAILURE, None)

    patched = received.copy()
    for p in roots:
        patched[p] ^= 1
    if any(_syndromes(code, np.nonzero(patched)[0])):
        return DecodeResult(FAILURE, None)
    return DecodeResult(CORRECTED, patched[: code.k].copy(), tuple(roots))
