"""Small helpers for bit vectors.

Bit vectors are numpy uint8 arrays of 0/1 values, index 0 being the first
bit on the wire (most significant when packed into integers or hex).
"""
from __future__ import annotations

import numpy as np


def bits_from_int(value: int, width: int) -> np.ndarray:
    if value < 0 or value >> width:
        raise ValueError(f"value {value} does not fit in {width} bits")
    return np.array([(value >> (width - 1 - i)) & 1 for i in range(width)], dtype=np.uint8)


def bits_to_int(bits: np.ndarray) -> int:
    out = 0
    for b in bits:
        out = (out << 1) | int(b)
    return out


def bits_to_hex(bits: np.ndarray) -> str:
    if len(bits) % 4:
        raise ValueError("bit count must be a multiple of 4 for hex dumps")
    return f"{bits_to_int(bits):0{len(bits) // 4}x}"


def bits_from_hex(text: str, width: int | None = None) -> np.ndarray:
    text = text.strip()
    n = 4 * len(text) if width is None else width
    return bits_from_int(int(text, 16), n)


def hamming(a: np.ndarray, b: np.ndarray) -> int:
    return int(np.count_nonzero(a != b))


def random_bits(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.integers(0, 2, size=n, dtype=np.uint8)
