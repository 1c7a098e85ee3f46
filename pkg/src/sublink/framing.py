"""Packet framing for the acoustic-rate link.

One packet is exactly 100 bits:

    [16-bit preamble 1010...10][8-bit delimiter 10110111][72-bit codeword][4-bit guard 0000]

Sync scanning tolerates a few preamble bit errors and one delimiter error.
False syncs are permitted by design: the FEC re-check downstream throws
garbage candidates away, framing only has to propose them.  Hex dumps are
25 hex characters per packet, first wire bit in the most significant
nibble.

``frame_block``/``scan`` take the codeword length as a parameter so link
characterization can sweep codes of other sizes through the same sync
pattern; ``frame``/``deframe`` are the fixed 72-bit link versions.
"""
from __future__ import annotations

import numpy as np

from .bits import bits_from_hex, bits_from_int, bits_to_hex, hamming

PREAMBLE = bits_from_int(0xAAAA, 16)
DELIMITER = bits_from_int(0xB7, 8)
HEADER_BITS = 24
GUARD_BITS = 4
CODEWORD_BITS = 72
PACKET_BITS = HEADER_BITS + CODEWORD_BITS + GUARD_BITS     # 100
DELIMITER_TOLERANCE = 1

# Link budget context, printed by the CLI alongside encoded packets.
LINK_RATE_BPS = 36_000
LATENCY_BUDGET_MS = 1.0


def frame_block(codeword: np.ndarray) -> np.ndarray:
    return np.concatenate([PREAMBLE, DELIMITER,
                           np.asarray(codeword, dtype=np.uint8),
                           np.zeros(GUARD_BITS, dtype=np.uint8)])


def scan(stream: np.ndarray, block_bits: int,
         max_preamble_errors: int = 2) -> list[tuple[int, np.ndarray]]:
    """Find sync candidates, returning (offset, codeword-bits) pairs.

    A candidate needs all ``block_bits`` present after the delimiter; the
    guard is skipped, not checked.  After a hit the scan resumes past the
    guard, so back-to-back packets come out in order.
    """
    stream = np.asarray(stream, dtype=np.uint8)
    found = []
    i = 0
    last_start = len(stream) - (HEADER_BITS + block_bits)
    while i <= last_start:
        if (hamming(stream[i:i + 16], PREAMBLE) <= max_preamble_errors
                and hamming(stream[i + 16:i + 24], DELIMITER) <= DELIMITER_TOLERANCE):
            found.append((i, stream[i + HEADER_BITS:i + HEADER_BITS + block_bits].copy()))
            i += HEADER_BITS + block_bits + GUARD_BITS
        else:
            i += 1
    return found


def frame(codeword: np.ndarray) -> np.ndarray:
    if len(codeword) != CODEWORD_BITS:
        raise ValueError(f"codeword must be {CODEWORD_BITS} bits, got {len(codeword)}")
    return frame_block(codeword)


def deframe(stream: np.ndarray, max_preamble_errors: int = 2) -> list[tuple[int, np.ndarray]]:
    return scan(stream, CODEWORD_BITS, max_preamble_errors)


def packet_to_hex(packet: np.ndarray) -> str:
    if len(packet) != PACKET_BITS:
        raise ValueError(f"packet must be {PACKET_BITS} bits, got {len(packet)}")
    return bits_to_hex(packet)


def hex_to_packet(text: str) -> np.ndarray:
    text = text.strip()
    if len(text) != PACKET_BITS // 4:
        raise ValueError(f"packet dump must be {PACKET_BITS // 4} hex chars, got {len(text)}")
    return bits_from_hex(text, PACKET_BITS)


def transmit_time_ms(bits: int = PACKET_BITS, rate_bps: int = LINK_RATE_BPS) -> float:
    return 1000.0 * bits / rate_bps
