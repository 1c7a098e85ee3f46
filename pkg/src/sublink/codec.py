"""Mission command codec: 52-bit payloads carrying one maneuver command.

Payload layout, first bit on the wire first:

    [4-bit pattern id][param0][param1]...[param5]     (6 x 8-bit params)

Each pattern assigns meanings to a prefix of the six parameter slots;
unused slots must be zero, which doubles as a weak integrity check on top
of the FEC.  Physical values are quantized per role through a versioned,
operator-editable table (``configs/quantization.yaml``).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np
import yaml

from .bits import bits_from_int, bits_to_int

PAYLOAD_BITS = 52
MESSAGE_BITS = 56            # payload plus 4 zero pad bits, the FEC block size
SUPPORTED_TABLE_VERSION = 1


class CommandCodecError(ValueError):
    pass


class UnknownPatternError(CommandCodecError):
    """Pattern id outside the assigned range (ids 8..15 are reserved)."""


class MalformedPayloadError(CommandCodecError):
    """Structurally invalid payload: nonzero unused slot or pad bits."""


class RangeError(CommandCodecError):
    """Physical value outside the role's declared range (never clamped)."""


class TableVersionError(CommandCodecError):
    """Quantization table version not supported by this codec."""


class PatternType(enum.IntEnum):
    STRAIGHT = 0
    SQUARE = 1
    LAWNMOWER = 2
    CIRCLE = 3
    SPIRAL = 4
    HELIX = 5
    HOVER = 6
    BOX_ORBIT = 7


# Slot meanings per pattern; None marks a must-be-zero slot.
PARAM_ROLES: dict[PatternType, tuple[str | None, ...]] = {
    PatternType.STRAIGHT: ("cruise_speed", "target_depth", "duration", "heading", None, None),
    PatternType.SQUARE: ("cruise_speed", "target_depth", "side_span", "direction", None, None),
    PatternType.LAWNMOWER: ("cruise_speed", "target_depth", "grid_width", "grid_height", "laps", None),
    PatternType.CIRCLE: ("cruise_speed", "target_depth", "radius", "direction", None, None),
    PatternType.SPIRAL: ("cruise_speed", "target_depth", "initial_radius", "final_radius", "loops", "direction"),
    PatternType.HELIX: ("cruise_speed", "start_depth", "end_depth", "radius", "turns", "direction"),
    PatternType.HOVER: ("duration", "target_depth", "heading", None, None, None),
    PatternType.BOX_ORBIT: ("cruise_speed", "target_depth", "radius", "direction", "laps", None),
}

CW = 0
CCW = 1


@dataclass(frozen=True)
class RoleSpec:
    scale: float
    offset: float
    unit: str
    min: float
    max: float


@dataclass(frozen=True)
class QuantTable:
    version: int
    roles: dict[str, RoleSpec]

    def spec(self, role: str) -> RoleSpec:
        try:
            return self.roles[role]
        except KeyError:
            raise CommandCodecError(f"unknown param role {role!r}") from None


def load_table(path: str | Path | None = None) -> QuantTable:
    """Load a quantization table, defaulting to the packaged one.

    Refuses tables whose version differs from SUPPORTED_TABLE_VERSION so a
    vehicle and an operator console never silently disagree on scales.
    """
    if path is None:
        text = resources.files("sublink.configs").joinpath("quantization.yaml").read_text()
    else:
        text = Path(path).read_text()
    raw = yaml.safe_load(text)
    version = int(raw["version"])
    if version != SUPPORTED_TABLE_VERSION:
        raise TableVersionError(
            f"table version {version} not supported (expected {SUPPORTED_TABLE_VERSION})")
    roles = {name: RoleSpec(float(d["scale"]), float(d["offset"]), str(d["unit"]),
                            float(d["min"]), float(d["max"]))
             for name, d in raw["roles"].items()}
    return QuantTable(version=version, roles=roles)


def quantize(table: QuantTable, role: str, physical: float) -> int:
    spec = table.spec(role)
    if not (spec.min <= physical <= spec.max):
        raise RangeError(
            f"{role}={physical} outside [{spec.min}, {spec.max}] {spec.unit}")
    raw = round((physical - spec.offset) / spec.scale)
    if not 0 <= raw <= 255:
        raise RangeError(f"{role}={physical} quantizes to {raw}, outside one byte")
    return raw


def dequantize(table: QuantTable, role: str, raw: int) -> float:
    if not 0 <= raw <= 255:
        raise RangeError(f"raw value {raw} outside one byte")
    spec = table.spec(role)
    return raw * spec.scale + spec.offset


@dataclass(frozen=True)
class MissionCommand:
    pattern: PatternType
    raw_params: tuple[int, int, int, int, int, int]

    def __post_init__(self):
        if len(self.raw_params) != 6:
            raise CommandCodecError("exactly six param slots required")
        for i, v in enumerate(self.raw_params):
            if not 0 <= int(v) <= 255:
                raise RangeError(f"param slot {i} value {v} outside one byte")

    def validate(self) -> None:
        roles = PARAM_ROLES[self.pattern]
        for i, role in enumerate(roles):
            if role is None and self.raw_params[i] != 0:
                raise MalformedPayloadError(
                    f"{self.pattern.name.lower()} slot {i} is unused but holds "
                    f"{self.raw_params[i]}")

    def physical(self, table: QuantTable) -> dict[str, float]:
        """Decoded physical values keyed by role, unused slots omitted."""
        out = {}
        for role, raw in zip(PARAM_ROLES[self.pattern], self.raw_params):
            if role is not None:
                out[role] = dequantize(table, role, raw)
        return out

    @classmethod
    def from_physical(cls, pattern: PatternType, values: dict[str, float],
                      table: QuantTable) -> "MissionCommand":
        roles = PARAM_ROLES[pattern]
        wanted = {r for r in roles if r is not None}
        extra = set(values) - wanted
        if extra:
            raise CommandCodecError(
                f"{pattern.name.lower()} takes no {sorted(extra)} params")
        missing = wanted - set(values)
        if missing:
            raise CommandCodecError(
                f"{pattern.name.lower()} missing params {sorted(missing)}")
        raw = tuple(
            0 if role is None else quantize(table, role, float(values[role]))
            for role in roles)
        return cls(pattern, raw)


def encode_command(cmd: MissionCommand) -> np.ndarray:
    """MissionCommand to 52 payload bits; refuses malformed commands."""
    cmd.validate()
    value = int(cmd.pattern)
    for p in cmd.raw_params:
        value = (value << 8) | int(p)
    return bits_from_int(value, PAYLOAD_BITS)


def decode_payload(bits: np.ndarray) -> MissionCommand:
    """52 payload bits to MissionCommand.

    Raises UnknownPatternError for reserved ids and MalformedPayloadError
    when an unused slot carries a nonzero byte.
    """
    if len(bits) != PAYLOAD_BITS:
        raise MalformedPayloadError(f"payload must be {PAYLOAD_BITS} bits, got {len(bits)}")
    pattern_id = bits_to_int(bits[:4])
    if pattern_id >= len(PatternType):
        raise UnknownPatternError(f"pattern id {pattern_id:04b} is reserved")
    params = tuple(bits_to_int(bits[4 + 8 * i: 12 + 8 * i]) for i in range(6))
    cmd = MissionCommand(PatternType(pattern_id), params)
    cmd.validate()
    return cmd


def payload_to_message(payload: np.ndarray) -> np.ndarray:
    """Pad the 52 payload bits with 4 zero bits up to the FEC block size."""
    if len(payload) != PAYLOAD_BITS:
        raise MalformedPayloadError(f"payload must be {PAYLOAD_BITS} bits")
    return np.concatenate([payload, np.zeros(MESSAGE_BITS - PAYLOAD_BITS, dtype=np.uint8)])


def message_to_payload(message: np.ndarray) -> np.ndarray:
    """Strip the pad bits, insisting they are zero."""
    if len(message) != MESSAGE_BITS:
        raise MalformedPayloadError(f"message must be {MESSAGE_BITS} bits")
    if message[PAYLOAD_BITS:].any():
        raise MalformedPayloadError("nonzero pad bits")
    return message[:PAYLOAD_BITS]
