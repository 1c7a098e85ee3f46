/**
 * Bit-level picture of the packet a draft will become.
 *
 * The console can reconstruct everything deterministic from the served
 * table: sync preamble, delimiter, the 52 payload bits, the zero pad
 * and the zero guard. The 16 FEC parity bits are computed on the server
 * side of the wire and are rendered as unknowns here; the whole point
 * of the view is pedagogy, not a second encoder.
 */

import { quantize } from "./composer.js";
import type { Draft } from "./composer.js";
import type { HelloFrame } from "./protocol.js";

export const PREAMBLE_BITS = "1010101010101010"; // 0xAAAA
export const DELIMITER_BITS = "10110111"; // 0xB7
export const PAD_BITS = "0000";
export const GUARD_BITS = "0000";
export const PARITY_WIDTH = 16;

export interface PacketSegment {
  kind: "preamble" | "delimiter" | "payload" | "pad" | "parity" | "guard";
  label: string;
  /** MSB-first bit string; null when only the server knows the bits */
  bits: string | null;
  width: number;
}

function byteBits(value: number): string {
  return value.toString(2).padStart(8, "0");
}

/**
 * The 52 payload bits (pattern id nibble + six parameter bytes) for a
 * draft, or null when the draft does not quantize cleanly into bytes.
 */
export function payloadBits(hello: HelloFrame, draft: Draft): string | null {
  const info = hello.patterns[draft.pattern];
  if (info === undefined || info.id < 0 || info.id > 15) return null;
  let bits = info.id.toString(2).padStart(4, "0");
  for (const role of info.params) {
    if (role === null) {
      bits += "00000000";
      continue;
    }
    const spec = hello.quantization.roles[role];
    const value = draft.values[role];
    if (spec === undefined || value === undefined) return null;
    const byte = quantize(value, spec);
    if (byte < 0 || byte > 255) return null;
    bits += byteBits(byte);
  }
  return bits;
}

/** Payload as the 13 hex characters the backend tooling prints. */
export function payloadHex(hello: HelloFrame, draft: Draft): string | null {
  const bits = payloadBits(hello, draft);
  if (bits === null) return null;
  let hex = "";
  for (let i = 0; i < bits.length; i += 4) {
    hex += parseInt(bits.slice(i, i + 4), 2).toString(16);
  }
  return hex;
}

export function buildPacketView(
  hello: HelloFrame,
  draft: Draft,
): PacketSegment[] | null {
  const payload = payloadBits(hello, draft);
  if (payload === null) return null;
  return [
    { kind: "preamble", label: "sync", bits: PREAMBLE_BITS, width: 16 },
    { kind: "delimiter", label: "delimiter", bits: DELIMITER_BITS, width: 8 },
    { kind: "payload", label: "command", bits: payload, width: 52 },
    { kind: "pad", label: "pad", bits: PAD_BITS, width: 4 },
    { kind: "parity", label: "fec parity", bits: null, width: PARITY_WIDTH },
    { kind: "guard", label: "guard", bits: GUARD_BITS, width: 4 },
  ];
}

export function totalWidth(segments: PacketSegment[]): number {
  return segments.reduce((sum, s) => sum + s.width, 0);
}
