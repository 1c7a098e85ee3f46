/** A hello frame shaped like the real service's vocabulary. */

import type { HelloFrame } from "../src/protocol.js";

export function makeHello(overrides: Partial<HelloFrame> = {}): HelloFrame {
  return {
    type: "hello",
    schema: 1,
    client_id: 1,
    vehicle: "cfg3",
    ber: 0,
    running: true,
    token_owner: null,
    patterns: {
      square: {
        id: 1,
        params: [
          "cruise_speed", "target_depth", "side_span", "direction",
          null, null,
        ],
      },
      circle: {
        id: 3,
        params: [
          "cruise_speed", "target_depth", "radius", "direction", null, null,
        ],
      },
      hover: {
        id: 6,
        params: ["duration", "target_depth", "heading", null, null, null],
      },
    },
    quantization: {
      version: 1,
      roles: {
        cruise_speed: {
          scale: 0.01, offset: 0, unit: "m/s", min: 0, max: 2.55,
        },
        target_depth: { scale: 0.1, offset: 0, unit: "m", min: 0, max: 25.5 },
        side_span: { scale: 0.5, offset: 0, unit: "m", min: 0, max: 127.5 },
        radius: { scale: 0.5, offset: 0, unit: "m", min: 0, max: 127.5 },
        direction: {
          scale: 1, offset: 0, unit: "0=cw/1=ccw", min: 0, max: 255,
        },
        duration: { scale: 10, offset: 0, unit: "s", min: 0, max: 2550 },
        heading: {
          scale: 1.40625, offset: 0, unit: "deg", min: 0, max: 358.59375,
        },
      },
    },
    ...overrides,
  };
}

export const CIRCLE_DRAFT = {
  pattern: "circle",
  values: {
    cruise_speed: 0.5,
    target_depth: 1.0,
    radius: 5.0,
    direction: 1,
  },
};
