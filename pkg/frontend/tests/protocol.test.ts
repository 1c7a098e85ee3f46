import { describe, expect, it } from "vitest";

import {
  compatibilityError,
  EXPECTED_SCHEMA,
  parseServerFrame,
} from "../src/protocol.js";
import { makeHello } from "./fixtures.js";

describe("parseServerFrame", () => {
  it("round-trips every frame type the server sends", () => {
    const samples = [
      makeHello(),
      {
        type: "telemetry", t: 1.2, x: 0, y: 0, z: 0.5, yaw: 0, roll: 0,
        u: 0, w: 0, phase: "executing", plan_id: 1, wp_index: 0,
      },
      {
        type: "plan", plan_id: 1, pattern: "circle", closed: true,
        est_duration: 62.8, waypoints: [[1, 2, 0.5]],
      },
      {
        type: "disposition", t: 0.4, disposition: "clean", detail: "",
        pattern: "circle", plan_id: 1, corrected_positions: [],
      },
      {
        type: "status", schema: 1, running: true, ber: 0.02,
        vehicle: "cfg3", t: 3.4,
      },
      { type: "token", owner: 2 },
      { type: "reset", seed: 7 },
      { type: "error", message: "nope" },
    ];
    for (const sample of samples) {
      const parsed = parseServerFrame(JSON.stringify(sample));
      expect(parsed).not.toBeNull();
      expect(parsed!.type).toBe(sample.type);
    }
  });

  it("rejects what is not a frame", () => {
    expect(parseServerFrame("not json")).toBeNull();
    expect(parseServerFrame("42")).toBeNull();
    expect(parseServerFrame("[1,2]")).toBeNull();
    expect(parseServerFrame('{"no":"type"}')).toBeNull();
    expect(parseServerFrame('{"type":"surprise"}')).toBeNull();
  });

  it("rejects known types with mangled required fields", () => {
    expect(parseServerFrame('{"type":"hello","schema":"one"}')).toBeNull();
    expect(parseServerFrame('{"type":"telemetry","t":"soon"}')).toBeNull();
    expect(parseServerFrame('{"type":"plan","plan_id":1}')).toBeNull();
    expect(parseServerFrame('{"type":"error"}')).toBeNull();
    expect(parseServerFrame('{"type":"token"}')).toBeNull();
  });
});

describe("compatibilityError", () => {
  it("accepts the schema and table it was built for", () => {
    expect(compatibilityError(makeHello())).toBeNull();
  });

  it("names a schema mismatch", () => {
    const hello = makeHello({ schema: EXPECTED_SCHEMA + 1 });
    expect(compatibilityError(hello)).toMatch(/schema 2/);
  });

  it("names a quantization table mismatch", () => {
    const hello = makeHello();
    hello.quantization = { ...hello.quantization, version: 9 };
    expect(compatibilityError(hello)).toMatch(/table v9/);
  });
});
