/**
 * Console loop against a live backend. Spawns the real service, drives
 * the real ConsoleSession through a real WebSocket, and checks the
 * operator story end to end: at BER 0 every pattern lands CLEAN with a
 * plan overlay inside a second; at BER 0.1 failures become visible and
 * never move the plan.
 */

import { spawn } from "node:child_process";
import type { ChildProcess } from "node:child_process";
import { afterAll, beforeAll, expect, it } from "vitest";
import WebSocket from "ws";

import { activeRoles } from "../src/composer.js";
import type { Draft } from "../src/composer.js";
import type { DispositionFrame, HelloFrame } from "../src/protocol.js";
import { ConsoleSession } from "../src/socket.js";
import type { SessionSnapshot, SocketLike } from "../src/socket.js";

const PORT = 8942;
const URL_WS = `ws://127.0.0.1:${PORT}/ws`;

let server: ChildProcess;
let session: ConsoleSession;

function nodeSocket(url: string): SocketLike {
  const ws = new WebSocket(url);
  const like: SocketLike = {
    send: (data) => ws.send(data),
    close: () => ws.close(),
    onopen: null,
    onmessage: null,
    onclose: null,
  };
  ws.on("open", () => like.onopen?.());
  ws.on("message", (data) => like.onmessage?.(data.toString()));
  ws.on("close", () => like.onclose?.());
  ws.on("error", () => like.onclose?.());
  return like;
}

function waitFor<T>(
  pick: (snap: SessionSnapshot) => T | undefined,
  what: string,
  timeoutMs = 5000,
): Promise<T> {
  return new Promise((resolve, reject) => {
    const timer = setTimeout(() => {
      off();
      reject(new Error(`timed out waiting for ${what}`));
    }, timeoutMs);
    const check = (snap: SessionSnapshot) => {
      const value = pick(snap);
      if (value !== undefined) {
        clearTimeout(timer);
        off();
        resolve(value);
      }
    };
    const off = session.subscribe(check);
    check(session.snapshot());
  });
}

// one in-range value per role; chosen to keep every pattern's geometry
// non-degenerate (distinct depths, growing spiral, a couple of turns)
const SPECIAL: Record<string, number> = {
  direction: 1,
  laps: 1,
  loops: 2,
  turns: 2,
  end_depth: 3,
  final_radius: 15,
  duration: 30,
};

function draftFor(hello: HelloFrame, pattern: string): Draft {
  const values: Record<string, number> = {};
  for (const role of activeRoles(hello.patterns[pattern])) {
    const spec = hello.quantization.roles[role];
    values[role] = SPECIAL[role] ?? spec.offset + spec.scale * 10;
  }
  return { pattern, values };
}

async function nextDisposition(
  act: () => void,
): Promise<DispositionFrame> {
  const before = session.snapshot().dispositions.length;
  act();
  return waitFor(
    (snap) =>
      snap.dispositions.length > before
        ? snap.dispositions[snap.dispositions.length - 1]
        : undefined,
    "a disposition",
  );
}

beforeAll(async () => {
  server = spawn(
    "python3",
    [
      "-m", "sublink.cli", "serve",
      "--port", String(PORT),
      "--realtime-factor", "25",
    ],
    { cwd: "..", stdio: "ignore" },
  );
  let up = false;
  for (let i = 0; i < 75 && !up; i++) {
    try {
      const res = await fetch(`http://127.0.0.1:${PORT}/healthz`);
      up = res.ok;
    } catch {
      await new Promise((r) => setTimeout(r, 200));
    }
  }
  if (!up) throw new Error("backend never came up");

  session = new ConsoleSession(nodeSocket);
  session.connect(URL_WS);
  await waitFor(
    (snap) => (snap.connection === "ready" ? true : undefined),
    "the hello handshake",
  );
  session.acquireToken();
  await waitFor((snap) => (session.hasToken() ? true : undefined), "the token");
}, 30_000);

afterAll(async () => {
  session?.disconnect();
  if (server !== undefined && server.exitCode === null) {
    server.kill("SIGTERM");
    await new Promise((resolve) => server.once("exit", resolve));
  }
});

it("lands every pattern clean with a plan overlay within a second", async () => {
  const hello = session.snapshot().hello!;
  const names = Object.keys(hello.patterns).sort(
    (a, b) => hello.patterns[a].id - hello.patterns[b].id,
  );
  expect(names).toHaveLength(8);

  let lastPlanId = session.snapshot().plan?.plan_id ?? 0;
  for (const name of names) {
    const started = Date.now();
    const disp = await nextDisposition(() => {
      expect(session.sendCommand(draftFor(hello, name))).toEqual([]);
    });
    expect(disp.disposition).toBe("clean");
    expect(disp.pattern).toBe(name);
    const plan = await waitFor(
      (snap) =>
        snap.plan !== null && snap.plan.plan_id === disp.plan_id
          ? snap.plan
          : undefined,
      `the ${name} plan overlay`,
    );
    expect(Date.now() - started).toBeLessThan(1000);
    expect(plan.pattern).toBe(name);
    expect(plan.plan_id).toBe(lastPlanId + 1);
    expect(plan.waypoints.length).toBeGreaterThan(0);
    lastPlanId = plan.plan_id;
  }
}, 30_000);

it("surfaces fec failures at ber 0.1 and never moves the plan on them", async () => {
  const hello = session.snapshot().hello!;
  session.setBer(0.1);
  await waitFor(
    (snap) => (Math.abs(snap.ber - 0.1) < 1e-12 ? true : undefined),
    "the ber change",
  );

  const draft = draftFor(hello, "circle");
  let failures = 0;
  for (let i = 0; i < 40; i++) {
    const planBefore = session.snapshot().plan?.plan_id ?? 0;
    const disp = await nextDisposition(() => {
      expect(session.sendCommand(draft)).toEqual([]);
    });
    if (disp.disposition === "clean" || disp.disposition === "corrected") {
      // drain this send's plan frame so the next iteration's baseline
      // is not straddling an in-flight overlay update
      await waitFor(
        (snap) =>
          snap.plan !== null && snap.plan.plan_id === disp.plan_id
            ? true
            : undefined,
        "the accepted plan overlay",
      );
    } else {
      failures += 1;
      expect(session.snapshot().plan?.plan_id ?? 0).toBe(planBefore);
    }
  }
  expect(failures).toBeGreaterThan(0);
}, 60_000);
