/**
 * Console session state machine.
 *
 * One WebSocket, one mutable session object, one immutable snapshot
 * handed to renderers after every change. The session never simulates:
 * everything it knows arrived in a server frame, and on disconnect it
 * freezes the last snapshot rather than extrapolating.
 *
 * The socket itself is injected as a factory so tests can drive the
 * session with a scripted fake and the browser can pass a thin
 * WebSocket adapter.
 */

import { toMessage, validateDraft } from "./composer.js";
import type { Draft, FieldError } from "./composer.js";
import { compatibilityError, parseServerFrame } from "./protocol.js";
import type {
  ClientMessage,
  DispositionFrame,
  HelloFrame,
  PlanFrame,
  TelemetryFrame,
} from "./protocol.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: (() => void) | null;
  onmessage: ((data: string) => void) | null;
  onclose: (() => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export type ConnectionState =
  | "idle"
  | "connecting"
  | "ready"
  | "incompatible"
  | "closed";

export interface TrackPoint {
  t: number;
  x: number;
  y: number;
  z: number;
}

export interface SessionSnapshot {
  connection: ConnectionState;
  incompatibleReason: string | null;
  hello: HelloFrame | null;
  clientId: number | null;
  tokenOwner: number | null;
  running: boolean;
  ber: number;
  latest: TelemetryFrame | null;
  track: readonly TrackPoint[];
  plan: PlanFrame | null;
  dispositions: readonly DispositionFrame[];
  serverErrors: readonly string[];
  protocolErrors: number;
}

const TRACK_LIMIT = 3600; // six minutes of 10 Hz telemetry
const DISPOSITION_LIMIT = 50;
const ERROR_LIMIT = 10;

export class ConsoleSession {
  private makeSocket: SocketFactory;
  private socket: SocketLike | null = null;
  private listeners = new Set<(snap: SessionSnapshot) => void>();

  private connection: ConnectionState = "idle";
  private incompatibleReason: string | null = null;
  private hello: HelloFrame | null = null;
  private clientId: number | null = null;
  private tokenOwner: number | null = null;
  private running = false;
  private ber = 0;
  private latest: TelemetryFrame | null = null;
  private track: TrackPoint[] = [];
  private plan: PlanFrame | null = null;
  private dispositions: DispositionFrame[] = [];
  private serverErrors: string[] = [];
  private protocolErrors = 0;

  constructor(makeSocket: SocketFactory) {
    this.makeSocket = makeSocket;
  }

  // -- lifecycle ------------------------------------------------------

  connect(url: string): void {
    if (this.socket !== null) this.socket.close();
    this.connection = "connecting";
    this.incompatibleReason = null;
    const socket = this.makeSocket(url);
    this.socket = socket;
    socket.onopen = () => {
      // stay "connecting" until the hello frame proves compatibility
      this.emit();
    };
    socket.onmessage = (data) => this.onFrame(data);
    socket.onclose = () => {
      if (this.connection !== "incompatible") this.connection = "closed";
      this.socket = null;
      this.emit();
    };
    this.emit();
  }

  disconnect(): void {
    this.socket?.close();
  }

  subscribe(fn: (snap: SessionSnapshot) => void): () => void {
    this.listeners.add(fn);
    return () => this.listeners.delete(fn);
  }

  snapshot(): SessionSnapshot {
    return {
      connection: this.connection,
      incompatibleReason: this.incompatibleReason,
      hello: this.hello,
      clientId: this.clientId,
      tokenOwner: this.tokenOwner,
      running: this.running,
      ber: this.ber,
      latest: this.latest,
      track: this.track,
      plan: this.plan,
      dispositions: this.dispositions,
      serverErrors: this.serverErrors,
      protocolErrors: this.protocolErrors,
    };
  }

  hasToken(): boolean {
    return this.clientId !== null && this.tokenOwner === this.clientId;
  }

  // -- operator actions -----------------------------------------------

  /**
   * Validate and transmit a draft. A non-empty return means nothing was
   * sent; entries name the offending field ("session" for connection
   * and token problems).
   */
  sendCommand(draft: Draft): FieldError[] {
    if (this.connection !== "ready" || this.hello === null) {
      return [{ field: "session", message: "not connected" }];
    }
    if (!this.hasToken()) {
      return [{ field: "session", message: "command token required" }];
    }
    const errors = validateDraft(this.hello, draft);
    if (errors.length > 0) return errors;
    this.send(toMessage(draft));
    return [];
  }

  acquireToken(): void {
    this.send({ type: "acquire_token" });
  }

  releaseToken(): void {
    this.send({ type: "release_token" });
  }

  setBer(ber: number): void {
    this.send({ type: "set_ber", ber });
  }

  pause(): void {
    this.send({ type: "pause" });
  }

  resume(): void {
    this.send({ type: "resume" });
  }

  reset(seed?: number): void {
    this.send(seed === undefined ? { type: "reset" } : { type: "reset", seed });
  }

  private send(msg: ClientMessage): void {
    if (this.connection === "ready" && this.socket !== null) {
      this.socket.send(JSON.stringify(msg));
    }
  }

  // -- inbound --------------------------------------------------------

  private onFrame(data: string): void {
    const frame = parseServerFrame(data);
    if (frame === null) {
      this.protocolErrors += 1;
      this.emit();
      return;
    }
    switch (frame.type) {
      case "hello": {
        const problem = compatibilityError(frame);
        if (problem !== null) {
          this.connection = "incompatible";
          this.incompatibleReason = problem;
          this.socket?.close();
          break;
        }
        this.hello = frame;
        this.clientId = frame.client_id;
        this.tokenOwner = frame.token_owner;
        this.running = frame.running;
        this.ber = frame.ber;
        this.connection = "ready";
        break;
      }
      case "telemetry":
        this.latest = frame;
        this.track.push({ t: frame.t, x: frame.x, y: frame.y, z: frame.z });
        if (this.track.length > TRACK_LIMIT) {
          this.track.splice(0, this.track.length - TRACK_LIMIT);
        }
        break;
      case "plan":
        this.plan = frame;
        break;
      case "disposition":
        this.dispositions.push(frame);
        if (this.dispositions.length > DISPOSITION_LIMIT) {
          this.dispositions.splice(
            0,
            this.dispositions.length - DISPOSITION_LIMIT,
          );
        }
        break;
      case "status":
        this.running = frame.running;
        this.ber = frame.ber;
        break;
      case "token":
        this.tokenOwner = frame.owner;
        break;
      case "reset":
        // fresh vehicle server-side; stale motion data would be a lie
        this.track = [];
        this.latest = null;
        this.plan = null;
        break;
      case "error":
        this.serverErrors.push(frame.message);
        if (this.serverErrors.length > ERROR_LIMIT) {
          this.serverErrors.splice(0, this.serverErrors.length - ERROR_LIMIT);
        }
        break;
    }
    this.emit();
  }

  private emit(): void {
    const snap = this.snapshot();
    for (const fn of this.listeners) fn(snap);
  }
}
