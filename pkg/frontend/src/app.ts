/**
 * DOM wiring. Everything stateful lives in ConsoleSession; this file
 * only reads snapshots and pushes operator intent back through it, so
 * the view can be torn down or re-rendered at any time without touching
 * mission state.
 */

import {
  depthStrip,
  mapViewBox,
  planPath,
  trackPath,
  vehicleMarker,
  viewBoxAttr,
} from "./charts.js";
import { activeRoles, receivedPreview } from "./composer.js";
import type { Draft } from "./composer.js";
import { buildPacketView } from "./packetview.js";
import { ConsoleSession } from "./socket.js";
import type { SessionSnapshot, SocketLike } from "./socket.js";

function browserSocket(url: string): SocketLike {
  const ws = new WebSocket(url);
  const like: SocketLike = {
    send: (data) => ws.send(data),
    close: () => ws.close(),
    onopen: null,
    onmessage: null,
    onclose: null,
  };
  ws.onopen = () => like.onopen?.();
  ws.onmessage = (ev) => like.onmessage?.(String(ev.data));
  ws.onclose = () => like.onclose?.();
  return like;
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing #${id}`);
  return node as T;
}

const session = new ConsoleSession(browserSocket);

// -- connection -------------------------------------------------------

const urlInput = el<HTMLInputElement>("url");
urlInput.value = `ws://${location.host || "127.0.0.1:8765"}/ws`;
el<HTMLButtonElement>("connect").onclick = () => {
  session.connect(urlInput.value);
};

// -- composer ---------------------------------------------------------

const patternSelect = el<HTMLSelectElement>("pattern");
const fieldsDiv = el<HTMLDivElement>("fields");
const sessionError = el<HTMLDivElement>("session-error");
let knownPatterns: string[] = [];

function rebuildPatternOptions(snap: SessionSnapshot): void {
  if (snap.hello === null) return;
  const names = Object.keys(snap.hello.patterns).sort(
    (a, b) => snap.hello!.patterns[a].id - snap.hello!.patterns[b].id,
  );
  if (names.join() === knownPatterns.join()) return;
  knownPatterns = names;
  patternSelect.innerHTML = "";
  for (const name of names) {
    const opt = document.createElement("option");
    opt.value = name;
    opt.textContent = name;
    patternSelect.appendChild(opt);
  }
  rebuildFields();
}

function rebuildFields(): void {
  const snap = session.snapshot();
  fieldsDiv.innerHTML = "";
  if (snap.hello === null) return;
  const info = snap.hello.patterns[patternSelect.value];
  if (info === undefined) return;
  for (const role of activeRoles(info)) {
    const spec = snap.hello.quantization.roles[role];
    const row = document.createElement("label");
    row.className = "field";
    const input = document.createElement("input");
    input.type = "number";
    input.dataset.role = role;
    if (spec !== undefined) {
      input.min = String(spec.min);
      input.max = String(spec.max);
      input.step = String(spec.scale);
      input.value = String(spec.min);
    }
    const caption = document.createElement("span");
    caption.textContent = spec ? `${role} (${spec.unit})` : role;
    const err = document.createElement("span");
    err.className = "field-error";
    err.dataset.errorFor = role;
    row.append(caption, input, err);
    fieldsDiv.appendChild(row);
    input.oninput = updatePreview;
  }
  updatePreview();
}

function currentDraft(): Draft {
  const values: Record<string, number> = {};
  fieldsDiv.querySelectorAll("input").forEach((input) => {
    const role = (input as HTMLInputElement).dataset.role!;
    values[role] = Number((input as HTMLInputElement).value);
  });
  return { pattern: patternSelect.value, values };
}

function updatePreview(): void {
  const snap = session.snapshot();
  const preview = el<HTMLDivElement>("preview");
  if (snap.hello === null) {
    preview.textContent = "";
    return;
  }
  const received = receivedPreview(snap.hello, currentDraft());
  preview.textContent = Object.entries(received)
    .map(([role, v]) => `${role}=${Number(v.toFixed(6))}`)
    .join("  ");
}

patternSelect.onchange = rebuildFields;

el<HTMLButtonElement>("send").onclick = () => {
  fieldsDiv
    .querySelectorAll(".field-error")
    .forEach((s) => (s.textContent = ""));
  sessionError.textContent = "";
  const draft = currentDraft();
  const errors = session.sendCommand(draft);
  if (errors.length === 0) {
    renderPacket(draft);
    return;
  }
  for (const e of errors) {
    if (e.field === "pattern" || e.field === "session") {
      sessionError.textContent = `${e.field}: ${e.message}`;
    } else {
      const span = fieldsDiv.querySelector(
        `[data-error-for="${e.field}"]`,
      ) as HTMLElement | null;
      if (span !== null) span.textContent = e.message;
      else sessionError.textContent = `${e.field}: ${e.message}`;
    }
  }
};

el<HTMLButtonElement>("token").onclick = () => {
  if (session.hasToken()) session.releaseToken();
  else session.acquireToken();
};

// -- channel controls -------------------------------------------------

const berSlider = el<HTMLInputElement>("ber");
const berLabel = el<HTMLSpanElement>("ber-label");
berSlider.oninput = () => {
  berLabel.textContent = `${(Number(berSlider.value) * 100).toFixed(1)}%`;
};
el<HTMLButtonElement>("ber-apply").onclick = () => {
  session.setBer(Number(berSlider.value));
};
el<HTMLButtonElement>("runstate").onclick = () => {
  if (session.snapshot().running) session.pause();
  else session.resume();
};
el<HTMLButtonElement>("reset").onclick = () => session.reset();

// -- packet view ------------------------------------------------------

function renderPacket(draft: Draft): void {
  const snap = session.snapshot();
  const host = el<HTMLDivElement>("packet");
  host.innerHTML = "";
  if (snap.hello === null) return;
  const segments = buildPacketView(snap.hello, draft);
  if (segments === null) return;
  for (const seg of segments) {
    const span = document.createElement("span");
    span.className = `bits bits-${seg.kind}`;
    span.title = `${seg.label} (${seg.width} bits)`;
    span.textContent = seg.bits ?? "?".repeat(seg.width);
    host.appendChild(span);
  }
}

// -- live view --------------------------------------------------------

const BANNER_TEXT: Record<string, string> = {
  idle: "not connected",
  connecting: "connecting...",
  ready: "link up",
  closed: "LINK LOST: view frozen",
  incompatible: "incompatible server",
};

function render(snap: SessionSnapshot): void {
  const banner = el<HTMLDivElement>("banner");
  banner.className = `banner banner-${snap.connection}`;
  banner.textContent =
    snap.connection === "incompatible" && snap.incompatibleReason !== null
      ? `incompatible server: ${snap.incompatibleReason}`
      : BANNER_TEXT[snap.connection];

  rebuildPatternOptions(snap);

  const tel = snap.latest;
  el<HTMLSpanElement>("ro-t").textContent = tel ? tel.t.toFixed(1) : "-";
  el<HTMLSpanElement>("ro-phase").textContent = tel ? tel.phase : "-";
  el<HTMLSpanElement>("ro-depth").textContent = tel
    ? `${tel.z.toFixed(2)} m`
    : "-";
  el<HTMLSpanElement>("ro-wp").textContent = tel
    ? `${tel.wp_index} / plan ${tel.plan_id}`
    : "-";
  el<HTMLSpanElement>("ro-ber").textContent = `${(snap.ber * 100).toFixed(1)}%`;
  el<HTMLButtonElement>("runstate").textContent = snap.running
    ? "pause"
    : "resume";
  el<HTMLButtonElement>("token").textContent = session.hasToken()
    ? "release token"
    : "acquire token";
  el<HTMLSpanElement>("ro-token").textContent =
    snap.tokenOwner === null
      ? "free"
      : snap.tokenOwner === snap.clientId
        ? "mine"
        : `client ${snap.tokenOwner}`;

  // map
  const vb = mapViewBox(snap.track, snap.plan);
  const svg = el<HTMLElement>("map");
  svg.setAttribute("viewBox", viewBoxAttr(vb));
  el<HTMLElement>("track").setAttribute("d", trackPath(snap.track));
  el<HTMLElement>("plan-overlay").setAttribute("d", planPath(snap.plan));
  const marker = vehicleMarker(tel);
  const markerNode = el<HTMLElement>("vehicle");
  if (marker !== null) {
    markerNode.setAttribute(
      "transform",
      `translate(${marker.x} ${marker.y}) rotate(${marker.rotateDeg})`,
    );
    markerNode.setAttribute("visibility", "visible");
  } else {
    markerNode.setAttribute("visibility", "hidden");
  }

  // depth strip
  const strip = depthStrip(snap.track);
  const stripSvg = el<HTMLElement>("depth");
  if (strip !== null) {
    stripSvg.setAttribute("viewBox", viewBoxAttr(strip.viewBox));
    el<HTMLElement>("depth-path").setAttribute("d", strip.path);
  }

  // dispositions, newest on top
  const feed = el<HTMLUListElement>("feed");
  feed.innerHTML = "";
  for (const d of [...snap.dispositions].reverse().slice(0, 12)) {
    const li = document.createElement("li");
    const badge = document.createElement("span");
    badge.className = `badge badge-${d.disposition}`;
    badge.textContent = d.disposition;
    const text = document.createElement("span");
    const what = d.pattern !== null ? ` ${d.pattern} #${d.plan_id}` : "";
    text.textContent = ` t=${d.t.toFixed(2)}${what} ${d.detail}`;
    li.append(badge, text);
    feed.appendChild(li);
  }

  const errs = el<HTMLDivElement>("server-errors");
  errs.textContent = snap.serverErrors.slice(-3).join(" | ");
}

session.subscribe(render);
render(session.snapshot());
