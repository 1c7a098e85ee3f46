/**
 * Pure geometry for the live views: everything returns path strings and
 * viewBoxes, nothing touches the DOM. x east, y north in world space;
 * the map flips y so north points up on screen, and the depth strip
 * leaves z alone because depth-positive-down already matches screen
 * coordinates.
 */

import type { PlanFrame } from "./protocol.js";
import type { TrackPoint } from "./socket.js";

export interface ViewBox {
  x: number;
  y: number;
  width: number;
  height: number;
}

function fmt(n: number): string {
  return Number(n.toFixed(3)).toString();
}

export function viewBoxAttr(vb: ViewBox): string {
  return `${fmt(vb.x)} ${fmt(vb.y)} ${fmt(vb.width)} ${fmt(vb.height)}`;
}

/**
 * World-space bounds of everything worth seeing, padded, never thinner
 * than minSpan so a parked vehicle still gets a sane viewport.
 */
export function mapViewBox(
  track: readonly TrackPoint[],
  plan: PlanFrame | null,
  minSpan = 5,
): ViewBox {
  const xs: number[] = [];
  const ys: number[] = [];
  for (const p of track) {
    xs.push(p.x);
    ys.push(p.y);
  }
  if (plan !== null) {
    for (const [x, y] of plan.waypoints) {
      xs.push(x);
      ys.push(y);
    }
  }
  if (xs.length === 0) {
    xs.push(0);
    ys.push(0);
  }
  let minX = Math.min(...xs);
  let maxX = Math.max(...xs);
  let minY = Math.min(...ys);
  let maxY = Math.max(...ys);
  const growX = Math.max(minSpan - (maxX - minX), 0) / 2;
  const growY = Math.max(minSpan - (maxY - minY), 0) / 2;
  minX -= growX;
  maxX += growX;
  minY -= growY;
  maxY += growY;
  const padX = (maxX - minX) * 0.08;
  const padY = (maxY - minY) * 0.08;
  minX -= padX;
  maxX += padX;
  minY -= padY;
  maxY += padY;
  // screen y = -world y, so the box's y origin is the NEGATED north max
  return {
    x: minX,
    y: -maxY,
    width: maxX - minX,
    height: maxY - minY,
  };
}

/** Breadcrumb trail of where the vehicle has actually been. */
export function trackPath(track: readonly TrackPoint[]): string {
  if (track.length === 0) return "";
  const parts = track.map(
    (p, i) => `${i === 0 ? "M" : "L"} ${fmt(p.x)} ${fmt(-p.y)}`,
  );
  return parts.join(" ");
}

/** Plan overlay; closed plans get their return leg drawn too. */
export function planPath(plan: PlanFrame | null): string {
  if (plan === null || plan.waypoints.length === 0) return "";
  const parts = plan.waypoints.map(
    ([x, y], i) => `${i === 0 ? "M" : "L"} ${fmt(x)} ${fmt(-y)}`,
  );
  return parts.join(" ") + (plan.closed ? " Z" : "");
}

/**
 * Vehicle marker pose on screen. Rotation is the angle of the heading
 * vector after the y flip, in degrees, for a marker drawn pointing +x.
 */
export function vehicleMarker(
  latest: { x: number; y: number; yaw: number } | null,
): { x: number; y: number; rotateDeg: number } | null {
  if (latest === null) return null;
  return {
    x: latest.x,
    y: -latest.y,
    rotateDeg: (-latest.yaw * 180) / Math.PI,
  };
}

/**
 * Depth strip over a trailing time window. Returns null until there are
 * two points to join.
 */
export function depthStrip(
  track: readonly TrackPoint[],
  windowS = 120,
): { path: string; viewBox: ViewBox } | null {
  if (track.length < 2) return null;
  const tEnd = track[track.length - 1].t;
  const t0 = Math.max(track[0].t, tEnd - windowS);
  const pts = track.filter((p) => p.t >= t0);
  if (pts.length < 2) return null;
  let minZ = Math.min(...pts.map((p) => p.z));
  let maxZ = Math.max(...pts.map((p) => p.z));
  if (maxZ - minZ < 0.5) {
    const mid = (minZ + maxZ) / 2;
    minZ = mid - 0.25;
    maxZ = mid + 0.25;
  }
  const pad = (maxZ - minZ) * 0.1;
  minZ -= pad;
  maxZ += pad;
  const path = pts
    .map((p, i) => `${i === 0 ? "M" : "L"} ${fmt(p.t)} ${fmt(p.z)}`)
    .join(" ");
  return {
    path,
    viewBox: {
      x: t0,
      y: minZ,
      width: Math.max(tEnd - t0, 1),
      height: maxZ - minZ,
    },
  };
}
