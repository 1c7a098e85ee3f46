/**
 * Command draft validation against the table the backend actually
 * serves. Nothing here guesses ranges: every bound comes out of the
 * hello frame, so a table change on the server invalidates drafts here
 * before a doomed packet is ever composed.
 */

import type { HelloFrame, PatternInfo, RoleSpec } from "./protocol.js";

export interface Draft {
  pattern: string;
  values: Record<string, number>;
}

export interface FieldError {
  /** role name, or "pattern" for draft-level problems */
  field: string;
  message: string;
}

export function patternInfo(
  hello: HelloFrame,
  pattern: string,
): PatternInfo | null {
  return hello.patterns[pattern] ?? null;
}

/** Roles this pattern actually uses, in wire-slot order. */
export function activeRoles(info: PatternInfo): string[] {
  return info.params.filter((r): r is string => r !== null);
}

/** Nearest wire byte for a physical value. */
export function quantize(value: number, spec: RoleSpec): number {
  return Math.round((value - spec.offset) / spec.scale);
}

/** Physical value the vehicle will actually decode for this draft. */
export function asReceived(value: number, spec: RoleSpec): number {
  return spec.offset + quantize(value, spec) * spec.scale;
}

export function validateDraft(hello: HelloFrame, draft: Draft): FieldError[] {
  const info = patternInfo(hello, draft.pattern);
  if (info === null) {
    return [{ field: "pattern", message: `unknown pattern "${draft.pattern}"` }];
  }
  const errors: FieldError[] = [];
  const roles = activeRoles(info);
  const wanted = new Set(roles);

  for (const field of Object.keys(draft.values)) {
    if (!wanted.has(field)) {
      errors.push({ field, message: `${draft.pattern} takes no "${field}"` });
    }
  }
  for (const role of roles) {
    const value = draft.values[role];
    const spec = hello.quantization.roles[role];
    if (value === undefined || Number.isNaN(value)) {
      errors.push({ field: role, message: "required" });
      continue;
    }
    if (spec === undefined) {
      // a pattern slot the served table cannot express: server bug,
      // refuse rather than send an unquantizable field
      errors.push({ field: role, message: "not in the served table" });
      continue;
    }
    if (!Number.isFinite(value)) {
      errors.push({ field: role, message: "must be a finite number" });
    } else if (value < spec.min || value > spec.max) {
      errors.push({
        field: role,
        message: `out of range [${spec.min}, ${spec.max}] ${spec.unit}`,
      });
    }
  }
  return errors;
}

/**
 * What each field will look like after the wire: physical in, quantized
 * physical out. Lets the operator see rounding before committing.
 */
export function receivedPreview(
  hello: HelloFrame,
  draft: Draft,
): Record<string, number> {
  const info = patternInfo(hello, draft.pattern);
  if (info === null) return {};
  const out: Record<string, number> = {};
  for (const role of activeRoles(info)) {
    const spec = hello.quantization.roles[role];
    const value = draft.values[role];
    if (spec !== undefined && value !== undefined) {
      out[role] = asReceived(value, spec);
    }
  }
  return out;
}

/** Build the send_command message for a draft already known valid. */
export function toMessage(draft: Draft): {
  type: "send_command";
  pattern: string;
  params: Record<string, number>;
} {
  return {
    type: "send_command",
    pattern: draft.pattern,
    params: { ...draft.values },
  };
}
