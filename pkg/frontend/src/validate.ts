// Live validation mirroring the service's segment rules, so impossible
// drafts are flagged before a request is ever sent.

import {
  MODES,
  TRANSIT_MODES,
  type Mode,
  type RouteDraft,
  type SegmentDraft,
} from "./types.js";

export function isTransit(mode: Mode): boolean {
  return TRANSIT_MODES.includes(mode);
}

export function allowedKinds(mode: Mode): SegmentDraft["kind"][] {
  if (mode === "walking") return ["distance_m", "minutes"];
  if (isTransit(mode)) return ["stops", "minutes"];
  return ["minutes"];
}

export function segmentErrors(segment: SegmentDraft): string[] {
  const errors: string[] = [];
  if (!MODES.includes(segment.mode)) {
    errors.push(`unknown mode "${segment.mode}"`);
    return errors;
  }
  if (segment.kind === "distance_m" && segment.mode !== "walking") {
    errors.push("distance only makes sense for walking");
  }
  if (segment.kind === "stops" && !isTransit(segment.mode)) {
    errors.push("stop counts only make sense for subway, BRT or city bus");
  }
  if (!Number.isFinite(segment.value)) {
    errors.push("duration value must be a number");
  } else if (segment.value < 0) {
    errors.push("duration value cannot be negative");
  } else if (segment.kind === "stops" && !Number.isInteger(segment.value)) {
    errors.push("stop count must be a whole number");
  }
  return errors;
}

export function routeErrors(draft: RouteDraft): string[] {
  const errors: string[] = [];
  if (!draft.id.trim()) errors.push("route needs an id");
  if (draft.segments.length === 0) errors.push("route has no segments");
  draft.segments.forEach((segment, index) => {
    for (const problem of segmentErrors(segment)) {
      errors.push(`segment ${index + 1}: ${problem}`);
    }
  });
  return errors;
}

// Scoring is possible only when there is at least one route and every
// route is individually valid.
export function scoringBlocked(drafts: RouteDraft[]): boolean {
  return drafts.length === 0 || drafts.some((draft) => routeErrors(draft).length > 0);
}
