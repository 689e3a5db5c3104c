// Draft -> wire-body conversion. The editor state never leaves this module
// in any other shape, so a draft that validates always serializes to a body
// the service accepts.

import type {
  RouteBody,
  RouteDraft,
  ScoreRequest,
  SegmentBody,
  SegmentDraft,
} from "./types.js";

export function toSegmentBody(segment: SegmentDraft): SegmentBody {
  const body: SegmentBody = { mode: segment.mode };
  if (segment.kind === "distance_m") body.distance_m = segment.value;
  else if (segment.kind === "stops") body.stops = segment.value;
  else body.minutes = segment.value;
  if (segment.activity) body.activity = segment.activity;
  return body;
}

export function toRouteBody(draft: RouteDraft): RouteBody {
  return {
    id: draft.id,
    label: draft.label,
    segments: draft.segments.map(toSegmentBody),
  };
}

export interface ScoreOptions {
  prevalence: number;
  derived: boolean;
  activities: Record<string, string>;
}

export function toScoreRequest(drafts: RouteDraft[], options: ScoreOptions): ScoreRequest {
  const request: ScoreRequest = {
    routes: drafts.map(toRouteBody),
    prevalence: options.prevalence,
  };
  if (options.derived) request.derived = true;
  if (Object.keys(options.activities).length > 0) {
    request.activities = { ...options.activities };
  }
  return request;
}
