// Wire types for the scoring service plus the editor's draft types.

export const MODES = ["walking", "subway", "brt", "city_bus", "car"] as const;
export type Mode = (typeof MODES)[number];

export const TRANSIT_MODES: readonly Mode[] = ["subway", "brt", "city_bus"];

export const ACTIVITIES = ["sitting", "low", "moderate", "intense"] as const;
export type Activity = (typeof ACTIVITIES)[number];

// Exactly one way to give a segment's duration, mirroring the service rules:
// distances only for walking, stop counts only for transit, minutes anywhere.
export type DurationKind = "distance_m" | "stops" | "minutes";

export interface SegmentDraft {
  mode: Mode;
  kind: DurationKind;
  value: number;
  activity?: Activity;
}

export interface RouteDraft {
  id: string;
  label: string;
  segments: SegmentDraft[];
}

// --- request/response bodies (shape of the JSON on the wire) ---

export interface SegmentBody {
  mode: string;
  distance_m?: number;
  stops?: number;
  minutes?: number;
  activity?: string;
}

export interface RouteBody {
  id: string;
  label: string;
  segments: SegmentBody[];
}

export interface ScoreRequest {
  routes: RouteBody[];
  prevalence?: number;
  derived?: boolean;
  activities?: Record<string, string>;
}

export interface SegmentScore {
  index: number;
  mode: string;
  hours: number;
  rate_per_hour: number;
  probability: number;
}

export interface RouteReport {
  route_id: string;
  label: string;
  total: number;
  per_segment: SegmentScore[];
}

export interface ScoreResponse {
  engine_version: string;
  preset_version: string;
  reports: RouteReport[];
}

export interface ApiFieldError {
  field: string;
  message: string;
}
