// Application state and its transitions. The store never computes a
// probability: score results enter exclusively through applyResponse(),
// carrying whatever the service said, and stale responses are dropped by
// sequence number (last write wins).

import type { Activity, Mode, RouteDraft, ScoreResponse, SegmentDraft } from "./types.js";
import { allowedKinds } from "./validate.js";

export type Status = "idle" | "scoring" | "offline" | "error";

export interface AppState {
  drafts: RouteDraft[];
  prevalence: number;
  derived: boolean;
  activities: Partial<Record<Mode, Activity>>;
  results: ScoreResponse | null;
  status: Status;
  errorMessage: string;
  selected: { route: number; segment: number } | null;
}

export function initialState(drafts: RouteDraft[], prevalence: number): AppState {
  return {
    drafts,
    prevalence,
    derived: false,
    activities: {},
    results: null,
    status: "idle",
    errorMessage: "",
    selected: null,
  };
}

type Listener = (state: AppState) => void;

export class Store {
  private appliedSeq = 0;
  private issuedSeq = 0;
  private listeners: Listener[] = [];

  constructor(public state: AppState) {}

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private notify(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  private update(patch: Partial<AppState>): void {
    this.state = { ...this.state, ...patch };
    this.notify();
  }

  // --- draft editing ---

  addRoute(): void {
    const n = this.state.drafts.length + 1;
    const draft: RouteDraft = {
      id: `route-${n}`,
      label: `Route ${n}`,
      segments: [{ mode: "walking", kind: "distance_m", value: 500 }],
    };
    this.update({ drafts: [...this.state.drafts, draft] });
  }

  removeRoute(route: number): void {
    this.update({ drafts: this.state.drafts.filter((_, i) => i !== route) });
  }

  loadDrafts(drafts: RouteDraft[]): void {
    this.update({ drafts, results: null, selected: null });
  }

  addSegment(route: number): void {
    this.editRoute(route, (draft) => ({
      ...draft,
      segments: [...draft.segments, { mode: "walking", kind: "distance_m", value: 100 }],
    }));
  }

  removeSegment(route: number, segment: number): void {
    this.editRoute(route, (draft) => ({
      ...draft,
      segments: draft.segments.filter((_, i) => i !== segment),
    }));
  }

  moveSegment(route: number, segment: number, delta: -1 | 1): void {
    this.editRoute(route, (draft) => {
      const target = segment + delta;
      if (target < 0 || target >= draft.segments.length) return draft;
      const segments = [...draft.segments];
      const moved = segments[segment]!;
      segments[segment] = segments[target]!;
      segments[target] = moved;
      return { ...draft, segments };
    });
  }

  updateSegment(route: number, segment: number, patch: Partial<SegmentDraft>): void {
    this.editRoute(route, (draft) => {
      const segments = draft.segments.map((existing, i) => {
        if (i !== segment) return existing;
        const next = { ...existing, ...patch };
        // switching modes can invalidate the duration kind; snap to a legal one
        if (patch.mode && !allowedKinds(next.mode).includes(next.kind)) {
          next.kind = allowedKinds(next.mode)[0]!;
        }
        return next;
      });
      return { ...draft, segments };
    });
  }

  private editRoute(route: number, edit: (draft: RouteDraft) => RouteDraft): void {
    const drafts = this.state.drafts.map((draft, i) => (i === route ? edit(draft) : draft));
    this.update({ drafts });
  }

  // --- what-if controls ---

  setPrevalence(fraction: number): void {
    this.update({ prevalence: Math.min(Math.max(fraction, 0), 1) });
  }

  setDerived(derived: boolean): void {
    this.update({ derived });
  }

  setActivity(mode: Mode, activity: Activity | null): void {
    const activities = { ...this.state.activities };
    if (activity === null) delete activities[mode];
    else activities[mode] = activity;
    this.update({ activities });
  }

  // --- scoring lifecycle (sequence numbers make the last write win) ---

  beginScore(): number {
    this.issuedSeq += 1;
    this.update({ status: "scoring" });
    return this.issuedSeq;
  }

  // A result is applied only if it belongs to the newest issued request and
  // nothing newer has landed; responses of superseded requests never render.
  private stale(seq: number): boolean {
    return seq <= this.appliedSeq || seq < this.issuedSeq;
  }

  applyResponse(seq: number, response: ScoreResponse): boolean {
    if (this.stale(seq)) return false;
    this.appliedSeq = seq;
    this.update({ results: response, status: "idle", errorMessage: "" });
    return true;
  }

  applyFailure(seq: number, offline: boolean, message: string): boolean {
    if (this.stale(seq)) return false;
    this.appliedSeq = seq;
    this.update({ status: offline ? "offline" : "error", errorMessage: message });
    return true;
  }
}
