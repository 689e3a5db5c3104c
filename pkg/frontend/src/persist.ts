// Draft persistence in browser storage, so an accidental reload doesn't
// lose an itinerary under construction.

import type { RouteDraft } from "./types.js";

const KEY = "routerisk-ui-drafts-v1";

export interface StorageLike {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
}

export interface PersistedState {
  drafts: RouteDraft[];
  prevalence: number;
}

export function savePersisted(storage: StorageLike, state: PersistedState): void {
  try {
    storage.setItem(KEY, JSON.stringify(state));
  } catch {
    // storage full or unavailable; persistence is best-effort
  }
}

export function loadPersisted(storage: StorageLike): PersistedState | null {
  try {
    const raw = storage.getItem(KEY);
    if (!raw) return null;
    const parsed = JSON.parse(raw) as PersistedState;
    if (!Array.isArray(parsed.drafts) || typeof parsed.prevalence !== "number") {
      return null;
    }
    return parsed;
  } catch {
    return null;
  }
}
