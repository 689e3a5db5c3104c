// Debounced rescoring. Every edit requests a full rescore; rapid edits
// collapse into one request after a quiet period, and responses that arrive
// out of order are discarded by the store's sequence numbers.

import { ApiClient, OfflineError, ApiError } from "./api.js";
import { toScoreRequest } from "./serialize.js";
import type { Store } from "./store.js";
import { scoringBlocked } from "./validate.js";

export const DEFAULT_DEBOUNCE_MS = 250;

export class Rescorer {
  private timer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private readonly store: Store,
    private readonly api: ApiClient,
    private readonly debounceMs: number = DEFAULT_DEBOUNCE_MS,
  ) {}

  /** Schedule a rescore after the debounce window. */
  trigger(): void {
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.scoreNow();
    }, this.debounceMs);
  }

  /** Send a rescore immediately (used on boot and in tests). */
  async scoreNow(): Promise<void> {
    const state = this.store.state;
    if (scoringBlocked(state.drafts)) return;
    const request = toScoreRequest(state.drafts, {
      prevalence: state.prevalence,
      derived: state.derived,
      activities: state.activities,
    });
    const seq = this.store.beginScore();
    try {
      const response = await this.api.score(request);
      this.store.applyResponse(seq, response);
    } catch (error) {
      if (error instanceof OfflineError) {
        this.store.applyFailure(seq, true, error.message);
      } else if (error instanceof ApiError) {
        this.store.applyFailure(seq, false, error.message);
      } else {
        this.store.applyFailure(seq, false, String(error));
      }
    }
  }
}
