// Queue state with optimistic decision handling.
//
// A decision removes its card immediately; a failed request rolls the card
// back, except for conflicts (409): those mean the item is already resolved
// on the server, so the queue is refreshed to the authoritative state.

import { ApiClient, ApiError } from "./api.js";
import type { DecisionRequest, QueueItem } from "./types.js";

export type SortKey = "similarity" | "class_name";
export type StatusFilter = "all" | "review" | "no_match";

export interface QueueState {
  items: QueueItem[];
  sort: SortKey;
  filter: StatusFilter;
  busy: boolean;
  error: string | null;
  notice: string | null;
  ontologyVersion: number | null;
}

export function bestSimilarity(item: QueueItem): number {
  return item.candidates.reduce((best, c) => Math.max(best, c.similarity), 0);
}

export function visibleItems(state: QueueState): QueueItem[] {
  const filtered = state.items.filter(
    (item) => state.filter === "all" || item.decision === state.filter,
  );
  const sorted = [...filtered];
  if (state.sort === "similarity") {
    sorted.sort(
      (a, b) =>
        bestSimilarity(b) - bestSimilarity(a) ||
        a.class_name.localeCompare(b.class_name),
    );
  } else {
    sorted.sort((a, b) => a.class_name.localeCompare(b.class_name));
  }
  return sorted;
}

type Listener = (state: QueueState) => void;

export class QueueStore {
  private state: QueueState = {
    items: [],
    sort: "similarity",
    filter: "all",
    busy: false,
    error: null,
    notice: null,
    ontologyVersion: null,
  };
  private listeners: Listener[] = [];

  constructor(private readonly api: ApiClient) {}

  getState(): QueueState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private update(patch: Partial<QueueState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  setSort(sort: SortKey): void {
    this.update({ sort });
  }

  setFilter(filter: StatusFilter): void {
    this.update({ filter });
  }

  async refresh(): Promise<void> {
    this.update({ busy: true, error: null });
    try {
      const [queue, ontology] = await Promise.all([
        this.api.getQueue(),
        this.api.getOntology(),
      ]);
      this.update({
        items: queue.items,
        ontologyVersion: ontology.version,
        busy: false,
      });
    } catch (err) {
      this.update({ busy: false, error: describe(err) });
    }
  }

  /** Optimistic decision: the card disappears immediately and comes back
   * only if the server rejects the request (non-409). */
  async decide(itemId: string, decision: DecisionRequest): Promise<boolean> {
    const snapshot = this.state.items;
    this.update({
      items: snapshot.filter((item) => item.item_id !== itemId),
      error: null,
      notice: null,
    });
    try {
      const response = await this.api.postDecision(itemId, decision);
      const version = response.version_after;
      this.update({
        notice: response.replayed
          ? `decision for ${itemId} was already applied`
          : `decision applied (${decision.action})`,
        ontologyVersion: typeof version === "number" ? version : this.state.ontologyVersion,
      });
      return true;
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        // stale card: the server already resolved it; show server truth
        this.update({ notice: `item ${itemId} was already resolved` });
        await this.refresh();
        return false;
      }
      this.update({ items: snapshot, error: describe(err) });
      return false;
    }
  }

  /** Trigger an enrichment run, poll to completion, then refresh. */
  async runIteration(pollMs = 250, maxPolls = 400): Promise<void> {
    this.update({ busy: true, error: null, notice: "enrichment running" });
    try {
      let run = await this.api.runPipeline("enrich");
      for (let i = 0; run.state === "running" && i < maxPolls; i += 1) {
        await sleep(pollMs);
        run = await this.api.getRun(run.run_id);
      }
      this.update({
        notice: `run ${run.run_id} ${run.state}`,
        busy: false,
      });
    } catch (err) {
      this.update({ busy: false, error: describe(err) });
    }
    await this.refresh();
  }
}

function describe(err: unknown): string {
  return err instanceof Error ? err.message : String(err);
}

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}
