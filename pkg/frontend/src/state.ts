/** Client-side session state: run history and pinned candidates. */

import type { Candidate, DesignRequest, DesignResponse } from "./types.js";
import { comboKey } from "./types.js";

export interface HistoryEntry {
  id: number;
  request: DesignRequest;
  response: DesignResponse;
  at: Date;
}

export interface PinnedCandidate {
  key: string;
  candidate: Candidate;
  /** True when the pin came from an earlier run than the current one. */
  stale: boolean;
}

interface PinRecord {
  candidate: Candidate;
  requestId: number;
}

export class ExplorerState {
  private entries: HistoryEntry[] = [];
  private pinsByKey = new Map<string, PinRecord>();
  private nextId = 1;
  private currentId: number | null = null;

  /** Runs in the order they were recorded (oldest first). */
  get history(): readonly HistoryEntry[] {
    return this.entries.slice();
  }

  get current(): HistoryEntry | null {
    if (this.currentId === null) {
      return null;
    }
    return this.entries.find((entry) => entry.id === this.currentId) ?? null;
  }

  recordResponse(request: DesignRequest, response: DesignResponse, at: Date = new Date()): HistoryEntry {
    const entry: HistoryEntry = { id: this.nextId, request, response, at };
    this.nextId += 1;
    this.entries.push(entry);
    this.currentId = entry.id;
    return entry;
  }

  /** Re-select an earlier run; pins keep pointing at the run they came from. */
  selectEntry(id: number): HistoryEntry | null {
    const entry = this.entries.find((candidate) => candidate.id === id) ?? null;
    if (entry !== null) {
      this.currentId = entry.id;
    }
    return entry;
  }

  pin(candidate: Candidate): void {
    if (this.currentId === null) {
      return;
    }
    this.pinsByKey.set(comboKey(candidate.combo), {
      candidate,
      requestId: this.currentId,
    });
  }

  unpin(key: string): void {
    this.pinsByKey.delete(key);
  }

  unpinAll(): void {
    this.pinsByKey.clear();
  }

  isPinned(key: string): boolean {
    return this.pinsByKey.has(key);
  }

  pinned(): PinnedCandidate[] {
    const current = this.currentId;
    const out: PinnedCandidate[] = [];
    for (const [key, record] of this.pinsByKey) {
      out.push({
        key,
        candidate: record.candidate,
        stale: record.requestId !== current,
      });
    }
    return out;
  }

  /** The side-by-side comparison only makes sense with two or more pins. */
  get comparisonVisible(): boolean {
    return this.pinsByKey.size >= 2;
  }
}
