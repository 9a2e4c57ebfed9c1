/** Client-side session view: latest snapshot, per-module drafts, role. */

import type { Diagnostic, Role, Snapshot } from "./types.js";

export interface Conflict {
  /** Version the server reported as current when the submission bounced. */
  serverVersion: number;
  serverEditableText: string;
}

export interface DraftState {
  /** Unsent editor contents; only the user and an explicit reload write it. */
  text: string;
  /** Version the next submission claims to be based on. */
  baseVersion: number;
  inFlight: boolean;
  diagnostics: Diagnostic[];
  conflict: Conflict | null;
}

export class SessionView {
  snapshot: Snapshot | null = null;
  readonly drafts = new Map<string, DraftState>();

  constructor(readonly role: Role) {}

  /**
   * Adopt a feed snapshot unless it is older than the one already rendered.
   * Snapshots of the same program version render in arrival order.
   */
  acceptSnapshot(snapshot: Snapshot): boolean {
    if (
      this.snapshot !== null &&
      snapshot.programVersion < this.snapshot.programVersion
    ) {
      return false;
    }
    this.snapshot = snapshot;
    return true;
  }

  draft(name: string): DraftState {
    const existing = this.drafts.get(name);
    if (existing !== undefined) return existing;
    const fresh: DraftState = {
      text: "",
      baseVersion: 0,
      inFlight: false,
      diagnostics: [],
      conflict: null,
    };
    this.drafts.set(name, fresh);
    return fresh;
  }
}
