import { SessionApi } from "./api.js";
import { ApiError, Phase, RoundView } from "./types.js";

// Convert a visual top-to-bottom ordering into the rank vector the service
// expects: ranks[j] is the 1-based position of object_labels[j] in the
// ordering. E.g. labels (A,B,C,D,E) ordered (B,A,C,D,E) -> A=2,B=1,C=3,D=4,E=5.
export function ranksFromOrdering(labels: string[], ordering: string[]): number[] {
  if (ordering.length !== labels.length || new Set(ordering).size !== ordering.length) {
    throw new Error("ordering must list every object exactly once");
  }
  return labels.map((label) => {
    const pos = ordering.indexOf(label);
    if (pos < 0) {
      throw new Error(`ordering is missing object ${label}`);
    }
    return pos + 1;
  });
}

// Move one entry of the ordering (drag from index -> drop at index).
export function moveItem(ordering: string[], from: number, to: number): string[] {
  if (from < 0 || from >= ordering.length || to < 0 || to >= ordering.length) {
    return ordering.slice();
  }
  const next = ordering.slice();
  const [item] = next.splice(from, 1);
  next.splice(to, 0, item!);
  return next;
}

export interface ConsoleState {
  phase: Phase | "joining";
  labels: string[];
  objectType: string;
  ordering: string[]; // local drag state during preference entry
  submitted: boolean;
  round: number | null;
  popularity: string[] | null;
  myPriority: number | null;
  chosen: boolean;
  roundsPlayed: number | null;
  lastError: string | null;
}

// State machine behind the player page. Holds only what the player-token
// endpoints return about *this* player — there is nowhere for anyone else's
// data to live. All mutations are idempotent per (round, token): refresh()
// re-fetches the authoritative view, so a reloaded or reconnected client
// lands exactly where it left off.
export class PlayerConsole {
  private token: string | null = null;
  private ordering: string[] = [];
  private view: RoundView | null = null;
  private lastError: string | null = null;

  constructor(
    private readonly api: SessionApi,
    private readonly sessionId: string,
  ) {}

  get playerToken(): string | null {
    return this.token;
  }

  async join(): Promise<void> {
    const res = await this.api.join(this.sessionId);
    this.token = res.player_token;
    await this.refresh();
  }

  // Resume with a previously issued token (page reload / reconnect).
  async resume(token: string): Promise<void> {
    this.token = token;
    await this.refresh();
  }

  async refresh(): Promise<void> {
    if (!this.token) {
      throw new Error("not joined");
    }
    this.view = await this.api.roundView(this.sessionId, this.token);
    if (this.ordering.length === 0) {
      this.ordering = this.view.object_labels.slice();
    }
  }

  reorder(from: number, to: number): void {
    if (this.view?.phase === "preference_collection" && !this.view.submitted) {
      this.ordering = moveItem(this.ordering, from, to);
    }
  }

  async submitPreferences(): Promise<void> {
    if (!this.token || !this.view) {
      throw new Error("not joined");
    }
    if (this.view.submitted) {
      return; // control is disabled; double submit is a no-op
    }
    const ranks = ranksFromOrdering(this.view.object_labels, this.ordering);
    await this.guard(() => this.api.submitPreferences(this.sessionId, this.token!, ranks));
    await this.refresh();
  }

  async choose(label: string): Promise<void> {
    if (!this.token || !this.view) {
      throw new Error("not joined");
    }
    if (this.view.chosen) {
      return; // second tap in a round is inert
    }
    await this.guard(() => this.api.submitChoice(this.sessionId, this.token!, label));
    await this.refresh();
  }

  // Service rejections are surfaced verbatim for the page to display.
  private async guard<T>(call: () => Promise<T>): Promise<void> {
    this.lastError = null;
    try {
      await call();
    } catch (err) {
      if (err instanceof ApiError) {
        this.lastError = err.detail;
        return;
      }
      throw err;
    }
  }

  state(): ConsoleState {
    const v = this.view;
    return {
      phase: v?.phase ?? "joining",
      labels: v?.object_labels ?? [],
      objectType: v?.object_type ?? "",
      ordering: this.ordering.slice(),
      submitted: v?.submitted ?? false,
      round: v?.round ?? null,
      popularity: v?.popularity?.slice() ?? null,
      myPriority: v?.my_priority ?? null,
      chosen: v?.chosen ?? false,
      roundsPlayed: v?.rounds_played ?? null,
      lastError: this.lastError,
    };
  }
}
