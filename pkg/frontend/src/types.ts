// Shapes of the session service's JSON responses and of the session log
// document it produces. The server is the source of truth; nothing here is
// invented client-side.

export type Phase = "recruiting" | "preference_collection" | "running" | "finished";

export interface CreatedSession {
  session_id: string;
  admin_token: string;
}

export interface SessionSummary {
  session_id: string;
  phase: Phase;
  n: number;
  joined: number;
  object_type: string;
  object_labels: string[];
}

export interface JoinResponse {
  player_token: string;
  phase: Phase;
}

// GET /sessions/{id}/round is phase-dependent; optional fields appear only
// in the phase that defines them. Note there is deliberately no field for
// outcomes or for anyone else's data.
export interface RoundView {
  phase: Phase;
  n: number;
  object_type: string;
  object_labels: string[];
  submitted?: boolean; // preference_collection
  round?: number; // running
  popularity?: string[]; // running: labels, most popular first
  my_priority?: number; // running
  chosen?: boolean; // running
  rounds_played?: number; // finished
}

export interface SessionConfig {
  n: number;
  object_labels?: string[];
  object_type?: string;
  schedule_seed?: number;
}

// The downloaded ospgr-session/1 document.
export interface SessionLogRound {
  round: number;
  priority_of_player: number[];
  choices: string[];
  obtained: (string | null)[];
}

export interface SessionLogDoc {
  schema: string;
  session_id: string;
  n: number;
  object_type: string;
  object_labels: string[];
  preferences: number[][];
  popularity: { rank_of_object: number[]; tied_pairs: string[][] };
  rounds: SessionLogRound[];
  created_at: string | null;
  finished_at: string | null;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`${status}: ${detail}`);
  }
}
