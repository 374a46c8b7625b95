import {
  ApiError,
  CreatedSession,
  JoinResponse,
  RoundView,
  SessionConfig,
  SessionLogDoc,
  SessionSummary,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

// Thin typed wrapper over the session service endpoints. Takes the fetch
// implementation as a parameter so tests can record or stub traffic.
export class SessionApi {
  constructor(
    private readonly base: string,
    private readonly fetchImpl: FetchLike = (...args) => globalThis.fetch(...args),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const res = await this.fetchImpl(`${this.base}${path}`, init);
    const text = await res.text();
    if (!res.ok) {
      let detail = text;
      try {
        detail = (JSON.parse(text) as { detail?: string }).detail ?? text;
      } catch {
        // non-JSON error body; keep raw text
      }
      throw new ApiError(res.status, detail);
    }
    return JSON.parse(text) as T;
  }

  createSession(config: SessionConfig): Promise<CreatedSession> {
    return this.request("POST", "/sessions", config);
  }

  summary(sessionId: string): Promise<SessionSummary> {
    return this.request("GET", `/sessions/${encodeURIComponent(sessionId)}`);
  }

  join(sessionId: string): Promise<JoinResponse> {
    return this.request("POST", `/sessions/${encodeURIComponent(sessionId)}/players`);
  }

  submitPreferences(sessionId: string, token: string, ranks: number[]): Promise<{ submitted: boolean }> {
    return this.request("POST", `/sessions/${encodeURIComponent(sessionId)}/preferences`, {
      token,
      ranks,
    });
  }

  roundView(sessionId: string, token: string): Promise<RoundView> {
    const q = new URLSearchParams({ token });
    return this.request("GET", `/sessions/${encodeURIComponent(sessionId)}/round?${q}`);
  }

  submitChoice(sessionId: string, token: string, choice: string): Promise<{ recorded: boolean; round: number }> {
    return this.request("POST", `/sessions/${encodeURIComponent(sessionId)}/choice`, {
      token,
      choice,
    });
  }

  downloadLog(sessionId: string, adminToken: string): Promise<SessionLogDoc> {
    const q = new URLSearchParams({ admin_token: adminToken });
    return this.request("GET", `/sessions/${encodeURIComponent(sessionId)}/log?${q}`);
  }
}
