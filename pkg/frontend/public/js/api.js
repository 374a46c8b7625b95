import { ApiError, } from "./types.js";
// Thin typed wrapper over the session service endpoints. Takes the fetch
// implementation as a parameter so tests can record or stub traffic.
export class SessionApi {
    constructor(base, fetchImpl = (...args) => globalThis.fetch(...args)) {
        this.base = base;
        this.fetchImpl = fetchImpl;
    }
    async request(method, path, body) {
        const init = { method };
        if (body !== undefined) {
            init.headers = { "content-type": "application/json" };
            init.body = JSON.stringify(body);
        }
        const res = await this.fetchImpl(`${this.base}${path}`, init);
        const text = await res.text();
        if (!res.ok) {
            let detail = text;
            try {
                detail = JSON.parse(text).detail ?? text;
            }
            catch {
                // non-JSON error body; keep raw text
            }
            throw new ApiError(res.status, detail);
        }
        return JSON.parse(text);
    }
    createSession(config) {
        return this.request("POST", "/sessions", config);
    }
    summary(sessionId) {
        return this.request("GET", `/sessions/${encodeURIComponent(sessionId)}`);
    }
    join(sessionId) {
        return this.request("POST", `/sessions/${encodeURIComponent(sessionId)}/players`);
    }
    submitPreferences(sessionId, token, ranks) {
        return this.request("POST", `/sessions/${encodeURIComponent(sessionId)}/preferences`, {
            token,
            ranks,
        });
    }
    roundView(sessionId, token) {
        const q = new URLSearchParams({ token });
        return this.request("GET", `/sessions/${encodeURIComponent(sessionId)}/round?${q}`);
    }
    submitChoice(sessionId, token, choice) {
        return this.request("POST", `/sessions/${encodeURIComponent(sessionId)}/choice`, {
            token,
            choice,
        });
    }
    downloadLog(sessionId, adminToken) {
        const q = new URLSearchParams({ admin_token: adminToken });
        return this.request("GET", `/sessions/${encodeURIComponent(sessionId)}/log?${q}`);
    }
}
