// Shapes of the session service's JSON responses and of the session log
// document it produces. The server is the source of truth; nothing here is
// invented client-side.
export class ApiError extends Error {
    constructor(status, detail) {
        super(`${status}: ${detail}`);
        this.status = status;
        this.detail = detail;
    }
}
