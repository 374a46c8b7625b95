import { SessionApi } from "./api.js";
import { checkSessionLog, outcomeRows } from "./log.js";
// Experimenter page: create a session, watch it fill, download the log and
// see the results table once (and only once) the session is finished.
const api = new SessionApi("");
const root = document.getElementById("admin");
if (!root) {
    throw new Error("missing #admin element");
}
let sessionId = null;
let adminToken = null;
function el(tag, cls, text) {
    const node = document.createElement(tag);
    if (cls)
        node.className = cls;
    if (text !== undefined)
        node.textContent = text;
    return node;
}
function renderCreate() {
    root.replaceChildren();
    const box = el("div", "panel");
    box.append(el("h2", undefined, "Create a session"));
    const nInput = el("input");
    nInput.type = "number";
    nInput.value = "5";
    const labelsInput = el("input");
    labelsInput.placeholder = "labels (comma separated, optional)";
    const typeInput = el("input");
    typeInput.value = "box";
    const seedInput = el("input");
    seedInput.placeholder = "schedule seed (optional)";
    for (const [caption, input] of [
        ["players", nInput],
        ["object labels", labelsInput],
        ["object type", typeInput],
        ["seed", seedInput],
    ]) {
        const row = el("label", "form-row", `${caption}: `);
        row.append(input);
        box.append(row);
    }
    const button = el("button", undefined, "Create");
    button.addEventListener("click", () => {
        const labels = labelsInput.value
            .split(",")
            .map((s) => s.trim())
            .filter((s) => s.length > 0);
        void api
            .createSession({
            n: Number(nInput.value),
            object_labels: labels.length > 0 ? labels : undefined,
            object_type: typeInput.value.trim() || "box",
            schedule_seed: seedInput.value ? Number(seedInput.value) : undefined,
        })
            .then((created) => {
            sessionId = created.session_id;
            adminToken = created.admin_token;
            void poll();
        })
            .catch((err) => box.append(el("p", "error", String(err))));
    });
    box.append(button);
    root.append(box);
}
function renderStatus(summary) {
    root.replaceChildren();
    const box = el("div", "panel");
    box.append(el("h2", undefined, `Session ${summary.session_id}`));
    const join = new URL("index.html", window.location.href);
    join.searchParams.set("session", summary.session_id);
    const link = el("a", undefined, join.toString());
    link.href = join.toString();
    const linkRow = el("p", undefined, "Player link: ");
    linkRow.append(link);
    box.append(linkRow);
    box.append(el("p", undefined, `Phase: ${summary.phase} — ${summary.joined}/${summary.n} joined`));
    if (summary.phase === "finished") {
        const download = el("button", undefined, "Load results");
        download.addEventListener("click", () => {
            void api.downloadLog(sessionId, adminToken).then((doc) => renderResults(summary, doc));
        });
        box.append(download);
    }
    root.append(box);
}
function renderResults(summary, doc) {
    renderStatus(summary);
    const box = el("div", "panel");
    box.append(el("h2", undefined, "Results"));
    const problems = checkSessionLog(doc);
    if (problems.length > 0) {
        problems.forEach((p) => box.append(el("p", "error", p)));
        root.append(box);
        return;
    }
    const table = el("table", "results");
    const head = el("tr");
    for (const caption of ["round", "player", "priority", "choice", "obtained"]) {
        head.append(el("th", undefined, caption));
    }
    table.append(head);
    for (const row of outcomeRows(doc)) {
        const tr = el("tr");
        tr.append(el("td", undefined, String(row.round)), el("td", undefined, String(row.player)), el("td", undefined, String(row.priority)), el("td", undefined, row.choice), el("td", row.obtained === "Nothing" ? "nothing" : undefined, row.obtained));
        table.append(tr);
    }
    box.append(table);
    const raw = el("a", undefined, "Download raw log");
    raw.href = `data:application/json,${encodeURIComponent(JSON.stringify(doc, null, 2))}`;
    raw.setAttribute("download", `${doc.session_id}.session.json`);
    box.append(raw);
    root.append(box);
}
async function poll() {
    if (!sessionId)
        return;
    const summary = await api.summary(sessionId);
    renderStatus(summary);
    if (summary.phase !== "finished") {
        window.setTimeout(() => void poll(), 1500);
    }
}
renderCreate();
