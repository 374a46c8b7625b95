import { SessionApi } from "./api.js";
import { PlayerConsole } from "./model.js";
const POLL_MS = 1000;
const root = document.getElementById("app");
if (!root) {
    throw new Error("missing #app element");
}
const api = new SessionApi("");
let console_ = null;
let sessionId = new URLSearchParams(window.location.search).get("session") ?? "";
let dragFrom = null;
const tokenKey = () => `ospgr:${sessionId}:token`;
function el(tag, cls, text) {
    const node = document.createElement(tag);
    if (cls)
        node.className = cls;
    if (text !== undefined)
        node.textContent = text;
    return node;
}
// Object pictures are optional static assets keyed by label; a missing file
// just hides the img and leaves the text label.
function objectCard(label, objectType) {
    const card = el("div", "object-card");
    const img = el("img");
    img.src = `assets/${encodeURIComponent(label)}.png`;
    img.alt = "";
    img.addEventListener("error", () => img.remove());
    card.append(img, el("span", "object-label", `${objectType} ${label}`));
    return card;
}
function renderJoin() {
    root.replaceChildren();
    const box = el("div", "panel");
    box.append(el("h2", undefined, "Join a session"));
    const input = el("input");
    input.placeholder = "session id";
    input.value = sessionId;
    const button = el("button", undefined, "Join");
    button.addEventListener("click", () => {
        sessionId = input.value.trim();
        if (sessionId)
            void start();
    });
    box.append(input, button);
    root.append(box);
}
function renderPreferences(state) {
    root.replaceChildren();
    const box = el("div", "panel");
    box.append(el("h2", undefined, "Rank the objects"));
    box.append(el("p", "hint", "Drag to order from most preferred (top) to least preferred (bottom)."));
    const list = el("ul", "pref-list");
    state.ordering.forEach((label, index) => {
        const item = el("li", "pref-item");
        item.draggable = !state.submitted;
        item.append(el("span", "rank-badge", String(index + 1)), objectCard(label, state.objectType));
        item.addEventListener("dragstart", () => {
            dragFrom = index;
        });
        item.addEventListener("dragover", (event) => event.preventDefault());
        item.addEventListener("drop", (event) => {
            event.preventDefault();
            if (dragFrom !== null) {
                console_.reorder(dragFrom, index);
                dragFrom = null;
                render(console_.state());
            }
        });
        list.append(item);
    });
    box.append(list);
    const submit = el("button", undefined, state.submitted ? "Submitted" : "Submit ranking");
    submit.disabled = state.submitted;
    submit.addEventListener("click", () => {
        submit.disabled = true;
        void console_.submitPreferences().then(() => render(console_.state()));
    });
    box.append(submit);
    if (state.submitted) {
        box.append(el("p", "waiting", "Waiting for the other players…"));
    }
    appendError(box, state);
    root.append(box);
}
function renderRound(state) {
    root.replaceChildren();
    const box = el("div", "panel");
    box.append(el("h2", undefined, `Round ${state.round}`));
    box.append(el("p", "priority", `Your priority this round: ${state.myPriority}`));
    const popularity = el("ol", "popularity");
    (state.popularity ?? []).forEach((label) => popularity.append(el("li", undefined, label)));
    const popBox = el("div", "pop-box");
    popBox.append(el("h3", undefined, "Popularity ranking"), popularity);
    box.append(popBox);
    if (state.chosen) {
        // No outcome is ever shown; just hold until the next round starts.
        box.append(el("p", "waiting", "Choice recorded. Waiting for the next round…"));
    }
    else {
        box.append(el("p", undefined, "Pick one object:"));
        const row = el("div", "choice-row");
        state.labels.forEach((label) => {
            const button = el("button", "choice");
            button.append(objectCard(label, state.objectType));
            button.addEventListener("click", () => {
                row.querySelectorAll("button").forEach((b) => (b.disabled = true));
                void console_.choose(label).then(() => render(console_.state()));
            });
            row.append(button);
        });
        box.append(row);
    }
    appendError(box, state);
    root.append(box);
}
function renderFinished(state) {
    root.replaceChildren();
    const box = el("div", "panel");
    box.append(el("h2", undefined, "Session complete"));
    box.append(el("p", undefined, `All ${state.roundsPlayed} rounds are done. Thanks for playing!`));
    root.append(box);
}
function appendError(box, state) {
    if (state.lastError) {
        box.append(el("p", "error", state.lastError));
    }
}
function render(state) {
    switch (state.phase) {
        case "preference_collection":
            renderPreferences(state);
            break;
        case "running":
            renderRound(state);
            break;
        case "finished":
            renderFinished(state);
            break;
        default:
            root.replaceChildren(el("p", "waiting", "Waiting for the session to fill up…"));
    }
}
async function start() {
    console_ = new PlayerConsole(api, sessionId);
    const saved = window.localStorage.getItem(tokenKey());
    try {
        if (saved) {
            await console_.resume(saved); // reload-safe: just refetch the view
        }
        else {
            await console_.join();
            window.localStorage.setItem(tokenKey(), console_.playerToken);
        }
    }
    catch {
        window.localStorage.removeItem(tokenKey());
        renderJoin();
        return;
    }
    const tick = async () => {
        try {
            await console_.refresh();
        }
        catch {
            // transient network error; keep the last rendered state and retry
        }
        render(console_.state());
        if (console_.state().phase !== "finished") {
            window.setTimeout(() => void tick(), POLL_MS);
        }
    };
    void tick();
}
if (sessionId) {
    void start();
}
else {
    renderJoin();
}
