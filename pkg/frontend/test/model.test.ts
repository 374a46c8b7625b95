import { describe, expect, it } from "vitest";

import { SessionApi, FetchLike } from "../src/api.js";
import { PlayerConsole, moveItem, ranksFromOrdering } from "../src/model.js";
import { RoundView } from "../src/types.js";

describe("ranksFromOrdering", () => {
  it("encodes the documented example", () => {
    // ordering (B,A,C,D,E) -> A=2, B=1, C=3, D=4, E=5
    expect(ranksFromOrdering(["A", "B", "C", "D", "E"], ["B", "A", "C", "D", "E"])).toEqual([
      2, 1, 3, 4, 5,
    ]);
  });

  it("is identity for the untouched ordering", () => {
    expect(ranksFromOrdering(["A", "B", "C"], ["A", "B", "C"])).toEqual([1, 2, 3]);
  });

  it("rejects incomplete or duplicated orderings", () => {
    expect(() => ranksFromOrdering(["A", "B", "C"], ["A", "B"])).toThrow(/exactly once/);
    expect(() => ranksFromOrdering(["A", "B", "C"], ["A", "B", "B"])).toThrow(/exactly once/);
    expect(() => ranksFromOrdering(["A", "B", "C"], ["A", "B", "X"])).toThrow(/missing/);
  });
});

describe("moveItem", () => {
  it("moves an entry down and up", () => {
    expect(moveItem(["A", "B", "C"], 0, 2)).toEqual(["B", "C", "A"]);
    expect(moveItem(["A", "B", "C"], 2, 0)).toEqual(["C", "A", "B"]);
  });

  it("ignores out-of-range drags", () => {
    expect(moveItem(["A", "B"], 0, 5)).toEqual(["A", "B"]);
    expect(moveItem(["A", "B"], -1, 0)).toEqual(["A", "B"]);
  });
});

// Minimal scripted backend: routes requests to canned handlers and counts
// calls, so console behavior is testable without a server.
function scriptedFetch(handlers: Record<string, (body: unknown) => { status?: number; json: unknown }>) {
  const calls: string[] = [];
  const fetchImpl: FetchLike = async (url, init) => {
    const method = init?.method ?? "GET";
    const path = url.replace(/\?.*$/, "");
    const key = `${method} ${path}`;
    calls.push(key);
    const handler = handlers[key];
    if (!handler) {
      return new Response(JSON.stringify({ detail: `no route ${key}` }), { status: 404 });
    }
    const body = init?.body ? JSON.parse(init.body as string) : undefined;
    const result = handler(body);
    return new Response(JSON.stringify(result.json), { status: result.status ?? 200 });
  };
  return { fetchImpl, calls };
}

const prefView = (submitted: boolean): RoundView => ({
  phase: "preference_collection",
  n: 3,
  object_type: "box",
  object_labels: ["A", "B", "C"],
  submitted,
});

describe("PlayerConsole", () => {
  it("joins, reorders, and submits the encoded ranks once", async () => {
    let submittedRanks: number[] | null = null;
    let submitted = false;
    const { fetchImpl, calls } = scriptedFetch({
      "POST /sessions/s1/players": () => ({ json: { player_token: "tok-a", phase: "preference_collection" } }),
      "GET /sessions/s1/round": () => ({ json: prefView(submitted) }),
      "POST /sessions/s1/preferences": (body) => {
        submittedRanks = (body as { ranks: number[] }).ranks;
        submitted = true;
        return { json: { submitted: true, phase: "preference_collection" } };
      },
    });
    const console_ = new PlayerConsole(new SessionApi("", fetchImpl), "s1");
    await console_.join();
    expect(console_.state().ordering).toEqual(["A", "B", "C"]);

    console_.reorder(1, 0); // B to the top
    await console_.submitPreferences();
    expect(submittedRanks).toEqual([2, 1, 3]);
    expect(console_.state().submitted).toBe(true);

    // double submit is a no-op: no second POST
    await console_.submitPreferences();
    expect(calls.filter((c) => c.startsWith("POST /sessions/s1/preferences"))).toHaveLength(1);
  });

  it("keeps the ordering frozen after submission", async () => {
    const { fetchImpl } = scriptedFetch({
      "POST /sessions/s1/players": () => ({ json: { player_token: "t", phase: "preference_collection" } }),
      "GET /sessions/s1/round": () => ({ json: prefView(true) }),
    });
    const console_ = new PlayerConsole(new SessionApi("", fetchImpl), "s1");
    await console_.join();
    console_.reorder(0, 2);
    expect(console_.state().ordering).toEqual(["A", "B", "C"]);
  });

  it("taps once per round; the second tap is inert", async () => {
    let chosen = false;
    const runningView = (): RoundView => ({
      phase: "running",
      n: 3,
      object_type: "box",
      object_labels: ["A", "B", "C"],
      round: 1,
      popularity: ["B", "A", "C"],
      my_priority: 2,
      chosen,
    });
    const { fetchImpl, calls } = scriptedFetch({
      "POST /sessions/s1/players": () => ({ json: { player_token: "t", phase: "running" } }),
      "GET /sessions/s1/round": () => ({ json: runningView() }),
      "POST /sessions/s1/choice": () => {
        chosen = true;
        return { json: { recorded: true, round: 1 } };
      },
    });
    const console_ = new PlayerConsole(new SessionApi("", fetchImpl), "s1");
    await console_.join();
    expect(console_.state().myPriority).toBe(2);
    expect(console_.state().popularity).toEqual(["B", "A", "C"]);

    await console_.choose("B");
    expect(console_.state().chosen).toBe(true);
    await console_.choose("A");
    expect(calls.filter((c) => c.startsWith("POST /sessions/s1/choice"))).toHaveLength(1);
  });

  it("surfaces service rejections verbatim", async () => {
    const { fetchImpl } = scriptedFetch({
      "POST /sessions/s1/players": () => ({ json: { player_token: "t", phase: "preference_collection" } }),
      "GET /sessions/s1/round": () => ({ json: prefView(false) }),
      "POST /sessions/s1/preferences": () => ({
        status: 400,
        json: { detail: "ranks are not a permutation" },
      }),
    });
    const console_ = new PlayerConsole(new SessionApi("", fetchImpl), "s1");
    await console_.join();
    await console_.submitPreferences();
    expect(console_.state().lastError).toBe("ranks are not a permutation");
  });

  it("resume is an idempotent refetch", async () => {
    const { fetchImpl, calls } = scriptedFetch({
      "GET /sessions/s1/round": () => ({ json: prefView(true) }),
    });
    const console_ = new PlayerConsole(new SessionApi("", fetchImpl), "s1");
    await console_.resume("saved-token");
    const first = console_.state();
    await console_.refresh();
    expect(console_.state()).toEqual(first);
    expect(calls).toEqual(["GET /sessions/s1/round", "GET /sessions/s1/round"]);
  });

  it("holds no fields that could carry another player's data", async () => {
    const { fetchImpl } = scriptedFetch({
      "POST /sessions/s1/players": () => ({ json: { player_token: "t", phase: "preference_collection" } }),
      "GET /sessions/s1/round": () => ({ json: prefView(false) }),
    });
    const console_ = new PlayerConsole(new SessionApi("", fetchImpl), "s1");
    await console_.join();
    expect(Object.keys(console_.state()).sort()).toEqual([
      "chosen",
      "labels",
      "lastError",
      "myPriority",
      "objectType",
      "ordering",
      "phase",
      "popularity",
      "round",
      "roundsPlayed",
      "submitted",
    ]);
  });
});
