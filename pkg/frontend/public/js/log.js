// Client-side sanity checks on a downloaded session log. The server already
// audits its own documents; these catch truncated downloads and let the
// admin results page refuse to render garbage.
export function checkSessionLog(doc) {
    const problems = [];
    const n = doc.n;
    if (doc.schema !== "ospgr-session/1") {
        problems.push(`unexpected schema ${doc.schema}`);
    }
    if (doc.object_labels.length !== n || new Set(doc.object_labels).size !== n) {
        problems.push("object_labels must be n distinct labels");
    }
    if (doc.preferences.length !== n || doc.preferences.some((row) => !isPermutation(row, n))) {
        problems.push("preferences must be n permutation rows");
    }
    if (!isPermutation(doc.popularity.rank_of_object, n)) {
        problems.push("popularity is not a permutation");
    }
    doc.rounds.forEach((round, k) => {
        if (round.round !== k + 1) {
            problems.push(`round ${k} has index ${round.round}`);
        }
        if (!isPermutation(round.priority_of_player, n)) {
            problems.push(`round ${round.round}: priorities not a permutation`);
        }
        round.choices.forEach((choice, i) => {
            if (!doc.object_labels.includes(choice)) {
                problems.push(`round ${round.round}: unknown label ${choice}`);
            }
            const got = round.obtained[i];
            if (got !== null && got !== choice) {
                problems.push(`round ${round.round}: player ${i + 1} obtained an unchosen object`);
            }
        });
    });
    // each player's priorities across a full session form a permutation
    if (doc.rounds.length === n) {
        for (let player = 0; player < n; player++) {
            const held = doc.rounds.map((r) => r.priority_of_player[player]);
            if (!isPermutation(held, n)) {
                problems.push(`player ${player + 1} did not hold every priority once`);
            }
        }
    }
    return problems;
}
function isPermutation(values, n) {
    return values.length === n && new Set(values).size === n && values.every((v) => v >= 1 && v <= n);
}
export function outcomeRows(doc) {
    const rows = [];
    for (const round of doc.rounds) {
        for (let i = 0; i < doc.n; i++) {
            rows.push({
                round: round.round,
                player: i + 1,
                priority: round.priority_of_player[i],
                choice: round.choices[i],
                obtained: round.obtained[i] ?? "Nothing",
            });
        }
    }
    return rows;
}
