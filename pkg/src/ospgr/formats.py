"""Persistent data formats: session logs and preference submission files.

Formats are JSON trees tagged with a schema version string. Raw object
labels are the stored truth everywhere; popularity and allocation results
are re-derivable and strict decoding audits the stored values against a
recomputation. The exact field names are documented in docs/formats.md and
pinned by byte-exact golden fixtures in the test suite.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Optional

from .game import (
    PopularityRanking,
    PreferenceProfile,
    PriorityAssignment,
    RoundOutcome,
    ValidationError,
    allocate,
    borda_scores,
    popularity_ranking,
)

SESSION_SCHEMA = "ospgr-session/1"
PREFS_SCHEMA = "ospgr-prefs/1"
SESSION_SUFFIX = ".session.json"


class SchemaError(ValidationError):
    """A document does not match its schema; carries the offending field path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


@dataclass(frozen=True)
class RoundRecord:
    """One round of a session: who held which priority, chose what, got what."""

    round_index: int
    priority_of_player: tuple[int, ...]
    choices: tuple[str, ...]
    obtained: tuple[Optional[str], ...]


@dataclass(frozen=True)
class SessionLog:
    """Full record of one session.

    ``preferences.ranks[i][j]`` refers to ``object_labels[j]``; choices and
    obtained objects are stored as raw labels. Timestamps are optional so
    simulated sessions can be byte-reproducible.
    """

    session_id: str
    n: int
    object_type: str
    object_labels: tuple[str, ...]
    preferences: PreferenceProfile
    popularity: PopularityRanking
    rounds: tuple[RoundRecord, ...]
    created_at: Optional[str] = None
    finished_at: Optional[str] = None

    def label_index(self, label: str) -> int:
        """1-based raw object index of a label."""
        try:
            return self.object_labels.index(label) + 1
        except ValueError:
            raise ValidationError(f"unknown object label {label!r}") from None

    def round_priorities(self, round_index: int) -> PriorityAssignment:
        return PriorityAssignment(self.rounds[round_index - 1].priority_of_player)

    def is_complete(self) -> bool:
        return len(self.rounds) == self.n


def validate_session(log: SessionLog, strict: bool = True) -> None:
    """Check every invariant a session log must satisfy.

    Structural checks always run. With ``strict`` the stored popularity and
    per-round outcomes are additionally audited against recomputation from
    the stored preferences and choices.
    """
    n = log.n
    if n < 2:
        raise SchemaError("n", f"must be at least 2, got {n}")
    if len(log.object_labels) != n:
        raise SchemaError("object_labels", f"expected {n} labels, got {len(log.object_labels)}")
    if len(set(log.object_labels)) != n:
        raise SchemaError("object_labels", "labels must be distinct")
    if log.preferences.n != n:
        raise SchemaError("preferences", f"expected {n} rows, got {log.preferences.n}")
    if log.popularity.n != n:
        raise SchemaError("popularity.rank_of_object", f"expected length {n}")
    if len(log.rounds) > n:
        raise SchemaError("rounds", f"at most {n} rounds allowed, got {len(log.rounds)}")

    if strict:
        recomputed = popularity_ranking(borda_scores(log.preferences))
        if recomputed.rank_of_object != log.popularity.rank_of_object:
            raise SchemaError(
                "popularity.rank_of_object",
                f"stored ranking {log.popularity.rank_of_object} does not match "
                f"recomputation {recomputed.rank_of_object}",
            )
        if recomputed.tie_flags != log.popularity.tie_flags:
            raise SchemaError("popularity.tied_pairs", "stored tie flags do not match recomputation")

    for r, rec in enumerate(log.rounds):
        path = f"rounds[{r}]"
        if rec.round_index != r + 1:
            raise SchemaError(f"{path}.round", f"expected {r + 1}, got {rec.round_index}")
        try:
            priorities = PriorityAssignment(rec.priority_of_player)
        except ValidationError:
            raise SchemaError(f"{path}.priority_of_player", "priority not a permutation") from None
        if len(rec.choices) != n:
            raise SchemaError(f"{path}.choices", f"expected {n} choices")
        if len(rec.obtained) != n:
            raise SchemaError(f"{path}.obtained", f"expected {n} entries")
        for i, label in enumerate(rec.choices):
            if label not in log.object_labels:
                raise SchemaError(f"{path}.choices[{i}]", f"unknown object label {label!r}")
        for i, (label, got) in enumerate(zip(rec.choices, rec.obtained)):
            if got is not None and got != label:
                raise SchemaError(
                    f"{path}.obtained[{i}]",
                    f"player obtained {got!r} but chose {label!r}",
                )
        if strict:
            choice_idx = tuple(log.label_index(label) for label in rec.choices)
            outcome = allocate(choice_idx, priorities)
            stored = tuple(
                None if got is None else log.label_index(got) for got in rec.obtained
            )
            if outcome.obtained != stored:
                raise SchemaError(f"{path}.obtained", "stored outcome does not match allocation")

    # Priorities must never repeat for a player across rounds; a complete
    # session therefore has every player holding every priority once.
    for i in range(n):
        held = [rec.priority_of_player[i] for rec in log.rounds]
        if len(set(held)) != len(held):
            raise SchemaError(
                "rounds",
                f"player {i + 1} held a priority twice across rounds: {held}",
            )


def _session_to_tree(log: SessionLog) -> dict[str, Any]:
    tied = sorted(
        [log.object_labels[a - 1], log.object_labels[b - 1]]
        for a, b in sorted(log.popularity.tie_flags)
    )
    return {
        "schema": SESSION_SCHEMA,
        "session_id": log.session_id,
        "n": log.n,
        "object_type": log.object_type,
        "object_labels": list(log.object_labels),
        "preferences": [list(row) for row in log.preferences.ranks],
        "popularity": {
            "rank_of_object": list(log.popularity.rank_of_object),
            "tied_pairs": tied,
        },
        "rounds": [
            {
                "round": rec.round_index,
                "priority_of_player": list(rec.priority_of_player),
                "choices": list(rec.choices),
                "obtained": list(rec.obtained),
            }
            for rec in log.rounds
        ],
        "created_at": log.created_at,
        "finished_at": log.finished_at,
    }


def encode_session(log: SessionLog, strict: bool = True) -> str:
    """Serialize a session log to its canonical JSON text."""
    validate_session(log, strict=strict)
    return json.dumps(_session_to_tree(log), indent=2, ensure_ascii=False) + "\n"


def _require(obj: dict[str, Any], key: str, kind: type, path: str) -> Any:
    if key not in obj:
        raise SchemaError(f"{path}{key}", "missing required field")
    value = obj[key]
    if kind is float:
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise SchemaError(f"{path}{key}", f"expected a number, got {type(value).__name__}")
    elif kind is int:
        if not isinstance(value, int) or isinstance(value, bool):
            raise SchemaError(f"{path}{key}", f"expected an integer, got {type(value).__name__}")
    elif not isinstance(value, kind):
        raise SchemaError(f"{path}{key}", f"expected {kind.__name__}, got {type(value).__name__}")
    return value


def _check_unknown(obj: dict[str, Any], allowed: set[str], path: str, strict: bool) -> None:
    if not strict:
        return
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise SchemaError(f"{path}{unknown[0]}", "unknown field")


def _int_list(value: Any, path: str) -> tuple[int, ...]:
    if not isinstance(value, list) or any(
        not isinstance(v, int) or isinstance(v, bool) for v in value
    ):
        raise SchemaError(path, "expected a list of integers")
    return tuple(value)


def _optional_str(obj: dict[str, Any], key: str, path: str) -> Optional[str]:
    value = obj.get(key)
    if value is not None and not isinstance(value, str):
        raise SchemaError(f"{path}{key}", f"expected a string or null, got {type(value).__name__}")
    return value


def decode_session(text: str, strict: bool = True) -> SessionLog:
    """Parse and validate a session document.

    Schema or invariant violations raise :class:`SchemaError` carrying the
    field path. In strict mode unknown fields are rejected and stored
    popularity/outcomes are audited against recomputation.
    """
    try:
        tree = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("", f"not valid JSON: {exc}") from None
    if not isinstance(tree, dict):
        raise SchemaError("", "top level must be an object")
    schema = _require(tree, "schema", str, "")
    if schema != SESSION_SCHEMA:
        raise SchemaError("schema", f"expected {SESSION_SCHEMA!r}, got {schema!r}")
    _check_unknown(
        tree,
        {
            "schema", "session_id", "n", "object_type", "object_labels",
            "preferences", "popularity", "rounds", "created_at", "finished_at",
        },
        "",
        strict,
    )
    session_id = _require(tree, "session_id", str, "")
    n = _require(tree, "n", int, "")
    object_type = _require(tree, "object_type", str, "")
    labels_raw = _require(tree, "object_labels", list, "")
    if any(not isinstance(v, str) for v in labels_raw):
        raise SchemaError("object_labels", "expected a list of strings")
    labels = tuple(labels_raw)

    prefs_raw = _require(tree, "preferences", list, "")
    rows = tuple(_int_list(row, f"preferences[{i}]") for i, row in enumerate(prefs_raw))
    try:
        preferences = PreferenceProfile(rows)
    except ValidationError as exc:
        raise SchemaError("preferences", str(exc)) from None

    pop_raw = _require(tree, "popularity", dict, "")
    _check_unknown(pop_raw, {"rank_of_object", "tied_pairs"}, "popularity.", strict)
    rank_of_object = _int_list(
        _require(pop_raw, "rank_of_object", list, "popularity."), "popularity.rank_of_object"
    )
    tied_raw = _require(pop_raw, "tied_pairs", list, "popularity.")
    tie_flags = set()
    for t, pair in enumerate(tied_raw):
        if not isinstance(pair, list) or len(pair) != 2 or any(not isinstance(v, str) for v in pair):
            raise SchemaError(f"popularity.tied_pairs[{t}]", "expected a pair of labels")
        try:
            a, b = sorted(labels.index(v) + 1 for v in pair)
        except ValueError:
            raise SchemaError(f"popularity.tied_pairs[{t}]", f"unknown label in {pair!r}") from None
        tie_flags.add((a, b))
    try:
        popularity = PopularityRanking(rank_of_object, frozenset(tie_flags))
    except ValidationError as exc:
        raise SchemaError("popularity.rank_of_object", str(exc)) from None

    rounds_raw = _require(tree, "rounds", list, "")
    rounds = []
    for r, rec in enumerate(rounds_raw):
        path = f"rounds[{r}]."
        if not isinstance(rec, dict):
            raise SchemaError(f"rounds[{r}]", "expected an object")
        _check_unknown(rec, {"round", "priority_of_player", "choices", "obtained"}, path, strict)
        round_index = _require(rec, "round", int, path)
        priorities = _int_list(
            _require(rec, "priority_of_player", list, path), f"{path}priority_of_player"
        )
        choices_raw = _require(rec, "choices", list, path)
        if any(not isinstance(v, str) for v in choices_raw):
            raise SchemaError(f"{path}choices", "expected a list of labels")
        obtained_raw = _require(rec, "obtained", list, path)
        if any(v is not None and not isinstance(v, str) for v in obtained_raw):
            raise SchemaError(f"{path}obtained", "expected labels or nulls")
        rounds.append(
            RoundRecord(round_index, priorities, tuple(choices_raw), tuple(obtained_raw))
        )

    log = SessionLog(
        session_id=session_id,
        n=n,
        object_type=object_type,
        object_labels=labels,
        preferences=preferences,
        popularity=popularity,
        rounds=tuple(rounds),
        created_at=_optional_str(tree, "created_at", ""),
        finished_at=_optional_str(tree, "finished_at", ""),
    )
    validate_session(log, strict=strict)
    return log


def read_session(path: str | Path, strict: bool = True) -> SessionLog:
    return decode_session(Path(path).read_text(encoding="utf-8"), strict=strict)


def write_session(path: str | Path, log: SessionLog, strict: bool = True) -> None:
    Path(path).write_text(encode_session(log, strict=strict), encoding="utf-8")


@dataclass(frozen=True)
class PreferenceSubmissions:
    """A batch of named preference rows over a shared label set (grouping input)."""

    object_labels: tuple[str, ...]
    players: tuple[tuple[str, tuple[int, ...]], ...]


def encode_prefs(prefs: PreferenceSubmissions) -> str:
    tree = {
        "schema": PREFS_SCHEMA,
        "object_labels": list(prefs.object_labels),
        "players": [{"id": pid, "ranks": list(row)} for pid, row in prefs.players],
    }
    return json.dumps(tree, indent=2, ensure_ascii=False) + "\n"


def decode_prefs(text: str, strict: bool = True) -> PreferenceSubmissions:
    try:
        tree = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("", f"not valid JSON: {exc}") from None
    if not isinstance(tree, dict):
        raise SchemaError("", "top level must be an object")
    schema = _require(tree, "schema", str, "")
    if schema != PREFS_SCHEMA:
        raise SchemaError("schema", f"expected {PREFS_SCHEMA!r}, got {schema!r}")
    _check_unknown(tree, {"schema", "object_labels", "players"}, "", strict)
    labels_raw = _require(tree, "object_labels", list, "")
    if any(not isinstance(v, str) for v in labels_raw):
        raise SchemaError("object_labels", "expected a list of strings")
    labels = tuple(labels_raw)
    if len(set(labels)) != len(labels):
        raise SchemaError("object_labels", "labels must be distinct")
    players_raw = _require(tree, "players", list, "")
    players = []
    ids = set()
    for k, entry in enumerate(players_raw):
        path = f"players[{k}]."
        if not isinstance(entry, dict):
            raise SchemaError(f"players[{k}]", "expected an object")
        _check_unknown(entry, {"id", "ranks"}, path, strict)
        pid = _require(entry, "id", str, path)
        if pid in ids:
            raise SchemaError(f"{path}id", f"duplicate player id {pid!r}")
        ids.add(pid)
        ranks = _int_list(_require(entry, "ranks", list, path), f"{path}ranks")
        if len(ranks) != len(labels):
            raise SchemaError(f"{path}ranks", f"expected {len(labels)} ranks")
        if sorted(ranks) != list(range(1, len(labels) + 1)):
            raise SchemaError(f"{path}ranks", "ranks are not a permutation")
        players.append((pid, ranks))
    return PreferenceSubmissions(labels, tuple(players))


def read_prefs(path: str | Path, strict: bool = True) -> PreferenceSubmissions:
    return decode_prefs(Path(path).read_text(encoding="utf-8"), strict=strict)


def format_number(value: Any) -> str:
    """Render a cell deterministically: 6 significant digits, NA for absent."""
    if value is None:
        return "NA"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def with_timestamps(log: SessionLog, created_at: Optional[str], finished_at: Optional[str]) -> SessionLog:
    return replace(log, created_at=created_at, finished_at=finished_at)
