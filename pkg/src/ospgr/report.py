"""Analysis reports: a typed container plus JSON and tabular renderings.

The JSON form ("ospgr-report/1") is the machine interchange format; the
tabular form is plot-ready text, one bracketed section per table with a
single header row. Absent values render as NA, unobtained objects as
"Nothing". Floats use 6 significant digits everywhere.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Optional, Sequence

from .analysis import (
    ChoiceClassification,
    ChosenRateDistribution,
    ClassificationRates,
    ClassifiedChoice,
    EnumerationResult,
    classify_session,
    group_choice_vector,
    chosen_rate,
    overall_classification,
    priority_breakdown,
    reform_virtual_groups,
    session_choice_vectors,
    taus_against_popularity,
)
from .formats import (
    SchemaError,
    SessionLog,
    _check_unknown,
    _require,
    format_number,
)
from .game import ValidationError

REPORT_SCHEMA = "ospgr-report/1"

LABELS = (
    ChoiceClassification.RDM_R,
    ChoiceClassification.RISK,
    ChoiceClassification.SAFE,
)


@dataclass(frozen=True)
class SessionTauRow:
    session_id: str
    taus: tuple[int, ...]
    mean: float


@dataclass(frozen=True)
class OutcomeRow:
    session_id: str
    round_index: int
    player: int
    priority: int
    choice: str
    obtained: Optional[str]


@dataclass(frozen=True)
class AnalysisReport:
    """Everything one analysis run produced; sections are None when not run."""

    kind: str
    metadata: dict[str, Any]
    chosen: Optional[ChosenRateDistribution] = None
    chosen_counts: Optional[tuple[int, ...]] = None
    overall: Optional[ClassificationRates] = None
    by_priority: Optional[tuple[Optional[ClassificationRates], ...]] = None
    taus: Optional[tuple[SessionTauRow, ...]] = None
    outcomes: Optional[tuple[OutcomeRow, ...]] = None


def build_enumeration_report(result: EnumerationResult) -> AnalysisReport:
    return AnalysisReport(
        kind="enumeration",
        metadata={
            "n": result.n,
            "tau_bound": result.bound,
            "agent": "rdm-r",
            "rows_per_player": result.row_count,
            "profiles": result.profile_count,
            "events": result.distribution.count_basis,
        },
        chosen=result.distribution,
        chosen_counts=result.counts,
    )


def build_sessions_report(
    logs: Sequence[SessionLog], virtual: bool = True
) -> AnalysisReport:
    """Aggregate chosen rates, classifications, taus and outcomes over logs.

    Complete sessions are expanded into virtual groups when ``virtual`` is
    set; incomplete ones always contribute their rounds directly.
    """
    if not logs:
        raise ValidationError("no sessions given")
    n = logs[0].n
    for log in logs:
        if log.n != n:
            raise ValidationError("sessions mix different n")

    vectors: list[tuple[int, ...]] = []
    group_total = 0
    records: list[ClassifiedChoice] = []
    tau_rows: list[SessionTauRow] = []
    outcome_rows: list[OutcomeRow] = []
    for log in logs:
        if virtual and log.is_complete():
            groups = reform_virtual_groups(log)
            vectors.extend(group_choice_vector(log, g) for g in groups)
            group_total += len(groups)
        else:
            rounds = session_choice_vectors(log)
            vectors.extend(rounds)
            group_total += len(rounds)
        records.extend(classify_session(log))
        taus = taus_against_popularity(log.preferences, log.popularity)
        tau_rows.append(SessionTauRow(log.session_id, taus, sum(taus) / len(taus)))
        for rec in log.rounds:
            for player in range(1, n + 1):
                outcome_rows.append(
                    OutcomeRow(
                        session_id=log.session_id,
                        round_index=rec.round_index,
                        player=player,
                        priority=rec.priority_of_player[player - 1],
                        choice=rec.choices[player - 1],
                        obtained=rec.obtained[player - 1],
                    )
                )

    return AnalysisReport(
        kind="sessions",
        metadata={
            "n": n,
            "sessions": " ".join(log.session_id for log in logs),
            "groups": group_total,
            "virtual": virtual,
        },
        chosen=chosen_rate(vectors) if vectors else None,
        overall=overall_classification(records) if records else None,
        by_priority=priority_breakdown(records, n) if records else None,
        taus=tuple(tau_rows),
        outcomes=tuple(outcome_rows),
    )


# --- tabular rendering -----------------------------------------------------


def _label_counts(rates: ClassificationRates) -> dict[ChoiceClassification, int]:
    return {label: round(rates.rate(label) * rates.basis) for label in LABELS}


def render_report_table(report: AnalysisReport) -> str:
    """Render the report as sectioned tables with one header row each."""
    out: list[str] = []

    out.append("[metadata]")
    out.append("key,value")
    out.append(f"schema,{REPORT_SCHEMA}")
    out.append(f"kind,{report.kind}")
    for key, value in report.metadata.items():
        out.append(f"{key},{format_number(value)}")

    if report.chosen is not None:
        out.append("")
        out.append("[chosen_rate]")
        out.append("object,rate,count")
        for j in range(report.chosen.n):
            count = report.chosen_counts[j] if report.chosen_counts else None
            out.append(
                f"{j + 1},{format_number(report.chosen.rate[j])},{format_number(count)}"
            )

    if report.overall is not None:
        out.append("")
        out.append("[classification_overall]")
        out.append("label,rate,count")
        counts = _label_counts(report.overall)
        for label in LABELS:
            out.append(
                f"{label.value},{format_number(report.overall.rate(label))},{counts[label]}"
            )

    if report.by_priority is not None:
        out.append("")
        out.append("[classification_by_priority]")
        out.append("priority,rdmr,risk,safe,count")
        for i, rates in enumerate(report.by_priority, start=1):
            if rates is None:
                out.append(f"{i},NA,NA,NA,0")
            else:
                cells = ",".join(format_number(rates.rate(label)) for label in LABELS)
                out.append(f"{i},{cells},{rates.basis}")

    if report.taus is not None:
        out.append("")
        out.append("[tau]")
        out.append("session,player,tau")
        for row in report.taus:
            for player, tau in enumerate(row.taus, start=1):
                out.append(f"{row.session_id},{player},{tau}")
            out.append(f"{row.session_id},mean,{format_number(row.mean)}")

    if report.outcomes is not None:
        out.append("")
        out.append("[outcomes]")
        out.append("session,round,player,priority,choice,obtained")
        for row in report.outcomes:
            got = "Nothing" if row.obtained is None else row.obtained
            out.append(
                f"{row.session_id},{row.round_index},{row.player},"
                f"{row.priority},{row.choice},{got}"
            )

    return "\n".join(out) + "\n"


# --- JSON codec ------------------------------------------------------------


def _rates_tree(rates: ClassificationRates) -> dict[str, Any]:
    return {
        "basis": rates.basis,
        "rates": {label.value: rates.rate(label) for label in LABELS},
    }


def encode_report(report: AnalysisReport) -> str:
    tree: dict[str, Any] = {
        "schema": REPORT_SCHEMA,
        "kind": report.kind,
        "metadata": dict(report.metadata),
        "chosen_rate": None,
        "classification": None,
        "tau": None,
        "outcomes": None,
    }
    if report.chosen is not None:
        tree["chosen_rate"] = {
            "rate": list(report.chosen.rate),
            "counts": list(report.chosen_counts) if report.chosen_counts else None,
            "events": report.chosen.count_basis,
        }
    if report.overall is not None or report.by_priority is not None:
        tree["classification"] = {
            "overall": _rates_tree(report.overall) if report.overall else None,
            "by_priority": [
                _rates_tree(r) if r is not None else None
                for r in (report.by_priority or ())
            ],
        }
    if report.taus is not None:
        tree["tau"] = [
            {"session_id": row.session_id, "taus": list(row.taus), "mean": row.mean}
            for row in report.taus
        ]
    if report.outcomes is not None:
        tree["outcomes"] = [
            {
                "session_id": row.session_id,
                "round": row.round_index,
                "player": row.player,
                "priority": row.priority,
                "choice": row.choice,
                "obtained": row.obtained,
            }
            for row in report.outcomes
        ]
    return json.dumps(tree, indent=2, ensure_ascii=False) + "\n"


def _decode_rates(tree: Any, path: str, strict: bool) -> ClassificationRates:
    if not isinstance(tree, dict):
        raise SchemaError(path, "expected an object")
    _check_unknown(tree, {"basis", "rates"}, f"{path}.", strict)
    basis = _require(tree, "basis", int, f"{path}.")
    rates_raw = _require(tree, "rates", dict, f"{path}.")
    rates = {}
    for key, value in rates_raw.items():
        try:
            label = ChoiceClassification(key)
        except ValueError:
            raise SchemaError(f"{path}.rates.{key}", "unknown label") from None
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise SchemaError(f"{path}.rates.{key}", "expected a number")
        rates[label] = float(value)
    try:
        return ClassificationRates(basis, rates)
    except ValidationError as exc:
        raise SchemaError(path, str(exc)) from None


def decode_report(text: str, strict: bool = True) -> AnalysisReport:
    try:
        tree = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("", f"not valid JSON: {exc}") from None
    if not isinstance(tree, dict):
        raise SchemaError("", "top level must be an object")
    schema = _require(tree, "schema", str, "")
    if schema != REPORT_SCHEMA:
        raise SchemaError("schema", f"expected {REPORT_SCHEMA!r}, got {schema!r}")
    _check_unknown(
        tree,
        {"schema", "kind", "metadata", "chosen_rate", "classification", "tau", "outcomes"},
        "",
        strict,
    )
    kind = _require(tree, "kind", str, "")
    metadata = _require(tree, "metadata", dict, "")

    chosen = None
    chosen_counts = None
    if tree.get("chosen_rate") is not None:
        cr = _require(tree, "chosen_rate", dict, "")
        _check_unknown(cr, {"rate", "counts", "events"}, "chosen_rate.", strict)
        rate_raw = _require(cr, "rate", list, "chosen_rate.")
        if any(not isinstance(v, (int, float)) or isinstance(v, bool) for v in rate_raw):
            raise SchemaError("chosen_rate.rate", "expected numbers")
        events = _require(cr, "events", int, "chosen_rate.")
        try:
            chosen = ChosenRateDistribution(tuple(float(v) for v in rate_raw), events)
        except ValidationError as exc:
            raise SchemaError("chosen_rate.rate", str(exc)) from None
        if cr.get("counts") is not None:
            counts_raw = cr["counts"]
            if not isinstance(counts_raw, list) or any(
                not isinstance(v, int) or isinstance(v, bool) for v in counts_raw
            ):
                raise SchemaError("chosen_rate.counts", "expected integers")
            if len(counts_raw) != len(rate_raw):
                raise SchemaError("chosen_rate.counts", "length mismatch with rate")
            chosen_counts = tuple(counts_raw)

    overall = None
    by_priority = None
    if tree.get("classification") is not None:
        cl = _require(tree, "classification", dict, "")
        _check_unknown(cl, {"overall", "by_priority"}, "classification.", strict)
        if cl.get("overall") is not None:
            overall = _decode_rates(cl["overall"], "classification.overall", strict)
        raw = cl.get("by_priority")
        if raw is not None:
            if not isinstance(raw, list):
                raise SchemaError("classification.by_priority", "expected a list")
            by_priority = tuple(
                None
                if entry is None
                else _decode_rates(entry, f"classification.by_priority[{i}]", strict)
                for i, entry in enumerate(raw)
            )

    taus = None
    if tree.get("tau") is not None:
        raw = _require(tree, "tau", list, "")
        rows = []
        for i, entry in enumerate(raw):
            path = f"tau[{i}]."
            if not isinstance(entry, dict):
                raise SchemaError(f"tau[{i}]", "expected an object")
            _check_unknown(entry, {"session_id", "taus", "mean"}, path, strict)
            sid = _require(entry, "session_id", str, path)
            tau_list = _require(entry, "taus", list, path)
            if any(not isinstance(v, int) or isinstance(v, bool) for v in tau_list):
                raise SchemaError(f"{path}taus", "expected integers")
            mean = _require(entry, "mean", float, path)
            rows.append(SessionTauRow(sid, tuple(tau_list), float(mean)))
        taus = tuple(rows)

    outcomes = None
    if tree.get("outcomes") is not None:
        raw = _require(tree, "outcomes", list, "")
        rows = []
        for i, entry in enumerate(raw):
            path = f"outcomes[{i}]."
            if not isinstance(entry, dict):
                raise SchemaError(f"outcomes[{i}]", "expected an object")
            _check_unknown(
                entry,
                {"session_id", "round", "player", "priority", "choice", "obtained"},
                path,
                strict,
            )
            obtained = entry.get("obtained")
            if obtained is not None and not isinstance(obtained, str):
                raise SchemaError(f"{path}obtained", "expected a label or null")
            rows.append(
                OutcomeRow(
                    session_id=_require(entry, "session_id", str, path),
                    round_index=_require(entry, "round", int, path),
                    player=_require(entry, "player", int, path),
                    priority=_require(entry, "priority", int, path),
                    choice=_require(entry, "choice", str, path),
                    obtained=obtained,
                )
            )
        outcomes = tuple(rows)

    return AnalysisReport(
        kind=kind,
        metadata=metadata,
        chosen=chosen,
        chosen_counts=chosen_counts,
        overall=overall,
        by_priority=by_priority,
        taus=taus,
        outcomes=outcomes,
    )
