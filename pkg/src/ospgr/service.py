"""HTTP service hosting live sessions.

Protocol enforced per session: players join, submit preference rankings,
then play n rounds. The popularity ranking is published only once every
ranking is in; during play each player sees only the public popularity and
their own current priority. Outcomes are computed as rounds complete but
stay hidden from players for the whole session — the finished log is
downloadable with the admin token only.
"""

from __future__ import annotations

import secrets
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.responses import Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .formats import SESSION_SUFFIX, RoundRecord, SessionLog, encode_session
from .game import (
    PopularityRanking,
    PreferenceProfile,
    PriorityAssignment,
    ValidationError,
    allocate,
    borda_scores,
    popularity_ranking,
)
from .schedule import priority_schedule
from .simulate import default_labels

RECRUITING = "recruiting"
PREFERENCE_COLLECTION = "preference_collection"
RUNNING = "running"
FINISHED = "finished"


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass
class _Player:
    token: str
    index: int  # 1-based join order
    ranks: Optional[tuple[int, ...]] = None
    choices: dict[int, str] = field(default_factory=dict)  # round -> label


@dataclass
class _Session:
    session_id: str
    n: int
    object_type: str
    object_labels: tuple[str, ...]
    admin_token: str
    schedule_seed: int
    created_at: str
    lock: threading.Lock = field(default_factory=threading.Lock)
    phase: str = RECRUITING
    round: int = 0  # current round while running
    players: list[_Player] = field(default_factory=list)
    popularity: Optional[PopularityRanking] = None
    schedule: Optional[tuple[tuple[int, ...], ...]] = None
    rounds: list[RoundRecord] = field(default_factory=list)
    finished_at: Optional[str] = None

    def player_by_token(self, token: str) -> _Player:
        for p in self.players:
            if secrets.compare_digest(p.token, token):
                return p
        raise HTTPException(status_code=401, detail="unknown player token")

    def priorities_for_round(self, r: int) -> PriorityAssignment:
        assert self.schedule is not None
        return PriorityAssignment(tuple(self.schedule[p][r - 1] for p in range(self.n)))

    def to_log(self) -> SessionLog:
        profile = PreferenceProfile.from_rows([p.ranks for p in self.players])
        return SessionLog(
            session_id=self.session_id,
            n=self.n,
            object_type=self.object_type,
            object_labels=self.object_labels,
            preferences=profile,
            popularity=self.popularity,
            rounds=tuple(self.rounds),
            created_at=self.created_at,
            finished_at=self.finished_at,
        )


class SessionRegistry:
    """All live sessions; a per-session lock serializes mutations."""

    def __init__(self, data_dir: Optional[str] = None):
        self._sessions: dict[str, _Session] = {}
        self._lock = threading.Lock()
        self.data_dir = Path(data_dir) if data_dir else None

    def create(
        self,
        n: int,
        object_labels: Optional[list[str]],
        object_type: str,
        schedule_seed: Optional[int],
    ) -> _Session:
        if n < 2:
            raise HTTPException(status_code=400, detail="n must be at least 2")
        labels = tuple(object_labels) if object_labels else default_labels(n)
        if len(labels) != n:
            raise HTTPException(status_code=400, detail=f"expected {n} object labels")
        if len(set(labels)) != n:
            raise HTTPException(status_code=400, detail="object labels must be distinct")
        session = _Session(
            session_id=secrets.token_hex(8),
            n=n,
            object_type=object_type,
            object_labels=labels,
            admin_token=secrets.token_hex(16),
            schedule_seed=(
                schedule_seed if schedule_seed is not None else secrets.randbits(32)
            ),
            created_at=_now(),
        )
        with self._lock:
            self._sessions[session.session_id] = session
        return session

    def get(self, session_id: str) -> _Session:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="no such session")
        return session

    def persist(self, session: _Session) -> None:
        if self.data_dir is None:
            return
        self.data_dir.mkdir(parents=True, exist_ok=True)
        path = self.data_dir / f"{session.session_id}{SESSION_SUFFIX}"
        path.write_text(encode_session(session.to_log()), encoding="utf-8")


class CreateSessionBody(BaseModel):
    n: int
    object_labels: Optional[list[str]] = None
    object_type: str = "box"
    schedule_seed: Optional[int] = None


class PreferencesBody(BaseModel):
    token: str
    ranks: list[int]


class ChoiceBody(BaseModel):
    token: str
    choice: str


def create_app(data_dir: Optional[str] = None, ui_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="ospgr session service")
    registry = SessionRegistry(data_dir)
    app.state.registry = registry

    @app.post("/sessions")
    def create_session(body: CreateSessionBody):
        session = registry.create(
            body.n, body.object_labels, body.object_type, body.schedule_seed
        )
        return {"session_id": session.session_id, "admin_token": session.admin_token}

    @app.get("/sessions/{session_id}")
    def session_summary(session_id: str):
        session = registry.get(session_id)
        with session.lock:
            return {
                "session_id": session.session_id,
                "phase": session.phase,
                "n": session.n,
                "joined": len(session.players),
                "object_type": session.object_type,
                "object_labels": list(session.object_labels),
            }

    @app.post("/sessions/{session_id}/players")
    def join(session_id: str):
        session = registry.get(session_id)
        with session.lock:
            if session.phase != RECRUITING:
                raise HTTPException(status_code=409, detail="session is not recruiting")
            player = _Player(token=secrets.token_hex(16), index=len(session.players) + 1)
            session.players.append(player)
            if len(session.players) == session.n:
                session.phase = PREFERENCE_COLLECTION
            return {"player_token": player.token, "phase": session.phase}

    @app.post("/sessions/{session_id}/preferences")
    def submit_preferences(session_id: str, body: PreferencesBody):
        session = registry.get(session_id)
        with session.lock:
            player = session.player_by_token(body.token)
            if session.phase != PREFERENCE_COLLECTION:
                raise HTTPException(
                    status_code=409, detail="session is not collecting preferences"
                )
            if player.ranks is not None:
                raise HTTPException(status_code=409, detail="preferences already submitted")
            if sorted(body.ranks) != list(range(1, session.n + 1)):
                raise HTTPException(status_code=400, detail="ranks are not a permutation")
            player.ranks = tuple(body.ranks)
            if all(p.ranks is not None for p in session.players):
                profile = PreferenceProfile.from_rows([p.ranks for p in session.players])
                session.popularity = popularity_ranking(borda_scores(profile))
                session.schedule = priority_schedule(session.n, session.schedule_seed)
                session.phase = RUNNING
                session.round = 1
            return {"submitted": True, "phase": session.phase}

    @app.get("/sessions/{session_id}/round")
    def round_view(session_id: str, token: str):
        session = registry.get(session_id)
        with session.lock:
            player = session.player_by_token(token)
            view = {
                "phase": session.phase,
                "n": session.n,
                "object_type": session.object_type,
                "object_labels": list(session.object_labels),
            }
            if session.phase == PREFERENCE_COLLECTION:
                view["submitted"] = player.ranks is not None
            elif session.phase == RUNNING:
                priorities = session.priorities_for_round(session.round)
                view["round"] = session.round
                view["popularity"] = [
                    session.object_labels[session.popularity.object_with_rank(k) - 1]
                    for k in range(1, session.n + 1)
                ]
                view["my_priority"] = priorities.priority_of(player.index)
                view["chosen"] = session.round in player.choices
            elif session.phase == FINISHED:
                view["rounds_played"] = len(session.rounds)
            return view

    @app.post("/sessions/{session_id}/choice")
    def submit_choice(session_id: str, body: ChoiceBody):
        session = registry.get(session_id)
        with session.lock:
            player = session.player_by_token(body.token)
            if session.phase != RUNNING:
                raise HTTPException(status_code=409, detail="no round in progress")
            if body.choice not in session.object_labels:
                raise HTTPException(
                    status_code=400, detail=f"unknown object label {body.choice!r}"
                )
            r = session.round
            if r in player.choices:
                raise HTTPException(status_code=409, detail="already chose this round")
            player.choices[r] = body.choice
            if all(r in p.choices for p in session.players):
                _finish_round(session, r)
                if session.phase == FINISHED:
                    registry.persist(session)
            return {"recorded": True, "round": r}

    @app.get("/sessions/{session_id}/log")
    def download_log(session_id: str, admin_token: str):
        session = registry.get(session_id)
        with session.lock:
            if not secrets.compare_digest(session.admin_token, admin_token):
                raise HTTPException(status_code=401, detail="bad admin token")
            if session.phase != FINISHED:
                raise HTTPException(status_code=409, detail="session not finished")
            text = encode_session(session.to_log())
        return Response(content=text, media_type="application/json")

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def _finish_round(session: _Session, r: int) -> None:
    # Allocation depends only on the set of (choice, priority) pairs, never
    # on submission order within the round.
    priorities = session.priorities_for_round(r)
    labels = session.object_labels
    choices = tuple(labels.index(p.choices[r]) + 1 for p in session.players)
    try:
        outcome = allocate(choices, priorities)
    except ValidationError as exc:  # pragma: no cover - guarded upstream
        raise HTTPException(status_code=500, detail=str(exc))
    session.rounds.append(
        RoundRecord(
            round_index=r,
            priority_of_player=priorities.priority_of_player,
            choices=tuple(labels[c - 1] for c in choices),
            obtained=tuple(
                None if got is None else labels[got - 1] for got in outcome.obtained
            ),
        )
    )
    if r == session.n:
        session.phase = FINISHED
        session.round = 0
        session.finished_at = _now()
    else:
        session.round = r + 1
