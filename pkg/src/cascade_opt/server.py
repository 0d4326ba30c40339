"""HTTP session API exposing the driver's state machine to the console.

All payload numbers are exact rational strings.  Sessions live in memory,
expire after a configurable idle time, and are serialized per session with a
lock, so concurrent requests against one session cannot interleave state
transitions.  Error mapping: 404 unknown session, 409 wrong phase, 422
invalid input (with the violated component identified where applicable).
"""
from __future__ import annotations

import threading
import time
import uuid
from collections import OrderedDict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from fastapi import Body, FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from .driver import (
    DmSlacks,
    Phase,
    SessionState,
    apply_dm_slacks,
    choose_sorting_set,
    create_session,
    finalize,
    solve_current_level,
)
from .errors import (
    CascadeOptError,
    DmBoundsViolation,
    ParseError,
    PhaseError,
)
from .geometry import analyze
from .problem_io import parse_problem_dict
from .rationals import format_vector, parse_vector


@dataclass
class _SessionRecord:
    state: SessionState
    lock: threading.Lock = field(default_factory=threading.Lock)
    touched: float = field(default_factory=time.monotonic)
    last_error: dict | None = None


class _Registry:
    def __init__(self, ttl: float):
        self.ttl = ttl
        self._sessions: dict[str, _SessionRecord] = {}
        self._lock = threading.Lock()

    def _purge(self) -> None:
        now = time.monotonic()
        stale = [sid for sid, rec in self._sessions.items() if now - rec.touched > self.ttl]
        for sid in stale:
            del self._sessions[sid]

    def create(self, state: SessionState) -> str:
        with self._lock:
            self._purge()
            sid = uuid.uuid4().hex
            self._sessions[sid] = _SessionRecord(state=state)
            return sid

    def get(self, sid: str) -> _SessionRecord | None:
        with self._lock:
            self._purge()
            rec = self._sessions.get(sid)
            if rec is not None:
                rec.touched = time.monotonic()
            return rec

    def delete(self, sid: str) -> bool:
        with self._lock:
            return self._sessions.pop(sid, None) is not None


# Phase-1 geometry is a pure function of the problem document and big-M, so
# repeated session creation from the same file costs one computation.
_GEOMETRY_CACHE: OrderedDict[tuple, tuple] = OrderedDict()
_GEOMETRY_CACHE_LOCK = threading.Lock()
_GEOMETRY_CACHE_CAP = 32


def _cached_analyze(problem, big_m: Fraction, cache_key: tuple):
    with _GEOMETRY_CACHE_LOCK:
        if cache_key in _GEOMETRY_CACHE:
            _GEOMETRY_CACHE.move_to_end(cache_key)
            return _GEOMETRY_CACHE[cache_key]
    result = analyze(problem.A, problem.b, problem.levels, big_m)
    with _GEOMETRY_CACHE_LOCK:
        _GEOMETRY_CACHE[cache_key] = result
        while len(_GEOMETRY_CACHE) > _GEOMETRY_CACHE_CAP:
            _GEOMETRY_CACHE.popitem(last=False)
    return result


def _error_payload(exc: CascadeOptError) -> dict:
    payload: dict[str, Any] = {
        "error": type(exc).__name__,
        "detail": exc.args[0] if exc.args else str(exc),
    }
    if isinstance(exc, DmBoundsViolation):
        payload["component"] = exc.component
        payload["side"] = exc.side
        payload["excess"] = str(exc.excess)
    if isinstance(exc, PhaseError):
        payload["phase"] = exc.phase
    return payload


def _status_for(exc: CascadeOptError) -> int:
    return 409 if isinstance(exc, PhaseError) else 422


def session_view(sid: str, rec: _SessionRecord) -> dict:
    state = rec.state
    problem = state.problem
    view: dict[str, Any] = {
        "id": sid,
        "phase": state.phase.value,
        "current_level": state.current_level,
        "levels": problem.num_levels,
        "num_vars": problem.num_vars,
        "level_owned": list(problem.owned),
        "vertices": [
            {"coords": format_vector(v.coords), "tight": [i + 1 for i in v.tight]}
            for v in state.polytope.vertices()
        ],
        "common_efficient": [format_vector(v.coords) for v in state.geometry.n_hat_dex],
        "sorting_sets": [
            {
                "index": i + 1,
                "dim": f.dim,
                "tight": [r + 1 for r in f.q],
                "vertices": [format_vector(v.coords) for v in f.vertices],
            }
            for i, f in enumerate(state.geometry.maximal_faces)
        ],
        "chosen_sorting_set": state.sorting_index,
        "card_spdex": state.card_spdex,
        "bounds_initial": None,
        "bounds_current": None,
        "compromises": [],
        "final_compromise": None,
        "trace": list(state.trace),
        "last_error": rec.last_error,
    }
    if state.bounds_initial is not None:
        view["bounds_initial"] = {
            "lower": format_vector(state.bounds_initial[0]),
            "upper": format_vector(state.bounds_initial[1]),
        }
        view["bounds_current"] = {
            "lower": format_vector(state.bounds_current[0]),
            "upper": format_vector(state.bounds_current[1]),
        }
    for p, x in enumerate(state.compromises, start=1):
        view["compromises"].append(
            {
                "level": p,
                "x": format_vector(x),
                "objective_values": format_vector(problem.levels[p - 1].values_at(x)),
            }
        )
    if state.phase is Phase.DONE:
        final = finalize(state)
        view["final_compromise"] = {
            "x": format_vector(final.x),
            "objective_values": [format_vector(v) for v in final.objective_values],
        }
    return view


def create_app(
    session_ttl: float = 3600.0,
    console_dir: str | None = None,
) -> FastAPI:
    app = FastAPI(title="cascade-opt session API")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    registry = _Registry(ttl=session_ttl)
    app.state.registry = registry

    def _fail(exc: CascadeOptError, rec: _SessionRecord | None = None) -> JSONResponse:
        payload = _error_payload(exc)
        if rec is not None:
            rec.last_error = payload
        return JSONResponse(status_code=_status_for(exc), content=payload)

    def _not_found(sid: str) -> JSONResponse:
        return JSONResponse(
            status_code=404,
            content={"error": "UnknownSession", "detail": f"no session {sid!r}"},
        )

    @app.post("/sessions")
    def create(payload: dict = Body(...)):
        try:
            doc = parse_problem_dict(payload, source="request body")
            polytope, geometry = _cached_analyze(
                doc.problem,
                doc.config.big_m,
                cache_key=(repr(payload), str(doc.config.big_m)),
            )
            state = create_session(
                doc.problem,
                polytope,
                geometry,
                big_m=doc.config.big_m,
                strict_sp=doc.config.strict_sp,
            )
        except CascadeOptError as exc:
            return _fail(exc)
        sid = registry.create(state)
        return JSONResponse(status_code=201, content=session_view(sid, registry.get(sid)))

    @app.get("/sessions/{sid}")
    def view(sid: str):
        rec = registry.get(sid)
        if rec is None:
            return _not_found(sid)
        with rec.lock:
            return JSONResponse(content=session_view(sid, rec))

    @app.post("/sessions/{sid}/sorting-set")
    def pick_sorting_set(sid: str, payload: dict = Body(...)):
        rec = registry.get(sid)
        if rec is None:
            return _not_found(sid)
        with rec.lock:
            index = payload.get("index")
            if not isinstance(index, int):
                return _fail(ParseError("body must carry an integer 'index'"), rec)
            try:
                rec.state = choose_sorting_set(rec.state, index)
            except CascadeOptError as exc:
                return _fail(exc, rec)
            rec.last_error = None
            return JSONResponse(content=session_view(sid, rec))

    @app.post("/sessions/{sid}/solve")
    def solve(sid: str, payload: dict | None = Body(None)):
        rec = registry.get(sid)
        if rec is None:
            return _not_found(sid)
        with rec.lock:
            init = None
            if payload and payload.get("init") is not None:
                try:
                    init = parse_vector(payload["init"], where="init")
                except CascadeOptError as exc:
                    return _fail(exc, rec)
            try:
                rec.state = solve_current_level(rec.state, x0=init)
            except CascadeOptError as exc:
                return _fail(exc, rec)
            rec.last_error = None
            return JSONResponse(content=session_view(sid, rec))

    @app.post("/sessions/{sid}/slacks")
    def slacks(sid: str, payload: dict = Body(...)):
        rec = registry.get(sid)
        if rec is None:
            return _not_found(sid)
        with rec.lock:
            try:
                lows = parse_vector(payload.get("l", []), where="l")
                highs = parse_vector(payload.get("r", []), where="r")
                dm = DmSlacks(rec.state.current_level, lows, highs)
                rec.state = apply_dm_slacks(rec.state, dm)
            except CascadeOptError as exc:
                return _fail(exc, rec)
            rec.last_error = None
            return JSONResponse(content=session_view(sid, rec))

    @app.delete("/sessions/{sid}")
    def delete(sid: str):
        if not registry.delete(sid):
            return _not_found(sid)
        return Response(status_code=204)

    if console_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=console_dir, html=True), name="console")
    return app
