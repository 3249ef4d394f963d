"""HTTP/JSON façade over the library for the browser console.

Every endpoint is a thin wrapper: it decodes the request, calls the same
library function the CLI uses, and encodes the result.  No domain logic
lives here, so a response is always byte-traceable to a library call.

All state (trained model, preloaded corpus) is loaded once at app
creation and never mutated, which makes concurrent request handling
trivially safe.  Domain failures surface as a structured 4xx envelope
``{"code": ..., "message": ..., "line": ...}`` mirroring VrenError.
"""

from __future__ import annotations

import dataclasses

from fastapi import Body, FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import learn, notation, stats, synth
from .diagnostics import EmptyScopeError, InvalidModelError, SchemaError, VrenError
from .features import LAYOUT
from .model import Match, ServeType, Team, coerce_field_value


def _payload_matches(payload: dict) -> list[Match]:
    if not isinstance(payload, dict):
        raise SchemaError("request body must be a JSON object")
    if "text" in payload:
        if not isinstance(payload["text"], str):
            raise SchemaError("'text' must be a string of notation")
        return notation.parse_text(payload["text"])
    if "match" in payload:
        return [notation.match_from_json(payload["match"])]
    if "matches" in payload:
        if not isinstance(payload["matches"], list):
            raise SchemaError("'matches' must be an array")
        return [notation.match_from_json(doc) for doc in payload["matches"]]
    raise SchemaError("request needs 'text', 'match', or 'matches'")


def _team(payload: dict) -> Team | None:
    team = payload.get("team")
    if team is None:
        return None
    if team not in ("A", "B"):
        raise SchemaError(f"team must be 'A' or 'B', got {team!r}")
    return Team(team)


def _find_rally(match: Match, rally_no: int):
    context: list = []
    for rally in match.rallies:
        if rally.rally_no == rally_no:
            return rally, tuple(context)
        context.extend(rally.rounds)
    raise EmptyScopeError(f"no rally {rally_no} in match {match.match_id!r}")


def create_app(model_path: str | None = None, corpus_path: str | None = None) -> FastAPI:
    model = learn.load_model(model_path) if model_path else None
    corpus: list[Match] = []
    if corpus_path:
        with open(corpus_path, "r", encoding="utf-8") as fh:
            corpus = notation.parse_text(fh.read())

    app = FastAPI(title="vren", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(VrenError)
    async def vren_error_handler(request: Request, exc: VrenError):
        return JSONResponse(
            status_code=400,
            content={"code": exc.code, "message": exc.message, "line": exc.line},
        )

    def _require_model() -> learn.LinearModel:
        if model is None:
            raise InvalidModelError("no model loaded; start the service with --model")
        return model

    @app.get("/health")
    def health():
        return {
            "status": "ok",
            "layout_hash": LAYOUT.layout_hash(),
            "model_loaded": model is not None,
            "corpus_matches": len(corpus),
        }

    @app.post("/parse")
    def parse(payload: dict = Body(...)):
        matches = _payload_matches(payload)
        return {"matches": [notation.match_to_json(m) for m in matches]}

    @app.post("/lint")
    def lint(payload: dict = Body(...)):
        findings = []
        for match in _payload_matches(payload):
            for diag in notation.lint_match(match):
                findings.append(dict(match_id=match.match_id, **diag.to_json()))
        return {
            "diagnostics": findings,
            "error_count": sum(1 for f in findings if f["severity"] == "error"),
        }

    @app.post("/format")
    def format_(payload: dict = Body(...)):
        matches = _payload_matches(payload)
        return {"text": notation.serialize_corpus(matches)}

    @app.post("/stats")
    def stats_(payload: dict = Body(...)):
        matches = _payload_matches(payload)
        team = _team(payload)

        def section(fn, *args):
            try:
                return fn(matches, *args)
            except EmptyScopeError:
                return None

        report = section(stats.attack_table, team)
        dist = section(stats.set_location_distribution, team)
        quality = section(stats.pass_set_quality, team)
        receive = {
            serve.value: stats.serve_receive_distribution(matches, serve, team)
            for serve in ServeType
        }
        return {
            "report": None if report is None else report.to_json(),
            "set_distribution": None if dist is None else {loc.value: s for loc, s in dist.items()},
            "serve_receive": {k: {str(z): n for z, n in v.items()} for k, v in receive.items()},
            "quality": None if quality is None else quality.to_json(),
        }

    @app.post("/predict/rally")
    def predict_rally(payload: dict = Body(...)):
        mdl = _require_model()
        matches = _payload_matches(payload)
        match = matches[0]
        out = []
        for rally in match.rallies:
            if payload.get("rally_no") is not None and rally.rally_no != payload["rally_no"]:
                continue
            _, context = _find_rally(match, rally.rally_no)
            probs = learn.per_round_win_prob(mdl, rally, context)
            out.append({"rally_no": rally.rally_no, "probs": probs})
        return {"match_id": match.match_id, "rallies": out}

    @app.post("/whatif")
    def whatif(payload: dict = Body(...)):
        mdl = _require_model()
        matches = _payload_matches(payload)
        match = matches[0]
        for key in ("rally_no", "round_index", "field"):
            if key not in payload:
                raise SchemaError(f"whatif request missing {key!r}")
        if "value" not in payload:
            raise SchemaError("whatif request missing 'value'")
        rally, context = _find_rally(match, payload["rally_no"])
        round_index = payload["round_index"]
        if not isinstance(round_index, int) or isinstance(round_index, bool):
            raise SchemaError("'round_index' must be an integer (0-based)")
        value = coerce_field_value(payload["field"], payload["value"])
        result = learn.what_if(mdl, rally, round_index, payload["field"], value, context)
        return result.to_json()

    @app.post("/generate")
    def generate(payload: dict = Body(...)):
        if not isinstance(payload, dict):
            raise SchemaError("request body must be a JSON object")
        n_matches = payload.get("n_matches", 1)
        rallies = payload.get("rallies", 25)
        seed = payload.get("seed", 7)
        for name, value in (("n_matches", n_matches), ("rallies", rallies), ("seed", seed)):
            if not isinstance(value, int) or isinstance(value, bool):
                raise SchemaError(f"{name!r} must be an integer")
        profile = synth.GeneratorProfile()
        if payload.get("signal") is not None:
            profile = dataclasses.replace(profile, signal_strength=float(payload["signal"]))
        matches = synth.generate_corpus(profile, n_matches, rallies, seed)
        return {
            "text": notation.serialize_corpus(matches),
            "matches": [notation.match_to_json(m) for m in matches],
        }

    return app
