"""HTTP service: JSON endpoints over the learning domain with token auth."""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import Depends, FastAPI, Header, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import errors
from .auth import AuthService
from .domain import LearningService
from .models import Difficulty
from .pipeline import RagPipeline
from .providers import ProviderConfig, make_provider
from .storage import FileStorage, NamespaceDict
from .vectorstore import VectorIndex

INDEX_FILENAME = "index.bin"

_BAD_REQUEST = (
    ValueError,
    errors.ParseError,
    errors.DuplicateTag,
    errors.EmptyTopics,
    errors.InvalidTimeline,
    errors.InsufficientQuestions,
    errors.IncompleteAnswers,
    errors.SessionAlreadyCompleted,
    errors.EmptyMessage,
    errors.EmptyText,
    errors.NoExemplars,
    errors.GenerationUnparseable,
)


@dataclass
class AppConfig:
    data_dir: str
    provider: ProviderConfig = field(default_factory=ProviderConfig)

    @classmethod
    def from_env(cls, env=os.environ) -> "AppConfig":
        return cls(
            data_dir=env.get("DATA_DIR", "./data"),
            provider=ProviderConfig.from_env(env),
        )


class Credentials(BaseModel):
    username: str
    password: str


class DynamicQuizRequest(BaseModel):
    topic: str
    difficulty: str
    count: int = Field(ge=1)


class SubmitRequest(BaseModel):
    answers: dict[str, int]


class ChatRequest(BaseModel):
    message: str
    history: list[dict] = Field(default_factory=list)


class RoadmapRequest(BaseModel):
    timeline_weeks: int
    topics: list[str]
    language: str = "python"


def _public_session(session: dict) -> dict:
    """Strip answers and explanations before a session leaves the service."""
    return {
        "session_id": session["session_id"],
        "mode": session["mode"],
        "topic": session["topic"],
        "difficulty": session["difficulty"],
        "started_at": session["started_at"],
        "questions": [
            {
                "id": qid,
                "stem": session["questions"][qid]["stem"],
                "options": session["questions"][qid]["options"],
            }
            for qid in session["question_ids"]
        ],
    }


def create_app(config: AppConfig | None = None) -> FastAPI:
    config = config or AppConfig.from_env()
    data_dir = Path(config.data_dir)
    storage = FileStorage(data_dir)
    provider = make_provider(config.provider)
    index_path = data_dir / INDEX_FILENAME
    if index_path.exists():
        index = VectorIndex.load(index_path)
    else:
        index = VectorIndex(dimension=config.provider.embed_dimension)
    knowledge = NamespaceDict(storage, "intents")
    pipeline = RagPipeline(index, provider, knowledge)
    service = LearningService(storage, pipeline, rng=random.Random())
    auth = AuthService(storage)

    app = FastAPI(title="codelearn", docs_url=None, redoc_url=None)
    app.state.storage = storage
    app.state.index = index
    app.state.pipeline = pipeline
    app.state.service = service
    app.state.auth = auth

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": str(exc.errors()[:3])})

    @app.exception_handler(errors.CodeLearnError)
    async def _domain_error(request: Request, exc: errors.CodeLearnError):
        if isinstance(exc, errors.InvalidCredentials):
            status = 401
        elif isinstance(exc, errors.NotFound):
            status = 404
        elif isinstance(exc, errors.ProviderUnavailable):
            status = 503
        elif isinstance(exc, _BAD_REQUEST):
            status = 400
        else:
            status = 500
        return JSONResponse(status_code=status, content={"error": str(exc)})

    @app.exception_handler(ValueError)
    async def _value_error(request: Request, exc: ValueError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    def current_user(authorization: str | None = Header(default=None)) -> str:
        token = None
        if authorization and authorization.lower().startswith("bearer "):
            token = authorization[7:].strip()
        return auth.authenticate(token)

    # --- auth ---

    @app.post("/api/auth/register", status_code=201)
    def register(body: Credentials):
        return {"user_id": auth.register(body.username, body.password)}

    @app.post("/api/auth/login")
    def login(body: Credentials):
        record = auth.login(body.username, body.password)
        return {
            "token": record["token"],
            "user_id": record["user_id"],
            "expires_at": record["expires_at"],
        }

    # --- quizzes ---

    @app.get("/api/quiz/static")
    def static_quiz(
        topic: str, difficulty: str, count: int = 5, user: str = Depends(current_user)
    ):
        session = service.start_quiz(user, topic, Difficulty.parse(difficulty), "static", count)
        return _public_session(session)

    @app.post("/api/quiz/dynamic")
    def dynamic_quiz(body: DynamicQuizRequest, user: str = Depends(current_user)):
        session = service.start_quiz(
            user, body.topic, Difficulty.parse(body.difficulty), "dynamic", body.count
        )
        return _public_session(session)

    @app.post("/api/quiz/{session_id}/submit")
    def submit_quiz(session_id: str, body: SubmitRequest, user: str = Depends(current_user)):
        session = service.get_session(session_id)
        if session["user_id"] != user:
            raise errors.NotFound(f"no session {session_id}")
        return service.complete_quiz(session_id, body.answers)

    @app.get("/api/questions/{question_id}/explain")
    def explain(question_id: str, user: str = Depends(current_user)):
        return {"question_id": question_id, "explanation": service.explain_question(question_id)}

    # --- chat ---

    @app.post("/api/chat")
    def chat(body: ChatRequest, user: str = Depends(current_user)):
        reply = pipeline.chat_reply(body.message, body.history)
        return {
            "text": reply.text,
            "source_tags": list(reply.source_tags),
            "grounded": reply.grounded,
        }

    # --- roadmap, tip, progress ---

    @app.post("/api/roadmap")
    def roadmap(body: RoadmapRequest, user: str = Depends(current_user)):
        plan = service.generate_roadmap(user, body.timeline_weeks, body.topics, body.language)
        return plan.to_dict()

    @app.get("/api/tip")
    def tip(user: str = Depends(current_user)):
        return service.tip_of_the_day(user)

    @app.get("/api/progress")
    def progress(user: str = Depends(current_user)):
        return service.get_progress(user)

    return app
