"""Learning domain: quiz lifecycle, progress and gamification, roadmaps, daily tips."""

from __future__ import annotations

import hashlib
import json
import random
import threading
import uuid
from dataclasses import dataclass
from datetime import date as date_type
from datetime import datetime, timedelta, timezone

from .errors import (
    EmptyTopics,
    IncompleteAnswers,
    InsufficientQuestions,
    InvalidTimeline,
    NotFound,
    SessionAlreadyCompleted,
)
from .models import Difficulty
from .pipeline import PASS_THRESHOLD, QuestionItem, RagPipeline
from .storage import FileStorage

POINTS_SCALE = 100
MASTERY_WINDOW = 5  # trailing quizzes per (topic, difficulty) considered for mastery
STRUGGLING_WINDOW = 3
STRUGGLING_THRESHOLD = 0.5


@dataclass(frozen=True)
class Milestone:
    title: str
    topics: tuple[str, ...]
    start_week: int
    end_week: int
    lessons: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "topics": list(self.topics),
            "start_week": self.start_week,
            "end_week": self.end_week,
            "lessons": list(self.lessons),
        }


@dataclass(frozen=True)
class Roadmap:
    user_id: str
    timeline_weeks: int
    language: str
    milestones: tuple[Milestone, ...]

    def to_dict(self) -> dict:
        return {
            "user_id": self.user_id,
            "timeline_weeks": self.timeline_weeks,
            "language": self.language,
            "milestones": [m.to_dict() for m in self.milestones],
        }


def validate_plan(plan: list[dict], timeline_weeks: int, topics: list[str]) -> bool:
    """Check week bounds, ordered non-overlapping ranges, exact topic partition."""
    if not plan:
        return False
    previous_end = 0
    seen: list[str] = []
    for m in plan:
        try:
            start, end = int(m["start_week"]), int(m["end_week"])
            m_topics = list(m["topics"])
        except (KeyError, TypeError, ValueError):
            return False
        if not (1 <= start <= end <= timeline_weeks):
            return False
        if start <= previous_end:
            return False
        previous_end = end
        seen.extend(m_topics)
    return sorted(seen) == sorted(topics) and len(seen) == len(set(seen)) == len(topics)


def fallback_roadmap_plan(timeline_weeks: int, topics: list[str], language: str) -> list[dict]:
    """Deterministic planner: contiguous topic groups over even week spans.

    Always satisfies the roadmap invariants; used when the provider's plan
    fails validation twice.
    """
    m = min(len(topics), timeline_weeks)
    plan = []
    for i in range(m):
        group = topics[i * len(topics) // m : (i + 1) * len(topics) // m]
        plan.append(
            {
                "title": f"Stage {i + 1}: {group[0]}",
                "start_week": i * timeline_weeks // m + 1,
                "end_week": (i + 1) * timeline_weeks // m,
                "topics": group,
                "lessons": [f"Learn {t} in {language}" for t in group]
                + [f"Practice {t} exercises" for t in group],
            }
        )
    return plan


def _utc_now() -> datetime:
    return datetime.now(timezone.utc)


class LearningService:
    """Quiz sessions, progress, roadmaps, and tips over file-backed storage.

    Per-user mutations are serialized with a per-user lock; the clock and RNG
    are injectable so tests can freeze time and seed sampling.
    """

    def __init__(
        self,
        storage: FileStorage,
        pipeline: RagPipeline,
        *,
        rng: random.Random | None = None,
        clock: Callable[[], datetime] = _utc_now,
    ):
        self.storage = storage
        self.pipeline = pipeline
        self.rng = rng or random.Random()
        self.clock = clock
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _user_lock(self, user_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(user_id, threading.Lock())

    # --- quiz lifecycle ---

    def _static_pool(self, topic: str, difficulty: Difficulty) -> list[QuestionItem]:
        pool = []
        for key in self.storage.keys("questions"):
            record = self.storage.get("questions", key)
            if record and record["topic"] == topic and record["difficulty"] == difficulty.value:
                record.setdefault("origin", "static")
                pool.append(QuestionItem.from_dict(record))
        pool.sort(key=lambda q: q.id)
        return pool

    def start_quiz(
        self,
        user_id: str,
        topic: str,
        difficulty: Difficulty,
        mode: str,
        count: int,
    ) -> dict:
        if count < 1:
            raise ValueError("count must be >= 1")
        if mode == "static":
            pool = self._static_pool(topic, difficulty)
            if len(pool) < count:
                raise InsufficientQuestions(
                    f"{len(pool)} static questions for {topic}/{difficulty.value}, wanted {count}"
                )
            items = self.rng.sample(pool, count)
        elif mode == "dynamic":
            mastered = self.mastered_difficulty(user_id, topic)
            items = self.pipeline.generate_dynamic_questions(topic, difficulty, count, mastered)
            for item in items:
                self.storage.put("question_items", item.id, item.to_dict())
        else:
            raise ValueError(f"unknown quiz mode: {mode!r}")
        session_id = uuid.uuid4().hex
        session = {
            "session_id": session_id,
            "user_id": user_id,
            "mode": mode,
            "topic": topic,
            "difficulty": difficulty.value,
            "question_ids": [q.id for q in items],
            "questions": {q.id: q.to_dict() for q in items},
            "answers": {},
            "started_at": self.clock().isoformat(),
            "completed_at": None,
            "score_fraction": None,
            "duration_seconds": None,
            "quote": None,
        }
        self.storage.put("sessions", session_id, session)
        return session

    def get_session(self, session_id: str) -> dict:
        session = self.storage.get("sessions", session_id)
        if session is None:
            raise NotFound(f"no session {session_id}")
        return session

    def complete_quiz(self, session_id: str, answers: dict[str, int]) -> dict:
        session = self.get_session(session_id)
        if session["completed_at"] is not None:
            raise SessionAlreadyCompleted(session_id)
        question_ids = session["question_ids"]
        missing = [q for q in question_ids if q not in answers]
        unknown = [q for q in answers if q not in question_ids]
        if missing or unknown:
            raise IncompleteAnswers(
                f"missing answers for {missing}" if missing else f"unknown question ids {unknown}"
            )
        correct = sum(
            1
            for qid in question_ids
            if int(answers[qid]) == session["questions"][qid]["correct_index"]
        )
        score = correct / len(question_ids)
        completed_at = self.clock()
        started_at = datetime.fromisoformat(session["started_at"])
        duration = (completed_at - started_at).total_seconds()
        category, quote_text = self.pipeline.quiz_feedback_quote(score)
        session.update(
            answers={k: int(v) for k, v in answers.items()},
            completed_at=completed_at.isoformat(),
            score_fraction=score,
            duration_seconds=duration,
            quote={"category": category, "text": quote_text},
        )
        self.storage.put("sessions", session_id, session)
        progress = self.award_progress(
            session["user_id"],
            topic=session["topic"],
            difficulty=session["difficulty"],
            mode=session["mode"],
            score_fraction=score,
            duration_seconds=duration,
            completed_date=completed_at.date(),
        )
        return {
            "session_id": session_id,
            "score_fraction": score,
            "duration_seconds": duration,
            "quote": {"category": category, "text": quote_text},
            "points": progress["points"],
            "streak_days": progress["streak_days"],
        }

    # --- progress and gamification ---

    def _fresh_progress(self, user_id: str) -> dict:
        return {
            "user_id": user_id,
            "history": [],
            "points": 0,
            "streak_days": 0,
            "last_active_date": None,
        }

    def get_progress(self, user_id: str) -> dict:
        progress = self.storage.get("progress", user_id) or self._fresh_progress(user_id)
        progress["averages"] = self.topic_averages(progress)
        return progress

    @staticmethod
    def topic_averages(progress: dict) -> dict:
        """Per-topic per-difficulty mean scores over the full history."""
        sums: dict[str, dict[str, list[float]]] = {}
        for entry in progress["history"]:
            sums.setdefault(entry["topic"], {}).setdefault(entry["difficulty"], []).append(
                entry["score_fraction"]
            )
        return {
            topic: {diff: sum(scores) / len(scores) for diff, scores in diffs.items()}
            for topic, diffs in sums.items()
        }

    def mastered_difficulty(self, user_id: str, topic: str) -> Difficulty | None:
        """Highest difficulty whose trailing static-quiz average meets the bar."""
        progress = self.storage.get("progress", user_id)
        if progress is None:
            return None
        mastered = None
        for difficulty in Difficulty:
            scores = [
                e["score_fraction"]
                for e in progress["history"]
                if e["topic"] == topic
                and e["difficulty"] == difficulty.value
                and e["mode"] == "static"
            ][-MASTERY_WINDOW:]
            if scores and sum(scores) / len(scores) >= PASS_THRESHOLD:
                mastered = difficulty
        return mastered

    def award_progress(
        self,
        user_id: str,
        *,
        topic: str,
        difficulty: str,
        mode: str,
        score_fraction: float,
        duration_seconds: float,
        completed_date: date_type,
    ) -> dict:
        with self._user_lock(user_id):
            progress = self.storage.get("progress", user_id) or self._fresh_progress(user_id)
            progress["points"] += round(POINTS_SCALE * score_fraction)
            last = progress["last_active_date"]
            if last == completed_date.isoformat():
                pass  # second session today; streak unchanged
            elif last is not None and date_type.fromisoformat(last) == completed_date - timedelta(days=1):
                progress["streak_days"] += 1
            else:
                progress["streak_days"] = 1
            progress["last_active_date"] = completed_date.isoformat()
            progress["history"].append(
                {
                    "topic": topic,
                    "difficulty": difficulty,
                    "mode": mode,
                    "score_fraction": score_fraction,
                    "duration_seconds": duration_seconds,
                    "date": completed_date.isoformat(),
                }
            )
            self.storage.put("progress", user_id, progress)
            return progress

    # --- explanations ---

    def get_question(self, question_id: str) -> QuestionItem:
        record = self.storage.get("questions", question_id)
        if record is not None:
            record.setdefault("origin", "static")
            return QuestionItem.from_dict(record)
        record = self.storage.get("question_items", question_id)
        if record is not None:
            return QuestionItem.from_dict(record)
        raise NotFound(f"no question {question_id}")

    def explain_question(self, question_id: str) -> str:
        return self.pipeline.explain_question(self.get_question(question_id))

    # --- roadmap ---

    def generate_roadmap(
        self, user_id: str, timeline_weeks: int, topics: list[str], language: str
    ) -> Roadmap:
        if timeline_weeks < 1:
            raise InvalidTimeline("timeline_weeks must be >= 1")
        if not topics:
            raise EmptyTopics("at least one topic is required")
        plan: list[dict] | None = None
        for _ in range(2):
            try:
                candidate = self.pipeline.propose_roadmap(timeline_weeks, topics, language)
            except Exception:
                candidate = []
            if validate_plan(candidate, timeline_weeks, topics):
                plan = candidate
                break
        if plan is None:
            plan = fallback_roadmap_plan(timeline_weeks, topics, language)
        roadmap = Roadmap(
            user_id=user_id,
            timeline_weeks=timeline_weeks,
            language=language,
            milestones=tuple(
                Milestone(
                    title=str(m["title"]),
                    topics=tuple(m["topics"]),
                    start_week=int(m["start_week"]),
                    end_week=int(m["end_week"]),
                    lessons=tuple(m.get("lessons", ())),
                )
                for m in plan
            ),
        )
        self.storage.put("roadmaps", user_id, roadmap.to_dict())
        return roadmap

    # --- daily tip ---

    def _progress_snapshot(self, user_id: str, day: date_type) -> dict:
        progress = self.storage.get("progress", user_id) or self._fresh_progress(user_id)
        recent = [e["score_fraction"] for e in progress["history"][-STRUGGLING_WINDOW:]]
        if not recent:
            state = "new"
        elif sum(recent) / len(recent) < STRUGGLING_THRESHOLD:
            state = "struggling"
        else:
            state = "steady"
        return {
            "date": day.isoformat(),
            "progress_state": state,
            "points": progress["points"],
            "streak_days": progress["streak_days"],
            "recent_scores": [f"{s:.2f}" for s in recent],
            "quizzes_taken": len(progress["history"]),
            "avg_duration_seconds": (
                f"{sum(e['duration_seconds'] for e in progress['history']) / len(progress['history']):.1f}"
                if progress["history"]
                else "0"
            ),
        }

    def tip_of_the_day(self, user_id: str, day: date_type | None = None) -> dict:
        day = day or self.clock().date()
        key = f"{user_id}_{day.isoformat()}"
        with self._user_lock(user_id):
            existing = self.storage.get("tips", key)
            if existing is not None:
                return existing
            snapshot = self._progress_snapshot(user_id, day)
            digest = hashlib.sha256(
                json.dumps(snapshot, sort_keys=True).encode("utf-8")
            ).hexdigest()
            tip = {
                "user_id": user_id,
                "date": day.isoformat(),
                "text": self.pipeline.daily_tip_text(snapshot),
                "derived_from": digest,
            }
            self.storage.put("tips", key, tip)
            return tip
