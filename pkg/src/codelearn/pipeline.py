"""Retrieve-then-generate flows: dynamic questions, chat, quotes, roadmap plans."""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from typing import Mapping

from . import prompts
from .errors import (
    EmptyMessage,
    GenerationUnparseable,
    NoExemplars,
    ProviderUnavailable,
)
from .models import ChunkKind, Difficulty
from .providers import GenerationRequest
from .vectorstore import MetadataFilter, VectorIndex

GROUNDING_THRESHOLD = 0.35
QUESTION_EXEMPLARS = 4
CHAT_EXEMPLARS = 3
HISTORY_WINDOW = 6
PASS_THRESHOLD = 0.7

FALLBACK_TEMPLATES = [
    "It sounds like you're going through a rough patch. Be kind to yourself; "
    "learning to code is hard for everyone at first. If these feelings persist, "
    "please consider talking to a mental health professional.",
    "I'm not certain I understood that, but I want you to know that struggling "
    "is a normal part of learning. Take a break, breathe, and come back when "
    "you're ready. A counselor or professional can help if things feel heavy.",
    "I may not have the right answer for that, but you are not alone in finding "
    "this difficult. One small step today is enough. If you need more support, "
    "reaching out to a professional is a sign of strength.",
]


@dataclass
class QuestionItem:
    id: str
    topic: str
    difficulty: Difficulty
    stem: str
    options: tuple[str, str, str, str]
    correct_index: int
    explanation: str
    origin: str  # static | dynamic
    provenance: tuple[int, ...] = ()  # exemplar chunk_ids for dynamic items

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "topic": self.topic,
            "difficulty": self.difficulty.value,
            "stem": self.stem,
            "options": list(self.options),
            "correct_index": self.correct_index,
            "explanation": self.explanation,
            "origin": self.origin,
            "provenance": list(self.provenance),
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "QuestionItem":
        return cls(
            id=obj["id"],
            topic=obj["topic"],
            difficulty=Difficulty.parse(obj["difficulty"]),
            stem=obj["stem"],
            options=tuple(obj["options"]),
            correct_index=obj["correct_index"],
            explanation=obj["explanation"],
            origin=obj.get("origin", "static"),
            provenance=tuple(obj.get("provenance", ())),
        )


@dataclass(frozen=True)
class ChatReply:
    text: str
    source_tags: tuple[str, ...]
    grounded: bool


_QUESTION_BLOCK = re.compile(
    r"Q\s*:\s*(?P<stem>.+?)\s*\n"
    r"\s*A[\)\.]\s*(?P<a>.+?)\s*\n"
    r"\s*B[\)\.]\s*(?P<b>.+?)\s*\n"
    r"\s*C[\)\.]\s*(?P<c>.+?)\s*\n"
    r"\s*D[\)\.]\s*(?P<d>.+?)\s*\n"
    r"\s*ANSWER\s*:\s*(?P<answer>[A-D])\s*\n"
    r"\s*EXPLANATION\s*:\s*(?P<explanation>.+?)(?=\n\s*\d+\s*[\.\)]\s*\n|\n\s*Q\s*:|\Z)",
    re.IGNORECASE | re.DOTALL,
)

_MILESTONE_BLOCK = re.compile(
    r"MILESTONE\s*:\s*(?P<title>.+?)\s*\n"
    r"\s*WEEKS\s*:\s*(?P<start>\d+)\s*-\s*(?P<end>\d+)\s*\n"
    r"\s*TOPICS\s*:\s*(?P<topics>.+?)\s*\n"
    r"\s*LESSONS\s*:\s*(?P<lessons>.+?)(?=\n\s*MILESTONE\s*:|\Z)",
    re.IGNORECASE | re.DOTALL,
)

# built-in worked example for roadmap prompts; keeps the few-shot scaffold
# non-empty even when no lesson corpus has been ingested
_ROADMAP_EXEMPLAR = (
    "MILESTONE: Stage 1: getting started\n"
    "WEEKS: 1-2\n"
    "TOPICS: variables, operators\n"
    "LESSONS: Learn variables; Practice operator drills"
)


def parse_question_blocks(text: str) -> list[dict]:
    """Parse the numbered Q/A)-D)/ANSWER/EXPLANATION grammar; whitespace-tolerant."""
    items = []
    for m in _QUESTION_BLOCK.finditer(text):
        options = (m["a"].strip(), m["b"].strip(), m["c"].strip(), m["d"].strip())
        if len(set(options)) != 4:
            continue
        items.append(
            {
                "stem": m["stem"].strip(),
                "options": options,
                "correct_index": "ABCD".index(m["answer"].upper()),
                "explanation": m["explanation"].strip(),
            }
        )
    return items


def parse_milestone_blocks(text: str) -> list[dict]:
    plans = []
    for m in _MILESTONE_BLOCK.finditer(text):
        plans.append(
            {
                "title": m["title"].strip(),
                "start_week": int(m["start"]),
                "end_week": int(m["end"]),
                "topics": [t.strip() for t in m["topics"].split(",") if t.strip()],
                "lessons": [l.strip() for l in m["lessons"].split(";") if l.strip()],
            }
        )
    return plans


def escalate_difficulty(requested: Difficulty, mastered: Difficulty | None) -> Difficulty:
    """Dynamic questions sit one level above what the learner has mastered.

    Never below the requested difficulty, capped at advanced.
    """
    bumped = mastered.escalated() if mastered is not None else Difficulty.BEGINNER
    return max(requested, bumped, key=lambda d: d.level)


class RagPipeline:
    """Stateless orchestration over a vector index and a provider.

    ``knowledge`` maps intent tags to their response lists (populated by
    intents ingestion). ``call_capture``, when set, receives every rendered
    prompt sent to the provider -- the test-only hook behind the grounding
    containment checks.
    """

    def __init__(
        self,
        index: VectorIndex,
        provider,
        knowledge: Mapping[str, list[str]] | None = None,
        *,
        question_k: int = QUESTION_EXEMPLARS,
        chat_k: int = CHAT_EXEMPLARS,
        grounding_threshold: float = GROUNDING_THRESHOLD,
        history_window: int = HISTORY_WINDOW,
        call_capture: list | None = None,
    ):
        self.index = index
        self.provider = provider
        self.knowledge = knowledge or {}
        self.question_k = question_k
        self.chat_k = chat_k
        self.grounding_threshold = grounding_threshold
        self.history_window = history_window
        self.call_capture = call_capture

    def _complete(self, prompt: str, temperature: float) -> str:
        if self.call_capture is not None:
            self.call_capture.append(prompt)
        return self.provider.complete(
            GenerationRequest(prompt=prompt, temperature=temperature)
        ).text

    # --- dynamic question generation ---

    def _retrieve_exemplars(self, topic: str, difficulty: Difficulty):
        query = self.provider.embed([f"{topic} {difficulty.value} quiz question"])[0]
        filters = [
            MetadataFilter(topic=topic, difficulty=difficulty.value, kind=ChunkKind.QUESTION.value),
            MetadataFilter(topic=topic, kind=ChunkKind.QUESTION.value),
            MetadataFilter(kind=ChunkKind.QUESTION.value),
        ]
        # accumulate across relaxation levels until k exemplars are collected
        collected = []
        seen: set[int] = set()
        for flt in filters:
            for hit in self.index.knn_search(query, k=self.question_k, filter=flt):
                if hit.chunk_id not in seen:
                    seen.add(hit.chunk_id)
                    collected.append(hit)
            if len(collected) >= self.question_k:
                return collected[: self.question_k]
        return collected

    def generate_dynamic_questions(
        self,
        topic: str,
        difficulty: Difficulty,
        count: int,
        mastered: Difficulty | None = None,
    ) -> list[QuestionItem]:
        if count < 0:
            raise ValueError("count must be >= 0")
        if count == 0:
            return []
        effective = escalate_difficulty(difficulty, mastered)
        hits = self._retrieve_exemplars(topic, effective)
        if not hits:
            raise NoExemplars(f"no question chunks retrievable for topic {topic!r}")
        exemplars = [self.index.get(h.chunk_id).text for h in hits]
        provenance = tuple(h.chunk_id for h in hits)
        bundle = prompts.assemble_prompt(
            "questions",
            exemplars,
            {"topic": topic, "difficulty": effective.value, "count": count},
        )
        parsed: list[dict] = []
        for attempt in range(2):
            # nudge the retry so a deterministic provider can produce new output
            prompt = bundle.rendered if attempt == 0 else bundle.rendered + "\n\nRETRY: 1"
            parsed = parse_question_blocks(self._complete(prompt, temperature=0.0))
            if len(parsed) >= count:
                break
        if len(parsed) < count:
            raise GenerationUnparseable(
                f"provider yielded {len(parsed)} well-formed questions, wanted {count}"
            )
        batch = hashlib.blake2b(bundle.rendered.encode("utf-8"), digest_size=6).hexdigest()
        return [
            QuestionItem(
                id=f"dyn-{batch}-{i}",
                topic=topic,
                difficulty=effective,
                stem=block["stem"],
                options=block["options"],
                correct_index=block["correct_index"],
                explanation=block["explanation"],
                origin="dynamic",
                provenance=provenance,
            )
            for i, block in enumerate(parsed[:count], start=1)
        ]

    def explain_question(self, item: QuestionItem) -> str:
        if item.origin == "static":
            return item.explanation
        if item.explanation:
            return item.explanation
        # dynamic item whose explanation was lost: regenerate
        prompt = "\n".join(
            [
                prompts.QUESTIONS_HEADER,
                "",
                "### REQUEST",
                f"topic: {item.topic}",
                f"difficulty: {item.difficulty.value}",
                "count: 1",
                f"explain: {item.stem}",
            ]
        )
        text = self._complete(prompt, temperature=0.0)
        blocks = parse_question_blocks(text)
        return blocks[0]["explanation"] if blocks else text

    # --- chatbot ---

    def chat_reply(self, message: str, history: list[dict] | None = None) -> ChatReply:
        if not message or not message.strip():
            raise EmptyMessage("chat message must be non-empty")
        query = self.provider.embed([message])[0]
        hits = self.index.knn_search(
            query, k=self.chat_k, filter=MetadataFilter(kind=ChunkKind.CONVERSATION.value)
        )
        if not hits or hits[0].score < self.grounding_threshold:
            idx = int(hashlib.blake2b(message.encode("utf-8"), digest_size=4).hexdigest(), 16)
            return ChatReply(
                text=FALLBACK_TEMPLATES[idx % len(FALLBACK_TEMPLATES)],
                source_tags=(),
                grounded=False,
            )
        tags: list[str] = []
        for hit in hits:
            tag = self.index.get(hit.chunk_id).metadata.get("tag", "")
            if tag and tag not in tags:
                tags.append(tag)
        exemplars = []
        for tag in tags:
            for response in self.knowledge.get(tag, []):
                exemplars.append(response)
        if not exemplars:
            exemplars = [self.index.get(h.chunk_id).text for h in hits]
        recent = (history or [])[-self.history_window:]
        params = {
            "message": message,
            "history": " || ".join(f"{t.get('role', 'user')}: {t.get('text', '')}" for t in recent),
        }
        bundle = prompts.assemble_prompt("chat", exemplars, params)
        text = self._complete(bundle.rendered, temperature=0.0)
        return ChatReply(text=text, source_tags=tuple(tags), grounded=True)

    # --- post-quiz quotes ---

    def quiz_feedback_quote(self, score_fraction: float) -> tuple[str, str]:
        if not 0.0 <= score_fraction <= 1.0:
            raise ValueError("score_fraction must be in [0, 1]")
        category = "congratulatory" if score_fraction >= PASS_THRESHOLD else "encouraging"
        try:
            text = self._complete(prompts.quote_prompt(category), temperature=0.7)
        except ProviderUnavailable:
            builtin = {
                "congratulatory": "Fantastic work; your persistence is paying off!",
                "encouraging": "Every attempt teaches you something; keep at it and the results will follow.",
            }
            text = builtin[category]
        return category, text

    # --- roadmap proposal (validation and fallback live in the domain layer) ---

    def propose_roadmap(self, timeline_weeks: int, topics: list[str], language: str) -> list[dict]:
        bundle = prompts.assemble_prompt(
            "roadmap",
            [_ROADMAP_EXEMPLAR],
            {"timeline_weeks": timeline_weeks, "topics": topics, "language": language},
        )
        return parse_milestone_blocks(self._complete(bundle.rendered, temperature=0.0))

    # --- daily tip ---

    def daily_tip_text(self, snapshot: dict) -> str:
        bundle = prompts.assemble_prompt("tip", [], snapshot)
        try:
            return self._complete(bundle.rendered, temperature=0.7)
        except ProviderUnavailable:
            return (
                "Show up for ten focused minutes today; small consistent steps "
                "beat occasional marathons."
            )
