"""Corpus ingestion: parse question/intents files, chunk text, populate the index.

Two file formats are consumed:

* question corpus -- UTF-8 JSON Lines, one record per line with fields
  ``id, topic, difficulty, stem, options (exactly 4), correct_index, explanation``
* intents corpus -- a single UTF-8 JSON document holding a list of
  ``{tag, patterns, responses}`` objects (a top-level ``{"intents": [...]}``
  wrapper is also accepted)

Ingestion is all-or-nothing per file: every record is parsed and validated
before anything is embedded or inserted, so a bad line never leaves a
partially ingested corpus behind.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import MutableMapping

from .errors import DuplicateTag, IoFailure, ParseError
from .models import ChunkKind, Difficulty
from .vectorstore import Chunk, VectorIndex


@dataclass(frozen=True)
class ChunkingConfig:
    chunk_size: int = 512  # characters
    overlap: int = 64

    def __post_init__(self):
        if self.chunk_size <= 0:
            raise ValueError("chunk_size must be positive")
        if not 0 <= self.overlap < self.chunk_size:
            raise ValueError("overlap must be non-negative and < chunk_size")


def chunk_text(text: str, cfg: ChunkingConfig = ChunkingConfig()) -> list[str]:
    """Split text into overlapping segments.

    Consecutive segments share exactly ``cfg.overlap`` characters; dropping
    each segment's leading overlap and concatenating reconstructs the input.
    """
    if not text:
        return []
    stride = cfg.chunk_size - cfg.overlap
    segments = []
    start = 0
    while True:
        segments.append(text[start:start + cfg.chunk_size])
        if start + cfg.chunk_size >= len(text):
            return segments
        start += stride


@dataclass(frozen=True)
class QuestionRecord:
    id: str
    topic: str
    difficulty: Difficulty
    stem: str
    options: tuple[str, str, str, str]
    correct_index: int
    explanation: str

    def canonical_text(self) -> str:
        """Serialization embedded for retrieval: full pedagogical content."""
        return " | ".join(
            [
                self.topic,
                self.difficulty.value,
                self.stem,
                " ; ".join(self.options),
                self.explanation,
            ]
        )

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "topic": self.topic,
            "difficulty": self.difficulty.value,
            "stem": self.stem,
            "options": list(self.options),
            "correct_index": self.correct_index,
            "explanation": self.explanation,
        }

    @classmethod
    def from_dict(cls, obj: dict, line: int | None = None) -> "QuestionRecord":
        try:
            options = obj["options"]
            if not isinstance(options, list) or len(options) != 4:
                raise ParseError("options must be a list of exactly 4 strings", line)
            if len(set(options)) != 4:
                raise ParseError("options must be distinct", line)
            correct_index = obj["correct_index"]
            if not isinstance(correct_index, int) or not 0 <= correct_index <= 3:
                raise ParseError("correct_index must be an integer in 0..3", line)
            stem = obj["stem"]
            explanation = obj["explanation"]
            if not stem or not explanation:
                raise ParseError("stem and explanation must be non-empty", line)
            return cls(
                id=str(obj["id"]),
                topic=str(obj["topic"]),
                difficulty=Difficulty.parse(obj["difficulty"]),
                stem=stem,
                options=tuple(str(o) for o in options),
                correct_index=correct_index,
                explanation=explanation,
            )
        except KeyError as exc:
            raise ParseError(f"missing field {exc.args[0]!r}", line) from None
        except ValueError as exc:
            raise ParseError(str(exc), line) from None


@dataclass(frozen=True)
class IntentRecord:
    tag: str
    patterns: tuple[str, ...]
    responses: tuple[str, ...]


def parse_question_file(path: str | Path) -> list[QuestionRecord]:
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    records = []
    seen_ids: set[str] = set()
    for lineno, raw in enumerate(lines, start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", lineno) from None
        record = QuestionRecord.from_dict(obj, line=lineno)
        if record.id in seen_ids:
            raise ParseError(f"duplicate question id {record.id!r}", lineno)
        seen_ids.add(record.id)
        records.append(record)
    return records


def parse_intents_file(path: str | Path) -> list[IntentRecord]:
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}") from None
    if isinstance(doc, dict) and "intents" in doc:
        doc = doc["intents"]
    if not isinstance(doc, list):
        raise ParseError("intents document must be a list of objects")
    records = []
    seen_tags: set[str] = set()
    for i, obj in enumerate(doc):
        if not isinstance(obj, dict):
            raise ParseError(f"intent #{i} is not an object")
        try:
            tag = str(obj["tag"])
            patterns = obj["patterns"]
            responses = obj["responses"]
        except KeyError as exc:
            raise ParseError(f"intent #{i} missing field {exc.args[0]!r}") from None
        if not patterns or not all(isinstance(p, str) and p for p in patterns):
            raise ParseError(f"intent {tag!r}: patterns must be non-empty strings")
        if not responses or not all(isinstance(r, str) and r for r in responses):
            raise ParseError(f"intent {tag!r}: responses must be non-empty strings")
        if tag in seen_tags:
            raise DuplicateTag(f"duplicate intent tag {tag!r}")
        seen_tags.add(tag)
        records.append(IntentRecord(tag=tag, patterns=tuple(patterns), responses=tuple(responses)))
    return records


def ingest_questions(
    path: str | Path,
    store: VectorIndex,
    embedder,
    catalog: MutableMapping[str, dict] | None = None,
) -> int:
    """Embed and insert one chunk per question record; returns records ingested.

    When ``catalog`` is given, the full record is stored there under its id
    (static quizzes and the explain endpoint read from it).
    """
    records = parse_question_file(path)
    if not records:
        return 0
    texts = [r.canonical_text() for r in records]
    vectors = embedder.embed(texts)
    for record, text, vector in zip(records, texts, vectors):
        store.insert(
            Chunk(
                source_id=str(path),
                text=text,
                metadata={
                    "topic": record.topic,
                    "difficulty": record.difficulty.value,
                    "kind": ChunkKind.QUESTION.value,
                    "question_id": record.id,
                },
                embedding=vector,
            )
        )
        if catalog is not None:
            catalog[record.id] = record.to_dict()
    return len(records)


def ingest_intents(
    path: str | Path,
    store: VectorIndex,
    embedder,
    knowledge: MutableMapping[str, list[str]] | None = None,
) -> int:
    """Embed one chunk per (tag, pattern) pair; returns the pattern count.

    Responses are not embedded; they go into the ``knowledge`` table keyed by
    tag, where the chat pipeline looks them up after retrieval.
    """
    records = parse_intents_file(path)
    pairs = [(r, p) for r in records for p in r.patterns]
    if pairs:
        vectors = embedder.embed([p for _, p in pairs])
        for (record, pattern), vector in zip(pairs, vectors):
            store.insert(
                Chunk(
                    source_id=str(path),
                    text=pattern,
                    metadata={
                        "topic": record.tag,
                        "kind": ChunkKind.CONVERSATION.value,
                        "tag": record.tag,
                    },
                    embedding=vector,
                )
            )
    if knowledge is not None:
        for record in records:
            knowledge[record.tag] = list(record.responses)
    return len(pairs)
