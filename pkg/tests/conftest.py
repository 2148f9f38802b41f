import json
import random
from datetime import datetime

import pytest

from codelearn.pipeline import RagPipeline
from codelearn.providers import MockProvider
from codelearn.storage import FileStorage
from codelearn.vectorstore import Chunk, VectorIndex

DIM = 64


@pytest.fixture
def provider():
    return MockProvider(embed_dimension=DIM)


@pytest.fixture
def index():
    return VectorIndex(dimension=DIM)


@pytest.fixture
def storage(tmp_path):
    return FileStorage(tmp_path / "data")


def make_question_records(topic="loops", difficulty="beginner", n=6, prefix="q"):
    return [
        {
            "id": f"{prefix}{i}",
            "topic": topic,
            "difficulty": difficulty,
            "stem": f"What does {topic} question {i} ask?",
            "options": [f"option {j} for {topic} {i}" for j in range(4)],
            "correct_index": i % 4,
            "explanation": f"Because of how {topic} works, see case {i}.",
        }
        for i in range(n)
    ]


def write_question_file(path, records):
    path.write_text("\n".join(json.dumps(r) for r in records), encoding="utf-8")
    return path


INTENT_FIXTURES = [
    {
        "tag": "anxiety",
        "patterns": ["I feel anxious about coding", "coding makes me nervous"],
        "responses": ["Take a deep breath; feeling anxious while learning is normal."],
    },
    {
        "tag": "greeting",
        "patterns": ["hello there", "hi bot"],
        "responses": ["Hello! How can I support your learning today?"],
    },
    {
        "tag": "stuck",
        "patterns": ["I am stuck on this exercise", "cannot solve this problem"],
        "responses": ["Being stuck means you are learning; try breaking the problem down."],
    },
]


def write_intents_file(path, intents=INTENT_FIXTURES):
    path.write_text(json.dumps(intents), encoding="utf-8")
    return path


def seed_questions(index, provider, records, catalog=None):
    texts = [
        " | ".join(
            [r["topic"], r["difficulty"], r["stem"], " ; ".join(r["options"]), r["explanation"]]
        )
        for r in records
    ]
    for record, text, vec in zip(records, texts, provider.embed(texts)):
        index.insert(
            Chunk(
                source_id="seed",
                text=text,
                metadata={
                    "topic": record["topic"],
                    "difficulty": record["difficulty"],
                    "kind": "question",
                    "question_id": record["id"],
                },
                embedding=vec,
            )
        )
        if catalog is not None:
            catalog[record["id"]] = dict(record)


def seed_intents(index, provider, intents=INTENT_FIXTURES, knowledge=None):
    pairs = [(it, p) for it in intents for p in it["patterns"]]
    for (it, pattern), vec in zip(pairs, provider.embed([p for _, p in pairs])):
        index.insert(
            Chunk(
                source_id="seed",
                text=pattern,
                metadata={"topic": it["tag"], "kind": "conversation", "tag": it["tag"]},
                embedding=vec,
            )
        )
    if knowledge is not None:
        for it in intents:
            knowledge[it["tag"]] = list(it["responses"])


@pytest.fixture
def seeded_pipeline(index, provider):
    """Pipeline over a small question + intents corpus, with call capture."""
    knowledge = {}
    seed_questions(index, provider, make_question_records())
    seed_intents(index, provider, knowledge=knowledge)
    capture = []
    pipeline = RagPipeline(index, provider, knowledge, call_capture=capture)
    pipeline.captured_prompts = capture
    return pipeline


class FrozenClock:
    def __init__(self, start="2026-08-01T12:00:00+00:00"):
        self.now = datetime.fromisoformat(start)

    def __call__(self):
        return self.now

    def advance(self, **kwargs):
        from datetime import timedelta

        self.now += timedelta(**kwargs)


@pytest.fixture
def clock():
    return FrozenClock()


@pytest.fixture
def rng():
    return random.Random(1234)
