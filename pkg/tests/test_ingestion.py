import json
import random
import string

import pytest
from hypothesis import given
from hypothesis import strategies as st

from codelearn.errors import DuplicateTag, ParseError
from codelearn.ingestion import (
    ChunkingConfig,
    chunk_text,
    ingest_intents,
    ingest_questions,
    parse_intents_file,
    parse_question_file,
)
from codelearn.vectorstore import VectorIndex

from conftest import DIM, INTENT_FIXTURES, make_question_records, write_intents_file, write_question_file


# --- reference oracle for chunk boundaries ---

def oracle_segments(n, size, overlap):
    """Slice arithmetic computed independently of chunk_text."""
    if n == 0:
        return []
    bounds = [(0, min(size, n))]
    stride = size - overlap
    start = stride
    while bounds[-1][1] < n:
        bounds.append((start, min(start + size, n)))
        start += stride
    return bounds


def test_chunk_short_text_single_segment():
    text = "x" * 50
    assert chunk_text(text, ChunkingConfig(512, 64)) == [text]


def test_chunk_empty_text():
    assert chunk_text("", ChunkingConfig(512, 64)) == []


def test_chunk_derived_boundaries():
    text = "".join(random.Random(0).choice(string.ascii_letters) for _ in range(1000))
    segments = chunk_text(text, ChunkingConfig(512, 64))
    assert oracle_segments(1000, 512, 64) == [(0, 512), (448, 960), (896, 1000)]
    assert segments == [text[a:b] for a, b in [(0, 512), (448, 960), (896, 1000)]]


def test_chunk_exact_fit():
    text = "a" * 512
    assert chunk_text(text, ChunkingConfig(512, 64)) == [text]


def test_chunking_config_validation():
    with pytest.raises(ValueError):
        ChunkingConfig(chunk_size=0)
    with pytest.raises(ValueError):
        ChunkingConfig(chunk_size=10, overlap=10)
    with pytest.raises(ValueError):
        ChunkingConfig(chunk_size=10, overlap=-1)


@given(
    st.text(min_size=0, max_size=3000),
    st.integers(min_value=2, max_value=600),
    st.data(),
)
def test_chunk_round_trip_and_bounds(text, size, data):
    overlap = data.draw(st.integers(min_value=0, max_value=size - 1))
    cfg = ChunkingConfig(size, overlap)
    segments = chunk_text(text, cfg)
    assert all(len(s) <= size for s in segments)
    if not text:
        assert segments == []
        return
    rebuilt = segments[0] + "".join(s[overlap:] for s in segments[1:])
    assert rebuilt == text
    for prev, cur in zip(segments, segments[1:]):
        assert prev[-overlap:] == cur[:overlap] if overlap else True


def test_chunk_segments_match_oracle_boundaries():
    rng = random.Random(5)
    for _ in range(100):
        n = rng.randint(0, 2000)
        size = rng.randint(2, 700)
        overlap = rng.randint(0, size - 1)
        text = "".join(rng.choice(string.printable) for _ in range(n))
        segments = chunk_text(text, ChunkingConfig(size, overlap))
        assert segments == [text[a:b] for a, b in oracle_segments(n, size, overlap)]


# --- question corpus ---

def test_ingest_questions_fixture(tmp_path, index, provider):
    path = write_question_file(tmp_path / "q.jsonl", make_question_records(n=3))
    catalog = {}
    assert ingest_questions(path, index, provider, catalog) == 3
    assert len(index) == 3
    assert set(catalog) == {"q0", "q1", "q2"}
    chunk = index.get(1)
    assert chunk.metadata["kind"] == "question"
    assert chunk.metadata["topic"] == "loops"
    # canonical serialization carries the full pedagogical content
    assert "loops | beginner |" in chunk.text
    assert "Because of how loops works" in chunk.text


def test_ingest_empty_file(tmp_path, index, provider):
    path = tmp_path / "q.jsonl"
    path.write_text("")
    assert ingest_questions(path, index, provider) == 0


def test_three_options_is_parse_error_with_line(tmp_path):
    records = make_question_records(n=2)
    records[1]["options"] = records[1]["options"][:3]
    path = write_question_file(tmp_path / "q.jsonl", records)
    with pytest.raises(ParseError) as err:
        parse_question_file(path)
    assert err.value.line == 2
    assert "line 2" in str(err.value)


def test_bad_json_line_number(tmp_path):
    path = tmp_path / "q.jsonl"
    path.write_text(json.dumps(make_question_records(n=1)[0]) + "\n{broken\n")
    with pytest.raises(ParseError) as err:
        parse_question_file(path)
    assert err.value.line == 2


@pytest.mark.parametrize(
    "mutate",
    [
        lambda r: r.update(correct_index=5),
        lambda r: r.update(stem=""),
        lambda r: r.update(explanation=""),
        lambda r: r.update(difficulty="impossible"),
        lambda r: r.pop("topic"),
        lambda r: r.update(options=["same"] * 4),
    ],
)
def test_invalid_records_rejected(tmp_path, mutate):
    record = make_question_records(n=1)[0]
    mutate(record)
    path = write_question_file(tmp_path / "q.jsonl", [record])
    with pytest.raises(ParseError):
        parse_question_file(path)


def test_all_or_nothing_ingestion(tmp_path, index, provider):
    records = make_question_records(n=3)
    records[2]["correct_index"] = 9
    path = write_question_file(tmp_path / "q.jsonl", records)
    with pytest.raises(ParseError):
        ingest_questions(path, index, provider)
    assert len(index) == 0


def test_duplicate_question_id_rejected(tmp_path):
    records = make_question_records(n=2)
    records[1]["id"] = records[0]["id"]
    path = write_question_file(tmp_path / "q.jsonl", records)
    with pytest.raises(ParseError):
        parse_question_file(path)


def test_ingestion_determinism(tmp_path, provider):
    path = write_question_file(tmp_path / "q.jsonl", make_question_records(n=5))
    runs = []
    for _ in range(2):
        index = VectorIndex(dimension=DIM)
        ingest_questions(path, index, provider)
        runs.append([(index.get(c).text, index.get(c).metadata) for c in index.chunk_ids()])
    assert runs[0] == runs[1]


# --- intents corpus ---

def test_ingest_intents_counts_patterns(tmp_path, index, provider):
    path = write_intents_file(tmp_path / "intents.json", INTENT_FIXTURES[:2])
    knowledge = {}
    assert ingest_intents(path, index, provider, knowledge) == 4
    assert len(index) == 4
    assert knowledge["anxiety"] == INTENT_FIXTURES[0]["responses"]
    tags = {index.get(c).metadata["tag"] for c in index.chunk_ids()}
    assert tags == {"anxiety", "greeting"}


def test_empty_intents_list(tmp_path, index, provider):
    path = tmp_path / "intents.json"
    path.write_text("[]")
    assert ingest_intents(path, index, provider) == 0


def test_intent_empty_responses_rejected(tmp_path):
    path = tmp_path / "intents.json"
    path.write_text(json.dumps([{"tag": "a", "patterns": ["hi"], "responses": []}]))
    with pytest.raises(ParseError):
        parse_intents_file(path)


def test_duplicate_tag_rejected(tmp_path):
    intents = [INTENT_FIXTURES[0], dict(INTENT_FIXTURES[0])]
    path = write_intents_file(tmp_path / "intents.json", intents)
    with pytest.raises(DuplicateTag):
        parse_intents_file(path)


def test_intents_wrapper_object_accepted(tmp_path):
    path = tmp_path / "intents.json"
    path.write_text(json.dumps({"intents": INTENT_FIXTURES}))
    records = parse_intents_file(path)
    assert [r.tag for r in records] == ["anxiety", "greeting", "stuck"]
