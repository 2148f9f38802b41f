"""Text-generation and embedding backends.

Two implementations share one interface: a deterministic mock that makes the
whole platform testable offline, and an HTTP client for a real model server.
The mock recognizes the platform's own prompt directives (see prompts.py) and
emits schema-valid content derived from a stable hash of the prompt, so every
downstream parser sees 100% well-formed output with zero network dependency.
"""

from __future__ import annotations

import hashlib
import os
import re
import time
from dataclasses import dataclass

import numpy as np

from . import prompts
from .errors import EmptyText, ProviderUnavailable

DEFAULT_EMBED_DIM = 64


@dataclass(frozen=True)
class GenerationRequest:
    prompt: str
    max_output_length: int = 4096
    temperature: float = 0.0
    stop_markers: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.prompt:
            raise ValueError("prompt must be non-empty")
        if self.max_output_length <= 0:
            raise ValueError("max_output_length must be positive")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")


@dataclass(frozen=True)
class Completion:
    text: str
    truncated: bool = False


@dataclass(frozen=True)
class ProviderConfig:
    kind: str = "mock"  # mock | http
    base_url: str = ""
    api_key: str = ""
    model_name: str = ""
    embed_dimension: int = DEFAULT_EMBED_DIM

    def __post_init__(self):
        if self.kind not in ("mock", "http"):
            raise ValueError(f"unknown provider kind: {self.kind!r}")
        if self.kind == "http" and (not self.base_url or not self.model_name):
            raise ValueError("http provider requires base_url and model_name")
        if self.embed_dimension <= 0:
            raise ValueError("embed_dimension must be positive")

    @classmethod
    def from_env(cls, env=os.environ) -> "ProviderConfig":
        return cls(
            kind=env.get("LLM_PROVIDER", "mock"),
            base_url=env.get("LLM_BASE_URL", ""),
            api_key=env.get("LLM_API_KEY", ""),
            model_name=env.get("LLM_MODEL", ""),
            embed_dimension=int(env.get("EMBED_DIM", DEFAULT_EMBED_DIM)),
        )


def _stable_hash(text: str) -> int:
    """64-bit hash stable across processes (unlike builtin hash())."""
    return int.from_bytes(hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest(), "little")


_TOKEN_RE = re.compile(r"[a-z0-9]+")


def _request_params(prompt: str) -> dict[str, str]:
    """Pull key/value lines out of the prompt's ### REQUEST section."""
    params: dict[str, str] = {}
    in_request = False
    for line in prompt.splitlines():
        if line.strip() == "### REQUEST":
            in_request = True
            continue
        if in_request:
            if line.startswith("###"):
                break
            if ":" in line:
                key, _, value = line.partition(":")
                params[key.strip()] = value.strip()
    return params


def _first_exemplar(prompt: str) -> str:
    match = re.search(r"\[EXAMPLE 1\]\n(.*?)(?=\n\[EXAMPLE \d+\]|\n### |\Z)", prompt, re.DOTALL)
    return match.group(1).strip() if match else ""


_GENERAL_TIPS = [
    "Block out twenty distraction-free minutes today and solve one small problem end to end.",
    "Re-read a solution you wrote last week and note one thing you would simplify now.",
    "Explain today's concept out loud in your own words before moving on.",
    "Celebrate finishing a quiz, whatever the score; showing up is the habit that compounds.",
    "Sketch the problem on paper before touching the keyboard.",
]

_STRUGGLING_TIPS = [
    "Slow down and revisit one fundamental today; mastery of basics makes hard topics click.",
    "A tough streak means you are working at the edge of your ability; shrink the next exercise and rebuild momentum.",
    "Take a short walk, breathe slowly, and come back to one question at a time.",
    "Drop the difficulty one notch for a day; confidence is a skill you can train too.",
    "Write down what confused you most; naming the blocker is half of removing it.",
]

_CONGRATULATORY = [
    "Outstanding work! Every line of code you master today builds the developer you become tomorrow.",
    "Brilliant result! Keep riding this momentum into the next challenge.",
    "You earned this score through steady effort; be proud and aim one step higher.",
]

_ENCOURAGING = [
    "Every expert was once a beginner who refused to quit; this quiz was practice, not a verdict.",
    "Setbacks are data, not defeat. Review one missed question and you are already improving.",
    "Progress in coding is measured in attempts, and you just made one more than yesterday.",
]

FALLBACK_SENTENCE = (
    "You're doing better than you think; keep going one small step at a time."
)


class MockProvider:
    """Pure-function provider: byte-identical inputs give byte-identical outputs."""

    kind = "mock"

    def __init__(self, embed_dimension: int = DEFAULT_EMBED_DIM):
        if embed_dimension <= 0:
            raise ValueError("embed_dimension must be positive")
        self.embed_dimension = embed_dimension

    # --- embedding: bag-of-tokens hashed into d buckets, L2-normalized ---

    def embed(self, texts: list[str]) -> list[np.ndarray]:
        vectors = []
        for text in texts:
            if not text:
                raise EmptyText("cannot embed an empty text")
            counts = np.zeros(self.embed_dimension, dtype=np.float64)
            tokens = _TOKEN_RE.findall(text.lower())
            if not tokens:
                # no alphanumeric content: fall back to hashing the raw text
                tokens = [text]
            for token in tokens:
                counts[_stable_hash(token) % self.embed_dimension] += 1.0
            vectors.append(counts / np.linalg.norm(counts))
        return vectors

    # --- generation: grammar-aware templating keyed on directive headers ---

    def complete(self, req: GenerationRequest) -> Completion:
        prompt = req.prompt
        if prompts.QUESTIONS_HEADER in prompt:
            text = self._questions(prompt)
        elif prompts.CHAT_HEADER in prompt:
            text = self._chat(prompt)
        elif prompts.ROADMAP_HEADER in prompt:
            text = self._roadmap(prompt)
        elif prompts.TIP_HEADER in prompt:
            text = self._tip(prompt)
        elif prompts.QUOTE_HEADER in prompt:
            text = self._quote(prompt)
        else:
            text = FALLBACK_SENTENCE
        truncated = False
        for marker in req.stop_markers:
            pos = text.find(marker)
            if pos != -1:
                text = text[:pos]
        if len(text) > req.max_output_length:
            text = text[: req.max_output_length]
            truncated = True
        return Completion(text=text, truncated=truncated)

    def _questions(self, prompt: str) -> str:
        params = _request_params(prompt)
        topic = params.get("topic", "programming")
        difficulty = params.get("difficulty", "beginner")
        count = int(params.get("count", "1"))
        blocks = []
        for i in range(1, count + 1):
            h = _stable_hash(f"{prompt}#{i}")
            answer = "ABCD"[h % 4]
            variant = f"{h % 10000:04d}"
            options = [
                f"{letter}) A statement about {topic} focusing on aspect {letter.lower()}{variant}"
                for letter in "ABCD"
            ]
            blocks.append(
                "\n".join(
                    [
                        f"{i}.",
                        f"Q: Which statement about {topic} holds at the {difficulty} level? (variant {variant})",
                        *options,
                        f"ANSWER: {answer}",
                        f"EXPLANATION: Step by step: recall what {topic} means, test each option "
                        f"against that definition, and only option {answer} survives the check "
                        f"(variant {variant}).",
                    ]
                )
            )
        return "\n".join(blocks)

    def _chat(self, prompt: str) -> str:
        snippet = _first_exemplar(prompt)
        if snippet:
            first_line = snippet.splitlines()[0][:200]
            return (
                f"I hear you, and what you're feeling is more common than you think. {first_line} "
                "Take it one small step at a time; you don't have to solve everything today."
            )
        return FALLBACK_SENTENCE

    def _roadmap(self, prompt: str) -> str:
        params = _request_params(prompt)
        weeks = int(params.get("timeline_weeks", "1"))
        topics = [t.strip() for t in params.get("topics", "").split(",") if t.strip()]
        language = params.get("language", "python")
        if not topics:
            topics = ["fundamentals"]
        m = min(len(topics), weeks)
        blocks = []
        for i in range(m):
            group = topics[i * len(topics) // m : (i + 1) * len(topics) // m]
            start = i * weeks // m + 1
            end = (i + 1) * weeks // m
            lessons = "; ".join(f"Learn {t} in {language}; Practice {t} exercises" for t in group)
            blocks.append(
                "\n".join(
                    [
                        f"MILESTONE: Stage {i + 1}: {group[0]}",
                        f"WEEKS: {start}-{end}",
                        f"TOPICS: {', '.join(group)}",
                        f"LESSONS: {lessons}",
                    ]
                )
            )
        return "\n".join(blocks)

    def _tip(self, prompt: str) -> str:
        pool = _STRUGGLING_TIPS if "progress_state: struggling" in prompt else _GENERAL_TIPS
        return pool[_stable_hash(prompt) % len(pool)]

    def _quote(self, prompt: str) -> str:
        params = _request_params(prompt)
        pool = _CONGRATULATORY if params.get("category") == "congratulatory" else _ENCOURAGING
        return pool[_stable_hash(prompt) % len(pool)]


class HttpProvider:
    """Client for a chat-completions-style HTTP model server.

    Wire format: POST {base_url}/generate with {model, messages, temperature,
    max_tokens} returning {"text": ...} (an OpenAI-style {"choices": [...]}
    body is also accepted); POST {base_url}/embed with {model, input} returning
    {"embeddings": [[...], ...]}. One retry with backoff, then
    ProviderUnavailable. Embeddings are L2-normalized on receipt.
    """

    kind = "http"

    def __init__(self, config: ProviderConfig, max_in_flight: int = 4, retry_delay: float = 0.5):
        import threading

        import httpx

        self.config = config
        self.embed_dimension = config.embed_dimension
        self._retry_delay = retry_delay
        self._semaphore = threading.BoundedSemaphore(max_in_flight)
        headers = {}
        if config.api_key:
            headers["Authorization"] = f"Bearer {config.api_key}"
        self._client = httpx.Client(
            base_url=config.base_url.rstrip("/"), headers=headers, timeout=30.0
        )

    def _post(self, path: str, payload: dict) -> dict:
        import httpx

        last_error: Exception | None = None
        for attempt in range(2):
            if attempt:
                time.sleep(self._retry_delay * attempt)
            try:
                with self._semaphore:
                    response = self._client.post(path, json=payload)
                if response.status_code >= 500:
                    last_error = ProviderUnavailable(f"server error {response.status_code}")
                    continue
                if response.status_code >= 400:
                    raise ProviderUnavailable(
                        f"provider rejected request: {response.status_code} {response.text[:200]}"
                    )
                return response.json()
            except (httpx.HTTPError, ValueError) as exc:
                last_error = exc
        raise ProviderUnavailable(f"provider unreachable: {last_error}")

    def complete(self, req: GenerationRequest) -> Completion:
        data = self._post(
            "/generate",
            {
                "model": self.config.model_name,
                "messages": [{"role": "user", "content": req.prompt}],
                "temperature": req.temperature,
                "max_tokens": req.max_output_length,
            },
        )
        if "text" in data:
            text = data["text"]
        elif "choices" in data and data["choices"]:
            text = data["choices"][0].get("message", {}).get("content", "")
        else:
            raise ProviderUnavailable("provider returned no generated text")
        if not text:
            raise ProviderUnavailable("provider returned empty text")
        return Completion(text=text, truncated=bool(data.get("truncated", False)))

    def embed(self, texts: list[str]) -> list[np.ndarray]:
        for text in texts:
            if not text:
                raise EmptyText("cannot embed an empty text")
        data = self._post("/embed", {"model": self.config.model_name, "input": texts})
        raw = data.get("embeddings")
        if not isinstance(raw, list) or len(raw) != len(texts):
            raise ProviderUnavailable("provider returned malformed embeddings")
        vectors = []
        for values in raw:
            arr = np.asarray(values, dtype=np.float64)
            norm = np.linalg.norm(arr)
            if arr.ndim != 1 or arr.size != self.embed_dimension or norm == 0:
                raise ProviderUnavailable("provider returned a degenerate embedding")
            vectors.append(arr / norm)
        return vectors


def make_provider(config: ProviderConfig):
    if config.kind == "mock":
        return MockProvider(embed_dimension=config.embed_dimension)
    return HttpProvider(config)
