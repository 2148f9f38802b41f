"""Enums and small value types shared across modules."""

from __future__ import annotations

import enum


class Difficulty(str, enum.Enum):
    BEGINNER = "beginner"
    INTERMEDIATE = "intermediate"
    ADVANCED = "advanced"

    @property
    def level(self) -> int:
        return _ORDER.index(self)

    def escalated(self) -> "Difficulty":
        """One level up, capped at advanced."""
        return _ORDER[min(self.level + 1, len(_ORDER) - 1)]

    @classmethod
    def parse(cls, value: str) -> "Difficulty":
        try:
            return cls(value.strip().lower())
        except ValueError:
            raise ValueError(f"unknown difficulty: {value!r}") from None


_ORDER = [Difficulty.BEGINNER, Difficulty.INTERMEDIATE, Difficulty.ADVANCED]


class ChunkKind(str, enum.Enum):
    QUESTION = "question"
    CONVERSATION = "conversation"
    LESSON = "lesson"
