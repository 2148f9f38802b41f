"""Prompt assembly: directive headers, few-shot exemplars, step-by-step scaffold.

The directive headers and output grammars below are the contract between the
pipeline and any text-generation backend. The deterministic mock provider
recognizes the same headers, so the grammars documented here are exactly what
both sides speak.
"""

from __future__ import annotations

from dataclasses import dataclass

QUESTIONS_HEADER = "### TASK: GENERATE QUIZ QUESTIONS"
CHAT_HEADER = "### TASK: SUPPORTIVE CHAT REPLY"
ROADMAP_HEADER = "### TASK: BUILD LEARNING ROADMAP"
TIP_HEADER = "### TASK: DAILY MOTIVATIONAL TIP"
QUOTE_HEADER = "### TASK: POST-QUIZ QUOTE"

HEADERS = {
    "questions": QUESTIONS_HEADER,
    "chat": CHAT_HEADER,
    "roadmap": ROADMAP_HEADER,
    "tip": TIP_HEADER,
}

_STEPS = {
    "questions": [
        "Read each example question carefully and note its structure.",
        "Identify what makes a question appropriate for the requested topic and difficulty.",
        "Draft each new question step by step: stem first, then four distinct options, then the answer.",
        "Write an explanation that walks through the reasoning one step at a time.",
    ],
    "chat": [
        "Read the knowledge snippets and the recent conversation turns.",
        "Identify which snippet addresses the learner's message most directly.",
        "Compose a warm, supportive reply grounded only in the snippets.",
    ],
    "roadmap": [
        "Review the example plan to see how milestones are laid out.",
        "Order the requested topics from foundational to advanced.",
        "Assign each topic to exactly one milestone and give every milestone a consecutive week range.",
        "List two or three concrete lessons per milestone.",
    ],
    "tip": [
        "Review the learner's progress snapshot.",
        "Pick one habit or mindset that would help them most today.",
        "Phrase it as a single encouraging, actionable tip.",
    ],
}

_OUTPUT_FORMATS = {
    "questions": (
        "For each question emit exactly this block, numbered sequentially:\n"
        "N.\n"
        "Q: <question stem>\n"
        "A) <option>\n"
        "B) <option>\n"
        "C) <option>\n"
        "D) <option>\n"
        "ANSWER: <A|B|C|D>\n"
        "EXPLANATION: <step-by-step reasoning>"
    ),
    "chat": "Reply with plain supportive prose, no markup.",
    "roadmap": (
        "For each milestone emit exactly this block:\n"
        "MILESTONE: <title>\n"
        "WEEKS: <start>-<end>\n"
        "TOPICS: <comma-separated topics>\n"
        "LESSONS: <semicolon-separated lesson titles>"
    ),
    "tip": "Reply with a single motivational tip sentence.",
}


@dataclass(frozen=True)
class PromptBundle:
    directive_header: str
    exemplars: tuple[str, ...]
    request_parameters: dict
    rendered: str


def assemble_prompt(kind: str, exemplars: list[str], params: dict) -> PromptBundle:
    """Render a prompt: header once, every exemplar verbatim, CoT step block.

    Deterministic for fixed inputs. Exemplars may be empty only for tips;
    callers enforce that (question generation surfaces NoExemplars upstream).
    """
    if kind not in HEADERS:
        raise ValueError(f"unknown prompt kind: {kind!r}")
    header = HEADERS[kind]
    lines = [header, "", "Think step by step:"]
    lines += [f"{i}. {step}" for i, step in enumerate(_STEPS[kind], start=1)]
    if exemplars:
        lines += ["", "### EXAMPLES"]
        for i, text in enumerate(exemplars, start=1):
            lines += [f"[EXAMPLE {i}]", text]
    lines += ["", "### REQUEST"]
    for key, value in params.items():
        if isinstance(value, (list, tuple)):
            value = ", ".join(str(v) for v in value)
        lines.append(f"{key}: {value}")
    lines += ["", "### OUTPUT FORMAT", _OUTPUT_FORMATS[kind]]
    return PromptBundle(
        directive_header=header,
        exemplars=tuple(exemplars),
        request_parameters=dict(params),
        rendered="\n".join(lines),
    )


def quote_prompt(category: str) -> str:
    """Small ad-hoc prompt for the post-quiz quote; not a few-shot kind."""
    return "\n".join(
        [
            QUOTE_HEADER,
            "",
            "### REQUEST",
            f"category: {category}",
            "",
            "### OUTPUT FORMAT",
            "Reply with a single short quote matching the category.",
        ]
    )
