"""Rewards for reasoning-formatted chemical answers.

The format reward demands exactly one reasoning block followed by one
non-empty answer block and nothing after it.  The accuracy reward
canonicalizes every SMILES component before comparison, so any valid
rendering of the right molecule scores full marks.  Both rewards are
total: malformed input scores 0 with a diagnostic, never an exception.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .canon import write_canonical
from .mol import SmilesError, parse_smiles

TASK_KINDS = ("smiles", "choice", "exact_text")


@dataclass(frozen=True)
class RewardConfig:
    think_open: str = "<think>"
    think_close: str = "</think>"
    answer_open: str = "<answer>"
    answer_close: str = "</answer>"
    format_weight: float = 1.0
    accuracy_weight: float = 1.0

    @classmethod
    def from_file(cls, path):
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        weights = raw.pop("weights", {})
        return cls(**raw,
                   format_weight=weights.get("format", 1.0),
                   accuracy_weight=weights.get("accuracy", 1.0))


@dataclass
class RewardResult:
    format_score: float
    accuracy_score: float
    total: float
    diagnostics: list = field(default_factory=list)

    def to_dict(self):
        return {"format_score": self.format_score,
                "accuracy_score": self.accuracy_score,
                "total": self.total,
                "diagnostics": list(self.diagnostics)}


def _extract_blocks(response, config):
    """(think, answer) contents if the response is exactly one reasoning
    block then one answer block with only whitespace around them."""
    if response is None:
        return None
    text = response
    for tag in (config.think_open, config.think_close,
                config.answer_open, config.answer_close):
        if text.count(tag) != 1:
            return None
    to = text.find(config.think_open)
    tc = text.find(config.think_close)
    ao = text.find(config.answer_open)
    ac = text.find(config.answer_close)
    if not (to < tc < ao < ac):
        return None
    if text[:to].strip():
        return None
    between = text[tc + len(config.think_close):ao]
    if between.strip():
        return None
    if text[ac + len(config.answer_close):].strip():
        return None
    think = text[to + len(config.think_open):tc]
    answer = text[ao + len(config.answer_open):ac]
    if not answer.strip():
        return None
    return think, answer.strip()


def format_reward(response: str, config: RewardConfig | None = None) -> float:
    """1 for a strictly well-formed reasoning response, else 0."""
    config = config or RewardConfig()
    return 1.0 if _extract_blocks(response, config) is not None else 0.0


def _canonical_components(text, diagnostics, label):
    parts = [p for p in text.strip().split(".") if p]
    out = []
    for part in parts:
        try:
            out.append(write_canonical(parse_smiles(part)))
        except SmilesError as exc:
            diagnostics.append(f"{label}: cannot parse {part!r}: {exc}")
            return None
    return sorted(out)


def accuracy_reward(answer: str, gold: str, task_kind: str,
                    diagnostics: list | None = None) -> float:
    """1 for a correct answer under the task kind's comparison, else 0.

    smiles: canonical multiset equality over dot-separated components;
    choice: case-insensitive option-letter match; exact_text:
    whitespace-normalized equality.
    """
    if task_kind not in TASK_KINDS:
        raise ValueError(f"unknown task kind {task_kind!r}; expected one "
                         f"of {TASK_KINDS}")
    if not gold or not gold.strip():
        raise ValueError("gold answer must be non-empty")
    diags = diagnostics if diagnostics is not None else []
    if answer is None or not answer.strip():
        diags.append("empty answer")
        return 0.0
    if task_kind == "smiles":
        gold_parts = _canonical_components(gold, diags, "gold")
        if gold_parts is None:
            raise ValueError(f"gold SMILES does not parse: {gold!r}")
        answer_parts = _canonical_components(answer, diags, "answer")
        if answer_parts is None:
            return 0.0
        if answer_parts == gold_parts:
            return 1.0
        diags.append("canonical forms differ")
        return 0.0
    if task_kind == "choice":
        norm = (lambda s: s.strip().strip("().:").upper())
        if norm(answer) == norm(gold):
            return 1.0
        diags.append("choice letters differ")
        return 0.0
    if " ".join(answer.split()) == " ".join(gold.split()):
        return 1.0
    diags.append("text differs")
    return 0.0


def combined_reward(response: str, gold: str, task_kind: str,
                    config: RewardConfig | None = None) -> RewardResult:
    """Format plus accuracy rewards over a full reasoning response."""
    config = config or RewardConfig()
    diagnostics = []
    blocks = _extract_blocks(response, config)
    if blocks is None:
        diagnostics.append("malformed reasoning format")
        format_score, accuracy_score = 0.0, 0.0
    else:
        format_score = 1.0
        accuracy_score = accuracy_reward(blocks[1], gold, task_kind,
                                         diagnostics)
    total = (config.format_weight * format_score
             + config.accuracy_weight * accuracy_score)
    return RewardResult(format_score=format_score,
                        accuracy_score=accuracy_score,
                        total=total, diagnostics=diagnostics)
