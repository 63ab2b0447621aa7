"""Corpus data model, JSONL ingestion, BIO projection, folds, synthetic data.

All span offsets are unicode codepoints into the document text, half-open
[start, end). Corpora are plain lists of immutable AnnotatedDocument objects
and are safe to share across threads after loading.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from .errors import (
    CorpusFormatError,
    DuplicateDocumentId,
    GeneratorConfigError,
    SpanOutOfBounds,
    UnknownRiskLevel,
)
from .text import Token

BIO_TAGS = ("B", "I", "O")


class RiskLevel(str, Enum):
    """Four-level ordinal risk label; total order NONE < LOW < MEDIUM < HIGH."""

    NONE = "a"
    LOW = "b"
    MEDIUM = "c"
    HIGH = "d"

    @property
    def index(self) -> int:
        return "abcd".index(self.value)

    @classmethod
    def from_str(cls, value: str) -> "RiskLevel":
        try:
            return cls(value)
        except ValueError:
            raise UnknownRiskLevel(
                f"unknown risk level {value!r}; expected one of a, b, c, d"
            ) from None


RISK_LEVELS: tuple[RiskLevel, ...] = tuple(RiskLevel)


@dataclass(frozen=True)
class CharSpan:
    """Half-open codepoint span, optionally carrying a free-text category.

    The label is stored for provenance but never consumed by training: the
    tagging scheme is typeless.
    """

    start: int
    end: int
    label: str | None = None

    def __post_init__(self) -> None:
        if not (0 <= self.start < self.end):
            raise SpanOutOfBounds(
                f"invalid span [{self.start}, {self.end}): need 0 <= start < end"
            )

    def overlap(self, other: "CharSpan") -> int:
        return max(0, min(self.end, other.end) - max(self.start, other.start))


@dataclass(frozen=True)
class TokenSpan:
    """Inclusive token-index span."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if not (0 <= self.start <= self.end):
            raise ValueError(f"invalid token span ({self.start}, {self.end})")


@dataclass(frozen=True)
class AnnotatedDocument:
    """One post: text, risk label, and gold marker spans sorted by start."""

    id: str
    text: str
    risk: RiskLevel
    gold_spans: tuple[CharSpan, ...] = ()

    def __post_init__(self) -> None:
        if not self.id:
            raise CorpusFormatError("document id must be nonempty")
        if not self.text:
            raise CorpusFormatError(f"document {self.id!r}: text must be nonempty")
        for span in self.gold_spans:
            if span.end > len(self.text):
                raise SpanOutOfBounds(
                    f"document {self.id!r}: span [{span.start}, {span.end}) "
                    f"exceeds text length {len(self.text)}"
                )
        object.__setattr__(
            self,
            "gold_spans",
            tuple(sorted(self.gold_spans, key=lambda s: (s.start, s.end))),
        )


@dataclass(frozen=True)
class FoldAssignment:
    """Maps every document id to a fold index in [0, k)."""

    k: int
    assignment: dict[str, int]

    def fold_of(self, doc_id: str) -> int:
        return self.assignment[doc_id]

    def split(
        self, corpus: Sequence[AnnotatedDocument], fold: int
    ) -> tuple[list[AnnotatedDocument], list[AnnotatedDocument]]:
        """(train, held-out) documents for one fold, in corpus order."""
        train = [d for d in corpus if self.assignment[d.id] != fold]
        heldout = [d for d in corpus if self.assignment[d.id] == fold]
        return train, heldout


# --------------------------------------------------------------------------
# JSONL ingestion / serialization
# --------------------------------------------------------------------------


def _doc_from_obj(obj: object, where: str) -> AnnotatedDocument:
    if not isinstance(obj, dict):
        raise CorpusFormatError(f"{where}: expected a JSON object")
    for key in ("id", "text", "risk"):
        if key not in obj:
            raise CorpusFormatError(f"{where}: missing required key {key!r}")
    if not isinstance(obj["id"], str) or not isinstance(obj["text"], str):
        raise CorpusFormatError(f"{where}: id and text must be strings")
    risk = RiskLevel.from_str(obj["risk"])
    spans = []
    for i, raw in enumerate(obj.get("spans", [])):
        if not isinstance(raw, dict) or "start" not in raw or "end" not in raw:
            raise CorpusFormatError(f"{where}: span {i} must have start and end")
        spans.append(CharSpan(raw["start"], raw["end"], raw.get("label")))
    return AnnotatedDocument(obj["id"], obj["text"], risk, tuple(spans))


def load_corpus(path: str | Path) -> list[AnnotatedDocument]:
    """Read a JSONL corpus; errors name the offending line."""
    docs: list[AnnotatedDocument] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            where = f"{path}:{lineno}"
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(f"{where}: malformed JSON ({exc.msg})") from None
            try:
                doc = _doc_from_obj(obj, where)
            except CorpusFormatError as exc:
                if str(exc).startswith(where):
                    raise
                raise type(exc)(f"{where}: {exc}") from None
            if doc.id in seen:
                raise DuplicateDocumentId(f"{where}: duplicate id {doc.id!r}")
            seen.add(doc.id)
            docs.append(doc)
    return docs


def doc_to_json(doc: AnnotatedDocument) -> str:
    spans = []
    for s in doc.gold_spans:
        entry: dict[str, object] = {"start": s.start, "end": s.end}
        if s.label is not None:
            entry["label"] = s.label
        spans.append(entry)
    return json.dumps(
        {"id": doc.id, "text": doc.text, "risk": doc.risk.value, "spans": spans},
        ensure_ascii=False,
        separators=(",", ":"),
    )


def dumps_corpus(docs: Iterable[AnnotatedDocument]) -> str:
    return "".join(doc_to_json(d) + "\n" for d in docs)


def write_corpus(docs: Iterable[AnnotatedDocument], path: str | Path) -> None:
    Path(path).write_text(dumps_corpus(docs), encoding="utf-8")


# --------------------------------------------------------------------------
# Char spans -> BIO tags
# --------------------------------------------------------------------------


def merge_overlapping(spans: Sequence[CharSpan]) -> list[CharSpan]:
    """Merge strictly overlapping spans; touching spans stay distinct.

    BIO cannot encode overlap, so this runs before projection. Merged spans
    drop their labels when the sources disagree.
    """
    ordered = sorted(spans, key=lambda s: (s.start, s.end))
    merged: list[CharSpan] = []
    for span in ordered:
        if merged and span.start < merged[-1].end:
            prev = merged[-1]
            label = prev.label if prev.label == span.label else None
            merged[-1] = CharSpan(prev.start, max(prev.end, span.end), label)
        else:
            merged.append(span)
    return merged


def project_spans_to_bio(
    doc: AnnotatedDocument, tokens: Sequence[Token]
) -> tuple[str, ...]:
    """Tag each token B/I/O against the document's merged gold spans.

    A token counts as inside a span when they share at least one codepoint.
    The first overlapping token of a span gets B, the rest I; a later span
    overwrites the tag of a token it shares with an earlier one.
    """
    for tok in tokens:
        if tok.char_end > len(doc.text) or tok.char_start < 0:
            raise CorpusFormatError(
                f"document {doc.id!r}: token offsets [{tok.char_start}, "
                f"{tok.char_end}) outside text of length {len(doc.text)}"
            )
    tags = ["O"] * len(tokens)
    for span in merge_overlapping(doc.gold_spans):
        first = True
        for i, tok in enumerate(tokens):
            if tok.char_start < span.end and span.start < tok.char_end:
                tags[i] = "B" if first else "I"
                first = False
            elif not first:
                break  # tokens are sorted; the span cannot resume
    return tuple(tags)


# --------------------------------------------------------------------------
# Stratified k-fold
# --------------------------------------------------------------------------


def kfold_split(
    corpus: Sequence[AnnotatedDocument], k: int, seed: int
) -> FoldAssignment:
    """Deterministic stratified folds.

    Documents are grouped by risk level, shuffled within each group, and then
    dealt round-robin with a fold pointer that carries over between groups.
    That single rotation guarantees both constraints at once: per-class fold
    counts differ by at most 1, and total fold sizes differ by at most 1.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if len(corpus) < k:
        raise ValueError(f"corpus of {len(corpus)} documents is smaller than k={k}")
    rng = random.Random(seed)
    assignment: dict[str, int] = {}
    pointer = 0
    for level in RISK_LEVELS:
        ids = [d.id for d in corpus if d.risk is level]
        rng.shuffle(ids)
        for doc_id in ids:
            assignment[doc_id] = pointer % k
            pointer += 1
    if len(assignment) != len(corpus):
        raise DuplicateDocumentId("corpus ids are not unique")
    return FoldAssignment(k, assignment)


# --------------------------------------------------------------------------
# Synthetic corpus generator
# --------------------------------------------------------------------------

SEVERITIES = ("mild", "moderate", "severe")

SEVERITY_TO_RISK = {
    "mild": RiskLevel.LOW,
    "moderate": RiskLevel.MEDIUM,
    "severe": RiskLevel.HIGH,
}

DEFAULT_SEVERE = (
    "want to die",
    "kill myself",
    "end my life",
    "no reason to live",
    "better off dead",
    "suicidal thoughts",
)

DEFAULT_MODERATE = (
    "hopeless",
    "worthless",
    "empty inside",
    "cannot cope",
    "hurting myself",
    "give up on everything",
)

DEFAULT_MILD = (
    "feeling down",
    "stressed",
    "anxious",
    "exhausted",
    "overwhelmed",
    "lonely",
)

# Everyday vocabulary, kept disjoint from every word used by the default
# marker lexicons so that planted spans are the only marker evidence.
DEFAULT_FILLER = (
    "today", "i", "went", "for", "a", "walk", "and", "the", "weather", "was",
    "nice", "then", "made", "coffee", "with", "friends", "about", "work",
    "school", "played", "music", "watched", "movies", "read", "some", "books",
    "cooked", "dinner", "later", "talked", "family", "slept", "early",
    "morning", "sunny", "quiet", "plans", "weekend", "visited", "park", "new",
    "things", "started", "project", "garden", "busy", "day", "evening",
    "really", "pretty", "good", "we", "they", "she", "he", "it", "at", "in",
    "that", "this", "here", "there", "after", "before", "during", "lunch",
    "tea", "bus", "train", "city", "home", "room", "house", "door", "window",
    "table", "chair", "phone", "game", "team", "match", "show", "series",
    "song", "band", "art", "class", "teacher", "friend", "sister", "brother",
    "mother", "father", "dog", "cat", "bird", "tree", "river", "beach",
    "rain", "snow", "wind", "cloud", "star", "moon", "sun", "week", "month",
    "year", "minute", "hour", "time", "again", "always", "often", "sometimes",
    "never", "maybe", "soon", "late", "fast", "slow", "big", "small", "old",
    "young", "warm", "cold", "fresh", "clean", "long", "short", "first",
    "last", "next", "other", "every", "many", "few", "more", "most", "little",
    "bit", "lot", "around", "between", "under", "over", "near", "far", "into",
    "onto", "from", "of", "by", "as", "is", "are", "been", "have", "has",
    "had", "does", "did", "will", "would", "could", "should", "can", "might",
)


@dataclass(frozen=True)
class GenConfig:
    """Synthetic corpus shape: document count, lexicons, and class mix."""

    count: int
    class_mix: tuple[float, float, float, float] = (0.34, 0.26, 0.22, 0.18)
    mild: tuple[str, ...] = DEFAULT_MILD
    moderate: tuple[str, ...] = DEFAULT_MODERATE
    severe: tuple[str, ...] = DEFAULT_SEVERE
    filler: tuple[str, ...] = DEFAULT_FILLER
    sentences_per_doc: tuple[int, int] = (2, 4)
    words_per_sentence: tuple[int, int] = (6, 12)

    def lexicon(self, severity: str) -> tuple[str, ...]:
        return {"mild": self.mild, "moderate": self.moderate, "severe": self.severe}[
            severity
        ]


def risk_from_labels(spans: Sequence[CharSpan]) -> RiskLevel:
    """Pure labeling rule: the highest planted severity decides the risk."""
    best = RiskLevel.NONE
    for span in spans:
        level = SEVERITY_TO_RISK.get(span.label or "")
        if level is not None and level.index > best.index:
            best = level
    return best


def _marker_plan(risk: RiskLevel, rng: random.Random) -> list[str]:
    """Severities to plant for one document of the given risk level."""
    if risk is RiskLevel.NONE:
        return []
    if risk is RiskLevel.LOW:
        return ["mild"] * rng.randint(1, 2)
    if risk is RiskLevel.MEDIUM:
        return ["moderate"] * rng.randint(1, 2) + ["mild"] * rng.randint(0, 1)
    return (
        ["severe"] * rng.randint(1, 2)
        + ["moderate"] * rng.randint(0, 1)
        + ["mild"] * rng.randint(0, 1)
    )


def generate_synthetic(config: GenConfig, seed: int) -> list[AnnotatedDocument]:
    """Deterministic synthetic corpus with exactly-planted marker spans.

    The risk label is a pure function of the planted markers (none -> a,
    mild -> b, moderate -> c, severe -> d, highest severity wins) and every
    gold span covers one planted phrase exactly.
    """
    if config.count < 0:
        raise GeneratorConfigError(f"count must be >= 0, got {config.count}")
    if len(config.class_mix) != 4 or any(w < 0 for w in config.class_mix):
        raise GeneratorConfigError("class_mix must be 4 nonnegative weights")
    if sum(config.class_mix) <= 0:
        raise GeneratorConfigError("class_mix weights sum to zero")
    if not config.filler:
        raise GeneratorConfigError("filler vocabulary is empty")
    for level, severity in ((1, "mild"), (2, "moderate"), (3, "severe")):
        if config.class_mix[level] > 0 and not config.lexicon(severity):
            raise GeneratorConfigError(
                f"class mix requests {severity} markers but that lexicon is empty"
            )

    rng = random.Random(seed)
    docs: list[AnnotatedDocument] = []
    for idx in range(config.count):
        risk = rng.choices(RISK_LEVELS, weights=config.class_mix)[0]
        # Sentences start as filler word lists; markers are inserted as
        # atomic items so phrases never interleave.
        n_sent = rng.randint(*config.sentences_per_doc)
        sentences: list[list[tuple[str, str | None]]] = [
            [
                (w, None)
                for w in rng.choices(config.filler, k=rng.randint(*config.words_per_sentence))
            ]
            for _ in range(n_sent)
        ]
        for severity in _marker_plan(risk, rng):
            phrase = rng.choice(config.lexicon(severity))
            sent = sentences[rng.randrange(n_sent)]
            sent.insert(rng.randint(0, len(sent)), (phrase, severity))

        pieces: list[str] = []
        spans: list[CharSpan] = []
        cursor = 0
        for si, sent in enumerate(sentences):
            for wi, (piece, severity) in enumerate(sent):
                if si or wi:
                    pieces.append(" ")
                    cursor += 1
                if severity is not None:
                    spans.append(CharSpan(cursor, cursor + len(piece), severity))
                pieces.append(piece)
                cursor += len(piece)
            pieces.append(".")
            cursor += 1
        docs.append(
            AnnotatedDocument(f"syn{idx:05d}", "".join(pieces), risk, tuple(spans))
        )
    return docs
