"""Deterministic tokenization, vocabulary construction, and n-gram extraction.

All offsets are unicode codepoint positions into the original text. Token
surfaces are lowercased, but offsets always address the untouched input so
span arithmetic stays exact.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

#: Joins the tokens of an n-gram. U+241F (symbol for unit separator) cannot
#: appear inside a token because it is neither alphanumeric nor produced as a
#: standalone token by any corpus we accept as n-gram input.
NGRAM_SEP = "␟"

UNK = "<unk>"
UNK_ID = 0


@dataclass(frozen=True)
class Token:
    """One token: lowercased surface plus codepoint offsets into the text."""

    surface: str
    char_start: int
    char_end: int


def tokenize(text: str) -> list[Token]:
    """Split text into tokens with exact char offsets.

    Rule: maximal runs of alphanumeric codepoints form one token; every other
    non-whitespace codepoint is a single-character token. Deterministic, no
    configuration.
    """
    tokens: list[Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isalnum():
            j = i + 1
            while j < n and text[j].isalnum():
                j += 1
        else:
            j = i + 1
        tokens.append(Token(text[i:j].lower(), i, j))
        i = j
    return tokens


@dataclass
class Vocab:
    """Term -> contiguous integer id map with a reserved unknown id.

    Id 0 is always the unknown token; real terms occupy 1..len(terms).
    Construction is deterministic: terms are ordered by descending corpus
    frequency, ties broken lexicographically.
    """

    term_to_id: dict[str, int]
    min_count: int
    id_to_term: dict[int, str] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.id_to_term = {i: t for t, i in self.term_to_id.items()}
        self.id_to_term[UNK_ID] = UNK

    def __len__(self) -> int:
        return len(self.term_to_id) + 1  # + UNK

    def id_of(self, term: str) -> int:
        return self.term_to_id.get(term, UNK_ID)

    def terms_in_id_order(self) -> list[str]:
        """Real terms ordered by id (excludes the implicit UNK slot)."""
        return [self.id_to_term[i] for i in range(1, len(self))]

    @classmethod
    def from_terms(cls, terms: Iterable[str], min_count: int = 1) -> "Vocab":
        """Rebuild a vocab from an id-ordered term list (model file loading)."""
        return cls({t: i + 1 for i, t in enumerate(terms)}, min_count)


def build_vocab(corpus, min_count: int = 1) -> Vocab:
    """Collect every token surface with frequency >= min_count.

    ``corpus`` is any iterable of objects with a ``text`` attribute
    (AnnotatedDocument) or plain strings.
    """
    if min_count < 1:
        raise ValueError(f"min_count must be >= 1, got {min_count}")
    counts: Counter[str] = Counter()
    for doc in corpus:
        text = doc if isinstance(doc, str) else doc.text
        counts.update(tok.surface for tok in tokenize(text))
    kept = [t for t, c in counts.items() if c >= min_count]
    kept.sort(key=lambda t: (-counts[t], t))
    return Vocab({t: i + 1 for i, t in enumerate(kept)}, min_count)


def extract_ngrams(
    tokens: list[Token] | list[str], n_min: int = 2, n_max: int = 4
) -> list[str]:
    """Contiguous token n-grams for every n in [n_min, n_max].

    Returns the multiset as a list (duplicates preserved); n-gram strings are
    the token surfaces joined with NGRAM_SEP.
    """
    if n_min > n_max:
        raise ValueError(f"n_min {n_min} > n_max {n_max}")
    surfaces = [t if isinstance(t, str) else t.surface for t in tokens]
    grams: list[str] = []
    for n in range(n_min, n_max + 1):
        grams.extend(
            NGRAM_SEP.join(surfaces[i : i + n])
            for i in range(len(surfaces) - n + 1)
        )
    return grams
