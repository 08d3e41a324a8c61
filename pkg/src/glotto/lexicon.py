"""Word-list ingestion: parsing, validation and orthographic normalization.

File format: UTF-8, one record per line, three TAB-separated columns
``language_tag``, ``meaning_id``, ``word``. Lines starting with ``#`` are
comments and blank lines are skipped. CRLF is accepted on input; output
always uses LF.
"""

from __future__ import annotations

import io
import unicodedata
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Callable, Iterable, Mapping, TextIO

DEFAULT_M_CATALOG = 200


class CorpusError(ValueError):
    """Base class for word-list errors."""


class ParseError(CorpusError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MeaningRangeError(ParseError):
    pass


class DuplicateEntryError(ParseError):
    def __init__(self, language: str, meaning: int, line: int | None = None):
        self.language = language
        self.meaning = meaning
        super().__init__(f"duplicate entry for language {language!r}, meaning {meaning}", line)


class EmptyWordError(CorpusError):
    pass


class CharacterError(CorpusError):
    def __init__(self, char: str, word: str):
        self.char = char
        name = unicodedata.name(char, f"U+{ord(char):04X}")
        super().__init__(f"disallowed character {char!r} ({name}) in {word!r}")


def _is_letter_or_mark(ch: str) -> bool:
    return unicodedata.category(ch)[0] in "LM"


@dataclass(frozen=True)
class NormalizationPolicy:
    """How raw orthography is turned into a :class:`Word`.

    ``allowed`` decides character membership after case folding; ``extra``
    lists punctuation accepted on top of it. ``unicode_form`` is applied
    before anything else (``None`` disables it).
    """

    name: str = "default"
    allowed: Callable[[str], bool] = _is_letter_or_mark
    extra: frozenset[str] = frozenset("'-")
    unicode_form: str | None = "NFC"

    def accepts(self, ch: str) -> bool:
        return ch in self.extra or self.allowed(ch)


DEFAULT_POLICY = NormalizationPolicy()

POLICIES: dict[str, NormalizationPolicy] = {
    "default": DEFAULT_POLICY,
    "letters": NormalizationPolicy(
        name="letters",
        allowed=lambda ch: unicodedata.category(ch)[0] == "L",
        extra=frozenset(),
    ),
    "raw": NormalizationPolicy(
        name="raw",
        allowed=lambda ch: not ch.isspace() and unicodedata.category(ch)[0] != "C",
        extra=frozenset(),
        unicode_form=None,
    ),
}


def get_policy(name: str) -> NormalizationPolicy:
    try:
        return POLICIES[name]
    except KeyError:
        raise ValueError(f"unknown normalization policy {name!r}; choose from {sorted(POLICIES)}") from None


def _fold_char(ch: str) -> str:
    # Simple (1:1) case folding: multi-character full foldings such as
    # 'ß' -> 'ss' are skipped so the word length never changes.
    folded = ch.casefold()
    if len(folded) == 1:
        return folded
    lowered = ch.lower()
    return lowered if len(lowered) == 1 else ch


def simple_casefold(text: str) -> str:
    out = text
    while True:
        nxt = "".join(_fold_char(ch) for ch in out)
        if nxt == out:
            return out
        out = nxt


def normalize_word(raw: str, policy: NormalizationPolicy = DEFAULT_POLICY) -> str:
    """Trim, normalize and case-fold ``raw``; reject anything the policy disallows.

    >>> normalize_word("Rano ")
    'rano'
    """
    word = raw.strip()
    if not word:
        raise EmptyWordError(f"empty word: {raw!r}")
    if policy.unicode_form:
        word = unicodedata.normalize(policy.unicode_form, word)
    word = simple_casefold(word)
    for ch in word:
        if ch.isspace() or ch == "\t" or not policy.accepts(ch):
            raise CharacterError(ch, raw)
    return word


@dataclass(frozen=True)
class Lexicon:
    language_tag: str
    entries: Mapping[int, str] = field(default_factory=dict)

    def __post_init__(self):
        if not isinstance(self.entries, MappingProxyType):
            ordered = dict(sorted(self.entries.items()))
            object.__setattr__(self, "entries", MappingProxyType(ordered))

    def __len__(self) -> int:
        return len(self.entries)

    def meanings(self) -> frozenset[int]:
        return frozenset(self.entries)

    def __eq__(self, other):
        if not isinstance(other, Lexicon):
            return NotImplemented
        return self.language_tag == other.language_tag and dict(self.entries) == dict(other.entries)

    def __hash__(self):
        return hash((self.language_tag, tuple(self.entries.items())))


@dataclass(frozen=True)
class Corpus:
    lexicons: tuple[Lexicon, ...]
    m_catalog: int = DEFAULT_M_CATALOG

    def __post_init__(self):
        object.__setattr__(self, "lexicons", tuple(self.lexicons))
        if self.m_catalog < 1:
            raise ValueError("m_catalog must be >= 1")
        seen = set()
        for lex in self.lexicons:
            if lex.language_tag in seen:
                raise CorpusError(f"language tag {lex.language_tag!r} appears twice")
            seen.add(lex.language_tag)
            for mid in lex.entries:
                if not 1 <= mid <= self.m_catalog:
                    raise MeaningRangeError(
                        f"meaning id {mid} for {lex.language_tag!r} outside [1, {self.m_catalog}]"
                    )

    @property
    def labels(self) -> list[str]:
        return [lex.language_tag for lex in self.lexicons]

    def __len__(self) -> int:
        return len(self.lexicons)

    def __getitem__(self, tag: str) -> Lexicon:
        for lex in self.lexicons:
            if lex.language_tag == tag:
                return lex
        raise KeyError(tag)

    def __contains__(self, tag: object) -> bool:
        return any(lex.language_tag == tag for lex in self.lexicons)


def _check_tag(tag: str, line: int) -> str:
    if not tag or any(ch.isspace() for ch in tag):
        raise ParseError(f"invalid language tag {tag!r}", line)
    return tag


def parse_corpus(
    stream: TextIO | Iterable[str] | str,
    m_catalog: int = DEFAULT_M_CATALOG,
    policy: NormalizationPolicy = DEFAULT_POLICY,
) -> Corpus:
    """Parse a word-list stream into a :class:`Corpus`.

    Lexicons keep the order in which their tags first appear.
    """
    if m_catalog < 1:
        raise ValueError("m_catalog must be >= 1")
    if isinstance(stream, str):
        stream = io.StringIO(stream)

    tables: dict[str, dict[int, str]] = {}
    for lineno, line in enumerate(stream, start=1):
        line = line.rstrip("\n").rstrip("\r")
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 3:
            raise ParseError(f"expected 3 tab-separated columns, got {len(cols)}", lineno)
        tag, mid_text, raw = cols
        tag = _check_tag(tag, lineno)
        try:
            mid = int(mid_text)
        except ValueError:
            raise ParseError(f"meaning id {mid_text!r} is not an integer", lineno) from None
        if not 1 <= mid <= m_catalog:
            raise MeaningRangeError(f"meaning id {mid} outside [1, {m_catalog}]", lineno)
        try:
            word = normalize_word(raw, policy)
        except CorpusError as exc:
            raise ParseError(str(exc), lineno) from exc
        entries = tables.setdefault(tag, {})
        if mid in entries:
            raise DuplicateEntryError(tag, mid, lineno)
        entries[mid] = word

    return Corpus(tuple(Lexicon(tag, entries) for tag, entries in tables.items()), m_catalog)


def read_corpus(path, m_catalog: int = DEFAULT_M_CATALOG, policy: NormalizationPolicy = DEFAULT_POLICY) -> Corpus:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_corpus(fh, m_catalog, policy)


def format_corpus(corpus: Corpus) -> str:
    lines = []
    for lex in corpus.lexicons:
        for mid, word in lex.entries.items():
            lines.append(f"{lex.language_tag}\t{mid}\t{word}\n")
    return "".join(lines)


def write_corpus(corpus: Corpus, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_corpus(corpus))
