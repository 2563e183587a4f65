"""Annotated corpus model, segmentation, and JSON-lines ingestion."""

from __future__ import annotations

import datetime as dt
import enum
import json
import logging
import re
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

log = logging.getLogger(__name__)


class Lang(str, enum.Enum):
    LU = "LU"
    DE = "DE"
    FR = "FR"
    EN = "EN"
    OTHER = "OTHER"
    NEUTRAL = "NEUTRAL"


class LoanLabel(str, enum.Enum):
    NATIVE = "NATIVE"
    FR_LOAN = "FR_LOAN"
    DE_LOAN = "DE_LOAN"
    EN_LOAN = "EN_LOAN"
    UNSET = "UNSET"


class MixingRole(str, enum.Enum):
    MATRIX = "MATRIX"
    BORROWING = "BORROWING"
    CODE_SWITCH = "CODE_SWITCH"
    AMBIGUOUS = "AMBIGUOUS"
    NEUTRAL = "NEUTRAL"
    UNSET = "UNSET"


class GateDecision(str, enum.Enum):
    PROCESS = "PROCESS"
    ROUTE_OTHER = "ROUTE_OTHER"


class CorpusFormat(str, enum.Enum):
    JSONL = "jsonl"


LANGUAGES = (Lang.LU, Lang.DE, Lang.FR, Lang.EN)
LOAN_BY_DONOR = {"FR": LoanLabel.FR_LOAN, "DE": LoanLabel.DE_LOAN, "EN": LoanLabel.EN_LOAN}
DONOR_BY_LOAN = {v: k for k, v in LOAN_BY_DONOR.items()}

MIN_DATE = dt.date(1990, 1, 1)
MAX_DATE = dt.date(2100, 12, 31)


@dataclass(slots=True)
class Token:
    surface: str
    start: int
    end: int
    lang: Lang = Lang.OTHER
    normalized: str = ""
    loan_label: LoanLabel = LoanLabel.UNSET
    mixing_role: MixingRole = MixingRole.UNSET
    matched_pattern: str | None = None

    @property
    def char_span(self) -> tuple[int, int]:
        return (self.start, self.end)

    @property
    def is_neutral(self) -> bool:
        return self.lang is Lang.NEUTRAL


@dataclass(slots=True)
class Sentence:
    text: str
    tokens: list[Token]
    sent_lang: Lang = Lang.OTHER
    posterior: float = 0.0
    gate_decision: GateDecision = GateDecision.ROUTE_OTHER

    def word_count(self) -> int:
        return sum(1 for t in self.tokens if t.lang is not Lang.NEUTRAL)


@dataclass(slots=True)
class Document:
    id: str
    date: dt.date
    section: str
    sentences: list[Sentence] = field(default_factory=list)

    @property
    def token_count(self) -> int:
        return sum(len(s.tokens) for s in self.sentences)

    def tokens(self) -> Iterator[Token]:
        for s in self.sentences:
            yield from s.tokens


# --- segmentation -----------------------------------------------------------

_WEB = r"""
    (?P<url>(?:https?://|www\.)\S*[^\s.,;:!?)\]»"'’])
    |(?P<email>[\w.+-]+@[\w-]+(?:\.[\w-]+)+)
    |"""
_PLAIN = r"""
    (?P<clitic>(?<!\w)[^\W\d_]{1,2}['’](?=[^\W\d_]))
    |(?P<number>\d+(?:[.,:/]\d+)*(?![\w]))
    |(?P<word>\w+(?:[-'’]\w+)*)
    |(?P<sym>\S)
    """
_TOKEN_RE = re.compile(_WEB + _PLAIN, re.VERBOSE)
# same grammar without the URL/e-mail branches, for text that cannot contain them
_PLAIN_RE = re.compile(_PLAIN, re.VERBOSE)

# closing quotes may follow the stop directly or after a (French-style) space
_BOUNDARY_RE = re.compile(r"[.!?]+(?:\s?[\"»”’')\]])*\s+")
_OPENERS = "\"'«“„‘(["

ABBREVIATIONS = frozenset(
    """
    z.b bzw asw etc ca vgl dr prof mr mrs ms mme mlle st nr no art abs
    jan feb febr mäe apr aug sept okt oct nov dez dec u.a. z.t resp evtl
    min max inkl incl ggf gegr sog m.a.w
    """.split()
)


def is_neutral_form(surface: str) -> bool:
    return all(unicodedata.category(ch)[0] in "PSN" for ch in surface)


def tokenize(text: str) -> list[Token]:
    """Split ``text`` into tokens with character offsets.

    Clitics such as ``d'`` and ``l'`` are split off; hyphenated compounds stay
    whole.  Punctuation, symbols, numbers, URLs and e-mail addresses are tagged
    NEUTRAL.
    """
    out = []
    web = "@" in text or "://" in text or "www." in text
    for m in (_TOKEN_RE if web else _PLAIN_RE).finditer(text):
        kind = m.lastgroup
        surface = m.group()
        neutral = kind in ("url", "email", "number") or (
            kind in ("sym", "word") and not surface.isalpha() and is_neutral_form(surface)
        )
        if neutral:
            out.append(Token(surface, m.start(), m.end(), Lang.NEUTRAL, surface,
                             LoanLabel.UNSET, MixingRole.NEUTRAL))
        else:
            out.append(Token(surface, m.start(), m.end(), normalized=surface))
    return out


_LAST_WORD_RE = re.compile(r"(\S+)$")


def _is_abbreviation(text: str, dot_at: int) -> bool:
    head = text[max(0, dot_at - 64):dot_at]
    m = _LAST_WORD_RE.search(head)
    if not m:
        return False
    word = m.group(1).lstrip(_OPENERS).casefold()
    if len(word) == 1 and word.isalpha():
        return True
    # day-of-month ordinals ("3. Juni"); four-digit years still end sentences
    if len(word) <= 2 and word.isdigit():
        return True
    return word in ABBREVIATIONS or word.rstrip(".") in ABBREVIATIONS


def split_sentences(text: str) -> list[str]:
    """Split on ``.!?`` followed by whitespace and an upper-case (or quoted) start."""
    sentences = []
    start = 0
    for m in _BOUNDARY_RE.finditer(text):
        nxt = m.end()
        if nxt >= len(text):
            continue
        probe = nxt
        while probe < len(text) and text[probe] in _OPENERS:
            probe += 1
        if probe >= len(text) or not text[probe].isupper():
            continue
        punct = m.group()
        if punct[0] == "." and len(punct.rstrip()) == 1 and _is_abbreviation(text, m.start()):
            continue
        piece = text[start:m.end()].strip()
        if piece:
            sentences.append(piece)
        start = m.end()
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def segment(text: str) -> list[Sentence]:
    return [Sentence(s, tokenize(s)) for s in split_sentences(unicodedata.normalize("NFC", text))]


# --- records ----------------------------------------------------------------

class RecordError(ValueError):
    pass


@dataclass
class IngestStats:
    records: int = 0
    documents: int = 0
    errors: int = 0


def parse_date(value) -> dt.date:
    if not isinstance(value, str):
        raise RecordError(f"date must be an ISO-8601 string, got {value!r}")
    try:
        date = dt.date.fromisoformat(value[:10])
    except ValueError as exc:
        raise RecordError(f"unparseable date {value!r}") from exc
    if not MIN_DATE <= date <= MAX_DATE:
        raise RecordError(f"date {value!r} outside {MIN_DATE}..{MAX_DATE}")
    return date


def document_from_record(record: dict) -> Document:
    if not isinstance(record, dict):
        raise RecordError("record is not a JSON object")
    for key in ("id", "date", "section", "text"):
        if key not in record:
            raise RecordError(f"missing field {key!r}")
    text = record["text"]
    if not isinstance(text, str):
        raise RecordError("text must be a string")
    return Document(str(record["id"]), parse_date(record["date"]), str(record["section"]), segment(text))


def document_to_record(doc: Document) -> dict:
    return {
        "id": doc.id,
        "date": doc.date.isoformat(),
        "section": doc.section,
        "text": " ".join(s.text for s in doc.sentences),
    }


def ingest_corpus(
    path: str | Path,
    format: CorpusFormat | str = CorpusFormat.JSONL,
    stats: IngestStats | None = None,
) -> Iterator[Document]:
    """Stream Documents from a JSON-lines corpus file in file order.

    Malformed lines are skipped with a warning and counted in ``stats.errors``.
    """
    CorpusFormat(format)
    stats = stats if stats is not None else IngestStats()
    with open(path, encoding="utf-8") as fh:
        yield from _ingest_lines(fh, stats, str(path))


def _ingest_lines(lines: Iterable[str], stats: IngestStats, name: str) -> Iterator[Document]:
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        stats.records += 1
        try:
            doc = document_from_record(json.loads(line))
        except (json.JSONDecodeError, RecordError) as exc:
            stats.errors += 1
            log.warning("%s:%d: skipped record: %s", name, lineno, exc)
            continue
        stats.documents += 1
        yield doc


# --- annotated serialization ------------------------------------------------

def document_to_dict(doc: Document) -> dict:
    # str-valued enums serialise as their values
    return {
        "id": doc.id,
        "date": doc.date.isoformat(),
        "section": doc.section,
        "token_count": doc.token_count,
        "sentences": [
            {
                "text": s.text,
                "sent_lang": s.sent_lang,
                "posterior": s.posterior,
                "gate": s.gate_decision,
                "tokens": [
                    {
                        "surface": t.surface,
                        "normalized": t.normalized,
                        "span": [t.start, t.end],
                        "lang": t.lang,
                        "loan": t.loan_label,
                        "role": t.mixing_role,
                        "pattern": t.matched_pattern,
                    }
                    for t in s.tokens
                ],
            }
            for s in doc.sentences
        ],
    }


def document_from_dict(data: dict) -> Document:
    sentences = []
    for s in data["sentences"]:
        tokens = [
            Token(
                t["surface"], t["span"][0], t["span"][1], Lang(t["lang"]), t["normalized"],
                LoanLabel(t["loan"]), MixingRole(t["role"]), t["pattern"],
            )
            for t in s["tokens"]
        ]
        sentences.append(
            Sentence(s["text"], tokens, Lang(s["sent_lang"]), float(s["posterior"]), GateDecision(s["gate"]))
        )
    doc = Document(data["id"], parse_date(data["date"]), data["section"], sentences)
    if "token_count" in data and data["token_count"] != doc.token_count:
        raise RecordError(f"document {doc.id}: token_count {data['token_count']} != {doc.token_count}")
    return doc


def read_annotated(path: str | Path, stats: IngestStats | None = None) -> Iterator[Document]:
    stats = stats if stats is not None else IngestStats()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            stats.records += 1
            try:
                doc = document_from_dict(json.loads(line))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                stats.errors += 1
                log.warning("%s:%d: skipped annotated record: %s", path, lineno, exc)
                continue
            stats.documents += 1
            yield doc
