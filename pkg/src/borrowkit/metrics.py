"""Per-document code-mixing indices and borrowing diagnostics."""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from borrowkit.corpus import DONOR_BY_LOAN, LANGUAGES, Document, Lang, LoanLabel, MixingRole, Token

LEXICAL_PATTERNS = frozenset({"exact", None})


class Scope(str, enum.Enum):
    LU_ONLY = "LU_ONLY"
    LU_PLUS_1 = "LU_PLUS_1"
    LU_PLUS_2 = "LU_PLUS_2"
    LU_PLUS_3 = "LU_PLUS_3"


SCOPE_BY_EXTRA = (Scope.LU_ONLY, Scope.LU_PLUS_1, Scope.LU_PLUS_2, Scope.LU_PLUS_3)


@dataclass(frozen=True)
class MetricsConfig:
    entropy_base: float = 2.0
    k: int = 4


def _tokens(doc_or_tokens) -> Iterable[Token]:
    return doc_or_tokens.tokens() if isinstance(doc_or_tokens, Document) else doc_or_tokens


def lang_counts(doc_or_tokens) -> tuple[int, int, int, int]:
    """Token counts over (LU, DE, FR, EN)."""
    c = Counter(t.lang for t in _tokens(doc_or_tokens))
    return tuple(c[l] for l in LANGUAGES)


def lang_distribution(doc_or_tokens) -> tuple[float, ...]:
    return distribution(lang_counts(doc_or_tokens))


def distribution(counts: Sequence[int]) -> tuple[float, ...]:
    n = sum(counts)
    if n == 0:
        return tuple(0.0 for _ in counts)
    return tuple(c / n for c in counts)


def cmi(counts: Sequence[int]) -> float:
    n = sum(counts)
    if n == 0:
        return 0.0
    return 100.0 * (n - max(counts)) / n


def entropy(dist: Sequence[float], base: float = 2.0) -> float:
    h = -sum(p * math.log(p, base) for p in dist if p > 0)
    return h if h > 0 else 0.0


def m_index(dist: Sequence[float], k: int = 4) -> float:
    s = sum(p * p for p in dist)
    if s == 0:
        return 0.0
    value = (1 - s) / ((k - 1) * s)
    return value if value > 0 else 0.0


def combo_key(counts: Sequence[int]) -> str:
    present = {l.value for l, c in zip(LANGUAGES, counts) if c > 0}
    present.add(Lang.LU.value)
    return "+".join(sorted(present))


def scope_and_combo(doc_or_counts) -> tuple[Scope, str, bool]:
    """(scope, combo_key, anomaly); anomaly is set when there is text but no LU token."""
    counts = doc_or_counts if isinstance(doc_or_counts, tuple) else lang_counts(doc_or_counts)
    extra = sum(1 for c in counts[1:] if c > 0)
    anomaly = sum(counts) > 0 and counts[0] == 0
    return SCOPE_BY_EXTRA[extra], combo_key(counts), anomaly


def cs_rate(doc_or_tokens) -> float:
    toks = [t for t in _tokens(doc_or_tokens) if t.lang is not Lang.NEUTRAL]
    if not toks:
        return 0.0
    return sum(1 for t in toks if t.lang is not Lang.LU) / len(toks)


def is_borrowed(tok: Token) -> bool:
    return tok.loan_label not in (LoanLabel.NATIVE, LoanLabel.UNSET) or tok.mixing_role is MixingRole.BORROWING


def _donor_of(tok: Token) -> str | None:
    if tok.loan_label in DONOR_BY_LOAN:
        return DONOR_BY_LOAN[tok.loan_label]
    if tok.lang in (Lang.DE, Lang.FR, Lang.EN):
        return tok.lang.value
    return None


@dataclass
class BorrowingDiagnostics:
    borrowed_tokens: int = 0
    borrowed_token_rate: float = 0.0
    borrowed_type_rate: float = 0.0
    donor_entropy: float = 0.0
    assimilation_ratio: float = 0.0
    borrowing_share: float = 0.0
    code_switch_tokens: int = 0
    ambiguous_tokens: int = 0
    per_donor: dict[str, int] = field(default_factory=lambda: {"FR": 0, "DE": 0, "EN": 0})
    per_pattern: dict[str, int] = field(default_factory=dict)


def borrowing_diagnostics(doc_or_tokens, base: float = 2.0) -> BorrowingDiagnostics:
    toks = [t for t in _tokens(doc_or_tokens) if t.lang is not Lang.NEUTRAL]
    out = BorrowingDiagnostics()
    borrowed = [t for t in toks if is_borrowed(t)]
    out.code_switch_tokens = sum(1 for t in toks if t.mixing_role is MixingRole.CODE_SWITCH)
    out.ambiguous_tokens = sum(1 for t in toks if t.mixing_role is MixingRole.AMBIGUOUS)
    n = len(borrowed)
    out.borrowed_tokens = n
    if n == 0:
        return out
    out.borrowed_token_rate = n / len(toks)
    types = {t.surface.casefold() for t in toks}
    out.borrowed_type_rate = len({t.surface.casefold() for t in borrowed}) / len(types)
    patterns: Counter = Counter()
    # tokens with a BORROWING role but no loan label fall back to their token language
    for t in borrowed:
        donor = _donor_of(t)
        if donor is not None:
            out.per_donor[donor] += 1
        patterns[t.matched_pattern or "none"] += 1
    out.per_pattern = dict(sorted(patterns.items()))
    out.donor_entropy = entropy(distribution(list(out.per_donor.values())), base)
    out.assimilation_ratio = sum(1 for t in borrowed if t.matched_pattern not in LEXICAL_PATTERNS) / n
    out.borrowing_share = n / (n + out.code_switch_tokens + out.ambiguous_tokens)
    return out


@dataclass
class MixingMetrics:
    counts: tuple[int, int, int, int]
    cmi: float
    entropy: float
    m_index: float
    scope: Scope
    combo_key: str
    anomaly: bool
    cs_rate: float


def mixing_metrics(doc: Document, config: MetricsConfig = MetricsConfig()) -> MixingMetrics:
    counts = lang_counts(doc)
    dist = distribution(counts)
    scope, combo, anomaly = scope_and_combo(counts)
    return MixingMetrics(counts, cmi(counts), entropy(dist, config.entropy_base), m_index(dist, config.k),
                         scope, combo, anomaly, cs_rate(doc))


@dataclass
class DocumentMetrics:
    """Everything the aggregator needs from one annotated document."""

    id: str
    date: object
    section: str
    tokens: int
    mixing: MixingMetrics
    borrowing: BorrowingDiagnostics


def document_metrics(doc: Document, config: MetricsConfig = MetricsConfig()) -> DocumentMetrics:
    return DocumentMetrics(doc.id, doc.date, doc.section, doc.token_count,
                           mixing_metrics(doc, config), borrowing_diagnostics(doc, config.entropy_base))
