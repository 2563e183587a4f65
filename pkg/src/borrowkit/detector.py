"""Token loan labels and mixing roles inside LU-gated sentences."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Callable, Protocol

from borrowkit import lid
from borrowkit.corpus import (
    LOAN_BY_DONOR,
    Document,
    GateDecision,
    Lang,
    LoanLabel,
    MixingRole,
    Sentence,
)

log = logging.getLogger(__name__)

CONFIG_VERSION = "1"


@dataclass(frozen=True)
class DetectorConfig:
    window: int = 3
    max_borrow_run: int = 2
    min_cs_run: int = 4
    min_lu_ratio: float = 0.5

    def __post_init__(self):
        if self.window < 1:
            raise lid.ConfigError("window must be >= 1")
        if not 1 <= self.max_borrow_run < self.min_cs_run:
            raise lid.ConfigError("need 1 <= max_borrow_run < min_cs_run")
        if not 0 < self.min_lu_ratio <= 1:
            raise lid.ConfigError("min_lu_ratio must be in (0, 1]")


@dataclass(frozen=True)
class PipelineConfig:
    detector: DetectorConfig = DetectorConfig()
    gate: lid.GateConfig = lid.GateConfig()
    token_lid: lid.TokenLidConfig = lid.TokenLidConfig()


_SECTIONS = {"detector": DetectorConfig, "gate": lid.GateConfig, "token_lid": lid.TokenLidConfig}


def parse_config(text: str) -> PipelineConfig:
    """Parse ``key = value`` lines; keys may be qualified as ``gate.base`` etc.

    Unqualified keys belong to the detector.  ``version`` must be 1 if present.
    """
    values: dict[str, dict] = {name: {} for name in _SECTIONS}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (p.strip() for p in line.partition("="))
        if not sep or not key or not value:
            raise lid.ConfigError(f"config line {lineno}: expected key = value")
        if key == "version":
            if value != CONFIG_VERSION:
                raise lid.ConfigError(f"unsupported config version {value}")
            continue
        section, _, name = key.rpartition(".")
        section = section or "detector"
        cls = _SECTIONS.get(section)
        if cls is None:
            raise lid.ConfigError(f"config line {lineno}: unknown section {section!r}")
        types = {f.name: f.type for f in fields(cls)}
        if name not in types:
            raise lid.ConfigError(f"config line {lineno}: unknown key {key!r}")
        cast = int if types[name] in (int, "int") else float
        try:
            values[section][name] = cast(value)
        except ValueError:
            raise lid.ConfigError(f"config line {lineno}: bad value {value!r}") from None
    return PipelineConfig(**{s: _SECTIONS[s](**v) for s, v in values.items()})


def load_config(path: str | Path | None) -> PipelineConfig:
    if path is None:
        return PipelineConfig()
    return parse_config(Path(path).read_text(encoding="utf-8"))


class Normalizer(Protocol):
    def __call__(self, surface: str) -> str: ...


class LexiconNormalizer:
    """Maps a surface to the first spelling the LU-side index knows.

    Tries the surface itself, then the Eifeler-rule alternates (final n dropped
    or restored).  Unknown surfaces come back unchanged, so the map is idempotent.
    """

    CACHE_LIMIT = 500_000

    def __init__(self, lexicon_index):
        self.index = lexicon_index
        self._memo: dict[str, str] = {}

    def trials(self, surface: str) -> list[str]:
        out = [surface]
        if surface[-1:] in ("n", "N") and len(surface) > 2:
            out.append(surface[:-1])
        else:
            out.append(surface + "n")
        return out

    def __call__(self, surface: str) -> str:
        hit = self._memo.get(surface)
        if hit is not None:
            return hit
        out = surface
        if self.index is not None:
            for form in self.trials(surface):
                if self.index.lookup_lu(form):
                    out = form
                    break
        if len(self._memo) >= self.CACHE_LIMIT:
            self._memo.clear()
        self._memo[surface] = out
        return out


def identity(surface: str) -> str:
    return surface


def label_tokens(sentence: Sentence, lexicon_index, normalizer: Callable[[str], str] | None = None) -> None:
    """Assign loan labels in place.

    LU-side hits on the normalized form win; a donor-side hit on the raw surface
    (an unadapted donor spelling) is labelled with that donor and the lexical pattern.
    """
    normalizer = normalizer or identity
    for tok in sentence.tokens:
        if tok.lang is Lang.NEUTRAL:
            continue
        tok.normalized = normalizer(tok.surface)
        hits = lexicon_index.lookup_lu(tok.normalized) if lexicon_index is not None else []
        if hits:
            tok.loan_label = LOAN_BY_DONOR[hits[0].donor]
            tok.matched_pattern = hits[0].pattern_id
            continue
        hits = lexicon_index.lookup_donor(tok.surface) if lexicon_index is not None else []
        if hits:
            tok.loan_label = LOAN_BY_DONOR[hits[0].donor]
            tok.matched_pattern = "exact"
        else:
            tok.loan_label = LoanLabel.NATIVE
            tok.matched_pattern = None


@dataclass(frozen=True)
class Run:
    start: int  # token index of the first foreign token
    end: int  # token index one past the last foreign token
    lang: Lang
    length: int  # foreign tokens only; NEUTRAL tokens inside are not counted

    def positions(self, tags: list[Lang]) -> list[int]:
        return [i for i in range(self.start, self.end) if tags[i] is not Lang.NEUTRAL]


def _is_foreign(tag: Lang) -> bool:
    return tag is not Lang.LU and tag is not Lang.NEUTRAL


def foreign_runs(sentence: Sentence) -> list[Run]:
    return runs_from_tags([t.lang for t in sentence.tokens])


def runs_from_tags(tags: list[Lang]) -> list[Run]:
    runs = []
    members: list[int] = []

    def close():
        if members:
            langs = [tags[i] for i in members]
            counts = Counter(langs)
            top = max(counts.values())
            lang = next(l for l in langs if counts[l] == top)
            runs.append(Run(members[0], members[-1] + 1, lang, len(members)))
            members.clear()

    for i, tag in enumerate(tags):
        if tag is Lang.NEUTRAL:
            continue
        if _is_foreign(tag):
            members.append(i)
        else:
            close()
    close()
    return runs


def local_lu_ratio(sentence: Sentence, token_index: int, window: int = 3) -> float:
    return _lu_ratio([t.lang for t in sentence.tokens], token_index, window)


def _lu_ratio(tags: list[Lang], i: int, window: int) -> float:
    lo, hi = max(0, i - window), min(len(tags), i + window + 1)
    near = [tags[j] for j in range(lo, hi) if j != i and tags[j] is not Lang.NEUTRAL]
    if not near:
        return 1.0
    return sum(1 for t in near if t is Lang.LU) / len(near)


def _has_loan(tok) -> bool:
    return tok.loan_label not in (LoanLabel.NATIVE, LoanLabel.UNSET)


def classify_mixing(sentence: Sentence, config: DetectorConfig = DetectorConfig(),
                    lexicon_index=None) -> None:
    """Assign mixing roles in place from run lengths, local LU density and loan labels."""
    toks = sentence.tokens
    tags = [t.lang for t in toks]
    for tok in toks:
        if tok.lang is Lang.NEUTRAL:
            tok.mixing_role = MixingRole.NEUTRAL
        elif tok.lang is Lang.LU:
            tok.mixing_role = MixingRole.MATRIX
    for run in runs_from_tags(tags):
        for i in run.positions(tags):
            tok = toks[i]
            if run.length >= config.min_cs_run:
                tok.mixing_role = MixingRole.CODE_SWITCH
                continue
            known = _has_loan(tok) or (
                lexicon_index is not None
                and bool(lexicon_index.lookup_lu(tok.surface) or lexicon_index.lookup_donor(tok.surface))
            )
            if (run.length <= config.max_borrow_run and known
                    and _lu_ratio(tags, i, config.window) >= config.min_lu_ratio):
                tok.mixing_role = MixingRole.BORROWING
            else:
                tok.mixing_role = MixingRole.AMBIGUOUS


class Annotator:
    """Bundles model, lexicon index and configs for per-document annotation."""

    def __init__(self, model, lexicon_index, config: PipelineConfig = PipelineConfig(),
                 normalizer: Callable[[str], str] | None = None):
        self.model = model
        self.index = lexicon_index
        self.config = config
        self.normalizer = normalizer or LexiconNormalizer(lexicon_index)
        self.tagger = lid.TokenTagger(model, lexicon_index, config.token_lid)

    def sentence(self, sent: Sentence) -> None:
        lid.gate(self.model, self.config.gate, sent)
        self.tagger(sent)
        if sent.gate_decision is GateDecision.PROCESS:
            label_tokens(sent, self.index, self.normalizer)
            classify_mixing(sent, self.config.detector, self.index)
        else:
            for tok in sent.tokens:
                if tok.lang is not Lang.NEUTRAL:
                    tok.mixing_role = MixingRole.UNSET
                    tok.loan_label = LoanLabel.UNSET

    def __call__(self, doc: Document) -> Document:
        for sent in doc.sentences:
            try:
                self.sentence(sent)
            except Exception:
                log.exception("document %s: sentence skipped", doc.id)
        return doc


def annotate_document(document: Document, model, config: PipelineConfig, lexicon_index,
                      normalizer: Callable[[str], str] | None = None) -> Document:
    return Annotator(model, lexicon_index, config, normalizer)(document)
