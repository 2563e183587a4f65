"""Sentence language gate and token-level language refinement.

The bundled classifier is a multinomial model over character 1-4 grams taken
inside space-padded, case-folded word tokens.  A sentence score is the class
log-prior plus the mean of its word log-likelihoods (mean pooling, as in
fastText-style classifiers), so word scores are memoised and shared between
the sentence gate and token tagging.  Anything implementing
:class:`LanguageClassifier` can replace it.
"""

from __future__ import annotations

import json
import math
import random
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Protocol, Sequence

from borrowkit.corpus import LANGUAGES, GateDecision, Lang, Sentence, Token, tokenize

MAGIC = b"BKLID1\n"
FORMAT_VERSION = 1
MODEL_CLASSES = (Lang.LU, Lang.DE, Lang.FR, Lang.EN, Lang.OTHER)

# Token shares of LU news (LU 92.5%, FR 3.8%, DE 2.9%, EN 0.8%) plus 1% OTHER.
NEWS_PRIOR = {Lang.LU: 0.925, Lang.FR: 0.038, Lang.DE: 0.029, Lang.EN: 0.008, Lang.OTHER: 0.01}


class ConfigError(ValueError):
    pass


class LanguageClassifier(Protocol):
    classes: tuple[Lang, ...]

    def sentence_scores(self, words: Sequence[str]) -> dict[Lang, float]: ...

    def token_scores(self, word: str) -> dict[Lang, float]: ...


def _softmax(scores: dict[Lang, float]) -> dict[Lang, float]:
    top = max(scores.values())
    exps = {k: math.exp(v - top) for k, v in scores.items()}
    z = sum(exps.values())
    return {k: v / z for k, v in exps.items()}


def word_ngrams(word: str, lo: int = 1, hi: int = 4) -> list[str]:
    padded = f" {word.casefold()} "
    grams = []
    for n in range(lo, hi + 1):
        for i in range(len(padded) - n + 1):
            g = padded[i:i + n]
            if not g.isspace():
                grams.append(g)
    return grams


class CharNgramModel:
    """Smoothed multinomial character n-gram classifier.

    Immutable after construction; the per-word score memo is an internal cache
    and does not change results.
    """

    CACHE_LIMIT = 500_000

    def __init__(self, class_counts: dict[Lang, int], ngram_counts: dict[Lang, Counter],
                 alpha: float = 0.1, ngram_range: tuple[int, int] = (1, 4),
                 prior: dict[Lang, float] | None = None):
        if alpha <= 0:
            raise ConfigError("smoothing constant must be positive")
        self.classes = tuple(c for c in MODEL_CLASSES if c in class_counts)
        self.alpha = alpha
        self.ngram_range = tuple(ngram_range)
        self.class_counts = {c: int(class_counts[c]) for c in self.classes}
        self.ngram_counts = {c: Counter(ngram_counts.get(c, {})) for c in self.classes}
        vocab = set()
        for c in self.classes:
            vocab.update(self.ngram_counts[c])
        if prior is None:
            weights = {c: float(self.class_counts[c]) for c in self.classes}
        else:
            weights = {c: float(prior.get(c, 0.0)) for c in self.classes}
            if any(w <= 0 for w in weights.values()):
                raise ConfigError("prior must be positive for every trained class")
        z = sum(weights.values())
        self.prior = {c: w / z for c, w in weights.items()}
        self._explicit_prior = prior is not None
        self.log_prior = {c: math.log(p) for c, p in self.prior.items()}
        v = len(vocab)
        denom = {c: sum(self.ngram_counts[c].values()) + alpha * v for c in self.classes}
        self._unseen = tuple(math.log(alpha / denom[c]) for c in self.classes)
        self._table = {
            g: tuple(math.log((self.ngram_counts[c].get(g, 0) + alpha) / denom[c]) for c in self.classes)
            for g in vocab
        }
        self._memo: dict[str, tuple[float, ...]] = {}

    def word_loglik(self, word: str) -> tuple[float, ...]:
        key = word.casefold()
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        acc = [0.0] * len(self.classes)
        table, unseen = self._table, self._unseen
        for g in word_ngrams(key, *self.ngram_range):
            row = table.get(g, unseen)
            for i, x in enumerate(row):
                acc[i] += x
        out = tuple(acc)
        if len(self._memo) >= self.CACHE_LIMIT:
            self._memo.clear()
        self._memo[key] = out
        return out

    def with_prior(self, prior: dict[Lang, float] | None) -> "CharNgramModel":
        return CharNgramModel(self.class_counts, self.ngram_counts, self.alpha, self.ngram_range, prior)

    def sentence_scores(self, words: Sequence[str]) -> dict[Lang, float]:
        if not words:
            return dict(self.log_prior)
        wl = self.word_loglik
        n = len(words)
        sums = map(sum, zip(*[wl(w) for w in words]))
        return {c: self.log_prior[c] + a / n for c, a in zip(self.classes, sums)}

    def token_scores(self, word: str) -> dict[Lang, float]:
        return dict(zip(self.classes, self.word_loglik(word)))

    # -- serialization --

    def to_bytes(self) -> bytes:
        payload = {
            "format_version": FORMAT_VERSION,
            "alpha": self.alpha,
            "ngram_range": list(self.ngram_range),
            "class_counts": {c.value: n for c, n in self.class_counts.items()},
            "ngram_counts": {c.value: dict(sorted(self.ngram_counts[c].items())) for c in self.classes},
            "prior": {c.value: p for c, p in self.prior.items()} if self._explicit_prior else None,
        }
        return MAGIC + json.dumps(payload, ensure_ascii=False, sort_keys=True, separators=(",", ":")).encode("utf-8")

    @classmethod
    def from_bytes(cls, blob: bytes) -> "CharNgramModel":
        if not blob.startswith(MAGIC):
            raise ConfigError("not a BKLID1 model file")
        payload = json.loads(blob[len(MAGIC):].decode("utf-8"))
        if payload.get("format_version") != FORMAT_VERSION:
            raise ConfigError(f"unsupported model format {payload.get('format_version')!r}")
        return cls(
            {Lang(k): v for k, v in payload["class_counts"].items()},
            {Lang(k): Counter(v) for k, v in payload["ngram_counts"].items()},
            alpha=payload["alpha"],
            ngram_range=tuple(payload["ngram_range"]),
            prior={Lang(k): v for k, v in payload["prior"].items()} if payload.get("prior") else None,
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_bytes(self.to_bytes())

    @classmethod
    def load(cls, path: str | Path) -> "CharNgramModel":
        return cls.from_bytes(Path(path).read_bytes())


def _words(text_or_tokens) -> list[str]:
    tokens = tokenize(text_or_tokens) if isinstance(text_or_tokens, str) else text_or_tokens
    return [t.surface for t in tokens if t.lang is not Lang.NEUTRAL]


def train(labeled: Iterable[tuple[str, Lang | str]], alpha: float = 0.1,
          ngram_range: tuple[int, int] = (1, 4), min_per_class: int = 50,
          prior: dict[Lang, float] | None = None) -> CharNgramModel:
    """Count n-grams per class and build a model.

    Only counts are kept, so the model does not depend on input order.  The
    class prior defaults to the training class frequencies; pass
    :data:`NEWS_PRIOR` (restricted to the trained classes) for LU news.
    """
    class_counts: Counter = Counter()
    ngram_counts: dict[Lang, Counter] = {}
    for text, lang in labeled:
        lang = Lang(lang)
        if lang not in MODEL_CLASSES:
            raise ConfigError(f"cannot train on label {lang.value}")
        class_counts[lang] += 1
        bucket = ngram_counts.setdefault(lang, Counter())
        for w in _words(text):
            bucket.update(word_ngrams(w, *ngram_range))
    if len(class_counts) < 2:
        raise ConfigError(f"need at least 2 classes, got {sorted(c.value for c in class_counts)}")
    thin = sorted(c.value for c, n in class_counts.items() if n < min_per_class)
    if thin:
        raise ConfigError(f"classes with fewer than {min_per_class} sentences: {thin}")
    if prior is not None:
        prior = {c: prior[c] for c in class_counts if c in prior}
    return CharNgramModel(dict(class_counts), ngram_counts, alpha, ngram_range, prior)


def read_training_file(path: str | Path) -> list[tuple[str, Lang]]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                rows.append((rec["text"], Lang(rec["lang"])))
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                raise ConfigError(f"{path}:{lineno}: bad training record: {exc}") from exc
    return rows


def split_train_test(rows: Sequence, seed: int = 42, test_fraction: float = 0.1):
    order = list(range(len(rows)))
    random.Random(seed).shuffle(order)
    n_test = int(round(len(rows) * test_fraction))
    test = [rows[i] for i in sorted(order[:n_test])]
    train_rows = [rows[i] for i in sorted(order[n_test:])]
    return train_rows, test


def classify_words(model: LanguageClassifier, words: Sequence[str]) -> tuple[Lang, float]:
    if not words:
        return Lang.OTHER, 0.0
    post = _softmax(model.sentence_scores(words))
    best = max(model.classes, key=lambda c: post[c])
    return best, post[best]


def classify_sentence(model: LanguageClassifier, text: str) -> tuple[Lang, float]:
    return classify_words(model, _words(text))


def accuracy(model: LanguageClassifier, rows: Sequence[tuple[str, Lang]]) -> float:
    if not rows:
        return float("nan")
    hits = sum(1 for text, lang in rows if classify_sentence(model, text)[0] is Lang(lang))
    return hits / len(rows)


# --- gate -------------------------------------------------------------------

@dataclass(frozen=True)
class GateConfig:
    base_threshold: float = 0.50
    max_threshold: float = 0.80
    short_len: int = 3
    long_len: int = 15

    def __post_init__(self):
        if not 0 < self.base_threshold <= self.max_threshold < 1:
            raise ConfigError("need 0 < base_threshold <= max_threshold < 1")
        if not self.short_len < self.long_len:
            raise ConfigError("need short_len < long_len")


def gate_threshold(config: GateConfig, token_count: int) -> float:
    """Posterior needed to admit a sentence of ``token_count`` words.

    Linear from ``max_threshold`` at ``short_len`` down to ``base_threshold``
    at ``long_len``.
    """
    if token_count <= config.short_len:
        return config.max_threshold
    if token_count >= config.long_len:
        return config.base_threshold
    frac = (token_count - config.short_len) / (config.long_len - config.short_len)
    value = config.max_threshold - frac * (config.max_threshold - config.base_threshold)
    return min(config.max_threshold, max(config.base_threshold, value))


def gate_decision(config: GateConfig, lang: Lang, posterior: float, token_count: int) -> GateDecision:
    if lang is Lang.LU and posterior >= gate_threshold(config, token_count):
        return GateDecision.PROCESS
    return GateDecision.ROUTE_OTHER


def gate(model: LanguageClassifier, config: GateConfig, sentence: Sentence) -> GateDecision:
    """Classify ``sentence`` and record language, posterior and gate decision on it."""
    words = [t.surface for t in sentence.tokens if t.lang is not Lang.NEUTRAL]
    lang, post = classify_words(model, words)
    sentence.sent_lang = lang
    sentence.posterior = post
    sentence.gate_decision = gate_decision(config, lang, post, len(words))
    return sentence.gate_decision


# --- token level ------------------------------------------------------------

@dataclass(frozen=True)
class TokenLidConfig:
    fallback_posterior: float = 0.4
    # cost (nats) of a language change between adjacent words; 0 disables smoothing
    switch_penalty: float = 3.0


@dataclass
class TokenEvidence:
    tag: Lang
    fixed: bool = False
    posteriors: dict[Lang, float] | None = None
    _emission: tuple[float, ...] | None = None

    def emission(self) -> tuple[float, ...]:
        """Log emission score per state in ``STATES``; the own tag gets a tiny bonus."""
        if self._emission is None:
            self._emission = tuple(_emit(self, s) for s in STATES)
        return self._emission


STATES = (Lang.LU, Lang.DE, Lang.FR, Lang.EN, Lang.OTHER)
_EPS = 1e-9
_NEG = float("-inf")


def _emit(e: TokenEvidence, state: Lang) -> float:
    bonus = _EPS if state is e.tag else 0.0
    if e.fixed:
        return 0.0 if state is e.tag else _NEG
    if e.posteriors is None:
        return bonus
    p = e.posteriors.get(state, 0.0)
    return (math.log(p) if p > 0 else _NEG) + bonus


def lexicon_tag(lexicon_index, token: Token) -> Lang | None:
    if lexicon_index is None:
        return None
    hits = lexicon_index.lookup_donor(token.surface)
    if hits:
        return Lang(hits[0].donor)
    if lexicon_index.lookup_lu(token.surface):
        return Lang.LU
    return None


def token_posteriors(model: LanguageClassifier, word: str) -> dict[Lang, float]:
    scores = model.token_scores(word)
    return _softmax({c: scores[c] for c in LANGUAGES if c in scores})


_NEUTRAL_EVIDENCE = TokenEvidence(Lang.NEUTRAL, fixed=True)


def _surface_evidence(model, lexicon_index, surface: str, config: TokenLidConfig) -> TokenEvidence | None:
    """Evidence that depends on the surface alone; None means 'fall back to the sentence language'."""
    hits = lexicon_index.lookup_donor(surface) if lexicon_index is not None else None
    if hits:
        return TokenEvidence(Lang(hits[0].donor), fixed=True)
    if lexicon_index is not None and lexicon_index.lookup_lu(surface):
        return TokenEvidence(Lang.LU, fixed=True)
    post = token_posteriors(model, surface)
    best = max(post, key=post.get)
    if post[best] < config.fallback_posterior:
        return None
    return TokenEvidence(best, posteriors=post)


def token_evidence(model, lexicon_index, token: Token, sentence_lang: Lang = Lang.LU,
                   config: TokenLidConfig = TokenLidConfig()) -> TokenEvidence:
    if token.lang is Lang.NEUTRAL:
        return _NEUTRAL_EVIDENCE
    ev = _surface_evidence(model, lexicon_index, token.surface, config)
    return ev if ev is not None else TokenEvidence(sentence_lang)


def token_lid(model, lexicon_index, token: Token, sentence_lang: Lang = Lang.LU,
              config: TokenLidConfig = TokenLidConfig()) -> Lang:
    """Language of one token: lexicon hit, else n-gram argmax, else the sentence language."""
    return token_evidence(model, lexicon_index, token, sentence_lang, config).tag


def smooth_tags(evidence: Sequence[TokenEvidence], penalty: float) -> list[Lang]:
    """Viterbi pass over non-neutral tokens penalising each language change.

    Lexicon-fixed tokens keep their tag; ties resolve toward the per-token tag.
    NEUTRAL tokens are transparent.
    """
    idx = [i for i, e in enumerate(evidence) if e.tag is not Lang.NEUTRAL]
    out = [e.tag for e in evidence]
    if penalty <= 0 or len(idx) < 2:
        return out
    first = evidence[idx[0]].tag
    # a constant path already takes every token's own best state at no switching cost
    if all(evidence[i].tag is first for i in idx):
        return out
    n = len(STATES)
    score = list(evidence[idx[0]].emission())
    back = []
    for i in idx[1:]:
        em = evidence[i].emission()
        top = max(range(n), key=score.__getitem__)
        switch = score[top] - penalty
        new, ptr = [], []
        for j in range(n):
            if switch > score[j]:
                new.append(switch + em[j])
                ptr.append(top)
            else:
                new.append(score[j] + em[j])
                ptr.append(j)
        score = new
        back.append(ptr)
    j = max(range(n), key=score.__getitem__)
    path = [j]
    for ptr in reversed(back):
        j = ptr[j]
        path.append(j)
    path.reverse()
    for pos, j in zip(idx, path):
        out[pos] = STATES[j]
    return out


class TokenTagger:
    """Token tagging with per-surface memoisation (model and index are read-only)."""

    CACHE_LIMIT = 500_000

    def __init__(self, model, lexicon_index, config: TokenLidConfig = TokenLidConfig()):
        self.model = model
        self.index = lexicon_index
        self.config = config
        self._memo: dict[str, TokenEvidence | None] = {}

    def evidence(self, token: Token, sentence_lang: Lang) -> TokenEvidence:
        if token.lang is Lang.NEUTRAL:
            return _NEUTRAL_EVIDENCE
        memo = self._memo
        surface = token.surface
        if surface in memo:
            ev = memo[surface]
        else:
            if len(memo) >= self.CACHE_LIMIT:
                memo.clear()
            ev = memo[surface] = _surface_evidence(self.model, self.index, surface, self.config)
        return ev if ev is not None else TokenEvidence(sentence_lang)

    def __call__(self, sentence: Sentence) -> None:
        ev = [self.evidence(t, sentence.sent_lang) for t in sentence.tokens]
        for tok, tag in zip(sentence.tokens, smooth_tags(ev, self.config.switch_penalty)):
            tok.lang = tag


def tag_tokens(model, lexicon_index, sentence: Sentence,
               config: TokenLidConfig = TokenLidConfig()) -> None:
    """Assign ``lang`` to every token of ``sentence`` in place."""
    TokenTagger(model, lexicon_index, config)(sentence)
