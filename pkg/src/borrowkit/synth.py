"""Synthetic dictionaries, lexicons and news corpora for tests and benchmarks."""

from __future__ import annotations

import datetime as dt
import json
import random
from pathlib import Path
from typing import Iterator

from borrowkit import lid, seed
from borrowkit.corpus import Lang
from borrowkit.loanlex import POS, DictionaryEntry, Lexicon, induce
from borrowkit.patterns import compile_index, load_registry

SECTIONS = ("National", "International", "Sport", "Kultur", "Politik", "Economie")

# (LU suffix, donor suffix, donor, POS, capitalise)
TEMPLATES = (
    ("atioun", "ation", "FR", POS.NOUN, True),
    ("ioun", "ion", "FR", POS.NOUN, True),
    ("éieren", "er", "FR", POS.VERB, False),
    ("éieren", "ir", "FR", POS.VERB, False),
    ("éit", "é", "FR", POS.NOUN, True),
    ("éit", "ät", "DE", POS.NOUN, True),
    ("er", "eur", "FR", POS.NOUN, True),
    ("abel", "able", "FR", POS.ADJ, False),
    ("esch", "isch", "DE", POS.ADJ, False),
    ("éiert", "é", "FR", POS.ADJ, False),
    ("", "", "EN", POS.NOUN, True),
    ("", "e", "DE", POS.NOUN, True),
)

_ONSETS = "b c d f g l m n p r s t v br cr dr fl gr pl pr st tr".split()
_VOWELS = "a e i o u a e i o".split()
_CODAS = ["", "", "", "l", "n", "r", "s", "m"]


def _stem(rng: random.Random) -> str:
    n = rng.randint(2, 4)
    return "".join(rng.choice(_ONSETS) + rng.choice(_VOWELS) + rng.choice(_CODAS) for _ in range(n))


def synthetic_dictionary(n: int, seed_value: int = 0) -> list[DictionaryEntry]:
    """``n`` adapted loan pairs with unique headwords, built from productive suffix templates."""
    rng = random.Random(seed_value)
    seen: set[str] = set()
    out = []
    while len(out) < n:
        lu_suf, donor_suf, donor, pos, cap = rng.choice(TEMPLATES)
        stem = _stem(rng)
        head = stem + lu_suf
        source = stem + donor_suf
        if cap:
            head = head.capitalize()
            if donor == "DE":
                source = source.capitalize()
        if head.casefold() in seen:
            continue
        seen.add(head.casefold())
        out.append(DictionaryEntry(head, pos, False, {donor: (source,)}))
    return out


def synthetic_lexicon(n: int = 7000, seed_value: int = 0) -> Lexicon:
    lexicon, _ = induce(synthetic_dictionary(n, seed_value), compile_index(load_registry()))
    return lexicon


def _month_date(rng: random.Random, lo: int = 1999, hi: int = 2025) -> dt.date:
    return dt.date(rng.randint(lo, hi), rng.randint(1, 12), rng.randint(1, 28))


def synthetic_document(rng: random.Random, doc_id: str, loans: list[str], n_sentences: int,
                       loan_rate: float = 0.3, cs_rate: float = 0.05, foreign_rate: float = 0.05) -> dict:
    sentences = []
    for _ in range(n_sentences):
        r = rng.random()
        if r < foreign_rate:
            sentences.append(seed.random_sentence(rng, rng.choice([Lang.FR, Lang.DE, Lang.EN])))
            continue
        words = seed.random_sentence(rng, Lang.LU, mixed_rate=cs_rate).split()
        if loans and rng.random() < loan_rate:
            at = rng.randint(1, max(1, len(words) - 1))
            words.insert(at, rng.choice(loans))
        sentences.append(" ".join(words))
    return {"id": doc_id, "date": _month_date(rng).isoformat(), "section": rng.choice(SECTIONS),
            "text": " ".join(sentences)}


def synthetic_corpus(n_docs: int, seed_value: int = 0, lexicon: Lexicon | None = None,
                     sentences: tuple[int, int] = (3, 12)) -> Iterator[dict]:
    rng = random.Random(seed_value)
    loans = [e.lu_form for e in lexicon] if lexicon is not None else []
    for i in range(n_docs):
        yield synthetic_document(rng, f"doc{i:07d}", loans, rng.randint(*sentences))


def write_records(records, path: str | Path) -> int:
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
            n += 1
    return n


def benchmark_inputs(workdir: str | Path, tokens: int = 1_000_000, lexicon_size: int = 7000,
                     seed_value: int = 0) -> tuple[Path, Path, Path]:
    """Write (corpus, model, lexicon) files for an annotation run of roughly ``tokens`` tokens."""
    workdir = Path(workdir)
    model_path = workdir / "model.bklid"
    lid.train(seed.generate(seed=seed_value), prior=lid.NEWS_PRIOR).save(model_path)
    lexicon = synthetic_lexicon(lexicon_size, seed_value)
    lexicon_path = workdir / "lexicon.tsv"
    lexicon.save(lexicon_path)
    corpus_path = workdir / "corpus.jsonl"
    # about 80 tokens per synthetic document
    write_records(synthetic_corpus(max(1, tokens // 80), seed_value, lexicon), corpus_path)
    return corpus_path, model_path, lexicon_path
