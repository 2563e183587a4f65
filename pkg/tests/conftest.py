import csv
from pathlib import Path

import pytest

from borrowkit import lid, loanlex, patterns, seed
from borrowkit.corpus import Document, parse_date, segment

FIXTURES = Path(__file__).parent / "fixtures"

MALENTENDU = "De Sträit ass duerch e Malentendu entstan."
CS_SENTENCE = "D'Buch, ça n'a rien à voir mat dem Film."


def read_golden_pairs():
    with open(FIXTURES / "golden_pairs.tsv", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh, delimiter="\t") if r and not r[0].startswith("#")]
    return [tuple(r) for r in rows]


@pytest.fixture(scope="session")
def registry():
    return patterns.load_registry()


@pytest.fixture(scope="session")
def pattern_index(registry):
    return patterns.compile_index(registry)


@pytest.fixture(scope="session")
def lid_model():
    return lid.train(seed.generate(), prior=lid.NEWS_PRIOR)


@pytest.fixture(scope="session")
def example_lexicon():
    entries = [
        loanlex.LexiconEntry("Malentendu", "FR", "malentendu", "exact", "NOUN"),
        loanlex.LexiconEntry("Motivatioun", "FR", "motivation", "on>oun", "NOUN"),
        loanlex.LexiconEntry("Rapporter", "FR", "rapporteur", "eur>er", "NOUN"),
        loanlex.LexiconEntry("entre-temps", "FR", "entre-temps", "exact", "OTHER", variants=("entretemps",)),
    ]
    return loanlex.Lexicon(entries)


@pytest.fixture(scope="session")
def example_index(example_lexicon):
    return loanlex.build_index(example_lexicon)


def make_document(text, doc_id="d1", date="2020-06-15", section="National"):
    return Document(doc_id, parse_date(date), section, segment(text))


# criterion number -> (passed, detail), filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d} {'PASS' if passed else 'FAIL'}  {detail}")
