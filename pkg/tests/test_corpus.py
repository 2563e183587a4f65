import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from borrowkit.corpus import (
    IngestStats,
    Lang,
    MixingRole,
    RecordError,
    document_from_dict,
    document_from_record,
    document_to_dict,
    document_to_record,
    ingest_corpus,
    parse_date,
    segment,
    split_sentences,
    tokenize,
)

from conftest import CS_SENTENCE


def surfaces(text):
    return [t.surface for t in tokenize(text)]


def test_clitics_split_and_punctuation_neutral():
    toks = tokenize(CS_SENTENCE)
    assert [t.surface for t in toks] == ["D'", "Buch", ",", "ça", "n'", "a", "rien", "à", "voir", "mat", "dem",
                                         "Film", "."]
    assert [t.surface for t in toks if t.lang is Lang.NEUTRAL] == [",", "."]
    assert all(t.mixing_role is MixingRole.NEUTRAL for t in toks if t.lang is Lang.NEUTRAL)


def test_special_tokens():
    assert surfaces("Kuckt https://www.rtl.lu/news, oder www.rtl.lu.") == [
        "Kuckt", "https://www.rtl.lu/news", ",", "oder", "www.rtl.lu", "."]
    assert "info@rtl.lu" in surfaces("Schreift info@rtl.lu un")
    assert surfaces("3,5 Milliounen") == ["3,5", "Milliounen"]
    assert surfaces("entre-temps") == ["entre-temps"]
    toks = tokenize("Am Joer 2020 .")
    assert toks[2].lang is Lang.NEUTRAL


def test_offsets_are_code_points():
    text = "Ëmmer méi Lëtzebuerger"
    for t in tokenize(text):
        assert text[t.start:t.end] == t.surface


def test_sentence_splitting():
    assert split_sentences("Moien. Et reent.") == ["Moien.", "Et reent."]
    assert split_sentences("Den Dr. Weber kënnt. Hien ass do!") == ["Den Dr. Weber kënnt.", "Hien ass do!"]
    assert split_sentences("Et ass 3. Juni. Dat stëmmt.") == ["Et ass 3. Juni.", "Dat stëmmt."]
    assert split_sentences("Hie sot: « Jo. » Dunn ass e gaang.") == ["Hie sot: « Jo. »", "Dunn ass e gaang."]
    assert split_sentences("") == []
    assert split_sentences("ouni Punkt") == ["ouni Punkt"]


def test_segment_counts_words():
    sents = segment("Moien. Et reent.")
    assert [s.word_count() for s in sents] == [1, 2]


@settings(max_examples=200, deadline=None)
@given(st.text(max_size=200))
def test_tokenize_offsets_property(text):
    toks = tokenize(text)
    last = 0
    for t in toks:
        assert text[t.start:t.end] == t.surface
        assert t.start >= last
        last = t.end
    assert "".join(text.split()) == "".join(t.surface for t in toks)


def test_parse_date_bounds():
    assert parse_date("2020-06-15T10:00:00Z").year == 2020
    for bad in ("1900-01-01", "2020-13-01", 20200101, "soon"):
        with pytest.raises(RecordError):
            parse_date(bad)


def test_record_round_trip():
    rec = {"id": "a1", "date": "2009-05-01", "section": "National", "text": "Moien. Et reent."}
    doc = document_from_record(rec)
    assert document_to_record(doc) == rec
    assert document_from_dict(json.loads(json.dumps(document_to_dict(doc)))) == doc


def test_record_errors():
    with pytest.raises(RecordError):
        document_from_record({"id": "x", "date": "2020-01-01", "section": "S"})
    with pytest.raises(RecordError):
        document_from_record({"id": "x", "date": "2020-01-01", "section": "S", "text": 5})
    with pytest.raises(RecordError):
        document_from_record([1, 2])


def test_ingest_skips_bad_lines(tmp_path):
    path = tmp_path / "c.jsonl"
    lines = [
        json.dumps({"id": "1", "date": "2020-01-02", "section": "Sport", "text": "Moien."}),
        "{not json",
        json.dumps({"id": "2", "date": "1890-01-02", "section": "Sport", "text": "Moien."}),
        "",
        json.dumps({"id": "3", "date": "2021-01-02", "section": "Sport", "text": "Äddi."}),
    ]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    stats = IngestStats()
    docs = list(ingest_corpus(path, "jsonl", stats))
    assert [d.id for d in docs] == ["1", "3"]
    assert (stats.records, stats.documents, stats.errors) == (4, 2, 2)
    with pytest.raises(ValueError):
        list(ingest_corpus(path, "xml"))


def test_annotated_token_count_is_checked():
    doc = document_from_record({"id": "a", "date": "2020-01-01", "section": "S", "text": "Moien."})
    data = document_to_dict(doc)
    data["token_count"] += 1
    with pytest.raises(RecordError):
        document_from_dict(data)
