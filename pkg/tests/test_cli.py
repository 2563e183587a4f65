import csv
import io
import json
import os
from pathlib import Path

import pytest

from borrowkit import aggregate, cli

from conftest import CS_SENTENCE, FIXTURES, MALENTENDU

DATA = Path(cli.__file__).parent / "data"


def run(*argv):
    return cli.main([str(a) for a in argv])


def induce_args(out):
    return ["induce", "--dictionary", FIXTURES / "induction_dictionary.jsonl",
            "--en-from-fr", FIXTURES / "chains_en_from_fr.txt", "--fr-from-en", FIXTURES / "chains_fr_from_en.txt",
            "--de-from-fr", FIXTURES / "chains_de_from_fr.txt", "--de-from-en", FIXTURES / "chains_de_from_en.txt",
            "--inheritance", FIXTURES / "inheritance.txt", "--overrides", FIXTURES / "overrides.txt", "--out", out]


def write_corpus(path, records):
    path.write_text("".join(json.dumps(r, ensure_ascii=False) + "\n" for r in records), encoding="utf-8")
    return path


def manifest(out):
    assert sorted(p.name for p in Path(out).iterdir() if p.name.endswith(".json") and "manifest" in p.name) == [
        "manifest.json"]
    return json.loads((Path(out) / "manifest.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="module")
def pipeline(tmp_path_factory):
    root = tmp_path_factory.mktemp("pipeline")
    assert run(*induce_args(root / "lex")) == 0
    assert run("train-lid", "--train", DATA / "lid_seed.jsonl", "--seed", 7, "--out", root / "lid") == 0
    corpus = write_corpus(root / "corpus.jsonl", [
        {"id": "1", "date": "2009-05-01", "section": "National", "text": MALENTENDU},
        {"id": "2", "date": "2020-06-15", "section": "Sport", "text": CS_SENTENCE},
        {"id": "3", "date": "2020-06-16", "section": "Sport", "text": "D'Motivatioun ass grouss."},
    ])
    assert run("annotate", "--corpus", corpus, "--model", root / "lid" / "model.bklid",
               "--lexicon", root / "lex" / "lexicon.tsv", "--config", FIXTURES / "detector.conf",
               "--out", root / "ann") == 0
    return root


def test_induce_outputs(pipeline):
    out = pipeline / "lex"
    assert (out / "lexicon.tsv").read_text(encoding="utf-8") == (FIXTURES / "induction_expected.tsv").read_text(
        encoding="utf-8")
    report = json.loads((out / "induction_report.json").read_text(encoding="utf-8"))
    assert report["parallel_headwords"] == ["talentéiert", "Bus"]
    m = manifest(out)
    assert m["command"] == "induce" and "dictionary" in m["inputs"] and len(m["inputs"]["dictionary"]["sha256"]) == 64


def test_induce_empty_dictionary(tmp_path, capsys):
    empty = tmp_path / "empty.jsonl"
    empty.write_text("", encoding="utf-8")
    assert run("induce", "--dictionary", empty, "--out", tmp_path / "o") == 0
    assert "lexicon entries: 0" in capsys.readouterr().out
    assert (tmp_path / "o" / "lexicon.tsv").read_text(encoding="utf-8").count("\n") == 2


def test_induce_missing_chain_file(tmp_path, capsys):
    code = run("induce", "--dictionary", FIXTURES / "induction_dictionary.jsonl",
               "--en-from-fr", tmp_path / "nope.txt", "--out", tmp_path / "o")
    assert code == cli.EXIT_USAGE
    assert "nope.txt" in capsys.readouterr().err


def test_induce_bad_override(tmp_path):
    bad = tmp_path / "ovr.txt"
    bad.write_text("ADD\tPompjee\tIT\tpompiere\n", encoding="utf-8")
    code = run("induce", "--dictionary", FIXTURES / "induction_dictionary.jsonl", "--overrides", bad,
               "--out", tmp_path / "o")
    assert code == cli.EXIT_USAGE


def test_train_lid_is_deterministic(pipeline, tmp_path, capsys):
    assert run("train-lid", "--train", DATA / "lid_seed.jsonl", "--seed", 7, "--out", tmp_path / "b") == 0
    assert "held-out accuracy" in capsys.readouterr().out
    assert (tmp_path / "b" / "model.bklid").read_bytes() == (pipeline / "lid" / "model.bklid").read_bytes()
    assert manifest(tmp_path / "b")["heldout_accuracy"] > 0.95


def test_train_lid_single_class(tmp_path):
    train = tmp_path / "t.jsonl"
    train.write_text("".join(json.dumps({"text": f"Moien {i}", "lang": "LU"}) + "\n" for i in range(50)))
    assert run("train-lid", "--train", train, "--out", tmp_path / "o") == cli.EXIT_USAGE


def read_annotated(pipeline):
    path = pipeline / "ann" / "annotated.jsonl"
    return [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines()]


def test_annotate_fixtures(pipeline):
    docs = read_annotated(pipeline)
    assert [d["id"] for d in docs] == ["1", "2", "3"]
    roles = [[(t["surface"], t["role"]) for s in d["sentences"] for t in s["tokens"]] for d in docs]
    assert [w for w, r in roles[0] if r == "BORROWING"] == ["Malentendu"]
    assert [w for w, r in roles[1] if r == "CODE_SWITCH"] == ["ça", "n'", "a", "rien", "à", "voir"]
    motiv = [t for t in docs[2]["sentences"][0]["tokens"] if t["surface"] == "Motivatioun"][0]
    assert (motiv["lang"], motiv["loan"], motiv["role"]) == ("LU", "FR_LOAN", "MATRIX")
    summary = json.loads((pipeline / "ann" / "annotate_summary.json").read_text(encoding="utf-8"))
    assert summary["documents"] == 3 and summary["code_switch_runs"] == 1
    m = manifest(pipeline / "ann")
    assert set(m["inputs"]) == {"corpus", "model", "lexicon"} and "config" in m["configs"]


def test_annotate_skips_bad_records_and_empty_corpus(pipeline, tmp_path):
    corpus = tmp_path / "c.jsonl"
    corpus.write_text('{"id": "x"}\nnot json\n' + json.dumps(
        {"id": "ok", "date": "2020-01-01", "section": "S", "text": "Moien."}) + "\n", encoding="utf-8")
    common = ["--model", pipeline / "lid" / "model.bklid", "--lexicon", pipeline / "lex" / "lexicon.tsv"]
    assert run("annotate", "--corpus", corpus, *common, "--out", tmp_path / "a") == 0
    summary = json.loads((tmp_path / "a" / "annotate_summary.json").read_text(encoding="utf-8"))
    assert (summary["records"], summary["documents"], summary["errors"]) == (3, 1, 2)
    empty = tmp_path / "e.jsonl"
    empty.write_text("", encoding="utf-8")
    assert run("annotate", "--corpus", empty, *common, "--out", tmp_path / "b") == 0
    assert (tmp_path / "b" / "annotated.jsonl").read_text() == ""


def test_annotate_parallel_matches_serial(pipeline, tmp_path):
    common = ["--corpus", pipeline / "corpus.jsonl", "--model", pipeline / "lid" / "model.bklid",
              "--lexicon", pipeline / "lex" / "lexicon.tsv", "--config", FIXTURES / "detector.conf"]
    assert run("annotate", *common, "--jobs", 2, "--out", tmp_path / "p") == 0
    assert (tmp_path / "p" / "annotated.jsonl").read_bytes() == (pipeline / "ann" / "annotated.jsonl").read_bytes()


def test_annotate_bad_config(pipeline, tmp_path):
    conf = tmp_path / "bad.conf"
    conf.write_text("min_cs_run = 1\n", encoding="utf-8")
    code = run("annotate", "--corpus", pipeline / "corpus.jsonl", "--model", pipeline / "lid" / "model.bklid",
               "--lexicon", pipeline / "lex" / "lexicon.tsv", "--config", conf, "--out", tmp_path / "o")
    assert code == cli.EXIT_USAGE


def test_report(pipeline, tmp_path):
    out = tmp_path / "rep"
    assert run("report", "--annotated", pipeline / "ann" / "annotated.jsonl", "--group-by", "period_section",
               "--induction-report", pipeline / "lex" / "induction_report.json", "--out", out) == 0
    text = (out / "aggregates_six.csv").read_bytes().decode("utf-8")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert list(rows[0]) == list(aggregate.AGGREGATE_COLUMNS)
    assert [r["group"] for r in rows] == ["2008-2011|National", "2020|Sport"]
    assert rows[1]["articles"] == "2" and rows[1]["small_sample"] == "true"
    assert (out / "induction_report.json").exists()
    summary = json.loads((out / "report_summary.json").read_text(encoding="utf-8"))
    assert summary["documents"] == 3 and summary["multilingual_documents"] == 2
    assert manifest(out)["command"] == "report"
    again = tmp_path / "rep2"
    assert run("report", "--annotated", pipeline / "ann" / "annotated.jsonl", "--group-by", "period_section",
               "--induction-report", pipeline / "lex" / "induction_report.json", "--out", again) == 0
    for name in os.listdir(out):
        if name != "manifest.json":
            assert (out / name).read_bytes() == (again / name).read_bytes()


def test_report_unknown_scheme(pipeline, tmp_path, capsys):
    code = run("report", "--annotated", pipeline / "ann" / "annotated.jsonl", "--scheme", "seven",
               "--out", tmp_path / "o")
    assert code == cli.EXIT_USAGE
    assert "five, six" in capsys.readouterr().err


def test_usage_errors():
    assert run("frobnicate") == cli.EXIT_USAGE
    assert run("report") == cli.EXIT_USAGE
