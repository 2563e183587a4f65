"""End-to-end demo: induce -> train-lid -> annotate -> report on bundled and synthetic data."""

import argparse
import json
import sys
from pathlib import Path

from borrowkit import cli, synth
from borrowkit.loanlex import Lexicon

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "tests" / "fixtures"
DATA = ROOT / "src" / "borrowkit" / "data"


def step(*argv):
    argv = [str(a) for a in argv]
    print("$ borrowkit " + " ".join(argv))
    code = cli.main(argv)
    if code:
        sys.exit(code)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("pipeline_demo"))
    ap.add_argument("--docs", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    out = args.out
    out.mkdir(parents=True, exist_ok=True)

    # a synthetic dictionary dump stands in for the LOD export
    dictionary = out / "dictionary.jsonl"
    with open(dictionary, "w", encoding="utf-8") as fh:
        for entry in synth.synthetic_dictionary(2000, args.seed):
            fh.write(json.dumps(entry.to_dict(), ensure_ascii=False) + "\n")
    step("induce", "--dictionary", dictionary, "--inheritance", FIXTURES / "inheritance.txt",
         "--overrides", FIXTURES / "overrides.txt", "--out", out / "lexicon")
    step("train-lid", "--train", DATA / "lid_seed.jsonl", "--seed", args.seed, "--out", out / "lid")

    lexicon = out / "lexicon" / "lexicon.tsv"
    synth.write_records(synth.synthetic_corpus(args.docs, args.seed, Lexicon.load(lexicon)), out / "corpus.jsonl")
    step("annotate", "--corpus", out / "corpus.jsonl", "--model", out / "lid" / "model.bklid",
         "--lexicon", lexicon, "--config", DATA / "detector.conf", "--out", out / "annotated")
    step("report", "--annotated", out / "annotated" / "annotated.jsonl", "--group-by", "period_section",
         "--induction-report", out / "lexicon" / "induction_report.json", "--out", out / "report")


if __name__ == "__main__":
    main()
