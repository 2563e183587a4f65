"""Write a synthetic news corpus (JSON lines) and the lexicon its loans are drawn from."""

import argparse
from pathlib import Path

from borrowkit import synth


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--docs", type=int, default=1000)
    ap.add_argument("--lexicon-size", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", type=Path, required=True, help="output directory")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    lexicon = synth.synthetic_lexicon(args.lexicon_size, args.seed)
    lexicon.save(args.out / "lexicon.tsv")
    n = synth.write_records(synth.synthetic_corpus(args.docs, args.seed, lexicon), args.out / "corpus.jsonl")
    print(f"{n} documents, {len(lexicon)} lexicon entries in {args.out}")


if __name__ == "__main__":
    main()
