"""Regenerate the bundled LID seed file (src/borrowkit/data/lid_seed.jsonl)."""

import argparse
from pathlib import Path

from borrowkit import seed

DEFAULT_OUT = Path(__file__).resolve().parents[1] / "src" / "borrowkit" / "data" / "lid_seed.jsonl"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--out", type=Path, default=DEFAULT_OUT)
    args = ap.parse_args()
    rows = seed.generate(seed=args.seed)
    seed.write_jsonl(rows, args.out)
    print(f"wrote {len(rows)} sentences to {args.out}")


if __name__ == "__main__":
    main()
