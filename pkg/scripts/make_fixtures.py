"""Write the bundled synthetic fixtures (personality dump and a small Sentiment140-style sample)."""

import argparse
from pathlib import Path

from lexisent.corpus import write_sentiment140, write_tweet_dump
from lexisent.synthetic import personality_records, sentiment140_records

DATA = Path(__file__).resolve().parents[1] / "src" / "lexisent" / "data"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=DATA)
    ap.add_argument("--sample-size", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=20240601)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    n = write_tweet_dump(args.out / "personality_300.jsonl", personality_records(300))
    print(f"personality_300.jsonl: {n} tweets")
    n = write_sentiment140(args.out / "sentiment140_sample.csv", sentiment140_records(args.sample_size, args.seed))
    print(f"sentiment140_sample.csv: {n} rows")


if __name__ == "__main__":
    main()
