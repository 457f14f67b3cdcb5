#!/usr/bin/env python3
"""Recount per-label totals from an assess run, using only the standard library.

Usage: recount_labels.py TWEET_LABELS_TSV [DUMP_JSONL]

Prints ``label,count`` lines. With a tweet dump it also checks that every
tweet id appears in the labels file exactly once.
"""

import csv
import json
import sys
from collections import Counter


def main(argv):
    if len(argv) not in (2, 3):
        print(__doc__, file=sys.stderr)
        return 2
    with open(argv[1], encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh, delimiter="\t"))
    counts = Counter(row["label"] for row in rows)
    if len(argv) == 3:
        with open(argv[2], encoding="utf-8") as fh:
            ids = [json.loads(line)["id"] for line in fh if line.strip()]
        seen = Counter(row["id"] for row in rows)
        if sorted(seen) != sorted(ids) or any(v != 1 for v in seen.values()):
            print("id mismatch between labels file and dump", file=sys.stderr)
            return 1
    for label in ("negative", "neutral", "positive"):
        print(f"{label},{counts.get(label, 0)}")
    extra = set(counts) - {"negative", "neutral", "positive"}
    if extra:
        print(f"unexpected labels: {sorted(extra)}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
