"""Regenerate the bundled lexicon (src/lexisent/data/lexicon.tsv).

Sources:
  * VADER valence lexicon, booster and negation lists (MIT licence), from the
    ``vaderSentiment`` package;
  * the Pattern/TextBlob English adjective lexicon (PDDL), from ``textblob``.

Polarity and subjectivity come from the adjective lexicon, averaged over word
senses. Words it lacks get polarity = valence / 4 and subjectivity =
|polarity|. Words only in the adjective lexicon get valence 0.

    python scripts/build_lexicon.py [--out PATH]
"""

import argparse
import re
import xml.etree.ElementTree as ET
from collections import defaultdict
from importlib import resources
from pathlib import Path

TOKEN_RE = re.compile(r"[a-z']+")
DEFAULT_OUT = Path(__file__).resolve().parents[1] / "src" / "lexisent" / "data" / "lexicon.tsv"


def vader_tables():
    from vaderSentiment import vaderSentiment as vs

    text = resources.files("vaderSentiment").joinpath("vader_lexicon.txt").read_text(encoding="utf-8")
    valence = {}
    for line in text.splitlines():
        parts = line.split("\t")
        if len(parts) >= 2 and TOKEN_RE.fullmatch(parts[0]):
            valence[parts[0]] = max(-4.0, min(4.0, float(parts[1])))
    boosters = {w: d for w, d in vs.BOOSTER_DICT.items() if TOKEN_RE.fullmatch(w)}
    negators = {w for w in vs.NEGATE if TOKEN_RE.fullmatch(w)}
    return valence, boosters, negators


def pattern_table():
    xml = resources.files("textblob").joinpath("en", "en-sentiment.xml").read_bytes()
    acc = defaultdict(list)
    for word in ET.fromstring(xml):
        form = (word.get("form") or "").lower()
        if TOKEN_RE.fullmatch(form) and word.get("polarity") is not None:
            acc[form].append((float(word.get("polarity")), float(word.get("subjectivity"))))
    return {
        form: (sum(p for p, _ in senses) / len(senses), sum(s for _, s in senses) / len(senses))
        for form, senses in acc.items()
    }


def build():
    valence, boosters, negators = vader_tables()
    pattern = pattern_table()
    rows = {}
    for token in sorted(set(valence) | set(pattern) | set(boosters) | negators):
        v = valence.get(token, 0.0)
        if token in pattern:
            pol, subj = pattern[token]
        else:
            pol = max(-1.0, min(1.0, v / 4.0))
            subj = abs(pol)
        if token in negators:
            kind = "negator"
            pol, subj, v = 0.0, 0.0, 0.0
        elif token in boosters:
            kind = f"booster:{boosters[token]:g}"
            v = 0.0
        else:
            kind = "sentiment"
        rows[token] = (round(pol, 4), round(subj, 4), round(v, 4), kind)
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=DEFAULT_OUT)
    args = ap.parse_args()
    rows = build()
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# token\tpolarity\tsubjectivity\tvalence\tkind[:delta]\n")
        fh.write("# built by scripts/build_lexicon.py from VADER (MIT) and Pattern en-sentiment (PDDL)\n")
        for token, (pol, subj, v, kind) in rows.items():
            fh.write(f"{token}\t{pol:g}\t{subj:g}\t{v:g}\t{kind}\n")
    n_mod = sum(1 for r in rows.values() if r[3] != "sentiment")
    print(f"wrote {len(rows)} entries ({n_mod} modifiers) to {args.out}")


if __name__ == "__main__":
    main()
