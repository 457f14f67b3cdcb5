"""Per-user sentiment profile: label counts, ratios, word tables and optional gold comparison."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from lexisent.corpus import FrequencyMode, LabeledDoc, WordFrequencyTable, word_frequency
from lexisent.evaluation import ConfusionMatrix, confusion, metrics
from lexisent.labels import LABELS, SentimentLabel
from lexisent.tables import format_table, pct


@dataclass
class PersonalityReport:
    counts: dict[SentimentLabel, int]
    negative_to_rest: float  # neg / (pos + neu); inf when every tweet is negative
    tables: dict[tuple[SentimentLabel, FrequencyMode], WordFrequencyTable]
    confusion: ConfusionMatrix | None = None
    scorer_counts: Mapping[str, Mapping[SentimentLabel, int]] | None = None

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def ratios(self) -> dict[SentimentLabel, float]:
        n = self.total
        return {lab: (c / n if n else 0.0) for lab, c in self.counts.items()}

    def summary_table(self) -> str:
        rows = [[lab.name.title(), self.counts[lab], pct(self.ratios[lab])] for lab in LABELS]
        rows.append(["Total", self.total, pct(1.0 if self.total else 0.0)])
        text = format_table(["Label", "Tweets", "Share"], rows)
        return text + f"negative-to-rest ratio: {self.negative_to_rest:.4f}\n"

    def write(self, out_dir: str | Path) -> list[Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        written = []
        path = out / "personality_counts.csv"
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["label", "count", "ratio"])
            for lab in LABELS:
                w.writerow([lab.slug, self.counts[lab], f"{self.ratios[lab]:.6f}"])
            w.writerow(["negative_to_rest", "", f"{self.negative_to_rest:.6f}"])
        written.append(path)
        for (lab, mode), table in sorted(self.tables.items(), key=lambda kv: (kv[0][0], kv[0][1].value)):
            path = out / f"words_{lab.slug}_{mode.value}.csv"
            table.write_csv(path)
            written.append(path)
        if self.scorer_counts:
            path = out / "distribution.csv"
            names = sorted(self.scorer_counts)
            with open(path, "w", encoding="utf-8", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(["label", *names])
                for lab in LABELS:
                    w.writerow([lab.slug, *(self.scorer_counts[n].get(lab, 0) for n in names)])
            written.append(path)
        if self.confusion is not None:
            path = out / "confusion.csv"
            self.confusion.write_csv(path)
            written.append(path)
            m = metrics(self.confusion)
            path = out / "gold_metrics.csv"
            with open(path, "w", encoding="utf-8", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(["metric", "value"])
                w.writerow(["accuracy", f"{m.accuracy:.6f}"])
                for lab in LABELS:
                    pc = m.per_class[lab]
                    w.writerow([f"precision_{lab.slug}", f"{pc.precision:.6f}"])
                    w.writerow([f"recall_{lab.slug}", f"{pc.recall:.6f}"])
                    w.writerow([f"f1_{lab.slug}", f"{pc.f1:.6f}"])
                w.writerow(["macro_f1", f"{m.macro_f1:.6f}"])
            written.append(path)
        return written


def personality_report(docs: Sequence[LabeledDoc], top_k: int = 10,
                       gold: Sequence[SentimentLabel | None] | None = None,
                       scorer_counts=None) -> PersonalityReport:
    """Summarize labeled tweets; ``gold`` (same order) adds a confusion matrix over the gold-labeled subset."""
    if not docs:
        raise ValueError("no tweets to assess")
    counts = {lab: 0 for lab in LABELS}
    for d in docs:
        counts[d.label] += 1
    rest = counts[SentimentLabel.POSITIVE] + counts[SentimentLabel.NEUTRAL]
    neg = counts[SentimentLabel.NEGATIVE]
    ntr = neg / rest if rest else float("inf")
    tables = {(lab, mode): word_frequency(docs, lab, mode).head(top_k)
              for lab in LABELS for mode in FrequencyMode}
    cm = None
    if gold is not None:
        pairs = [(g, d.label) for g, d in zip(gold, docs) if g is not None]
        if pairs:
            cm = confusion([g for g, _ in pairs], [p for _, p in pairs])
    return PersonalityReport(counts, ntr, tables, cm, scorer_counts)
