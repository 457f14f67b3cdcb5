"""Command-line entry point: ``lexisent <subcommand> [options]``.

Exit codes: 0 success, 1 internal or training failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import ast
import dataclasses
import logging
import sys
from pathlib import Path
from typing import Sequence

from lexisent import models as M
from lexisent.corpus import (
    FrequencyMode, LabeledDoc, load_sentiment140, load_tweet_dump, read_corpus, word_frequency, write_corpus,
)
from lexisent.evaluation import SPLITS, ExperimentConfig, SplitRatio, confusion, metrics, run_experiment
from lexisent.features import WeightSource, tfidf_matrix, Vocabulary
from lexisent.labels import LABELS, SentimentLabel
from lexisent.lexicon import LexiconError, Method, ThresholdConfig, label_document, relabel_corpus
from lexisent.models.persist import ModelFileError
from lexisent.report import personality_report
from lexisent.seeding import DEFAULT_SEED
from lexisent.tables import format_table
from lexisent.textpipe import PipelineConfig, ReductionMode
from lexisent.workflow import featurize, pipeline_lexicon, preprocess_records, truncate_docs

log = logging.getLogger("lexisent")

SUBCOMMANDS = ("preprocess", "relabel", "explore", "train", "evaluate", "assess")


class UsageError(Exception):
    """Bad flags or unusable input; maps to exit code 2."""


@dataclasses.dataclass
class RunConfig:
    subcommand: str
    input: Path
    output_dir: Path
    lexicon: Path | None = None
    method: Method = Method.VALENCE
    models: tuple[str, ...] = M.MODEL_NAMES
    splits: tuple[SplitRatio, ...] = tuple(SPLITS.values())
    k: int = 5
    seed: int = DEFAULT_SEED
    threads: int = 1
    labels: str = "relabeled"
    class_weight: str | None = None
    top_k: int = 10
    truncate: bool = True
    reduction: ReductionMode = ReductionMode.STEM
    limit: int | None = None
    hp: dict = dataclasses.field(default_factory=dict)
    model_path: Path | None = None
    vocab_path: Path | None = None


# -- argument handling ------------------------------------------------------------


def _csv_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lexisent", description="Lexicon-relabeled tweet sentiment pipeline.")
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    p.add_argument("--config", help="key=value file; command-line flags take precedence")
    p.add_argument("--input", help="input file (raw CSV/JSONL for preprocess/assess, corpus TSV otherwise)")
    p.add_argument("--output-dir", default=".")
    p.add_argument("--lexicon", help="lexicon TSV (default: bundled)")
    p.add_argument("--method", choices=[m.value for m in Method], default="valence")
    p.add_argument("--models", default="all", help="comma list of %s, or 'all'" % ",".join(M.MODEL_NAMES))
    p.add_argument("--splits", default="all", help="comma list such as 70-30,80-20, or 'all'")
    p.add_argument("--k", type=int, default=5, help="cross-validation folds (0 disables)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--labels", choices=["original", "relabeled"], default="relabeled")
    p.add_argument("--class-weight", choices=["none", "balanced"], default="none")
    p.add_argument("--top-k", type=int, default=10)
    p.add_argument("--no-truncate", action="store_true", help="skip lexicon-weighted token truncation")
    p.add_argument("--reduction", choices=[m.value for m in ReductionMode], default="stem")
    p.add_argument("--limit", type=int, help="read at most this many input records")
    p.add_argument("--hp", action="append", default=[], metavar="MODEL.FIELD=VALUE",
                   help="hyperparameter override, e.g. rf.n_trees=50 (repeatable)")
    p.add_argument("--model", help="saved model JSON (evaluate/assess)")
    p.add_argument("--vocab", help="vocabulary TSV matching --model")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def read_config_file(path: str | Path) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment, keys may use dashes or underscores."""
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for n, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise UsageError(f"{path}:{n}: expected key=value")
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    parser = build_parser()
    ns = parser.parse_args(argv)
    if ns.config:
        try:
            values = read_config_file(ns.config)
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from None
        known = {a.dest: a for a in parser._actions}
        defaults = {}
        for key, raw in values.items():
            if key not in known or key in ("subcommand", "config", "help"):
                raise UsageError(f"unknown config key {key!r}")
            action = known[key]
            if isinstance(action, argparse._StoreTrueAction):
                defaults[key] = raw.lower() in ("1", "true", "yes", "on")
            elif isinstance(action, argparse._AppendAction):
                defaults[key] = _csv_list(raw)
            else:
                defaults[key] = action.type(raw) if action.type else raw
                if action.choices and defaults[key] not in action.choices:
                    raise UsageError(f"config {key}={raw!r}: choose from {list(action.choices)}")
        parser.set_defaults(**defaults)
        ns = parser.parse_args(argv)  # repeated --hp flags append to the file's list
    return ns


def _coerce(value: str, current):
    if value.lower() == "none":
        return None
    if isinstance(current, bool):
        return value.lower() in ("1", "true", "yes", "on")
    try:
        parsed = ast.literal_eval(value)
    except (ValueError, SyntaxError):
        parsed = value
    if isinstance(current, float) and isinstance(parsed, int):
        parsed = float(parsed)
    return parsed


def parse_overrides(items: Sequence[str], class_weight: str | None) -> dict[str, object]:
    """Merge ``model.field=value`` overrides into the default hyperparameter dataclasses."""
    params = dict(M.DEFAULT_PARAMS)
    if class_weight:
        params = {n: (dataclasses.replace(hp, class_weight=class_weight)
                      if any(f.name == "class_weight" for f in dataclasses.fields(hp)) else hp)
                  for n, hp in params.items()}
    for item in items:
        key, sep, value = item.partition("=")
        name, dot, field = key.strip().partition(".")
        if not sep or not dot or name not in params:
            raise UsageError(f"bad --hp {item!r}; expected MODEL.FIELD=VALUE with MODEL in {M.MODEL_NAMES}")
        fields = {f.name for f in dataclasses.fields(params[name])}
        if field not in fields:
            raise UsageError(f"{name} has no hyperparameter {field!r}; choose from {sorted(fields)}")
        current = getattr(params[name], field)
        try:
            params[name] = dataclasses.replace(params[name], **{field: _coerce(value.strip(), current)})
        except (TypeError, ValueError) as exc:
            raise UsageError(f"bad --hp {item!r}: {exc}") from None
    return params


def make_config(ns: argparse.Namespace) -> RunConfig:
    if not ns.input:
        raise UsageError("--input is required")
    models = M.MODEL_NAMES if ns.models == "all" else tuple(_csv_list(ns.models))
    bad = [m for m in models if m not in M.MODEL_NAMES]
    if bad or not models:
        raise UsageError(f"unknown models {bad}; choose from {M.MODEL_NAMES}")
    try:
        splits = tuple(SPLITS.values()) if ns.splits == "all" else tuple(SplitRatio.parse(s) for s in _csv_list(ns.splits))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not splits:
        raise UsageError("--splits is empty")
    if ns.threads < 1 or ns.top_k < 0 or ns.k < 0 or ns.k == 1:
        raise UsageError("--threads must be >= 1, --top-k >= 0, and --k 0 or >= 2")
    class_weight = None if ns.class_weight == "none" else ns.class_weight
    return RunConfig(
        subcommand=ns.subcommand,
        input=Path(ns.input),
        output_dir=Path(ns.output_dir),
        lexicon=Path(ns.lexicon) if ns.lexicon else None,
        method=Method(ns.method),
        models=tuple(models),
        splits=splits,
        k=ns.k,
        seed=ns.seed,
        threads=ns.threads,
        labels=ns.labels,
        class_weight=class_weight,
        top_k=ns.top_k,
        truncate=not ns.no_truncate,
        reduction=ReductionMode(ns.reduction),
        limit=ns.limit,
        hp=parse_overrides(ns.hp, class_weight),
        model_path=Path(ns.model) if ns.model else None,
        vocab_path=Path(ns.vocab) if ns.vocab else None,
    )


# -- subcommands ------------------------------------------------------------------------


def _require_file(path: Path | None, what: str) -> Path:
    if path is None or not path.is_file():
        raise UsageError(f"{what} not found: {path}")
    return path


def _load_raw(path: Path, limit: int | None):
    _require_file(path, "input")
    if path.suffix.lower() in (".jsonl", ".json", ".ndjson"):
        records, stats = load_tweet_dump(path)
        records = list(records)[:limit] if limit is not None else list(records)
    else:
        records, stats = load_sentiment140(path, limit=limit)
        records = list(records)
    return records, stats


def _pipeline(cfg: RunConfig) -> PipelineConfig:
    return PipelineConfig.default(cfg.reduction)


def _lexicon(cfg: RunConfig):
    if cfg.lexicon is not None:
        _require_file(cfg.lexicon, "lexicon")
    try:
        return pipeline_lexicon(cfg.lexicon, _pipeline(cfg))
    except LexiconError as exc:
        raise UsageError(f"bad lexicon: {exc}") from None


def _read_labeled(cfg: RunConfig) -> list[LabeledDoc]:
    _require_file(cfg.input, "input")
    try:
        return read_corpus(cfg.input, use_original=cfg.labels == "original")
    except (ValueError, KeyError) as exc:
        raise UsageError(f"{cfg.input}: {exc}") from None


def _truncate(cfg: RunConfig, docs, lex):
    if not cfg.truncate:
        return docs
    source = WeightSource.ABS_POLARITY if cfg.method is Method.PATTERN else WeightSource.ABS_VALENCE
    docs, policy = truncate_docs(docs, lex, cfg.seed, source)
    log.info("truncation threshold %.4f", policy.threshold)
    return docs


def cmd_preprocess(cfg: RunConfig) -> int:
    records, stats = _load_raw(cfg.input, cfg.limit)
    docs = preprocess_records(records, _pipeline(cfg), cfg.threads)
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    write_corpus(cfg.output_dir / "processed.tsv", docs)
    print(stats.summary())
    dropped = sum(d.dropped_all for d in docs)
    print(f"processed={len(docs)} empty_after_pipeline={dropped}")
    return 0


def cmd_relabel(cfg: RunConfig) -> int:
    lex = _lexicon(cfg)
    docs = _read_labeled(cfg)
    labeled, report = relabel_corpus(docs, cfg.method, lex, ThresholdConfig())
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    write_corpus(cfg.output_dir / f"labeled_{cfg.method.value}.tsv", labeled)
    report.write_csv(cfg.output_dir / f"distribution_{cfg.method.value}.csv")
    print(format_table(["Label", "Before", "After"], report.rows()), end="")
    print(f"moved to neutral: {report.moved_to_neutral}")
    return 0


def cmd_explore(cfg: RunConfig) -> int:
    docs = _read_labeled(cfg)
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    for lab in LABELS:
        for mode in FrequencyMode:
            table = word_frequency(docs, lab, mode).head(cfg.top_k)
            table.write_csv(cfg.output_dir / f"{lab.slug}_{mode.value}.csv")
            print(f"{lab.name.title()} ({mode.value})")
            print(format_table(["Word", "Frequency"], table.rows), end="")
            print()
    return 0


def cmd_train(cfg: RunConfig) -> int:
    lex = _lexicon(cfg)
    docs = _truncate(cfg, _read_labeled(cfg), lex)
    try:
        data, vocab, _ = featurize(docs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    exp = ExperimentConfig(models=cfg.models, splits=cfg.splits, k=cfg.k, seed=cfg.seed,
                           params=cfg.hp, threads=cfg.threads)
    report = run_experiment(data, exp)
    out = cfg.output_dir
    (out / "models").mkdir(parents=True, exist_ok=True)
    vocab.write_tsv(out / "vocab.tsv")
    (out / "report.csv").write_text(report.to_csv(), encoding="utf-8")
    acc = report.accuracy_table()
    per_class = report.per_class_table()
    (out / "accuracy_table.txt").write_text(acc, encoding="utf-8")
    (out / "per_class_table.txt").write_text(per_class, encoding="utf-8")
    for cell in report.cells:
        if cell.fitted is not None:
            M.save_model(cell.fitted, out / "models" / f"{cell.model}_{cell.split}.json")
        if cell.confusion is not None:
            cell.confusion.write_csv(out / f"confusion_{cell.model}_{cell.split}.csv")
    print(acc)
    print(per_class, end="")
    failed = [f"{c.model}/{c.split}" for c in report.cells if c.error]
    if failed:
        print(f"failed cells: {', '.join(failed)}", file=sys.stderr)
        return 1
    return 0


def _load_model_and_vocab(cfg: RunConfig):
    model = M.load_model(_require_file(cfg.model_path, "--model"))
    try:
        vocab = Vocabulary.read_tsv(_require_file(cfg.vocab_path, "--vocab"))
    except ValueError as exc:
        raise UsageError(f"bad vocabulary: {exc}") from None
    if len(vocab) != model.dimension:
        raise UsageError(f"vocabulary size {len(vocab)} does not match model dimension {model.dimension}")
    return model, vocab


def cmd_evaluate(cfg: RunConfig) -> int:
    model, vocab = _load_model_and_vocab(cfg)
    lex = _lexicon(cfg)
    docs = [d for d in _truncate(cfg, _read_labeled(cfg), lex) if d.label is not None]
    if not docs:
        raise UsageError("no labeled documents to evaluate")
    pred = model.predict_labels(tfidf_matrix(docs, vocab))
    cm = confusion([d.label for d in docs], pred)
    m = metrics(cm)
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    cm.write_csv(cfg.output_dir / "confusion.csv")
    rows = [["accuracy", f"{m.accuracy:.6f}"], ["macro_f1", f"{m.macro_f1:.6f}"]]
    for lab in LABELS:
        pc = m.per_class[lab]
        rows += [[f"precision_{lab.slug}", f"{pc.precision:.6f}"], [f"recall_{lab.slug}", f"{pc.recall:.6f}"],
                 [f"f1_{lab.slug}", f"{pc.f1:.6f}"]]
    with open(cfg.output_dir / "metrics.csv", "w", encoding="utf-8", newline="") as fh:
        fh.write("metric,value\n")
        fh.writelines(f"{a},{b}\n" for a, b in rows)
    print(cm.table())
    print(format_table(["Metric", "Value"], rows), end="")
    return 0


def cmd_assess(cfg: RunConfig) -> int:
    records, stats = _load_raw(cfg.input, cfg.limit)
    if not records:
        raise UsageError(f"{cfg.input}: no tweets")
    lex = _lexicon(cfg)
    docs = preprocess_records(records, _pipeline(cfg), cfg.threads)
    scorer_counts = {}
    per_method = {}
    for method in Method:
        labeled = [label_document(d.tokens, method, lex) if d.tokens else (SentimentLabel.NEUTRAL, 0.0)
                   for d in docs]
        per_method[method] = labeled
        scorer_counts[method.value] = {lab: sum(1 for l, _ in labeled if l is lab) for lab in LABELS}
    if cfg.model_path is not None:
        model, vocab = _load_model_and_vocab(cfg)
        pred = model.predict_labels(tfidf_matrix(docs, vocab))
        assigned = [(SentimentLabel(int(p)), None) for p in pred]
        scorer_counts[f"model_{model.variant}"] = {lab: sum(1 for l, _ in assigned if l is lab) for lab in LABELS}
    else:
        assigned = per_method[cfg.method]
    labeled_docs = [LabeledDoc(d.tokens, lab, d.source_id, d.original_label, score)
                    for d, (lab, score) in zip(docs, assigned)]
    gold = [r.original_label for r in records]
    report = personality_report(labeled_docs, cfg.top_k, gold if any(g is not None for g in gold) else None,
                                scorer_counts)
    out = cfg.output_dir
    report.write(out)
    write_corpus(out / "tweet_labels.tsv", labeled_docs)
    print(stats.summary())
    print(report.summary_table())
    for lab in LABELS:
        table = report.tables[(lab, FrequencyMode.COMMON)]
        print(f"{lab.name.title()} (common)")
        print(format_table(["Word", "Frequency"], table.rows))
    if report.confusion is not None:
        print(report.confusion.table(), end="")
    return 0


COMMANDS = {
    "preprocess": cmd_preprocess,
    "relabel": cmd_relabel,
    "explore": cmd_explore,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "assess": cmd_assess,
}


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        ns = parse_args(argv)
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"lexisent: error: {exc}", file=sys.stderr)
        return 2
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = make_config(ns)
        return COMMANDS[cfg.subcommand](cfg)
    except UsageError as exc:
        print(f"lexisent: error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ModelFileError, UnicodeDecodeError) as exc:
        print(f"lexisent: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - last-resort guard keeps the exit-code contract
        log.exception("internal failure")
        print(f"lexisent: internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
