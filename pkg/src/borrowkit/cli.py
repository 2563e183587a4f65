"""Command-line frontend: induce, train-lid, annotate, report."""

from __future__ import annotations

import argparse
import datetime as dt
import gc
import hashlib
import json
import logging
import multiprocessing
import os
import sys
import time
from collections import Counter
from pathlib import Path

from borrowkit import __version__, aggregate, detector, lid, loanlex, metrics, patterns
from borrowkit.corpus import (
    GateDecision,
    IngestStats,
    MixingRole,
    RecordError,
    document_from_dict,
    document_from_record,
    document_to_dict,
    read_annotated,
)

log = logging.getLogger("borrowkit")

EXIT_OK, EXIT_INTERNAL, EXIT_USAGE = 0, 1, 2

CHAIN_FLAGS = {
    "en_from_fr": loanlex.ChainDirection.EN_FROM_FR,
    "fr_from_en": loanlex.ChainDirection.FR_FROM_EN,
    "de_from_fr": loanlex.ChainDirection.DE_FROM_FR,
    "de_from_en": loanlex.ChainDirection.DE_FROM_EN,
}

PRIORS = {"news": lid.NEWS_PRIOR, "uniform": None}


class UsageError(Exception):
    pass


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def require(path: str | Path | None, what: str) -> Path | None:
    if path is None:
        return None
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"{what} not found: {p}")
    return p


def write_manifest(out_dir: Path, command: str, inputs: dict, configs: dict | None = None,
                   extra: dict | None = None) -> None:
    manifest = {
        "tool": "borrowkit",
        "version": __version__,
        "command": command,
        "inputs": {k: {"path": str(v), "sha256": sha256_file(v)} for k, v in inputs.items() if v is not None},
        "configs": {k: {"path": str(v), "sha256": sha256_file(v)} for k, v in (configs or {}).items()
                    if v is not None},
        "created": dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds"),
    }
    manifest.update(extra or {})
    aggregate.write_files(out_dir, {"manifest.json": aggregate.to_json(manifest)})


# --- induce -----------------------------------------------------------------

def cmd_induce(args) -> int:
    dict_path = require(args.dictionary, "dictionary")
    pat_path = require(args.patterns, "pattern registry") or patterns.default_registry_path()
    chain_paths = {name: require(getattr(args, name), f"chain list {name}") for name in CHAIN_FLAGS}
    inh_path = require(args.inheritance, "inheritance list")
    ovr_path = require(args.overrides, "override file")
    out = aggregate.ensure_writable(args.out)

    version, rows = patterns.read_registry(pat_path)
    index = patterns.compile_index([r.pattern for r in rows])
    chains = [loanlex.read_chain_list(p, CHAIN_FLAGS[name]) for name, p in chain_paths.items() if p]
    inheritance = loanlex.read_inheritance_list(inh_path) if inh_path else None
    lexicon, report = loanlex.induce(loanlex.read_dictionary(dict_path), index, chains, inheritance,
                                     ovr_path, version=args.lexicon_version)
    aggregate.write_files(out, {"lexicon.tsv": lexicon.to_tsv(), "induction_report.json": report.to_json()})
    write_manifest(out, "induce",
                   {"dictionary": dict_path, "patterns": pat_path, "inheritance": inh_path,
                    "overrides": ovr_path, **chain_paths},
                   extra={"lexicon_version": args.lexicon_version, "registry_version": version})
    print(f"lexicon entries: {report.lexicon_entries} (forms incl. variants: {report.lexicon_forms}); "
          f"DE {report.per_donor.get('DE', 0)}, FR {report.per_donor.get('FR', 0)}, "
          f"EN {report.per_donor.get('EN', 0)}")
    return EXIT_OK


# --- train-lid --------------------------------------------------------------

def cmd_train_lid(args) -> int:
    train_path = require(args.train, "training file")
    out = aggregate.ensure_writable(args.out)
    rows = lid.read_training_file(train_path)
    train_rows, test_rows = lid.split_train_test(rows, seed=args.seed, test_fraction=args.test_fraction)
    model = lid.train(train_rows, alpha=args.alpha, prior=PRIORS[args.prior])
    acc = lid.accuracy(model, test_rows) if test_rows else float("nan")
    model_path = out / "model.bklid"
    tmp = out / ".model.bklid.tmp"
    tmp.write_bytes(model.to_bytes())
    os.replace(tmp, model_path)
    write_manifest(out, "train-lid", {"train": train_path},
                   extra={"seed": args.seed, "alpha": args.alpha, "prior": args.prior,
                          "heldout_accuracy": acc, "train_size": len(train_rows), "test_size": len(test_rows)})
    print(f"held-out accuracy: {acc:.4f} ({len(test_rows)} sentences, seed {args.seed})")
    return EXIT_OK


# --- annotate ---------------------------------------------------------------

_worker: detector.Annotator | None = None


def load_annotator(model_path, lexicon_path, config_path) -> detector.Annotator:
    model = lid.CharNgramModel.load(model_path)
    index = loanlex.build_index(loanlex.Lexicon.load(lexicon_path))
    annotator = detector.Annotator(model, index, detector.load_config(config_path))
    # the model tables and index live for the whole run; keep them out of cyclic GC scans
    gc.collect()
    gc.freeze()
    return annotator


def _init_worker(model_path, lexicon_path, config_path, level):
    global _worker
    logging.basicConfig(level=level)
    _worker = load_annotator(model_path, lexicon_path, config_path)


def annotate_line(line: str, annotator: detector.Annotator | None = None):
    """One corpus line -> (annotated JSON text or None, counters, error message or None)."""
    annotator = annotator or _worker
    try:
        doc = document_from_record(json.loads(line))
    except (json.JSONDecodeError, RecordError) as exc:
        return None, None, str(exc)
    annotator(doc)
    gates, langs, labels, roles = Counter(), Counter(), Counter(), Counter()
    cs_runs = 0
    min_cs = annotator.config.detector.min_cs_run
    for s in doc.sentences:
        gates[s.gate_decision] += 1
        toks = s.tokens
        langs.update([t.lang for t in toks])
        labels.update([t.loan_label for t in toks])
        sent_roles = [t.mixing_role for t in toks]
        roles.update(sent_roles)
        if s.gate_decision is GateDecision.PROCESS and MixingRole.CODE_SWITCH in sent_roles:
            cs_runs += sum(1 for run in detector.foreign_runs(s) if run.length >= min_cs)
    counts = {"sentences": len(doc.sentences), "tokens": doc.token_count, "code_switch_runs": cs_runs}
    for group, c in (("gate", gates), ("lang", langs), ("label", labels), ("role", roles)):
        for key, n in c.items():
            counts[f"{group}.{key.value}"] = n
    return json.dumps(document_to_dict(doc), ensure_ascii=False), counts, None


def _lines(path: Path):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if line.strip():
                yield lineno, line


def _annotate_numbered(item):
    lineno, line = item
    return (lineno, *annotate_line(line))


def run_annotate(corpus_path: Path, model_path: Path, lexicon_path: Path, config_path: Path | None,
                 out_path: Path, jobs: int = 1) -> dict:
    totals: Counter = Counter()
    summary = {"documents": 0, "records": 0, "errors": 0}
    tmp = out_path.with_name(f".{out_path.name}.tmp")
    with open(tmp, "w", encoding="utf-8", newline="\n") as out:
        if jobs <= 1:
            annotator = load_annotator(model_path, lexicon_path, config_path)
            results = ((n, *annotate_line(l, annotator)) for n, l in _lines(corpus_path))
            pool = None
        else:
            pool = multiprocessing.get_context("spawn").Pool(
                jobs, _init_worker, (model_path, lexicon_path, config_path, log.getEffectiveLevel()))
            results = pool.imap(_annotate_numbered, _lines(corpus_path), chunksize=64)
        # throughput is measured after model and lexicon loading
        start = time.perf_counter()
        try:
            for lineno, text, counts, err in results:
                summary["records"] += 1
                if err is not None:
                    summary["errors"] += 1
                    log.warning("%s:%d: skipped record: %s", corpus_path, lineno, err)
                    continue
                summary["documents"] += 1
                totals.update(counts)
                out.write(text)
                out.write("\n")
        finally:
            if pool is not None:
                pool.close()
                pool.join()
    os.replace(tmp, out_path)
    elapsed = time.perf_counter() - start
    summary["sentences"] = totals.pop("sentences", 0)
    summary["tokens"] = totals.pop("tokens", 0)
    summary["code_switch_runs"] = totals.pop("code_switch_runs", 0)
    for group in ("gate", "lang", "label", "role"):
        summary[group] = {k.split(".", 1)[1]: v for k, v in sorted(totals.items()) if k.startswith(group + ".")}
    summary["seconds"] = round(elapsed, 3)
    summary["tokens_per_second"] = round(summary["tokens"] / elapsed, 1) if elapsed > 0 else None
    return summary


def cmd_annotate(args) -> int:
    corpus_path = require(args.corpus, "corpus")
    model_path = require(args.model, "LID model")
    lexicon_path = require(args.lexicon, "lexicon")
    config_path = require(args.config, "config")
    detector.load_config(config_path)
    out = aggregate.ensure_writable(args.out)
    summary = run_annotate(corpus_path, model_path, lexicon_path, config_path, out / "annotated.jsonl", args.jobs)
    timing = {"seconds": summary.pop("seconds"), "tokens_per_second": summary.pop("tokens_per_second")}
    aggregate.write_files(out, {"annotate_summary.json": aggregate.to_json(summary)})
    write_manifest(out, "annotate", {"corpus": corpus_path, "model": model_path, "lexicon": lexicon_path},
                   {"config": config_path}, extra={"jobs": args.jobs, **timing})
    roles = summary["role"]
    print(f"documents {summary['documents']} (errors {summary['errors']}), sentences {summary['sentences']}, "
          f"PROCESS {summary['gate'].get('PROCESS', 0)}, ROUTE_OTHER {summary['gate'].get('ROUTE_OTHER', 0)}, "
          f"BORROWING {roles.get('BORROWING', 0)}, CODE_SWITCH {roles.get('CODE_SWITCH', 0)} "
          f"in {summary['code_switch_runs']} runs, {timing['tokens_per_second']} tokens/s")
    return EXIT_OK


# --- report -----------------------------------------------------------------

def _metrics_line(text: str) -> metrics.DocumentMetrics:
    return metrics.document_metrics(document_from_dict(json.loads(text)))


def load_metrics(path: Path, jobs: int = 1, stats: IngestStats | None = None) -> list[metrics.DocumentMetrics]:
    if jobs <= 1:
        return [metrics.document_metrics(d) for d in read_annotated(path, stats)]
    with open(path, encoding="utf-8") as fh:
        lines = [ln for ln in fh if ln.strip()]
    with multiprocessing.get_context("spawn").Pool(jobs) as pool:
        return pool.map(_metrics_line, lines, chunksize=256)


def build_report(all_metrics, scheme_name: str, group_by: str, weighting: str = "document",
                 pattern_classes=None):
    scheme = aggregate.get_scheme(scheme_name)
    rows = aggregate.aggregate(all_metrics, group_by, scheme, weighting)
    series = aggregate.monthly_series(all_metrics)
    scope_rows = aggregate.scope_table(all_metrics)
    plots = aggregate.plot_series(all_metrics, series, scheme, pattern_classes)
    n = len(all_metrics)
    counts = [sum(m.mixing.counts[i] for m in all_metrics) for i in range(4)]
    summary = {
        "documents": n,
        "tokens": sum(m.tokens for m in all_metrics),
        "lang_tokens": dict(zip(("LU", "DE", "FR", "EN"), counts)),
        "multilingual_documents": sum(1 for m in all_metrics if m.mixing.scope is not metrics.Scope.LU_ONLY),
        "matrix_anomalies": sum(1 for m in all_metrics if m.mixing.anomaly),
        "cmi_mean": sum(m.mixing.cmi for m in all_metrics) / n if n else 0.0,
        "scheme": scheme_name,
        "group_by": group_by,
        "weighting": weighting,
    }
    summary["multilingual_share"] = summary["multilingual_documents"] / n if n else 0.0
    return rows, series, scope_rows, plots, summary


def cmd_report(args) -> int:
    if args.scheme not in aggregate.SCHEMES:
        raise UsageError(f"unknown scheme {args.scheme!r}; built-ins: {', '.join(sorted(aggregate.SCHEMES))}")
    ann_path = require(args.annotated, "annotated corpus")
    ind_path = require(args.induction_report, "induction report")
    out = aggregate.ensure_writable(args.out)
    stats = IngestStats()
    all_metrics = load_metrics(ann_path, args.jobs, stats)
    classes = {r.pattern.id: r.pattern.klass.value for r in patterns.read_registry()[1]}
    rows, series, scope_rows, plots, summary = build_report(all_metrics, args.scheme, args.group_by,
                                                            args.weighting, classes)
    summary["errors"] = stats.errors
    induction = json.loads(ind_path.read_text(encoding="utf-8")) if ind_path else None
    formats = args.format or ["csv", "json"]
    aggregate.emit_reports(rows, series, out, formats, args.scheme, scope_rows, plots, induction, summary)
    write_manifest(out, "report", {"annotated": ann_path, "induction_report": ind_path},
                   extra={"scheme": args.scheme, "group_by": args.group_by, "formats": formats})
    print(f"{summary['documents']} documents -> {len(rows)} {args.group_by} rows, {len(series)} months in {out}")
    return EXIT_OK


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="borrowkit", description=__doc__)
    p.add_argument("--version", action="version", version=f"borrowkit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("induce", help="induce the loanword lexicon from a dictionary dump")
    s.add_argument("--dictionary", required=True)
    s.add_argument("--patterns", help="pattern registry TSV (default: built-in)")
    for name in CHAIN_FLAGS:
        s.add_argument("--" + name.replace("_", "-"), dest=name, help=f"{CHAIN_FLAGS[name].value} chain list")
    s.add_argument("--inheritance")
    s.add_argument("--overrides")
    s.add_argument("--lexicon-version", default="1")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_induce)

    s = sub.add_parser("train-lid", help="train the character n-gram language model")
    s.add_argument("--train", required=True, help="JSON-lines file of {text, lang}")
    s.add_argument("--seed", type=int, default=42)
    s.add_argument("--alpha", type=float, default=0.1)
    s.add_argument("--test-fraction", type=float, default=0.1)
    s.add_argument("--prior", choices=sorted(PRIORS), default="news")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_train_lid)

    s = sub.add_parser("annotate", help="gate, tag and label a corpus")
    s.add_argument("--corpus", required=True)
    s.add_argument("--model", required=True)
    s.add_argument("--lexicon", required=True)
    s.add_argument("--config")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--format", choices=["jsonl"], default="jsonl")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_annotate)

    s = sub.add_parser("report", help="aggregate an annotated corpus into report files")
    s.add_argument("--annotated", required=True)
    s.add_argument("--scheme", default="six")
    s.add_argument("--group-by", choices=aggregate.GROUP_BY, default="period")
    s.add_argument("--weighting", choices=["document", "token"], default="document")
    s.add_argument("--format", choices=["csv", "json"], action="append")
    s.add_argument("--induction-report")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    level = os.environ.get("BORROWKIT_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, lid.ConfigError, patterns.RegistryError, patterns.PatternSyntaxError,
            loanlex.DictionaryError, loanlex.OverrideError, aggregate.ReportError) as exc:
        print(f"borrowkit {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception:
        log.exception("internal failure")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
