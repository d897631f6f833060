"""Command-line pipeline: ingest, preprocess, stats, split, baseline,
generate, score, compare.

Exit codes: 0 success, 1 usage error, 2 data error, 3 backend/network
error. ``predictions.csv`` (header ``id,generated,reference``) is the
interchange between ``baseline``, ``generate``, and ``score``.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from prsum import backend as backend_mod
from prsum import corpus as corpus_mod
from prsum import evaluation as eval_mod
from prsum.cleaning import (
    CleaningConfig,
    SequenceBudget,
    build_target_sequence,
    assemble_source_sequence,
    clean_text,
)
from prsum.errors import BackendError, DataError, ForgeError
from prsum.lexrank import LexRankConfig, summarize_lexrank
from prsum.rouge import RougeConfig
from prsum.tokens import split_sentences

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_BACKEND = 3


class _Parser(argparse.ArgumentParser):
    """argparse parser that exits 1 (not 2) on usage errors."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _corpus_format(path: str, override: str | None) -> str:
    if override:
        return override
    return "csv" if path.endswith(".csv") else "jsonl"


def _load_corpus_arg(args) -> list[corpus_mod.PullRequestRecord]:
    return corpus_mod.load_corpus(args.input, _corpus_format(args.input, args.corpus_format))


def _source_text(record, cleaning: CleaningConfig, budget: SequenceBudget) -> str:
    return assemble_source_sequence(record, cleaning, budget).text()


def _reference_text(record, cleaning: CleaningConfig) -> str:
    return clean_text(record.description, cleaning)


# ---------------------------------------------------------------- commands


def cmd_ingest(args) -> int:
    from prsum.errors import DataError as RecordRejected
    from prsum.github import ForgeClient, RepoRef, extract_code_comments, assemble_record

    repos = []
    for slug in args.repo or []:
        owner, _, name = slug.partition("/")
        repos.append(RepoRef(owner, name))
    if args.repos_file:
        for line in Path(args.repos_file).read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if line and not line.startswith("#"):
                owner, _, name = line.partition("/")
                repos.append(RepoRef(owner, name))
    if not repos:
        raise DataError("no repositories given (use --repo or --repos-file)")

    client = ForgeClient(token=args.token)
    records = []
    rejected = 0
    for repo in repos:
        prs = client.list_merged_prs(repo, page_limit=args.page_limit)
        print(f"{repo.slug}: {len(prs)} merged PRs", file=sys.stderr)
        for pr in prs:
            messages = client.fetch_pr_commits(pr)
            comments = []
            if args.with_comments:
                comments = extract_code_comments(client.fetch_pr_diff(pr))
            try:
                records.append(assemble_record(pr, messages, comments))
            except RecordRejected:
                rejected += 1
    corpus_mod.save_corpus(records, args.out, _corpus_format(args.out, None))
    print(f"wrote {len(records)} records to {args.out} ({rejected} rejected)")
    return EXIT_OK


def cmd_preprocess(args) -> int:
    records = _load_corpus_arg(args)
    cleaning = CleaningConfig(lowercase=not args.keep_case)

    kept = []
    dropped_empty_description = []
    dropped_no_commits = []
    for record in records:
        messages = [clean_text(m, cleaning) for m in record.commit_messages]
        messages = [m for m in messages if m]
        comments = [clean_text(c, cleaning) for c in record.code_comments]
        comments = [c for c in comments if c]
        description = clean_text(record.description, cleaning)
        if not messages:
            dropped_no_commits.append(record.id)
            continue
        if not description:
            dropped_empty_description.append(record.id)
            continue
        kept.append(corpus_mod.PullRequestRecord(record.id, description, messages, comments))

    corpus_mod.save_corpus(kept, args.out, _corpus_format(args.out, None))
    report = {
        "n_in": len(records),
        "n_out": len(kept),
        "dropped_empty_description": dropped_empty_description,
        "dropped_no_commits": dropped_no_commits,
    }
    report_path = args.report or f"{args.out}.report.json"
    Path(report_path).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(
        f"kept {len(kept)}/{len(records)} records "
        f"({len(dropped_empty_description)} empty descriptions, "
        f"{len(dropped_no_commits)} without commits); report at {report_path}"
    )
    return EXIT_OK


def cmd_stats(args) -> int:
    records = _load_corpus_arg(args)
    stats = corpus_mod.compute_stats(records, bucket_width=args.bucket_width)
    if args.format == "json":
        print(json.dumps(stats.to_json_dict(), indent=2, sort_keys=True))
    else:
        print(f"records:              {stats.n_records}")
        print(f"avg article length:   {stats.avg_article_len:.2f} tokens")
        print(f"avg abstract length:  {stats.avg_abstract_len:.2f} tokens")
    if args.figures_dir:
        from prsum.figures import save_length_histograms

        for path in save_length_histograms(stats, args.figures_dir):
            print(f"figure: {path}", file=sys.stderr)
    return EXIT_OK


def cmd_split(args) -> int:
    records = _load_corpus_arg(args)
    split = corpus_mod.split_corpus(records, seed=args.seed)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, part in (("train", split.train), ("validation", split.validation), ("test", split.test)):
        corpus_mod.save_corpus(part, out_dir / f"{name}.jsonl", "jsonl")
    print(
        f"split {len(records)} records (seed {split.seed}): "
        f"{len(split.train)} train / {len(split.validation)} validation / {len(split.test)} test"
    )
    return EXIT_OK


def cmd_baseline(args) -> int:
    records = _load_corpus_arg(args)
    cleaning = CleaningConfig()
    budget = SequenceBudget()
    config = LexRankConfig(
        damping=args.damping,
        similarity_threshold=args.similarity_threshold,
        summary_token_budget=args.budget,
    )

    def summarize(record):
        sentences = split_sentences(_source_text(record, cleaning, budget))
        if not sentences:
            return None
        return summarize_lexrank(sentences, config)

    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        summaries = list(pool.map(summarize, records))

    predictions = []
    skipped = 0
    for record, summary in zip(records, summaries):
        if summary is None:
            skipped += 1
            continue
        predictions.append(
            eval_mod.PredictionRecord(record.id, summary, _reference_text(record, cleaning))
        )
    eval_mod.save_predictions(predictions, args.out)
    print(f"wrote {len(predictions)} predictions to {args.out} ({skipped} records had empty sources)")
    return EXIT_OK


def cmd_generate(args) -> int:
    records = _load_corpus_arg(args)
    cleaning = CleaningConfig()
    budget = SequenceBudget()
    endpoint = backend_mod.resolve_endpoint(args.endpoint)
    status = backend_mod.health_check(endpoint)
    if not status.ready:
        raise BackendError(f"backend {status.name!r} at {endpoint} is not ready")
    print(f"backend {status.name!r} ready at {endpoint}", file=sys.stderr)

    requests_ = []
    references = {}
    for record in records:
        source = _source_text(record, cleaning, budget)
        if not source:
            continue
        requests_.append(
            backend_mod.GenerationRequest(
                record.id, source, max_tokens=args.max_tokens, prefix=args.prefix
            )
        )
        references[record.id] = _reference_text(record, cleaning)

    result = backend_mod.generate_batch(
        requests_, endpoint, parallelism=args.jobs, retries=args.retries, timeout=args.timeout
    )
    predictions = [
        eval_mod.PredictionRecord(resp.id, resp.summary, references[resp.id])
        for resp in result.responses
    ]
    eval_mod.save_predictions(predictions, args.out)
    for failed_id, message in result.failures.items():
        print(f"failed {failed_id}: {message}", file=sys.stderr)
    print(f"wrote {len(predictions)} predictions to {args.out} ({len(result.failures)} failures)")
    if requests_ and not result.responses:
        raise BackendError("every generation request failed")
    return EXIT_OK


def cmd_score(args) -> int:
    records = eval_mod.load_predictions(args.predictions)
    report = eval_mod.score_corpus(records, RougeConfig(beta=args.beta))
    if args.out:
        eval_mod.save_report(report, args.out)
        print(f"report written to {args.out}", file=sys.stderr)
    if args.format == "json":
        print(json.dumps(eval_mod.report_to_json_dict(report), indent=2, sort_keys=True))
    else:
        print(eval_mod.render_report_text(report, name=Path(args.predictions).stem))
    if args.figures_dir:
        from prsum.figures import save_report_chart

        path = save_report_chart(
            report, Path(args.figures_dir) / "scores.png", name=Path(args.predictions).stem
        )
        print(f"figure: {path}", file=sys.stderr)
    return EXIT_OK


def cmd_compare(args) -> int:
    baseline = eval_mod.load_report(args.baseline)
    challenger = eval_mod.load_report(args.challenger)
    table = eval_mod.compare_approaches(
        baseline, challenger, baseline_name=args.baseline_name, challenger_name=args.challenger_name
    )
    if args.format == "json":
        print(json.dumps(eval_mod.comparison_to_json_dict(table), indent=2, sort_keys=True))
    else:
        print(eval_mod.render_comparison_text(table))
    if args.figures_dir:
        from prsum.figures import save_comparison_chart

        path = save_comparison_chart(table, Path(args.figures_dir) / "comparison.png")
        print(f"figure: {path}", file=sys.stderr)
    return EXIT_OK


# ----------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="prsum", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_input(p):
        p.add_argument("--in", dest="input", required=True, help="input corpus file")
        p.add_argument("--corpus-format", choices=corpus_mod.FORMATS, help="override format inference")

    p = subparsers.add_parser("ingest", help="fetch merged PRs from a forge API into a corpus")
    p.add_argument("--repo", action="append", help="owner/name (repeatable)")
    p.add_argument("--repos-file", help="file with one owner/name per line")
    p.add_argument("--out", required=True)
    p.add_argument("--token", help="API token (defaults to GITHUB_TOKEN)")
    p.add_argument("--page-limit", type=int, default=10)
    p.add_argument("--with-comments", action=argparse.BooleanOptionalAction, default=True,
                   help="also fetch diffs and extract added code comments")
    p.set_defaults(func=cmd_ingest)

    p = subparsers.add_parser("preprocess", help="clean a raw corpus and drop empty records")
    add_input(p)
    p.add_argument("--out", required=True)
    p.add_argument("--report", help="where to write the drop report (default <out>.report.json)")
    p.add_argument("--keep-case", action="store_true", help="skip lowercasing")
    p.set_defaults(func=cmd_preprocess)

    p = subparsers.add_parser("stats", help="corpus length statistics")
    add_input(p)
    p.add_argument("--format", choices=("text", "json"), default="json")
    p.add_argument("--bucket-width", type=int, default=10)
    p.add_argument("--figures-dir", help="write length-histogram figures here")
    p.set_defaults(func=cmd_stats)

    p = subparsers.add_parser("split", help="seeded train/validation/test split")
    add_input(p)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_split)

    p = subparsers.add_parser("baseline", help="LexRank extractive predictions")
    add_input(p)
    p.add_argument("--out", required=True, help="predictions CSV path")
    p.add_argument("--budget", type=int, default=50, help="summary token budget")
    p.add_argument("--damping", type=float, default=0.85)
    p.add_argument("--similarity-threshold", type=float, default=0.0)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_baseline)

    p = subparsers.add_parser("generate", help="abstractive predictions via the backend protocol")
    add_input(p)
    p.add_argument("--out", required=True, help="predictions CSV path")
    p.add_argument("--endpoint", help=f"backend URL (defaults to ${backend_mod.ENDPOINT_ENV})")
    p.add_argument("--max-tokens", type=int, default=50)
    p.add_argument("--prefix", default=backend_mod.DEFAULT_PREFIX)
    p.add_argument("--jobs", type=int, default=4)
    p.add_argument("--retries", type=int, default=2)
    p.add_argument("--timeout", type=float, default=30.0)
    p.set_defaults(func=cmd_generate)

    p = subparsers.add_parser("score", help="ROUGE-score a predictions file")
    p.add_argument("--predictions", required=True)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", help="also write the report as JSON here")
    p.add_argument("--figures-dir", help="write a score chart here")
    p.set_defaults(func=cmd_score)

    p = subparsers.add_parser("compare", help="baseline-vs-challenger comparison table")
    p.add_argument("--baseline", required=True, help="baseline report JSON")
    p.add_argument("--challenger", required=True, help="challenger report JSON")
    p.add_argument("--baseline-name", default="baseline")
    p.add_argument("--challenger-name", default="challenger")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--figures-dir", help="write a comparison chart here")
    p.set_defaults(func=cmd_compare)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except DataError as exc:
        print(f"prsum: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (BackendError, ForgeError) as exc:
        print(f"prsum: backend/network error: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except OSError as exc:
        print(f"prsum: i/o error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    raise SystemExit(main())
