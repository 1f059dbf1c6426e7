"""Command-line front end.

Two-level subcommands over the library: corpus inspection, naming
metrics, dense-sample selection, reference-game tooling, statistics,
and the collection service.  All tabular output is tab-separated with
'#' provenance headers, so it pipes cleanly into other tools.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from fractions import Fraction
from pathlib import Path

from .corpus import (
    AnalysisSet,
    Annotation,
    build_analysis_sets,
    build_splits,
    dataset_stats,
    load_corpus,
)
from .metrics import (
    MetricError,
    PerplexityParams,
    log_perplexity,
    perplexity_params,
    pnd,
    psa,
    snd,
)
from .refgames import (
    Condition,
    GameError,
    dump_games,
    dump_score_table,
    ensemble_scores,
    export_contrastive_matrix,
    generate_augmented_games,
    generate_game,
    load_games,
    load_score_table,
    score_games,
)
from .sampling import build_plane, dense_sample
from .stats import bootstrap_ci, gmm2_fit, pearson, spearman
from .textnorm import STOPWORDS_SHA256

SET_CHOICES = ("all", "full", "dense", "dense10")
METRIC_CHOICES = ("snd", "pnd", "psa", "ppl")


def _read_lines(path: str) -> list[str]:
    if path == "-":
        return sys.stdin.read().splitlines()
    return Path(path).read_text().splitlines()


def _load_annotations(path: str) -> list[Annotation]:
    return load_corpus(_read_lines(path))


def _load_ids(path: str | None) -> list[str]:
    if path is None:
        return []
    return [
        line.strip() for line in _read_lines(path)
        if line.strip() and not line.startswith("#")
    ]


def _select_set(args) -> AnalysisSet:
    """Resolve --set against the corpus; "all" is the raw corpus."""
    annotations = _load_annotations(args.corpus)
    if args.set == "all":
        members: dict[str, list[Annotation]] = {}
        for a in annotations:
            members.setdefault(a.tangram_id, []).append(a)
        return AnalysisSet("all", {t: tuple(v) for t, v in members.items()})
    sets = build_analysis_sets(annotations, _load_ids(args.dense_ids), args.seed)
    return getattr(sets, args.set)


def _mean_sd(values: list[float]) -> tuple[float, float]:
    mean = sum(values) / len(values)
    return mean, math.sqrt(sum((v - mean) ** 2 for v in values) / len(values))


def _add_corpus_options(parser, with_set: bool = True) -> None:
    parser.add_argument("--corpus", required=True, help="annotation file, '-' for stdin")
    if with_set:
        parser.add_argument("--set", choices=SET_CHOICES, default="all")
        parser.add_argument("--dense-ids", help="file of dense tangram ids, one per line")
        parser.add_argument("--seed", type=int, default=0)


# -- corpus ----------------------------------------------------------------------


def cmd_corpus_stats(args) -> int:
    stats = dataset_stats(_select_set(args))
    print(f"# corpus statistics over set {args.set!r}")
    for field in (
        "n_tangrams", "n_annotations", "whole_length_mean", "whole_length_sd",
        "part_length_mean", "part_length_sd", "vocab_whole", "vocab_part",
        "vocab_overall", "parts_per_shape_mean", "parts_per_shape_sd",
        "pieces_per_part_mean", "pieces_per_part_sd",
    ):
        value = getattr(stats, field)
        print(f"{field}\t{value:.4f}" if isinstance(value, float) else f"{field}\t{value}")
    return 0


def cmd_corpus_split(args) -> int:
    annotations = _load_annotations(args.corpus)
    ids = {a.tangram_id for a in annotations}
    splits = build_splits(ids, _load_ids(args.dense_ids), args.seed)
    named = (
        ("train", splits.train), ("dev", splits.dev),
        ("test", splits.test), ("test_dense", splits.test_dense),
    )
    sizes = ", ".join(f"{name}={len(members)}" for name, members in named)
    print(f"# splits under seed {args.seed}: {sizes}")
    for name, members in named:
        for tangram_id in sorted(members):
            print(f"{tangram_id}\t{name}")
    return 0


def cmd_corpus_sets(args) -> int:
    annotations = _load_annotations(args.corpus)
    sets = build_analysis_sets(annotations, _load_ids(args.dense_ids), args.seed)
    print(f"# analysis sets under seed {args.seed}")
    for s in (sets.full, sets.dense, sets.dense10):
        for tangram_id in sorted(s.members):
            print(f"{s.name}\t{tangram_id}\t{len(s.members[tangram_id])}")
    return 0


# -- metrics ----------------------------------------------------------------------


def cmd_metrics(args) -> int:
    s = _select_set(args)
    print(f"# metric {args.metric} over set {s.name} ({len(s)} tangrams)")
    print(f"# stopwords sha256={STOPWORDS_SHA256}")
    params = None
    if args.metric == "ppl":
        params = perplexity_params(
            (a.whole for a in s.annotations()), k=Fraction(args.smoothing_k)
        )
        print(f"# smoothing k={params.k} vocabulary={params.v}")

    values: list[float] = []
    rows: list[str] = []
    for tangram_id in sorted(s.members):
        annotations = s.members[tangram_id]
        try:
            if args.metric == "snd":
                value = snd([a.whole for a in annotations]).value
            elif args.metric == "pnd":
                value = pnd([[p.label for p in a.parts] for a in annotations]).value
            elif args.metric == "psa":
                value = psa([a.segmentation() for a in annotations]).value
            else:
                value = log_perplexity([a.whole for a in annotations], params).value
        except MetricError:
            rows.append(f"{tangram_id}\tNA")
            continue
        values.append(value)
        rows.append(f"{tangram_id}\t{value:.6f}")
    for row in rows:
        print(row)
    if values:
        mean, sd = _mean_sd(values)
        print(f"# mean={mean:.6f} sd={sd:.6f} n={len(values)}")
    return 0


# -- sampling ---------------------------------------------------------------------


def cmd_sample_dense(args) -> int:
    s = _select_set(args)
    params = perplexity_params(a.whole for a in s.annotations())
    points = build_plane(s, params)
    sample = dense_sample(
        points, args.seed,
        n_periphery=args.periphery, n_uniform=args.uniform, n_grid=args.grid,
    )
    lo_x, hi_x, lo_y, hi_y = sample.grid_bounds
    print(f"# dense sample under seed {args.seed}: "
          f"periphery={len(sample.periphery)} uniform={len(sample.uniform)} "
          f"grid={len(sample.grid)}")
    print(f"# hull_size={sample.hull_size}")
    print(f"# grid_bounds=({lo_x:.6f}, {hi_x:.6f}, {lo_y:.6f}, {hi_y:.6f})")
    for stage in ("periphery", "uniform", "grid"):
        for tangram_id in getattr(sample, stage):
            print(f"{tangram_id}\t{stage}")
    return 0


# -- games -----------------------------------------------------------------------


def _parse_condition(name: str) -> Condition:
    parts = name.split("+")
    augmented = "aug" in parts[2:] or (len(parts) == 3 and parts[2] == "aug")
    if len(parts) not in (2, 3) or (len(parts) == 3 and parts[2] != "aug"):
        raise GameError(f"unknown condition {name!r}")
    return Condition(parts[0], parts[1], augmented)


def cmd_games_generate(args) -> int:
    s = _select_set(args)
    condition = _parse_condition(args.condition)
    rng = random.Random(args.seed)
    constraints = args.constraints == "on"
    targets = [
        (tangram_id, a)
        for tangram_id in sorted(s.members)
        for a in s.members[tangram_id]
    ]
    games = []
    skipped = 0
    for tangram_id, annotation in targets:
        if args.count is not None and len(games) >= args.count:
            break
        try:
            games.append(generate_game(
                (tangram_id, annotation), s, k=args.k,
                condition=condition, constraints=constraints, rng=rng,
            ))
        except GameError as exc:
            skipped += 1
            print(f"# skipped target {tangram_id!r}: {exc}", file=sys.stderr)
    if skipped:
        print(f"# skipped {skipped} infeasible targets", file=sys.stderr)
    sys.stdout.write(dump_games(games))
    return 0


def cmd_games_augment(args) -> int:
    s = _select_set(args)
    rng = random.Random(args.seed)
    targets = [
        (tangram_id, a)
        for tangram_id in sorted(s.members)
        for a in s.members[tangram_id]
    ]
    if args.count is not None:
        targets = targets[: args.count]
    games = []
    for target in targets:
        games.extend(generate_augmented_games(target, s, k=args.k, rng=rng))
    sys.stdout.write(dump_games(games))
    return 0


def cmd_games_score(args) -> int:
    games = load_games(_read_lines(args.games))
    tables = [
        load_score_table(_read_lines(path), provenance=path) for path in args.scores
    ]
    table = tables[0] if len(tables) == 1 else ensemble_scores(tables)
    report = score_games(games, table)
    print(f"# scored {len(report.results)} games against {report.score_scale}")
    print(f"# accuracy={report.accuracy:.6f} mean_prob_correct={report.mean_prob_correct:.6f}")
    print("gameId\tpredicted\ttarget\tcorrect\ttie\tprobCorrect")
    for r in report.results:
        print(f"{r.game_id}\t{r.predicted_index}\t{r.target_index}"
              f"\t{int(r.correct)}\t{int(r.tie)}\t{r.prob_correct:.6f}")
    return 0


def cmd_games_export_contrastive(args) -> int:
    games = load_games(_read_lines(args.games))
    for record in export_contrastive_matrix(games):
        print(json.dumps(record))
    return 0


# -- stats ------------------------------------------------------------------------


def _metric_by_tangram(s: AnalysisSet, metric: str, params) -> dict[str, float]:
    out: dict[str, float] = {}
    for tangram_id in sorted(s.members):
        annotations = s.members[tangram_id]
        try:
            if metric == "snd":
                out[tangram_id] = snd([a.whole for a in annotations]).value
            elif metric == "pnd":
                out[tangram_id] = pnd(
                    [[p.label for p in a.parts] for a in annotations]
                ).value
            elif metric == "psa":
                out[tangram_id] = psa([a.segmentation() for a in annotations]).value
            else:
                out[tangram_id] = log_perplexity(
                    [a.whole for a in annotations], params
                ).value
        except MetricError:
            continue
    return out


def cmd_stats_corr(args) -> int:
    s = _select_set(args)
    params = perplexity_params(a.whole for a in s.annotations())
    xs = _metric_by_tangram(s, args.x, params)
    ys = _metric_by_tangram(s, args.y, params)
    shared = sorted(xs.keys() & ys.keys())
    x = [xs[t] for t in shared]
    y = [ys[t] for t in shared]
    print(f"# correlation of {args.x} vs {args.y} over set {s.name}")
    print(f"n\t{len(shared)}")
    print(f"pearson\t{pearson(x, y):.6f}")
    print(f"spearman\t{spearman(x, y):.6f}")
    return 0


def cmd_stats_gmm(args) -> int:
    values = [
        float(line) for line in _read_lines(args.values)
        if line.strip() and not line.startswith("#")
    ]
    fit = gmm2_fit(values, seed=args.seed)
    print(f"# two-component gaussian mixture over {len(values)} values")
    print(f"means\t{fit.means[0]:.6f}\t{fit.means[1]:.6f}")
    print(f"variances\t{fit.variances[0]:.6f}\t{fit.variances[1]:.6f}")
    print(f"weights\t{fit.weights[0]:.6f}\t{fit.weights[1]:.6f}")
    print(f"log_likelihood\t{fit.log_likelihood:.6f}")
    print(f"iterations\t{fit.iterations}")
    print(f"degenerate\t{int(fit.degenerate)}")
    return 0


# -- service ----------------------------------------------------------------------


def cmd_serve(args) -> int:
    import uvicorn

    from .service import ServiceConfig, create_app

    config = ServiceConfig.from_file(Path(args.config))
    uvicorn.run(create_app(config), host=args.host, port=args.port, log_level="info")
    return 0


def cmd_demo_data(args) -> int:
    from .service.demo import build_demo_data

    config = build_demo_data(
        Path(args.out), seed=args.seed, n_tangrams=args.tangrams,
        annotations_per=args.annotations_per,
        games_per_condition=args.games_per_condition,
    )
    print(f"# demo data written under {args.out}")
    print(f"config\t{Path(args.out) / 'config.json'}")
    print(f"compositions\t{config.compositions_file}")
    print(f"games\t{config.games_file}")
    return 0


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tangramkit",
        description="Tangram annotation corpora, naming metrics, and reference games.",
    )
    groups = parser.add_subparsers(dest="group", required=True)

    corpus = groups.add_parser("corpus", help="corpus inspection and splitting")
    corpus_sub = corpus.add_subparsers(dest="command", required=True)
    p = corpus_sub.add_parser("stats", help="length/vocabulary statistics")
    _add_corpus_options(p)
    p.set_defaults(func=cmd_corpus_stats)
    p = corpus_sub.add_parser("split", help="train/dev/test/test-dense splits")
    p.add_argument("--corpus", required=True)
    p.add_argument("--dense-ids")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_corpus_split)
    p = corpus_sub.add_parser("sets", help="Full/Dense/Dense10 analysis sets")
    p.add_argument("--corpus", required=True)
    p.add_argument("--dense-ids", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_corpus_sets)

    metrics = groups.add_parser("metrics", help="naming-divergence metrics")
    metrics_sub = metrics.add_subparsers(dest="command", required=True)
    for name in METRIC_CHOICES:
        p = metrics_sub.add_parser(name, help=f"per-tangram {name}")
        _add_corpus_options(p)
        if name == "ppl":
            p.add_argument("--smoothing-k", default="1/100",
                           help="additive smoothing constant (fraction)")
        p.set_defaults(func=cmd_metrics, metric=name)

    sample = groups.add_parser("sample", help="dense-annotation sampling")
    sample_sub = sample.add_subparsers(dest="command", required=True)
    p = sample_sub.add_parser("dense", help="periphery + uniform + grid sample")
    _add_corpus_options(p)
    p.add_argument("--periphery", type=int, default=12)
    p.add_argument("--uniform", type=int, default=25)
    p.add_argument("--grid", type=int, default=25)
    p.set_defaults(func=cmd_sample_dense)

    games = groups.add_parser("games", help="reference-game tooling")
    games_sub = games.add_subparsers(dest="command", required=True)
    p = games_sub.add_parser("generate", help="constrained k-item games")
    _add_corpus_options(p)
    p.add_argument("--condition", default="whole+black")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--constraints", choices=("on", "off"), default="on")
    p.add_argument("--count", type=int, help="stop after this many games")
    p.set_defaults(func=cmd_games_generate)
    p = games_sub.add_parser("augment", help="part-subset augmented games")
    _add_corpus_options(p)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--count", type=int, help="limit the number of target annotations")
    p.set_defaults(func=cmd_games_augment)
    p = games_sub.add_parser("score", help="evaluate a score table")
    p.add_argument("--games", required=True)
    p.add_argument("--scores", required=True, nargs="+",
                   help="score tables; several are combined multiplicatively")
    p.set_defaults(func=cmd_games_score)
    p = games_sub.add_parser("export-contrastive", help="k-by-k matching records")
    p.add_argument("--games", required=True)
    p.set_defaults(func=cmd_games_export_contrastive)

    stats = groups.add_parser("stats", help="correlations and mixture fits")
    stats_sub = stats.add_subparsers(dest="command", required=True)
    p = stats_sub.add_parser("corr", help="metric-vs-metric correlation")
    _add_corpus_options(p)
    p.add_argument("--x", choices=METRIC_CHOICES, required=True)
    p.add_argument("--y", choices=METRIC_CHOICES, required=True)
    p.set_defaults(func=cmd_stats_corr)
    p = stats_sub.add_parser("gmm", help="two-component 1-d gaussian mixture")
    p.add_argument("--values", required=True, help="one value per line, '-' for stdin")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_stats_gmm)

    p = groups.add_parser("serve", help="run the collection service")
    p.add_argument("--config", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    p = groups.add_parser("demo-data", help="build a self-contained demo dataset")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tangrams", type=int, default=24)
    p.add_argument("--annotations-per", type=int, default=12)
    p.add_argument("--games-per-condition", type=int, default=40)
    p.set_defaults(func=cmd_demo_data)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        sys.stderr.close()
        return 0
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
