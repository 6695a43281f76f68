"""`charrep` command line: each pipeline stage runnable standalone, plus a
full `report` run. Exit codes: 0 success, 1 usage error, 2 data error.
"""

import argparse
import csv
import json
import sys
from pathlib import Path

from . import axes as axes_mod
from . import charnet, corpus, netmetrics, pipeline, stats
from . import align as align_mod
from . import describe as describe_mod
from . import embed as embed_mod
from .coreperiphery import CorePeripheryParams, core_periphery_scores
from .errors import CharrepError, UsageError


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read_words(path):
    with open(path, encoding="utf-8") as fh:
        return [line.strip() for line in fh if line.strip()]


def _write_rows(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _cmd_ingest(args):
    docs = corpus.load_corpus(args.corpus)
    if args.out:
        corpus.save_corpus(docs, args.out)
    print(f"{len(docs)} documents")


def _cmd_mentions(args):
    docs = corpus.load_corpus(args.corpus)
    aliases = corpus.AliasTable.from_json(args.aliases)
    table = corpus.count_mentions(docs, aliases)
    _write_rows(
        args.out, ["source", "name", "count"],
        sorted((s, n, c) for (s, n), c in table.counts.items()),
    )


def _load_mention_csv(path):
    table = corpus.MentionTable()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        next(reader, None)
        for row in reader:
            if row:
                table.add(row[0], row[1], int(row[2]))
    return table


def _cmd_charset(args):
    tables = [_load_mention_csv(p) for p in args.mentions]
    names = corpus.build_character_set(tables, args.k)
    _write_rows(args.out, ["name"], [(n,) for n in names])


def _read_charset(path):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        next(reader, None)
        return [row[0] for row in reader if row]


def _cmd_network(args):
    docs = corpus.load_corpus(args.corpus)
    aliases = corpus.AliasTable.from_json(args.aliases)
    charset = _read_charset(args.charset)
    net = pipeline.build_network(docs, charset, aliases, args.kind)
    net.to_csv(f"{args.out_prefix}_edges.csv", f"{args.out_prefix}_nodes.csv")


def _cmd_metrics(args):
    net = charnet.CoocNetwork.from_csv(args.edges, args.nodes)
    params = CorePeripheryParams(seed=args.seed)
    vectors = pipeline.compute_metrics(net, params)
    rows = []
    for metric in pipeline.METRICS:
        ranks = netmetrics.to_ranks(vectors[metric]).ranks
        for name in sorted(vectors[metric].scores):
            rows.append((name, metric, f"{vectors[metric].scores[name]:.12g}",
                         f"{ranks[name]:.12g}"))
    _write_rows(args.out, ["name", "metric", "score", "rank"], rows)


def _cmd_embed(args):
    docs = corpus.load_corpus(args.corpus)
    units = pipeline.source_units(docs)
    config = embed_mod.TrainConfig(
        dim=args.dim, window=args.window, min_count=args.min_count,
        negative=args.negative, epochs=args.epochs, seed=args.seed,
    )
    model = embed_mod.train(units, config)
    model.save(args.out)


def _cmd_align(args):
    source = embed_mod.EmbeddingModel.load(args.source)
    target = embed_mod.EmbeddingModel.load(args.target)
    pair = align_mod.procrustes_align(source, target)
    names = _read_words(args.names)
    sims = align_mod.cross_model_similarity(pair, names)
    _write_rows(args.out, ["name", "cosine"],
                [(n, f"{sims[n]:.12g}") for n in names])


def _cmd_axes(args):
    models = [embed_mod.EmbeddingModel.load(p) for p in args.models]
    words = _read_words(args.words)
    rows = []
    for axis_path in args.axis:
        axis = axes_mod.load_axis_lexicon(axis_path)
        for method in args.methods:
            ranks = [axes_mod.rank_on_axis(m, words, axis, method).ranks for m in models]
            for w in sorted(words):
                score = axes_mod.score_on_axis(models[0], w, axis, method).value
                row = [w, axis.name, method, f"{score:.12g}"]
                row += [f"{r[w]:.12g}" for r in ranks]
                if len(ranks) == 2:
                    shift = ranks[0][w] - ranks[1][w]
                    row += [f"{shift:.12g}",
                            str(abs(shift) > pipeline.EMPHASIS_RANKS).lower()]
                rows.append(row)
    header = ["word", "axis", "method", "score"]
    header += [f"rank_model{i + 1}" for i in range(len(args.models))]
    if len(args.models) == 2:
        header += ["shift", "emphasized"]
    _write_rows(args.out, header, rows)


def _cmd_describe(args):
    aliases = corpus.AliasTable.from_json(args.aliases)
    descs = []
    if args.manifest:
        with open(args.manifest, encoding="utf-8") as fh:
            manifest = json.load(fh)
        base = Path(args.manifest).parent
        entries = [((base / e["path"]) if not Path(e["path"]).is_absolute()
                    else Path(e["path"]), e["context"], e.get("doc_id", ""))
                   for e in manifest]
    else:
        entries = [(Path(p), args.context, "") for p in args.conllu]
    for path, context, doc_id in entries:
        sentences = describe_mod.load_conllu(path)
        descs.extend(describe_mod.extract_descriptions(
            sentences, aliases, context, doc_id=doc_id))
    from collections import Counter

    per_row = Counter((d.context_label, d.character, d.lemma, d.cls) for d in descs)
    _write_rows(args.out, ["context", "character", "lemma", "cls", "count"],
                [(c, ch, l, cls, n) for (c, ch, l, cls), n in sorted(per_row.items())])


def _read_counts_csv(path):
    counts = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        next(reader, None)
        for row in reader:
            if row:
                counts[row[0]] = counts.get(row[0], 0) + int(row[-1])
    return counts


def _cmd_logodds(args):
    counts_a = _read_counts_csv(args.counts_a)
    counts_b = _read_counts_csv(args.counts_b)
    results = stats.weighted_log_odds(counts_a, counts_b, args.prior_scale)
    selected = set(stats.select_distinctive(results, args.threshold))
    selected |= {
        r.term for r in results if -r.zeta > args.threshold
    }
    _write_rows(
        args.out, ["term", "count_a", "count_b", "delta", "zeta", "selected"],
        [(r.term, counts_a.get(r.term, 0), counts_b.get(r.term, 0),
          f"{r.delta:.12g}", f"{r.zeta:.12g}", str(r.term in selected).lower())
         for r in results],
    )


def _cmd_report(args):
    config = pipeline.RunConfig.from_json(args.config, seed=args.seed, output_dir=args.out)
    pipeline.run_pipeline(config)


def _cmd_plotdata(args):
    report = pipeline.ComparisonReport.from_json(args.report)
    pipeline.emit_plotdata(report, args.figure, args.out)


def build_parser():
    parser = _Parser(prog="charrep", description="Character representation analytics")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate and normalize a corpus file")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_ingest)

    p = sub.add_parser("mentions", help="count character mentions")
    p.add_argument("--corpus", required=True)
    p.add_argument("--aliases", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_mentions)

    p = sub.add_parser("charset", help="build the common character set")
    p.add_argument("--mentions", nargs="+", required=True)
    p.add_argument("--k", type=int, default=100)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_charset)

    p = sub.add_parser("network", help="build a co-occurrence network")
    p.add_argument("--corpus", required=True)
    p.add_argument("--kind", choices=("longform", "threaded"), required=True)
    p.add_argument("--charset", required=True)
    p.add_argument("--aliases", required=True)
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(fn=_cmd_network)

    p = sub.add_parser("metrics", help="centrality suite on a network CSV")
    p.add_argument("--edges", required=True)
    p.add_argument("--nodes")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_metrics)

    p = sub.add_parser("embed", help="train an embedding model for one corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--dim", type=int, default=100)
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--min-count", type=int, default=5)
    p.add_argument("--negative", type=int, default=5)
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_embed)

    p = sub.add_parser("align", help="Procrustes-align two models")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--names", required=True, help="file with one token per line")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_align)

    p = sub.add_parser("axes", help="axis scores and ranks for a word list")
    p.add_argument("--models", nargs="+", required=True)
    p.add_argument("--axis", nargs="+", required=True)
    p.add_argument("--words", required=True)
    p.add_argument("--methods", nargs="+", default=list(axes_mod.METHODS),
                   choices=axes_mod.METHODS)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_axes)

    p = sub.add_parser("describe", help="extract descriptions from parses")
    p.add_argument("--conllu", nargs="*", default=[])
    p.add_argument("--manifest")
    p.add_argument("--context", default="")
    p.add_argument("--aliases", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_describe)

    p = sub.add_parser("logodds", help="weighted log-odds between two count files")
    p.add_argument("--counts-a", required=True)
    p.add_argument("--counts-b", required=True)
    p.add_argument("--prior-scale", type=float, default=None)
    p.add_argument("--threshold", type=float, default=1.64)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_logodds)

    p = sub.add_parser("report", help="run the full comparison pipeline")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_report)

    p = sub.add_parser("plotdata", help="emit a figure-ready CSV from a report")
    p.add_argument("--report", required=True)
    p.add_argument("--figure", choices=pipeline.FIGURES, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_plotdata)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.fn(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except CharrepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
