"""End-to-end orchestration: per-source analysis plus cross-source reports.

A run executes mention counting, character-set construction, network
building, the centrality/coreness suite, rank shifts, per-source embedding
training, Procrustes alignment to the reference source (the first listed),
axis rankings/shifts, and optionally description extraction with log-odds
selection and axis summaries. Everything is deterministic for a fixed seed
in single-worker mode; every output file is written with sorted rows.
"""

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

from . import align as align_mod
from . import axes as axes_mod
from . import charnet, corpus, netmetrics, stats
from . import describe as describe_mod
from . import embed as embed_mod
from .coreperiphery import CorePeripheryParams, core_periphery_scores
from .corpus import _norm, tokenize
from .errors import CharrepError, DataError, StageError, UsageError

METRICS = ("weighted_degree", "betweenness", "closeness", "effective_size", "coreness")
FIGURES = ("slope_ranks", "name_similarity", "axis_shift")
EMPHASIS_RANKS = 6  # |shift| strictly greater than this is flagged


@dataclass
class SourceConfig:
    source_id: str
    corpus_path: str
    kind: str


@dataclass
class RunConfig:
    sources: list
    alias_path: str
    output_dir: str
    axis_lexicon_paths: list = field(default_factory=list)
    parse_manifest_path: str | None = None
    top_k: int = 100
    embed: embed_mod.TrainConfig = field(default_factory=embed_mod.TrainConfig)
    corep: CorePeripheryParams = field(default_factory=CorePeripheryParams)
    logodds_threshold: float = 1.64
    logodds_prior_scale: float | None = None
    seed: int = 0
    aligned_axes: bool = False
    describe_model_source: str | None = None

    def __post_init__(self):
        if len(self.sources) < 2:
            raise UsageError("comparison requires >= 2 sources")

    @classmethod
    def from_json(cls, path, seed=None, output_dir=None):
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        if seed is not None:
            raw["seed"] = seed
        if output_dir is not None:
            raw["output_dir"] = output_dir
        run_seed = raw.get("seed", 0)
        embed_cfg = dict(raw.get("embed", {}))
        embed_cfg.setdefault("seed", run_seed)
        corep_cfg = dict(raw.get("corep", {}))
        corep_cfg.setdefault("seed", run_seed)
        for key in ("alpha_grid", "beta_grid"):
            if key in corep_cfg:
                corep_cfg[key] = tuple(corep_cfg[key])
        try:
            return cls(
                sources=[SourceConfig(**s) for s in raw["sources"]],
                alias_path=raw["alias_path"],
                output_dir=raw.get("output_dir", "out"),
                axis_lexicon_paths=list(raw.get("axis_lexicon_paths", [])),
                parse_manifest_path=raw.get("parse_manifest_path"),
                top_k=raw.get("top_k", 100),
                embed=embed_mod.TrainConfig(**embed_cfg),
                corep=CorePeripheryParams(**corep_cfg),
                logodds_threshold=raw.get("logodds_threshold", 1.64),
                logodds_prior_scale=raw.get("logodds_prior_scale"),
                seed=run_seed,
                aligned_axes=raw.get("aligned_axes", False),
                describe_model_source=raw.get("describe_model_source"),
            )
        except (KeyError, TypeError) as exc:
            raise UsageError(f"bad config: {exc}") from exc

    def to_dict(self):
        return {
            "sources": [vars(s) for s in self.sources],
            "alias_path": str(self.alias_path),
            "output_dir": str(self.output_dir),
            "axis_lexicon_paths": [str(p) for p in self.axis_lexicon_paths],
            "parse_manifest_path": (
                str(self.parse_manifest_path) if self.parse_manifest_path else None
            ),
            "top_k": self.top_k,
            "embed": vars(self.embed),
            "corep": {**vars(self.corep),
                      "alpha_grid": list(self.corep.alpha_grid),
                      "beta_grid": list(self.corep.beta_grid)},
            "logodds_threshold": self.logodds_threshold,
            "logodds_prior_scale": self.logodds_prior_scale,
            "seed": self.seed,
            "aligned_axes": self.aligned_axes,
            "describe_model_source": self.describe_model_source,
        }


@dataclass
class ComparisonReport:
    """Machine-readable form of every cross-source comparison."""

    config: dict
    charset: list = field(default_factory=list)
    mention_counts: dict = field(default_factory=dict)
    chi_square: dict = field(default_factory=dict)
    metric_scores: dict = field(default_factory=dict)
    metric_ranks: dict = field(default_factory=dict)
    rank_shifts: dict = field(default_factory=dict)
    name_tokens: dict = field(default_factory=dict)
    name_similarities: dict = field(default_factory=dict)
    axis_pair: list = field(default_factory=list)
    axis_scores: dict = field(default_factory=dict)
    axis_rankings: dict = field(default_factory=dict)
    axis_shifts: dict = field(default_factory=dict)
    seed_stability: dict = field(default_factory=dict)
    logodds: dict = field(default_factory=dict)
    axis_summaries: list = field(default_factory=list)

    def to_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}

    @classmethod
    def from_dict(cls, data):
        return cls(**{k: data[k] for k in cls.__dataclass_fields__ if k in data})

    @classmethod
    def from_json(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _fmt(x):
    return f"{x:.12g}"


def source_units(docs):
    """Training/mention units: tokenized paragraphs or whole comments."""
    units = []
    for doc in docs:
        if doc.kind == "longform":
            for para in corpus.split_paragraphs(doc.text):
                units.append(tokenize(para))
        else:
            units.append(tokenize(doc.text))
    return [u for u in units if u]


def build_network(docs, charset, aliases, kind):
    if kind == "longform":
        return charnet.build_longform_network(docs, charset, aliases)
    if kind == "threaded":
        return charnet.build_threaded_network(docs, charset, aliases)
    raise DataError(f"unknown source kind: {kind!r}")


def compute_metrics(net, corep_params):
    """All five metric vectors for one network."""
    vectors = [
        netmetrics.weighted_degree(net),
        netmetrics.betweenness(net),
        netmetrics.closeness(net),
        netmetrics.effective_size(net),
        core_periphery_scores(net, corep_params),
    ]
    return {v.metric: v for v in vectors}


def pick_name_token(character, aliases, models):
    """A single-token surface form present in every given model, if any."""
    for alias in aliases.aliases(character):
        toks = [_norm(t) for t in tokenize(alias)]
        if len(toks) == 1 and all(toks[0] in m for m in models):
            return toks[0]
    return None


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except StageError:
        raise
    except CharrepError as exc:
        raise StageError(name, exc) from exc


def run_pipeline(config):
    """Execute the full comparison pipeline and write all artifacts."""
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    report = ComparisonReport(config=config.to_dict())
    manifest = {"status": "incomplete", "stages": [], "files": []}

    def finish_stage(name, files=()):
        manifest["stages"].append(name)
        manifest["files"].extend(str(f) for f in files)
        with open(out / "MANIFEST.json", "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)

    try:
        aliases = _stage("ingest", corpus.AliasTable.from_json, config.alias_path)
        corpora = {
            s.source_id: _stage("ingest", corpus.load_corpus, s.corpus_path)
            for s in config.sources
        }
        finish_stage("ingest")

        # --- mentions and character set
        tables = {
            sid: _stage("mentions", corpus.count_mentions, docs, aliases)
            for sid, docs in corpora.items()
        }
        # The configured source id is authoritative: a corpus file may embed
        # a different source label (e.g. when one file is listed twice).
        def _collapse(table):
            totals = {}
            for (_, name), count in table.counts.items():
                totals[name] = totals.get(name, 0) + count
            return dict(sorted(totals.items()))

        report.mention_counts = {sid: _collapse(t) for sid, t in tables.items()}
        _write_csv(
            out / "mention_counts.csv",
            ["source", "name", "count"],
            [(s, n, c) for s in sorted(report.mention_counts)
             for n, c in sorted(report.mention_counts[s].items())],
        )
        charset = _stage(
            "charset", corpus.build_character_set, list(tables.values()), config.top_k
        )
        report.charset = charset
        _write_csv(out / "charset.csv", ["name"], [(n,) for n in charset])
        finish_stage("mentions", [out / "mention_counts.csv", out / "charset.csv"])

        # --- chi-square over the common character set
        source_ids = [s.source_id for s in config.sources]
        table = [
            [report.mention_counts[sid].get(name, 0) for sid in source_ids]
            for name in charset
        ]
        table = [row for row in table if sum(row) > 0]
        chi = _stage("chi_square", stats.chi_square_independence, table)
        report.chi_square = vars(chi)
        finish_stage("chi_square")

        # --- networks and metrics
        nets = {}
        metric_files = []
        for src in config.sources:
            net = _stage(
                f"network:{src.source_id}", build_network,
                corpora[src.source_id], charset, aliases, src.kind,
            )
            nets[src.source_id] = net
            edge_path = out / f"network_{src.source_id}_edges.csv"
            node_path = out / f"network_{src.source_id}_nodes.csv"
            net.to_csv(edge_path, node_path)
            metric_files += [edge_path, node_path]
        finish_stage("network", metric_files)

        reference = source_ids[0]
        for sid, net in nets.items():
            vectors = _stage(f"metrics:{sid}", compute_metrics, net, config.corep)
            report.metric_scores[sid] = {
                m: dict(sorted(v.scores.items())) for m, v in vectors.items()
            }
            report.metric_ranks[sid] = {
                m: dict(sorted(netmetrics.to_ranks(v).ranks.items()))
                for m, v in vectors.items()
            }
            path = out / f"metrics_{sid}.csv"
            _write_csv(
                path, ["name", "metric", "score", "rank"],
                [(n, m, _fmt(report.metric_scores[sid][m][n]),
                  _fmt(report.metric_ranks[sid][m][n]))
                 for m in METRICS for n in sorted(report.metric_scores[sid][m])],
            )
        shift_files = []
        for metric in METRICS:
            report.rank_shifts[metric] = {}
            for sid in source_ids[1:]:
                shifts = _stage(
                    f"rank_shift:{metric}:{sid}", netmetrics.rank_shift,
                    netmetrics.RankVector(report.metric_ranks[reference][metric]),
                    netmetrics.RankVector(report.metric_ranks[sid][metric]),
                )
                report.rank_shifts[metric][sid] = dict(sorted(shifts.items()))
                path = out / f"shifts_{metric}_{sid}.csv"
                _write_csv(
                    path, ["name", "rank_from", "rank_to", "shift"],
                    [(n, _fmt(report.metric_ranks[reference][metric][n]),
                      _fmt(report.metric_ranks[sid][metric][n]), _fmt(sh))
                     for n, sh in sorted(shifts.items())],
                )
                shift_files.append(path)
        finish_stage("metrics", shift_files)

        # --- embeddings
        models = {}
        model_files = []
        for src in config.sources:
            units = source_units(corpora[src.source_id])
            model = _stage(f"embed:{src.source_id}", embed_mod.train, units, config.embed)
            models[src.source_id] = model
            path = out / f"model_{src.source_id}.txt"
            model.save(path)
            model_files.append(path)
        finish_stage("embed", model_files)

        # --- alignment to the reference model
        axis_lexicons = [
            axes_mod.load_axis_lexicon(p) for p in config.axis_lexicon_paths
        ]
        pairs = {}
        for sid in source_ids[1:]:
            pair = _stage(
                f"align:{sid}", align_mod.procrustes_align, models[sid], models[reference]
            )
            pairs[sid] = pair
            name_tokens = {}
            sims = {}
            for name in charset:
                token = pick_name_token(name, aliases, [models[sid], models[reference]])
                if token is not None and token in pair._index:
                    name_tokens[name] = token
                    sims[name] = align_mod.cross_model_similarity(pair, [token])[token]
            report.name_tokens.update(name_tokens)
            report.name_similarities[sid] = dict(sorted(sims.items()))
            if axis_lexicons:
                baseline = [t for t, _ in models[sid].vocab[:20] if t in pair._index][:10]
                try:
                    stability = align_mod.seed_stability_report(
                        pair, axis_lexicons, baseline
                    )
                    report.seed_stability[sid] = {
                        "poles": {f"{a}:{p}": v
                                  for (a, p), v in sorted(stability.pole_averages.items())},
                        "baseline": stability.baseline_average,
                        "skipped": stability.skipped,
                    }
                except DataError:
                    pass  # seeds absent from this pair's shared vocabulary
        names_union = sorted(
            {n for sims in report.name_similarities.values() for n in sims}
        )
        sim_path = out / "name_similarity.csv"
        _write_csv(
            sim_path,
            ["name"] + [f"cosine_{sid}" for sid in source_ids[1:]],
            [[n] + [
                _fmt(report.name_similarities[sid][n])
                if n in report.name_similarities.get(sid, {}) else ""
                for sid in source_ids[1:]
            ] for n in names_union],
        )
        finish_stage("align", [sim_path])

        # --- axis rankings and shifts
        if axis_lexicons:
            if len(source_ids) >= 3:
                pair_ids = [source_ids[1], source_ids[2]]
            else:
                pair_ids = [source_ids[0], source_ids[1]]
            report.axis_pair = pair_ids
            pair_models = [models[s] for s in pair_ids]
            words = {}
            for name in charset:
                token = pick_name_token(name, aliases, pair_models)
                if token is not None:
                    words[name] = token
            tokens = sorted(set(words.values()))
            rows = []
            for axis in axis_lexicons:
                report.axis_shifts[axis.name] = {}
                for method in axes_mod.METHODS:
                    for sid in pair_ids:
                        scores = {
                            w: axes_mod.score_on_axis(models[sid], w, axis, method).value
                            for w in tokens
                        }
                        ranks = axes_mod.rank_on_axis(models[sid], tokens, axis, method)
                        report.axis_scores.setdefault(sid, {}).setdefault(
                            axis.name, {}
                        )[method] = {w: scores[w] for w in sorted(scores)}
                        report.axis_rankings.setdefault(sid, {}).setdefault(
                            axis.name, {}
                        )[method] = dict(sorted(ranks.ranks.items()))
                    r1 = report.axis_rankings[pair_ids[0]][axis.name][method]
                    r2 = report.axis_rankings[pair_ids[1]][axis.name][method]
                    shifts = {w: r1[w] - r2[w] for w in tokens}
                    report.axis_shifts[axis.name][method] = dict(sorted(shifts.items()))
                    for w in sorted(tokens):
                        rows.append((
                            w, axis.name, method,
                            _fmt(report.axis_scores[pair_ids[0]][axis.name][method][w]),
                            _fmt(r1[w]), _fmt(r2[w]), _fmt(shifts[w]),
                            str(abs(shifts[w]) > EMPHASIS_RANKS).lower(),
                        ))
            axis_path = out / "axis_report.csv"
            _write_csv(
                axis_path,
                ["word", "axis", "method", "score",
                 "rank_model1", "rank_model2", "shift", "emphasized"],
                rows,
            )
            finish_stage("axes", [axis_path])

        # --- descriptions, log-odds selection, axis summaries
        if config.parse_manifest_path:
            files = _run_describe(config, aliases, models, axis_lexicons, report, out)
            finish_stage("describe", files)

        report_path = out / "report.json"
        with open(report_path, "w", encoding="utf-8") as fh:
            json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
        manifest["status"] = "complete"
        finish_stage("report", [report_path])
        return report
    except StageError:
        with open(out / "MANIFEST.json", "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
        raise


def _run_describe(config, aliases, models, axis_lexicons, report, out):
    with open(config.parse_manifest_path, encoding="utf-8") as fh:
        manifest = json.load(fh)
    descs = []
    base = Path(config.parse_manifest_path).parent
    for entry in manifest:
        path = Path(entry["path"])
        if not path.is_absolute():
            path = base / path
        sentences = describe_mod.load_conllu(path)
        descs.extend(describe_mod.extract_descriptions(
            sentences, aliases, entry["context"], doc_id=entry.get("doc_id", "")
        ))
    counts = describe_mod.description_counts(descs)
    desc_path = out / "descriptions.csv"
    from collections import Counter

    per_row = Counter((d.context_label, d.character, d.lemma, d.cls) for d in descs)
    _write_csv(
        desc_path, ["context", "character", "lemma", "cls", "count"],
        [(c, ch, l, cls, n) for (c, ch, l, cls), n in sorted(per_row.items())],
    )
    files = [desc_path]

    contexts = sorted({c for c, _ in counts})
    if len(contexts) == 2:
        ctx_a, ctx_b = contexts
        counts_a = {l: n for (c, l), n in counts.items() if c == ctx_a}
        counts_b = {l: n for (c, l), n in counts.items() if c == ctx_b}
        results = stats.weighted_log_odds(
            counts_a, counts_b, config.logodds_prior_scale
        )
        selected_a = set(stats.select_distinctive(results, config.logodds_threshold))
        selected_b = set(stats.select_distinctive(
            [stats.LogOddsResult(r.term, -r.zeta, -r.delta, r.variance) for r in results],
            config.logodds_threshold,
        ))
        report.logodds = {
            "context_a": ctx_a, "context_b": ctx_b,
            "results": {r.term: {"delta": r.delta, "zeta": r.zeta,
                                 "variance": r.variance} for r in results},
            "selected_a": sorted(selected_a), "selected_b": sorted(selected_b),
        }
        lo_path = out / "logodds.csv"
        _write_csv(
            lo_path, ["term", "count_a", "count_b", "delta", "zeta", "selected"],
            [(r.term, counts_a.get(r.term, 0), counts_b.get(r.term, 0),
              _fmt(r.delta), _fmt(r.zeta),
              str(r.term in selected_a or r.term in selected_b).lower())
             for r in results],
        )
        files.append(lo_path)

        model_sid = config.describe_model_source or config.sources[-1].source_id
        model = models[model_sid]
        summary_rows = []
        for ctx, selected in ((ctx_a, selected_a), (ctx_b, selected_b)):
            for axis in axis_lexicons:
                for method in axes_mod.METHODS:
                    try:
                        summary = stats.axis_summary(
                            model, sorted(selected), axis, method, context_label=ctx
                        )
                    except DataError:
                        continue
                    report.axis_summaries.append(vars(summary))
                    summary_rows.append((
                        ctx, axis.name, method, _fmt(summary.mean),
                        _fmt(summary.sd), summary.n_terms,
                    ))
        if summary_rows:
            sum_path = out / "axis_summaries.csv"
            _write_csv(
                sum_path, ["context", "axis", "method", "mean", "sd", "n_terms"],
                summary_rows,
            )
            files.append(sum_path)
    return files


def emit_plotdata(report, figure, path):
    """Write one figure-ready CSV from a finished report."""
    if figure not in FIGURES:
        raise UsageError(f"unknown figure: {figure!r}")
    if figure == "slope_ranks":
        if not report.metric_ranks:
            raise DataError("report has no rank tables")
        source_ids = [s["source_id"] for s in report.config["sources"]]
        names = set(report.charset)
        for sid in source_ids:
            for metric in report.metric_ranks[sid]:
                names &= set(report.metric_ranks[sid][metric])
        if not names:
            raise DataError("no character appears in every source's rank tables")
        first = source_ids[0]
        rows = []
        for metric in METRICS:
            ordered = sorted(names, key=lambda n: (report.metric_ranks[first][metric][n], n))
            for n in ordered:
                rows.append([n, metric] + [
                    _fmt(report.metric_ranks[sid][metric][n]) for sid in source_ids
                ])
        _write_csv(path, ["name", "metric"] + [f"rank_{s}" for s in source_ids], rows)
    elif figure == "name_similarity":
        if not report.name_similarities:
            raise DataError("report has no name-similarity section")
        communities = sorted(report.name_similarities)
        names = sorted(set.union(*[set(v) for v in report.name_similarities.values()]))
        _write_csv(
            path, ["name"] + [f"cosine_{c}" for c in communities],
            [[n] + [
                _fmt(report.name_similarities[c][n])
                if n in report.name_similarities[c] else ""
                for c in communities
            ] for n in names],
        )
    else:  # axis_shift
        if not report.axis_shifts:
            raise DataError("report has no axis-shift section")
        rows = []
        for axis in sorted(report.axis_shifts):
            for method in sorted(report.axis_shifts[axis]):
                shifts = report.axis_shifts[axis][method]
                r1 = report.axis_rankings[report.axis_pair[0]][axis][method]
                for w in sorted(shifts, key=lambda w: (r1[w], w)):
                    rows.append((
                        w, axis, method, _fmt(r1[w]),
                        _fmt(report.axis_rankings[report.axis_pair[1]][axis][method][w]),
                        _fmt(shifts[w]),
                        str(abs(shifts[w]) > EMPHASIS_RANKS).lower(),
                    ))
        _write_csv(
            path,
            ["word", "axis", "method", "rank_model1", "rank_model2",
             "shift", "emphasized"],
            rows,
        )
    return path
