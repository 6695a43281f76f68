"""Deterministic test fixtures and independent verification oracles.

The oracles are intentionally naive (exhaustive enumeration, exact rational
arithmetic, finite differences) and deliberately share no code with the
production implementations they check. Graph oracles are only meant for
n <= 8.

Run `python -m charrep.fixtures --out DIR [--seed N]` to regenerate the
bundled 3-source mini-corpus; it prints a content hash that tests pin.
"""

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .charnet import CoocNetwork
from .corpus import save_corpus, Document
from .errors import DataError

# ---------------------------------------------------------------------------
# graph oracles


def _fraction_adjacency(net):
    names = sorted(net.nodes)
    adj = {v: {} for v in names}
    for (u, v), w in net.edges.items():
        adj[u][v] = Fraction(1, w)
        adj[v][u] = Fraction(1, w)
    return names, adj


def oracle_all_pairs_distances(net):
    """Exact shortest-path distances by Floyd-Warshall over rationals."""
    names, adj = _fraction_adjacency(net)
    dist = {u: {v: (Fraction(0) if u == v else adj[u].get(v)) for v in names} for u in names}
    for k in names:
        for i in names:
            dik = dist[i][k]
            if dik is None:
                continue
            for j in names:
                dkj = dist[k][j]
                if dkj is None:
                    continue
                alt = dik + dkj
                if dist[i][j] is None or alt < dist[i][j]:
                    dist[i][j] = alt
    return dist


def oracle_closeness(net):
    dist = oracle_all_pairs_distances(net)
    return {
        v: float(sum(Fraction(1) / d for u, d in row.items() if u != v and d))
        for v, row in dist.items()
    }


def oracle_betweenness(net):
    """Betweenness by enumerating every simple path between every pair."""
    names, adj = _fraction_adjacency(net)
    bc = {v: Fraction(0) for v in names}

    def all_paths(s, t):
        paths = []
        stack = [(s, [s], Fraction(0))]
        while stack:
            v, path, length = stack.pop()
            if v == t:
                paths.append((length, path))
                continue
            for w, l in adj[v].items():
                if w not in path:
                    stack.append((w, path + [w], length + l))
        return paths

    for s, t in itertools.combinations(names, 2):
        paths = all_paths(s, t)
        if not paths:
            continue
        dmin = min(length for length, _ in paths)
        shortest = [p for length, p in paths if length == dmin]
        sigma = len(shortest)
        for path in shortest:
            for v in path[1:-1]:
                bc[v] += Fraction(1, sigma)
    return {v: float(x) for v, x in bc.items()}


def oracle_weighted_degree(net):
    totals = {v: 0.0 for v in net.nodes}
    for (u, v), w in net.edges.items():
        totals[u] += w
        totals[v] += w
    return totals


def oracle_effective_size(net):
    """Direct evaluation of the Burt sums per ego."""
    weights = {}
    for (u, v), w in net.edges.items():
        weights[(u, v)] = w
        weights[(v, u)] = w
    nbrs = {v: [] for v in net.nodes}
    for (u, v) in net.edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    out = {}
    for i in net.nodes:
        if not nbrs[i]:
            out[i] = 0.0
            continue
        strength_i = sum(weights[(i, k)] for k in nbrs[i])
        e = 0.0
        for j in nbrs[i]:
            strongest_j = max(weights[(j, k)] for k in nbrs[j])
            red = 0.0
            for q in nbrs[i]:
                if q == j:
                    continue
                w_jq = weights.get((j, q), 0)
                red += (weights[(i, q)] / strength_i) * (w_jq / strongest_j)
            e += 1.0 - red
        out[i] = e
    return out


def oracle_best_core_quality(net, alpha, beta):
    """Max over all node permutations of the core-quality objective."""
    names = sorted(net.nodes)
    n = len(names)
    if n > 8:
        raise DataError("all-permutation oracle is capped at n <= 8")
    m = math.floor(beta * n)
    cvals = []
    for i in range(1, n + 1):
        if i <= m:
            cvals.append(i * (1.0 - alpha) / (2.0 * m))
        else:
            cvals.append((i - m) * (1.0 - alpha) / (2.0 * max(n - m, 1)) + (1.0 + alpha) / 2.0)
    w = np.zeros((n, n))
    idx = {v: i for i, v in enumerate(names)}
    for (u, v), weight in net.edges.items():
        w[idx[u], idx[v]] = weight
        w[idx[v], idx[u]] = weight
    best = 0.0
    cvals = np.array(cvals)
    for perm in itertools.permutations(range(n)):
        c_of = np.empty(n)
        for position, node in enumerate(perm):
            c_of[node] = cvals[position]
        quality = float(c_of @ w @ c_of) / 2.0
        if quality > best:
            best = quality
    return best


# ---------------------------------------------------------------------------
# log-odds and gradient oracles


def oracle_log_odds(counts_a, counts_b, prior_scale):
    """Direct plain-Python evaluation of the informative-prior log-odds."""
    n_a = sum(counts_a.values())
    n_b = sum(counts_b.values())
    pooled = n_a + n_b
    out = {}
    for term in set(counts_a) | set(counts_b):
        y_a = counts_a.get(term, 0)
        y_b = counts_b.get(term, 0)
        alpha = prior_scale * (y_a + y_b) / pooled
        odds_a = (y_a + alpha) / (n_a + prior_scale - y_a - alpha)
        odds_b = (y_b + alpha) / (n_b + prior_scale - y_b - alpha)
        delta = math.log(odds_a) - math.log(odds_b)
        var = 1.0 / (y_a + alpha) + 1.0 / (y_b + alpha)
        out[term] = (delta / math.sqrt(var), delta, var)
    return out


def oracle_sgns_loss(center, context, negatives):
    """Scalar SGNS pair loss, written independently with math.*."""
    def sigmoid(x):
        return 1.0 / (1.0 + math.exp(-x))

    dot = sum(a * b for a, b in zip(center, context))
    loss = -math.log(sigmoid(dot))
    for neg in negatives:
        dot_n = sum(a * b for a, b in zip(center, neg))
        loss += -math.log(sigmoid(-dot_n))
    return loss


def finite_difference_gradients(center, context, negatives, h=1e-6):
    """Central-difference gradients of the SGNS pair loss."""
    center = [float(x) for x in center]
    context = [float(x) for x in context]
    negatives = [[float(x) for x in row] for row in negatives]

    def bump(vec, i, eps):
        out = list(vec)
        out[i] += eps
        return out

    g_center = [
        (oracle_sgns_loss(bump(center, i, h), context, negatives)
         - oracle_sgns_loss(bump(center, i, -h), context, negatives)) / (2 * h)
        for i in range(len(center))
    ]
    g_context = [
        (oracle_sgns_loss(center, bump(context, i, h), negatives)
         - oracle_sgns_loss(center, bump(context, i, -h), negatives)) / (2 * h)
        for i in range(len(context))
    ]
    g_negs = []
    for k, neg in enumerate(negatives):
        row = []
        for i in range(len(neg)):
            plus = [bump(neg, i, h) if j == k else n for j, n in enumerate(negatives)]
            minus = [bump(neg, i, -h) if j == k else n for j, n in enumerate(negatives)]
            row.append(
                (oracle_sgns_loss(center, context, plus)
                 - oracle_sgns_loss(center, context, minus)) / (2 * h)
            )
        g_negs.append(row)
    return g_center, g_context, g_negs


# ---------------------------------------------------------------------------
# generators


def generate_planted_core_graph(core_size, periphery_size, attach_degree, seed):
    """Complete core plus periphery nodes tied to random core nodes."""
    if core_size < 2:
        raise DataError("core_size must be >= 2")
    if attach_degree > core_size:
        raise DataError("attach_degree cannot exceed core_size")
    rng = np.random.default_rng(seed)
    net = CoocNetwork()
    core = [f"core{i}" for i in range(core_size)]
    for u, v in itertools.combinations(core, 2):
        net.add_edge(u, v)
    for p in range(periphery_size):
        targets = rng.choice(core_size, size=attach_degree, replace=False)
        for t in sorted(targets):
            net.add_edge(f"peri{p}", core[t])
    return net


def random_weighted_graph(n, seed, edge_prob=0.6, max_weight=9):
    """Connected-ish random weighted graph for oracle comparisons."""
    rng = np.random.default_rng(seed)
    net = CoocNetwork()
    names = [f"n{i}" for i in range(n)]
    for v in names:
        net.add_node(v)
    for u, v in itertools.combinations(names, 2):
        if rng.random() < edge_prob:
            net.add_edge(u, v, int(rng.integers(1, max_weight + 1)))
    return net


@dataclass
class CharacterSpec:
    name: str
    aliases: tuple
    gender: str = "U"
    rate: float = 1.0  # relative chance of solo mentions
    adjectives: tuple = ()  # planted descriptive words


@dataclass
class SourceSpec:
    source_id: str
    kind: str  # longform | threaded
    n_units: int  # paragraphs (grouped into docs) or comment trees
    seed_offset: int = 0


@dataclass
class CorpusSpec:
    characters: list = field(default_factory=list)
    sources: list = field(default_factory=list)
    pair_rates: dict = field(default_factory=dict)  # frozenset pair -> weight
    filler_vocab: tuple = ()
    tokens_per_unit: int = 10
    adjective_prob: float = 0.6


def _pair_key(a, b):
    return frozenset((a, b))


def _unit_tokens(spec, rng):
    """One paragraph/comment as text, with 0-2 planted character mentions."""
    words = list(spec.filler_vocab)
    probs = np.array([1.0 / (i + 2) for i in range(len(words))])
    probs /= probs.sum()
    n_fill = max(3, spec.tokens_per_unit + int(rng.integers(-2, 3)))
    tokens = [words[i] for i in rng.choice(len(words), size=n_fill, p=probs)]

    chars = [c for c in spec.characters]
    if not chars:
        return " ".join(tokens)
    roll = rng.random()
    picked = []
    if roll < 0.25:
        pass  # no character in this unit
    elif roll < 0.55 or len(chars) < 2:
        rates = np.array([c.rate for c in chars], dtype=float)
        picked = [chars[rng.choice(len(chars), p=rates / rates.sum())]]
    else:
        pairs = list(itertools.combinations(range(len(chars)), 2))
        weights = np.array([
            spec.pair_rates.get(_pair_key(chars[i].name, chars[j].name), 1.0)
            * chars[i].rate * chars[j].rate
            for i, j in pairs
        ])
        i, j = pairs[rng.choice(len(pairs), p=weights / weights.sum())]
        picked = [chars[i], chars[j]]

    for c in picked:
        alias = c.aliases[int(rng.integers(0, len(c.aliases)))]
        at = int(rng.integers(0, len(tokens) + 1))
        fragment = [alias]
        if c.adjectives and rng.random() < spec.adjective_prob:
            adj = c.adjectives[int(rng.integers(0, len(c.adjectives)))]
            fragment += ["was", adj]
        tokens[at:at] = fragment
    return " ".join(tokens)


def generate_synthetic_corpus(spec, seed, out_dir):
    """Write one corpus JSONL per source plus the alias table.

    Returns {"sources": {source_id: path}, "aliases": path}.
    """
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {"sources": {}}
    for source in spec.sources:
        rng = np.random.default_rng(seed + source.seed_offset)
        docs = []
        if source.kind == "longform":
            paras_per_doc = 8
            unit_texts = [_unit_tokens(spec, rng) for _ in range(source.n_units)]
            for d in range(0, len(unit_texts), paras_per_doc):
                chunk = unit_texts[d : d + paras_per_doc]
                docs.append(Document(
                    id=f"{source.source_id}-doc{d // paras_per_doc}",
                    source_id=source.source_id,
                    kind="longform",
                    text="\n\n".join(chunk),
                ))
        elif source.kind == "threaded":
            for t in range(source.n_units):
                tree = f"{source.source_id}-tree{t}"
                n_comments = int(rng.integers(1, 4))
                root_text = _unit_tokens(spec, rng)
                docs.append(Document(
                    id=f"{tree}-root", source_id=source.source_id, kind="threaded",
                    text=root_text, tree_id=tree,
                ))
                for c in range(n_comments):
                    docs.append(Document(
                        id=f"{tree}-c{c}", source_id=source.source_id, kind="threaded",
                        text=_unit_tokens(spec, rng), tree_id=tree,
                        parent_id=f"{tree}-root",
                    ))
        else:
            raise DataError(f"unknown source kind: {source.kind!r}")
        path = out_dir / f"{source.source_id}.jsonl"
        save_corpus(docs, path)
        paths["sources"][source.source_id] = path

    alias_path = out_dir / "aliases.json"
    with open(alias_path, "w", encoding="utf-8") as fh:
        json.dump(
            {c.name: {"aliases": list(c.aliases), "gender": c.gender}
             for c in spec.characters},
            fh, indent=2, sort_keys=True,
        )
    paths["aliases"] = alias_path
    return paths


def generate_pair_corpus(n_sentences, n_pairs, seed, pair_prob=0.08,
                         sentence_len=8, topic_size=20, n_fillers=2000):
    """Sentences where each planted token pair co-occurs only with itself.

    Every pair owns a private topic vocabulary; its two tokens appear only
    in that topic's sentences, always together. The remaining sentences are
    drawn from a large flat filler vocabulary. Returns (units, pairs).
    Shuffling all tokens across units (see shuffle_corpus) gives the
    matched no-signal baseline: same frequencies, no co-occurrence signal.
    """
    rng = np.random.default_rng(seed)
    pairs = [(f"plantx{i}", f"planty{i}") for i in range(n_pairs)]
    units = []
    for _ in range(n_sentences):
        if rng.random() < pair_prob:
            i = int(rng.integers(0, n_pairs))
            tokens = [f"topic{i}w{j}"
                      for j in rng.integers(0, topic_size, size=sentence_len)]
            at = int(rng.integers(0, len(tokens) + 1))
            tokens[at:at] = list(pairs[i])
        else:
            tokens = [f"fill{j}" for j in rng.integers(0, n_fillers, size=sentence_len)]
        units.append(tokens)
    return units, pairs


def shuffle_corpus(units, seed):
    """Token-level shuffle across the whole corpus, unit shapes preserved."""
    rng = np.random.default_rng(seed)
    flat = [t for unit in units for t in unit]
    rng.shuffle(flat)
    out = []
    i = 0
    for unit in units:
        out.append(flat[i : i + len(unit)])
        i += len(unit)
    return out


# ---------------------------------------------------------------------------
# bundled mini-fandom


def mini_fandom_spec():
    """The 3-source synthetic mini-fandom used by the end-to-end tests."""
    characters = [
        CharacterSpec("Alba Reyne", ("alba", "alba reyne", "lady reyne"), "F", 3.0,
                      ("gentle", "soft")),
        CharacterSpec("Bram Koth", ("bram", "bram koth"), "M", 3.0, ("harsh", "fierce")),
        CharacterSpec("Cora Vell", ("cora", "cora vell"), "F", 2.0, ("gentle",)),
        CharacterSpec("Dain Mar", ("dain", "dain mar"), "M", 2.0, ("fierce",)),
        CharacterSpec("Edda Lin", ("edda",), "F", 1.5, ()),
        CharacterSpec("Finn Ro", ("finn",), "M", 1.5, ()),
        CharacterSpec("Gwen Pike", ("gwen",), "F", 1.0, ("soft",)),
        CharacterSpec("Holt Vane", ("holt",), "M", 1.0, ("harsh",)),
    ]
    fillers = tuple(
        "the a of and to in was with said went came house road river stone "
        "light dark day night hand eye voice door wind rain tree hill king "
        "queen sword book letter horse ship town fire water story friend "
        "enemy magic dream song winter summer morning evening table garden "
        "castle forest".split()
    )
    sources = [
        SourceSpec("canon", "longform", 360, seed_offset=1),
        SourceSpec("forum", "threaded", 150, seed_offset=2),
        SourceSpec("archive", "longform", 360, seed_offset=3),
    ]
    pair_rates = {
        _pair_key("Alba Reyne", "Bram Koth"): 10.0,
        _pair_key("Cora Vell", "Dain Mar"): 5.0,
        _pair_key("Gwen Pike", "Holt Vane"): 3.0,
    }
    return CorpusSpec(
        characters=characters, sources=sources, pair_rates=pair_rates,
        filler_vocab=fillers, tokens_per_unit=12,
    )


def toy_axis_lexicons():
    return [
        {"name": "gentle-harsh", "left": ["gentle", "soft"], "right": ["harsh", "fierce"]},
        {"name": "light-dark", "left": ["light", "day"], "right": ["dark", "night"]},
    ]


def write_mini_fandom(out_dir, seed=20240101):
    """Materialize the mini-fandom fixture files; returns all paths."""
    from pathlib import Path

    out_dir = Path(out_dir)
    paths = generate_synthetic_corpus(mini_fandom_spec(), seed, out_dir)
    axis_paths = []
    for lex in toy_axis_lexicons():
        p = out_dir / f"axis_{lex['name']}.json"
        with open(p, "w", encoding="utf-8") as fh:
            json.dump(lex, fh, indent=2, sort_keys=True)
        axis_paths.append(p)
    paths["axes"] = axis_paths
    return paths


def content_hash(paths):
    import hashlib

    digest = hashlib.sha256()
    for path in sorted(str(p) for p in paths):
        with open(path, "rb") as fh:
            digest.update(fh.read())
    return digest.hexdigest()


def _flatten(paths):
    out = [paths["aliases"], *paths["axes"]]
    out.extend(paths["sources"].values())
    return out


def main(argv=None):
    import argparse

    parser = argparse.ArgumentParser(description="Regenerate bundled fixture corpora")
    parser.add_argument("--out", required=True)
    parser.add_argument("--seed", type=int, default=20240101)
    args = parser.parse_args(argv)
    paths = write_mini_fandom(args.out, seed=args.seed)
    print(content_hash(_flatten(paths)))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
