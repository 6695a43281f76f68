"""Centrality and structure measures on co-occurrence networks.

Path-based measures treat edge distance as 1/weight: stronger ties are
shorter. Betweenness is unnormalized Brandes; closeness is harmonic so it
stays defined on disconnected networks; effective size is Burt's weighted
formulation. Scores convert to ranks with 1 = highest scorer and fractional
ranks for ties.
"""

import heapq
from dataclasses import dataclass

from .errors import DataError

# Relative tolerance for "same shortest-path length" under float distances.
_TIE_RTOL = 1e-12


@dataclass
class MetricVector:
    metric: str
    scores: dict  # canonical name -> float


@dataclass
class RankVector:
    ranks: dict  # canonical name -> float, 1 = highest scorer


def _dijkstra(adj, source):
    """Distances, shortest-path counts, and predecessor DAG from `source`.

    Returns (order, dist, sigma, preds) where `order` lists settled nodes
    by nondecreasing distance. Path-length ties are detected with a small
    relative tolerance since distances are sums of 1/weight floats.
    """
    dist = {}
    sigma = {source: 1.0}
    preds = {v: [] for v in adj}
    seen = {source: 0.0}
    heap = [(0.0, source)]
    order = []
    while heap:
        d, v = heapq.heappop(heap)
        if v in dist:
            continue
        dist[v] = d
        order.append(v)
        for w, weight in adj[v].items():
            if w in dist:
                continue
            nd = d + 1.0 / weight
            old = seen.get(w)
            if old is None or nd < old - _TIE_RTOL * (1.0 + old):
                seen[w] = nd
                heapq.heappush(heap, (nd, w))
                sigma[w] = sigma[v]
                preds[w] = [v]
            elif abs(nd - old) <= _TIE_RTOL * (1.0 + old):
                sigma[w] += sigma[v]
                preds[w].append(v)
    return order, dist, sigma, preds


def weighted_degree(net):
    adj = net.adjacency()
    return MetricVector("weighted_degree", {v: float(sum(adj[v].values())) for v in net.nodes})


def betweenness(net):
    """Brandes betweenness with 1/weight distances, unnormalized.

    Each unordered pair contributes once (the directed accumulation is
    halved for the undirected graph).
    """
    adj = net.adjacency()
    scores = {v: 0.0 for v in net.nodes}
    for s in net.nodes:
        order, _, sigma, preds = _dijkstra(adj, s)
        delta = {v: 0.0 for v in order}
        for w in reversed(order):
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                scores[w] += delta[w]
    return MetricVector("betweenness", {v: x / 2.0 for v, x in scores.items()})


def closeness(net):
    """Harmonic closeness: sum of 1/d over reachable other nodes."""
    adj = net.adjacency()
    scores = {}
    for v in net.nodes:
        _, dist, _, _ = _dijkstra(adj, v)
        scores[v] = sum(1.0 / d for u, d in dist.items() if u != v)
    return MetricVector("closeness", scores)


def effective_size(net):
    """Burt's weighted effective size of each ego network.

    e(i) = sum over neighbors j of 1 - sum over shared contacts q of
    p(i,q) * m(j,q), with p the proportional tie strength from i and m the
    tie strength from j scaled by j's strongest tie.
    """
    adj = net.adjacency()
    scores = {}
    for i in net.nodes:
        nbrs = adj[i]
        if not nbrs:
            scores[i] = 0.0
            continue
        total_i = sum(nbrs.values())
        score = 0.0
        for j in nbrs:
            max_j = max(adj[j].values())
            redundancy = 0.0
            for q in nbrs:
                if q == j:
                    continue
                w_jq = adj[j].get(q, 0)
                if w_jq:
                    redundancy += (nbrs[q] / total_i) * (w_jq / max_j)
            score += 1.0 - redundancy
        scores[i] = score
    return MetricVector("effective_size", scores)


def to_ranks(m):
    """Descending scores -> ascending ranks; ties get the mean rank."""
    items = sorted(m.scores.items(), key=lambda kv: (-kv[1], kv[0]))
    ranks = {}
    i = 0
    while i < len(items):
        j = i
        while j < len(items) and items[j][1] == items[i][1]:
            j += 1
        mean_rank = (i + 1 + j) / 2.0
        for k in range(i, j):
            ranks[items[k][0]] = mean_rank
        i = j
    return RankVector(ranks)


def rank_shift(rank_from, rank_to):
    """rank_from - rank_to on the common names; positive = moved toward 1."""
    common = rank_from.ranks.keys() & rank_to.ranks.keys()
    if not common:
        raise DataError("rank vectors share no names")
    return {v: rank_from.ranks[v] - rank_to.ranks[v] for v in common}
