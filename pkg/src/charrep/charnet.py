"""Weighted undirected character co-occurrence networks.

Long-form sources link characters mentioned in the same paragraph; threaded
sources link characters mentioned anywhere in the same comment tree (root
post included). Co-occurrence is binary per unit: a pair is credited once
per paragraph/tree no matter how often either name repeats inside it.
"""

import csv
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations

from .corpus import detect_mentions, split_paragraphs
from .errors import DataError, FormatError


def _pair(u, v):
    return (u, v) if u <= v else (v, u)


@dataclass
class CoocNetwork:
    nodes: set = field(default_factory=set)
    edges: dict = field(default_factory=dict)  # canonical pair -> int weight

    def add_node(self, v):
        self.nodes.add(v)

    def add_edge(self, u, v, weight=1):
        if u == v:
            raise DataError("self-loops are not allowed")
        if weight < 1:
            raise DataError("edge weights must be >= 1")
        self.nodes.update((u, v))
        key = _pair(u, v)
        self.edges[key] = self.edges.get(key, 0) + weight

    def weight(self, u, v):
        return self.edges.get(_pair(u, v), 0)

    def neighbors(self, v):
        adj = self.adjacency()
        return dict(adj.get(v, {}))

    def adjacency(self):
        adj = defaultdict(dict)
        for (u, v), w in self.edges.items():
            adj[u][v] = w
            adj[v][u] = w
        for v in self.nodes:
            adj.setdefault(v, {})
        return adj

    def degree_weight(self, v):
        return sum(self.neighbors(v).values())

    def to_csv(self, edge_path, node_path):
        with open(edge_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["source", "target", "weight"])
            for (u, v), w in sorted(self.edges.items()):
                writer.writerow([u, v, w])
        with open(node_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["name"])
            for v in sorted(self.nodes):
                writer.writerow([v])

    @classmethod
    def from_csv(cls, edge_path, node_path=None):
        net = cls()
        with open(edge_path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != ["source", "target", "weight"]:
                raise FormatError(f"bad edge-list header: {header}", line=1)
            for lineno, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) != 3:
                    raise FormatError("expected 3 columns", line=lineno)
                try:
                    net.add_edge(row[0], row[1], int(row[2]))
                except ValueError as exc:
                    raise FormatError(f"bad weight {row[2]!r}", line=lineno) from exc
        if node_path is not None:
            with open(node_path, newline="", encoding="utf-8") as fh:
                reader = csv.reader(fh)
                next(reader, None)
                for row in reader:
                    if row:
                        net.add_node(row[0])
        return net


def _unit_characters(text, charset, aliases):
    wanted = set(charset)
    return {c for c, _ in detect_mentions(text, aliases) if c in wanted}


def _accumulate(net, char_sets):
    for chars in char_sets:
        net.nodes.update(chars)
        for u, v in combinations(sorted(chars), 2):
            net.add_edge(u, v)


def build_longform_network(corpus, charset, aliases):
    """Paragraph-unit co-occurrence network over the given character set."""
    net = CoocNetwork()
    unit_sets = []
    for doc in corpus:
        if doc.kind != "longform":
            raise DataError(f"document {doc.id!r} is not longform")
        for para in split_paragraphs(doc.text):
            unit_sets.append(_unit_characters(para, charset, aliases))
    _accumulate(net, unit_sets)
    return net


def build_threaded_network(corpus, charset, aliases):
    """Comment-tree-unit co-occurrence network over the given character set.

    A tree's character set pools every comment sharing a tree_id, root post
    included. Orphan comments simply fall into whatever tree_id they carry.
    """
    trees = defaultdict(set)
    order = []
    for doc in corpus:
        if doc.kind != "threaded":
            raise DataError(f"document {doc.id!r} is not threaded")
        if not doc.tree_id:
            raise DataError(f"document {doc.id!r} missing tree_id")
        if doc.tree_id not in trees:
            order.append(doc.tree_id)
        trees[doc.tree_id].update(_unit_characters(doc.text, charset, aliases))
    net = CoocNetwork()
    _accumulate(net, [trees[t] for t in order])
    return net


def merge_networks(nets):
    """Node union, edge weights summed. merge([]) is the empty network."""
    merged = CoocNetwork()
    for net in nets:
        merged.nodes.update(net.nodes)
        for (u, v), w in net.edges.items():
            merged.add_edge(u, v, w)
    return merged
