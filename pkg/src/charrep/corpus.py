"""Corpus ingestion, tokenization, and alias-based mention counting.

Two corpus shapes are supported: long-form documents (chapters split into
paragraphs) and threaded documents (comments linked into trees). Character
mentions are found with a gazetteer of surface forms per canonical name,
matched case-insensitively on token boundaries, longest surface form first.
"""

import json
import re
from collections import Counter
from dataclasses import dataclass, field

from .errors import DataError, FormatError

KINDS = ("longform", "threaded")

# Alphanumeric runs, apostrophes allowed inside a token ("d'eath", "harry's").
_TOKEN_RE = re.compile(r"[^\W_]+(?:['’][^\W_]+)*", re.UNICODE)


@dataclass(frozen=True)
class Document:
    id: str
    source_id: str
    kind: str
    text: str
    title: str | None = None
    tree_id: str | None = None
    parent_id: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DataError(f"unknown document kind: {self.kind!r}")
        if self.kind == "threaded" and not self.tree_id:
            raise DataError(f"threaded document {self.id!r} missing tree_id")
        if self.kind == "longform" and (self.tree_id or self.parent_id):
            raise DataError(f"longform document {self.id!r} carries thread fields")
        if not self.text.strip():
            raise DataError(f"document {self.id!r} has empty text")

    @property
    def is_root(self):
        return self.parent_id is None


def tokenize(text):
    """Lowercased tokens of `text`, in order."""
    return [m.group().lower() for m in _TOKEN_RE.finditer(text)]


def _norm(token):
    """Matching form of a token: lowercase, trailing possessive stripped."""
    token = token.lower()
    if token.endswith(("'s", "’s")):
        token = token[:-2]
    return token


class AliasTable:
    """Canonical character name -> surface forms (+ optional gender tag).

    Each canonical name is always one of its own surface forms; no surface
    form may belong to two canonical names.
    """

    def __init__(self, entries):
        # entries: {canonical: {"aliases": [...], "gender": "F"|"M"|"U"}}
        self.entries = {}
        self._surface = {}  # normalized token tuple -> canonical
        self.max_alias_tokens = 0
        for canonical, spec in entries.items():
            aliases = list(spec.get("aliases", []))
            gender = spec.get("gender", "U")
            if gender not in ("F", "M", "U"):
                raise DataError(f"{canonical!r}: bad gender tag {gender!r}")
            if not any(a.lower() == canonical.lower() for a in aliases):
                aliases.append(canonical)
            norm_keys = []
            for alias in aliases:
                if not alias.strip():
                    raise DataError(f"{canonical!r} has an empty surface form")
                key = tuple(_norm(t) for t in tokenize(alias))
                if not key:
                    raise DataError(f"{canonical!r}: alias {alias!r} has no tokens")
                owner = self._surface.get(key)
                if owner is not None and owner != canonical:
                    raise DataError(
                        f"surface form {alias!r} maps to both {owner!r} and {canonical!r}"
                    )
                self._surface[key] = canonical
                norm_keys.append(key)
                self.max_alias_tokens = max(self.max_alias_tokens, len(key))
            self.entries[canonical] = {"aliases": aliases, "gender": gender}

    @classmethod
    def from_json(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls(json.load(fh))

    def canonical_for(self, token_tuple):
        return self._surface.get(token_tuple)

    def names(self):
        return list(self.entries)

    def gender(self, canonical):
        return self.entries[canonical]["gender"]

    def aliases(self, canonical):
        return list(self.entries[canonical]["aliases"])

    def __contains__(self, canonical):
        return canonical in self.entries

    def __len__(self):
        return len(self.entries)


@dataclass
class MentionTable:
    """Per-(source, canonical name) mention totals."""

    counts: Counter = field(default_factory=Counter)

    def add(self, source_id, name, n=1):
        self.counts[(source_id, name)] += n

    def merge(self, other):
        merged = MentionTable(Counter(self.counts))
        merged.counts.update(other.counts)
        return merged

    def sources(self):
        return sorted({s for s, _ in self.counts})

    def by_source(self, source_id):
        return {n: c for (s, n), c in self.counts.items() if s == source_id}

    def total(self, name):
        return sum(c for (_, n), c in self.counts.items() if n == name)


def load_corpus(path, format="jsonl"):
    """Read a corpus file into Documents.

    Threaded root records get their title prepended to the text with a
    newline, so title words participate in mention detection.
    """
    if format != "jsonl":
        raise DataError(f"unsupported corpus format: {format!r}")
    docs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"malformed JSON record: {exc}", line=lineno) from exc
            try:
                kind = rec.get("kind")
                text = rec.get("text", "")
                title = rec.get("title")
                if kind == "threaded" and title and rec.get("parent_id") is None:
                    text = f"{title}\n{text}"
                docs.append(
                    Document(
                        id=str(rec["id"]),
                        source_id=str(rec["source"]),
                        kind=kind,
                        text=text,
                        title=title,
                        tree_id=rec.get("tree_id"),
                        parent_id=rec.get("parent_id"),
                    )
                )
            except KeyError as exc:
                raise FormatError(f"record missing field {exc}", line=lineno) from exc
            except DataError as exc:
                raise FormatError(str(exc), line=lineno) from exc
    return docs


def save_corpus(docs, path):
    """Inverse of load_corpus (title already folded into root text)."""
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            rec = {"id": doc.id, "source": doc.source_id, "kind": doc.kind, "text": doc.text}
            if doc.title is not None:
                rec["title"] = doc.title
            if doc.tree_id is not None:
                rec["tree_id"] = doc.tree_id
            if doc.parent_id is not None:
                rec["parent_id"] = doc.parent_id
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def split_paragraphs(text):
    """Split on one-or-more blank lines; empty paragraphs are dropped."""
    parts = re.split(r"\n\s*\n", text)
    return [p.strip("\n") for p in parts if p.strip()]


def detect_mentions(text, aliases):
    """Find character mentions in `text`.

    Returns (canonical, (start, end)) pairs where the span is a half-open
    token-index range. The scan is greedy left-to-right, trying the longest
    surface form at each position, and every matched token is consumed by
    exactly one mention.
    """
    tokens = [_norm(t) for t in tokenize(text)]
    out = []
    i = 0
    n = len(tokens)
    max_len = aliases.max_alias_tokens
    while i < n:
        hit = None
        for length in range(min(max_len, n - i), 0, -1):
            canonical = aliases.canonical_for(tuple(tokens[i : i + length]))
            if canonical is not None:
                hit = (canonical, (i, i + length))
                break
        if hit:
            out.append(hit)
            i = hit[1][1]
        else:
            i += 1
    return out


def count_mentions(corpus, aliases):
    """Per-(source, canonical) mention totals over all documents."""
    table = MentionTable()
    for doc in corpus:
        for canonical, _ in detect_mentions(doc.text, aliases):
            table.add(doc.source_id, canonical)
    return table


def build_character_set(tables, k):
    """Union of each source's top-k mentioned characters.

    Output is sorted by total mention count descending, then name. Ties in
    the per-source top-k cut are broken lexicographically.
    """
    if k < 1:
        raise DataError("k must be >= 1")
    chosen = set()
    totals = Counter()
    for table in tables:
        for (_, name), count in table.counts.items():
            totals[name] += count
        for source in table.sources():
            counts = table.by_source(source)
            ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
            chosen.update(name for name, _ in ranked[:k])
    return sorted(chosen, key=lambda name: (-totals[name], name))
