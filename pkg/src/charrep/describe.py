"""Character description extraction from dependency parses.

Consumes standard 10-column dependency files produced by an external
parser. Four extraction rules attribute content words to character tokens:
adjectival modifiers, copular predicates, appositions, and verbs with a
character subject. A description is dropped when its governing word has a
negation dependent.
"""

from collections import Counter
from dataclasses import dataclass

from .corpus import _norm
from .errors import FormatError

# Dependency/POS labels follow Universal Dependencies; remappable via the
# `labels` argument for other schemes.
DEFAULT_LABELS = {
    "amod": ("amod",),
    "nsubj": ("nsubj", "nsubj:pass"),
    "cop": ("cop",),
    "appos": ("appos",),
    "neg_deprels": ("neg",),
    "neg_lemmas": ("not", "never", "no", "n't"),
    "adj_pos": ("ADJ", "JJ", "JJR", "JJS"),
    "noun_pos": ("NOUN", "PROPN", "NN", "NNS", "NNP", "NNPS"),
    "verb_pos": ("VERB", "VB", "VBD", "VBG", "VBN", "VBP", "VBZ"),
}


@dataclass(frozen=True)
class ParsedToken:
    index: int  # 1-based within sentence
    form: str
    lemma: str
    upos: str
    head: int  # 0 = root
    deprel: str


@dataclass(frozen=True)
class Description:
    character: str
    lemma: str
    cls: str  # adjective | noun | verb
    context_label: str
    doc_id: str


def load_conllu(path):
    """Sentences of ParsedTokens; comments and multiword ranges skipped."""
    sentences = []
    current = []
    start_line = None

    def flush(at_line):
        if not current:
            return
        n = len(current)
        for tok in current:
            if not 0 <= tok.head <= n:
                raise FormatError(
                    f"token {tok.index} has head {tok.head} outside sentence of {n}",
                    line=at_line,
                )
        sentences.append(list(current))
        current.clear()

    lineno = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                flush(lineno)
                start_line = None
                continue
            if line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 10:
                raise FormatError(f"expected 10 columns, got {len(cols)}", line=lineno)
            if "-" in cols[0] or "." in cols[0]:
                continue  # multiword-token range / empty node
            try:
                index = int(cols[0])
                head = int(cols[6])
            except ValueError as exc:
                raise FormatError(f"bad index/head: {exc}", line=lineno) from exc
            if start_line is None:
                start_line = lineno
            current.append(
                ParsedToken(index=index, form=cols[1], lemma=cols[2], upos=cols[3],
                            head=head, deprel=cols[7])
            )
        flush(lineno)
    return sentences


def _character_tokens(sentence, aliases):
    """Map token index -> canonical name, longest alias run first."""
    norms = [_norm(t.form) for t in sentence]
    owner = {}
    i = 0
    while i < len(sentence):
        hit_len = 0
        hit_name = None
        for length in range(min(aliases.max_alias_tokens, len(sentence) - i), 0, -1):
            name = aliases.canonical_for(tuple(norms[i : i + length]))
            if name is not None:
                hit_len, hit_name = length, name
                break
        if hit_name:
            for j in range(i, i + hit_len):
                owner[sentence[j].index] = hit_name
            i += hit_len
        else:
            i += 1
    return owner


def _is_negated(sentence, token, labels):
    for dep in sentence:
        if dep.head != token.index:
            continue
        if dep.deprel in labels["neg_deprels"]:
            return True
        if dep.lemma.lower() in labels["neg_lemmas"]:
            return True
    return False


def extract_descriptions(sentences, aliases, context_label, doc_id="", labels=None):
    """Apply the four attribution rules across parsed sentences."""
    labels = labels or DEFAULT_LABELS
    out = []
    for sentence in sentences:
        chars = _character_tokens(sentence, aliases)
        if not chars:
            continue
        for tok in sentence:
            # (a) adjectival modifier of a character token
            if (
                tok.deprel in labels["amod"]
                and tok.head in chars
                and tok.upos in labels["adj_pos"]
                and not _is_negated(sentence, tok, labels)
            ):
                out.append(Description(chars[tok.head], tok.lemma.lower(), "adjective",
                                       context_label, doc_id))
                continue
            # (c) apposition of a character token
            if (
                tok.deprel in labels["appos"]
                and tok.head in chars
                and tok.upos in labels["noun_pos"]
                and tok.index not in chars
                and not _is_negated(sentence, tok, labels)
            ):
                out.append(Description(chars[tok.head], tok.lemma.lower(), "noun",
                                       context_label, doc_id))
                continue
            # (b) copular predicate / (d) verb, each with a character subject
            subject = next(
                (d for d in sentence
                 if d.head == tok.index and d.deprel in labels["nsubj"] and d.index in chars),
                None,
            )
            if subject is None:
                continue
            if _is_negated(sentence, tok, labels):
                continue
            has_cop = any(
                d.head == tok.index and d.deprel in labels["cop"] for d in sentence
            )
            name = chars[subject.index]
            if has_cop and tok.upos in labels["adj_pos"]:
                out.append(Description(name, tok.lemma.lower(), "adjective",
                                       context_label, doc_id))
            elif has_cop and tok.upos in labels["noun_pos"] and tok.index not in chars:
                out.append(Description(name, tok.lemma.lower(), "noun",
                                       context_label, doc_id))
            elif tok.upos in labels["verb_pos"]:
                out.append(Description(name, tok.lemma.lower(), "verb",
                                       context_label, doc_id))
    return out


def description_counts(descs):
    """Lemma frequencies per context label."""
    counts = Counter()
    for d in descs:
        counts[(d.context_label, d.lemma)] += 1
    return dict(counts)
