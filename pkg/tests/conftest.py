import numpy as np
import pytest

from charrep.charnet import CoocNetwork
from charrep.corpus import AliasTable
from charrep.embed import EmbeddingModel


@pytest.fixture
def aliases():
    return AliasTable({
        "Remus Lupin": {"aliases": ["moony", "lupin", "remus lupin"], "gender": "M"},
        "Harry Potter": {"aliases": ["harry", "harry potter"], "gender": "M"},
        "Hermione Granger": {"aliases": ["hermione"], "gender": "F"},
        "Draco Malfoy": {"aliases": ["draco", "malfoy"], "gender": "M"},
    })


@pytest.fixture
def path_graph():
    net = CoocNetwork()
    net.add_edge("A", "B")
    net.add_edge("B", "C")
    return net


@pytest.fixture
def triangle():
    net = CoocNetwork()
    net.add_edge("A", "B", 1)
    net.add_edge("B", "C", 2)
    net.add_edge("C", "A", 3)
    return net


def make_model(vectors, freq=10):
    """EmbeddingModel from {token: vector}."""
    vocab = [(tok, freq) for tok in vectors]
    mat = np.array([vectors[tok] for tok in vectors], dtype=float)
    return EmbeddingModel(vocab, mat, np.zeros_like(mat))


@pytest.fixture
def toy_axis_model():
    return make_model({
        "l": [1.0, 0.0], "r": [-1.0, 0.0], "w": [1.0, 0.0],
        "u": [0.0, 1.0], "v": [-1.0, 0.0],
    })


def conllu_block(rows):
    """One sentence in 10-column format from (id, form, lemma, upos, head, deprel) rows."""
    lines = ["\t".join([str(i), form, lemma, upos, "_", "_", str(head), deprel, "_", "_"])
             for i, form, lemma, upos, head, deprel in rows]
    return "\n".join(lines) + "\n\n"


# (form, lemma, upos, deprel) for negation dependents the extractor must honor
NEG_MARKERS = [
    ("not", "not", "PART", "neg"),
    ("not", "not", "PART", "advmod"),
    ("never", "never", "ADV", "advmod"),
    ("no", "no", "DET", "advmod"),
    ("n't", "n't", "PART", "advmod"),
]


def negation_fixtures():
    """20 parses (5 negation markers x 4 extraction rules), all negated."""
    blocks = []
    for form, lemma, upos, deprel in NEG_MARKERS:
        neg = (form, lemma, upos, deprel)
        # rule a: amod of the character, negation on the adjective
        blocks.append(conllu_block([
            (1, neg[0], neg[1], neg[2], 2, neg[3]),
            (2, "kind", "kind", "ADJ", 3, "amod"),
            (3, "Draco", "Draco", "PROPN", 0, "root"),
        ]))
        # rule b: copular adjective predicate, negation on the predicate
        blocks.append(conllu_block([
            (1, "Draco", "Draco", "PROPN", 4, "nsubj"),
            (2, "was", "be", "AUX", 4, "cop"),
            (3, neg[0], neg[1], neg[2], 4, neg[3]),
            (4, "kind", "kind", "ADJ", 0, "root"),
        ]))
        # rule c: apposition, negation on the appositive noun
        blocks.append(conllu_block([
            (1, "Draco", "Draco", "PROPN", 0, "root"),
            (2, neg[0], neg[1], neg[2], 3, neg[3]),
            (3, "wizard", "wizard", "NOUN", 1, "appos"),
        ]))
        # rule d: verb with character subject, negation on the verb
        blocks.append(conllu_block([
            (1, "Draco", "Draco", "PROPN", 3, "nsubj"),
            (2, neg[0], neg[1], neg[2], 3, neg[3]),
            (3, "smiled", "smile", "VERB", 0, "root"),
        ]))
    return blocks


@pytest.fixture(scope="session")
def mini_fixture(tmp_path_factory):
    """Mini-fandom corpus files plus a fast pipeline config, run once."""
    import json

    from charrep.fixtures import write_mini_fandom
    from charrep.pipeline import RunConfig, run_pipeline

    root = tmp_path_factory.mktemp("mini")
    paths = write_mini_fandom(root / "fixture")

    parse_dir = root / "parses"
    parse_dir.mkdir()
    from tests.conftest import conllu_block  # self-import keeps helpers in one place

    def amod(adj, form):
        return conllu_block([
            (1, adj, adj, "ADJ", 2, "amod"),
            (2, form, form, "PROPN", 0, "root"),
        ])

    (parse_dir / "slash.conllu").write_text(
        amod("gentle", "Alba") * 3 + amod("soft", "Alba") * 2)
    (parse_dir / "het.conllu").write_text(
        amod("harsh", "Bram") * 3 + amod("fierce", "Bram") * 2)
    manifest_path = parse_dir / "manifest.json"
    manifest_path.write_text(json.dumps([
        {"path": "slash.conllu", "context": "slash", "doc_id": "s1"},
        {"path": "het.conllu", "context": "het", "doc_id": "h1"},
    ]))

    out_dir = root / "out"
    config = {
        "sources": [
            {"source_id": "canon", "corpus_path": str(paths["sources"]["canon"]),
             "kind": "longform"},
            {"source_id": "forum", "corpus_path": str(paths["sources"]["forum"]),
             "kind": "threaded"},
            {"source_id": "archive", "corpus_path": str(paths["sources"]["archive"]),
             "kind": "longform"},
        ],
        "alias_path": str(paths["aliases"]),
        "output_dir": str(out_dir),
        "axis_lexicon_paths": [str(p) for p in paths["axes"]],
        "parse_manifest_path": str(manifest_path),
        "top_k": 8,
        "embed": {"dim": 16, "window": 3, "min_count": 5, "negative": 2,
                  "epochs": 1, "seed": 7},
        "corep": {"seed": 7},
        "seed": 7,
    }
    config_path = root / "config.json"
    config_path.write_text(json.dumps(config, indent=2))

    run_config = RunConfig.from_json(config_path)
    report = run_pipeline(run_config)
    return {
        "root": root,
        "paths": paths,
        "config_path": config_path,
        "config": config,
        "out_dir": out_dir,
        "report": report,
        "manifest_path": manifest_path,
    }
