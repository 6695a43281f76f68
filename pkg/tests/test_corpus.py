import json

import pytest

from charrep.corpus import (
    AliasTable,
    Document,
    MentionTable,
    build_character_set,
    count_mentions,
    detect_mentions,
    load_corpus,
    save_corpus,
    split_paragraphs,
    tokenize,
)
from charrep.errors import DataError, FormatError


class TestTokenize:
    def test_lowercase_and_punct(self):
        assert tokenize("Moony smiled.") == ["moony", "smiled"]

    def test_internal_apostrophe_kept(self):
        assert tokenize("O'Brien's owl") == ["o'brien's", "owl"]

    def test_unicode_letters(self):
        assert tokenize("café naïve") == ["café", "naïve"]

    def test_numbers_are_tokens(self):
        assert tokenize("chapter 12") == ["chapter", "12"]

    def test_empty(self):
        assert tokenize("") == []


class TestAliasTable:
    def test_canonical_added_as_alias(self, aliases):
        assert aliases.canonical_for(("hermione", "granger")) == "Hermione Granger"

    def test_case_insensitive(self, aliases):
        assert aliases.canonical_for(("moony",)) == "Remus Lupin"

    def test_ambiguous_alias_rejected(self):
        with pytest.raises(DataError):
            AliasTable({
                "A One": {"aliases": ["shared"]},
                "B Two": {"aliases": ["shared"]},
            })

    def test_max_alias_tokens(self, aliases):
        assert aliases.max_alias_tokens == 2


class TestDetectMentions:
    def test_longest_match_wins(self, aliases):
        text = "Remus Lupin smiled at Harry"
        found = detect_mentions(text, aliases)
        assert [name for name, _ in found] == ["Remus Lupin", "Harry Potter"]

    def test_possessive_stripped(self, aliases):
        found = detect_mentions("Moony's scarf", aliases)
        assert [name for name, _ in found] == ["Remus Lupin"]

    def test_token_boundary(self, aliases):
        # "harrys" is not the token "harry"
        assert detect_mentions("the harrys gather", aliases) == []

    def test_each_occurrence_counted(self, aliases):
        doc = Document(id="d1", source_id="s", kind="longform",
                       text="harry saw harry and Lupin")
        table = count_mentions([doc], aliases)
        assert table.by_source("s") == {"Harry Potter": 2, "Remus Lupin": 1}

    def test_no_overlap(self, aliases):
        # after matching "remus lupin" the scan resumes past it
        found = detect_mentions("remus lupin", aliases)
        assert len(found) == 1


class TestDocuments:
    def test_threaded_requires_tree_id(self):
        with pytest.raises(DataError):
            Document(id="x", source_id="s", kind="threaded", text="hi")

    def test_longform_rejects_thread_fields(self):
        with pytest.raises(DataError):
            Document(id="x", source_id="s", kind="longform", text="hi", tree_id="t")

    def test_unknown_kind(self):
        with pytest.raises(DataError):
            Document(id="x", source_id="s", kind="tweet", text="hi")

    def test_empty_text_rejected(self):
        with pytest.raises(DataError):
            Document(id="x", source_id="s", kind="longform", text="   ")


class TestLoadCorpus:
    def test_round_trip(self, tmp_path):
        docs = [
            Document(id="a", source_id="s", kind="longform", text="one\n\ntwo"),
            Document(id="b", source_id="s", kind="threaded", text="Topic\nhello",
                     tree_id="t1", parent_id=None),
        ]
        path = tmp_path / "c.jsonl"
        save_corpus(docs, path)
        assert load_corpus(path) == docs

    def test_root_title_prepended(self, tmp_path):
        path = tmp_path / "c.jsonl"
        rec = {"id": "b", "source": "s", "kind": "threaded", "text": "hello",
               "tree_id": "t1", "title": "Topic"}
        path.write_text(json.dumps(rec) + "\n")
        (doc,) = load_corpus(path)
        assert doc.text == "Topic\nhello"

    def test_reply_title_not_prepended(self, tmp_path):
        path = tmp_path / "c.jsonl"
        rec = {"id": "b", "source": "s", "kind": "threaded", "text": "hello",
               "tree_id": "t1", "parent_id": "a", "title": "Topic"}
        path.write_text(json.dumps(rec) + "\n")
        (doc,) = load_corpus(path)
        assert doc.text == "hello"

    def test_bad_json_reports_line(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text(
            '{"id": "a", "source": "s", "kind": "longform", "text": "x"}\nnot json\n')
        with pytest.raises(FormatError) as exc:
            load_corpus(path)
        assert exc.value.line == 2

    def test_missing_field(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text(json.dumps({"source": "s", "kind": "longform", "text": "x"}) + "\n")
        with pytest.raises(FormatError):
            load_corpus(path)


class TestSplitParagraphs:
    def test_blank_line_split(self):
        assert split_paragraphs("a\n\nb\n \nc") == ["a", "b", "c"]

    def test_single_newline_kept(self):
        assert split_paragraphs("a\nb") == ["a\nb"]


class TestCharacterSet:
    def test_top_k_union(self):
        table = MentionTable()
        table.add("s1", "A", 10)
        table.add("s1", "B", 5)
        table.add("s1", "C", 1)
        table.add("s2", "C", 9)
        table.add("s2", "D", 8)
        chars = build_character_set([table], 2)
        assert set(chars) == {"A", "B", "C", "D"}
        # sorted by total mentions descending
        assert chars[0] == "A" and chars[1] == "C"

    def test_tie_break_lexicographic(self):
        table = MentionTable()
        table.add("s1", "B", 3)
        table.add("s1", "A", 3)
        table.add("s1", "C", 1)
        assert build_character_set([table], 2) == ["A", "B"]

    def test_merge(self):
        t1 = MentionTable()
        t1.add("s", "A", 2)
        t2 = MentionTable()
        t2.add("s", "A", 3)
        t2.add("s", "B", 1)
        merged = t1.merge(t2)
        assert merged.by_source("s") == {"A": 5, "B": 1}
