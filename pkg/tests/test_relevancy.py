import pytest

from confguard.corpus import RawDocument, load_corpus, split_sentences
from confguard.errors import ValidationError
from confguard.kg.graph import ConfigKnowledgeGraph, EntityKind
from confguard.relevancy import (
    ArgumentLexicon,
    build_lexicon,
    classify_corpus,
    classify_document,
    label_sentence,
    results_to_jsonl,
    tokenize_preserving,
)


def test_lexicon_size_matches_arguments(fixture_graph):
    lexicon = build_lexicon(fixture_graph)
    assert len(lexicon) == len(fixture_graph.entities_of_kind(EntityKind.ARGUMENT)) == 20
    assert "--anonymous-auth" in lexicon


def test_lexicon_requires_arguments():
    with pytest.raises(ValidationError):
        build_lexicon(ConfigKnowledgeGraph())


def test_tokenizer_preserves_configuration_syntax():
    tokens = tokenize_preserving("Ensure the `--authorization-mode` argument includes 'RBAC'.")
    assert "--authorization-mode" in tokens
    assert "RBAC" in tokens


def test_tokenizer_strips_trailing_colon():
    assert "imagePullPolicy" in tokenize_preserving("set imagePullPolicy: Always")


def test_tokenizer_empty():
    assert tokenize_preserving("") == []


def test_tokenizer_keeps_dots_dashes_underscores():
    tokens = tokenize_preserving("(show.hidden.metrics) \"--azure-container-registry\" snake_case_name,")
    assert tokens == ["show.hidden.metrics", "--azure-container-registry", "snake_case_name"]


def test_label_sentence_exact_match(fixture_graph):
    lexicon = build_lexicon(fixture_graph)
    got = label_sentence("Ensure that the --authorization-mode argument includes RBAC", lexicon)
    assert got == ["--authorization-mode"]


def test_label_sentence_requires_preserved_syntax(fixture_graph):
    lexicon = build_lexicon(fixture_graph)
    prose = "The azure container registry is Microsoft's own hosting platform for Docker images"
    assert label_sentence(prose, lexicon) == []


def test_label_sentence_no_match(fixture_graph):
    assert label_sentence("Nothing relevant here.", build_lexicon(fixture_graph)) == []


def test_every_match_is_a_sentence_token_and_lexicon_member(fixture_graph, fixtures_dir):
    lexicon = build_lexicon(fixture_graph)
    for doc in load_corpus(fixtures_dir / "corpus/security_docs.jsonl")[:80]:
        result = classify_document(doc, lexicon)
        sentences = {s.index: s.text for s in split_sentences(doc.body, doc.id)}
        for m in result.matches:
            assert m.surface in lexicon
            assert m.surface in tokenize_preserving(sentences[m.sentence_index])
        assert result.relevant == bool(result.matches)


def test_fig_pair_classification(fixture_graph, fixtures_dir):
    lexicon = build_lexicon(fixture_graph)
    docs = load_corpus(fixtures_dir / "corpus/fig_pair.jsonl")
    results = {r.doc_id: r for r in classify_corpus(docs, lexicon)}
    assert results["kubeblog-config"].relevant
    assert not results["kubeblog-nonconfig"].relevant


def test_empty_document_not_relevant(fixture_graph):
    doc = RawDocument(id="x", source="whitepaper", format="plaintext", uri="", body="   .  ")
    assert not classify_document(doc, build_lexicon(fixture_graph)).relevant


def test_lexicon_growth_is_monotone(fixture_graph, fixtures_dir):
    full = build_lexicon(fixture_graph)
    small = ArgumentLexicon({k: v for k, v in list(sorted(full.entries.items()))[:5]})
    docs = load_corpus(fixtures_dir / "corpus/relevancy_eval.jsonl")
    for doc in docs:
        small_matches = {(m.sentence_index, m.surface) for m in classify_document(doc, small).matches}
        full_matches = {(m.sentence_index, m.surface) for m in classify_document(doc, full).matches}
        assert small_matches <= full_matches


def test_planted_corpus_precision_and_trap_recall(fixture_graph, fixtures_dir):
    lexicon = build_lexicon(fixture_graph)
    docs = load_corpus(fixtures_dir / "corpus/relevancy_eval.jsonl")
    results = {r.doc_id: r.relevant for r in classify_corpus(docs, lexicon)}
    assert all(results[d] for d in results if d.startswith("rel-"))
    assert not any(results[d] for d in results if d.startswith("irr-"))
    # broken-syntax traps are the documented false negatives
    assert not any(results[d] for d in results if d.startswith("trap-"))


def test_results_deterministic_and_sorted(fixture_graph, fixtures_dir):
    lexicon = build_lexicon(fixture_graph)
    docs = load_corpus(fixtures_dir / "corpus/relevancy_eval.jsonl")
    first = results_to_jsonl(classify_corpus(docs, lexicon))
    second = results_to_jsonl(classify_corpus(list(reversed(docs)), lexicon, jobs=4))
    assert first == second
