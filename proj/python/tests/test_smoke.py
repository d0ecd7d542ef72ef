# Copyright 2026 The factdag Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import difflib
import itertools
import random

import pytest

import factdag


def simple_fact():
    return factdag.Fact([
        factdag.Element("subject", [(0, 0)]),
        factdag.Element("predicate", [(1, 1)]),
        factdag.Element("object", [(2, 3)]),
    ])


def test_edge_type_counts():
    assert len(factdag.EdgeTypeSpace()) == 21
    assert len(factdag.EdgeTypeSpace(variant=factdag.CodecVariant(role_pair_labels=True))) == 51
    assert factdag.clique_edge_type_count() == 176
    assert factdag.EdgeTypeSpace().names()[13:15] == ["EE", "I"]


def test_encode_decode_roundtrip():
    space = factdag.EdgeTypeSpace()
    sentence = factdag.Sentence("s", ["Biden", "ended", "the", "leadership"])
    annotated = factdag.AnnotatedSentence(sentence, facts=[simple_fact()])
    matrix, uncoverable = factdag.encode(annotated, space)
    assert uncoverable == 0
    assert len(matrix) == 8
    decoded = factdag.decode(matrix, sentence, space)
    assert [f.key() for f in decoded] == [simple_fact().key()]
    assert factdag.fact_to_string(decoded[0], sentence) == "Biden | ended | the leadership"


def test_generated_corpus_roundtrip():
    corpus = factdag.generate_synthetic(200, overlap=0.8, nesting=0.6, discontinuity=0.8, seed=3)
    report = factdag.roundtrip_check(corpus, factdag.EdgeTypeSpace())
    assert report["coverage"] == 1.0
    no_ee = factdag.roundtrip_check(corpus, factdag.EdgeTypeSpace(variant=factdag.CodecVariant(use_ee=False)))
    assert no_ee["coverage"] < 1.0
    stats = factdag.corpus_stats(corpus)
    assert stats["sentences"] == 200
    assert sum(stats["fact_count_bins"]) == 200


def test_bron_kerbosch():
    assert factdag.bron_kerbosch([[1, 2], [0, 2], [0, 1]]) == [[0, 1, 2]]
    assert factdag.bron_kerbosch([[1], [0, 2], [1]]) == [[0, 1], [1, 2]]


def test_gestalt_matches_difflib():
    strings = ["".join(p) for n in range(5) for p in itertools.product("abc", repeat=n)]
    for a in strings:
        for b in strings[::7]:
            expected = difflib.SequenceMatcher(None, a, b, autojunk=False).ratio()
            if not a and not b:
                expected = 1.0
            assert factdag.gestalt_similarity(a, b) == pytest.approx(expected, abs=1e-15)
    rng = random.Random(0)
    for _ in range(500):
        a = "".join(rng.choice("abcd ") for _ in range(rng.randint(0, 40)))
        b = "".join(rng.choice("abcd ") for _ in range(rng.randint(0, 40)))
        if a or b:
            expected = difflib.SequenceMatcher(None, a, b, autojunk=False).ratio()
            assert factdag.gestalt_similarity(a, b) == pytest.approx(expected, abs=1e-15)


def test_metrics():
    sentence = factdag.Sentence("s", ["Biden", "ended", "the", "leadership", "today"])
    gold = [simple_fact()]
    assert factdag.gestalt_score(gold, gold, sentence)["f1"] == 1.0
    assert factdag.carb_single(gold, [], sentence)["recall"] == 0.0
    longer = factdag.Fact([
        factdag.Element("subject", [(0, 0)]),
        factdag.Element("predicate", [(1, 1)]),
        factdag.Element("object", [(2, 4)]),
    ])
    single = factdag.carb_single(gold, [longer], sentence)
    assert single["precision"] == pytest.approx(0.8)
    assert single["recall"] == 1.0
    report = factdag.evaluate([factdag.AnnotatedSentence(sentence, facts=gold)], [("s", gold)])
    for metric in ("carb-single", "carb-multi", "gestalt"):
        assert report[metric]["f1"] == 1.0
        assert report[metric]["auc"] == 1.0


def test_errors():
    with pytest.raises(factdag.Error) as info:
        factdag.EdgeTypeSpace(factdag.Schema([]))
    assert info.value.code == "empty-schema"
    with pytest.raises(OSError):
        factdag.read_corpus("/nonexistent/corpus.jsonl")
    sentence = factdag.Sentence("s", ["a"])
    bad = factdag.Fact([factdag.Element("subject", [(0, 3)])])
    assert "span-out-of-range" in factdag.validate_fact(bad, sentence)


def test_train_and_predict(tmp_path):
    sentence = factdag.Sentence("toy", ["Biden", "ended", "the", "leadership"])
    corpus = [factdag.AnnotatedSentence(sentence, facts=[simple_fact()])]
    space = factdag.EdgeTypeSpace()
    params, history = factdag.train(corpus, space, epochs=300, dim=16)
    assert len(history) == 300
    assert history[-1][1] < history[0][1]
    facts = factdag.predict_facts(params, sentence, space, 0.3)
    assert [f.key() for f in facts] == [simple_fact().key()]
    assert all(f.confidence is not None for f in facts)
    restored = factdag.ScorerParams.load(params.save(), space)
    assert restored.save() == params.save()
    path = str(tmp_path / "c.jsonl")
    factdag.write_corpus(path, corpus)
    assert factdag.read_corpus(path)[0].sentence.tokens == sentence.tokens
