import math

import numpy as np
import pytest

from samplelab.providers.ngram import (
    EOT_TOKEN,
    EmptyCorpusError,
    NGramProvider,
    detokenize,
    next_distribution,
    tokenize,
    train_ngram,
)


class TestTokenizers:
    def test_char_tokenizer_keeps_every_character(self):
        assert tokenize("ab c", "char") == ["a", "b", " ", "c"]
        assert detokenize(["a", "b", " ", "c"], "char") == "ab c"

    def test_word_tokenizer_splits_on_whitespace(self):
        assert tokenize("the  quick\nfox", "word") == ["the", "quick", "fox"]
        assert detokenize(["the", "quick", "fox"], "word") == "the quick fox"

    def test_unknown_tokenizer_rejected(self):
        with pytest.raises(ValueError, match="tokenizer"):
            tokenize("x", "subword")


class TestTrainNgram:
    def test_hand_tallied_bigram_counts(self):
        # sliding bigrams of "abab": ab, ba, ab
        model = train_ngram("abab", 2, "char")
        assert model.counts[("a",)]["b"] == 2
        assert model.counts[("b",)]["a"] == 1

    def test_minimal_corpus_has_vocab_but_no_contexts(self):
        model = train_ngram("x", 2, "char")
        assert set(model.vocabulary) == {"x", EOT_TOKEN}
        assert model.counts == {}

    def test_context_key_length_is_order_minus_one(self):
        bigram = train_ngram("abcabc", 2, "char")
        trigram = train_ngram("abcabc", 3, "char")
        assert all(len(ctx) == 1 for ctx in bigram.counts)
        assert all(len(ctx) == 2 for ctx in trigram.counts)

    def test_empty_corpus_rejected(self):
        with pytest.raises(EmptyCorpusError):
            train_ngram("", 2, "char")
        with pytest.raises(EmptyCorpusError):
            train_ngram("   \n ", 2, "word")

    def test_order_below_two_rejected(self):
        with pytest.raises(ValueError, match="order"):
            train_ngram("abc", 1, "char")

    def test_training_is_reproducible_bit_for_bit(self):
        first = train_ngram("the cat sat on the mat", 3, "word")
        second = train_ngram("the cat sat on the mat", 3, "word")
        assert first == second
        ctx = ["the", "cat"]
        assert dict(next_distribution(first, ctx)) == dict(next_distribution(second, ctx))


class TestNextDistribution:
    def test_hand_evaluated_laplace_probabilities(self):
        # "abab", k=2, vocab {a, b, <eot>}: count(a,b)=2, count(a,.)=2
        model = train_ngram("abab", 2, "char")
        dist = next_distribution(model, ["x", "a"])
        assert dist["b"] == pytest.approx(0.6)
        assert dist["a"] == pytest.approx(0.2)
        assert dist[EOT_TOKEN] == pytest.approx(0.2)

    def test_unseen_context_is_uniform(self):
        model = train_ngram("abab", 2, "char")
        dist = next_distribution(model, ["q"])
        assert all(p == pytest.approx(1 / 3) for p in dist.values())

    def test_short_context_is_unseen_hence_uniform(self):
        model = train_ngram("abcabc", 3, "char")
        dist = next_distribution(model, ["a"])  # shorter than k-1=2
        assert all(p == pytest.approx(1 / len(model.vocabulary)) for p in dist.values())

    def test_probabilities_sum_to_one(self):
        model = train_ngram("the mill ground the grain fine", 3, "char")
        rng = np.random.default_rng(5)
        vocab = list(model.vocabulary)
        for _ in range(100):
            context = [vocab[i] for i in rng.integers(0, len(vocab), size=4)]
            dist = next_distribution(model, context)
            assert abs(math.fsum(dist.values()) - 1.0) <= 1e-9

    def test_no_token_ever_has_zero_probability(self):
        model = train_ngram("aaaaab", 2, "char")
        for context in (["a"], ["b"], ["never-seen"]):
            dist = next_distribution(model, context)
            assert all(p > 0 for p in dist.values())


class TestNGramProvider:
    def test_provider_surface(self):
        provider = NGramProvider.from_corpus("abab", order=2, tokenizer="char")
        assert provider.mode == "distribution"
        assert provider.id == "ngram"
        assert provider.eot_token == EOT_TOKEN
        assert provider.tokenize("ab") == ["a", "b"]
        assert provider.detokenize(["a", "b"]) == "ab"
        assert provider.next_distribution(["a"])["b"] == pytest.approx(0.6)

    def test_rejects_unknown_tokenizer(self):
        model = train_ngram("abab", 2, "char")
        with pytest.raises(ValueError, match="tokenizer"):
            NGramProvider(model, tokenizer="bpe")
