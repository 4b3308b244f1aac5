import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from samplelab.sampling import (
    ParameterRangeError,
    TokenDistribution,
    TokenHistory,
    apply_penalties,
)


def random_case(draw):
    """Hypothesis composite pieces: a small pmf plus an occurrence history."""
    n = draw(st.integers(min_value=1, max_value=12))
    raw = draw(
        st.lists(st.floats(min_value=1e-9, max_value=1.0), min_size=n, max_size=n)
    )
    total = math.fsum(raw)
    tokens = [f"t{i}" for i in range(n)]
    dist = TokenDistribution({t: w / total for t, w in zip(tokens, raw)})
    counts = draw(st.lists(st.integers(min_value=0, max_value=40), min_size=n, max_size=n))
    history = TokenHistory()
    for token, count in zip(tokens, counts):
        for _ in range(count):
            history.add(token)
    return dist, history


cases = st.composite(random_case)()
penalties = st.floats(min_value=0.0, max_value=2.0, allow_nan=False)


class TestApplyPenalties:
    def test_zero_penalties_is_exact_identity(self):
        dist = TokenDistribution({"a": 0.3, "b": 0.45, "c": 0.25})
        history = TokenHistory(["a", "a", "c"])
        weights = apply_penalties(dist, history, 0.0, 0.0)
        assert weights == dict(dist)

    def test_hand_evaluated_case(self):
        # P(t)=0.5, count=2, freq penalty 0.5, presence penalty 1:
        # 0.5 / ((1 + 0.5*2) * (1 + 1)) = 0.5 / 4 = 0.125
        dist = TokenDistribution({"t": 0.5, "u": 0.5})
        history = TokenHistory(["t", "t"])
        weights = apply_penalties(dist, history, 0.5, 1.0)
        assert weights["t"] == pytest.approx(0.125, abs=1e-15)

    def test_unseen_token_keeps_its_probability(self):
        dist = TokenDistribution({"t": 0.5, "u": 0.5})
        history = TokenHistory(["t", "t"])
        weights = apply_penalties(dist, history, 2.0, 2.0)
        assert weights["u"] == 0.5

    def test_output_is_not_renormalized(self):
        dist = TokenDistribution({"t": 0.5, "u": 0.5})
        weights = apply_penalties(dist, TokenHistory(["t"]), 1.0, 1.0)
        assert math.fsum(weights.values()) < 1.0

    @pytest.mark.parametrize("alpha,beta", [(-0.1, 0.0), (2.1, 0.0), (0.0, -1.0), (0.0, 2.5)])
    def test_penalties_outside_range_rejected(self, alpha, beta):
        dist = TokenDistribution({"a": 1.0})
        with pytest.raises(ParameterRangeError):
            apply_penalties(dist, TokenHistory(), alpha, beta)

    @given(cases, penalties, penalties)
    def test_weights_never_exceed_probabilities(self, case, alpha, beta):
        """Denominators are >= 1, so penalizing can only shrink weight."""
        dist, history = case
        weights = apply_penalties(dist, history, alpha, beta)
        for token in dist:
            assert weights[token] <= dist[token]

    @given(cases, penalties, penalties)
    def test_unseen_tokens_invariant(self, case, alpha, beta):
        """Tokens with zero occurrence count keep their probability exactly."""
        dist, history = case
        weights = apply_penalties(dist, history, alpha, beta)
        for token in dist:
            if history.count(token) == 0:
                assert weights[token] == dist[token]

    @given(cases)
    def test_zero_penalty_identity_property(self, case):
        dist, history = case
        assert apply_penalties(dist, history, 0.0, 0.0) == dict(dist)

    @given(cases, penalties, penalties)
    def test_matches_high_precision_evaluation(self, case, alpha, beta):
        """Cross-check the float pipeline against 50-digit arithmetic."""
        from mpmath import mp, mpf

        mp.dps = 50
        dist, history = case
        weights = apply_penalties(dist, history, alpha, beta)
        for token in dist:
            count = history.count(token)
            exact = mpf(dist[token]) / (
                (1 + mpf(alpha) * count) * (1 + mpf(beta) * (1 if count > 0 else 0))
            )
            assert abs(weights[token] - float(exact)) <= 1e-12
