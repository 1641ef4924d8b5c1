import json
import math
from collections import Counter
from fractions import Fraction

import pytest

from kstelepathy.harness import (
    Question,
    draw_question,
    evaluate_win,
    exact_win_probability,
    play_round,
    play_rounds,
)
from kstelepathy.ks_core import cabello_set
from kstelepathy.rng import RandomSource
from kstelepathy.strategies import Strategy, best_classical, one_cbit_strategy, quantum_strategy

KS = cabello_set()


@pytest.mark.parametrize("alice, slot, bob, won", [
    ((1, 0, 0, 0), 1, 1, True),
    ((1, 1, 0, 0), 1, 1, False),
    ((1, 1, 0, 0), 3, 0, False),
    ((0, 1, 0, 0), 1, 1, False),
    ((0, 1, 0, 0), 1, 0, True),
    ((0, 0, 0, 0), 2, 0, False),
])
def test_evaluate_win(alice, slot, bob, won):
    assert evaluate_win(Question(1, slot), alice, bob) is won


def test_question_draws_are_uniform():
    r = RandomSource(123)
    counts = Counter(draw_question(r) for _ in range(36000))
    assert len(counts) == 36
    # mean 1000, sd ~30.6: the band is more than 6 sd wide on each side
    assert all(800 <= c <= 1200 for c in counts.values())


def test_question_sequence_is_seeded():
    a, b = RandomSource(5), RandomSource(5)
    assert [draw_question(a) for _ in range(100)] == [draw_question(b) for _ in range(100)]


def test_rounds_are_order_independent():
    t = play_rounds(quantum_strategy(), 30, seed=77)
    assert play_round(quantum_strategy(), 77, 17) == t.rounds[17]


def test_one_cbit_transcript():
    t = play_rounds(one_cbit_strategy(), 1000, seed=3)
    assert t.wins == 1000
    assert t.mean_bits == 1
    assert all((r.bits_ab, r.bits_ba) == (1, 0) for r in t.rounds)


def test_transcript_is_recomputable_and_schema():
    t = play_rounds(best_classical(KS)[1], 500, seed=9)
    doc = json.loads(t.dumps())
    assert set(doc) == {"seed", "strategy", "rounds", "summary"}
    wins = 0
    for r in doc["rounds"]:
        assert set(r) == {"i", "set", "slot", "alice", "bob", "won", "bitsAB", "bitsBA"}
        assert r["won"] == evaluate_win(Question(r["set"], r["slot"]), r["alice"], r["bob"])
        wins += r["won"]
    assert doc["summary"] == {
        "rounds": 500,
        "wins": wins,
        "winRate": f"{Fraction(wins, 500).numerator}/{Fraction(wins, 500).denominator}",
        "meanBits": "0/1",
    }


def test_same_seed_same_bytes():
    assert play_rounds(quantum_strategy(), 200, 42).dumps() == play_rounds(quantum_strategy(), 200, 42).dumps()
    assert play_rounds(quantum_strategy(), 200, 42).dumps() != play_rounds(quantum_strategy(), 200, 43).dumps()


class Chatty(Strategy):
    name = "chatty"

    def alice_answer(self, alice_set, rnd, channel):
        channel.send_to_bob(1)
        return (1, 0, 0, 0)

    def bob_answer(self, bob_vector, rnd, channel):
        return channel.receive_at_bob()


class Broken(Strategy):
    name = "broken"

    def alice_answer(self, alice_set, rnd, channel):
        raise RuntimeError("boom")


def test_channel_use_by_silent_strategy_loses():
    t = play_rounds(Chatty(KS), 100, seed=1)
    assert t.wins == 0
    assert all(r.bits_ab == 1 and r.note for r in t.rounds)


def test_strategy_failure_is_a_recorded_loss():
    t = play_rounds(Broken(KS), 5, seed=1)
    assert t.wins == 0
    assert all("boom" in r.note for r in t.rounds)
    doc = json.loads(t.dumps())
    assert doc["rounds"][0]["alice"] is None


def test_exact_probability_rejects_opaque_strategies():
    with pytest.raises(TypeError):
        exact_win_probability(Broken(KS))


def test_play_rounds_argument_checks():
    with pytest.raises(ValueError):
        play_rounds(quantum_strategy(), 0)
    with pytest.raises(ValueError):
        play_rounds(quantum_strategy(), 1, seed=-1)
    with pytest.raises(ValueError):
        play_rounds(quantum_strategy(), 1, seed=2**64)


@pytest.mark.parametrize("make", [best_classical, lambda ks: (None, one_cbit_strategy(ks))])
def test_empirical_rate_within_five_sigma(make):
    s = make(KS)[1]
    n = 10**4
    p = float(exact_win_probability(s))
    t = play_rounds(s, n, seed=2718)
    sigma = math.sqrt(p * (1 - p) / n)
    assert abs(t.wins / n - p) <= 5 * sigma


def test_best_classical_rate_over_36000_rounds():
    p = Fraction(35, 36)
    n = 36000
    t = play_rounds(best_classical(KS)[1], n, seed=0)
    sigma = math.sqrt(float(p * (1 - p)) / n)
    assert abs(t.wins / n - float(p)) <= 4 * sigma
