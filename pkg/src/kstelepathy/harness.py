"""Referee: draws questions, runs rounds, meters the channel, scores, aggregates."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .ks_core import KsSet, canonicalize
from .quantum import EntangledPair, frac_str
from .rng import RandomSource

# stream ids under (seed, round)
_REFEREE = 0
_PLAYERS = 1


@dataclass(frozen=True)
class Question:
    alice_set: int  # basis index, 1-based
    bob_slot: int  # slot 1..4 of Alice's basis; Bob only sees the ray


def all_questions(ks: KsSet) -> list[Question]:
    return [Question(k, s) for k in range(1, ks.n_bases + 1) for s in range(1, 5)]


def draw_question(r: RandomSource, n_bases: int = 9) -> Question:
    """Uniform over all n_bases * 4 questions."""
    return Question(r.integer(1, n_bases), r.integer(1, 4))


def evaluate_win(q: Question, alice, bob) -> bool:
    alice = tuple(alice)
    return sum(alice) == 1 and all(b in (0, 1) for b in alice) and alice[q.bob_slot - 1] == bob


class ChannelViolation(RuntimeError):
    pass


class Channel:
    """Per-round classical channel; every bit written is counted."""

    def __init__(self):
        self.bits_ab = 0
        self.bits_ba = 0
        self._to_bob: list[int] = []
        self._to_alice: list[int] = []

    def send_to_bob(self, bit: int):
        self._to_bob.append(int(bit) & 1)
        self.bits_ab += 1

    def send_to_alice(self, bit: int):
        self._to_alice.append(int(bit) & 1)
        self.bits_ba += 1

    def receive_at_bob(self) -> int:
        if not self._to_bob:
            raise ChannelViolation("Bob read from an empty channel")
        return self._to_bob.pop(0)

    def receive_at_alice(self) -> int:
        if not self._to_alice:
            raise ChannelViolation("Alice read from an empty channel")
        return self._to_alice.pop(0)

    @property
    def bits_sent(self) -> int:
        return self.bits_ab + self.bits_ba


class RoundRandomness:
    """What the players may use in one round.

    ``shared()`` returns a fresh copy of the same stream on every call, so
    Alice and Bob see identical shared draws. The entangled pair is created
    once per round and handed to whoever asks.
    """

    def __init__(self, source: RandomSource):
        self._source = source
        self._pair = None

    def shared(self) -> RandomSource:
        return self._source.child(0)

    def alice_private(self) -> RandomSource:
        return self._source.child(1)

    def bob_private(self) -> RandomSource:
        return self._source.child(2)

    def entangled_pair(self, ks: KsSet) -> EntangledPair:
        if self._pair is None:
            self._pair = EntangledPair(ks, self._source.child(3))
        return self._pair


@dataclass
class RoundRecord:
    index: int
    question: Question
    alice: tuple | None
    bob: int | None
    won: bool
    bits_ab: int
    bits_ba: int
    note: str | None = None

    def to_json(self) -> dict:
        d = {
            "i": self.index,
            "set": self.question.alice_set,
            "slot": self.question.bob_slot,
            "alice": list(self.alice) if self.alice is not None else None,
            "bob": self.bob,
            "won": self.won,
            "bitsAB": self.bits_ab,
            "bitsBA": self.bits_ba,
        }
        if self.note is not None:
            d["note"] = self.note
        return d


@dataclass
class Transcript:
    seed: int
    strategy_name: str
    rounds: list[RoundRecord] = field(default_factory=list)

    @property
    def wins(self) -> int:
        return sum(r.won for r in self.rounds)

    @property
    def win_rate(self) -> Fraction:
        return Fraction(self.wins, len(self.rounds))

    @property
    def mean_bits(self) -> Fraction:
        return Fraction(sum(r.bits_ab + r.bits_ba for r in self.rounds), len(self.rounds))

    def summary(self) -> dict:
        return {
            "rounds": len(self.rounds),
            "wins": self.wins,
            "winRate": frac_str(self.win_rate),
            "meanBits": frac_str(self.mean_bits),
        }

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "strategy": self.strategy_name,
            "rounds": [r.to_json() for r in self.rounds],
            "summary": self.summary(),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))


def _check_seed(seed: int):
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")


def play_round(strategy, seed: int, index: int) -> RoundRecord:
    ks = strategy.ks
    q = draw_question(RandomSource(seed, index, _REFEREE), ks.n_bases)
    rnd = RoundRandomness(RandomSource(seed, index, _PLAYERS))
    channel = Channel()
    alice = bob = None
    note = None
    try:
        alice = tuple(int(b) for b in strategy.alice_answer(q.alice_set, rnd, channel))
        if len(alice) != 4:
            raise ValueError(f"Alice must answer 4 bits, got {len(alice)}")
        bob_vector = canonicalize(ks.vector(q.alice_set, q.bob_slot))
        bob = int(strategy.bob_answer(bob_vector, rnd, channel))
    except Exception as exc:  # a failing strategy loses the round
        note = f"{type(exc).__name__}: {exc}"
    won = note is None and evaluate_win(q, alice, bob)
    if not strategy.communicates and channel.bits_sent:
        won = False
        note = "no-communication strategy wrote to the channel"
    return RoundRecord(index, q, alice, bob, won, channel.bits_ab, channel.bits_ba, note)


def play_rounds(strategy, n: int, seed: int = 0) -> Transcript:
    """Play n rounds; round i depends only on (seed, i)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    _check_seed(seed)
    transcript = Transcript(seed, strategy.name)
    transcript.rounds = [play_round(strategy, seed, i) for i in range(n)]
    return transcript


def exact_win_probability(strategy) -> Fraction:
    """Average of the exact per-question win probability over the uniform question set."""
    try:
        per_q = [strategy.win_probability(q) for q in all_questions(strategy.ks)]
    except NotImplementedError:
        raise TypeError(f"strategy {strategy.name!r} does not support exact analysis") from None
    return sum(per_q, Fraction(0)) / len(per_q)
