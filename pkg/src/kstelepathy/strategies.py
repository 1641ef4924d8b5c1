"""Player strategies for the pseudo-telepathy game.

Alice's procedure sees her basis index, the round randomness and the channel.
Bob's sees only his (canonical) ray, the round randomness and the channel;
he is never told which basis the ray was taken from.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .coloring import MAX_RAW_ASSIGNMENTS, CtxAssignment, SearchTooLarge, min_contextuality
from .harness import Channel, Question, RoundRandomness, evaluate_win
from .ks_core import CanonicalVec, IntVec4, KsSet, cabello_set, canonicalize
from .quantum import joint_distribution


def marked(slot: int) -> tuple[int, int, int, int]:
    return tuple(int(s == slot) for s in range(1, 5))


class Strategy:
    name = "strategy"
    communicates = False
    serial = False

    def __init__(self, ks: KsSet):
        self.ks = ks

    def alice_answer(self, alice_set: int, rnd: RoundRandomness, channel: Channel):
        raise NotImplementedError

    def bob_answer(self, bob_vector: CanonicalVec, rnd: RoundRandomness, channel: Channel) -> int:
        raise NotImplementedError

    def win_probability(self, q: Question) -> Fraction:
        """Exact win probability on one question; override where analysis exists."""
        raise NotImplementedError

    def _play_once(self, q: Question) -> bool:
        # exact for strategies that ignore the randomness
        channel = Channel()
        rnd = RoundRandomness(None)
        alice = self.alice_answer(q.alice_set, rnd, channel)
        bob = self.bob_answer(canonicalize(self.ks.vector(q.alice_set, q.bob_slot)), rnd, channel)
        return evaluate_win(q, alice, bob)


class QuantumStrategy(Strategy):
    """Both measure their half of the shared state; no communication.

    Alice measures in her basis and marks the outcome. Bob measures in the
    lowest-index basis containing his ray and answers 1 iff he lands on it.
    """

    name = "quantum"

    def bob_basis(self, bob_vector) -> tuple[int, int]:
        """(basis, slot) Bob measures in: the lowest-index basis containing the ray."""
        return min(self.ks.occurrences(bob_vector))

    def alice_answer(self, alice_set, rnd, channel):
        slot = rnd.entangled_pair(self.ks).measure("alice", alice_set)
        return marked(slot)

    def bob_answer(self, bob_vector, rnd, channel):
        basis, slot = self.bob_basis(bob_vector)
        outcome = rnd.entangled_pair(self.ks).measure("bob", basis)
        return int(outcome == slot)

    def loss_probability(self, q: Question) -> Fraction:
        return 1 - self.win_probability(q)

    def win_probability(self, q):
        basis, bob_slot = self.bob_basis(self.ks.vector(q.alice_set, q.bob_slot))
        d = joint_distribution(self.ks, q.alice_set, basis)
        return sum(
            (d[i, j] for i in range(1, 5) for j in range(1, 5)
             if evaluate_win(q, marked(i), int(j == bob_slot))),
            Fraction(0),
        )


class DeterministicStrategy(Strategy):
    """Alice marks a fixed slot per basis; Bob reads a fixed table of ray values."""

    name = "deterministic"

    def __init__(self, ks: KsSet, alice_choices, bob_table: dict):
        super().__init__(ks)
        alice_choices = tuple(int(c) for c in alice_choices)
        if len(alice_choices) != ks.n_bases or not all(1 <= c <= 4 for c in alice_choices):
            raise ValueError(f"need one slot in 1..4 for each of the {ks.n_bases} bases")
        table = {canonicalize(v): int(b) for v, b in bob_table.items()}
        if set(table) != set(ks.occurrence_index):
            raise ValueError("Bob's table must cover exactly the set's distinct rays")
        if any(b not in (0, 1) for b in table.values()):
            raise ValueError("Bob's table values must be 0 or 1")
        self.alice_choices = alice_choices
        self.bob_table = table

    def alice_answer(self, alice_set, rnd, channel):
        return marked(self.alice_choices[alice_set - 1])

    def bob_answer(self, bob_vector, rnd, channel):
        return self.bob_table[bob_vector]

    def win_probability(self, q):
        return Fraction(int(self._play_once(q)))

    def to_json(self) -> dict:
        return {
            "aliceChoices": list(self.alice_choices),
            "bobTable": [
                {"vector": list(v.coords), "value": self.bob_table[v]} for v in self.ks.distinct_vectors
            ],
        }

    @classmethod
    def from_json(cls, ks: KsSet, data: dict) -> DeterministicStrategy:
        table = {IntVec4(tuple(e["vector"])): e["value"] for e in data["bobTable"]}
        return cls(ks, data["aliceChoices"], table)


def best_classical(ks: KsSet) -> tuple[Fraction, DeterministicStrategy]:
    """Optimal no-communication deterministic strategy by exhaustive search.

    Only Bob's table (one bit per ray) is enumerated: given the table, a basis
    holding t marked rays costs |t - 1| lost questions at best, reached by
    Alice marking a slot the table marks (any slot when t = 0). Alice marks
    the lowest such slot (slot 1 if none); among optimal strategies the
    least (Alice's slots, Bob's bits in first-appearance order) is returned.
    """
    rays = ks.distinct_vectors
    n = len(rays)
    if 2**n > MAX_RAW_ASSIGNMENTS:
        raise SearchTooLarge(f"{n} distinct rays exceed the 2^24 table cap")
    pos = {v: i for i, v in enumerate(rays)}
    members = np.array([[pos[canonicalize(v)] for v in b] for b in ks.bases])
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)  # ray 0 is the most significant bit

    best_loss, optima = None, []
    chunk = 1 << min(n, 16)
    for start in range(0, 1 << n, chunk):
        tables = np.arange(start, start + chunk, dtype=np.int64)
        bits = ((tables[:, None] >> shifts) & 1).astype(np.int8)
        loss = np.abs(bits[:, members].sum(axis=2) - 1).sum(axis=1)
        low = int(loss.min())
        if best_loss is None or low < best_loss:
            best_loss, optima = low, []
        if low == best_loss:
            optima.extend(bits[loss == low].tolist())

    def alice_for(bits):
        # lowest slot the table marks, slot 1 when it marks none
        return tuple(next((s for s, i in enumerate(m, start=1) if bits[i]), 1) for m in members)

    choices, best_table = min((alice_for(b), b) for b in optima)
    table = dict(zip(rays, best_table))
    n_questions = 4 * ks.n_bases
    strategy = DeterministicStrategy(ks, choices, table)
    strategy.name = "best-classical"
    return Fraction(n_questions - best_loss, n_questions), strategy


class OneCbitStrategy(Strategy):
    """Classical strategy with one bit from Alice to Bob per round.

    Both hold a contextual valuation in which only (0,0,0,1) is contextual:
    valued 1 in basis 1 and 0 in its other basis. Alice tells Bob whether
    her basis is basis 1, which is all Bob needs to pick the right value.
    """

    name = "one-cbit"
    communicates = True

    def __init__(self, ks: KsSet | None = None, contextual_vector=(0, 0, 0, 1)):
        ks = ks or cabello_set()
        super().__init__(ks)
        v = canonicalize(IntVec4(tuple(contextual_vector)))
        occ = ks.occurrences(v)
        if len(occ) != 2:
            raise ValueError(f"{v} must occur in exactly two bases")
        (k1, s1), second = sorted(occ)
        defect, witness = min_contextuality(ks, allowed_mismatch=[v], fixed_choices={k1: s1})
        if witness is None or defect != 1 or witness.mismatched(ks) != [v]:
            raise ValueError(f"no valuation with {v} as the only contextual ray")
        self.contextual_vector = v
        self.first_context = k1
        self.witness: CtxAssignment = witness
        self._value_first = witness.value(k1, s1)
        self._value_second = witness.value(*second)

    def alice_answer(self, alice_set, rnd, channel):
        channel.send_to_bob(0 if alice_set == self.first_context else 1)
        return marked(self.witness.choices[alice_set - 1])

    def bob_answer(self, bob_vector, rnd, channel):
        bit = channel.receive_at_bob()
        if bob_vector == self.contextual_vector:
            return self._value_first if bit == 0 else self._value_second
        k, s = self.ks.occurrences(bob_vector)[0]
        return self.witness.value(k, s)

    def win_probability(self, q):
        return Fraction(int(self._play_once(q)))


class MixtureStrategy(Strategy):
    """Deterministic strategies mixed by shared randomness; no communication."""

    name = "mixture"

    def __init__(self, ks: KsSet, components):
        super().__init__(ks)
        components = [(Fraction(w), s) for w, s in components]
        if not components:
            raise ValueError("mixture needs at least one component")
        if any(w < 0 for w, _ in components) or sum(w for w, _ in components) != 1:
            raise ValueError("mixture weights must be non-negative and sum to exactly 1")
        self.components = components

    def _pick(self, rnd: RoundRandomness):
        u = rnd.shared().uniform_fraction()
        cum = Fraction(0)
        for w, s in self.components:
            cum += w
            if u < cum:
                return s
        raise AssertionError("shared draw fell outside the mixture")

    def alice_answer(self, alice_set, rnd, channel):
        return self._pick(rnd).alice_answer(alice_set, rnd, channel)

    def bob_answer(self, bob_vector, rnd, channel):
        return self._pick(rnd).bob_answer(bob_vector, rnd, channel)

    def win_probability(self, q):
        return sum((w * s.win_probability(q) for w, s in self.components), Fraction(0))

    def to_json(self) -> dict:
        return {
            "components": [
                {"weight": f"{w.numerator}/{w.denominator}", "strategy": s.to_json()}
                for w, s in self.components
            ]
        }

    @classmethod
    def from_json(cls, ks: KsSet, data: dict) -> MixtureStrategy:
        return cls(ks, [
            (Fraction(c["weight"]), DeterministicStrategy.from_json(ks, c["strategy"]))
            for c in data["components"]
        ])


def quantum_strategy(ks: KsSet | None = None) -> QuantumStrategy:
    return QuantumStrategy(ks or cabello_set())


def deterministic_strategy(alice_choices, bob_table, ks: KsSet | None = None) -> DeterministicStrategy:
    return DeterministicStrategy(ks or cabello_set(), alice_choices, bob_table)


def one_cbit_strategy(ks: KsSet | None = None) -> OneCbitStrategy:
    return OneCbitStrategy(ks)


def shared_randomness_strategy(mixture, ks: KsSet | None = None) -> MixtureStrategy:
    return MixtureStrategy(ks or cabello_set(), mixture)


def strategy_from_name(name: str, ks: KsSet | None = None) -> Strategy:
    """``quantum``, ``best-classical``, ``one-cbit``, ``deterministic:<file>``, ``mixture:<file>``."""
    ks = ks or cabello_set()
    if name == "quantum":
        return QuantumStrategy(ks)
    if name == "best-classical":
        return best_classical(ks)[1]
    if name == "one-cbit":
        return OneCbitStrategy(ks)
    kind, sep, path = name.partition(":")
    if sep and kind in ("deterministic", "mixture"):
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        cls = DeterministicStrategy if kind == "deterministic" else MixtureStrategy
        s = cls.from_json(ks, data)
        s.name = name
        return s
    raise ValueError(f"unknown strategy {name!r}")
