import itertools
import random
from fractions import Fraction

import pytest

from kstelepathy.coloring import min_contextuality
from kstelepathy.harness import Channel, Question, RoundRandomness, all_questions, evaluate_win, exact_win_probability
from kstelepathy.ks_core import Basis, IntVec4, KsSet, cabello_set, canonicalize
from kstelepathy.rng import RandomSource
from kstelepathy.strategies import (
    DeterministicStrategy,
    MixtureStrategy,
    OneCbitStrategy,
    QuantumStrategy,
    best_classical,
    deterministic_strategy,
    marked,
    one_cbit_strategy,
    quantum_strategy,
    shared_randomness_strategy,
    strategy_from_name,
)

KS = cabello_set()
E = [IntVec4(tuple(int(i == j) for j in range(4))) for i in range(4)]


def random_deterministic(rng: random.Random, ks=KS):
    choices = [rng.randint(1, 4) for _ in range(ks.n_bases)]
    table = {v: rng.randint(0, 1) for v in ks.distinct_vectors}
    return DeterministicStrategy(ks, choices, table)


def brute_force_best(ks):
    """Oracle for small sets: every Bob table times every Alice choice, scored by evaluate_win."""
    rays = ks.distinct_vectors
    best = 0
    for bits in itertools.product((0, 1), repeat=len(rays)):
        table = dict(zip(rays, bits))
        for choice in itertools.product(range(1, 5), repeat=ks.n_bases):
            wins = sum(
                evaluate_win(q, marked(choice[q.alice_set - 1]), table[canonicalize(ks.vector(q.alice_set, q.bob_slot))])
                for q in all_questions(ks)
            )
            best = max(best, wins)
    return Fraction(best, 4 * ks.n_bases)


def test_quantum_bob_uses_lowest_containing_basis():
    s = quantum_strategy()
    v = canonicalize(KS.vector(3, 1))
    assert v == canonicalize(IntVec4((1, -1, 1, -1)))
    assert s.bob_basis(v) == (3, 1)
    assert s.bob_basis(canonicalize(KS.vector(4, 1))) == (3, 1)


def test_quantum_loss_is_exactly_zero_on_every_question():
    s = quantum_strategy()
    for q in all_questions(KS):
        assert s.loss_probability(q) == 0
        assert s.win_probability(q) == 1
    assert exact_win_probability(s) == 1


def test_quantum_round_uses_no_channel():
    s = quantum_strategy()
    for seed in range(50):
        rnd = RoundRandomness(RandomSource(seed))
        ch = Channel()
        a = s.alice_answer(5, rnd, ch)
        b = s.bob_answer(canonicalize(KS.vector(5, 2)), rnd, ch)
        assert ch.bits_sent == 0
        assert evaluate_win(Question(5, 2), a, b)


def test_deterministic_examples():
    # table marks exactly Alice's chosen ray in basis 1
    choices = [1] * 9
    table = {v: 0 for v in KS.distinct_vectors}
    table[canonicalize(KS.vector(1, 1))] = 1
    s = deterministic_strategy(choices, table)
    for slot in range(1, 5):
        assert s.win_probability(Question(1, slot)) == 1

    # an all-zeros table loses exactly where Bob's ray is Alice's marked slot
    zeros = deterministic_strategy(choices, {v: 0 for v in KS.distinct_vectors})
    for q in all_questions(KS):
        assert zeros.win_probability(q) == (q.bob_slot != choices[q.alice_set - 1])
    assert exact_win_probability(zeros) == Fraction(27, 36)


def test_deterministic_validation():
    with pytest.raises(ValueError):
        deterministic_strategy([1] * 8, {v: 0 for v in KS.distinct_vectors})
    with pytest.raises(ValueError):
        deterministic_strategy([1] * 9, {E[0]: 1})
    with pytest.raises(ValueError):
        deterministic_strategy([5] * 9, {v: 0 for v in KS.distinct_vectors})


def test_no_deterministic_strategy_is_perfect():
    rng = random.Random(1)
    for _ in range(200):
        assert exact_win_probability(random_deterministic(rng)) < 1


def test_best_classical_cabello():
    p, s = best_classical(KS)
    assert p == Fraction(35, 36)
    assert exact_win_probability(s) == p
    defect, _ = min_contextuality(KS)
    assert p == 1 - Fraction(defect, 36)


def test_best_classical_small_sets_match_brute_force():
    standard = KsSet((Basis(tuple(E)),))
    p, s = best_classical(standard)
    assert p == 1 == brute_force_best(standard)
    assert s.alice_choices == (1,)
    assert s.bob_table == {E[0]: 1, E[1]: 0, E[2]: 0, E[3]: 0}

    sub = KS.restrict([1, 2])
    p, s = best_classical(sub)
    assert p == 1 == brute_force_best(sub)
    assert exact_win_probability(s) == 1


def test_basis_loss_formula_against_direct_scoring():
    # per basis, best over Alice's 4 slots of lost questions equals |t - 1|
    rng = random.Random(7)
    for _ in range(300):
        table = {v: rng.randint(0, 1) for v in KS.distinct_vectors}
        for k in range(1, 10):
            bits = [table[canonicalize(v)] for v in KS.basis(k)]
            direct = min(
                sum(not evaluate_win(Question(k, p), marked(s), bits[p - 1]) for p in range(1, 5))
                for s in range(1, 5)
            )
            assert direct == abs(sum(bits) - 1)


def test_one_cbit_wins_everything_with_one_bit():
    s = one_cbit_strategy()
    assert s.contextual_vector == IntVec4((0, 0, 0, 1))
    for q in all_questions(KS):
        rnd, ch = RoundRandomness(None), Channel()
        a = s.alice_answer(q.alice_set, rnd, ch)
        b = s.bob_answer(canonicalize(KS.vector(q.alice_set, q.bob_slot)), rnd, ch)
        assert evaluate_win(q, a, b)
        assert (ch.bits_ab, ch.bits_ba) == (1, 0)
    assert exact_win_probability(s) == 1


def test_one_cbit_trace_basis_two_slot_one():
    s = one_cbit_strategy()
    # (0,0,0,1) is 1 in basis 1 and 0 in basis 2
    assert s.witness.value(1, 1) == 1 and s.witness.value(2, 1) == 0
    ch = Channel()
    a = s.alice_answer(2, None, ch)
    assert a[0] == 0
    b = s.bob_answer(IntVec4((0, 0, 0, 1)), None, ch)
    assert b == 0
    assert evaluate_win(Question(2, 1), a, b)


def test_one_cbit_requires_two_contexts():
    with pytest.raises(ValueError):
        OneCbitStrategy(KsSet((Basis(tuple(E)),)), contextual_vector=(0, 0, 0, 1))


def test_mixture_of_one_is_the_strategy():
    rng = random.Random(3)
    base = random_deterministic(rng)
    mix = shared_randomness_strategy([(Fraction(1), base)])
    for q in all_questions(KS):
        assert mix.win_probability(q) == base.win_probability(q)
    for seed in range(20):
        rnd = RoundRandomness(RandomSource(seed))
        assert mix.alice_answer(4, rnd, Channel()) == base.alice_answer(4, rnd, Channel())


def test_mixture_is_linear_and_bounded():
    rng = random.Random(11)
    _, best = best_classical(KS)
    for _ in range(30):
        comps = [random_deterministic(rng) for _ in range(rng.randint(1, 4))] + [best]
        raw = [rng.randint(1, 10) for _ in comps]
        weights = [Fraction(w, sum(raw)) for w in raw]
        mix = MixtureStrategy(KS, list(zip(weights, comps)))
        expected = sum(w * exact_win_probability(c) for w, c in zip(weights, comps))
        assert exact_win_probability(mix) == expected
        assert exact_win_probability(mix) <= Fraction(35, 36)


def test_mixture_weights_must_sum_to_one():
    s = random_deterministic(random.Random(0))
    with pytest.raises(ValueError):
        MixtureStrategy(KS, [(Fraction(1, 2), s)])
    with pytest.raises(ValueError):
        MixtureStrategy(KS, [(Fraction(3, 2), s), (Fraction(-1, 2), s)])


def test_mixture_players_see_the_same_component():
    rng = random.Random(5)
    a, b = random_deterministic(rng), random_deterministic(rng)
    mix = MixtureStrategy(KS, [(Fraction(1, 2), a), (Fraction(1, 2), b)])
    for seed in range(100):
        rnd = RoundRandomness(RandomSource(seed))
        assert mix._pick(rnd) is mix._pick(rnd)


def _isolated_bob_answers(strategy, v, seed, bob_first=False):
    answers = []
    for k, _ in KS.occurrences(v):
        rnd = RoundRandomness(RandomSource(seed))
        ch = Channel()
        if bob_first:
            answers.append(strategy.bob_answer(v, rnd, ch))
            strategy.alice_answer(k, rnd, ch)
        else:
            strategy.alice_answer(k, rnd, ch)
            answers.append(strategy.bob_answer(v, rnd, ch))
    return answers


@pytest.mark.parametrize("seed", range(5))
def test_bob_cannot_tell_which_basis(seed):
    rng = random.Random(seed)
    mix = MixtureStrategy(KS, [(Fraction(1, 3), random_deterministic(rng)), (Fraction(2, 3), random_deterministic(rng))])
    for v in KS.distinct_vectors:
        for s in (random_deterministic(rng), mix):
            assert len(set(_isolated_bob_answers(s, v, seed))) == 1
        # measuring first, Bob's quantum outcome cannot depend on Alice's later choice
        assert len(set(_isolated_bob_answers(quantum_strategy(), v, seed, bob_first=True))) == 1


def test_strategy_from_name(tmp_path):
    assert isinstance(strategy_from_name("quantum"), QuantumStrategy)
    assert isinstance(strategy_from_name("one-cbit"), OneCbitStrategy)
    assert strategy_from_name("best-classical").name == "best-classical"
    _, best = best_classical(KS)
    det = tmp_path / "det.json"
    import json
    det.write_text(json.dumps(best.to_json()))
    s = strategy_from_name(f"deterministic:{det}")
    assert s.alice_choices == best.alice_choices and s.bob_table == best.bob_table
    mix = tmp_path / "mix.json"
    mix.write_text(json.dumps(MixtureStrategy(KS, [("1/4", best), ("3/4", s)]).to_json()))
    m = strategy_from_name(f"mixture:{mix}")
    assert exact_win_probability(m) == Fraction(35, 36)
    with pytest.raises(ValueError):
        strategy_from_name("telepathy")
