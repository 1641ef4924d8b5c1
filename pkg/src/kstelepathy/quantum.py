"""Exact measurement statistics of the shared maximally entangled state.

The state is (1/2) sum_i |u_i>|u_i> in any real orthonormal basis of the set.
Alice measuring basis a and Bob basis b see outcome pair (i, j) with
probability (1/4) * |<u_i^a|u_j^b>|^2 (normalized), which for integer
vectors is a rational number.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

from .ks_core import Basis, IntVec4, KsSet, dot
from .rng import RandomSource

# Probabilities are plain Fractions; check_prob enforces the [0, 1] range.
ExactProb = Fraction

QUARTER = Fraction(1, 4)


def check_prob(p) -> Fraction:
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError(f"probability out of range: {p}")
    return p


def frac_str(p: Fraction) -> str:
    """Always ``num/den``, also for integers (``1/1``)."""
    p = Fraction(p)
    return f"{p.numerator}/{p.denominator}"


def parse_frac(s: str) -> Fraction:
    return Fraction(s)


def overlap_prob(u: IntVec4, v: IntVec4) -> Fraction:
    return Fraction(dot(u, v) ** 2, u.norm2() * v.norm2())


def completeness_check(b: Basis) -> bool:
    """Whether sum_i u_i u_i^T / |u_i|^2 is exactly the 4x4 identity."""
    for r in range(4):
        for c in range(4):
            entry = sum(Fraction(u[r] * u[c], u.norm2()) for u in b)
            if entry != (1 if r == c else 0):
                return False
    return True


@dataclass(frozen=True)
class JointDistribution:
    alice_basis: int
    bob_basis: int
    probs: tuple[tuple[Fraction, ...], ...]  # probs[i][j], slots 0-based here

    def __post_init__(self):
        if len(self.probs) != 4 or any(len(row) != 4 for row in self.probs):
            raise ValueError("joint distribution must be 4x4")
        if any(p < 0 for row in self.probs for p in row):
            raise ValueError("negative probability")
        if sum(p for row in self.probs for p in row) != 1:
            raise ValueError("joint distribution does not sum to 1")

    def __getitem__(self, ij):
        """Entry for 1-based slots (alice_slot, bob_slot)."""
        i, j = ij
        return self.probs[i - 1][j - 1]

    @cached_property
    def cdf(self) -> tuple[Fraction, ...]:
        """Running sums of the entries in row-major order."""
        out, cum = [], Fraction(0)
        for row in self.probs:
            for p in row:
                cum += p
                out.append(cum)
        return tuple(out)

    def alice_marginal(self) -> list[Fraction]:
        return [sum(row) for row in self.probs]

    def bob_marginal(self) -> list[Fraction]:
        return [sum(row[j] for row in self.probs) for j in range(4)]

    def transpose(self) -> JointDistribution:
        return JointDistribution(
            self.bob_basis, self.alice_basis, tuple(zip(*self.probs))
        )

    def to_json(self) -> dict:
        return {
            "aliceBasis": self.alice_basis,
            "bobBasis": self.bob_basis,
            "probs": [[frac_str(p) for p in row] for row in self.probs],
        }

    def to_text(self) -> str:
        width = max(len(str(p)) for row in self.probs for p in row)
        lines = [f"Alice basis S{self.alice_basis} (rows) x Bob basis S{self.bob_basis} (columns)"]
        for row in self.probs:
            lines.append("  " + "  ".join(str(p).rjust(width) for p in row))
        return "\n".join(lines)


@lru_cache(maxsize=4096)
def joint_distribution(ks: KsSet, alice_basis: int, bob_basis: int) -> JointDistribution:
    a, b = ks.basis(alice_basis), ks.basis(bob_basis)
    for k, basis in ((alice_basis, a), (bob_basis, b)):
        if not completeness_check(basis):
            raise ValueError(f"basis {k} is not a complete orthogonal basis")
    probs = tuple(tuple(QUARTER * overlap_prob(u, v) for v in b) for u in a)
    return JointDistribution(alice_basis, bob_basis, probs)


def _pick(d: JointDistribution, u: Fraction) -> tuple[int, int]:
    for idx, cum in enumerate(d.cdf):
        if u < cum:
            return idx // 4 + 1, idx % 4 + 1
    raise AssertionError("uniform draw fell outside the distribution")


def sample_joint(d: JointDistribution, r: RandomSource) -> tuple[int, int]:
    """Inverse-CDF sample of 1-based (alice_slot, bob_slot), row-major order."""
    return _pick(d, r.uniform_fraction())


class EntangledPair:
    """One copy of the shared state for one round.

    Measurements may come in either order. A single uniform draw is made;
    the first party's outcome is the row that draw falls in (every row has
    mass 1/4), and the second party's outcome comes from inverse-CDF sampling
    of the joint distribution of the two bases with that same draw, so the
    pair is exactly one ``sample_joint`` call.
    """

    def __init__(self, ks: KsSet, r: RandomSource):
        self.ks = ks
        self._u = r.uniform_fraction()
        self._first = None  # (party, basis, slot)
        self._done = set()

    def measure(self, party: str, basis: int) -> int:
        if party in self._done:
            raise RuntimeError(f"{party} already measured this pair")
        self._done.add(party)
        if self._first is None:
            slot, _ = _pick(joint_distribution(self.ks, basis, basis), self._u)
            self._first = (party, basis, slot)
            return slot
        _, first_basis, first_slot = self._first
        i, j = _pick(joint_distribution(self.ks, first_basis, basis), self._u)
        assert i == first_slot
        return j
