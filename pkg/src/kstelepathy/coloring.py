"""0/1 valuations of a vector set: exhaustive search, parity proof, contextuality defect."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .ks_core import CanonicalVec, KsSet, canonicalize

MAX_RAW_ASSIGNMENTS = 2**24
MAX_CONTEXT_CHOICES = 4**12

# A non-contextual assignment maps every distinct ray of a set to a bit.
NcAssignment = dict


class SearchTooLarge(ValueError):
    pass


def _check_domain(a: NcAssignment, ks: KsSet):
    if set(a) != set(ks.occurrence_index):
        raise ValueError("assignment domain does not match the set's distinct rays")


def satisfies(a: NcAssignment, ks: KsSet) -> bool:
    """True iff every basis has exactly one ray valued 1."""
    a = {canonicalize(v): bit for v, bit in a.items()}
    _check_domain(a, ks)
    return all(sum(a[canonicalize(v)] for v in b) == 1 for b in ks.bases)


def search_noncontextual(ks: KsSet) -> list[NcAssignment]:
    """All non-contextual valuations, by depth-first search with per-basis pruning.

    Rays are assigned in first-appearance order, 0 before 1. A branch dies as
    soon as a basis holds two 1s, or all of a basis's rays are set with no 1.
    """
    rays = ks.distinct_vectors
    n = len(rays)
    if 2**n > MAX_RAW_ASSIGNMENTS:
        raise SearchTooLarge(f"{n} distinct rays exceed the 2^24 assignment cap")
    pos = {v: i for i, v in enumerate(rays)}
    members = [[pos[canonicalize(v)] for v in b] for b in ks.bases]
    # bases whose last-assigned ray is at index i; those are checked for "no 1" there
    closes_at = [[] for _ in range(n)]
    touches = [[] for _ in range(n)]
    for k, m in enumerate(members):
        closes_at[max(m)].append(k)
        for i in set(m):
            touches[i].append(k)

    values = [0] * n
    ones = [0] * len(members)
    out = []

    def extend(i):
        if i == n:
            out.append({rays[j]: values[j] for j in range(n)})
            return
        for bit in (0, 1):
            values[i] = bit
            if bit:
                for k in touches[i]:
                    ones[k] += members[k].count(i)
            if all(ones[k] <= 1 for k in touches[i]) and all(ones[k] == 1 for k in closes_at[i]):
                extend(i + 1)
            if bit:
                for k in touches[i]:
                    ones[k] -= members[k].count(i)
        values[i] = 0

    extend(0)
    return out


@dataclass(frozen=True)
class ParityCertificate:
    """Odd number of exactly-one-1 equations, every ray counted an even number of times."""

    basis_count: int
    occurrence_counts: dict

    def to_json(self) -> dict:
        return {
            "basisCount": self.basis_count,
            "occurrenceCounts": [
                {"vector": list(v.coords), "count": c} for v, c in self.occurrence_counts.items()
            ],
        }


def parity_certificate(ks: KsSet) -> ParityCertificate | None:
    counts = {v: len(occ) for v, occ in ks.occurrence_index.items()}
    if ks.n_bases % 2 == 1 and all(c % 2 == 0 for c in counts.values()):
        return ParityCertificate(ks.n_bases, counts)
    return None


@dataclass(frozen=True)
class CtxAssignment:
    """Per-occurrence valuation given by the marked slot (1..4) of each basis."""

    choices: tuple[int, ...]

    def value(self, basis: int, slot: int) -> int:
        return int(self.choices[basis - 1] == slot)

    @property
    def values(self) -> dict[tuple[int, int], int]:
        return {(k, s): self.value(k, s) for k in range(1, len(self.choices) + 1) for s in range(1, 5)}

    def mismatched(self, ks: KsSet) -> list[CanonicalVec]:
        """Rays whose occurrences do not all carry the same value."""
        return [
            v for v, occ in ks.occurrence_index.items()
            if len({self.value(k, s) for k, s in occ}) > 1
        ]

    def defect(self, ks: KsSet) -> int:
        return len(self.mismatched(ks))


def _defects(ks: KsSet, choices: np.ndarray, allowed_mismatch) -> np.ndarray:
    """Defect of every row of ``choices`` (shape (m, n_bases), slots 1..4).

    Rows that mismatch a ray outside ``allowed_mismatch`` get a sentinel
    larger than any real defect.
    """
    defect = np.zeros(len(choices), dtype=np.int64)
    penalty = len(ks.occurrence_index) + 1
    for v, occ in ks.occurrence_index.items():
        if len(occ) < 2:
            continue
        vals = np.stack([choices[:, k - 1] == s for k, s in occ])
        bad = vals.any(axis=0) & ~vals.all(axis=0)
        if allowed_mismatch is not None and v not in allowed_mismatch:
            defect += bad * penalty
        else:
            defect += bad
    return defect


def min_contextuality(ks: KsSet, allowed_mismatch=None, fixed_choices=None):
    """Exhaustive minimum number of rays needing contextual values.

    Enumerates every choice of one marked slot per basis in lexicographic
    order and returns ``(defect, witness)``; the witness is the first choice
    tuple reaching the minimum. ``allowed_mismatch`` restricts witnesses to
    those whose mismatched rays lie in the given collection;
    ``fixed_choices`` ({basis: slot}) pins the marked slot of some bases.
    Returns ``(None, None)`` if the restrictions leave nothing.
    """
    nb = ks.n_bases
    if 4**nb > MAX_CONTEXT_CHOICES:
        raise SearchTooLarge(f"4^{nb} contextual choices exceed the 4^12 cap")
    if allowed_mismatch is not None:
        allowed_mismatch = {canonicalize(v) for v in allowed_mismatch}
    fixed_choices = dict(fixed_choices or {})
    options = [
        [fixed_choices[k]] if k in fixed_choices else [1, 2, 3, 4] for k in range(1, nb + 1)
    ]
    # chunk on a prefix of the bases so a block holds at most 4^9 rows
    n_prefix = max(0, nb - 9)
    tail = np.array(list(product(*options[n_prefix:])), dtype=np.int8).reshape(-1, nb - n_prefix)
    best = None
    for prefix in product(*options[:n_prefix]):
        block = np.hstack([np.tile(np.array(prefix, dtype=np.int8), (len(tail), 1)), tail])
        d = _defects(ks, block, allowed_mismatch)
        i = int(np.argmin(d))
        if best is None or d[i] < best[0]:
            best = (int(d[i]), tuple(int(c) for c in block[i]))
    if best is None or best[0] > len(ks.occurrence_index):
        return None, None
    return best[0], CtxAssignment(best[1])


def witness_to_json(ks: KsSet, defect: int, witness: CtxAssignment) -> dict:
    return {
        "defect": defect,
        "witness": list(witness.choices),
        "mismatchedVectors": [list(v.coords) for v in witness.mismatched(ks)],
    }


def nc_assignment_from_bits(ks: KsSet, bits) -> NcAssignment:
    """Build an assignment from bits listed in first-appearance ray order."""
    rays = ks.distinct_vectors
    if len(bits) != len(rays):
        raise ValueError(f"expected {len(rays)} bits, got {len(bits)}")
    return {v: int(b) for v, b in zip(rays, bits)}
