"""Integer rays in R^4, orthogonal bases and the 18-vector / 9-basis set."""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

COORD_BOUND = 8
MAX_BASES = 64


class KsSetError(ValueError):
    """Raised for malformed vectors, bases or vector-set files."""


class KsSetParseError(KsSetError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True, order=True)
class IntVec4:
    """A ray in real 4-space given by integer coordinates (not normalized)."""

    coords: tuple[int, int, int, int]

    def __post_init__(self):
        coords = tuple(self.coords)
        if len(coords) != 4:
            raise KsSetError(f"expected 4 coordinates, got {len(coords)}")
        if not all(isinstance(c, int) and not isinstance(c, bool) for c in coords):
            raise KsSetError(f"coordinates must be integers: {coords!r}")
        if not any(coords):
            raise KsSetError("the zero vector is not a ray")
        if any(abs(c) > COORD_BOUND for c in coords):
            raise KsSetError(f"coordinates must lie in [-{COORD_BOUND}, {COORD_BOUND}]: {coords!r}")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def of(cls, *coords: int) -> IntVec4:
        if len(coords) == 1:
            coords = tuple(coords[0])
        return cls(tuple(coords))

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def norm2(self) -> int:
        return sum(c * c for c in self.coords)

    def __str__(self):
        return "(" + ",".join(str(c) for c in self.coords) + ")"


# A canonical vector is an IntVec4 whose coordinates are gcd-reduced with the
# first nonzero entry positive. Equality of canonical vectors is ray equality.
CanonicalVec = IntVec4


def canonicalize(v: IntVec4) -> CanonicalVec:
    if not isinstance(v, IntVec4):
        v = IntVec4(tuple(v))
    g = math.gcd(*v.coords)
    coords = [c // g for c in v.coords]
    lead = next(c for c in coords if c)
    if lead < 0:
        coords = [-c for c in coords]
    return IntVec4(tuple(coords))


def dot(u: IntVec4, v: IntVec4) -> int:
    return sum(a * b for a, b in zip(u, v))


@dataclass(frozen=True)
class Basis:
    """Four vectors, slots numbered 1..4.

    Orthogonality is not enforced here so that broken sets can still be built
    and reported on by :func:`validate_ks_set`; see :meth:`is_orthogonal`.
    """

    vectors: tuple[IntVec4, IntVec4, IntVec4, IntVec4]

    def __post_init__(self):
        vecs = tuple(v if isinstance(v, IntVec4) else IntVec4(tuple(v)) for v in self.vectors)
        if len(vecs) != 4:
            raise KsSetError(f"a basis needs 4 vectors, got {len(vecs)}")
        object.__setattr__(self, "vectors", vecs)

    def __getitem__(self, slot: int) -> IntVec4:
        """1-based slot access."""
        if not 1 <= slot <= 4:
            raise IndexError(f"slot {slot} out of range 1..4")
        return self.vectors[slot - 1]

    def __iter__(self):
        return iter(self.vectors)

    def non_orthogonal_pairs(self) -> list[tuple[int, int, int]]:
        """(slot_i, slot_j, dot) for every pair with nonzero inner product."""
        return [
            (i + 1, j + 1, d)
            for (i, u), (j, v) in combinations(enumerate(self.vectors), 2)
            if (d := dot(u, v)) != 0
        ]

    def repeated_rays(self) -> list[tuple[int, int]]:
        canon = [canonicalize(v) for v in self.vectors]
        return [(i + 1, j + 1) for i, j in combinations(range(4), 2) if canon[i] == canon[j]]

    def is_orthogonal(self) -> bool:
        return not self.non_orthogonal_pairs()


@dataclass(frozen=True)
class KsSet:
    """An ordered list of bases plus the inverse index ray -> [(basis, slot)].

    Basis and slot indices are 1-based throughout.
    """

    bases: tuple[Basis, ...]
    occurrence_index: dict = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        bases = tuple(b if isinstance(b, Basis) else Basis(tuple(b)) for b in self.bases)
        if not 1 <= len(bases) <= MAX_BASES:
            raise KsSetError(f"a set needs between 1 and {MAX_BASES} bases, got {len(bases)}")
        index: dict[CanonicalVec, list[tuple[int, int]]] = {}
        for k, basis in enumerate(bases, start=1):
            for s, v in enumerate(basis.vectors, start=1):
                index.setdefault(canonicalize(v), []).append((k, s))
        object.__setattr__(self, "bases", bases)
        object.__setattr__(self, "occurrence_index", {v: tuple(occ) for v, occ in index.items()})

    def basis(self, k: int) -> Basis:
        """1-based basis access."""
        if not 1 <= k <= len(self.bases):
            raise IndexError(f"basis {k} out of range 1..{len(self.bases)}")
        return self.bases[k - 1]

    def vector(self, k: int, slot: int) -> IntVec4:
        return self.basis(k)[slot]

    @property
    def n_bases(self) -> int:
        return len(self.bases)

    @property
    def distinct_vectors(self) -> list[CanonicalVec]:
        """Distinct rays in order of first appearance (basis-major, slot-minor)."""
        return list(self.occurrence_index)

    def occurrences(self, v: IntVec4) -> tuple[tuple[int, int], ...]:
        return self.occurrence_index.get(canonicalize(v), ())

    def restrict(self, basis_indices) -> KsSet:
        return KsSet(tuple(self.basis(k) for k in basis_indices))

    def replace_vector(self, k: int, slot: int, v) -> KsSet:
        bases = list(self.bases)
        vecs = list(bases[k - 1].vectors)
        vecs[slot - 1] = v if isinstance(v, IntVec4) else IntVec4(tuple(v))
        bases[k - 1] = Basis(tuple(vecs))
        return KsSet(tuple(bases))

    def to_text(self) -> str:
        return "".join(" ".join(str(v) for v in b) + "\n" for b in self.bases)


_CABELLO = (
    ((0, 0, 0, 1), (0, 0, 1, 0), (1, 1, 0, 0), (1, -1, 0, 0)),
    ((0, 0, 0, 1), (0, 1, 0, 0), (1, 0, 1, 0), (1, 0, -1, 0)),
    ((1, -1, 1, -1), (1, -1, -1, 1), (1, 1, 0, 0), (0, 0, 1, 1)),
    ((1, -1, 1, -1), (1, 1, 1, 1), (1, 0, -1, 0), (0, 1, 0, -1)),
    ((0, 0, 1, 0), (0, 1, 0, 0), (1, 0, 0, 1), (1, 0, 0, -1)),
    ((1, -1, -1, 1), (1, 1, 1, 1), (1, 0, 0, -1), (0, 1, -1, 0)),
    ((1, 1, -1, 1), (1, 1, 1, -1), (1, -1, 0, 0), (0, 0, 1, 1)),
    ((1, 1, -1, 1), (-1, 1, 1, 1), (1, 0, 1, 0), (0, 1, 0, -1)),
    ((1, 1, 1, -1), (-1, 1, 1, 1), (1, 0, 0, 1), (0, 1, -1, 0)),
)

_cabello_cache: KsSet | None = None


def cabello_set() -> KsSet:
    """The 9 bases of 18 rays, coordinates and order exactly as printed."""
    global _cabello_cache
    if _cabello_cache is None:
        _cabello_cache = KsSet(tuple(Basis(tuple(IntVec4(v) for v in b)) for b in _CABELLO))
    return _cabello_cache


@dataclass
class ValidationReport:
    orthogonal: list[bool]
    violations: list[tuple[int, int, int, int]]  # (basis, slot_i, slot_j, dot)
    repeated_rays: list[tuple[int, int, int]]  # (basis, slot_i, slot_j)
    distinct: int
    occurrence_counts: dict[CanonicalVec, int]

    @property
    def ok(self) -> bool:
        return all(self.orthogonal) and not self.repeated_rays

    @property
    def occurrence_multiset(self) -> Counter:
        return Counter(self.occurrence_counts.values())

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "orthogonal": self.orthogonal,
            "violations": [
                {"basis": k, "slots": [i, j], "dot": d} for k, i, j, d in self.violations
            ],
            "repeatedRays": [{"basis": k, "slots": [i, j]} for k, i, j in self.repeated_rays],
            "distinct": self.distinct,
            "occurrenceCounts": {
                str(c): n for c, n in sorted(self.occurrence_multiset.items())
            },
        }

    def to_text(self) -> str:
        lines = [f"bases: {len(self.orthogonal)}, orthogonal: {sum(self.orthogonal)}"]
        for k, i, j, d in self.violations:
            lines.append(f"  basis {k}: slots {i},{j} have dot product {d}")
        for k, i, j in self.repeated_rays:
            lines.append(f"  basis {k}: slots {i},{j} are the same ray")
        lines.append(f"distinct rays: {self.distinct}")
        mult = ", ".join(f"{n} ray(s) x{c}" for c, n in sorted(self.occurrence_multiset.items()))
        lines.append(f"occurrences: {mult}")
        lines.append("OK" if self.ok else "INVALID")
        return "\n".join(lines)


def validate_ks_set(ks: KsSet) -> ValidationReport:
    orthogonal, violations, repeated = [], [], []
    for k, basis in enumerate(ks.bases, start=1):
        bad = basis.non_orthogonal_pairs()
        orthogonal.append(not bad)
        violations.extend((k, i, j, d) for i, j, d in bad)
        repeated.extend((k, i, j) for i, j in basis.repeated_rays())
    counts = {v: len(occ) for v, occ in ks.occurrence_index.items()}
    return ValidationReport(orthogonal, violations, repeated, len(counts), counts)


_VEC_RE = re.compile(r"\(\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\)")


def parse_ks_set(text: str) -> KsSet:
    """Parse the vector-set text format: one basis of four ``(a,b,c,d)`` per line."""
    bases = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        vecs = []
        pos = 0
        while True:
            while pos < len(line) and line[pos].isspace():
                pos += 1
            if pos >= len(line):
                break
            m = _VEC_RE.match(line, pos)
            if m is None:
                raise KsSetParseError(f"expected a vector like (a,b,c,d), got {line[pos:pos + 12]!r}",
                                      lineno, pos + 1)
            if pos > 0 and vecs and not line[pos - 1].isspace():
                raise KsSetParseError("vectors must be separated by whitespace", lineno, pos + 1)
            try:
                vecs.append(IntVec4(tuple(int(g) for g in m.groups())))
            except KsSetError as exc:
                raise KsSetParseError(str(exc), lineno, pos + 1) from None
            pos = m.end()
        if len(vecs) != 4:
            raise KsSetParseError(f"expected 4 vectors, found {len(vecs)}", lineno, 1)
        bases.append(Basis(tuple(vecs)))
    if not bases:
        raise KsSetParseError("no bases found", 1, 1)
    try:
        return KsSet(tuple(bases))
    except KsSetError as exc:
        raise KsSetParseError(str(exc), len(text.splitlines()), 1) from None


def load_ks_set(path) -> KsSet:
    return parse_ks_set(Path(path).read_text(encoding="utf-8"))
