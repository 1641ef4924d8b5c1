"""Bell's deterministic hidden-variable model for a qubit.

A state is a Bloch direction n, a rank-1 projector a Bloch direction m, and
the hidden variable lambda is uniform on [-1/2, 1/2]. The projector is
assigned the value (1/2)(1 + Sign(lambda + |n.m| Sign(n.m) / 2)) with
Sign(0) = +1, whose lambda-average is the Born probability (1 + n.m) / 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .rng import RandomSource

UNIT_TOL = 1e-12
LAMBDA_MIN, LAMBDA_MAX = -0.5, 0.5


@dataclass(frozen=True)
class UnitVec3:
    x: float
    y: float
    z: float

    def __post_init__(self):
        if abs(self.x * self.x + self.y * self.y + self.z * self.z - 1.0) > UNIT_TOL:
            raise ValueError(f"not a unit vector: ({self.x}, {self.y}, {self.z})")

    @classmethod
    def normalized(cls, x, y, z) -> UnitVec3:
        r = math.sqrt(x * x + y * y + z * z)
        return cls(x / r, y / r, z / r)

    def dot(self, other: UnitVec3) -> float:
        # clipped so rounding never pushes a cosine outside [-1, 1]
        return min(1.0, max(-1.0, self.x * other.x + self.y * other.y + self.z * other.z))

    def __neg__(self):
        return UnitVec3(-self.x, -self.y, -self.z)


def sign(x: float) -> float:
    """Sign with Sign(0) = +1."""
    return 1.0 if x >= 0 else -1.0


def _check_unit(*vs):
    for v in vs:
        if not isinstance(v, UnitVec3):
            raise TypeError(f"expected UnitVec3, got {type(v).__name__}")


def born_prob(n: UnitVec3, m: UnitVec3) -> float:
    _check_unit(n, m)
    return 0.5 * (1.0 + n.dot(m))


def hvt_value(n: UnitVec3, m: UnitVec3, lam):
    """0/1 value of the projector along m in the completed state (n, lambda).

    ``lam`` may be a float or an array of floats.
    """
    _check_unit(n, m)
    lam_arr = np.asarray(lam, dtype=float)
    if np.any((lam_arr < LAMBDA_MIN) | (lam_arr > LAMBDA_MAX)):
        raise ValueError("hidden variable outside [-1/2, 1/2]")
    c = n.dot(m)
    arg = lam_arr + 0.5 * abs(c) * sign(c)
    # (1 + Sign(arg)) / 2 with Sign(0) = +1
    values = (arg >= 0).astype(np.int8)
    return int(values) if values.ndim == 0 else values


def hvt_prob_analytic(n: UnitVec3, m: UnitVec3) -> float:
    """Measure of {lambda : value = 1}: the part of [-1/2, 1/2] above -n.m/2."""
    _check_unit(n, m)
    threshold = -0.5 * n.dot(m)
    return min(max(LAMBDA_MAX - threshold, 0.0), 1.0)


def hvt_prob_mc(n: UnitVec3, m: UnitVec3, samples: int, seed: int = 0) -> tuple[float, float]:
    """Monte Carlo lambda-average of the value; returns (estimate, binomial std error)."""
    if samples < 1:
        raise ValueError("samples must be at least 1")
    lam = RandomSource(seed).uniform(LAMBDA_MIN, LAMBDA_MAX, samples)
    p = float(np.mean(hvt_value(n, m, lam)))
    return p, math.sqrt(p * (1.0 - p) / samples)


def verification_grid(n_pairs: int = 101, seed: int = 0) -> list[tuple[UnitVec3, UnitVec3]]:
    """(n, m) pairs with n.m stepping evenly from -1 to 1.

    The endpoints are the axis pair (z, -z) and (z, z) so n.m is exactly +-1;
    interior pairs use pseudo-random orientations.
    """
    if n_pairs < 2:
        raise ValueError("need at least 2 pairs")
    rng = np.random.default_rng(seed)
    ez = UnitVec3(0.0, 0.0, 1.0)
    pairs = []
    for k in range(n_pairs):
        c = -1.0 + 2.0 * k / (n_pairs - 1)
        if k == 0 or k == n_pairs - 1:
            pairs.append((ez, -ez if k == 0 else ez))
            continue
        a = rng.normal(size=3)
        a /= np.linalg.norm(a)
        w = rng.normal(size=3)
        w -= w.dot(a) * a
        w /= np.linalg.norm(w)
        b = c * a + math.sqrt(1.0 - c * c) * w
        pairs.append((UnitVec3.normalized(*a), UnitVec3.normalized(*b)))
    return pairs


def grid_table(n_pairs: int = 101, samples: int = 10**6, seed: int = 0) -> list[dict]:
    """Rows (n.m, analytic, born, mc estimate, std error) over the verification grid."""
    rows = []
    for idx, (n, m) in enumerate(verification_grid(n_pairs, seed)):
        est, se = hvt_prob_mc(n, m, samples, seed + idx)
        rows.append({
            "dot": n.dot(m),
            "analytic": hvt_prob_analytic(n, m),
            "born": born_prob(n, m),
            "mcEstimate": est,
            "stdError": se,
        })
    return rows
