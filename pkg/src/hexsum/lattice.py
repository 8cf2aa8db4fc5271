"""Geometry of the planar hexagonal lattice in homogeneous coordinates.

Points are triples t = (t1, t2, t3) with t1 + t2 + t3 = 0 and frequencies
are integer triples with the same zero-sum constraint.  The fundamental
domain

    Omega = {t : -1 <= t1 < 1, -1 <= t2 < 1, -1 < t3 <= 1}

is a half-open hexagon whose translates by the period lattice (zero-sum
integer triples j with j1 = j2 = j3 mod 3) tile the plane exactly once.
In the (t1, t2) chart the periods are generated by (1, 1) and (3, 0) and
Omega has area 3.  The Cartesian chart is reached through the generator
matrix H = [[sqrt(3), 0], [-1, 2]], with area element dx = (2 sqrt(3)/3) dt.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

_SQRT3 = math.sqrt(3.0)

#: tolerance on the zero-sum constraint for point coordinates
POINT_TOL = 1e-12

# Shifts that move the base parallelogram {a*(1,1) + b*(3,0) : a, b in [0,1)}
# onto Omega.  Exactly one of them applies to any given point; this is the
# tiling property and is asserted by the test suite.
_OMEGA_SHIFTS = ((0, 0), (1, 1), (3, 0), (4, 1))


@dataclass(frozen=True, order=True)
class HexIndex:
    """Integer frequency triple with k1 + k2 + k3 = 0."""

    k1: int
    k2: int
    k3: int

    def __post_init__(self) -> None:
        if self.k1 + self.k2 + self.k3 != 0:
            raise ValueError(
                "frequency triple must sum to 0, got "
                f"({self.k1}, {self.k2}, {self.k3})"
            )

    def degree(self) -> int:
        """Shell number of the frequency: max(|k1|, |k2|, |k3|)."""
        return max(abs(self.k1), abs(self.k2), abs(self.k3))

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.k1, self.k2, self.k3)

    def negate(self) -> "HexIndex":
        return HexIndex(-self.k1, -self.k2, -self.k3)


@dataclass(frozen=True)
class HexPoint:
    """Plane point in homogeneous coordinates, t1 + t2 + t3 = 0."""

    t1: float
    t2: float
    t3: float

    def __post_init__(self) -> None:
        s = self.t1 + self.t2 + self.t3
        if not abs(s) <= POINT_TOL:
            raise ValueError(
                f"homogeneous coordinates must sum to 0 within {POINT_TOL}, "
                f"got sum {s!r}"
            )

    # Pairwise-difference angles feeding the one-dimensional kernels.
    @property
    def z1(self) -> float:
        return (2.0 * math.pi / 3.0) * (self.t2 - self.t3)

    @property
    def z2(self) -> float:
        return (2.0 * math.pi / 3.0) * (self.t3 - self.t1)

    @property
    def z3(self) -> float:
        return (2.0 * math.pi / 3.0) * (self.t1 - self.t2)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.t1, self.t2, self.t3)


@dataclass(frozen=True)
class LatticeConstants:
    """Fixed geometric constants of the hexagonal lattice."""

    generator: np.ndarray = field(
        default_factory=lambda: np.array([[_SQRT3, 0.0], [-1.0, 2.0]])
    )
    omega_area: float = 3.0  # area of Omega in the (t1, t2) chart


LATTICE = LatticeConstants()


def from_cartesian(x1: float, x2: float) -> HexPoint:
    """Map a Cartesian point onto homogeneous coordinates.

    t1 = -x2/2 + sqrt(3)/2 * x1,  t2 = x2,  t3 = -t1 - t2.  The zero-sum
    constraint holds exactly by construction.
    """
    t1 = -0.5 * x2 + 0.5 * _SQRT3 * x1
    t2 = x2
    return HexPoint(t1, t2, -t1 - t2)


def to_cartesian(t: HexPoint) -> tuple[float, float]:
    """Inverse chart: x = (1/3) H (2 t1 + t2, t1 + 2 t2)^T."""
    u = 2.0 * t.t1 + t.t2
    v = t.t1 + 2.0 * t.t2
    x1 = (_SQRT3 * u) / 3.0
    x2 = (-u + 2.0 * v) / 3.0
    return (x1, x2)


def is_in_omega(t: HexPoint) -> bool:
    """Half-open membership test for the fundamental hexagon."""
    return (
        -1.0 <= t.t1 < 1.0
        and -1.0 <= t.t2 < 1.0
        and -1.0 < t.t3 <= 1.0
    )


def fold(t: HexPoint) -> HexPoint:
    """Translate t by a period so that the result lies in Omega.

    Points already inside Omega are returned unchanged, which makes the map
    idempotent exactly (not merely up to rounding).
    """
    if is_in_omega(t):
        return t
    # Coordinates of t in the period basis (1, 1), (3, 0).
    a = t.t2
    b = (t.t1 - t.t2) / 3.0
    sa = math.floor(a)
    sb = math.floor(b)
    r1 = t.t1 - (sa + 3.0 * sb)
    r2 = t.t2 - sa
    # Rounding can land the reduced point on an excluded edge of the base
    # cell (e.g. t2 - floor(t2) evaluating to 1.0 for t2 just below an
    # integer).  Renormalize by whole periods; the shifts are exact in
    # floating point for the magnitudes that can occur here.
    if r2 >= 1.0:
        r1 -= 1.0
        r2 -= 1.0
    d = r1 - r2
    if d < 0.0:
        r1 += 3.0
    elif d >= 3.0:
        r1 -= 3.0
    for j1, j2 in _OMEGA_SHIFTS:
        u1 = r1 - j1
        u2 = r2 - j2
        u3 = -u1 - u2
        if -1.0 <= u1 < 1.0 and -1.0 <= u2 < 1.0 and -1.0 < u3 <= 1.0:
            return HexPoint(u1, u2, u3)
    raise AssertionError("shift table failed to cover the base cell")


def fold_arrays(t1: np.ndarray, t2: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorised fold of (t1, t2) coordinate arrays into Omega."""
    t1 = np.asarray(t1, dtype=float)
    t2 = np.asarray(t2, dtype=float)
    a = t2
    b = (t1 - t2) / 3.0
    sa = np.floor(a)
    sb = np.floor(b)
    r1 = t1 - (sa + 3.0 * sb)
    r2 = t2 - sa
    # same boundary renormalization as the scalar fold
    hit = r2 >= 1.0
    r1 = np.where(hit, r1 - 1.0, r1)
    r2 = np.where(hit, r2 - 1.0, r2)
    d = r1 - r2
    r1 = np.where(d < 0.0, r1 + 3.0, np.where(d >= 3.0, r1 - 3.0, r1))
    out1 = np.empty_like(r1)
    out2 = np.empty_like(r2)
    done = np.zeros(r1.shape, dtype=bool)
    for j1, j2 in _OMEGA_SHIFTS:
        u1 = r1 - j1
        u2 = r2 - j2
        u3 = -u1 - u2
        ok = ~done
        ok &= (u1 >= -1.0) & (u1 < 1.0)
        ok &= (u2 >= -1.0) & (u2 < 1.0)
        ok &= (u3 > -1.0) & (u3 <= 1.0)
        out1[ok] = u1[ok]
        out2[ok] = u2[ok]
        done |= ok
    if not done.all():
        raise AssertionError("shift table failed to cover the base cell")
    return out1, out2, -(out1 + out2)


def index_shell(nu: int) -> list[HexIndex]:
    """All frequencies of degree exactly nu, in lexicographic (k1, k2) order.

    The shell has 6 * nu elements for nu >= 1 and a single element for
    nu = 0.
    """
    if nu < 0:
        raise ValueError(f"shell number must be nonnegative, got {nu}")
    if nu == 0:
        return [HexIndex(0, 0, 0)]
    cands: set[tuple[int, int]] = set()
    for m in range(-nu, nu + 1):
        cands.update(
            ((nu, m), (-nu, m), (m, nu), (m, -nu), (m, -nu - m), (m, nu - m))
        )
    out = []
    for k1, k2 in sorted(cands):
        k3 = -k1 - k2
        if max(abs(k1), abs(k2), abs(k3)) == nu:
            out.append(HexIndex(k1, k2, k3))
    return out


def indices_up_to(max_degree: int) -> list[HexIndex]:
    """All frequencies of degree <= max_degree, shell by shell."""
    if max_degree < 0:
        raise ValueError(f"max degree must be nonnegative, got {max_degree}")
    out: list[HexIndex] = []
    for nu in range(max_degree + 1):
        out.extend(index_shell(nu))
    return out
