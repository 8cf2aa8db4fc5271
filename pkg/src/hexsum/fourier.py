"""Fourier analysis for hexagon-periodic functions.

The orthonormal basis on the fundamental hexagon Omega is

    phi_k(t) = exp((2 pi i / 3) (k1 t1 + k2 t2 + k3 t3)),

indexed by zero-sum integer triples k.  Grid averages over the uniform
n x n sampling (t1, t2) = (3 m1 / n, 3 m2 / n) reproduce integrals over
Omega exactly for trigonometric polynomials of degree d whenever 4 d < n,
because frequency differences in the (t1, t2)-dual chart are bounded by
2 d per component.

All reductions run through a fixed pairwise tree so results do not depend
on scheduling.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping

import numpy as np

from .lattice import HexIndex, HexPoint, fold_arrays, indices_up_to

TWO_PI_OVER_3 = 2.0 * math.pi / 3.0

#: a grid with n samples per axis integrates degree-d polynomials exactly
#: when n > 4 d; analyze() warns below this resolution
def exactness_threshold(max_degree: int) -> int:
    return 4 * max_degree + 1


class SpectralFormatError(ValueError):
    """Raised when a serialized spectral function violates the format."""


class ResolutionWarning(UserWarning):
    """Grid too coarse for the requested analysis degree."""


# --------------------------------------------------------------------------
# deterministic reductions
# --------------------------------------------------------------------------

def pairwise_sum(values: np.ndarray, axis: int | None = None) -> np.ndarray:
    """Sum with a fixed binary-tree reduction order.

    The array is zero-padded to a power of two and halved repeatedly, so
    the association order depends only on the length, never on chunking or
    thread count.  ``axis=None`` reduces the flattened array.
    """
    a = np.asarray(values)
    if axis is None:
        a = a.ravel()
    elif axis != 0:
        a = np.moveaxis(a, axis, 0)
    n = a.shape[0]
    if n == 0:
        return np.zeros(a.shape[1:], dtype=a.dtype if a.dtype.kind in "fc" else float)[()]
    m = 1
    while m < n:
        m *= 2
    if m != n:
        pad = np.zeros((m - n,) + a.shape[1:], dtype=a.dtype)
        a = np.concatenate([a, pad], axis=0)
    while a.shape[0] > 1:
        a = a[0::2] + a[1::2]
    return a[0]


# --------------------------------------------------------------------------
# basis evaluation
# --------------------------------------------------------------------------

def phi(k: HexIndex, t: HexPoint) -> complex:
    """Basis monomial phi_k at a single point."""
    arg = TWO_PI_OVER_3 * (k.k1 * t.t1 + k.k2 * t.t2 + k.k3 * t.t3)
    return complex(math.cos(arg), math.sin(arg))


def phi_values(
    k: HexIndex,
    t1: np.ndarray,
    t2: np.ndarray,
    t3: np.ndarray,
) -> np.ndarray:
    """Basis monomial phi_k on coordinate arrays."""
    arg = TWO_PI_OVER_3 * (k.k1 * np.asarray(t1) + k.k2 * np.asarray(t2) + k.k3 * np.asarray(t3))
    return np.exp(1j * arg)


# --------------------------------------------------------------------------
# grids
# --------------------------------------------------------------------------

class HexGrid:
    """Uniform n x n sampling of Omega with equal weights 1/n^2.

    Sample (m1, m2) sits at (t1, t2) = (3 m1 / n, 3 m2 / n), folded into
    Omega.  Points are stored row-major in (m1, m2).  Folded coordinate
    arrays are materialised lazily; streaming consumers should iterate
    ``iter_chunks`` instead, which yields unfolded coordinates (periodic
    evaluations are unaffected by folding).
    """

    def __init__(self, n: int):
        if n < 4:
            raise ValueError(f"grid resolution must be at least 4, got {n}")
        self.n = int(n)
        self.weight = 1.0 / (self.n * self.n)
        self._folded: tuple[np.ndarray, np.ndarray, np.ndarray] | None = None

    @property
    def size(self) -> int:
        return self.n * self.n

    def _raw_coords(self, start: int, stop: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        idx = np.arange(start, stop)
        m1 = idx // self.n
        m2 = idx % self.n
        t1 = (3.0 * m1) / self.n
        t2 = (3.0 * m2) / self.n
        return t1, t2, -(t1 + t2)

    @property
    def t_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Folded homogeneous coordinates of all n^2 points."""
        if self._folded is None:
            t1, t2, _ = self._raw_coords(0, self.size)
            self._folded = fold_arrays(t1, t2)
        return self._folded

    def iter_chunks(
        self, max_points: int = 1 << 19
    ) -> Iterator[tuple[np.ndarray, np.ndarray, np.ndarray]]:
        """Yield unfolded coordinate chunks of at most ``max_points`` points."""
        for start in range(0, self.size, max_points):
            yield self._raw_coords(start, min(start + max_points, self.size))

    def points(self) -> list[HexPoint]:
        """Folded sample points as HexPoint objects (small grids only)."""
        t1, t2, t3 = self.t_arrays
        return [HexPoint(float(a), float(b), float(c)) for a, b, c in zip(t1, t2, t3)]

    def __repr__(self) -> str:
        return f"HexGrid(n={self.n})"


def make_grid(n: int) -> HexGrid:
    """Build the uniform n x n sampling of Omega.  Requires n >= 4."""
    return HexGrid(n)


@dataclass(frozen=True)
class GridFunction:
    """Complex samples aligned with a grid's point order."""

    grid: HexGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (self.grid.size,):
            raise ValueError(
                f"expected {self.grid.size} samples for n={self.grid.n}, "
                f"got shape {vals.shape}"
            )
        object.__setattr__(self, "values", vals)


# --------------------------------------------------------------------------
# spectral functions
# --------------------------------------------------------------------------

class SpectralFunction:
    """Finite map from zero-sum frequency triples to coefficients.

    Coefficients are stored sparsely, keyed by (k1, k2) with k3 implied.
    ``max_degree`` is a declared bound: every stored key must satisfy
    degree(k) <= max_degree.  Iteration order is canonical (shell by
    shell, lexicographic within a shell), which downstream code relies on
    for reproducible rounding.
    """

    def __init__(
        self,
        coeffs: Mapping[HexIndex | tuple[int, int, int], complex] | Iterable,
        max_degree: int | None = None,
    ):
        items = coeffs.items() if hasattr(coeffs, "items") else coeffs
        store: dict[tuple[int, int], complex] = {}
        deg = 0
        for key, value in items:
            idx = key if isinstance(key, HexIndex) else HexIndex(*key)
            kk = (idx.k1, idx.k2)
            if kk in store:
                raise ValueError(f"duplicate frequency {idx.as_tuple()}")
            store[kk] = complex(value)
            deg = max(deg, idx.degree())
        if max_degree is None:
            max_degree = deg
        elif deg > max_degree:
            raise ValueError(
                f"coefficient at degree {deg} exceeds declared max_degree {max_degree}"
            )
        self._coeffs = store
        self.max_degree = int(max_degree)

    # -- access ------------------------------------------------------------

    def coeff(self, k: HexIndex | tuple[int, int, int]) -> complex:
        idx = k if isinstance(k, HexIndex) else HexIndex(*k)
        return self._coeffs.get((idx.k1, idx.k2), 0.0 + 0.0j)

    def items(self) -> list[tuple[HexIndex, complex]]:
        """Coefficients in canonical (shell-major, lexicographic) order."""
        keyed = []
        for (k1, k2), c in self._coeffs.items():
            idx = HexIndex(k1, k2, -k1 - k2)
            keyed.append(((idx.degree(), k1, k2), idx, c))
        keyed.sort(key=lambda rec: rec[0])
        return [(idx, c) for _, idx, c in keyed]

    @property
    def support_size(self) -> int:
        return len(self._coeffs)

    def degree(self) -> int:
        """Largest shell actually carrying a coefficient (0 if empty)."""
        deg = 0
        for (k1, k2) in self._coeffs:
            deg = max(deg, max(abs(k1), abs(k2), abs(k1 + k2)))
        return deg

    # -- diagnostics ---------------------------------------------------------

    def shell_masses(self) -> np.ndarray:
        """Sum of |coeff|^2 per shell, indexed 0..max_degree."""
        masses = np.zeros(self.max_degree + 1)
        for idx, c in self.items():
            masses[idx.degree()] += (c.real * c.real + c.imag * c.imag)
        return masses

    def l2_norm(self) -> float:
        """Exact L2 norm over Omega via the coefficient sums."""
        return math.sqrt(math.fsum(
            c.real * c.real + c.imag * c.imag for _, c in self.items()
        ))

    def is_real_symmetric(self, tol: float = 1e-12) -> bool:
        """True when coeff(-k) agrees with conj(coeff(k)) within tol."""
        for idx, c in self.items():
            mirror = self.coeff(idx.negate())
            if abs(mirror - c.conjugate()) > tol:
                return False
        return True

    def __repr__(self) -> str:
        return (
            f"SpectralFunction(support={self.support_size}, "
            f"max_degree={self.max_degree})"
        )


def scale_shells(
    f: SpectralFunction,
    multiplier: Callable[[int], complex],
    max_degree: int | None = None,
) -> SpectralFunction:
    """Apply a shell-dependent multiplier; entries scaled to exactly 0 drop."""
    out: dict[HexIndex, complex] = {}
    for idx, c in f.items():
        m = multiplier(idx.degree())
        v = m * c
        if v != 0:
            out[idx] = v
    return SpectralFunction(out, max_degree=f.max_degree if max_degree is None else max_degree)


def truncate_spectrum(f: SpectralFunction, degree: int) -> SpectralFunction:
    """Partial sum: drop every shell above ``degree``."""
    if degree < 0:
        raise ValueError("truncation degree must be nonnegative")
    out = {idx: c for idx, c in f.items() if idx.degree() <= degree}
    return SpectralFunction(out, max_degree=f.max_degree)


def subtract(f: SpectralFunction, g: SpectralFunction) -> SpectralFunction:
    """Coefficientwise difference f - g."""
    out: dict[HexIndex, complex] = {idx: c for idx, c in f.items()}
    for idx, c in g.items():
        out[idx] = out.get(idx, 0.0 + 0.0j) - c
    return SpectralFunction(out, max_degree=max(f.max_degree, g.max_degree))


def max_coeff_diff(f: SpectralFunction, g: SpectralFunction) -> float:
    """Largest coefficientwise difference over the union of supports."""
    keys = {idx for idx, _ in f.items()} | {idx for idx, _ in g.items()}
    if not keys:
        return 0.0
    return max(abs(f.coeff(k) - g.coeff(k)) for k in keys)


# --------------------------------------------------------------------------
# transforms
# --------------------------------------------------------------------------

def synthesize(f: SpectralFunction, grid: HexGrid) -> GridFunction:
    """Evaluate f on every grid point.

    Accumulation runs shell by shell in increasing degree, lexicographic
    within each shell, so rounding is reproducible.
    """
    t1, t2, t3 = grid.t_arrays
    vals = np.zeros(grid.size, dtype=complex)
    for idx, c in f.items():
        vals += c * phi_values(idx, t1, t2, t3)
    return GridFunction(grid, vals)


def analyze(g: GridFunction, max_degree: int) -> SpectralFunction:
    """Grid-average Fourier coefficients for all degrees <= max_degree.

    Exact for inputs sampled from polynomials of degree d when the grid
    satisfies 4 d < n; otherwise aliasing corrupts coefficients and a
    ResolutionWarning is emitted.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be nonnegative")
    n = g.grid.n
    if n < exactness_threshold(max_degree):
        warnings.warn(
            f"grid n={n} is below the exactness threshold "
            f"{exactness_threshold(max_degree)} for degree {max_degree}; "
            "coefficients may alias",
            ResolutionWarning,
            stacklevel=2,
        )
    t1, t2, t3 = g.grid.t_arrays
    coeffs: dict[HexIndex, complex] = {}
    for idx in indices_up_to(max_degree):
        prod = g.values * np.conj(phi_values(idx, t1, t2, t3))
        coeffs[idx] = complex(pairwise_sum(prod) * g.grid.weight)
    return SpectralFunction(coeffs, max_degree=max_degree)


def lp_norm(g: GridFunction, p: float) -> float:
    """Grid L_p norm with the uniform probability weight.

    p = inf returns the grid maximum, which for continuous integrands is a
    lower bound on the true sup-norm converging as the grid refines.
    """
    if p < 1:
        raise ValueError(f"order p must satisfy p >= 1, got {p}")
    mags = np.abs(g.values)
    if math.isinf(p):
        return float(mags.max(initial=0.0))
    total = float(pairwise_sum(mags ** p)) * g.grid.weight
    return total ** (1.0 / p)


# --------------------------------------------------------------------------
# serialization
# --------------------------------------------------------------------------

_TOP_LEVEL_KEYS = {"max_degree", "entries"}
_ENTRY_KEYS = {"k", "re", "im"}


def spectral_to_json_dict(f: SpectralFunction) -> dict:
    entries = [
        {"k": [idx.k1, idx.k2, idx.k3], "re": c.real, "im": c.imag}
        for idx, c in f.items()
    ]
    return {"max_degree": f.max_degree, "entries": entries}


def save_spectral(f: SpectralFunction, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(spectral_to_json_dict(f), fh, indent=2)
        fh.write("\n")


def spectral_from_json_dict(doc: dict) -> SpectralFunction:
    if not isinstance(doc, dict):
        raise SpectralFormatError("spectral document must be a JSON object")
    unknown = set(doc) - _TOP_LEVEL_KEYS
    if unknown:
        raise SpectralFormatError(f"unknown top-level fields: {sorted(unknown)}")
    missing = _TOP_LEVEL_KEYS - set(doc)
    if missing:
        raise SpectralFormatError(f"missing top-level fields: {sorted(missing)}")
    max_degree = doc["max_degree"]
    if not isinstance(max_degree, int) or max_degree < 0:
        raise SpectralFormatError(f"max_degree must be a nonnegative integer, got {max_degree!r}")
    entries = doc["entries"]
    if not isinstance(entries, list):
        raise SpectralFormatError("entries must be a list")
    coeffs: dict[HexIndex, complex] = {}
    for pos, entry in enumerate(entries):
        if not isinstance(entry, dict):
            raise SpectralFormatError(f"entry {pos} must be an object")
        unknown = set(entry) - _ENTRY_KEYS
        if unknown:
            raise SpectralFormatError(f"entry {pos}: unknown fields {sorted(unknown)}")
        missing = _ENTRY_KEYS - set(entry)
        if missing:
            raise SpectralFormatError(f"entry {pos}: missing fields {sorted(missing)}")
        k = entry["k"]
        if (
            not isinstance(k, list)
            or len(k) != 3
            or not all(isinstance(v, int) for v in k)
        ):
            raise SpectralFormatError(f"entry {pos}: k must be a list of 3 integers, got {k!r}")
        if sum(k) != 0:
            raise SpectralFormatError(
                f"entry {pos}: frequency {tuple(k)} does not sum to zero"
            )
        idx = HexIndex(*k)
        if idx.degree() > max_degree:
            raise SpectralFormatError(
                f"entry {pos}: frequency {tuple(k)} exceeds max_degree {max_degree}"
            )
        if idx in coeffs:
            raise SpectralFormatError(f"entry {pos}: duplicate frequency {tuple(k)}")
        re = entry["re"]
        im = entry["im"]
        if not isinstance(re, (int, float)) or not isinstance(im, (int, float)):
            raise SpectralFormatError(f"entry {pos}: re/im must be numbers")
        coeffs[idx] = complex(re, im)
    return SpectralFunction(coeffs, max_degree=max_degree)


def load_spectral(path) -> SpectralFunction:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpectralFormatError(f"invalid JSON: {exc}") from exc
    return spectral_from_json_dict(doc)
