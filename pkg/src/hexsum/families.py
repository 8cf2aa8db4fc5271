"""Built-in spectral test families for sweeps and rate experiments.

Each family is a truncated SpectralFunction together with a certified
L2 tail bound for whatever was cut off, so experiments can state when
truncation is negligible.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .fourier import SpectralFunction
from .kernels import series_tail_bound
from .lattice import HexIndex, index_shell, indices_up_to


class FamilySpec(NamedTuple):
    name: str
    function: SpectralFunction
    tail_l2: float


def kernel_family(rho0: float = 0.5, max_degree: int = 64) -> FamilySpec:
    """The lattice Poisson kernel at radius rho0, truncated spectrally.

    Coefficients are rho0^nu on every shell-nu frequency.  The L2 tail is
    sqrt(sum_{nu > D} 6 nu rho0^{2 nu}), evaluated in closed form; at the
    default (0.5, 64) it is ~2e-20, machine-negligible.
    """
    if not 0.0 <= rho0 < 1.0:
        raise ValueError(f"rho0 must lie in [0, 1), got {rho0}")
    coeffs = {}
    for nu in range(max_degree + 1):
        c = rho0**nu
        for k in index_shell(nu):
            coeffs[k] = c
    tail = math.sqrt(series_tail_bound(rho0 * rho0, max_degree)) if rho0 else 0.0
    return FamilySpec(f"kernel(rho0={rho0:g})", SpectralFunction(coeffs), tail)


def shell_decay_family(s: float, max_degree: int = 64) -> FamilySpec:
    """Power-law shell decay: coeff = (1+nu)^{-s}/sqrt(6 nu) on shell nu.

    The per-shell L2 mass is exactly (1+nu)^{-2s}, so smoothness is
    controlled by s alone.  The constant shell carries coefficient 1.
    The reported L2 tail uses the integral comparison
    sum_{nu > D} (1+nu)^{-2s} <= (1+D)^{1-2s}/(2s-1).
    """
    if s <= 0.5:
        raise ValueError(f"decay exponent must exceed 1/2, got {s}")
    coeffs: dict[HexIndex, complex] = {HexIndex(0, 0, 0): 1.0 + 0.0j}
    for nu in range(1, max_degree + 1):
        c = (1.0 + nu) ** (-s) / math.sqrt(6.0 * nu)
        for k in index_shell(nu):
            coeffs[k] = c
    # sum_{m >= D+2} m^{-2s} <= integral_{D+1}^inf x^{-2s} dx
    tail = math.sqrt((1.0 + max_degree) ** (1.0 - 2.0 * s) / (2.0 * s - 1.0))
    return FamilySpec(f"shell_decay(s={s:g})", SpectralFunction(coeffs), tail)


def polynomial_family(degree: int = 2) -> FamilySpec:
    """A fixed real-symmetric trigonometric polynomial of the given degree."""
    if degree < 0:
        raise ValueError(f"degree must be nonnegative, got {degree}")
    coeffs: dict[HexIndex, complex] = {HexIndex(0, 0, 0): 1.0 + 0.0j}
    for nu in range(1, degree + 1):
        shell = index_shell(nu)
        for pos, k in enumerate(shell):
            # deterministic, conjugate-symmetric, non-constant across the shell
            mag = 0.5 / (nu * (1 + pos % 3))
            phase = (pos % 5) * 2.0 * math.pi / 5.0
            c = mag * complex(math.cos(phase), math.sin(phase))
            neg = k.negate()
            if (k.k1, k.k2) > (neg.k1, neg.k2):
                coeffs[k] = c
                coeffs[neg] = c.conjugate()
    return FamilySpec(f"polynomial(degree={degree})", SpectralFunction(coeffs), 0.0)


def basis_family(nu: int) -> FamilySpec:
    """A single unit coefficient on one shell-nu frequency."""
    if nu < 0:
        raise ValueError("shell index must be nonnegative")
    k = index_shell(nu)[0]
    return FamilySpec(
        f"basis(nu={nu})", SpectralFunction({k: 1.0 + 0.0j}), 0.0
    )


def random_spectrum(
    max_degree: int,
    rng: np.random.Generator,
    real_symmetric: bool = True,
    normalize: bool = True,
) -> SpectralFunction:
    """Random coefficients on every frequency up to max_degree.

    With ``real_symmetric`` the negated-frequency coefficient is the
    conjugate, so synthesized values are real.  ``normalize`` rescales to
    unit L2 norm.  Draw order is canonical (shell-major), so a seeded
    generator reproduces the same spectrum.
    """
    coeffs: dict[HexIndex, complex] = {}
    for k in indices_up_to(max_degree):
        neg = k.negate()
        if real_symmetric:
            if (k.k1, k.k2) < (neg.k1, neg.k2):
                continue
            if k == neg:
                coeffs[k] = complex(rng.standard_normal(), 0.0)
            else:
                c = complex(rng.standard_normal(), rng.standard_normal())
                coeffs[k] = c
                coeffs[neg] = c.conjugate()
        else:
            coeffs[k] = complex(rng.standard_normal(), rng.standard_normal())
    f = SpectralFunction(coeffs, max_degree=max_degree)
    if normalize:
        norm = f.l2_norm()
        if norm > 0.0:
            f = SpectralFunction(
                {k: c / norm for k, c in f.items()}, max_degree=max_degree
            )
    return f


def builtin_families(max_degree: int = 64) -> list[FamilySpec]:
    """The standard sweep battery: analytic, three power-law decays, one polynomial."""
    return [
        kernel_family(0.5, max_degree),
        shell_decay_family(2.0, max_degree),
        shell_decay_family(3.0, max_degree),
        shell_decay_family(4.0, max_degree),
        polynomial_family(2),
    ]
