"""Invariant battery: every library-level contract as a runnable check.

Each check measures a residual and compares it against a pinned
tolerance; run_all_checks returns the full list of CheckResults in a
fixed order.  Randomized checks draw from a seeded generator with
tolerance-safe margins, so pass/fail verdicts do not depend on the seed.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass

import numpy as np

from . import families, fourier, kernels, means
from .fourier import (
    GridFunction,
    SpectralFormatError,
    analyze,
    lp_norm,
    make_grid,
    max_coeff_diff,
    pairwise_sum,
    phi_values,
    spectral_from_json_dict,
    spectral_to_json_dict,
    synthesize,
)
from .lattice import (
    HexPoint,
    LATTICE,
    fold,
    fold_arrays,
    from_cartesian,
    index_shell,
    indices_up_to,
    is_in_omega,
    to_cartesian,
)
from .means import SummationParams


@dataclass
class CheckResult:
    name: str
    passed: bool
    residual: float
    tol: float
    detail: str = ""


def _result(name: str, residual: float, tol: float, detail: str = "") -> CheckResult:
    residual = float(residual)
    return CheckResult(name, residual <= tol, residual, float(tol), detail)


def _random_points(rng: np.random.Generator, count: int, span: float = 6.0):
    t1 = rng.uniform(-span, span, size=count)
    t2 = rng.uniform(-span, span, size=count)
    return t1, t2


# --------------------------------------------------------------------------
# lattice checks
# --------------------------------------------------------------------------

def check_shell_enumeration(rng) -> CheckResult:
    """index_shell vs brute-force cube enumeration, and |J_nu| = 6 nu."""
    bad = 0
    for nu in range(21):
        brute = set()
        for k1 in range(-nu, nu + 1):
            for k2 in range(-nu, nu + 1):
                k3 = -k1 - k2
                if max(abs(k1), abs(k2), abs(k3)) == nu:
                    brute.add((k1, k2, k3))
        got = [k.as_tuple() for k in index_shell(nu)]
        if set(got) != brute or len(got) != len(brute):
            bad += 1
        if nu >= 1 and len(got) != 6 * nu:
            bad += 1
        if got != sorted(got):
            bad += 1
    return _result("lattice.shell_enumeration", bad, 0, "nu <= 20 vs cube scan")


def check_fold(rng) -> CheckResult:
    """fold lands in the hexagon and is exactly idempotent."""
    t1, t2 = _random_points(rng, 2000, span=8.0)
    bad = 0
    for a, b in zip(t1, t2):
        t = HexPoint(a, b, -a - b)
        ft = fold(t)
        if not is_in_omega(ft):
            bad += 1
        if fold(ft).as_tuple() != ft.as_tuple():
            bad += 1
    f1, f2, f3 = fold_arrays(t1, t2)
    if not (np.all(f1 >= -1) and np.all(f1 < 1) and np.all(f2 >= -1) and np.all(f2 < 1)):
        bad += 1
    if not (np.all(f3 > -1) and np.all(f3 <= 1)):
        bad += 1
    g1, g2, g3 = fold_arrays(f1, f2)
    if not (np.array_equal(g1, f1) and np.array_equal(g2, f2) and np.array_equal(g3, f3)):
        bad += 1
    return _result("lattice.fold_membership_idempotent", bad, 0, "2000 random points")


def check_fold_phase_invariance(rng) -> CheckResult:
    """Basis monomials cannot tell a point from its fold."""
    t1, t2 = _random_points(rng, 1000)
    t3 = -(t1 + t2)
    f1, f2, f3 = fold_arrays(t1, t2)
    worst = 0.0
    for k in indices_up_to(5):
        d = np.abs(phi_values(k, f1, f2, f3) - phi_values(k, t1, t2, t3)).max()
        worst = max(worst, float(d))
    return _result("lattice.fold_phase_invariance", worst, 1e-10, "deg <= 5, 1000 points")


def check_tiling(rng) -> CheckResult:
    """Each point has exactly one lattice translate inside the hexagon."""
    t1, t2 = _random_points(rng, 300, span=4.0)
    bad = 0
    for a, b in zip(t1, t2):
        hits = 0
        for j1 in range(-9, 10):
            for j2 in range(-9, 10):
                if (j1 - j2) % 3 != 0:
                    continue
                u, v = a + j1, b + j2
                if is_in_omega(HexPoint(u, v, -u - v)):
                    hits += 1
        if hits != 1:
            bad += 1
    return _result("lattice.tiling_uniqueness", bad, 0, "300 points, shifts |j| <= 9")


def check_coordinates(rng) -> CheckResult:
    """Cartesian round trips, the Jacobian factor, and the hexagon area."""
    worst = 0.0
    for _ in range(500):
        x1, x2 = rng.uniform(-5, 5, size=2)
        t = from_cartesian(x1, x2)
        y1, y2 = to_cartesian(t)
        worst = max(worst, abs(y1 - x1), abs(y2 - x2), abs(t.t1 + t.t2 + t.t3))
    # linear map matrix from unit steps in (t1, t2)
    ox, oy = to_cartesian(HexPoint(0.0, 0.0, 0.0))
    a1 = to_cartesian(HexPoint(1.0, 0.0, -1.0))
    a2 = to_cartesian(HexPoint(0.0, 1.0, -1.0))
    det = (a1[0] - ox) * (a2[1] - oy) - (a2[0] - ox) * (a1[1] - oy)
    worst = max(worst, abs(det - 2.0 * math.sqrt(3.0) / 3.0))
    # shoelace area of the fundamental hexagon in (t1, t2)
    verts = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)]
    twice = sum(
        x0 * y1_ - x1_ * y0
        for (x0, y0), (x1_, y1_) in zip(verts, verts[1:] + verts[:1])
    )
    worst = max(worst, abs(0.5 * twice - LATTICE.omega_area))
    return _result("lattice.coordinates_roundtrip", worst, 1e-12, "500 points + area/Jacobian")


# --------------------------------------------------------------------------
# fourier checks
# --------------------------------------------------------------------------

def check_orthonormality_small(rng) -> CheckResult:
    """Brute-force Gram matrix on the n=16 grid, degrees <= 3."""
    grid = make_grid(16)
    t1, t2, t3 = grid.t_arrays
    idx = indices_up_to(3)
    rows = np.stack([phi_values(k, t1, t2, t3) for k in idx])
    gram = (rows @ rows.conj().T) * grid.weight
    worst = float(np.abs(gram - np.eye(len(idx))).max())
    return _result("fourier.orthonormality_small", worst, 1e-12, "n=16, deg <= 3")


def check_roundtrip_parseval(rng) -> CheckResult:
    """analyze(synthesize(f)) returns f; grid Parseval holds."""
    f = families.random_spectrum(6, rng)
    grid = make_grid(64)
    g = synthesize(f, grid)
    back = analyze(g, 6)
    worst = max_coeff_diff(f, back)
    mass = math.fsum(abs(c) ** 2 for _, c in f.items())
    mean_sq = float(pairwise_sum(np.abs(g.values) ** 2)) * grid.weight
    worst = max(worst, abs(mass - mean_sq))
    return _result("fourier.roundtrip_parseval", worst, 1e-12, "deg 6 at n=64")


def check_lp_norms(rng) -> CheckResult:
    """Monotonicity in p and absolute homogeneity."""
    f = families.random_spectrum(5, rng)
    grid = make_grid(48)
    g = synthesize(f, grid)
    ladder = [1.0, 1.5, 2.0, 3.0, 6.0, math.inf]
    norms = [lp_norm(g, p) for p in ladder]
    worst = 0.0
    for lo, hi in zip(norms, norms[1:]):
        worst = max(worst, lo - hi)
    c = -2.5 + 1.25j
    scaled = GridFunction(grid, c * g.values)
    for p in (1.0, 2.0, math.inf):
        worst = max(worst, abs(lp_norm(scaled, p) - abs(c) * lp_norm(g, p)))
    return _result("fourier.lp_norms", worst, 1e-12, "p ladder + homogeneity")


def check_json_io(rng) -> CheckResult:
    """Round trip is exact; malformed documents are rejected with context."""
    f = families.random_spectrum(4, rng)
    buf = io.StringIO()
    json.dump(spectral_to_json_dict(f), buf)
    back = spectral_from_json_dict(json.loads(buf.getvalue()))
    bad = 0 if max_coeff_diff(f, back) == 0.0 else 1

    doc = {"max_degree": 2, "entries": [{"k": [1, 2, 0], "re": 1.0, "im": 0.0}]}
    try:
        spectral_from_json_dict(doc)
        bad += 1
    except SpectralFormatError as exc:
        if "(1, 2, 0)" not in str(exc):
            bad += 1
    for broken in (
        {"max_degree": 1, "entries": [], "extra": 1},
        {"max_degree": 1, "entries": [{"k": [1, -1, 0], "re": 0.0, "im": 0.0, "x": 1}]},
        {
            "max_degree": 1,
            "entries": [
                {"k": [1, -1, 0], "re": 1.0, "im": 0.0},
                {"k": [1, -1, 0], "re": 2.0, "im": 0.0},
            ],
        },
        {"max_degree": 0, "entries": [{"k": [1, -1, 0], "re": 1.0, "im": 0.0}]},
    ):
        try:
            spectral_from_json_dict(broken)
            bad += 1
        except SpectralFormatError:
            pass
    return _result("fourier.json_io", bad, 0, "round trip + 5 reject cases")


def check_determinism(rng) -> CheckResult:
    """Repeated evaluation is bit-identical."""
    f = families.random_spectrum(5, rng)
    grid = make_grid(32)
    a = synthesize(f, grid).values
    b = synthesize(f, grid).values
    bad = 0 if np.array_equal(a, b) else 1
    ca = analyze(GridFunction(grid, a), 5)
    cb = analyze(GridFunction(grid, b), 5)
    if max_coeff_diff(ca, cb) != 0.0:
        bad += 1
    x = rng.standard_normal(10001)
    if pairwise_sum(x) != pairwise_sum(x.copy()):
        bad += 1
    return _result("fourier.determinism", bad, 0, "synthesize/analyze/pairwise repeats")


def check_pairwise_sum(rng) -> CheckResult:
    """Tree summation matches fsum to near machine precision."""
    x = rng.standard_normal(100000)
    exact = math.fsum(x.tolist())
    err = abs(float(pairwise_sum(x)) - exact) / (1.0 + abs(exact))
    m = rng.standard_normal((257, 33))
    col = pairwise_sum(m, axis=0)
    err2 = max(
        abs(float(col[j]) - math.fsum(m[:, j].tolist())) for j in range(m.shape[1])
    )
    return _result("fourier.pairwise_sum", max(err, err2), 1e-12, "vs fsum, flat + axis")


# --------------------------------------------------------------------------
# kernel checks
# --------------------------------------------------------------------------

def check_classical_kernel(rng) -> CheckResult:
    """Point values, the derivative bound, and the two code paths."""
    worst = 0.0
    for z in rng.uniform(-8, 8, size=20):
        worst = max(worst, abs(kernels.classical_kernel_deriv(0.0, z, 0) - 1.0))
    for rho in (0.1, 0.5, 0.9):
        exact = (1.0 + rho) / (1.0 - rho)
        worst = max(
            worst, abs(kernels.classical_kernel_deriv(rho, 0.0, 0) - exact) / exact
        )
    rhos = rng.uniform(0.0, 0.99, size=1500)
    zs = rng.uniform(-math.pi, math.pi, size=1500)
    for r in range(kernels.R_MAX + 1):
        vals = np.array(
            [kernels.classical_kernel_deriv(rho, z, r) for rho, z in zip(rhos, zs)]
        )
        bound = 2.0 * math.factorial(r) / (1.0 - rhos) ** (r + 1)
        worst = max(worst, float((np.abs(vals) / bound).max()) - 1.0)
        # vectorized table path agrees with the scalar formula
        for rho in (0.2, 0.7):
            tab = kernels._classical_deriv_table(rho, zs[:50], r)[r]
            sca = np.array([kernels.classical_kernel_deriv(rho, z, r) for z in zs[:50]])
            scale = float(np.abs(sca).max()) + 1.0
            worst = max(worst, float(np.abs(tab - sca).max()) / scale)
    return _result("kernels.classical_kernel", worst, 1e-12, "values, bound, table path")


def check_weight_derivatives(rng) -> CheckResult:
    """Quotient-rule weight derivatives vs independently reduced forms."""
    worst = 0.0
    refs3 = (
        lambda rho: -3.0 * (1.0 + rho * rho) / (1.0 + rho) ** 4,
        lambda rho: 6.0 * (rho * rho - rho + 2.0) / (1.0 + rho) ** 5,
        lambda rho: 6.0 * (-3.0 * rho * rho + 6.0 * rho - 11.0) / (1.0 + rho) ** 6,
    )
    refs2 = (
        lambda rho: (1.0 - rho) / (1.0 + rho) ** 3,
        lambda rho: 2.0 * (rho - 2.0) / (1.0 + rho) ** 4,
        lambda rho: 6.0 * (3.0 - rho) / (1.0 + rho) ** 5,
    )
    for order in (1, 2, 3):
        d3 = kernels.triple_weight_deriv(order)
        d2 = kernels.pair_weight_deriv(order)
        for rho in np.linspace(0.0, 0.95, 20):
            scale = 1.0 + abs(refs3[order - 1](rho))
            worst = max(worst, abs(d3.evaluate(rho) - refs3[order - 1](rho)) / scale)
            worst = max(worst, abs(d2.evaluate(rho) - refs2[order - 1](rho)))
    return _result("kernels.weight_derivatives", worst, 1e-12, "orders 1-3, exact forms")


def check_closed_vs_series(rng) -> CheckResult:
    """Truncated shell series sits within its own tail bound of the closed form."""
    t1, t2 = _random_points(rng, 200, span=3.0)
    t3 = -(t1 + t2)
    worst = 0.0
    for rho in (0.3, 0.6):
        closed = kernels.hex_kernel_closed_values(rho, t1, t2, t3)
        for cutoff in (10, 25):
            vals, tail = kernels.hex_kernel_series_values(rho, t1, t2, t3, cutoff)
            gap = float(np.abs(closed - vals.real).max())
            worst = max(worst, gap - tail, float(np.abs(vals.imag).max()) - 1e-12)
    return _result("kernels.closed_vs_series", worst, 1e-12, "tail bound certifies")


def check_kernel_values(rng) -> CheckResult:
    """Positivity, the center value, and the rho=0 degeneration."""
    t1, t2 = _random_points(rng, 500, span=3.0)
    t3 = -(t1 + t2)
    worst = 0.0
    for rho in (0.1, 0.4, 0.7, 0.95):
        vals = kernels.hex_kernel_closed_values(rho, t1, t2, t3)
        if not np.all(vals > 0.0):
            worst = max(worst, 1.0)
        center = kernels.hex_kernel_closed(rho, HexPoint(0.0, 0.0, 0.0))
        exact = (1.0 + 4.0 * rho + rho * rho) / (1.0 - rho) ** 2
        worst = max(worst, abs(center - exact) / exact)
    z0 = kernels.hex_kernel_closed_values(0.0, t1, t2, t3)
    worst = max(worst, float(np.abs(z0 - 1.0).max()))
    return _result("kernels.kernel_values", worst, 1e-12, "positive, center, rho=0")


def check_hex_deriv_order_zero(rng) -> CheckResult:
    """Order-0 derivative is the closed form, bit for bit."""
    t1, t2 = _random_points(rng, 100, span=3.0)
    t3 = -(t1 + t2)
    bad = 0
    for rho in (0.2, 0.8):
        a = kernels.hex_kernel_deriv_values(rho, t1, t2, t3, 0)
        b = kernels.hex_kernel_closed_values(rho, t1, t2, t3)
        if not np.array_equal(a, b):
            bad += 1
        t = HexPoint(float(t1[0]), float(t2[0]), float(t3[0]))
        if kernels.hex_kernel_deriv(rho, t, 0) != kernels.hex_kernel_closed(rho, t):
            bad += 1
    return _result("kernels.hex_deriv_order_zero", bad, 0, "exact equality")


def check_hex_deriv_finite_difference(rng) -> CheckResult:
    """First rho-derivative vs central differences, 1e-5 relative."""
    t1, t2 = _random_points(rng, 50, span=3.0)
    t3 = -(t1 + t2)
    h = 1e-5
    worst = 0.0
    for rho in (0.2, 0.5, 0.8):
        d1 = kernels.hex_kernel_deriv_values(rho, t1, t2, t3, 1)
        fd = (
            kernels.hex_kernel_closed_values(rho + h, t1, t2, t3)
            - kernels.hex_kernel_closed_values(rho - h, t1, t2, t3)
        ) / (2 * h)
        worst = max(worst, float((np.abs(fd - d1) / (1.0 + np.abs(d1))).max()))
    return _result("kernels.hex_deriv_fd", worst, 1e-5, "r=1, central step 1e-5")


def check_hex_deriv_series(rng) -> CheckResult:
    """Leibniz derivatives vs the termwise-differentiated series at cutoff 600."""
    t1, t2 = _random_points(rng, 64, span=3.0)
    t3 = -(t1 + t2)
    rho = 0.7
    worst = 0.0
    for r in (1, 2, 3):
        closed = kernels.hex_kernel_deriv_values(rho, t1, t2, t3, r)
        series = kernels.hex_deriv_series_values(rho, t1, t2, t3, r, 600)
        worst = max(worst, float(np.abs(closed - series.real).max()))
    return _result("kernels.hex_deriv_series", worst, 1e-7, "rho=0.7, r <= 3")


def check_bernstein_order_zero(rng) -> CheckResult:
    """The kernel has unit mean, so the r=0 integral is 1."""
    worst = 0.0
    for rho in (0.3, 0.9):
        res = kernels.bernstein_integral(rho, 0)
        worst = max(worst, abs(res.value - 1.0))
        if not res.full_resolution:
            worst = max(worst, 1.0)
    return _result("kernels.bernstein_order_zero", worst, 1e-6, "auto grid")


def check_product_integrals(rng) -> CheckResult:
    """Product integrals respect their explicit factorial bounds and exact values."""
    worst = 0.0
    for rho in (0.3, 0.7):
        one = 1.0 - rho
        worst = max(worst, abs(kernels.product_integral(rho, "I1", [0]) - 1.0))
        worst = max(worst, abs(kernels.product_integral(rho, "I2", [0, 0]) - 1.0))
        exact3 = (1.0 + rho**3) / (1.0 - rho**3)
        worst = max(
            worst,
            abs(kernels.product_integral(rho, "I3", [0, 0, 0]) - exact3) / exact3 * 1e-3,
        )
        for r1 in (1, 2, 3):
            bound = 2.0 * math.factorial(r1) / one**r1
            val = kernels.product_integral(rho, "I1", [r1])
            worst = max(worst, (val - bound) / bound)
        for orders in ((1, 1), (2, 1)):
            r = sum(orders)
            bound = 4.0 * math.prod(math.factorial(o) for o in orders) / one**r
            val = kernels.product_integral(rho, "I2", list(orders))
            worst = max(worst, (val - bound) / bound)
        for orders in ((1, 0, 0), (1, 1, 1)):
            r = sum(orders)
            bound = 8.0 * math.prod(math.factorial(o) for o in orders) / one ** (r + 1)
            val = kernels.product_integral(rho, "I3", list(orders))
            worst = max(worst, (val - bound) / bound)
    return _result("kernels.product_integrals", worst, 1e-6, "bounds + exact r=0 values")


# --------------------------------------------------------------------------
# summation checks
# --------------------------------------------------------------------------

def check_lambda_multipliers(rng) -> CheckResult:
    """Range, edge cases, the frozen sample, and the full-sum identity."""
    worst = 0.0
    if means.lambda_coeff(2, 2, 0.5) != 0.75:
        worst = 1.0
    for nu in (0, 1, 3):
        for r in (4, 5):
            if means.lambda_coeff(nu, r, 0.3) != 1.0 and nu < r:
                worst = 1.0
    for nu in (1, 5, 17):
        for rho in (0.0, 0.4, 0.9):
            worst = max(worst, abs(means.lambda_coeff(nu, 1, rho) - rho**nu))
    rhos = rng.uniform(0.0, 0.999, size=6)
    for nu in (0, 1, 2, 5, 20, 60, 200):
        for r in (1, 2, 3, 6):
            for rho in rhos:
                lam = means.lambda_coeff(nu, r, float(rho))
                if not 0.0 <= lam <= 1.0:
                    worst = max(worst, 1.0)
                comp = means.lambda_complement(nu, r, float(rho))
                if nu <= 60:
                    worst = max(worst, abs(lam + comp - 1.0))
    return _result("means.lambda_multipliers", worst, 1e-12, "nu <= 200, r <= 6")


def check_operator_equivalence(rng) -> CheckResult:
    """Spectral multipliers vs the derivative-form assembly."""
    worst = 0.0
    for _ in range(30):
        f = families.random_spectrum(10, rng)
        r = int(rng.integers(1, 5))
        for rho in (0.3, 0.7):
            params = SummationParams(rho, r)
            a = means.apply_operator(f, params)
            b = means.apply_operator_derivative_form(f, params)
            worst = max(worst, max_coeff_diff(a, b))
    return _result("means.operator_equivalence", worst, 1e-12, "30 spectra, r <= 4")


def check_saturation(rng) -> CheckResult:
    """Low-degree spectra are exact fixed points; higher shells strictly damp."""
    bad = 0
    for r in (1, 2, 3):
        f = families.random_spectrum(r - 1, rng) if r > 1 else families.basis_family(0).function
        out = means.apply_operator(f, SummationParams(0.6, r))
        for k, c in f.items():
            if out.coeff(k) != c:
                bad += 1
        for nu in range(r, r + 31):
            for rho in (0.05, 0.5, 0.95):
                if not means.lambda_coeff(nu, r, rho) < 1.0:
                    bad += 1
    return _result("means.saturation", bad, 0, "fixed points exact, damping strict")


def check_deviation_monotone(rng) -> CheckResult:
    """Shell deviations decrease as rho increases."""
    worst = 0.0
    for nu in (3, 7, 20):
        for r in (1, 2, 3):
            if nu < r:
                continue
            prev = None
            for rho in np.linspace(0.05, 0.95, 19):
                comp = means.lambda_complement(nu, r, float(rho))
                if prev is not None:
                    worst = max(worst, comp - prev)
                prev = comp
    # strictly decreasing in exact arithmetic; allow a few ulp of rounding
    return _result("means.deviation_monotone", worst, 1e-14, "complement falls in rho")


def check_commutation(rng) -> CheckResult:
    """Radial derivative of the Poisson integral = rho^n times the n-th derivative."""
    worst = 0.0
    f = families.random_spectrum(10, rng)
    for n in (1, 2, 3, 4):
        for rho in (0.3, 0.8):
            a = means.poisson_integral_spectral(means.radial_derivative(f, n), rho)
            b = fourier.scale_shells(
                f,
                lambda nu: (rho**n)
                * (math.perm(nu, n) * rho ** (nu - n) if nu >= n else 0.0),
            )
            for k, c in a.items():
                d = abs(c - b.coeff(k)) / (1.0 + abs(c))
                worst = max(worst, d)
    return _result("means.commutation", worst, 1e-13, "n <= 4, two float paths")


def check_functionals_on_basis(rng) -> CheckResult:
    """Deviation and derivative functionals take known values on basis monomials."""
    nu = 5
    f = families.basis_family(nu).function
    grid = make_grid(32)
    worst = 0.0
    for r in (1, 2):
        for rho in (0.3, 0.6):
            params = SummationParams(rho, r)
            comp = means.lambda_complement(nu, r, rho)
            for p in (1.0, 2.0, math.inf):
                worst = max(worst, abs(means.deviation_norm(f, params, p, grid) - comp))
                ref = math.perm(nu, r) * rho**nu
                worst = max(worst, abs(means.m_p(f, rho, r, p, grid) - ref) / ref)
            worst = max(worst, abs(means.deviation_l2_spectral(f, params) - comp))
    return _result("means.functionals_on_basis", worst, 1e-10, "|phi_k| = 1 everywhere")


def check_deviation_l2_paths(rng) -> CheckResult:
    """Grid deviation agrees with the exact spectral L2 form."""
    f = families.random_spectrum(8, rng)
    grid = make_grid(64)
    worst = 0.0
    for r in (1, 3):
        for rho in (0.4, 0.85):
            params = SummationParams(rho, r)
            worst = max(
                worst,
                abs(
                    means.deviation_norm(f, params, 2.0, grid)
                    - means.deviation_l2_spectral(f, params)
                ),
            )
    return _result("means.deviation_l2_paths", worst, 1e-10, "deg 8 at n=64")


def check_remainder_coefficients(rng) -> CheckResult:
    """Complement multiplier equals the one-dimensional remainder integral."""
    worst = 0.0
    for nu, r, rho in ((5, 2, 0.5), (30, 4, 0.9), (12, 3, 0.1), (25, 2, 0.75)):
        lhs, rhs = means.remainder_coefficient_check(nu, r, rho)
        worst = max(worst, abs(lhs - rhs))
    return _result("means.remainder_coefficients", worst, 1e-10, "adaptive quadrature")


def check_remainder_norm(rng) -> CheckResult:
    """Gauss-Legendre remainder norm reproduces the direct deviation."""
    f = families.random_spectrum(8, rng)
    grid = make_grid(64)
    worst = 0.0
    for r, rho in ((2, 0.5), (3, 0.8)):
        params = SummationParams(rho, r)
        a = means.remainder_integral_norm(f, params, 2.0, grid)
        b = means.deviation_norm(f, params, 2.0, grid)
        worst = max(worst, abs(a - b))
    return _result("means.remainder_norm", worst, 1e-8, "64 nodes")


def check_kfun(rng) -> CheckResult:
    """K-functional bracket: exact zeros, basis bound, sandwich ordering."""
    worst = 0.0
    poly = families.polynomial_family(1).function
    est = means.kfun_estimate(poly, 0.25, 2, 2.0)
    worst = max(worst, est.upper)
    nu, n = 4, 2
    f = families.basis_family(nu).function
    for delta in (0.5, 0.25, 0.125):
        est = means.kfun_estimate(f, delta, n, 2.0)
        cap = min(1.0, delta**n * math.perm(nu, n))
        worst = max(worst, est.upper - cap * (1.0 + 1e-12))
    shell = families.shell_decay_family(3.0, 24).function
    ratios = []
    for delta in (0.5, 0.25, 0.125, 0.0625):
        est = means.kfun_estimate(shell, delta, 1, 2.0)
        if est.upper == 0.0 and est.lower_proxy > 1e-13:
            worst = max(worst, 1.0)
        if est.upper > 0.0:
            ratios.append(est.lower_proxy / est.upper)
    detail = f"lower/upper max ratio {max(ratios):.3f}" if ratios else "degenerate"
    return _result("means.kfun", worst, 1e-12, detail)


def check_poisson_convolution(rng) -> CheckResult:
    """Spectral Poisson integral vs the direct grid convolution."""
    f = families.random_spectrum(3, rng)
    grid = make_grid(48)
    rho = 0.5
    spectral = synthesize(means.poisson_integral_spectral(f, rho), grid)
    conv = means.poisson_integral_convolution(synthesize(f, grid), rho)
    diff = GridFunction(grid, spectral.values - conv.values)
    return _result(
        "means.poisson_convolution", lp_norm(diff, 2.0), 1e-8, "n=48, deg 3, rho=0.5"
    )


ALL_CHECKS = [
    check_shell_enumeration,
    check_fold,
    check_fold_phase_invariance,
    check_tiling,
    check_coordinates,
    check_orthonormality_small,
    check_roundtrip_parseval,
    check_lp_norms,
    check_json_io,
    check_determinism,
    check_pairwise_sum,
    check_classical_kernel,
    check_weight_derivatives,
    check_closed_vs_series,
    check_kernel_values,
    check_hex_deriv_order_zero,
    check_hex_deriv_finite_difference,
    check_hex_deriv_series,
    check_bernstein_order_zero,
    check_product_integrals,
    check_lambda_multipliers,
    check_operator_equivalence,
    check_saturation,
    check_deviation_monotone,
    check_commutation,
    check_functionals_on_basis,
    check_deviation_l2_paths,
    check_remainder_coefficients,
    check_remainder_norm,
    check_kfun,
    check_poisson_convolution,
]


def run_all_checks(seed: int = 0) -> list[CheckResult]:
    """Run the whole battery with one seeded generator; fixed order."""
    results = []
    for fn in ALL_CHECKS:
        rng = np.random.default_rng([seed, len(results)])
        results.append(fn(rng))
    return results
