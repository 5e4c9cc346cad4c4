"""
Linear stability of the triangular points.

Small displacements (xi, eta) about an equilibrium obey

    xi''  - 2 n eta' = Uxx xi + Uxy eta
    eta'' + 2 n xi'  = Uxy xi + Uyy eta

whose characteristic polynomial is lambda^4 + U_L lambda^2 + nu_L with
U_L = 4 n^2 - Uxx - Uyy and nu_L = Uxx Uyy - Uxy^2.

By default the second partials are used as-is, which is the exact
linearization of the equations of motion integrated in
:mod:`er3bp.integrator`.  Passing ``semi_latus_scaling=True`` multiplies
them by 1 / (a (1 - e^2)) first, an alternative reading of the
linearized equations.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .equilibria import Branch, EquilibriumPoint, locate_newton
from .errors import BracketInvalid, ER3BPError
from .model import SystemParams, hessian, mean_motion

MAX_POINT_RESIDUAL = 1e-8
CLASSIFY_TOL = 1e-9
MU_LOW = 1e-4
MU_HIGH = 0.5
SCAN_STEP = 1e-3
BISECTION_STEPS = 40


class Stability(enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    MARGINAL = "marginal"


@dataclass(frozen=True)
class CharacteristicCoefficients:
    U_L: float
    nu_L: float

    @property
    def discriminant(self) -> float:
        return self.U_L * self.U_L - 4.0 * self.nu_L


@dataclass(frozen=True)
class StabilityReport:
    coeffs: CharacteristicCoefficients
    roots: tuple[complex, complex, complex, complex]
    classification: Stability

    @property
    def discriminant(self) -> float:
        return self.coeffs.discriminant


@dataclass(frozen=True)
class CriticalMassResult:
    """Boundary of linear stability in the mass ratio.

    ``params_slice`` holds the other parameters; its ``mu`` field is set to
    ``mu_c``.
    """

    mu_c: float
    bracket_width: float
    params_slice: SystemParams


def linearization_matrix(
    params: SystemParams, point: EquilibriumPoint, semi_latus_scaling: bool = False
) -> tuple[float, float, float]:
    """Second partials (Uxx, Uxy, Uyy) entering the linearized equations."""
    uxx, uxy, uyy = hessian(params, point.pos)
    if semi_latus_scaling:
        k = params.semi_latus_factor
        uxx, uxy, uyy = k * uxx, k * uxy, k * uyy
    return uxx, uxy, uyy


def characteristic_coefficients(
    params: SystemParams, point: EquilibriumPoint, semi_latus_scaling: bool = False
) -> CharacteristicCoefficients:
    if not point.residual < MAX_POINT_RESIDUAL:
        raise ValueError(
            f"point residual {point.residual:.3e} is not below {MAX_POINT_RESIDUAL:g}"
        )
    uxx, uxy, uyy = linearization_matrix(params, point, semi_latus_scaling)
    n = mean_motion(params)
    return CharacteristicCoefficients(
        U_L=4.0 * n * n - uxx - uyy,
        nu_L=uxx * uyy - uxy * uxy,
    )


def quartic_roots(coeffs: CharacteristicCoefficients) -> tuple[complex, complex, complex, complex]:
    """Roots of lambda^4 + U_L lambda^2 + nu_L, ordered (l1, l2, l3, l4).

    l1,2 = +-sqrt((-U_L - sqrt(D)) / 2), l3,4 = +-sqrt((-U_L + sqrt(D)) / 2),
    D = U_L^2 - 4 nu_L, principal complex square roots throughout.
    """
    root_d = cmath.sqrt(coeffs.discriminant)
    lam_a = cmath.sqrt((-coeffs.U_L - root_d) / 2.0)
    lam_b = cmath.sqrt((-coeffs.U_L + root_d) / 2.0)
    return lam_a, -lam_a, lam_b, -lam_b


def classify(roots: Iterable[complex], tol: float = CLASSIFY_TOL) -> Stability:
    roots = list(roots)
    if tol <= 0:
        raise ValueError("tol must be positive")
    max_re = max(abs(r.real) for r in roots)
    min_abs = min(abs(r) for r in roots)
    if max_re < tol and min_abs > tol:
        return Stability.STABLE
    if any(r.real > tol for r in roots):
        return Stability.UNSTABLE
    return Stability.MARGINAL


def stability_report(
    params: SystemParams,
    point: EquilibriumPoint,
    tol: float = CLASSIFY_TOL,
    semi_latus_scaling: bool = False,
) -> StabilityReport:
    coeffs = characteristic_coefficients(params, point, semi_latus_scaling)
    roots = quartic_roots(coeffs)
    return StabilityReport(coeffs, roots, classify(roots, tol))


def analyze(
    params: SystemParams,
    branch: Branch = Branch.L4,
    tol: float = CLASSIFY_TOL,
    semi_latus_scaling: bool = False,
) -> StabilityReport:
    """Locate the triangular point by Newton and report its linear stability."""
    point = locate_newton(params, branch)
    return stability_report(params, point, tol, semi_latus_scaling)


def critical_mass(
    params_slice: SystemParams,
    tol: float = 1e-9,
    classify_tol: float = CLASSIFY_TOL,
    semi_latus_scaling: bool = False,
    mu_low: float = MU_LOW,
) -> CriticalMassResult:
    """Mass ratio at which L4 loses linear stability.

    ``params_slice.mu`` is ignored.  The interval [mu_low, 0.5] is scanned
    at a step of 1e-3 for the first stable -> not-stable transition, which
    is then refined by bisection to a bracket of width <= ``tol``.

    When the big primary's triaxiality dominates the small primary's pull
    (tiny mu) the triangular point can be a saddle; raise ``mu_low`` past
    that region in such cases.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not 0.0 < mu_low < MU_HIGH:
        raise ValueError(f"mu_low = {mu_low!r} outside (0, {MU_HIGH})")

    def is_stable(mu: float) -> bool:
        report = analyze(params_slice.with_mu(mu), Branch.L4, classify_tol, semi_latus_scaling)
        return report.classification is Stability.STABLE

    if not is_stable(mu_low):
        raise BracketInvalid(f"L4 is not stable at mu = {mu_low:g}")
    if is_stable(MU_HIGH):
        raise BracketInvalid(f"L4 is stable at mu = {MU_HIGH:g}")

    grid = scan_grid(mu_low=mu_low)
    lo = float(grid[0])
    for mu in grid[1:]:
        mu = float(mu)
        if not is_stable(mu):
            hi = mu
            break
        lo = mu

    steps = 0
    while hi - lo > tol and steps < BISECTION_STEPS:
        mid = 0.5 * (lo + hi)
        if is_stable(mid):
            lo = mid
        else:
            hi = mid
        steps += 1
    mu_c = 0.5 * (lo + hi)
    return CriticalMassResult(mu_c, hi - lo, params_slice.with_mu(mu_c))


def scan_grid(step: float = SCAN_STEP, mu_low: float = MU_LOW) -> np.ndarray:
    """Pre-scan abscissae mu_low, then multiples of ``step`` above it, then 0.5."""
    inner = np.arange(step, MU_HIGH, step)
    return np.concatenate(([mu_low], inner[inner > mu_low], [MU_HIGH]))


@dataclass(frozen=True)
class SweepRow:
    mu: float
    omega_long: float
    omega_short: float
    classification: Stability | None
    max_real_part: float | None = None
    error: str | None = None


def _sweep_row(params_template: SystemParams, mu: float, semi_latus_scaling: bool) -> SweepRow:
    try:
        report = analyze(params_template.with_mu(mu), semi_latus_scaling=semi_latus_scaling)
    except (ER3BPError, ValueError) as exc:
        return SweepRow(mu, math.nan, math.nan, None, error=f"{type(exc).__name__}: {exc}")
    # one representative of each +- pair
    ims = sorted(abs(r.imag) for r in report.roots[::2])
    extra = None
    if report.classification is Stability.UNSTABLE:
        extra = max(r.real for r in report.roots)
    return SweepRow(mu, ims[0], ims[1], report.classification, extra)


def stability_sweep(
    params_template: SystemParams,
    mu_grid: Iterable[float],
    sink: Callable[[SweepRow], None] | None = None,
    semi_latus_scaling: bool = False,
) -> list[SweepRow]:
    """Imaginary parts of the characteristic roots along a grid of mass ratios.

    Failures are recorded in the row's ``error`` field and the sweep goes on.
    Rows are passed to ``sink`` (if given) in grid order and also returned.
    """
    rows = []
    for mu in mu_grid:
        mu = float(mu)
        if not 0.0 < mu <= 0.5:
            raise ValueError(f"grid value mu = {mu!r} outside (0, 0.5]")
        row = _sweep_row(params_template, mu, semi_latus_scaling)
        if sink is not None:
            sink(row)
        rows.append(row)
    return rows
