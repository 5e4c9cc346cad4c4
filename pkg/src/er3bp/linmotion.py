"""
Linearized two-frequency motion about a stable triangular point.

The displacement from the equilibrium is expanded as

    X(t) = sum_j alpha_j exp(lambda_j t),   Y(t) = sum_j beta_j exp(lambda_j t)

over the four characteristic roots.  For each root the pair (alpha_j,
beta_j) is an eigenvector of the linearized system, so

    beta_j = kappa_j alpha_j,  kappa_j = (lambda_j^2 - Uxx) / (2 n lambda_j + Uxy)
                                     = -(2 n lambda_j - Uxy) / (lambda_j^2 - Uyy),

the two forms being equal whenever lambda_j is a characteristic root.  The
four alpha_j follow from the initial displacement and velocity.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .equilibria import EquilibriumPoint
from .errors import NotStable, SingularConditions
from .model import SystemParams, mean_motion
from .stability import (
    CLASSIFY_TOL,
    Stability,
    characteristic_coefficients,
    classify,
    linearization_matrix,
    quartic_roots,
)

MAX_CONDITION = 1e12
LINEAR_REGIME = 1e-2


@dataclass(frozen=True)
class DisplacementIC:
    xi0: float
    eta0: float
    xidot0: float = 0.0
    etadot0: float = 0.0

    def __post_init__(self):
        if math.hypot(self.xi0, self.eta0) >= LINEAR_REGIME:
            warnings.warn(
                f"initial displacement {math.hypot(self.xi0, self.eta0):.3g} is outside "
                f"the linear regime (< {LINEAR_REGIME:g})",
                stacklevel=3,
            )

    def as_array(self) -> np.ndarray:
        return np.array([self.xi0, self.eta0, self.xidot0, self.etadot0])


@dataclass(frozen=True)
class ModeDecomposition:
    """Modal expansion of the linearized motion.

    ``roots``, ``alpha`` and ``beta`` are length-4 complex arrays; roots are
    ordered (+i w_long, -i w_long, +i w_short, -i w_short).
    """

    omega_long: float
    omega_short: float
    roots: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    point: EquilibriumPoint

    @property
    def coefficients(self) -> list[tuple[complex, complex]]:
        return list(zip(self.alpha, self.beta))

    def without_long_mode(self) -> ModeDecomposition:
        alpha = self.alpha.copy()
        beta = self.beta.copy()
        alpha[:2] = beta[:2] = 0.0
        return ModeDecomposition(
            self.omega_long, self.omega_short, self.roots, alpha, beta, self.point
        )


def _stable_roots(
    params: SystemParams, point: EquilibriumPoint, tol: float, semi_latus_scaling: bool
) -> tuple[complex, complex, complex, complex]:
    roots = quartic_roots(characteristic_coefficients(params, point, semi_latus_scaling))
    cls = classify(roots, tol)
    if cls is not Stability.STABLE:
        raise NotStable(
            f"characteristic roots {roots} are {cls.value}, not purely imaginary"
        )
    return roots


def mode_frequencies(
    params: SystemParams,
    point: EquilibriumPoint,
    tol: float = CLASSIFY_TOL,
    semi_latus_scaling: bool = False,
) -> tuple[float, float]:
    """(omega_long, omega_short): the two positive imaginary parts, ascending."""
    roots = _stable_roots(params, point, tol, semi_latus_scaling)
    low, high = sorted(abs(r.imag) for r in roots[::2])
    return low, high


def eigen_ratios(
    params: SystemParams, point: EquilibriumPoint, roots, semi_latus_scaling: bool = False
) -> np.ndarray:
    """kappa_j = beta_j / alpha_j for each root."""
    uxx, uxy, uyy = linearization_matrix(params, point, semi_latus_scaling)
    two_n = 2.0 * mean_motion(params)
    out = []
    for lam in roots:
        den_a = two_n * lam + uxy
        den_b = lam * lam - uyy
        if abs(den_a) >= abs(den_b):
            out.append((lam * lam - uxx) / den_a)
        else:
            out.append(-(two_n * lam - uxy) / den_b)
    return np.array(out, dtype=complex)


def solve_coefficients(
    params: SystemParams,
    point: EquilibriumPoint,
    ic: DisplacementIC,
    tol: float = CLASSIFY_TOL,
    semi_latus_scaling: bool = False,
) -> ModeDecomposition:
    roots = _stable_roots(params, point, tol, semi_latus_scaling)
    lam_a, _, lam_b, _ = roots
    # long mode first, positive imaginary part first within a pair
    pairs = sorted((lam_a, lam_b), key=lambda r: abs(r.imag))
    ordered = []
    for lam in pairs:
        lam = complex(0.0, abs(lam.imag)) if lam.imag != 0 else lam
        ordered += [lam, lam.conjugate()]
    lam = np.array(ordered, dtype=complex)
    kappa = eigen_ratios(params, point, lam, semi_latus_scaling)

    m = np.vstack([np.ones(4), kappa, lam, lam * kappa])
    cond = np.linalg.cond(m)
    if not cond <= MAX_CONDITION:
        raise SingularConditions(f"condition number {cond:.3e} exceeds {MAX_CONDITION:g}")
    alpha = np.linalg.solve(m, ic.as_array().astype(complex))
    omega_long, omega_short = abs(lam[0].imag), abs(lam[2].imag)
    return ModeDecomposition(omega_long, omega_short, lam, alpha, kappa * alpha, point)


def complex_series(decomp: ModeDecomposition, t, derivative: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """X, Y (or their ``derivative``-th time derivative) before taking real parts."""
    t = np.asarray(t, dtype=float)
    phase = np.exp(np.multiply.outer(t, decomp.roots))
    weight = decomp.roots**derivative
    x = phase @ (decomp.alpha * weight)
    y = phase @ (decomp.beta * weight)
    return x, y


def evaluate_series(decomp: ModeDecomposition, t_grid, derivative: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Real displacement series (X(t), Y(t)) on ``t_grid``."""
    x, y = complex_series(decomp, t_grid, derivative)
    return x.real, y.real


def trig_amplitudes(decomp: ModeDecomposition) -> dict[str, float]:
    """Coefficients of X, Y as sums of cos/sin of each mode frequency.

    Keys look like ``"x_cos_long"``, ``"y_sin_short"``.
    """
    out = {}
    for name, idx in (("long", 0), ("short", 2)):
        for coord, coef in (("x", decomp.alpha), ("y", decomp.beta)):
            # c e^{i w t} + conj(c) e^{-i w t} = 2 Re(c) cos - 2 Im(c) sin
            c = 0.5 * (coef[idx] + coef[idx + 1].conjugate())
            out[f"{coord}_cos_{name}"] = float(2.0 * c.real)
            out[f"{coord}_sin_{name}"] = float(-2.0 * c.imag)
    return out
