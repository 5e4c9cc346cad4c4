"""
Dynamical model of the planar elliptic restricted three-body problem with
triaxial primaries.

The primaries sit on the x-axis of the rotating frame at (-mu, 0) and
(1 - mu, 0).  Eccentricity and semi-major axis enter only through the
constant factor 1 / (a (1 - e^2)) in the mean motion, so the system is
autonomous and admits a Jacobi-like integral.

All functions here are pure and operate on Python floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import CollisionError

#: Separation below which the potential and its derivatives refuse to evaluate.
COLLISION_CUTOFF = 1e-12

#: Perturbative regime for the triaxiality coefficients.
MAX_TRIAXIALITY = 0.1

_TRIAXIAL_FIELDS = ("sigma1", "sigma2", "gamma1", "gamma2")


@dataclass(frozen=True)
class SystemParams:
    """Dimensionless parameters of the model.

    Parameters
    ----------
    mu : float
        Mass ratio m2 / (m1 + m2), in (0, 0.5].
    sigma1, sigma2 : float
        Triaxiality coefficients of the bigger primary.
    gamma1, gamma2 : float
        Triaxiality coefficients of the smaller primary.
    e : float
        Orbital eccentricity of the primaries, in [0, 1).
    a : float
        Semi-major axis, > 0.
    """

    mu: float
    sigma1: float = 0.0
    sigma2: float = 0.0
    gamma1: float = 0.0
    gamma2: float = 0.0
    e: float = 0.0
    a: float = 1.0

    def __post_init__(self):
        for name in ("mu", *_TRIAXIAL_FIELDS, "e", "a"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if not 0.0 < self.mu <= 0.5:
            raise ValueError(f"mu = {self.mu!r} violates 0 < mu <= 0.5")
        if not 0.0 <= self.e < 1.0:
            raise ValueError(f"e = {self.e!r} violates 0 <= e < 1")
        if not self.a > 0.0:
            raise ValueError(f"a = {self.a!r} violates a > 0")
        for name in _TRIAXIAL_FIELDS:
            value = getattr(self, name)
            if not abs(value) < MAX_TRIAXIALITY:
                raise ValueError(
                    f"{name} = {value!r} violates |{name}| < {MAX_TRIAXIALITY}"
                )

    def with_mu(self, mu: float) -> SystemParams:
        return replace(self, mu=mu)

    def scaled_triaxiality(self, factor: float) -> SystemParams:
        """Copy with every triaxiality coefficient multiplied by `factor`."""
        return replace(
            self, **{name: factor * getattr(self, name) for name in _TRIAXIAL_FIELDS}
        )

    @property
    def semi_latus_factor(self) -> float:
        """1 / (a (1 - e^2))."""
        return 1.0 / (self.a * (1.0 - self.e * self.e))

    def as_dict(self) -> dict:
        return {
            "mu": self.mu,
            "sigma1": self.sigma1,
            "sigma2": self.sigma2,
            "gamma1": self.gamma1,
            "gamma2": self.gamma2,
            "e": self.e,
            "a": self.a,
        }


@dataclass(frozen=True)
class DerivedCoefficients:
    A_gamma: float
    A_sigma: float
    A_alpha: float
    A_beta: float


@dataclass(frozen=True)
class Position:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite position ({self.x!r}, {self.y!r})")

    def mirrored(self) -> Position:
        return Position(self.x, -self.y)


@dataclass(frozen=True)
class PlanarState:
    pos: Position
    vx: float = 0.0
    vy: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.vx) and math.isfinite(self.vy)):
            raise ValueError(f"non-finite velocity ({self.vx!r}, {self.vy!r})")

    @classmethod
    def from_array(cls, arr) -> PlanarState:
        x, y, vx, vy = (float(v) for v in arr)
        return cls(Position(x, y), vx, vy)

    def to_array(self) -> np.ndarray:
        return np.array([self.pos.x, self.pos.y, self.vx, self.vy])


def derived_coefficients(params: SystemParams) -> DerivedCoefficients:
    return DerivedCoefficients(
        A_gamma=params.gamma1 - params.gamma2,
        A_sigma=params.sigma1 - params.sigma2,
        A_alpha=2.0 * params.gamma1 - params.gamma2,
        A_beta=2.0 * params.sigma1 - params.sigma2,
    )


def mean_motion(params: SystemParams) -> float:
    """Mean motion n of the primaries.

    n = (1 + 3/2 (A_beta + A_alpha)) / (a (1 - e^2)); its square multiplies
    the centrifugal term of the potential and 2n is the Coriolis factor.
    """
    c = derived_coefficients(params)
    return params.semi_latus_factor * (1.0 + 1.5 * (c.A_beta + c.A_alpha))


def primary_distances(params: SystemParams, x: float, y: float) -> tuple[float, float]:
    mu = params.mu
    return math.hypot(x + mu, y), math.hypot(x + mu - 1.0, y)


def _check_collision(r1: float, r2: float) -> None:
    if min(r1, r2) < COLLISION_CUTOFF:
        raise CollisionError(
            f"position within {COLLISION_CUTOFF:g} of a primary (r1={r1:.3e}, r2={r2:.3e})"
        )


def _coords(pos) -> tuple[float, float]:
    if isinstance(pos, Position):
        return pos.x, pos.y
    x, y = pos
    return float(x), float(y)


def _attractors(params: SystemParams, x: float, y: float):
    """Per-primary tuples (mass, dx, r, A_1/r^3 coefficient, A_y^2 coefficient)."""
    c = derived_coefficients(params)
    mu = params.mu
    r1, r2 = primary_distances(params, x, y)
    _check_collision(r1, r2)
    return (
        (1.0 - mu, x + mu, r1, c.A_beta, c.A_sigma),
        (mu, x + mu - 1.0, r2, c.A_alpha, c.A_gamma),
    )


def potential(params: SystemParams, pos) -> float:
    """Effective potential U in the rotating frame.

    ``pos`` is a :class:`Position` or an ``(x, y)`` pair.
    """
    x, y = _coords(pos)
    n2 = mean_motion(params) ** 2
    value = 0.0
    centrifugal = 0.0
    for m, _, r, b, s in _attractors(params, x, y):
        value += m * (1.0 / r + b / (2.0 * r**3) - 1.5 * s * y * y / r**5)
        centrifugal += m * r * r
    return 0.5 * n2 * centrifugal + value


def _radial_terms(r: float, b: float, s: float, y: float) -> tuple[float, float]:
    # P: dV/dx = dx * P;  Q: dP/dx = dx * Q
    y2 = y * y
    p = -1.0 / r**3 - 1.5 * b / r**5 + 7.5 * s * y2 / r**7
    q = 3.0 / r**5 + 7.5 * b / r**7 - 52.5 * s * y2 / r**9
    return p, q


def gradient(params: SystemParams, pos) -> tuple[float, float]:
    """Analytic (Ux, Uy)."""
    x, y = _coords(pos)
    n2 = mean_motion(params) ** 2
    ux = n2 * x
    uy = n2 * y
    for m, dx, r, b, s in _attractors(params, x, y):
        p, _ = _radial_terms(r, b, s, y)
        ux += m * dx * p
        uy += m * (y * p - 3.0 * s * y / r**5)
    return ux, uy


def hessian(params: SystemParams, pos) -> tuple[float, float, float]:
    """Analytic second partials (Uxx, Uxy, Uyy)."""
    x, y = _coords(pos)
    n2 = mean_motion(params) ** 2
    uxx = n2
    uyy = n2
    uxy = 0.0
    for m, dx, r, b, s in _attractors(params, x, y):
        p, q = _radial_terms(r, b, s, y)
        y2 = y * y
        uxx += m * (p + dx * dx * q)
        uxy += m * dx * y * (q + 15.0 * s / r**7)
        uyy += m * (p + y2 * q + 30.0 * s * y2 / r**7 - 3.0 * s / r**5)
    return uxx, uxy, uyy
