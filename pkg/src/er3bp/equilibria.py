"""
Triangular equilibrium points L4/L5.

Two routes are provided.  The perturbative route writes the distances to
the primaries as r_i = 1 + delta_i, keeps first-order terms, and solves a
2x2 linear system for (delta_1, delta_2).  The Newton route sharpens that
guess by a damped 2-D Newton iteration on the exact gradient.

The 2x2 system is available in two forms:

* ``"literal"`` -- a closed-form set of A1..A3, B1..B3 expressions in
  circulation for this model, kept verbatim for comparison.  It is not
  self-consistent (A1 does not vanish in the classical problem).
* ``"derived"`` -- the same first-order system obtained by linearizing the
  exact gradient about the classical triangle (default).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DegenerateSystem, NoConvergence, SingularJacobian
from .model import (
    Position,
    SystemParams,
    derived_coefficients,
    gradient,
    hessian,
    mean_motion,
    primary_distances,
)

DEGENERATE_DENOMINATOR = 1e-12
SINGULAR_DETERMINANT = 1e-14
FIRST_ORDER_LIMIT = 0.1
MAX_HALVINGS = 20

_SQRT3 = math.sqrt(3.0)


class Branch(enum.Enum):
    L4 = "L4"
    L5 = "L5"

    @property
    def sign(self) -> float:
        return 1.0 if self is Branch.L4 else -1.0


class Method(enum.Enum):
    PERTURBATIVE = "perturbative"
    NEWTON = "newton"


@dataclass(frozen=True)
class PerturbativeOffsets:
    delta1: float
    delta2: float

    @property
    def within_first_order(self) -> bool:
        """False when either offset is too large for a first-order expansion."""
        return abs(self.delta1) < FIRST_ORDER_LIMIT and abs(self.delta2) < FIRST_ORDER_LIMIT


@dataclass(frozen=True)
class EquilibriumPoint:
    branch: Branch
    pos: Position
    residual: float
    method: Method
    iterations: int = 0

    def distances(self, params: SystemParams) -> tuple[float, float]:
        return primary_distances(params, self.pos.x, self.pos.y)

    @property
    def r_from_origin(self) -> float:
        return math.hypot(self.pos.x, self.pos.y)


def classical_position(mu: float, branch: Branch = Branch.L4) -> Position:
    return Position(0.5 - mu, branch.sign * 0.5 * _SQRT3)


def literal_gradient(params: SystemParams, pos: Position) -> tuple[float, float]:
    """(Ux, Uy) from the closed forms in circulation for this model, term by term.

    Not a derivative of :func:`er3bp.model.potential`; for instance Ux
    equals 1 - mu (not 0) at the classical L4.  Use
    :func:`er3bp.model.gradient` for anything dynamical.
    """
    c = derived_coefficients(params)
    mu, x, y = params.mu, pos.x, pos.y
    k = params.semi_latus_factor
    r1, r2 = primary_distances(params, x, y)
    y2 = y * y
    ux = (
        -mu * (-1.0 + x + mu) * (1.0 / r2**3 + 1.5 / r2**5 * c.A_alpha - 7.5 * y2 / r2**7 * c.A_gamma)
        + x * k
        + (1.0 - mu)
        * (x + mu)
        * (
            1.0 / r1**3
            - 1.5 / r1**5 * c.A_beta
            + 1.5 * k * (c.A_alpha + c.A_beta)
            - 7.5 * y2 / r1**7 * c.A_sigma
        )
    )
    uy = -y * (
        mu / r2**3
        + (1.0 - mu) / r1**3
        + 1.5 * mu / r2**5 * c.A_alpha
        + 1.5 * (1.0 - mu) / r1**5 * c.A_beta
        - k * (1.0 + 1.5 * (c.A_alpha + c.A_beta))
        - 7.5 * y2 * (mu * c.A_gamma / r2**7 + (1.0 - mu) / r1**7 * c.A_sigma)
        - 3.0 * mu / r2**5 * c.A_gamma
        + 3.0 * (1.0 - mu) / r1**5 * c.A_sigma
    )
    return ux, uy


def coefficient_system(params: SystemParams) -> tuple[float, float, float, float, float, float]:
    """Literal (A1, A2, A3, B1, B2, B3) closed forms, evaluated verbatim."""
    c = derived_coefficients(params)
    mu, e, a = params.mu, params.e, params.a
    ag, asg, aa, ab = c.A_gamma, c.A_sigma, c.A_alpha, c.A_beta
    k = params.semi_latus_factor
    k_neg = 1.0 / (a * (-1.0 + e * e))
    bracket = 1.0 + 1.5 * (aa + ab)

    a1 = (
        -0.5
        + mu
        + 0.75 * (mu * aa - ab + mu * ab)
        + 0.75 * k * (aa + ab)
        + 1.5 * k * (1.0 - mu * (2.0 + 3.0 * aa + 3.0 * ab))
        + 45.0 / 16.0 * (-mu * (ag + asg) + asg)
    )
    a2 = (
        0.5
        - k * bracket
        + 1.5 * (1.0 - mu * aa + 1.5 * (1.0 - mu) * ab - 55.0 / 8.0 * (1.0 - mu) * asg + 1.25 * mu * ag)
    )
    a3 = (
        1.0
        + 1.5 * ab
        + k * bracket
        - 15.0 / 8.0 * asg
        - 1.5 * mu * (1.0 + 1.5 * aa + ab - 55.0 / 8.0 - 1.25 * asg)
    )
    b1 = -_SQRT3 / 2.0 * (
        1.0 - k * bracket - 1.5 * (ab - 1.75 * asg + mu * (aa - ab - 1.75 * ag + 1.75 * asg))
    )
    b2 = (
        7.0 / (2.0 * _SQRT3)
        + k / _SQRT3 * bracket
        + _SQRT3
        / 2.0
        * (6.5 * ab - 121.0 / 8.0 * asg - mu * (3.0 + aa + 6.5 * ab - 37.0 / 4.0 * ag - 121.0 / 8.0 * asg))
    )
    b3 = -1.0 / _SQRT3 * (1.0 + k_neg) + 1.5 * _SQRT3 * (
        37.0 / 4.0 * asg
        - ab / 3.0
        + mu * (1.0 + 6.5 * aa + ab - 121.0 / 8.0 * ag - 37.0 / 4.0 * asg)
        - (aa + ab) * k_neg
    )
    return a1, a2, a3, b1, b2, b3


def linearized_system(
    params: SystemParams, branch: Branch = Branch.L4
) -> tuple[float, float, float, float, float, float]:
    """First-order (A1, A2, A3, B1, B2, B3) from the exact gradient.

    A1, B1 are (Ux, Uy) at the classical triangle; the remaining entries are
    the Jacobian of the gradient with respect to (delta1, delta2) through
    x = 1/2 + delta1 - delta2 - mu, y = +-1/2 sqrt(3 + 4 (delta1 + delta2)).
    """
    pos0 = classical_position(params.mu, branch)
    a1, b1 = gradient(params, pos0)
    uxx, uxy, uyy = hessian(params, pos0)
    dy = branch.sign / _SQRT3
    return (
        a1,
        uxx + uxy * dy,
        -uxx + uxy * dy,
        b1,
        uxy + uyy * dy,
        -uxy + uyy * dy,
    )


def perturbative_offsets(
    params: SystemParams, branch: Branch = Branch.L4, source: str = "derived"
) -> PerturbativeOffsets:
    """Cramer solution of A1 + A2 d1 + A3 d2 = 0, B1 + B2 d1 + B3 d2 = 0.

    ``source`` selects the ``"derived"`` or the ``"literal"`` coefficients.
    The literal ones do not depend on the branch.
    """
    if source == "derived":
        a1, a2, a3, b1, b2, b3 = linearized_system(params, branch)
    elif source == "literal":
        a1, a2, a3, b1, b2, b3 = coefficient_system(params)
    else:
        raise ValueError(f"unknown coefficient source {source!r}")
    den = a3 * b2 - a2 * b3
    if abs(den) <= DEGENERATE_DENOMINATOR:
        raise DegenerateSystem(f"A3*B2 - A2*B3 = {den:.3e}")
    delta1 = -(a3 * b1 - a1 * b3) / den
    delta2 = -(-a2 * b1 + a1 * b2) / den
    return PerturbativeOffsets(delta1, delta2)


def _residual(params: SystemParams, x: float, y: float) -> float:
    return math.hypot(*gradient(params, (x, y)))


def perturbative_point(
    params: SystemParams, branch: Branch = Branch.L4, source: str = "derived"
) -> EquilibriumPoint:
    d = perturbative_offsets(params, branch, source)
    x = 0.5 * (2.0 * d.delta1 - 2.0 * d.delta2 - 2.0 * params.mu + 1.0)
    radicand = 3.0 + 4.0 * (d.delta1 + d.delta2)
    if radicand < 0.0:
        raise DegenerateSystem(f"offsets {d} give 3 + 4 (d1 + d2) < 0")
    y = branch.sign * 0.5 * math.sqrt(radicand)
    return EquilibriumPoint(branch, Position(x, y), _residual(params, x, y), Method.PERTURBATIVE)


def isosceles_guess(params: SystemParams, branch: Branch = Branch.L4) -> Position:
    """Point with r1 = r2 = n^(-2/3), the triangular point without triaxiality."""
    r = max(mean_motion(params) ** (-2.0 / 3.0), 0.5 + 1e-3)
    return Position(0.5 - params.mu, branch.sign * math.sqrt(r * r - 0.25))


def _starting_points(params: SystemParams, branch: Branch) -> list[Position]:
    guesses = []
    try:
        pert = perturbative_point(params, branch).pos
        if pert.y * branch.sign > 0:
            guesses.append(pert)
    except DegenerateSystem:
        pass
    guesses.append(isosceles_guess(params, branch))
    guesses.append(classical_position(params.mu, branch))
    return guesses


def locate_newton(
    params: SystemParams,
    branch: Branch = Branch.L4,
    tol: float = 1e-12,
    max_iter: int = 50,
    guess: Position | tuple[float, float] | None = None,
) -> EquilibriumPoint:
    """Damped Newton iteration on the gradient, Hessian as Jacobian.

    The step is halved (up to 20 times) while it would flip the sign of y
    or fail to decrease the gradient norm.  Without an explicit ``guess``
    the perturbative point is tried first, then the isosceles point
    r1 = r2 = n^(-2/3), then the classical triangle.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if guess is not None:
        if not isinstance(guess, Position):
            guess = Position(float(guess[0]), float(guess[1]))
        return _newton(params, branch, guess, tol, max_iter)
    failure = None
    for start in _starting_points(params, branch):
        try:
            return _newton(params, branch, start, tol, max_iter)
        except (NoConvergence, SingularJacobian) as exc:
            failure = failure or exc
    raise failure


def _polish(params, branch, x, y, gx, gy, res):
    """One undamped step past convergence, kept only if it lowers the residual."""
    uxx, uxy, uyy = hessian(params, (x, y))
    det = uxx * uyy - uxy * uxy
    if abs(det) < SINGULAR_DETERMINANT:
        return x, y, res
    xn = x - (uyy * gx - uxy * gy) / det
    yn = y - (-uxy * gx + uxx * gy) / det
    if yn * branch.sign <= 0:
        return x, y, res
    res_n = math.hypot(*gradient(params, (xn, yn)))
    return (xn, yn, res_n) if res_n < res else (x, y, res)


def _newton(
    params: SystemParams, branch: Branch, guess: Position, tol: float, max_iter: int
) -> EquilibriumPoint:
    x, y = guess.x, guess.y
    if y * branch.sign <= 0:
        raise ValueError(f"guess {guess} is not on branch {branch.value}")
    gx, gy = gradient(params, (x, y))
    res = math.hypot(gx, gy)
    for it in range(max_iter + 1):
        if res < tol:
            x, y, res = _polish(params, branch, x, y, gx, gy, res)
            return EquilibriumPoint(branch, Position(x, y), res, Method.NEWTON, it)
        if it == max_iter:
            break
        uxx, uxy, uyy = hessian(params, (x, y))
        det = uxx * uyy - uxy * uxy
        if abs(det) < SINGULAR_DETERMINANT:
            raise SingularJacobian(f"|det H| = {abs(det):.3e} at ({x}, {y})")
        dx = -(uyy * gx - uxy * gy) / det
        dy = -(-uxy * gx + uxx * gy) / det

        step = 1.0
        for _ in range(MAX_HALVINGS + 1):
            xn, yn = x + step * dx, y + step * dy
            if yn * branch.sign > 0:
                gxn, gyn = gradient(params, (xn, yn))
                res_n = math.hypot(gxn, gyn)
                if res_n < res:
                    break
            step *= 0.5
        else:
            raise NoConvergence(
                f"no decrease of |grad U| after {MAX_HALVINGS} halvings (residual {res:.3e})"
            )
        x, y, gx, gy, res = xn, yn, gxn, gyn, res_n

    raise NoConvergence(f"residual {res:.3e} > tol {tol:.1e} after {max_iter} iterations")
