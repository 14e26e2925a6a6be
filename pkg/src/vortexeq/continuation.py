"""Continuation of ring critical points into relative equilibria at eps != 0.

A relative equilibrium of the full (1+N)-vortex problem rotating at rate
omega satisfies v_j = omega * q_j^perp for every vortex, where v_j is the
point-vortex velocity field.  The strong vortex is eliminated through the
center of vorticity, q_0 = -eps * (q_1 + ... + q_N), which makes its own
equation automatic.  With omega = 1 fixed, each nondegenerate critical point
of the ring potential continues to a locally unique branch (r(eps),
theta(eps)) once the rotational phase is pinned to the seed angles.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CollisionApproach,
    DegenerateSeed,
    InsufficientFamily,
    InvalidEpsilon,
    NoConvergence,
    VortexCollision,
)
from .search import CriticalPoint, _cyclic_gaps

TWO_PI = 2.0 * np.pi

_COLLISION_GUARD = 1e-10  # on squared distances: d^2 < guard^2

# Imaginary step for complex-step differentiation; first-order exact because
# the field below uses only analytic operations.
_CS_STEP = 1e-100


@dataclass
class Circulations:
    """Circulations (1, eps, ..., eps) of the strong vortex and N weak ones."""

    epsilon: float

    def gammas(self, n_weak: int) -> np.ndarray:
        return np.concatenate(([1.0], np.full(n_weak, self.epsilon)))


@dataclass
class RelativeEquilibrium:
    """A rotating-frame fixed point of the (1+N)-vortex problem."""

    r: np.ndarray
    theta: np.ndarray
    epsilon: float
    omega: float
    residual: float
    source: CriticalPoint | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.r.size

    def weak_positions(self) -> np.ndarray:
        return np.column_stack(
            (self.r * np.cos(self.theta), self.r * np.sin(self.theta))
        )

    def strong_position(self) -> np.ndarray:
        return -self.epsilon * self.weak_positions().sum(axis=0)

    def all_positions(self) -> np.ndarray:
        """Positions with the strong vortex first."""
        weak = self.weak_positions()
        return np.vstack((self.strong_position(), weak))


@dataclass
class ScalingReport:
    """Near-circle scaling ratios |q0|/|eps| and max| |q_j|^2 - 1 |/|eps|."""

    epsilons: np.ndarray
    q0_ratios: np.ndarray
    radius_ratios: np.ndarray
    q0_bounded: bool
    radius_bounded: bool


def _polar_mismatch(r, theta, epsilon: float, omega: float):
    """Radial and tangential velocity mismatch (v - omega q^perp) per vortex.

    Returns (a, b) with a_j the radial component and b_j the tangential one.
    Accepts complex-valued r/theta so callers can differentiate by complex
    step; the collision guard then reads only the real parts.
    """
    r = np.asarray(r)
    theta = np.asarray(theta)
    ct, st = np.cos(theta), np.sin(theta)
    x, y = r * ct, r * st
    x0, y0 = -epsilon * x.sum(), -epsilon * y.sum()

    dx = x[:, None] - x[None, :]
    dy = y[:, None] - y[None, :]
    d2 = dx * dx + dy * dy
    np.fill_diagonal(d2, 1.0)
    dx0, dy0 = x - x0, y - y0
    d20 = dx0 * dx0 + dy0 * dy0

    sep2 = np.real(d2).copy()
    np.fill_diagonal(sep2, np.inf)
    if min(sep2.min(), np.real(d20).min()) < _COLLISION_GUARD**2:
        raise VortexCollision("two vortices are closer than the collision guard")

    w = 1.0 / d2
    np.fill_diagonal(w, 0.0)
    vx = -dy0 / d20 + epsilon * np.sum(-dy * w, axis=1)
    vy = dx0 / d20 + epsilon * np.sum(dx * w, axis=1)

    a = ct * vx + st * vy
    b = -st * vx + ct * vy - omega * r
    return a, b


def rotating_frame_residual(r, theta, epsilon: float, omega: float = 1.0) -> np.ndarray:
    """Cartesian residual v_j - omega q_j^perp for the N weak vortices.

    The strong vortex sits at q_0 = -eps * sum(q_j).  Returns 2N values,
    x-components then y-components; all vanish exactly at a relative
    equilibrium with rotation rate omega.
    """
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if r.shape != theta.shape or r.ndim != 1:
        raise ValueError("r and theta must be 1-d arrays of equal length")
    a, b = _polar_mismatch(r, theta, epsilon, omega)
    ct, st = np.cos(theta), np.sin(theta)
    return np.concatenate((a * ct - b * st, a * st + b * ct))


def _augmented_system(x: np.ndarray, phi: np.ndarray, epsilon: float, omega: float):
    n = phi.size
    a, b = _polar_mismatch(x[:n], x[n:], epsilon, omega)
    ct, st = np.cos(x[n:]), np.sin(x[n:])
    res = np.concatenate((a * ct - b * st, a * st + b * ct))
    phase = np.sum(x[n:] - phi)
    return np.concatenate((res, [phase]))


def _cs_jacobian(func, x: np.ndarray) -> np.ndarray:
    m = func(x).size
    jac = np.empty((m, x.size))
    for k in range(x.size):
        xk = x.astype(complex)
        xk[k] += 1j * _CS_STEP
        jac[:, k] = np.imag(func(xk)) / _CS_STEP
    return jac


def _is_ngon(config: np.ndarray, tol: float = 1e-8) -> bool:
    gaps = _cyclic_gaps(config)
    return bool(np.abs(gaps - TWO_PI / config.size).max() < tol)


def epsilon_ceiling(cp: CriticalPoint, base: float = 0.05) -> float:
    """Continuation ceiling on |eps|; tighter, min(base, 1/N^2), for ring seeds."""
    if _is_ngon(cp.config):
        return min(base, 1.0 / cp.config.size**2)
    return base


def continue_equilibrium(
    cp: CriticalPoint,
    epsilon: float,
    releq_tol: float = 1e-12,
    max_iter: int = 60,
    eps_ceiling: float = 0.05,
    _warm_start: np.ndarray | None = None,
) -> RelativeEquilibrium:
    """Newton-continue a nondegenerate critical point to eps != 0, omega = 1.

    Solves the 2N rotating-frame residual equations jointly in (r, theta)
    with the phase constraint sum(theta_j - phi_j) = 0 against the seed
    angles phi.  Convergence means residual sup-norm below ``releq_tol``.

    Raises DegenerateSeed unless the seed has exactly one zero Hessian
    eigenvalue, InvalidEpsilon for eps = 0 or |eps| above the ceiling, and
    NoConvergence / CollisionApproach on Newton failure.
    """
    if epsilon == 0.0 or not np.isfinite(epsilon):
        raise InvalidEpsilon("continuation needs a finite nonzero eps")
    if cp.morse_index[1] != 1:
        raise DegenerateSeed(
            f"seed has {cp.morse_index[1]} zero eigenvalues; need exactly 1"
        )
    ceiling = epsilon_ceiling(cp, eps_ceiling)
    if abs(epsilon) > ceiling:
        raise InvalidEpsilon(f"|eps| = {abs(epsilon):g} exceeds ceiling {ceiling:g}")

    phi = cp.config
    n = phi.size
    x = (
        np.concatenate((np.ones(n), phi))
        if _warm_start is None
        else _warm_start.copy()
    )
    func = lambda z: _augmented_system(z, phi, epsilon, 1.0)

    try:
        fx = func(x)
        best = float(np.abs(fx).max())
        for _ in range(max_iter):
            if best < releq_tol:
                break
            jac = _cs_jacobian(func, x)
            step = np.linalg.lstsq(jac, -fx, rcond=None)[0]
            alpha = 1.0
            for _ in range(20):
                trial = x + alpha * step
                try:
                    ft = func(trial)
                except VortexCollision:
                    alpha *= 0.5
                    continue
                norm = float(np.abs(ft).max())
                if norm < best:
                    x, fx, best = trial, ft, norm
                    break
                alpha *= 0.5
            else:
                raise NoConvergence("continuation line search stalled")
        else:
            raise NoConvergence(
                f"continuation did not reach {releq_tol:g} in {max_iter} iterations"
            )
    except VortexCollision as exc:
        raise CollisionApproach(str(exc)) from exc

    r, theta = x[:n], x[n:]
    residual = float(np.abs(rotating_frame_residual(r, theta, epsilon, 1.0)).max())
    return RelativeEquilibrium(
        r=r,
        theta=theta,
        epsilon=float(epsilon),
        omega=1.0,
        residual=residual,
        source=cp,
    )


def sweep_epsilon(
    cp: CriticalPoint, eps_list, **kwargs
) -> list[RelativeEquilibrium]:
    """Continue one seed across several eps values, warm-starting in order.

    Returns one equilibrium per entry.  On the first failure a NoConvergence
    is raised whose ``partial`` attribute carries the equilibria found so
    far.  An eps of exactly zero anywhere in the list is rejected up front.
    """
    eps_values = [float(e) for e in eps_list]
    if any(e == 0.0 for e in eps_values):
        raise InvalidEpsilon("sweep list must not contain eps = 0")
    results: list[RelativeEquilibrium] = []
    warm = None
    for eps in eps_values:
        try:
            eq = continue_equilibrium(cp, eps, _warm_start=warm, **kwargs)
        except (NoConvergence, CollisionApproach) as exc:
            raise NoConvergence(
                f"sweep failed at eps = {eps:g}: {exc}", partial=results
            ) from exc
        results.append(eq)
        warm = np.concatenate((eq.r, eq.theta))
    return results


def verify_lemma1_scaling(family: list[RelativeEquilibrium]) -> ScalingReport:
    """Check the near-circle scaling of a continued family.

    For equilibria of one sign of eps, both |q_0| and max| |q_j|^2 - 1 | are
    O(eps), so the ratios against |eps| should stay bounded across the
    family: max/min < 10, or identically zero for symmetric families whose
    center of vorticity vanishes exactly.  Needs at least three distinct
    |eps| magnitudes (InsufficientFamily otherwise).
    """
    if len(family) < 3:
        raise InsufficientFamily("need at least 3 family members")
    eps = np.array([eq.epsilon for eq in family])
    if not (np.all(eps > 0.0) or np.all(eps < 0.0)):
        raise InsufficientFamily("family members must share the sign of eps")
    if np.unique(np.abs(eps)).size < 3:
        raise InsufficientFamily("need at least 3 distinct |eps| magnitudes")
    q0 = np.array([np.linalg.norm(eq.strong_position()) for eq in family])
    rad = np.array([np.abs(eq.r**2 - 1.0).max() for eq in family])
    q0_ratios = q0 / np.abs(eps)
    radius_ratios = rad / np.abs(eps)

    def bounded(ratios: np.ndarray) -> bool:
        hi = float(ratios.max())
        lo = float(ratios.min())
        return hi < 1e-8 or (lo > 0.0 and hi / lo < 10.0)

    return ScalingReport(
        epsilons=eps,
        q0_ratios=q0_ratios,
        radius_ratios=radius_ratios,
        q0_bounded=bounded(q0_ratios),
        radius_bounded=bounded(radius_ratios),
    )
