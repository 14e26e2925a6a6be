"""Direct integration of the planar point-vortex equations.

The full system moves every vortex with the field induced by the others,

    dq_j/dt = sum_{i != j} Gamma_i (q_j - q_i)^perp / |q_j - q_i|^2,

with (x, y)^perp = (-x_2, x_1) applied componentwise.  Integration uses
fixed-step classical RK4 and serves as an end-to-end check on continued
equilibria: an exact relative equilibrium rotates rigidly, conserves the
interaction Hamiltonian, the center of vorticity, and the vorticity moment,
and its perturbations grow at the linearized rate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .continuation import Circulations, RelativeEquilibrium
from .errors import CollisionAbort, VortexCollision

_COLLISION_GUARD = 1e-10
_ABORT_SEP = 10.0 * _COLLISION_GUARD

TWO_PI = 2.0 * np.pi


@dataclass
class PlanarConfiguration:
    """Positions (strong vortex first) plus the circulation pattern."""

    positions: np.ndarray
    circulations: Circulations

    def __post_init__(self):
        self.positions = np.asarray(self.positions, dtype=float)
        if self.positions.ndim != 2 or self.positions.shape[1] != 2:
            raise ValueError("positions must be an (N+1, 2) array")
        if _min_separation(self.positions) < _COLLISION_GUARD:
            raise VortexCollision("two vortices coincide in the initial data")

    @classmethod
    def from_equilibrium(cls, eq: RelativeEquilibrium) -> "PlanarConfiguration":
        return cls(eq.all_positions(), Circulations(eq.epsilon))

    @property
    def n_weak(self) -> int:
        return self.positions.shape[0] - 1

    @property
    def gammas(self) -> np.ndarray:
        return self.circulations.gammas(self.n_weak)

    @property
    def center_of_vorticity(self) -> np.ndarray:
        return self.gammas @ self.positions


@dataclass
class Trajectory:
    times: np.ndarray
    positions: np.ndarray  # (steps+1, N+1, 2)
    h: float
    integrator: str
    epsilon: float
    metadata: dict = field(default_factory=dict)


def _min_separation(pos: np.ndarray) -> float:
    iu = np.triu_indices(pos.shape[0], 1)
    d = pos[iu[0]] - pos[iu[1]]
    return float(np.sqrt((d * d).sum(axis=1).min()))


def _field_raw(pos: np.ndarray, gammas: np.ndarray) -> np.ndarray:
    dx = pos[:, 0][:, None] - pos[:, 0][None, :]
    dy = pos[:, 1][:, None] - pos[:, 1][None, :]
    d2 = dx * dx + dy * dy
    np.fill_diagonal(d2, 1.0)
    w = gammas[None, :] / d2
    np.fill_diagonal(w, 0.0)
    return np.column_stack(((-dy * w).sum(axis=1), (dx * w).sum(axis=1)))


def vortex_field(config: PlanarConfiguration) -> np.ndarray:
    """Velocities of all vortices; VortexCollision below the guard distance."""
    if _min_separation(config.positions) < _COLLISION_GUARD:
        raise VortexCollision("two vortices are closer than the collision guard")
    return _field_raw(config.positions, config.gammas)


def hamiltonian(config: PlanarConfiguration) -> float:
    """Interaction energy -sum_{i<j} Gamma_i Gamma_j log |q_i - q_j|."""
    pos = config.positions
    g = config.gammas
    iu = np.triu_indices(pos.shape[0], 1)
    d = pos[iu[0]] - pos[iu[1]]
    dist = np.sqrt((d * d).sum(axis=1))
    if dist.min() < _COLLISION_GUARD:
        raise VortexCollision("two vortices are closer than the collision guard")
    return float(-np.sum(g[iu[0]] * g[iu[1]] * np.log(dist)))


def vorticity_moment(config: PlanarConfiguration) -> float:
    """Conserved moment sum_i Gamma_i |q_i|^2."""
    return float(config.gammas @ (config.positions**2).sum(axis=1))


def integrate_rk4(config: PlanarConfiguration, h: float, t_final: float) -> Trajectory:
    """Fixed-step classical RK4 up to t_final, sampling every step.

    Aborts with CollisionAbort (carrying the partial trajectory) when any
    pair comes within ten times the collision guard.
    """
    if h <= 0.0 or t_final <= 0.0:
        raise ValueError("need h > 0 and t_final > 0")
    steps = max(1, int(round(t_final / h)))
    gammas = config.gammas
    out = np.empty((steps + 1, config.positions.shape[0], 2))
    out[0] = config.positions
    times = h * np.arange(steps + 1)
    pos = config.positions.copy()
    if _min_separation(pos) < _ABORT_SEP:
        partial = Trajectory(
            times=times[:1],
            positions=out[:1].copy(),
            h=h,
            integrator="rk4",
            epsilon=config.circulations.epsilon,
            metadata={"aborted_at": 0.0},
        )
        raise CollisionAbort(
            f"vortices within {_ABORT_SEP:g} at t = 0",
            trajectory=partial,
        )
    for i in range(steps):
        k1 = _field_raw(pos, gammas)
        k2 = _field_raw(pos + 0.5 * h * k1, gammas)
        k3 = _field_raw(pos + 0.5 * h * k2, gammas)
        k4 = _field_raw(pos + h * k3, gammas)
        pos = pos + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[i + 1] = pos
        if _min_separation(pos) < _ABORT_SEP:
            partial = Trajectory(
                times=times[: i + 2],
                positions=out[: i + 2].copy(),
                h=h,
                integrator="rk4",
                epsilon=config.circulations.epsilon,
                metadata={"aborted_at": float(times[i + 1])},
            )
            raise CollisionAbort(
                f"vortices within {_ABORT_SEP:g} at t = {times[i + 1]:g}",
                trajectory=partial,
            )
    return Trajectory(
        times=times,
        positions=out,
        h=h,
        integrator="rk4",
        epsilon=config.circulations.epsilon,
    )


def rigidity_error(traj: Trajectory) -> float:
    """Max deviation of any pairwise distance from its initial value."""
    m = traj.positions.shape[1]
    iu = np.triu_indices(m, 1)
    d = traj.positions[:, iu[0], :] - traj.positions[:, iu[1], :]
    dist = np.sqrt((d * d).sum(axis=2))
    return float(np.abs(dist - dist[0]).max())


@dataclass
class GrowthReport:
    fitted_rate: float
    predicted_rate: float
    amplitude: float
    window_points: int
    max_deviation: float
    trajectory: Trajectory | None = None


def _rotation(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


def perturbation_growth(
    eq: RelativeEquilibrium,
    amplitude: float = 1e-6,
    t_final: float = TWO_PI,
    h: float | None = None,
    seed: int = 0,
) -> GrowthReport:
    """Growth rate of a random perturbation against the rotating solution.

    Integrates the perturbed configuration, measures the Frobenius deviation
    from the exactly rotating equilibrium, and fits d/dt log(deviation) by
    least squares over the window where the deviation lies between
    10 * amplitude and 1e-2 (whole trajectory when the window is too short,
    as for stable equilibria).  The linear prediction is the largest real
    part in the linearization spectrum.

    The random perturbation displaces only the weak vortices and is chosen
    orthogonal, in polar coordinates, to the rigid rotation direction and to
    the uniform radius change.  Those two directions span the symmetry zero
    modes of the linearization; exciting them only adds a secular phase drift
    (larger rings rotate at a different rate) that masks the exponential
    rates the fit is after.
    """
    from .stability import stability_verdict

    if h is None:
        h = t_final / 4096.0
    base = eq.all_positions()
    pos0 = base.copy()
    if amplitude != 0.0:
        rng = np.random.default_rng(seed)
        n = eq.r.size
        delta = rng.standard_normal(2 * n)
        for direction in (
            np.concatenate([np.zeros(n), np.ones(n)]),
            np.concatenate([eq.r, np.zeros(n)]),
        ):
            unit = direction / np.linalg.norm(direction)
            delta -= (delta @ unit) * unit
        dr, dth = delta[:n], delta[n:]
        ct, st = np.cos(eq.theta), np.sin(eq.theta)
        disp = np.column_stack(
            [dr * ct - eq.r * dth * st, dr * st + eq.r * dth * ct]
        )
        pos0[1:] = base[1:] + amplitude * disp / np.linalg.norm(disp)
    traj = integrate_rk4(
        PlanarConfiguration(pos0, Circulations(eq.epsilon)), h, t_final
    )
    dev = np.empty(traj.times.size)
    for i, t in enumerate(traj.times):
        exact = base @ _rotation(eq.omega * t).T
        dev[i] = np.linalg.norm(traj.positions[i] - exact)
    floor = max(10.0 * amplitude, 1e-300)
    mask = (dev >= floor) & (dev <= 1e-2)
    if mask.sum() < 8:
        mask = dev > 0.0
    rate = 0.0
    if mask.sum() >= 2:
        rate = float(np.polyfit(traj.times[mask], np.log(dev[mask]), 1)[0])
    predicted = stability_verdict(eq).max_real_part
    return GrowthReport(
        fitted_rate=rate,
        predicted_rate=predicted,
        amplitude=amplitude,
        window_points=int(mask.sum()),
        max_deviation=float(dev.max()),
        trajectory=traj,
    )
