"""Time integration of the Euler and Euler-Voigt vorticity equations.

Euler:        d_t omega + u . grad omega = 0
Euler-Voigt:  d_t omega - alpha Lap d_t omega + u . grad omega = 0

with u = biot_savart(omega).  Both are advanced as
d_t omega = (I - alpha Lap)^{-1} (-u . grad omega), alpha = 0 giving Euler.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import GridSpec, tables
from .spectral import (
    SpectralField,
    VelocityPair,
    _from_values,
    _to_values,
    biot_savart,
    dealias,
    helmholtz_filter,
    zero_mean,
)
from .diagnostics import DiagnosticSample, sample_state

#: floor for the velocity scale in the CFL rule (guards the zero field)
CFL_VELOCITY_FLOOR = 1e-12


class BlowUpError(RuntimeError):
    """The state became non-finite during integration."""

    def __init__(self, time: float) -> None:
        super().__init__(f"non-finite state at t = {time:.6g}")
        self.time = time


@dataclass(frozen=True)
class SolverConfig:
    """Parameters of one integration.

    Exactly one of ``dt`` (fixed step) and ``c_cfl`` (advective CFL
    constant, step recomputed from the current velocity) is used; if
    neither is given the CFL rule with c_cfl = 0.5 applies.  Steps are
    shortened to land exactly on diagnostic/snapshot times and on t_end.
    """

    grid: GridSpec
    alpha: float
    t_end: float
    record_every: float
    dt: float | None = None
    c_cfl: float | None = None
    snapshot_every: float | None = None

    def __post_init__(self) -> None:
        if self.alpha < 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if not self.t_end > 0:
            raise ValueError(f"t_end must be positive, got {self.t_end}")
        if not self.record_every > 0:
            raise ValueError(f"record_every must be positive, got {self.record_every}")
        if self.dt is not None and self.c_cfl is not None:
            raise ValueError("give either dt or c_cfl, not both")
        if self.dt is None and self.c_cfl is None:
            object.__setattr__(self, "c_cfl", 0.5)
        if self.dt is not None and not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.c_cfl is not None and not self.c_cfl > 0:
            raise ValueError(f"c_cfl must be positive, got {self.c_cfl}")
        if self.snapshot_every is not None and not self.snapshot_every > 0:
            raise ValueError(
                f"snapshot_every must be positive, got {self.snapshot_every}"
            )


@dataclass
class TrajectoryRecord:
    """Diagnostics (and optionally spectral snapshots) of one run."""

    grid: GridSpec
    alpha: float
    times: np.ndarray
    diagnostics: dict[str, np.ndarray]
    snapshots: list[tuple[float, SpectralField]] | None = None
    config: SolverConfig | None = None

    def sample(self, index: int) -> DiagnosticSample:
        d = self.diagnostics
        return DiagnosticSample(
            time=float(self.times[index]),
            energy=float(d["energy"][index]),
            enstrophy=float(d["enstrophy"][index]),
            voigt_energy=float(d["voigt_energy"][index]),
            voigt_enstrophy=float(d["voigt_enstrophy"][index]),
            extra={"omega_sup": float(d["omega_sup"][index])},
        )


# ---------------------------------------------------------------------------
# right-hand sides


def euler_rhs(omega: SpectralField) -> SpectralField:
    """-u . grad omega, dealiased, zero-mean; u = biot_savart(omega)."""
    grid = omega.grid
    u = biot_savart(omega)
    u1 = _to_values(u.u1.coeffs, grid)
    u2 = _to_values(u.u2.coeffs, grid)
    t = tables(grid)
    w1 = _to_values((1j * t.d1) * omega.coeffs, grid)
    w2 = _to_values((1j * t.d2) * omega.coeffs, grid)
    adv = _from_values(-(u1 * w1 + u2 * w2), grid)
    return zero_mean(dealias(adv))


def voigt_rhs(omega: SpectralField, alpha: float) -> SpectralField:
    """Euler nonlinearity pushed through the inverse Helmholtz operator."""
    return helmholtz_filter(euler_rhs(omega), alpha)


def rhs(omega: SpectralField, alpha: float) -> SpectralField:
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    if alpha == 0:
        return euler_rhs(omega)
    return voigt_rhs(omega, alpha)


# ---------------------------------------------------------------------------
# stepping


def step_rk4(omega: SpectralField, dt: float, alpha: float) -> SpectralField:
    """One classical RK4 step of d_t omega = rhs(omega, alpha)."""
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    k1 = rhs(omega, alpha)
    k2 = rhs(omega + (0.5 * dt) * k1, alpha)
    k3 = rhs(omega + (0.5 * dt) * k2, alpha)
    k4 = rhs(omega + dt * k3, alpha)
    out = omega + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return zero_mean(out)


def cfl_dt(u: VelocityPair, grid: GridSpec, c_cfl: float) -> float:
    """Advective step c_cfl * (2pi/M) / max(component sup norms, floor)."""
    if not c_cfl > 0:
        raise ValueError(f"c_cfl must be positive, got {c_cfl}")
    m1 = float(np.max(np.abs(_to_values(u.u1.coeffs, grid))))
    m2 = float(np.max(np.abs(_to_values(u.u2.coeffs, grid))))
    umax = max(m1, m2, CFL_VELOCITY_FLOOR)
    return c_cfl * grid.spacing / umax


def _event_times(t_end: float, every: float) -> list[float]:
    """Multiples of ``every`` in (0, t_end), then t_end itself."""
    out = []
    k = 1
    while True:
        t = k * every
        if t >= t_end * (1.0 - 1e-12):
            break
        out.append(t)
        k += 1
    out.append(t_end)
    return out


def integrate(omega0: SpectralField, config: SolverConfig) -> TrajectoryRecord:
    """Advance omega0 to t_end recording diagnostics every record_every.

    The initial state is dealiased and mean-zeroed before stepping.
    Raises :class:`BlowUpError` with the failure time if the state
    stops being finite.
    """
    if omega0.grid != config.grid:
        raise ValueError("initial data grid does not match config grid")
    omega = zero_mean(dealias(omega0))

    rec_times = _event_times(config.t_end, config.record_every)
    snap_times = (
        _event_times(config.t_end, config.snapshot_every)
        if config.snapshot_every is not None
        else []
    )
    events = sorted(set(rec_times) | set(snap_times))
    rec_set = set(rec_times)
    snap_set = set(snap_times)

    times = [0.0]
    samples = [sample_state(omega, config.alpha, 0.0)]
    snapshots: list[tuple[float, SpectralField]] | None = None
    if config.snapshot_every is not None:
        snapshots = [(0.0, omega)]

    t = 0.0
    for te in events:
        while t < te:
            if config.dt is not None:
                step = config.dt
            else:
                step = cfl_dt(biot_savart(omega), config.grid, config.c_cfl)
            remaining = te - t
            if step >= remaining:
                step = remaining
                t_new = te
            else:
                t_new = t + step
            # overflow on the way to a blow-up is reported, not warned about
            with np.errstate(over="ignore", invalid="ignore"):
                omega = step_rk4(omega, step, config.alpha)
            if not np.all(np.isfinite(omega.coeffs)):
                raise BlowUpError(t_new)
            t = t_new
        if te in rec_set:
            s = sample_state(omega, config.alpha, te)
            if not all(
                np.isfinite(v)
                for v in (s.energy, s.enstrophy, s.voigt_energy, s.voigt_enstrophy)
            ):
                raise BlowUpError(te)
            times.append(te)
            samples.append(s)
        if te in snap_set:
            snapshots.append((te, omega))

    diag: dict[str, np.ndarray] = {
        "energy": np.array([s.energy for s in samples]),
        "enstrophy": np.array([s.enstrophy for s in samples]),
        "voigt_energy": np.array([s.voigt_energy for s in samples]),
        "voigt_enstrophy": np.array([s.voigt_enstrophy for s in samples]),
        "omega_sup": np.array([s.extra["omega_sup"] for s in samples]),
    }
    return TrajectoryRecord(
        grid=config.grid,
        alpha=config.alpha,
        times=np.array(times),
        diagnostics=diag,
        snapshots=snapshots,
        config=config,
    )
