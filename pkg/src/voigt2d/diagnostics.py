"""Norms, conserved quantities, and inequality diagnostics."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from .grid import TWO_PI, tables
from .spectral import (
    SpectralField,
    VelocityPair,
    biot_savart,
    derivative,
    inverse_transform,
    values_oversampled,
)

if TYPE_CHECKING:  # pragma: no cover
    from .dynamics import TrajectoryRecord


@dataclass(frozen=True)
class DiagnosticSample:
    """Scalar diagnostics of one state.

    energy and enstrophy are the squared L2 norms of velocity and
    vorticity; the voigt_* variants carry the extra alpha|k|^2 weight and
    reduce to them at alpha = 0.
    """

    time: float
    energy: float
    enstrophy: float
    voigt_energy: float
    voigt_enstrophy: float
    extra: dict[str, float] = field(default_factory=dict)


# ---------------------------------------------------------------------------
# norms


def l2_norm(f: SpectralField) -> float:
    """sqrt((2pi)^2 sum_k |f_hat|^2) = L2 norm of the field."""
    return float(np.sqrt(TWO_PI**2 * np.sum(np.abs(f.coeffs) ** 2)))


def sobolev_norm(f: SpectralField, s: float) -> float:
    """H^s norm with weight (1 + |k|^2)^s.

    s = 0 reproduces l2_norm bit-for-bit (the weight array is exactly 1.0
    and the summation order is identical).
    """
    if not np.isfinite(s):
        raise ValueError(f"sobolev order must be finite, got {s}")
    w = (1.0 + tables(f.grid).ksq) ** s
    return float(np.sqrt(TWO_PI**2 * np.sum(w * np.abs(f.coeffs) ** 2)))


def gradient_l2(f: SpectralField) -> float:
    """L2 norm of the gradient: sqrt((2pi)^2 sum |k|^2 |f_hat|^2)."""
    return float(np.sqrt(TWO_PI**2 * np.sum(tables(f.grid).ksq * np.abs(f.coeffs) ** 2)))


def lp_norm(f: SpectralField, p: float) -> float:
    """L^p norm by grid quadrature with weight (2pi/M)^2.

    p = inf returns the max absolute collocation value.  For p not in
    {2, inf} the interpolant is evaluated on a 2x oversampled grid first,
    which keeps quadrature error of smooth fields at roundoff level.
    """
    if p != np.inf and p < 1:
        raise ValueError(f"p must be >= 1 or inf, got {p}")
    if p == np.inf:
        return float(np.max(np.abs(inverse_transform(f))))
    if p == 2:
        v = inverse_transform(f)
        h2 = (TWO_PI / f.grid.size) ** 2
        return float(np.sqrt(np.sum(v * v) * h2))
    v = values_oversampled(f, 2)
    h2 = (TWO_PI / (2 * f.grid.size)) ** 2
    a = np.abs(v)
    vmax = float(np.max(a))
    if vmax == 0.0:
        return 0.0
    # factor out the max so p up to ~64 neither overflows nor underflows
    return float(vmax * np.sum((a / vmax) ** p * h2) ** (1.0 / p))


def velocity_l2(v: VelocityPair) -> float:
    return float(np.sqrt(l2_norm(v.u1) ** 2 + l2_norm(v.u2) ** 2))


def velocity_sobolev(v: VelocityPair, s: float) -> float:
    return float(np.sqrt(sobolev_norm(v.u1, s) ** 2 + sobolev_norm(v.u2, s) ** 2))


# ---------------------------------------------------------------------------
# conserved quantities


def voigt_energy(v: VelocityPair, alpha: float) -> float:
    """sum over components of (2pi)^2 sum_k (1 + alpha|k|^2) |u_hat|^2.

    Conserved by the Voigt evolution; alpha = 0 gives the kinetic energy
    conserved by Euler.
    """
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    w = 1.0 + alpha * tables(v.grid).ksq
    total = np.sum(w * np.abs(v.u1.coeffs) ** 2) + np.sum(w * np.abs(v.u2.coeffs) ** 2)
    return float(TWO_PI**2 * total)


def voigt_enstrophy(omega: SpectralField, alpha: float) -> float:
    """(2pi)^2 sum_k (1 + alpha|k|^2) |omega_hat|^2; enstrophy at alpha = 0."""
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    w = 1.0 + alpha * tables(omega.grid).ksq
    return float(TWO_PI**2 * np.sum(w * np.abs(omega.coeffs) ** 2))


def sample_state(omega: SpectralField, alpha: float, time: float) -> DiagnosticSample:
    """Standard diagnostics of a vorticity state."""
    u = biot_savart(omega)
    return DiagnosticSample(
        time=time,
        energy=voigt_energy(u, 0.0),
        enstrophy=voigt_enstrophy(omega, 0.0),
        voigt_energy=voigt_energy(u, alpha),
        voigt_enstrophy=voigt_enstrophy(omega, alpha),
        extra={"omega_sup": lp_norm(omega, np.inf)},
    )


# ---------------------------------------------------------------------------
# inequality diagnostics


def cz_ratio(omega: SpectralField, p: float) -> float:
    """||grad u||_p / (p ||omega||_inf) for u = biot_savart(omega), p > 2.

    The Calderon-Zygmund constant of the torus makes this ratio bounded
    uniformly in p; it is scale-invariant in omega.  |grad u| is the
    pointwise Frobenius magnitude of the 2x2 gradient tensor.
    """
    if not p > 2:
        raise ValueError(f"cz_ratio requires p > 2, got {p}")
    sup = lp_norm(omega, np.inf)
    if sup == 0.0:
        raise ValueError("cz_ratio is undefined for the zero field")
    u = biot_savart(omega)
    comps = [
        values_oversampled(derivative(u.u1, 1), 2),
        values_oversampled(derivative(u.u1, 2), 2),
        values_oversampled(derivative(u.u2, 1), 2),
        values_oversampled(derivative(u.u2, 2), 2),
    ]
    mag = np.sqrt(sum(c * c for c in comps))
    h2 = (TWO_PI / (2 * omega.grid.size)) ** 2
    vmax = float(np.max(mag))
    if vmax == 0.0:
        return 0.0
    grad_p = vmax * float(np.sum((mag / vmax) ** p * h2)) ** (1.0 / p)
    return grad_p / (p * sup)


def gagliardo_ratio(f: SpectralField, p: float) -> float:
    """||f||_{2p/(p-1)} / (||f||_2^{1-1/p} ||grad f||_2^{1/p}), p >= 2.

    Bounded uniformly in p by the torus Gagliardo-Nirenberg constant and
    scale-invariant in f.
    """
    if not p >= 2:
        raise ValueError(f"gagliardo_ratio requires p >= 2, got {p}")
    n2 = l2_norm(f)
    ng = gradient_l2(f)
    if n2 == 0.0 or ng == 0.0:
        raise ValueError("gagliardo_ratio is undefined for constant fields")
    q = 2.0 * p / (p - 1.0)
    return lp_norm(f, q) / (n2 ** (1.0 - 1.0 / p) * ng ** (1.0 / p))


# ---------------------------------------------------------------------------
# trajectory comparison


def error_norms(a: "TrajectoryRecord", b: "TrajectoryRecord") -> dict[str, float]:
    """Sup-in-time discrepancy norms between two trajectories.

    Both records must carry snapshots on identical time grids and grids.
    Velocities are reconstructed from vorticity via Biot-Savart.  Returns
    sup_u_l2, sup_omega_l2, sup_u_h1.
    """
    if a.snapshots is None or b.snapshots is None:
        raise ValueError("error_norms requires records with snapshots")
    if a.grid != b.grid:
        raise ValueError(f"grid mismatch: {a.grid} vs {b.grid}")
    ta = [t for t, _ in a.snapshots]
    tb = [t for t, _ in b.snapshots]
    if len(ta) != len(tb) or not np.allclose(ta, tb, rtol=0.0, atol=1e-12):
        raise ValueError("snapshot time grids differ")
    sup_u = 0.0
    sup_w = 0.0
    sup_h1 = 0.0
    for (_, wa), (_, wb) in zip(a.snapshots, b.snapshots):
        d = wa - wb
        sup_w = max(sup_w, l2_norm(d))
        du = biot_savart(d)
        sup_u = max(sup_u, velocity_l2(du))
        sup_h1 = max(sup_h1, velocity_sobolev(du, 1.0))
    return {"sup_u_l2": sup_u, "sup_omega_l2": sup_w, "sup_u_h1": sup_h1}


def growth_monitor(record: "TrajectoryRecord", s: float) -> list[tuple[float, float]]:
    """Time series of ||u(t)||_{s,2} reconstructed from snapshots."""
    if record.snapshots is None:
        raise ValueError("growth_monitor requires a record with snapshots")
    out = []
    for t, w in record.snapshots:
        out.append((t, velocity_sobolev(biot_savart(w), s)))
    return out
