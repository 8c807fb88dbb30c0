"""Deterministic initial vorticity generators.

Every generator is fully determined by its arguments and seed, and (for
band-limited recipes) produces the same Fourier coefficients on any grid
large enough to hold the band, so refined-grid reference runs start from
the identical field.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .grid import TWO_PI, GridSpec, tables
from .spectral import (
    SpectralField,
    dealias,
    forward_transform,
    values_oversampled,
    zero_mean,
)
from .diagnostics import l2_norm

KINDS = ("eigenfunction", "random_sobolev", "yudovich_patch", "taylor_family")


@dataclass(frozen=True)
class DataRecipe:
    """Named recipe: kind, kind-specific real parameters, seed."""

    kind: str
    params: Mapping[str, float] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown initial data kind {self.kind!r}")
        object.__setattr__(self, "params", dict(self.params))

    def __hash__(self) -> int:
        return hash((self.kind, tuple(sorted(self.params.items())), self.seed))


def make_eigenfunction(
    grid: GridSpec, k: tuple[int, int], amplitude: float = 1.0
) -> SpectralField:
    """amplitude * cos(k . x): a steady state of both Euler and Voigt.

    k must be nonzero and inside the dealias band so the mode survives
    the products untouched.
    """
    k1, k2 = int(k[0]), int(k[1])
    if k1 == 0 and k2 == 0:
        raise ValueError("eigenfunction wave-vector must be nonzero")
    cut = grid.dealias_cutoff
    if max(abs(k1), abs(k2)) > cut:
        raise ValueError(f"wave-vector {k} outside the dealias band (cutoff {cut})")
    m = grid.size
    c = np.zeros((m, m), dtype=np.complex128)
    c[k1 % m, k2 % m] = 0.5 * amplitude
    c[(-k1) % m, (-k2) % m] = 0.5 * amplitude
    return SpectralField(grid, c)


def _half_plane_modes(band: int) -> list[tuple[int, int]]:
    """One representative per conjugate pair with 0 < |k| <= band.

    Fixed enumeration order: (k1, k2) lexicographic over the half-plane
    k1 > 0 or (k1 == 0 and k2 > 0).  Independent of the grid size.
    """
    out = []
    for k1 in range(0, band + 1):
        for k2 in range(-band, band + 1):
            if k1 == 0 and k2 <= 0:
                continue
            if 0 < k1 * k1 + k2 * k2 <= band * band:
                out.append((k1, k2))
    return out


def make_random_sobolev(
    grid: GridSpec, sigma: float, seed: int, band: int, amplitude: float = 1.0
) -> SpectralField:
    """Random-phase vorticity with |omega_hat(k)| = amplitude * |k|^{-sigma}.

    Modes fill 0 < |k| <= band (Euclidean); one uniform phase per
    conjugate pair, drawn from a seeded generator in a fixed mode order.
    The corresponding velocity gains one derivative, so choosing
    sigma slightly above s puts u in H^s.
    """
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if not 1 <= band <= grid.dealias_cutoff:
        raise ValueError(
            f"band must lie in [1, dealias_cutoff={grid.dealias_cutoff}], got {band}"
        )
    rng = np.random.default_rng(seed)
    m = grid.size
    c = np.zeros((m, m), dtype=np.complex128)
    for k1, k2 in _half_plane_modes(band):
        mag = amplitude * float(k1 * k1 + k2 * k2) ** (-sigma / 2.0)
        phase = np.exp(2j * np.pi * rng.random())
        c[k1 % m, k2 % m] = mag * phase
        c[(-k1) % m, (-k2) % m] = mag * np.conj(phase)
    return SpectralField(grid, c)


def make_yudovich_patch(
    grid: GridSpec,
    radius: float,
    smoothing: float | None = None,
    seed: int = 0,
    amplitude: float = 1.0,
) -> SpectralField:
    """Mollified disc indicator, mean removed, sup normalized to amplitude.

    The disc center is drawn uniformly from the seed; the indicator is
    smoothed over ``smoothing`` (default two grid cells) so the patch
    lives on the grid, then dealiased, mean-zeroed, and scaled so the
    collocation sup norm equals ``amplitude``.
    """
    if not 0 < radius < np.pi:
        raise ValueError(f"radius must lie in (0, pi), got {radius}")
    if smoothing is None:
        smoothing = 2.0 * grid.spacing
    if not smoothing > 0:
        raise ValueError(f"smoothing must be positive, got {smoothing}")
    rng = np.random.default_rng(seed)
    center = rng.uniform(0.0, TWO_PI, size=2)
    x1, x2 = grid.meshgrid()
    d1 = np.mod(x1 - center[0] + np.pi, TWO_PI) - np.pi
    d2 = np.mod(x2 - center[1] + np.pi, TWO_PI) - np.pi
    r = np.hypot(d1, d2)
    vals = 0.5 * (1.0 - np.tanh((r - radius) / smoothing))
    f = zero_mean(dealias(forward_transform(vals, grid)))
    sup = float(np.max(np.abs(values_oversampled(f, 2))))
    if sup == 0.0:
        raise ValueError("degenerate patch: zero field after projection")
    return f * (amplitude / sup)


def make_taylor_family(
    grid: GridSpec, mode: int = 1, amplitude: float = 1.0, perturbation: float = 0.0
) -> SpectralField:
    """Taylor-Green vortex array amplitude*cos(m x1)cos(m x2), optionally
    perturbed by a single cos((m+1) x1) mode to break steadiness."""
    m = int(mode)
    if m < 1:
        raise ValueError(f"mode must be >= 1, got {mode}")
    if max(m, m + 1 if perturbation else m) > grid.dealias_cutoff:
        raise ValueError("taylor modes outside the dealias band")
    n = grid.size
    c = np.zeros((n, n), dtype=np.complex128)
    # cos(m x1) cos(m x2) = sum of quarter-amplitude modes at (+-m, +-m)
    for s1 in (1, -1):
        for s2 in (1, -1):
            c[(s1 * m) % n, (s2 * m) % n] += 0.25 * amplitude
    if perturbation:
        c[(m + 1) % n, 0] += 0.5 * perturbation * amplitude
        c[(-(m + 1)) % n, 0] += 0.5 * perturbation * amplitude
    return SpectralField(grid, c)


def realize(recipe: DataRecipe, grid: GridSpec) -> SpectralField:
    """Build the initial vorticity a recipe describes on a grid."""
    p = dict(recipe.params)
    kind = recipe.kind
    if kind == "eigenfunction":
        k = (int(p.pop("k1", 1)), int(p.pop("k2", 0)))
        amp = float(p.pop("amplitude", 1.0))
        _reject_extras(kind, p)
        return make_eigenfunction(grid, k, amp)
    if kind == "random_sobolev":
        sigma = float(p.pop("sigma"))
        band = int(p.pop("band"))
        amp = float(p.pop("amplitude", 1.0))
        _reject_extras(kind, p)
        return make_random_sobolev(grid, sigma, recipe.seed, band, amp)
    if kind == "yudovich_patch":
        radius = float(p.pop("radius"))
        smoothing = p.pop("smoothing", None)
        smoothing = float(smoothing) if smoothing is not None else None
        amp = float(p.pop("amplitude", 1.0))
        _reject_extras(kind, p)
        return make_yudovich_patch(grid, radius, smoothing, recipe.seed, amp)
    if kind == "taylor_family":
        mode = int(p.pop("mode", 1))
        amp = float(p.pop("amplitude", 1.0))
        pert = float(p.pop("perturbation", 0.0))
        _reject_extras(kind, p)
        return make_taylor_family(grid, mode, amp, pert)
    raise ValueError(f"unknown initial data kind {kind!r}")


def _reject_extras(kind: str, leftovers: dict) -> None:
    if leftovers:
        raise ValueError(f"unknown parameter(s) for {kind}: {sorted(leftovers)}")


def galerkin_truncate(f: SpectralField, n: int) -> SpectralField:
    """Keep modes with 0 < |k| <= n (Euclidean); zero everything else."""
    if n < 1:
        raise ValueError(f"truncation wave-number must be >= 1, got {n}")
    t = tables(f.grid)
    mask = t.ksq <= float(n) * float(n)
    c = f.coeffs * mask
    c[0, 0] = 0.0
    return SpectralField(f.grid, c)


def make_alpha_family(
    base: SpectralField,
    alpha: float,
    mode: str = "exact",
    gamma: float = 1.0,
    seed: int = 0,
) -> SpectralField:
    """Initial data for the Voigt run at a given alpha.

    exact:      omega_0^alpha = omega_0 (identical object).
    perturbed:  adds a fixed low-band seeded field scaled so that
                ||omega_0^alpha - omega_0||_2 = alpha^gamma ||omega_0||_2.
                The perturbation band is fixed, so sqrt(alpha) times its
                gradient norm stays bounded over any alpha sweep.
    """
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    if mode == "exact":
        return base
    if mode != "perturbed":
        raise ValueError(f"family mode must be 'exact' or 'perturbed', got {mode!r}")
    band = min(4, base.grid.dealias_cutoff)
    pert = make_random_sobolev(base.grid, sigma=2.0, seed=seed, band=band)
    scale = alpha**gamma * l2_norm(base) / l2_norm(pert)
    return base + scale * pert
