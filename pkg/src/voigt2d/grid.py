"""Uniform periodic grids on [0, 2pi)^2 and their Fourier index tables."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class GridSpec:
    """M x M collocation grid on the 2pi-periodic square.

    Arrays over the grid are indexed ``[i1, i2]`` with ``x1 = 2pi*i1/M``,
    ``x2 = 2pi*i2/M``.  Spectral arrays use the numpy FFT layout along both
    axes with integer wave-numbers k_i in {-M/2+1, ..., M/2}.

    Parameters
    ----------
    size : int
        Points per axis; must be even and at least 8.
    dealias_cutoff : int, optional
        Largest |k_i| retained by :func:`voigt2d.spectral.dealias`.
        Defaults to floor(size/3), the two-thirds rule.
    """

    size: int
    dealias_cutoff: int | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.size, (int, np.integer)):
            raise ValueError(f"grid size must be an integer, got {self.size!r}")
        if self.size < 8 or self.size % 2 != 0:
            raise ValueError(f"grid size must be even and >= 8, got {self.size}")
        if self.dealias_cutoff is None:
            object.__setattr__(self, "dealias_cutoff", self.size // 3)
        cut = self.dealias_cutoff
        if not isinstance(cut, (int, np.integer)) or not 0 <= cut <= self.size // 2:
            raise ValueError(
                f"dealias_cutoff must be an integer in [0, size/2], got {cut!r}"
            )

    @property
    def spacing(self) -> float:
        """Grid spacing h = 2pi/M."""
        return TWO_PI / self.size

    def nodes(self) -> np.ndarray:
        """1D array of collocation coordinates along one axis."""
        return np.arange(self.size) * self.spacing

    def meshgrid(self) -> tuple[np.ndarray, np.ndarray]:
        """(X1, X2) coordinate arrays indexed [i1, i2]."""
        x = self.nodes()
        return np.meshgrid(x, x, indexing="ij")


class _Tables:
    """Precomputed wave-number arrays shared by all fields on one grid.

    All arrays are read-only.  ``k1``/``k2`` are the raw integer
    wave-numbers; ``d1``/``d2`` are the derivative factors with the
    unpaired Nyquist mode k_j = M/2 zeroed (it carries no usable phase
    information for odd derivatives on an even grid).
    """

    def __init__(self, grid: GridSpec) -> None:
        m = grid.size
        k = np.fft.fftfreq(m, d=1.0 / m)  # [0, 1, ..., M/2-1, -M/2, ..., -1]
        self.k1 = k[:, None] * np.ones((1, m))
        self.k2 = np.ones((m, 1)) * k[None, :]
        self.ksq = self.k1**2 + self.k2**2
        d = k.copy()
        d[m // 2] = 0.0
        self.d1 = d[:, None] * np.ones((1, m))
        self.d2 = np.ones((m, 1)) * d[None, :]
        with np.errstate(divide="ignore"):
            inv = 1.0 / self.ksq
        inv[0, 0] = 0.0
        self.inv_ksq = inv
        cut = grid.dealias_cutoff
        self.dealias_mask = (np.abs(self.k1) <= cut) & (np.abs(self.k2) <= cut)
        # index that maps k -> -k in FFT layout, applied along both axes
        self.negate = (-np.arange(m)) % m
        for arr in (
            self.k1, self.k2, self.ksq, self.d1, self.d2,
            self.inv_ksq, self.dealias_mask, self.negate,
        ):
            arr.setflags(write=False)


@lru_cache(maxsize=64)
def tables(grid: GridSpec) -> _Tables:
    """Cached wave-number tables for a grid."""
    return _Tables(grid)
