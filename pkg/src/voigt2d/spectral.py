"""Spectral fields and the linear operators of the vorticity formulation.

Convention: a real field f on [0, 2pi)^2 is represented by coefficients
f_hat[k] with f(x) = sum_k f_hat[k] exp(i k.x), stored as an M x M complex
array in numpy FFT layout.  Parseval then reads
integral |f|^2 dx = (2pi)^2 * sum_k |f_hat[k]|^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import TWO_PI, GridSpec, tables

#: relative tolerance for the Hermitian-symmetry (realness) check
SYMMETRY_TOL = 1e-12


class SymmetryError(ValueError):
    """Coefficients are not Hermitian-symmetric: the field is not real."""


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Immutable scalar field in spectral representation.

    ``coeffs`` is complex128 of shape (M, M) in FFT layout.  Fields used by
    the dynamics satisfy two invariants, enforced at the generator and
    integrator boundaries: Hermitian symmetry (realness) and a zero mean
    mode (coeffs[0, 0] == 0).
    """

    grid: GridSpec
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        c = np.asarray(self.coeffs)
        m = self.grid.size
        if c.shape != (m, m):
            raise ValueError(f"coefficient shape {c.shape} does not match grid size {m}")
        if c.dtype != np.complex128:
            c = c.astype(np.complex128)
            c.setflags(write=False)
        elif c.flags.writeable or c.base is not None:
            c = c.copy()
            c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    # -- arithmetic used by the RK4 stepper -------------------------------
    def __add__(self, other: "SpectralField") -> "SpectralField":
        self._check_same_grid(other)
        return SpectralField(self.grid, self.coeffs + other.coeffs)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        self._check_same_grid(other)
        return SpectralField(self.grid, self.coeffs - other.coeffs)

    def __mul__(self, scalar: float) -> "SpectralField":
        return SpectralField(self.grid, self.coeffs * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "SpectralField":
        return SpectralField(self.grid, -self.coeffs)

    def _check_same_grid(self, other: "SpectralField") -> None:
        if other.grid != self.grid:
            raise ValueError(f"grid mismatch: {self.grid} vs {other.grid}")

    @property
    def mean_coefficient(self) -> complex:
        return complex(self.coeffs[0, 0])

    def hermitian_defect(self) -> float:
        """Max |f_hat(-k) - conj(f_hat(k))| over all modes."""
        t = tables(self.grid)
        mirror = np.conj(self.coeffs[np.ix_(t.negate, t.negate)])
        return float(np.max(np.abs(self.coeffs - mirror)))

    def is_real_field(self, tol: float = SYMMETRY_TOL) -> bool:
        scale = max(1.0, float(np.max(np.abs(self.coeffs))))
        return self.hermitian_defect() <= tol * scale


@dataclass(frozen=True, eq=False)
class VelocityPair:
    """Divergence-free velocity (u1, u2) as two spectral components."""

    u1: SpectralField
    u2: SpectralField

    def __post_init__(self) -> None:
        if self.u1.grid != self.u2.grid:
            raise ValueError("velocity components live on different grids")

    @property
    def grid(self) -> GridSpec:
        return self.u1.grid

    def divergence_defect(self) -> float:
        """L2 norm of div u; zero (to roundoff) for Biot-Savart output."""
        d = divergence(self)
        return float(TWO_PI * np.linalg.norm(d.coeffs))


# ---------------------------------------------------------------------------
# transforms


def forward_transform(values: np.ndarray, grid: GridSpec) -> SpectralField:
    """Collocation values -> spectral coefficients.

    Input must be real and finite with shape (M, M).  The output is
    symmetrized so Hermitian symmetry holds exactly, not merely to
    roundoff; the mean mode is retained as computed.
    """
    values = np.asarray(values)
    if values.shape != (grid.size, grid.size):
        raise ValueError(
            f"value shape {values.shape} does not match grid size {grid.size}"
        )
    if np.iscomplexobj(values):
        raise ValueError("forward_transform expects a real array")
    if not np.all(np.isfinite(values)):
        raise ValueError("forward_transform expects finite values")
    return _from_values(values, grid)


def _from_values(values: np.ndarray, grid: GridSpec) -> SpectralField:
    """Unchecked transform used by the dynamics hot path; non-finite
    inputs pass through so the integrator can report them as blow-up."""
    c = np.fft.fft2(values) / grid.size**2
    t = tables(grid)
    mirror = np.conj(c[np.ix_(t.negate, t.negate)])
    return SpectralField(grid, 0.5 * (c + mirror))


def inverse_transform(f: SpectralField) -> np.ndarray:
    """Spectral coefficients -> collocation values (real array).

    Raises :class:`SymmetryError` if the coefficients violate Hermitian
    symmetry beyond 1e-12 relative, i.e. the field is not real.
    """
    if not f.is_real_field():
        raise SymmetryError(
            f"Hermitian symmetry violated (defect {f.hermitian_defect():.3e}); "
            "field is not real"
        )
    return _to_values(f.coeffs, f.grid)


def _to_values(coeffs: np.ndarray, grid: GridSpec) -> np.ndarray:
    # internal fast path: callers guarantee symmetry by construction
    return np.fft.ifft2(coeffs).real * grid.size**2


# ---------------------------------------------------------------------------
# linear operators


def derivative(f: SpectralField, axis: int) -> SpectralField:
    """Partial derivative along axis 1 or 2 (multiplication by i*k_axis).

    The unpaired Nyquist mode k_axis = M/2 is zeroed: on an even grid it
    aliases its own conjugate and has no well-defined odd derivative.
    """
    t = tables(f.grid)
    if axis == 1:
        d = t.d1
    elif axis == 2:
        d = t.d2
    else:
        raise ValueError(f"axis must be 1 or 2, got {axis}")
    return SpectralField(f.grid, (1j * d) * f.coeffs)


def laplacian(f: SpectralField) -> SpectralField:
    """Multiplication by -|k|^2."""
    return SpectralField(f.grid, -tables(f.grid).ksq * f.coeffs)


def helmholtz_filter(f: SpectralField, alpha: float) -> SpectralField:
    """Apply (I - alpha*Laplacian)^{-1}: divide mode k by 1 + alpha|k|^2.

    alpha = 0 is the identity bit-for-bit; negative alpha is rejected.
    """
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    if alpha == 0:
        return f
    return SpectralField(f.grid, f.coeffs / (1.0 + alpha * tables(f.grid).ksq))


def inverse_laplacian(f: SpectralField) -> SpectralField:
    """Zero-mean solution of Laplacian(g) = f; requires zero-mean input."""
    scale = max(1.0, float(np.max(np.abs(f.coeffs))))
    if abs(f.mean_coefficient) > SYMMETRY_TOL * scale:
        raise ValueError(
            f"inverse_laplacian requires zero-mean input, mean mode is {f.mean_coefficient}"
        )
    t = tables(f.grid)
    out = -t.inv_ksq * f.coeffs
    return SpectralField(f.grid, out)


def biot_savart(omega: SpectralField) -> VelocityPair:
    """Velocity with curl(u) = omega, div(u) = 0, zero mean.

    Solves Laplacian(psi) = omega and returns u = (-d2 psi, d1 psi).
    """
    psi = inverse_laplacian(omega)
    return VelocityPair(-derivative(psi, 2), derivative(psi, 1))


def divergence(v: VelocityPair) -> SpectralField:
    return derivative(v.u1, 1) + derivative(v.u2, 2)


def curl(v: VelocityPair) -> SpectralField:
    """Scalar vorticity d1 u2 - d2 u1."""
    return derivative(v.u2, 1) - derivative(v.u1, 2)


def leray_project(v1: SpectralField, v2: SpectralField) -> VelocityPair:
    """Project a vector field onto its divergence-free part.

    Mode-wise subtraction of k (k . v_hat)/|k|^2; the mean modes are
    zeroed (the projection is defined on zero-mean fields).  Idempotent,
    and leaves divergence-free inputs unchanged to roundoff.
    """
    if v1.grid != v2.grid:
        raise ValueError("leray_project components live on different grids")
    t = tables(v1.grid)
    kdotv = t.k1 * v1.coeffs + t.k2 * v2.coeffs
    c1 = v1.coeffs - t.k1 * kdotv * t.inv_ksq
    c2 = v2.coeffs - t.k2 * kdotv * t.inv_ksq
    c1 = c1.copy()
    c2 = c2.copy()
    c1[0, 0] = 0.0
    c2[0, 0] = 0.0
    return VelocityPair(SpectralField(v1.grid, c1), SpectralField(v2.grid, c2))


def dealias(f: SpectralField) -> SpectralField:
    """Zero every mode with max(|k1|, |k2|) > the grid's dealias cutoff."""
    return SpectralField(f.grid, f.coeffs * tables(f.grid).dealias_mask)


def zero_mean(f: SpectralField) -> SpectralField:
    """Hard-zero the (0, 0) mode."""
    c = f.coeffs.copy()
    c[0, 0] = 0.0
    return SpectralField(f.grid, c)


# ---------------------------------------------------------------------------
# misc helpers


def l2_inner(f: SpectralField, g: SpectralField) -> float:
    """L2 inner product integral f*g dx = (2pi)^2 Re sum f_hat conj(g_hat)."""
    if f.grid != g.grid:
        raise ValueError("inner product requires a common grid")
    return float(TWO_PI**2 * np.real(np.sum(f.coeffs * np.conj(g.coeffs))))


def values_oversampled(f: SpectralField, factor: int = 2) -> np.ndarray:
    """Evaluate the trigonometric interpolant on a factor-times finer grid.

    Zero-pads the spectrum; the unpaired Nyquist mode is split evenly
    between +M/2 and -M/2 so the refined field stays real.
    """
    if factor < 1 or not isinstance(factor, (int, np.integer)):
        raise ValueError(f"factor must be a positive integer, got {factor!r}")
    if factor == 1:
        return inverse_transform(f)
    m = f.grid.size
    mf = m * factor
    half = m // 2
    src = np.fft.fftshift(f.coeffs).copy()  # rows/cols now -M/2 .. M/2-1
    big = np.zeros((mf, mf), dtype=np.complex128)
    lo = mf // 2 - half
    big[lo : lo + m, lo : lo + m] = src
    # split the -M/2 row/column onto +M/2 to preserve Hermitian symmetry
    big[lo, lo : lo + m] *= 0.5
    big[lo + m, lo : lo + m] = big[lo, lo : lo + m]
    big[lo : lo + m + 1, lo] *= 0.5
    big[lo : lo + m + 1, lo + m] = big[lo : lo + m + 1, lo]
    big = np.fft.ifftshift(big)
    return np.fft.ifft2(big).real * mf**2
