"""Periodic torus discretization and Fourier-multiplier machinery.

The torus [-L/2, L/2)^n stands in for whole space; frequencies live on the
lattice 2*pi*k/L with k per-axis in [-N/2, N/2).  Transforms carry the
symmetric (2*pi)^(-n/2) normalization with the quadrature weight dx^n
absorbed into the forward transform, so discrete norms converge to their
continuum counterparts as N and L grow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

__all__ = [
    "TorusGrid",
    "GridField",
    "SpectralField",
    "make_grid",
    "forward_transform",
    "inverse_transform",
    "apply_multiplier",
    "dealiased_product",
    "dealiased_power",
    "pad_factor_for_power",
    "refine_field",
    "outer_shell_fraction",
]

# Interior fraction of each axis; |x| beyond 0.9*(L/2) counts as the outer shell.
OUTER_SHELL_START = 0.9


@dataclass(frozen=True)
class TorusGrid:
    """Uniform grid on the torus [-L/2, L/2)^n.

    Frequencies are 2*pi*k/L for integer k in [-N/2, N/2) per axis, stored
    in FFT order.  N must be even so the lattice is symmetric up to the
    Nyquist mode.
    """

    n: int
    points_per_axis: int
    box_length: float

    def __post_init__(self) -> None:
        if self.n not in (1, 2, 3):
            raise ValueError(f"dimension n must be 1, 2 or 3, got {self.n}")
        if self.points_per_axis < 8 or self.points_per_axis % 2 != 0:
            raise ValueError(
                f"points per axis must be even and >= 8, got {self.points_per_axis}"
            )
        if not (self.box_length > 0 and math.isfinite(self.box_length)):
            raise ValueError(f"box length must be positive, got {self.box_length}")

    @property
    def spacing(self) -> float:
        return self.box_length / self.points_per_axis

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points_per_axis,) * self.n

    @property
    def num_points(self) -> int:
        return self.points_per_axis**self.n

    @property
    def freq_spacing(self) -> float:
        return 2.0 * np.pi / self.box_length

    @property
    def max_freq(self) -> float:
        """Largest |xi| on the lattice (corner mode)."""
        return math.sqrt(self.n) * np.pi * self.points_per_axis / self.box_length

    @property
    def min_freq(self) -> float:
        """Smallest nonzero |xi| on the lattice."""
        return self.freq_spacing

    @cached_property
    def axis_coords(self) -> np.ndarray:
        return -self.box_length / 2 + self.spacing * np.arange(self.points_per_axis)

    @cached_property
    def coords(self) -> tuple[np.ndarray, ...]:
        """Coordinate arrays broadcast to the grid shape."""
        x = self.axis_coords
        return tuple(
            x.reshape((1,) * d + (-1,) + (1,) * (self.n - d - 1)) for d in range(self.n)
        )

    @cached_property
    def axis_freqs(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.points_per_axis, d=self.spacing)

    @cached_property
    def freqs(self) -> tuple[np.ndarray, ...]:
        """Frequency arrays broadcast to the grid shape, FFT order."""
        xi = self.axis_freqs
        return tuple(
            xi.reshape((1,) * d + (-1,) + (1,) * (self.n - d - 1)) for d in range(self.n)
        )

    @cached_property
    def freq_abs(self) -> np.ndarray:
        out = np.zeros(self.shape)
        for xi in self.freqs:
            out = out + xi**2
        return np.sqrt(out)

    @cached_property
    def _phase_signs(self) -> np.ndarray:
        # Relates samples at x_j = -L/2 + j*dx to the FFT's x_j = j*dx origin:
        # exp(i*(L/2)*xi_k) = (-1)^k per axis.
        k = np.fft.fftfreq(self.points_per_axis) * self.points_per_axis
        sign1d = np.where(np.rint(k).astype(int) % 2 == 0, 1.0, -1.0)
        out = np.ones(self.shape)
        for d in range(self.n):
            out = out * sign1d.reshape(
                (1,) * d + (-1,) + (1,) * (self.n - d - 1)
            )
        return out

    def zeros(self) -> "GridField":
        return GridField(self, np.zeros(self.shape))

    def field(self, values: np.ndarray) -> "GridField":
        return GridField(self, np.asarray(values, dtype=float))

    def field_from_function(self, func: Callable[..., np.ndarray]) -> "GridField":
        return GridField(self, np.broadcast_to(func(*self.coords), self.shape).copy())


def make_grid(n: int, N: int, L: float) -> TorusGrid:
    """Build a torus grid with n axes, N points per axis and box length L."""
    return TorusGrid(n=n, points_per_axis=N, box_length=float(L))


@dataclass(frozen=True)
class GridField:
    """Real samples on a torus grid, immutable after construction."""

    grid: TorusGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.shape != self.grid.shape:
            raise ValueError(
                f"values shape {values.shape} does not match grid {self.grid.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("field values must be finite")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @cached_property
    def spectrum(self) -> "SpectralField":
        return forward_transform(self)

    def __add__(self, other: "GridField") -> "GridField":
        self._check_same_grid(other)
        return GridField(self.grid, self.values + other.values)

    def __sub__(self, other: "GridField") -> "GridField":
        self._check_same_grid(other)
        return GridField(self.grid, self.values - other.values)

    def __mul__(self, scalar: float) -> "GridField":
        return GridField(self.grid, self.values * float(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "GridField":
        return GridField(self.grid, -self.values)

    def _check_same_grid(self, other: "GridField") -> None:
        if other.grid != self.grid:
            raise ValueError("fields live on different grids")

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))


@dataclass(frozen=True)
class SpectralField:
    """Complex Fourier coefficients on the frequency lattice, FFT order."""

    grid: TorusGrid
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        coeffs = np.asarray(self.coeffs, dtype=complex)
        if coeffs.shape != self.grid.shape:
            raise ValueError(
                f"coeffs shape {coeffs.shape} does not match grid {self.grid.shape}"
            )
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("spectral coefficients must be finite")
        coeffs = coeffs.copy()
        coeffs.flags.writeable = False
        object.__setattr__(self, "coeffs", coeffs)

    def hermitian_defect(self) -> float:
        """Max |coeffs(-k) - conj(coeffs(k))| over the lattice."""
        reflected = self.coeffs
        for axis in range(self.grid.n):
            reflected = np.roll(np.flip(reflected, axis=axis), 1, axis=axis)
        return float(np.max(np.abs(reflected - np.conj(self.coeffs))))


def forward_transform(f: GridField) -> SpectralField:
    """Discrete analogue of the symmetric-normalization Fourier transform."""
    grid = f.grid
    scale = (2.0 * np.pi) ** (-grid.n / 2) * grid.spacing**grid.n
    coeffs = scale * grid._phase_signs * np.fft.fftn(f.values)
    return SpectralField(grid, coeffs)


def inverse_transform(
    F: SpectralField, *, require_real: bool = True, hermitian_tol: float = 1e-10
) -> GridField:
    """Invert forward_transform.

    With require_real the input must be Hermitian-symmetric (relative
    defect below hermitian_tol); otherwise the complex samples are returned
    as a plain array wrapped in no field type.
    """
    grid = F.grid
    if require_real:
        scale_ref = float(np.max(np.abs(F.coeffs)))
        defect = F.hermitian_defect()
        if defect > hermitian_tol * max(scale_ref, 1e-300):
            raise ValueError(
                f"spectrum is not Hermitian-symmetric (defect {defect:.3e}); "
                "pass require_real=False for complex output"
            )
    values = _inverse_values(F)
    if require_real:
        return GridField(grid, values.real)
    return values


def _inverse_values(F: SpectralField) -> np.ndarray:
    grid = F.grid
    scale = (
        (2.0 * np.pi) ** (-grid.n / 2)
        * grid.freq_spacing**grid.n
        * grid.num_points
    )
    return scale * np.fft.ifftn(grid._phase_signs * F.coeffs)


def apply_multiplier(m: Callable[[np.ndarray], np.ndarray], f: GridField) -> GridField:
    """Apply the radial Fourier multiplier m(|xi|) to f.

    m receives the array of frequency magnitudes and must return finite
    real values at every lattice point.
    """
    grid = f.grid
    symbol = np.asarray(m(grid.freq_abs), dtype=float)
    return apply_symbol(symbol, f)


def apply_symbol(symbol: np.ndarray, f: GridField) -> GridField:
    """Apply a precomputed real symbol array (grid-shaped) to f."""
    grid = f.grid
    symbol = np.broadcast_to(symbol, grid.shape)
    if not np.all(np.isfinite(symbol)):
        raise ValueError("multiplier produced non-finite values on the lattice")
    coeffs = symbol * f.spectrum.coeffs
    values = _inverse_values(SpectralField(grid, coeffs))
    return GridField(grid, values.real)


def pad_factor_for_power(p: int) -> int:
    """Zero-padding factor that makes the truncated p-th power alias-free."""
    if p < 2:
        raise ValueError("power must be at least 2")
    return math.ceil((p + 1) / 2)


def _pad_spectrum(F: SpectralField, M: int) -> SpectralField:
    """Embed coefficients into an M-points-per-axis grid over the same box."""
    grid = F.grid
    N = grid.points_per_axis
    fine = make_grid(grid.n, M, grid.box_length)
    shifted = np.fft.fftshift(F.coeffs)
    pad_lo = (M - N) // 2
    widths = [(pad_lo, M - N - pad_lo)] * grid.n
    padded = np.pad(shifted, widths)
    return SpectralField(fine, np.fft.ifftshift(padded))


def _truncate_spectrum(F: SpectralField, N: int, box_length: float) -> SpectralField:
    grid = F.grid
    M = grid.points_per_axis
    coarse = make_grid(grid.n, N, box_length)
    shifted = np.fft.fftshift(F.coeffs)
    lo = (M - N) // 2
    sl = tuple(slice(lo, lo + N) for _ in range(grid.n))
    return SpectralField(coarse, np.fft.ifftshift(shifted[sl]))


def dealiased_product(f: GridField, g: GridField, factor: int = 2) -> GridField:
    """Pointwise product computed on a zero-padded grid, then truncated.

    The retained modes of the result are exact for any inputs resolved on
    the original grid; factor 2 suffices for a bilinear product.
    """
    if f.grid != g.grid:
        raise ValueError("fields live on different grids")
    grid = f.grid
    M = factor * grid.points_per_axis
    fv = _inverse_values(_pad_spectrum(f.spectrum, M)).real
    gv = _inverse_values(_pad_spectrum(g.spectrum, M)).real
    fine = make_grid(grid.n, M, grid.box_length)
    prod_spec = forward_transform(GridField(fine, fv * gv))
    coarse_spec = _truncate_spectrum(prod_spec, grid.points_per_axis, grid.box_length)
    return GridField(grid, _inverse_values(coarse_spec).real)


def dealiased_power(f: GridField, p: int) -> GridField:
    """f**p computed pointwise on a grid padded by ceil((p+1)/2)."""
    grid = f.grid
    M = pad_factor_for_power(p) * grid.points_per_axis
    fv = _inverse_values(_pad_spectrum(f.spectrum, M)).real
    fine = make_grid(grid.n, M, grid.box_length)
    pow_spec = forward_transform(GridField(fine, fv**p))
    coarse_spec = _truncate_spectrum(pow_spec, grid.points_per_axis, grid.box_length)
    return GridField(grid, _inverse_values(coarse_spec).real)


def refine_field(f: GridField, factor: int = 2) -> GridField:
    """Spectral interpolation onto a grid with factor times the resolution."""
    grid = f.grid
    M = factor * grid.points_per_axis
    fine_spec = _pad_spectrum(f.spectrum, M)
    return GridField(fine_spec.grid, _inverse_values(fine_spec).real)


def outer_shell_fraction(f: GridField) -> float:
    """Fraction of the squared mass carried by the outer 10% of each axis."""
    grid = f.grid
    half = grid.box_length / 2
    outer = np.zeros(grid.shape, dtype=bool)
    for x in grid.coords:
        outer = outer | (np.abs(x) > OUTER_SHELL_START * half)
    total = float(np.sum(f.values**2))
    if total == 0.0:
        return 0.0
    return float(np.sum(f.values[outer] ** 2)) / total
