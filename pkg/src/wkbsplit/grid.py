"""Pseudospectral machinery on a uniform periodic grid over [0, 2*pi).

Conventions used throughout the package:

* forward coefficients  c_k = (1/n) * sum_j u_j exp(-i k x_j)
* inverse sum           u_j = sum_k c_k exp(+i k x_j)
* wavenumbers stored in FFT order {0, 1, ..., n/2 - 1, -n/2, ..., -1}

The unpaired Nyquist mode k = -n/2 is zeroed by odd-order derivatives and is
treated as a real cosine when a real field is evaluated between nodes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Mapping, Union

import numpy as np

from .errors import InvalidInput

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class PeriodicGrid:
    """Uniform nodes x_j = 2*pi*j/n on the torus; n must be even and >= 4."""

    n: int

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)):
            raise InvalidInput(f"grid size must be an integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        if self.n < 4 or self.n % 2 != 0:
            raise InvalidInput(f"grid size must be even and >= 4, got {self.n}")

    @property
    def dx(self) -> float:
        return TWO_PI / self.n

    @cached_property
    def nodes(self) -> np.ndarray:
        x = self.dx * np.arange(self.n)
        x.setflags(write=False)
        return x

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        """Signed integer wavenumbers in FFT order."""
        k = np.fft.fftfreq(self.n, 1.0 / self.n).astype(np.int64)
        k.setflags(write=False)
        return k


def _validated_values(grid, values, *, dtype, label):
    arr = np.asarray(values)
    if arr.ndim != 1 or arr.shape[0] != grid.n:
        raise InvalidInput(
            f"{label} needs {grid.n} samples, got shape {arr.shape}"
        )
    if dtype == np.float64 and np.iscomplexobj(arr):
        raise InvalidInput(f"{label} must be real-valued")
    arr = arr.astype(dtype)
    if not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{label} contains non-finite samples")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class RealField:
    """Real samples of a function at the grid nodes."""

    grid: PeriodicGrid
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self,
            "values",
            _validated_values(self.grid, self.values, dtype=np.float64, label="RealField"),
        )


@dataclass(frozen=True, eq=False)
class ComplexField:
    """Complex samples of a function at the grid nodes."""

    grid: PeriodicGrid
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self,
            "values",
            _validated_values(self.grid, self.values, dtype=np.complex128, label="ComplexField"),
        )


@dataclass(frozen=True, eq=False)
class SpectralCoefficients:
    """Fourier coefficients in FFT order, indexable by signed wavenumber."""

    grid: PeriodicGrid
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self,
            "values",
            _validated_values(
                self.grid, self.values, dtype=np.complex128, label="SpectralCoefficients"
            ),
        )

    def coefficient(self, k: int) -> complex:
        half = self.grid.n // 2
        if k < -half or k > half - 1:
            raise InvalidInput(f"wavenumber {k} outside [-{half}, {half - 1}]")
        return complex(self.values[k % self.grid.n])


Field = Union[RealField, ComplexField]


def forward_dft(field: Field) -> SpectralCoefficients:
    """Forward transform: c_k = (1/n) sum_j u_j exp(-i k x_j)."""
    n = field.grid.n
    return SpectralCoefficients(field.grid, np.fft.fft(field.values) / n)


def inverse_dft(coeffs: SpectralCoefficients) -> ComplexField:
    """Inverse sum u_j = sum_k c_k exp(i k x_j); always complex-valued."""
    n = coeffs.grid.n
    return ComplexField(coeffs.grid, np.fft.ifft(coeffs.values) * n)


def dft(obj, direction: str = "forward"):
    """Transform between node samples and spectral coefficients."""
    if direction == "forward":
        if not isinstance(obj, (RealField, ComplexField)):
            raise InvalidInput("forward dft expects a RealField or ComplexField")
        return forward_dft(obj)
    if direction == "inverse":
        if not isinstance(obj, SpectralCoefficients):
            raise InvalidInput("inverse dft expects SpectralCoefficients")
        return inverse_dft(obj)
    raise InvalidInput(f"direction must be 'forward' or 'inverse', got {direction!r}")


MultiplierLike = Union[Callable, Mapping, np.ndarray, list, tuple]


def _multiplier_array(grid: PeriodicGrid, multiplier: MultiplierLike) -> np.ndarray:
    k = grid.wavenumbers
    if callable(multiplier):
        m = np.asarray(multiplier(k), dtype=np.complex128)
        if m.ndim == 0:
            m = np.full(grid.n, complex(m))
        if m.shape != (grid.n,):
            raise InvalidInput(
                f"multiplier callable returned shape {m.shape}, expected ({grid.n},)"
            )
    elif isinstance(multiplier, Mapping):
        try:
            m = np.array([multiplier[int(kk)] for kk in k], dtype=np.complex128)
        except KeyError as exc:
            raise InvalidInput(f"multiplier undefined at wavenumber {exc}") from exc
    else:
        m = np.asarray(multiplier, dtype=np.complex128)
        if m.shape != (grid.n,):
            raise InvalidInput(
                f"multiplier array has shape {m.shape}, expected ({grid.n},)"
            )
    if not np.all(np.isfinite(m)):
        raise InvalidInput("multiplier takes non-finite values")
    return m


def _is_hermitian_multiplier(m: np.ndarray, n: int) -> bool:
    half = n // 2
    tol = 1e-14 * max(1.0, float(np.max(np.abs(m))))
    if abs(m[0].imag) > tol or abs(m[half].imag) > tol:
        return False
    pos = m[1:half]
    neg = m[n - 1 : half : -1]  # k = -1, -2, ..., -(half - 1)
    return bool(np.allclose(neg, np.conj(pos), rtol=0.0, atol=tol))


def apply_fourier_multiplier(field: Field, multiplier: MultiplierLike) -> Field:
    """Multiply the field's spectrum by m(k) and transform back.

    A RealField comes back as a RealField when m is Hermitian-symmetric
    (m(-k) = conj(m(k)) with m real at k = 0 and at the Nyquist mode);
    the tiny imaginary residue of the round trip is discarded.
    """
    m = _multiplier_array(field.grid, multiplier)
    spectrum = np.fft.fft(field.values) * m
    out = np.fft.ifft(spectrum)
    if isinstance(field, RealField) and _is_hermitian_multiplier(m, field.grid.n):
        return RealField(field.grid, out.real)
    return ComplexField(field.grid, out)


def spectral_derivative(field: Field, order: int) -> Field:
    """Differentiate via the multiplier (ik)^order, zeroing Nyquist for odd orders."""
    if isinstance(order, bool) or not isinstance(order, (int, np.integer)) or order < 1:
        raise InvalidInput(f"derivative order must be an integer >= 1, got {order!r}")
    k = field.grid.wavenumbers
    m = (1j * k.astype(np.float64)) ** order
    if order % 2 == 1:
        m = m.copy()
        m[field.grid.n // 2] = 0.0
    return apply_fourier_multiplier(field, m)


def evaluate_off_grid(field: Field, points) -> np.ndarray:
    """Evaluate the trigonometric interpolant at arbitrary points.

    Real input fields return real values (the Nyquist mode then contributes
    as a real cosine); complex fields return the full complex sum.
    """
    pts = np.atleast_1d(np.asarray(points, dtype=np.float64))
    if pts.ndim != 1:
        raise InvalidInput(f"points must be one-dimensional, got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise InvalidInput("points contain non-finite values")
    grid = field.grid
    coeffs = np.fft.fft(field.values) / grid.n
    phases = np.exp(1j * np.multiply.outer(pts, grid.wavenumbers.astype(np.float64)))
    out = phases @ coeffs
    if isinstance(field, RealField):
        return out.real
    return out


def sobolev_norm(field: Field, s: float) -> float:
    """Periodic H^s norm sqrt(2*pi * sum_k (1 + k^2)^s |c_k|^2)."""
    grid = field.grid
    coeffs = np.fft.fft(field.values) / grid.n
    weights = (1.0 + grid.wavenumbers.astype(np.float64) ** 2) ** s
    return float(np.sqrt(TWO_PI * np.sum(weights * np.abs(coeffs) ** 2)))


def restrict_to_grid(field: Field, coarse: PeriodicGrid) -> Field:
    """Fourier truncation of the interpolant onto a coarser (or equal) grid.

    The fine modes k = +-nc/2 both land in the coarse Nyquist slot, which keeps
    real fields exactly real.
    """
    n = field.grid.n
    nc = coarse.n
    if nc > n:
        raise InvalidInput(f"cannot restrict a size-{n} field onto a finer size-{nc} grid")
    if nc == n:
        return type(field)(field.grid, field.values)
    c = np.fft.fft(field.values) / n
    half = nc // 2
    cc = np.empty(nc, dtype=np.complex128)
    cc[:half] = c[:half]
    cc[half] = c[n - half] + c[half]
    cc[half + 1 :] = c[n - half + 1 : n]
    out = np.fft.ifft(cc) * nc
    if isinstance(field, RealField):
        return RealField(coarse, out.real)
    return ComplexField(coarse, out)


def dealias_two_thirds(field: Field) -> Field:
    """Zero all modes with |k| > n/3 (the classical 2/3 truncation rule)."""
    k = field.grid.wavenumbers
    m = (np.abs(k) <= field.grid.n / 3.0).astype(np.float64)
    return apply_fourier_multiplier(field, m)
