"""Functions sampled on a uniform periodic grid and their spectral seminorms.

Conventions
-----------
The box is [-L, L)^3 with ``n`` points per axis, spacing ``h = 2L/n`` and
nodes ``x_j = -L + j h``. Discrete Fourier coefficients are the raw
``fftn`` sums ``c_k``; wavenumbers are ``xi = (pi/L) k`` with signed wrapped
``k`` in {-n/2, ..., n/2-1}. With these choices

    h^3 sum_j u_j^2  =  (h^3 / n^3) sum_k |c_k|^2

and both sides approximate the continuum integral, so the seminorms below
need no further normalisation.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft

from .errors import DegenerateInputError, ParameterError
from .functionals import NormTriple, Params

FIELD_DIM = 3


@dataclass(frozen=True)
class GridSpec:
    n: int
    half_width: float
    dim: int = FIELD_DIM

    def __post_init__(self):
        n = int(self.n)
        if n != self.n or n < 8 or n & (n - 1):
            raise ParameterError(f"n must be a power of two >= 8, got {self.n}", bound="n = 2^k >= 8")
        if not (math.isfinite(self.half_width) and self.half_width > 0):
            raise ParameterError(f"half_width must be > 0, got {self.half_width}", bound="L > 0")
        if self.dim != FIELD_DIM:
            raise ParameterError(f"fields are three-dimensional, got dim={self.dim}", bound="dim = 3")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "half_width", float(self.half_width))

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.n

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.dim

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dim

    @property
    def spectral_weight(self) -> float:
        """Quadrature weight h^dim / n^dim for sums over Fourier coefficients."""
        return self.cell_volume / self.n**self.dim

    @property
    def xi_min(self) -> float:
        return math.pi / self.half_width

    def axis(self) -> np.ndarray:
        return -self.half_width + self.spacing * np.arange(self.n)

    def wavenumbers(self) -> np.ndarray:
        return sfft.fftfreq(self.n, d=1.0 / self.n) * (math.pi / self.half_width)


@functools.lru_cache(maxsize=8)
def _xi_squared(n: int, half_width: float) -> np.ndarray:
    k = GridSpec(n, half_width).wavenumbers() ** 2
    xi2 = k[:, None, None] + k[None, :, None] + k[None, None, :]
    xi2.flags.writeable = False
    return xi2


def xi_squared(grid: GridSpec) -> np.ndarray:
    """|xi|^2 on the full (unshifted) frequency grid."""
    return _xi_squared(grid.n, grid.half_width)


def mixed_symbol(grid: GridSpec, s: float, k0: float | None = None) -> np.ndarray:
    """K(xi) = |xi|^2 + |xi|^{2s}, with the zero mode set to ``k0``.

    ``k0=None`` uses K(xi_min), xi_min = pi/L; ``k0=np.inf`` sends the zero
    mode of K^{-1} to zero.
    """
    _check_s(s)
    xi2 = xi_squared(grid)
    K = xi2 + xi2**s
    if k0 is None:
        k0 = grid.xi_min**2 + grid.xi_min ** (2 * s)
    K[0, 0, 0] = k0
    return K


class Field:
    """Real samples of a function on ``grid``; values are stored read-only as an (n, n, n) array."""

    __slots__ = ("grid", "values")

    def __init__(self, grid: GridSpec, values):
        arr = np.array(values, dtype=np.float64)
        if arr.size != grid.n**grid.dim:
            raise ParameterError(
                f"expected {grid.n**grid.dim} values for n={grid.n}, got {arr.size}", bound="len = n^dim"
            )
        arr = arr.reshape(grid.shape)
        if not np.all(np.isfinite(arr)):
            raise ParameterError("field values must be finite", bound="finite values")
        arr.flags.writeable = False
        self.grid = grid
        self.values = arr

    def __mul__(self, c):
        return Field(self.grid, float(c) * self.values)

    __rmul__ = __mul__

    def __repr__(self):
        return f"Field(n={self.grid.n}, L={self.grid.half_width}, max|u|={np.abs(self.values).max():.4g})"


@dataclass(frozen=True, eq=False)
class Spectrum:
    grid: GridSpec
    coefficients: np.ndarray


def to_spectrum(u: Field) -> Spectrum:
    return Spectrum(u.grid, sfft.fftn(u.values))


def from_spectrum(spec: Spectrum) -> Field:
    return Field(spec.grid, sfft.ifftn(spec.coefficients).real)


def _check_s(s):
    if not 0.0 < s < 1.0:
        raise ParameterError(f"s must lie in (0, 1), got {s}", bound="0 < s < 1")


def synth_gaussian(grid: GridSpec, amplitude: float = 1.0, width: float = 1.0, center=(0.0, 0.0, 0.0)) -> Field:
    """amplitude * exp(-|x - center|^2 / (2 width^2)) using minimal-image distances."""
    if not width > 0:
        raise ParameterError(f"width must be > 0, got {width}", bound="width > 0")
    L = grid.half_width
    center = np.asarray(center, dtype=float)
    if center.shape != (grid.dim,) or np.any(center < -L) or np.any(center >= L):
        raise ParameterError(f"center {center.tolist()} outside the box [-L, L)^3", bound="center in box")
    x = grid.axis()
    r2 = 0.0
    for ax in range(grid.dim):
        d = x - center[ax]
        d = d - 2 * L * np.round(d / (2 * L))
        shape = [1] * grid.dim
        shape[ax] = grid.n
        r2 = r2 + (d * d).reshape(shape)
    return Field(grid, amplitude * np.exp(-r2 / (2.0 * width * width)))


def _power(u: Field) -> np.ndarray:
    c = sfft.fftn(u.values)
    return c.real**2 + c.imag**2


def seminorm_d12(u: Field) -> float:
    """||u||^2_{D^{1,2}} = (h^3/n^3) sum |xi|^2 |c|^2."""
    return float(u.grid.spectral_weight * np.sum(xi_squared(u.grid) * _power(u)))


def seminorm_ds2(u: Field, s: float) -> float:
    """||u||^2_{D^{s,2}} in the multiplier form (h^3/n^3) sum |xi|^{2s} |c|^2."""
    _check_s(s)
    return float(u.grid.spectral_weight * np.sum(xi_squared(u.grid) ** s * _power(u)))


def lp_norm(u: Field, p: float) -> float:
    """h^3 sum |u|^p (the p-th power of the L^p norm).

    The sum runs over the sorted values, so any permutation of the nodes
    (a rearrangement, say) gives a bitwise identical result.
    """
    if not p >= 1:
        raise ParameterError(f"p must be >= 1, got {p}", bound="p >= 1")
    return float(u.grid.cell_volume * np.sum(np.sort(np.abs(u.values), axis=None) ** p))


def norm_triple(u: Field, params: Params) -> NormTriple:
    pw = _power(u)
    xi2 = xi_squared(u.grid)
    w = u.grid.spectral_weight
    return NormTriple(
        float(w * np.sum(xi2 * pw)),
        float(w * np.sum(xi2**params.s * pw)),
        lp_norm(u, params.p),
    )


def inner_products(u: Field, v: Field, s: float) -> tuple[float, float, float]:
    """(<u,v>_{D^{1,2}}, <u,v>_{D^{s,2}}, <u,v>_{L^2}) in the same quadrature as the seminorms."""
    cu, cv = sfft.fftn(u.values), sfft.fftn(v.values)
    cross = (cu * np.conj(cv)).real
    xi2 = xi_squared(u.grid)
    w = u.grid.spectral_weight
    return (
        float(w * np.sum(xi2 * cross)),
        float(w * np.sum(xi2**s * cross)),
        float(u.grid.cell_volume * np.sum(u.values * v.values)),
    )


def apply_K(spec: Spectrum, s: float, k0: float | None = None) -> Spectrum:
    K = mixed_symbol(spec.grid, s, k0)
    if np.isinf(K[0, 0, 0]):
        K[0, 0, 0] = 0.0
    return Spectrum(spec.grid, spec.coefficients * K)


def apply_K_inverse(spec: Spectrum, s: float, k0: float | None = None) -> Spectrum:
    """Divide each coefficient by K(xi); the zero mode is divided by the regularised ``k0``."""
    return Spectrum(spec.grid, spec.coefficients / mixed_symbol(spec.grid, s, k0))


def _linear_weights(grid: GridSpec, lambda2: float) -> np.ndarray:
    """1-D interpolation matrix: row j samples u at lambda2 * x_j (zero outside [-L, L))."""
    n, L, h = grid.n, grid.half_width, grid.spacing
    q = (lambda2 * grid.axis() + L) / h
    inside = (q >= 0) & (q < n)
    i0 = np.floor(q).astype(np.int64)
    frac = q - i0
    W = np.zeros((n, n))
    rows = np.nonzero(inside)[0]
    W[rows, i0[rows] % n] += 1.0 - frac[rows]
    W[rows, (i0[rows] + 1) % n] += frac[rows]
    return W


def dilate(u: Field, lambda1: float, lambda2: float) -> Field:
    """v(x) = lambda1 * u(lambda2 x) by trilinear interpolation.

    The stencil wraps periodically across the seam at x = L; sample points
    lambda2 * x outside the box read zero. For lambda2 > 1 the caller must
    make sure u is negligible beyond |x| ~ L / lambda2.
    """
    if not lambda2 > 0:
        raise ParameterError(f"lambda2 must be > 0, got {lambda2}", bound="lambda2 > 0")
    if lambda2 == 1.0:
        return Field(u.grid, lambda1 * u.values)
    W = _linear_weights(u.grid, lambda2)
    v = u.values
    for ax in range(u.grid.dim):
        v = np.moveaxis(np.tensordot(W, v, axes=([1], [ax])), 0, ax)
    return Field(u.grid, lambda1 * v)


def dilation_outside_fraction(u: Field, lambda2: float) -> float:
    """Fraction of the L^2 mass of u that a dilation by lambda2 pushes outside the box."""
    if lambda2 <= 1.0:
        return 0.0
    x = u.grid.axis()
    keep = np.abs(x) < u.grid.half_width / lambda2
    mask = keep[:, None, None] & keep[None, :, None] & keep[None, None, :]
    total = np.sum(u.values**2)
    return 0.0 if total == 0 else float(np.sum(u.values[~mask] ** 2) / total)


@functools.lru_cache(maxsize=4)
def _radial_order(n: int) -> np.ndarray:
    j = np.arange(n) - n // 2
    r2 = j[:, None, None] ** 2 + j[None, :, None] ** 2 + j[None, None, :] ** 2
    order = np.argsort(r2.ravel(), kind="stable")
    order.flags.writeable = False
    return order


def rearrange_radial(u: Field) -> Field:
    """Discrete symmetric decreasing rearrangement of |u| about the origin.

    Values of |u| sorted in decreasing order are placed on the nodes sorted by
    distance from x = 0; equidistant nodes are filled in lexicographic index
    order.
    """
    vals = np.sort(np.abs(u.values).ravel())[::-1]
    out = np.empty(vals.size)
    out[_radial_order(u.grid.n)] = vals
    return Field(u.grid, out)


def require_mass(u: Field, p: float):
    if lp_norm(u, p) <= 0.0:
        raise DegenerateInputError("field has zero L^p mass")
