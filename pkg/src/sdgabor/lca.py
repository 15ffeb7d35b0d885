"""Classical Gabor analysis on K = R^d, evaluated by quadrature on a
uniform K-grid.

Conventions
-----------
* Characters are omega(x) = exp(2 pi i omega.x); the forward kernel is
  exp(-2 pi i omega.x).  No 1/sqrt(N) factors: quadrature weights carry
  every measure factor.
* A sampled signal is read as band-limited to the Nyquist box of its grid,
  |omega_a| <= 1 / (2 dk_a).  Fourier sums evaluated outside that box are
  zero rather than aliased copies; the transforms evaluate spectra at
  rescaled or rotated frequencies, which routinely leave the box.
* Windows are evaluated off-grid either exactly (when a closed form is
  attached) or by multilinear interpolation, and vanish outside the grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .grids import GridError, ProductGrid, as_product, fft_freq_grid, interp_eval

# relative slack so the -Nyquist node of an FFT-conjugate grid stays in band
BAND_SLACK = 1e-9


class UnsupportedGridError(GridError):
    """The operation needs uniform K-grid axes."""


class GridMismatchError(ValueError):
    """Two operands live on different grids."""


class NearOrthogonalWindowsError(ValueError):
    """Analysis and synthesis windows are (numerically) orthogonal."""


def _require_uniform(grid: ProductGrid) -> None:
    for a in grid.axes:
        if a.kind != "uniform":
            raise UnsupportedGridError(f"K-grid axes must be uniform, got {a.kind!r}")


def _hull_mask(grid: ProductGrid, points: np.ndarray) -> np.ndarray:
    inside = np.ones(points.shape[:-1], dtype=bool)
    for a, ax in enumerate(grid.axes):
        tol = 1e-12 * (ax.stop - ax.start)
        inside &= (points[..., a] >= ax.start - tol) & (points[..., a] <= ax.stop + tol)
    return inside


@dataclass(frozen=True, eq=False)
class SampledSlice:
    values: np.ndarray
    grid: ProductGrid

    def __post_init__(self):
        object.__setattr__(self, "grid", as_product(self.grid))
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != self.grid.shape:
            raise GridMismatchError(f"values {vals.shape} do not match grid {self.grid.shape}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("slice values must be finite")
        object.__setattr__(self, "values", vals)

    @property
    def norm_sq(self) -> float:
        return float(np.sum(self.grid.weights() * np.abs(self.values) ** 2))


@dataclass(frozen=True, eq=False)
class SampledWindow(SampledSlice):
    """A window u in L^2(K).  ``func`` optionally gives exact off-grid values
    for points of shape (..., d)."""

    func: Callable[[np.ndarray], np.ndarray] | None = field(default=None, compare=False)

    def __post_init__(self):
        super().__post_init__()
        if not self.norm_sq > 0:
            raise ValueError("a window must be nonzero")

    @cached_property
    def norm_sq(self) -> float:  # type: ignore[override]
        return float(np.sum(self.grid.weights() * np.abs(self.values) ** 2))

    def at(self, points) -> np.ndarray:
        """Window values at arbitrary points of shape (..., d)."""
        pts = np.asarray(points, dtype=float)
        if self.func is None:
            if self.grid.ndim == 1:
                return interp_eval(self.values, self.grid, pts[..., 0])
            return interp_eval(self.values, self.grid, pts)
        out = np.asarray(self.func(pts), dtype=complex)
        return np.where(_hull_mask(self.grid, pts), out, 0.0)

    @classmethod
    def from_function(cls, func, grid) -> "SampledWindow":
        grid = as_product(grid)
        vals = np.asarray(func(grid.nodes()), dtype=complex).reshape(grid.shape)
        return cls(vals, grid, func)


@dataclass(frozen=True, eq=False)
class STFTField:
    values: np.ndarray
    grid: ProductGrid
    freq_grid: ProductGrid


# --- frequency targets ---------------------------------------------------------
#
# A target set is either a tuple of 1-D coordinate arrays (a product set,
# transformed axis by axis) or an (M, d) array of arbitrary points.

def targets_from_points(points: np.ndarray, shape: Sequence[int]):
    """Return the product-set form of ``points`` when it has one, else the points."""
    shape = tuple(shape)
    d = points.shape[-1]
    if d == 1:
        return (points[:, 0].copy(),)
    cube = points.reshape(shape + (d,))
    axes = []
    for a in range(d):
        c = np.moveaxis(cube[..., a], a, 0).reshape(shape[a], -1)
        if np.any(c != c[:, :1]):
            return points
        axes.append(c[:, 0].copy())
    return tuple(axes)


def target_points(targets) -> np.ndarray:
    if isinstance(targets, tuple):
        mesh = np.meshgrid(*targets, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)
    return targets


def target_shape(targets) -> tuple[int, ...]:
    if isinstance(targets, tuple):
        return tuple(len(t) for t in targets)
    return (targets.shape[0],)


def _fft_compatible(grid: ProductGrid, targets) -> bool:
    if not isinstance(targets, tuple):
        return False
    for ax, t in zip(grid.axes, targets):
        conj = fft_freq_grid(ax).points
        if t.shape != conj.shape or not np.allclose(t, conj, rtol=0, atol=1e-12 * abs(conj[0])):
            return False
    return True


def band_mask(grid: ProductGrid, points: np.ndarray) -> np.ndarray:
    inside = np.ones(points.shape[:-1], dtype=bool)
    for a, ax in enumerate(grid.axes):
        inside &= np.abs(points[..., a]) <= ax.nyquist * (1 + BAND_SLACK)
    return inside


def _axis_kernel(y: np.ndarray, w: np.ndarray, nyq: float, sign: float) -> np.ndarray:
    """exp(sign 2 pi i y w) of shape (len(y), len(w)); out-of-band columns zeroed
    for the forward (sign < 0) kernel."""
    e = np.exp(sign * 2j * np.pi * np.outer(y, w))
    if sign < 0:
        e[:, np.abs(w) > nyq * (1 + BAND_SLACK)] = 0.0
    return e


class FreqKernel:
    """Forward Fourier sums from the K-grid nodes to a fixed target set.

    Building the kernel once and applying it to many arrays avoids
    re-evaluating the exponentials.
    """

    def __init__(self, grid: ProductGrid, targets):
        self.grid = grid
        self.targets = targets
        self.shape = target_shape(targets)
        self.fft = _fft_compatible(grid, targets)
        self.mats = None
        if self.fft:
            self.phases = [np.exp(-2j * np.pi * t * ax.points[0])
                           for t, ax in zip(targets, grid.axes)]
        elif isinstance(targets, tuple):
            self.mats = [_axis_kernel(ax.points, t, ax.nyquist, -1.0)
                         for ax, t in zip(grid.axes, targets)]
        else:
            E = np.exp(-2j * np.pi * grid.nodes() @ targets.T)
            E[:, ~band_mask(grid, targets)] = 0.0
            self.mats = [E]

    def apply(self, P: np.ndarray) -> np.ndarray:
        """``P`` has shape (..., *grid.shape) and carries quadrature weights."""
        d = self.grid.ndim
        lead = P.shape[:-d]
        if self.fft:
            out = np.fft.fftshift(np.fft.fftn(P, axes=tuple(range(-d, 0))),
                                  axes=tuple(range(-d, 0)))
            for a, phase in enumerate(self.phases):
                shape = [1] * out.ndim
                shape[len(lead) + a] = -1
                out = out * phase.reshape(shape)
            return out
        if isinstance(self.targets, tuple):
            if d == 1:
                return P @ self.mats[0]
            out = P
            for a, E in enumerate(self.mats):
                axis = len(lead) + a
                out = np.moveaxis(np.tensordot(out, E, axes=([axis], [0])), -1, axis)
            return out
        return P.reshape(lead + (self.grid.size,)) @ self.mats[0]


def analyze(P: np.ndarray, grid: ProductGrid, targets) -> np.ndarray:
    """sum_j P[..., j] exp(-2 pi i w.y_j) over the K-grid nodes y_j.

    ``P`` has shape (..., *grid.shape) and already carries quadrature
    weights.  Returns (..., *target_shape).
    """
    return FreqKernel(grid, targets).apply(P)


def synthesize_freq(C: np.ndarray, targets, grid: ProductGrid) -> np.ndarray:
    """sum_l C[..., l] exp(+2 pi i w_l.y) at every K-grid node y.

    ``C`` has shape (..., *target_shape) with weights applied; returns
    (..., *grid.shape).
    """
    d = grid.ndim
    if isinstance(targets, tuple):
        nt = len(targets)
        lead = C.shape[:-nt]
        out = C
        for a, ax in enumerate(grid.axes):
            axis = len(lead) + a
            E = np.exp(2j * np.pi * np.outer(targets[a], ax.points))
            out = np.moveaxis(np.tensordot(out, E, axes=([axis], [0])), -1, axis)
        return out
    lead = C.shape[:-1]
    E = np.exp(2j * np.pi * targets @ grid.nodes().T)
    return (C @ E).reshape(lead + grid.shape)


def window_matrix(u: SampledWindow, grid: ProductGrid, shifts: np.ndarray) -> np.ndarray:
    """u(y_j - s_i) for shifts (S, d) and K-grid nodes y_j; shape (S, *grid.shape)."""
    nodes = grid.nodes()
    diff = nodes[None, :, :] - shifts[:, None, :]
    return u.at(diff).reshape((shifts.shape[0],) + grid.shape)


def stft_at(v: np.ndarray, grid: ProductGrid, u: SampledWindow, shifts: np.ndarray,
            targets, U: np.ndarray | None = None, kernel: FreqKernel | None = None) -> np.ndarray:
    """V_u v at every (shift, frequency) pair by batched quadrature.

    Returns shape (S, *target_shape).  ``U`` and ``kernel`` may carry a
    precomputed ``window_matrix`` and ``FreqKernel`` for ``targets``.
    """
    if U is None:
        U = window_matrix(u, grid, shifts)
    if kernel is None:
        kernel = FreqKernel(grid, targets)
    P = np.conj(U) * (grid.weights() * v)[None]
    return kernel.apply(P)


def synthesize_at(F: np.ndarray, grid: ProductGrid, u2: SampledWindow, shifts: np.ndarray,
                  shift_weights: np.ndarray, targets, target_weights: np.ndarray,
                  U: np.ndarray | None = None) -> np.ndarray:
    """sum_{i,l} ws_i wl_l F[i, l] [rho(s_i, w_l) u2](y) at every K-grid node y.

    ``F`` has shape (S, *target_shape); weights are flat (S,) and
    target-shaped respectively.
    """
    if U is None:
        U = window_matrix(u2, grid, shifts)
    Z = synthesize_freq(F * target_weights[None], targets, grid)
    ws = shift_weights.reshape((-1,) + (1,) * grid.ndim)
    return np.sum(ws * U * Z, axis=0)


# --- public operations ---------------------------------------------------------

def _freq_targets(freq_grid) -> tuple:
    fg = as_product(freq_grid)
    return tuple(a.points for a in fg.axes)


def fourier(v: SampledSlice, freq_grid=None) -> SampledSlice:
    """v^(w) = sum_j w_j v(k_j) exp(-2 pi i w.k_j) on ``freq_grid``
    (default: the FFT-conjugate grid of v's grid)."""
    _require_uniform(v.grid)
    fg = default_freq_grid(v.grid) if freq_grid is None else as_product(freq_grid)
    if fg.ndim != v.grid.ndim:
        raise GridMismatchError("frequency grid dimension differs from K-grid")
    vals = analyze(v.grid.weights() * v.values, v.grid, _freq_targets(fg))
    return SampledSlice(vals, fg)


def default_freq_grid(grid) -> ProductGrid:
    return ProductGrid(tuple(fft_freq_grid(a) for a in as_product(grid).axes))


def rho_apply(k, w, u: SampledWindow) -> SampledSlice:
    """[rho(k, w) u](y) = exp(2 pi i w.y) u(y - k) on u's grid."""
    k = np.atleast_1d(np.asarray(k, float))
    w = np.atleast_1d(np.asarray(w, float))
    nodes = u.grid.nodes()
    vals = np.exp(2j * np.pi * nodes @ w) * u.at(nodes - k)
    return SampledSlice(vals.reshape(u.grid.shape), u.grid)


def stft(v: SampledSlice, u: SampledWindow, freq_grid=None) -> STFTField:
    """V_u v at every K-grid shift and every node of ``freq_grid``."""
    _require_uniform(v.grid)
    if v.grid != u.grid:
        raise GridMismatchError("signal and window must share the K-grid")
    fg = default_freq_grid(v.grid) if freq_grid is None else as_product(freq_grid)
    shifts = v.grid.nodes()
    vals = stft_at(v.values, v.grid, u, shifts, _freq_targets(fg))
    return STFTField(vals.reshape(v.grid.shape + fg.shape), v.grid, fg)


def stft_oracle(v: SampledSlice, u: SampledWindow, s, w) -> complex | np.ndarray:
    """Direct quadrature of V_u v(s, w) at one shift ``s``.

    ``w`` is one frequency (scalar or shape (d,)) or an (M, d) array; each
    frequency is summed independently.  Frequencies outside the Nyquist box give 0.
    """
    grid = v.grid
    nodes = grid.nodes()
    s = np.atleast_1d(np.asarray(s, float))
    w_arr = np.asarray(w, float)
    single = w_arr.ndim <= 1
    w_arr = w_arr.reshape(-1, grid.ndim)
    base = grid.weights().ravel() * v.values.ravel() * np.conj(u.at(nodes - s))
    nyq = np.array([a.nyquist for a in grid.axes])
    kernel = np.exp(-2j * np.pi * (nodes @ w_arr.T))
    kernel[:, np.any(np.abs(w_arr) > nyq * (1 + BAND_SLACK), axis=1)] = 0.0
    out = base @ kernel
    return out[0] if single else out


def inner(a: SampledSlice, b: SampledSlice) -> complex:
    """<a, b> = integral of a conj(b) over K."""
    if a.grid != b.grid:
        raise GridMismatchError("inner product needs a shared grid")
    return complex(np.sum(a.grid.weights() * a.values * np.conj(b.values)))


def istft(F: STFTField, u: SampledWindow, u2: SampledWindow | None = None) -> SampledSlice:
    """Reconstruct v from V_u v with synthesis window ``u2`` (default ``u``).

    v = <u2, u>^-1 integral V_u v(k, w) rho(k, w) u2 dk dw.  For real windows
    the constant equals <u, u2>.
    """
    u2 = u if u2 is None else u2
    c = inner(u2, u)
    if abs(c) <= 1e-10 * np.sqrt(u.norm_sq * u2.norm_sq):
        raise NearOrthogonalWindowsError("synthesis and analysis windows are orthogonal")
    grid, fg = F.grid, F.freq_grid
    shifts = grid.nodes()
    Fv = F.values.reshape((grid.size,) + fg.shape)
    out = synthesize_at(Fv, grid, u2, shifts, grid.weights().ravel(),
                        _freq_targets(fg), fg.weights())
    return SampledSlice(out / c, grid)


def parseval_check(f: SampledSlice, phi: SampledSlice) -> tuple[complex, complex]:
    """Both sides of  int f conj(phi_check) dk = int f^ conj(phi) dw,
    phi_check(x) = int phi(w) exp(2 pi i w.x) dw."""
    fg = phi.grid
    targets = _freq_targets(fg)
    phi_check = synthesize_freq(fg.weights() * phi.values, targets, f.grid)
    lhs = complex(np.sum(f.grid.weights() * f.values * np.conj(phi_check)))
    fhat = fourier(f, fg)
    rhs = complex(np.sum(fg.weights() * fhat.values * np.conj(phi.values)))
    return lhs, rhs
