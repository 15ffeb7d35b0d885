"""Discretization substrate: 1-D grids, product grids, Haar-measure weights
and multilinear interpolation.

Quadrature is the trapezoidal rule in each axis' parameterizing coordinate
(x for uniform axes, log x for log-uniform axes).  Periodic axes use equal
weights over a half-open interval, which is the trapezoid rule for periodic
integrands.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy.interpolate import RegularGridInterpolator

KINDS = ("uniform", "log", "periodic")

MEASURES = ("G_tau", "G_hat_tau", "G_txw", "G_totimes", "K", "H", "K_hat")


class GridError(ValueError):
    """Invalid grid range, count or kind."""


class ShapeMismatchError(ValueError):
    """Grid structure does not match what the operation expects."""


@dataclass(frozen=True)
class Grid1D:
    kind: str
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise GridError(f"unknown grid kind {self.kind!r}")
        if not (np.isfinite(self.start) and np.isfinite(self.stop)):
            raise GridError("grid bounds must be finite")
        if self.count < 2:
            raise GridError(f"count must be >= 2, got {self.count}")
        if not self.start < self.stop:
            raise GridError(f"need start < stop, got [{self.start}, {self.stop}]")
        if self.kind == "log" and self.start <= 0:
            raise GridError("log-uniform grid requires start > 0")

    @cached_property
    def points(self) -> np.ndarray:
        if self.kind == "uniform":
            return np.linspace(self.start, self.stop, self.count)
        if self.kind == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return self.start + self.step * np.arange(self.count)

    @property
    def step(self) -> float:
        """Spacing in the parameterizing coordinate."""
        if self.kind == "uniform":
            return (self.stop - self.start) / (self.count - 1)
        if self.kind == "log":
            return np.log(self.stop / self.start) / (self.count - 1)
        return (self.stop - self.start) / self.count

    @cached_property
    def weights(self) -> np.ndarray:
        """Quadrature weights for integrals against d(point)."""
        if self.kind == "periodic":
            return np.full(self.count, self.step)
        w = np.full(self.count, self.step)
        w[0] = w[-1] = 0.5 * self.step
        if self.kind == "log":
            w = w * self.points
        return w

    @property
    def nyquist(self) -> float:
        if self.kind != "uniform":
            raise GridError("Nyquist frequency is defined for uniform grids only")
        return 0.5 / self.step

    def to_dict(self) -> dict:
        return {"kind": self.kind, "start": self.start, "stop": self.stop, "count": self.count}


KIND_ALIASES = {"log-uniform": "log"}


def make_grid(kind: str, start: float, stop: float, count: int) -> Grid1D:
    """Build a grid; ``"log-uniform"`` is accepted for ``"log"``."""
    return Grid1D(KIND_ALIASES.get(kind, kind), float(start), float(stop), int(count))


def fft_freq_grid(axis: Grid1D) -> Grid1D:
    """The frequency grid conjugate to a uniform axis under the DFT,
    omega_l = l / (L dk) for l = -L//2 .. L - L//2 - 1."""
    if axis.kind != "uniform":
        raise GridError("FFT-conjugate grid needs a uniform axis")
    n = axis.count
    df = 1.0 / (n * axis.step)
    lo = -(n // 2)
    return Grid1D("uniform", lo * df, (lo + n - 1) * df, n)


@dataclass(frozen=True)
class ProductGrid:
    axes: tuple[Grid1D, ...]

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        if not self.axes:
            raise GridError("product grid needs at least one axis")

    @property
    def ndim(self) -> int:
        return len(self.axes)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(a.count for a in self.axes)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    def nodes(self) -> np.ndarray:
        """All nodes as a (size, ndim) array in row-major order."""
        mesh = np.meshgrid(*[a.points for a in self.axes], indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def weights(self) -> np.ndarray:
        """Tensor-product quadrature weights with shape ``self.shape``."""
        w = np.ones(())
        for a in self.axes:
            w = np.multiply.outer(w, a.weights)
        return w

    def to_dict(self) -> list:
        return [a.to_dict() for a in self.axes]


def as_product(grid) -> ProductGrid:
    if isinstance(grid, ProductGrid):
        return grid
    if isinstance(grid, Grid1D):
        return ProductGrid((grid,))
    return ProductGrid(tuple(grid))


@dataclass(frozen=True)
class MeasureWeights:
    weights: np.ndarray
    measure_name: str

    @property
    def total(self) -> float:
        return float(self.weights.sum())


def _h_density(G, h_axis: Grid1D, power: int) -> np.ndarray:
    hp = h_axis.points[:, None]
    return G.delta(hp) ** power * G.haar_H_density(hp)


def _k_density(G, axes: Sequence[Grid1D]) -> np.ndarray:
    pg = ProductGrid(tuple(axes))
    return G.haar_K_density(pg.nodes()).reshape(pg.shape)


def measure_weights(G, grids, measure_name: str) -> MeasureWeights:
    """Quadrature weights for one of the Haar measures on a product grid.

    Axis layout expected for each measure (dK = G.dim_K):

    ``H``          (h,)
    ``K``          (k_1..k_dK)
    ``K_hat``      (w_1..w_dK)
    ``G_tau``      (h, k...)            delta(h) dh dk
    ``G_hat_tau``  (h, w...)            delta(h)^-1 dh dw
    ``G_txw``      (h, k..., w...)      dh dk dw
    ``G_totimes``  (h, k..., t, w...)   delta(h) delta(t)^-1 dh dk dt dw
    """
    pg = as_product(grids)
    dK = G.dim_K
    expected = {"H": 1, "K": dK, "K_hat": dK, "G_tau": 1 + dK, "G_hat_tau": 1 + dK,
                "G_txw": 1 + 2 * dK, "G_totimes": 2 + 2 * dK}
    if measure_name not in expected:
        raise ShapeMismatchError(f"unknown measure {measure_name!r}")
    if pg.ndim != expected[measure_name]:
        raise ShapeMismatchError(
            f"{measure_name} on group {G.name!r} needs {expected[measure_name]} axes, got {pg.ndim}")

    ax = pg.axes
    if measure_name == "H":
        factors = [ax[0].weights * _h_density(G, ax[0], 0)]
    elif measure_name == "K":
        factors = [ProductGrid(ax).weights() * _k_density(G, ax)]
    elif measure_name == "K_hat":
        factors = [ProductGrid(ax).weights()]
    elif measure_name == "G_tau":
        factors = [ax[0].weights * _h_density(G, ax[0], 1),
                   ProductGrid(ax[1:]).weights() * _k_density(G, ax[1:])]
    elif measure_name == "G_hat_tau":
        factors = [ax[0].weights * _h_density(G, ax[0], -1), ProductGrid(ax[1:]).weights()]
    elif measure_name == "G_txw":
        kax, wax = ax[1:1 + dK], ax[1 + dK:]
        factors = [ax[0].weights * _h_density(G, ax[0], 0),
                   ProductGrid(kax).weights() * _k_density(G, kax),
                   ProductGrid(wax).weights()]
    else:
        kax, tax, wax = ax[1:1 + dK], ax[1 + dK], ax[2 + dK:]
        factors = [ax[0].weights * _h_density(G, ax[0], 1),
                   ProductGrid(kax).weights() * _k_density(G, kax),
                   tax.weights * _h_density(G, tax, -1),
                   ProductGrid(wax).weights()]

    w = np.ones(())
    for f in factors:
        w = np.multiply.outer(w, f)
    return MeasureWeights(w.reshape(pg.shape), measure_name)


def interp_eval(values: np.ndarray, grid, points) -> np.ndarray | complex:
    """Multilinear interpolation of gridded values; zero outside the hull.

    On a 1-D grid ``points`` may have any shape (one scalar per point); on
    an n-D grid it has shape (..., n).  A single point returns a scalar.
    """
    pg = as_product(grid)
    values = np.asarray(values)
    if values.shape != pg.shape:
        raise ShapeMismatchError(f"values shape {values.shape} != grid shape {pg.shape}")
    pts = np.asarray(points, dtype=float)

    if pg.ndim == 1:
        x = pg.axes[0].points
        flat = pts.ravel()
        if np.iscomplexobj(values):
            out = (np.interp(flat, x, values.real, left=0.0, right=0.0)
                   + 1j * np.interp(flat, x, values.imag, left=0.0, right=0.0))
        else:
            out = np.interp(flat, x, values, left=0.0, right=0.0)
        out = out.reshape(pts.shape)
    else:
        if pts.shape[-1] != pg.ndim:
            raise ShapeMismatchError(f"points need trailing dimension {pg.ndim}")
        rgi = RegularGridInterpolator([a.points for a in pg.axes], values,
                                      method="linear", bounds_error=False, fill_value=0.0)
        out = rgi(pts.reshape(-1, pg.ndim)).reshape(pts.shape[:-1])
    if out.ndim == 0:
        return out.item()
    return out
