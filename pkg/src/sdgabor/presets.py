"""Built-in windows and test signals for the affine and E(2) pipelines."""

from __future__ import annotations

import numpy as np

from .grids import Grid1D, ProductGrid
from .groups import GroupDescriptor
from .lca import SampledWindow
from .transforms import SliceField


def gaussian(x: np.ndarray) -> np.ndarray:
    """e^{-pi |x|^2} for points of shape (..., d)."""
    return np.exp(-np.pi * np.sum(x ** 2, axis=-1))


def box(N: float):
    """Indicator of [-N, N]^d."""
    def u(x):
        return np.all(np.abs(x) <= N, axis=-1).astype(float)
    return u


def gaussian_window(k_grid: ProductGrid) -> SampledWindow:
    return SampledWindow.from_function(gaussian, k_grid)


def box_window(k_grid: ProductGrid, N: float) -> SampledWindow:
    return SampledWindow.from_function(box(N), k_grid)


def _h_envelope(group: GroupDescriptor, h, sigma: float, phase: float = 0.0):
    """Smooth bump on H: Gaussian in log a for the affine group, a raised
    cosine on the circle for E(2)."""
    if group.name == "affine":
        return np.exp(-0.5 * (np.log(h) / sigma) ** 2)
    return 1.0 + 0.5 * np.cos(h - phase)


def gaussian_type(a, x):
    """g(a, x) = a e^{-pi (a^2 + x^2)} on the affine group."""
    return a * np.exp(-np.pi * (a ** 2 + x[..., 0] ** 2))


def gaussian_envelope_window(group, h_grid: Grid1D, k_grid: ProductGrid,
                             sigma: float = 0.5) -> SliceField:
    """g(h, x) = w(h) e^{-pi |x|^2}, a window in L^2(G_tau) for the G kinds."""
    def g(h, x):
        return _h_envelope(group, h, sigma, phase=np.pi / 2) * gaussian(x)
    return SliceField.from_function(g, h_grid, k_grid, group)


def gaussian_type_window(group, h_grid: Grid1D, k_grid: ProductGrid) -> SliceField:
    if group.name != "affine":
        raise ValueError("the gaussian-type window is defined on the affine group only")
    return SliceField.from_function(gaussian_type, h_grid, k_grid, group)


def envelope_signal(group, h_grid: Grid1D, k_grid: ProductGrid, sigma: float = 0.35,
                    drift: float = 0.25) -> SliceField:
    """A Gaussian-envelope test signal whose centre and modulation move with h.

    Affine: f(a, x) = w(a) exp(-pi (x - c)^2) exp(2 pi i c x), c = drift ln a.
    E(2):   f(t, x) = w(t) exp(-pi |x - c_t|^2) exp(2 pi i xi_t . x) with c_t,
            xi_t rotating with the angle t.
    """
    if group.name == "affine":
        def f(a, x):
            c = drift * np.log(a)
            x0 = x[..., 0]
            return (_h_envelope(group, a, sigma) * np.exp(-np.pi * (x0 - c) ** 2)
                    * np.exp(2j * np.pi * c * x0))
    elif group.name == "e2":
        def f(t, x):
            c = 1.6 * drift * np.array([np.cos(t), np.sin(t)])
            xi = 1.2 * drift * np.array([np.cos(t), -np.sin(t)])
            return (_h_envelope(group, t, sigma) * np.exp(-np.pi * np.sum((x - c) ** 2, -1))
                    * np.exp(2j * np.pi * (x @ xi)))
    else:
        raise ValueError(f"no transform pipeline for group {group.name!r}")
    return SliceField.from_function(f, h_grid, k_grid, group)


def random_envelope_signal(group, h_grid: Grid1D, k_grid: ProductGrid,
                           rng: np.random.Generator) -> SliceField:
    """Envelope signal with random centre, modulation and width."""
    d = k_grid.ndim
    c0 = rng.uniform(-0.5, 0.5, d)
    xi = rng.uniform(-0.5, 0.5, d)
    width = rng.uniform(0.8, 1.25)
    amp = rng.uniform(0.5, 1.0) * np.exp(1j * rng.uniform(0, 2 * np.pi))
    sigma = rng.uniform(0.3, 0.5)
    phase = rng.uniform(0, 2 * np.pi)

    def f(h, x):
        env = _h_envelope(group, h, sigma, phase)
        return amp * env * np.exp(-np.pi * np.sum((x - c0) ** 2, -1) / width ** 2) \
            * np.exp(2j * np.pi * (x @ xi))
    return SliceField.from_function(f, h_grid, k_grid, group)
