"""Gabor transforms on L^2(G_tau) for G_tau = H x| K, their inverses and
the Plancherel / orthogonality checks.

Every transform is a classical STFT of one H-slice, evaluated at points
moved by the actions of H:

    kind   window   signal   shift      frequency    prefactor
    V      u        f_h      k          w            delta(h)^1/2
    Vdag   u        f_h      k^h        w_h          delta(h)^1/2
    A      u        f_h      k^h        w            1
    B      u        f_h      k          w_h          delta(h)
    G      g_h      f_t      k          w            delta(t)
    Gdag   g_h      f_t      k^h        w_t          delta(h)^-1/2 delta(t)^3/2

Moved points rarely land on grid nodes.  In ``"oracle"`` mode they are
summed directly (batched quadrature); ``"interp"`` mode interpolates the
fast on-grid field instead (tensor-product cubic splines), after removing
the exp(-2 pi i w.s) phase ramp so the interpolant is smooth.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np
from scipy.interpolate import make_interp_spline

from .grids import Grid1D, ProductGrid, as_product, measure_weights
from .groups import GroupDescriptor
from .lca import (
    FreqKernel,
    GridMismatchError,
    SampledSlice,
    SampledWindow,
    stft_at,
    synthesize_at,
    target_points,
    targets_from_points,
    window_matrix,
)

V_KINDS = ("V", "Vdag", "A", "B")
G_KINDS = ("G", "Gdag")
MODES = ("oracle", "interp")

# largest 4-D field materialized by the G kinds; above it only t = h is kept
DEFAULT_CAP = 2 ** 24
DEGENERATE_NORM_SQ = 1e-12
# spline degree used by "interp" mode (1 gives multilinear interpolation)
INTERP_ORDER = 3


class KindMismatchError(ValueError):
    """A field of one transform kind was passed where another was needed."""


class DegenerateWindowSliceError(ValueError):
    """Some window slice g_h has (numerically) zero norm."""


class ZeroSignalError(ValueError):
    """The signal has zero norm, so a normalized ratio is undefined."""


@dataclass(frozen=True, eq=False)
class SliceField:
    """f on an H-grid x K-grid, values of shape (nH, *K-shape).

    ``func(h, k)`` optionally gives exact values for a scalar ``h`` and
    points ``k`` of shape (..., dim_K); windows use it off-grid.
    """

    values: np.ndarray
    h_grid: Grid1D
    k_grid: ProductGrid
    group: GroupDescriptor
    func: Callable[[float, np.ndarray], np.ndarray] | None = None

    def __post_init__(self):
        kg = as_product(self.k_grid)
        object.__setattr__(self, "k_grid", kg)
        if kg.ndim != self.group.dim_K:
            raise GridMismatchError(f"group {self.group.name!r} needs a {self.group.dim_K}-D K-grid")
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (self.h_grid.count,) + kg.shape:
            raise GridMismatchError(
                f"values {vals.shape} do not match grids {(self.h_grid.count,) + kg.shape}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("field values must be finite")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, func, h_grid: Grid1D, k_grid, group: GroupDescriptor) -> "SliceField":
        kg = as_product(k_grid)
        nodes = kg.nodes()
        vals = np.stack([np.asarray(func(h, nodes), dtype=complex).reshape(kg.shape)
                         for h in h_grid.points])
        return cls(vals, h_grid, kg, group, func)

    @property
    def h_points(self) -> np.ndarray:
        return self.h_grid.points[:, None]

    def delta(self) -> np.ndarray:
        return np.asarray(self.group.delta(self.h_points), dtype=float)

    def slice(self, i: int) -> SampledSlice:
        return SampledSlice(self.values[i], self.k_grid)

    def window(self, i: int) -> SampledWindow:
        h = self.h_grid.points[i]
        fn = None if self.func is None else (lambda pts, _f=self.func, _h=h: _f(_h, pts))
        return SampledWindow(self.values[i], self.k_grid, fn)

    def slice_norms_sq(self) -> np.ndarray:
        w = self.k_grid.weights()
        axes = tuple(range(1, self.values.ndim))
        return np.sum(w * np.abs(self.values) ** 2, axis=axes)

    def tau_weights(self) -> np.ndarray:
        return measure_weights(self.group, (self.h_grid,) + self.k_grid.axes, "G_tau").weights

    @property
    def norm_sq(self) -> float:
        """||f||^2 in L^2(G_tau)."""
        return float(np.sum(self.tau_weights() * np.abs(self.values) ** 2))

    def inner(self, other: "SliceField") -> complex:
        _check_same_grids(self, other)
        return complex(np.sum(self.tau_weights() * self.values * np.conj(other.values)))


@dataclass(frozen=True, eq=False)
class GaborField:
    """V, Vdag, A or B field; values of shape (nH, *K-shape, *K^-shape)."""

    values: np.ndarray
    h_grid: Grid1D
    k_grid: ProductGrid
    w_grid: ProductGrid
    kind: str
    group: GroupDescriptor
    mode: str = "oracle"

    def __post_init__(self):
        if self.kind not in V_KINDS:
            raise KindMismatchError(f"GaborField kind must be one of {V_KINDS}, got {self.kind!r}")
        expected = (self.h_grid.count,) + self.k_grid.shape + self.w_grid.shape
        if self.values.shape != expected:
            raise GridMismatchError(f"values {self.values.shape} != {expected}")

    def target_weights(self) -> np.ndarray:
        axes = (self.h_grid,) + self.k_grid.axes + self.w_grid.axes
        return measure_weights(self.group, axes, "G_txw").weights


@dataclass(frozen=True, eq=False)
class OtimesGaborField:
    """G or Gdag field.  Full values have index order (h, k, t, w); a
    diagonal field keeps only t = h, with shape (nH, *K-shape, *K^-shape)."""

    values: np.ndarray
    h_grid: Grid1D
    k_grid: ProductGrid
    w_grid: ProductGrid
    kind: str
    group: GroupDescriptor
    diagonal: bool = False
    mode: str = "oracle"

    def __post_init__(self):
        if self.kind not in G_KINDS:
            raise KindMismatchError(f"OtimesGaborField kind must be one of {G_KINDS}, got {self.kind!r}")
        nH = self.h_grid.count
        if self.diagonal:
            expected = (nH,) + self.k_grid.shape + self.w_grid.shape
        else:
            expected = (nH,) + self.k_grid.shape + (nH,) + self.w_grid.shape
        if self.values.shape != expected:
            raise GridMismatchError(f"values {self.values.shape} != {expected}")

    def diagonal_values(self) -> np.ndarray:
        if self.diagonal:
            return self.values
        d = self.k_grid.ndim
        idx = np.arange(self.h_grid.count)
        v = np.moveaxis(self.values, 1 + d, 1)  # (h, t, k, w)
        return v[idx, idx]

    def target_weights(self) -> np.ndarray:
        axes = (self.h_grid,) + self.k_grid.axes + (self.h_grid,) + self.w_grid.axes
        return measure_weights(self.group, axes, "G_totimes").weights


# --- shared machinery ------------------------------------------------------------

def _check_same_grids(f: SliceField, g) -> None:
    if f.h_grid != g.h_grid or f.k_grid != g.k_grid:
        raise GridMismatchError("operands must share the H- and K-grids")


def _check_window(f: SliceField, u: SampledWindow) -> None:
    if u.grid != f.k_grid:
        raise GridMismatchError("window and signal must share the K-grid")


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def _moved_shifts(G, h, k_grid: ProductGrid, moved: bool) -> np.ndarray | None:
    if not moved:
        return None
    return G.act(np.atleast_1d(h)[None, :], k_grid.nodes())


def _moved_targets(G, h, w_grid: ProductGrid, moved: bool):
    if not moved:
        return tuple(a.points for a in w_grid.axes)
    pts = G.dual_act(np.atleast_1d(h)[None, :], w_grid.nodes())
    return targets_from_points(pts, w_grid.shape)


def _slice_stft(v: np.ndarray, k_grid: ProductGrid, w_grid: ProductGrid, u: SampledWindow,
                shifts, targets, mode: str, U: np.ndarray | None = None,
                kernel: FreqKernel | None = None) -> np.ndarray:
    """V_u v at (shift, target) pairs; returns (*K-shape, *K^-shape)."""
    out_shape = k_grid.shape + w_grid.shape
    grid_targets = tuple(a.points for a in w_grid.axes)
    on_grid = shifts is None and isinstance(targets, tuple) and all(
        t is g or np.array_equal(t, g) for t, g in zip(targets, grid_targets))
    if on_grid or mode == "oracle":
        sh = k_grid.nodes() if shifts is None else shifts
        return stft_at(v, k_grid, u, sh, targets, U, kernel).reshape(out_shape)
    # interp: demodulated fast field, then separable spline interpolation
    nodes = k_grid.nodes()
    wn = w_grid.nodes()
    fast = stft_at(v, k_grid, u, nodes, grid_targets).reshape(k_grid.size, w_grid.size)
    fast = fast * np.exp(2j * np.pi * nodes @ wn.T)
    sh = nodes if shifts is None else shifts
    tp = target_points(targets)
    vals = interp_matrix(k_grid, sh) @ fast @ interp_matrix(w_grid, tp).T
    vals = vals * np.exp(-2j * np.pi * sh @ tp.T)
    return vals.reshape(out_shape)


def interp_matrix(grid: ProductGrid, points: np.ndarray, order: int = INTERP_ORDER) -> np.ndarray:
    """Dense operator mapping grid values to spline-interpolated values at
    ``points`` (P, d); rows of points outside the grid are zero."""
    rows = np.ones((len(points), 1))
    for a, ax in enumerate(grid.axes):
        x = points[:, a]
        spline = make_interp_spline(ax.points, np.eye(ax.count), k=order)
        inside = (x >= ax.points[0]) & (x <= ax.points[-1])
        W = np.zeros((len(x), ax.count))
        W[inside] = spline(x[inside])
        rows = (rows[:, :, None] * W[:, None, :]).reshape(len(x), -1)
    return rows


_V_SPEC = {  # kind -> (moved shift, moved frequency, delta exponent)
    "V": (False, False, 0.5),
    "Vdag": (True, True, 0.5),
    "A": (True, False, 0.0),
    "B": (False, True, 1.0),
}


def _v_field(f: SliceField, u: SampledWindow, kind: str, w_grid, mode: str) -> GaborField:
    _check_window(f, u)
    _check_mode(mode)
    G = f.group
    wg = f.k_grid if w_grid is None else as_product(w_grid)
    if wg.ndim != f.k_grid.ndim:
        raise GridMismatchError("frequency grid dimension differs from K-grid")
    move_k, move_w, power = _V_SPEC[kind]
    deltas = f.delta()
    U_fixed = None if move_k else window_matrix(u, f.k_grid, f.k_grid.nodes())
    out = np.empty((f.h_grid.count,) + f.k_grid.shape + wg.shape, dtype=complex)
    for i, h in enumerate(f.h_grid.points):
        shifts = _moved_shifts(G, h, f.k_grid, move_k)
        targets = _moved_targets(G, h, wg, move_w)
        U = U_fixed if (U_fixed is not None and mode == "oracle") else None
        out[i] = deltas[i] ** power * _slice_stft(f.values[i], f.k_grid, wg, u, shifts, targets, mode, U)
    return GaborField(out, f.h_grid, f.k_grid, wg, kind, G, mode)


def v_transform(f: SliceField, u: SampledWindow, w_grid=None) -> GaborField:
    """delta(h)^1/2 V_u f_h(k, w) at every grid node.  ``w_grid`` defaults
    to the K-grid axes."""
    return _v_field(f, u, "V", w_grid, "oracle")


def v_dagger_transform(f: SliceField, u: SampledWindow, w_grid=None, mode: str = "oracle") -> GaborField:
    """delta(h)^1/2 V_u f_h(k^h, w_h)."""
    return _v_field(f, u, "Vdag", w_grid, mode)


def variant_transform(f: SliceField, u: SampledWindow, kind: str, w_grid=None,
                      mode: str = "oracle") -> GaborField:
    """A: V_u f_h(k^h, w).  B: delta(h) V_u f_h(k, w_h)."""
    if kind not in ("A", "B"):
        raise KindMismatchError(f"variant kind must be 'A' or 'B', got {kind!r}")
    return _v_field(f, u, kind, w_grid, mode)


def _t_kernels(f: SliceField, wg: ProductGrid) -> list[FreqKernel]:
    """Forward kernels at w_t for every H-node t (Gdag frequencies)."""
    return [FreqKernel(f.k_grid, _moved_targets(f.group, t, wg, True)) for t in f.h_grid.points]


def _g_block(f: SliceField, g: SliceField, kind: str, wg: ProductGrid, i: int,
             t_idx, mode: str, kernels: list[FreqKernel] | None = None) -> np.ndarray:
    """G-kind values at h = h_i for every t in ``t_idx``; shape
    (len(t_idx), *K-shape, *K^-shape)."""
    G = f.group
    t_idx = list(t_idx)
    h = f.h_grid.points[i]
    deltas = f.delta()
    kg = f.k_grid
    if not np.any(g.values[i]):
        # a vanishing window slice is allowed here; inversion rejects it
        return np.zeros((len(t_idx),) + kg.shape + wg.shape, dtype=complex)
    gh = g.window(i)
    if kind == "G":
        # every t shares the on-grid points, so batch the whole block
        U = window_matrix(gh, kg, kg.nodes())
        P = np.conj(U)[None] * (kg.weights() * f.values[t_idx])[:, None]
        out = FreqKernel(kg, tuple(a.points for a in wg.axes)).apply(P)
        pre = deltas[t_idx].reshape((-1,) + (1,) * (out.ndim - 1))
        return (pre * out).reshape((len(t_idx),) + kg.shape + wg.shape)
    shifts = _moved_shifts(G, h, kg, True)
    U = window_matrix(gh, kg, shifts) if mode == "oracle" else None
    out = np.empty((len(t_idx),) + kg.shape + wg.shape, dtype=complex)
    for n, j in enumerate(t_idx):
        targets = _moved_targets(G, f.h_grid.points[j], wg, True)
        kern = None if kernels is None else kernels[j]
        pre = deltas[i] ** -0.5 * deltas[j] ** 1.5
        out[n] = pre * _slice_stft(f.values[j], kg, wg, gh, shifts, targets, mode, U, kern)
    return out


def _g_field(f: SliceField, g: SliceField, kind: str, w_grid, mode: str, cap: int,
             diagonal: bool | None) -> OtimesGaborField:
    _check_same_grids(f, g)
    _check_mode(mode)
    wg = f.k_grid if w_grid is None else as_product(w_grid)
    nH = f.h_grid.count
    full_size = nH * nH * f.k_grid.size * wg.size
    if diagonal is None:
        diagonal = full_size > cap
    d = f.k_grid.ndim
    if diagonal:
        vals = np.stack([_g_block(f, g, kind, wg, i, [i], mode)[0] for i in range(nH)])
    else:
        kernels = _t_kernels(f, wg) if kind == "Gdag" and mode == "oracle" else None
        blocks = np.stack([_g_block(f, g, kind, wg, i, range(nH), mode, kernels)
                           for i in range(nH)])
        vals = np.moveaxis(blocks, 1, 1 + d)  # (h, t, k, w) -> (h, k, t, w)
    return OtimesGaborField(vals, f.h_grid, f.k_grid, wg, kind, f.group, diagonal, mode)


def g_transform(f: SliceField, g: SliceField, w_grid=None, cap: int = DEFAULT_CAP,
                diagonal: bool | None = None) -> OtimesGaborField:
    """delta(t) V_{g_h} f_t(k, w).  The full field is kept when it has at
    most ``cap`` entries, else only t = h (override with ``diagonal``)."""
    return _g_field(f, g, "G", w_grid, "oracle", cap, diagonal)


def g_dagger_transform(f: SliceField, g: SliceField, w_grid=None, mode: str = "oracle",
                       cap: int = DEFAULT_CAP, diagonal: bool | None = None) -> OtimesGaborField:
    """delta(h)^-1/2 delta(t)^3/2 V_{g_h} f_t(k^h, w_t)."""
    return _g_field(f, g, "Gdag", w_grid, mode, cap, diagonal)


# --- inversion -------------------------------------------------------------------

def _synth_slice(Fh: np.ndarray, k_grid: ProductGrid, w_grid: ProductGrid, window: SampledWindow,
                 shifts, targets, U=None) -> np.ndarray:
    sh = k_grid.nodes() if shifts is None else shifts
    if isinstance(targets, tuple):
        Fm = Fh.reshape((k_grid.size,) + w_grid.shape)
        tw = w_grid.weights()
    else:
        Fm = Fh.reshape(k_grid.size, w_grid.size)
        tw = w_grid.weights().ravel()
    return synthesize_at(Fm, k_grid, window, sh, k_grid.weights().ravel(), targets, tw, U)


def _v_invert(F: GaborField, u: SampledWindow, kind: str) -> SliceField:
    if F.kind != kind:
        raise KindMismatchError(f"expected a {kind} field, got {F.kind}")
    if u.grid != F.k_grid:
        raise GridMismatchError("window and field must share the K-grid")
    G = F.group
    move_k, move_w, _ = _V_SPEC[kind]
    # prefactor exponent of delta(h) in front of ||u||^-2
    power = {"V": -0.5, "Vdag": -0.5, "A": -1.0, "B": 0.0}[kind]
    deltas = np.asarray(G.delta(F.h_grid.points[:, None]), dtype=float)
    U_fixed = None if move_k else window_matrix(u, F.k_grid, F.k_grid.nodes())
    out = np.empty((F.h_grid.count,) + F.k_grid.shape, dtype=complex)
    for i, h in enumerate(F.h_grid.points):
        shifts = _moved_shifts(G, h, F.k_grid, move_k)
        targets = _moved_targets(G, h, F.w_grid, move_w)
        rec = _synth_slice(F.values[i], F.k_grid, F.w_grid, u, shifts, targets, U_fixed)
        out[i] = deltas[i] ** power * rec / u.norm_sq
    return SliceField(out, F.h_grid, F.k_grid, G)


def v_inverse(F: GaborField, u: SampledWindow) -> SliceField:
    """delta(h)^-1/2 ||u||^-2 int V f(h, s, w) [rho(s, w) u] ds dw."""
    return _v_invert(F, u, "V")


def v_dagger_inverse(F: GaborField, u: SampledWindow) -> SliceField:
    """delta(h)^-1/2 ||u||^-2 int Vdag f(h, s, w) [rho(s^h, w_h) u] ds dw."""
    return _v_invert(F, u, "Vdag")


def variant_inverse(F: GaborField, u: SampledWindow, kind: str) -> SliceField:
    """A: delta(h)^-1 ||u||^-2 int A f [rho(s^h, w) u].
    B: ||u||^-2 int B f [rho(s, w_h) u]."""
    if kind not in ("A", "B"):
        raise KindMismatchError(f"variant kind must be 'A' or 'B', got {kind!r}")
    return _v_invert(F, u, kind)


def check_window_slices(g: SliceField, eps: float = DEGENERATE_NORM_SQ) -> np.ndarray:
    norms = g.slice_norms_sq()
    bad = np.nonzero(norms <= eps)[0]
    if bad.size:
        hs = ", ".join(f"{g.h_grid.points[b]:.6g}" for b in bad[:5])
        raise DegenerateWindowSliceError(
            f"||g_h||^2 <= {eps:g} at {bad.size} H-node(s), e.g. h = {hs}")
    return norms


def _g_invert(F: OtimesGaborField, g: SliceField, kind: str, eps: float) -> SliceField:
    if F.kind != kind:
        raise KindMismatchError(f"expected a {kind} field, got {F.kind}")
    if g.h_grid != F.h_grid or g.k_grid != F.k_grid:
        raise GridMismatchError("window and field must share grids")
    norms = check_window_slices(g, eps)
    G = F.group
    dagger = kind == "Gdag"
    diag = F.diagonal_values()
    deltas = np.asarray(G.delta(F.h_grid.points[:, None]), dtype=float)
    out = np.empty((F.h_grid.count,) + F.k_grid.shape, dtype=complex)
    for i, h in enumerate(F.h_grid.points):
        gh = g.window(i)
        shifts = _moved_shifts(G, h, F.k_grid, dagger)
        targets = _moved_targets(G, h, F.w_grid, dagger)
        rec = _synth_slice(diag[i], F.k_grid, F.w_grid, gh, shifts, targets)
        out[i] = rec / (norms[i] * deltas[i])
    return SliceField(out, F.h_grid, F.k_grid, G)


def g_inverse(F: OtimesGaborField, g: SliceField, eps: float = DEGENERATE_NORM_SQ) -> SliceField:
    """<g_h, g_h>^-1 delta(h)^-1 int G f(h, s, h, w) [rho(s, w) g_h] ds dw."""
    return _g_invert(F, g, "G", eps)


def g_dagger_inverse(F: OtimesGaborField, g: SliceField, eps: float = DEGENERATE_NORM_SQ) -> SliceField:
    """<g_h, g_h>^-1 delta(h)^-1 int Gdag f(h, s, h, w) [rho(s^h, w_h) g_h] ds dw."""
    return _g_invert(F, g, "Gdag", eps)


def relative_error(f: SliceField, f_rec: SliceField) -> float:
    """||f - f_rec|| / ||f|| in L^2(G_tau)."""
    _check_same_grids(f, f_rec)
    w = f.tau_weights()
    num = np.sum(w * np.abs(f.values - f_rec.values) ** 2)
    den = np.sum(w * np.abs(f.values) ** 2)
    if den == 0:
        raise ZeroSignalError("reference signal has zero norm")
    return float(np.sqrt(num / den))


# --- Plancherel and orthogonality ------------------------------------------------

def otimes_blocks(f: SliceField, g: SliceField, kind: str, w_grid, mode: str = "oracle"
                  ) -> Iterator[tuple[int, np.ndarray]]:
    """Yield (i, block) with block[t] = G-kind values at (h_i, ., t, .)."""
    wg = as_product(w_grid)
    kernels = _t_kernels(f, wg) if kind == "Gdag" and mode == "oracle" else None
    for i in range(f.h_grid.count):
        yield i, _g_block(f, g, kind, wg, i, range(f.h_grid.count), mode, kernels)


def _otimes_block_weights(F: OtimesGaborField, i: int) -> np.ndarray:
    """G_tau x G_hat_tau weights at h = h_i, laid out as (t, k, w)."""
    G = F.group
    hp = F.h_grid.points[:, None]
    dh = F.h_grid.weights * G.haar_H_density(hp)
    dl = np.asarray(G.delta(hp), dtype=float)
    kw = F.k_grid.weights() * G.haar_K_density(F.k_grid.nodes()).reshape(F.k_grid.shape)
    tw = dh / dl
    out = np.multiply.outer(np.multiply.outer(tw, kw), F.w_grid.weights())
    return dh[i] * dl[i] * out


def _field_inner(F1, F2, sources) -> complex:
    """<F1, F2> in the target measure; diagonal G fields are recomputed
    block by block from ``sources`` = (f1, g1, f2, g2)."""
    if F1.kind != F2.kind or type(F1) is not type(F2):
        raise KindMismatchError("fields must be of the same kind")
    if F1.values.shape != F2.values.shape:
        raise GridMismatchError("fields must share grids")
    if isinstance(F1, GaborField) or not (F1.diagonal or F2.diagonal):
        return complex(np.sum(F1.target_weights() * F1.values * np.conj(F2.values)))
    f1, g1, f2, g2 = sources
    total = 0.0 + 0.0j
    same = f1 is f2 and g1 is g2
    it2 = None if same else otimes_blocks(f2, g2, F2.kind, F2.w_grid, F2.mode)
    for i, b1 in otimes_blocks(f1, g1, F1.kind, F1.w_grid, F1.mode):
        b2 = b1 if same else next(it2)[1]
        w = _otimes_block_weights(F1, i).ravel()
        if same:
            total += np.dot(w, (b1.real ** 2 + b1.imag ** 2).ravel())
        else:
            total += np.vdot(b2.ravel(), w * b1.ravel())
    return complex(total)


def _window_inner(w1, w2) -> complex:
    if isinstance(w1, SliceField):
        return w1.inner(w2)
    if w1.grid != w2.grid:
        raise GridMismatchError("windows must share the K-grid")
    return complex(np.sum(w1.grid.weights() * w1.values * np.conj(w2.values)))


def _window_norm_sq(w) -> float:
    return w.norm_sq


def plancherel_ratio(F, f: SliceField, window) -> float:
    """||F||^2 / (||window||^2 ||f||^2_{G_tau}) in the kind's target measure:
    dh dk dw for V kinds, G_tau x G_hat_tau for G kinds."""
    if isinstance(F, GaborField) and not isinstance(window, SampledWindow):
        raise KindMismatchError("V kinds take a SampledWindow")
    if isinstance(F, OtimesGaborField) and not isinstance(window, SliceField):
        raise KindMismatchError("G kinds take a SliceField window")
    fn = f.norm_sq
    if fn == 0:
        raise ZeroSignalError("signal has zero norm")
    num = _field_inner(F, F, (f, window, f, window)).real
    return float(num / (_window_norm_sq(window) * fn))


def orthogonality_inner(F1, F2, w1, w2, f1: SliceField, f2: SliceField) -> tuple[complex, complex]:
    """(<F1, F2>, <w2, w1><f1, f2>) with F_i built from (f_i, w_i)."""
    lhs = _field_inner(F1, F2, (f1, w1, f2, w2))
    rhs = _window_inner(w2, w1) * f1.inner(f2)
    return lhs, rhs
