"""Slow reference implementations of the transforms, one shift at a time.

Each value comes from ``stft_oracle`` at the transformed point, with the
prefactor written out from the definition.  Nothing here shares code with
the batched kernels in ``transforms``; the two routes are compared in the
test suite.
"""

from __future__ import annotations

import numpy as np

from .lca import SampledSlice, SampledWindow, stft_oracle
from .transforms import SliceField


def _delta(G, h) -> float:
    return float(G.delta(np.array([h])))


def reference_v_kind(f: SliceField, u: SampledWindow, kind: str, w_grid) -> np.ndarray:
    """V, Vdag, A or B values, shape (nH, *K-shape, *K^-shape)."""
    G = f.group
    knodes = f.k_grid.nodes()
    wnodes = w_grid.nodes()
    out = np.empty((f.h_grid.count, f.k_grid.size, w_grid.size), dtype=complex)
    for i, h in enumerate(f.h_grid.points):
        hv = np.array([h])
        d = _delta(G, h)
        fh = SampledSlice(f.values[i], f.k_grid)
        if kind == "V":
            pre, freqs = d ** 0.5, wnodes
        elif kind == "Vdag":
            pre, freqs = d ** 0.5, np.array([G.dual_act(hv, w) for w in wnodes])
        elif kind == "A":
            pre, freqs = 1.0, wnodes
        elif kind == "B":
            pre, freqs = d, np.array([G.dual_act(hv, w) for w in wnodes])
        else:
            raise ValueError(kind)
        for j, k in enumerate(knodes):
            s = G.act(hv, k) if kind in ("Vdag", "A") else k
            out[i, j] = pre * stft_oracle(fh, u, s, freqs)
    return out.reshape((f.h_grid.count,) + f.k_grid.shape + w_grid.shape)


def reference_g_kind(f: SliceField, g: SliceField, kind: str, w_grid) -> np.ndarray:
    """G or Gdag values in (h, k, t, w) order."""
    G = f.group
    knodes = f.k_grid.nodes()
    wnodes = w_grid.nodes()
    nH = f.h_grid.count
    out = np.empty((nH, f.k_grid.size, nH, w_grid.size), dtype=complex)
    for i, h in enumerate(f.h_grid.points):
        gh = g.window(i)
        for j, t in enumerate(f.h_grid.points):
            ft = SampledSlice(f.values[j], f.k_grid)
            if kind == "G":
                pre, freqs = _delta(G, t), wnodes
            else:
                pre = _delta(G, h) ** -0.5 * _delta(G, t) ** 1.5
                freqs = np.array([G.dual_act(np.array([t]), w) for w in wnodes])
            for n, k in enumerate(knodes):
                s = G.act(np.array([h]), k) if kind == "Gdag" else k
                out[i, n, j] = pre * stft_oracle(ft, gh, s, freqs)
    return out.reshape((nH,) + f.k_grid.shape + (nH,) + w_grid.shape)
