"""Semi-direct products G = H x| K, their dual companions and the two
time-frequency groups built from them.

Points are numpy coordinate vectors.  Every descriptor callable
broadcasts over leading axes, so ``act(h, k)`` with ``h`` of shape
(..., dim_H) and ``k`` of shape (..., dim_K) works for single points and
for batches alike.  K and its dual are written additively except where a
descriptor overrides ``k_compose``/``w_compose`` (Weyl-Heisenberg).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

Array = np.ndarray


class InvalidElementError(ValueError):
    """A coordinate vector is not an element of the group it was passed to."""


def _add(a, b):
    return a + b


def _neg(a):
    return -a


def _ones(x):
    return np.ones(np.shape(x)[:-1])


@dataclass(frozen=True)
class GroupDescriptor:
    name: str
    dim_H: int
    dim_K: int
    act: Callable[[Array, Array], Array]
    dual_act: Callable[[Array, Array], Array]
    delta: Callable[[Array], Array]
    h_compose: Callable[[Array, Array], Array]
    h_inverse: Callable[[Array], Array]
    h_identity: Array
    k_identity: Array
    w_identity: Array
    haar_H_density: Callable[[Array], Array]
    haar_K_density: Callable[[Array], Array] = _ones
    k_compose: Callable[[Array, Array], Array] = _add
    k_inverse: Callable[[Array], Array] = _neg
    w_compose: Callable[[Array, Array], Array] = _add
    w_inverse: Callable[[Array], Array] = _neg
    validate_h: Callable[[Array], None] | None = None
    validate_k: Callable[[Array], None] | None = None
    dim_W: int | None = None

    @property
    def dim_hat(self) -> int:
        return self.dim_K if self.dim_W is None else self.dim_W

    def check_h(self, h) -> Array:
        h = np.asarray(h, dtype=float)
        if h.shape[-1:] != (self.dim_H,):
            raise InvalidElementError(f"{self.name}: H point needs {self.dim_H} coordinate(s)")
        if not np.all(np.isfinite(h)):
            raise InvalidElementError(f"{self.name}: non-finite H coordinate")
        if self.validate_h is not None:
            self.validate_h(h)
        return h

    def check_k(self, k) -> Array:
        k = np.asarray(k, dtype=float)
        if k.shape[-1:] != (self.dim_K,):
            raise InvalidElementError(f"{self.name}: K point needs {self.dim_K} coordinate(s)")
        if not np.all(np.isfinite(k)):
            raise InvalidElementError(f"{self.name}: non-finite K coordinate")
        if self.validate_k is not None:
            self.validate_k(k)
        return k

    def check_w(self, w) -> Array:
        w = np.asarray(w, dtype=float)
        if w.shape[-1:] != (self.dim_hat,):
            raise InvalidElementError(f"{self.name}: frequency needs {self.dim_hat} coordinate(s)")
        if not np.all(np.isfinite(w)):
            raise InvalidElementError(f"{self.name}: non-finite frequency coordinate")
        return w


class GroupPoint(NamedTuple):
    h: Array
    k: Array


class TFPoint(NamedTuple):
    h: Array
    k: Array
    w: Array


class TFOtimesPoint(NamedTuple):
    h: Array
    t: Array
    k: Array
    w: Array


# --- G_tau -----------------------------------------------------------------

def compose(G: GroupDescriptor, g1: GroupPoint, g2: GroupPoint) -> GroupPoint:
    """(h, k)(h', k') = (hh', k + tau_h(k'))."""
    h1, k1 = G.check_h(g1[0]), G.check_k(g1[1])
    h2, k2 = G.check_h(g2[0]), G.check_k(g2[1])
    return GroupPoint(G.h_compose(h1, h2), G.k_compose(k1, G.act(h1, k2)))


def inverse(G: GroupDescriptor, g: GroupPoint) -> GroupPoint:
    h, k = G.check_h(g[0]), G.check_k(g[1])
    hi = G.h_inverse(h)
    return GroupPoint(hi, G.act(hi, G.k_inverse(k)))


def identity(G: GroupDescriptor) -> GroupPoint:
    return GroupPoint(np.array(G.h_identity, float), np.array(G.k_identity, float))


def act(G: GroupDescriptor, h, k) -> Array:
    return G.act(G.check_h(h), G.check_k(k))


def dual_act(G: GroupDescriptor, h, w) -> Array:
    """omega_h = omega o tau_{h^-1}, in frequency coordinates."""
    return G.dual_act(G.check_h(h), G.check_w(w))


def delta(G: GroupDescriptor, h) -> Array | float:
    d = G.delta(G.check_h(h))
    return float(d) if np.ndim(d) == 0 else d


# --- dual group G_hat_tau = H x| K^ ------------------------------------------

def hat_compose(G: GroupDescriptor, p1: GroupPoint, p2: GroupPoint) -> GroupPoint:
    """(t, w)(t', w') = (tt', w + w'_t)."""
    t1, w1 = G.check_h(p1[0]), G.check_w(p1[1])
    t2, w2 = G.check_h(p2[0]), G.check_w(p2[1])
    return GroupPoint(G.h_compose(t1, t2), G.w_compose(w1, G.dual_act(t1, w2)))


# --- G_{tau x tau^} ------------------------------------------------------------

def tf_compose(G: GroupDescriptor, p1: TFPoint, p2: TFPoint) -> TFPoint:
    h1, k1, w1 = G.check_h(p1[0]), G.check_k(p1[1]), G.check_w(p1[2])
    h2, k2, w2 = G.check_h(p2[0]), G.check_k(p2[1]), G.check_w(p2[2])
    return TFPoint(G.h_compose(h1, h2),
                   G.k_compose(k1, G.act(h1, k2)),
                   G.w_compose(w1, G.dual_act(h1, w2)))


def tf_inverse(G: GroupDescriptor, p: TFPoint) -> TFPoint:
    h, k, w = G.check_h(p[0]), G.check_k(p[1]), G.check_w(p[2])
    hi = G.h_inverse(h)
    return TFPoint(hi, G.act(hi, G.k_inverse(k)), G.dual_act(hi, G.w_inverse(w)))


def tf_identity(G: GroupDescriptor) -> TFPoint:
    return TFPoint(np.array(G.h_identity, float), np.array(G.k_identity, float),
                   np.array(G.w_identity, float))


# --- G_{tau (x) tau^} --------------------------------------------------------

def tf_otimes_compose(G: GroupDescriptor, p1: TFOtimesPoint, p2: TFOtimesPoint) -> TFOtimesPoint:
    """(h, t, k, w)(h', t', k', w') = (hh', tt', k + k'^h, w + w'_t)."""
    h1, t1, k1, w1 = G.check_h(p1[0]), G.check_h(p1[1]), G.check_k(p1[2]), G.check_w(p1[3])
    h2, t2, k2, w2 = G.check_h(p2[0]), G.check_h(p2[1]), G.check_k(p2[2]), G.check_w(p2[3])
    return TFOtimesPoint(G.h_compose(h1, h2), G.h_compose(t1, t2),
                         G.k_compose(k1, G.act(h1, k2)),
                         G.w_compose(w1, G.dual_act(t1, w2)))


def tf_otimes_identity(G: GroupDescriptor) -> TFOtimesPoint:
    e = np.array(G.h_identity, float)
    return TFOtimesPoint(e, e.copy(), np.array(G.k_identity, float), np.array(G.w_identity, float))


def phi_iso(p_tau: GroupPoint, p_hat: GroupPoint) -> TFOtimesPoint:
    """G_tau x G_hat_tau -> G_{tau (x) tau^}: (h, k, t, w) -> (h, t, k, w)."""
    return TFOtimesPoint(np.asarray(p_tau[0]), np.asarray(p_hat[0]),
                         np.asarray(p_tau[1]), np.asarray(p_hat[1]))


def phi_iso_inverse(p: TFOtimesPoint) -> tuple[GroupPoint, GroupPoint]:
    return GroupPoint(p.h, p.k), GroupPoint(p.t, p.w)
