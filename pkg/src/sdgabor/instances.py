"""Concrete groups: the affine group ax+b, the Euclidean motion group E(2)
and a finite Weyl-Heisenberg model over Z_N."""

from __future__ import annotations

import numpy as np

from .groups import GroupDescriptor, InvalidElementError

TWO_PI = 2.0 * np.pi


# --- affine: H = (0, inf) multiplicative, K = R -------------------------------

def _affine_validate_h(h):
    if np.any(h <= 0):
        raise InvalidElementError("affine: scale a must be > 0")


def make_affine() -> GroupDescriptor:
    """tau_a(x) = a x, omega_a = omega / a, delta(a) = 1/a, dh = da / a."""
    return GroupDescriptor(
        name="affine",
        dim_H=1,
        dim_K=1,
        act=lambda h, k: h * k,
        dual_act=lambda h, w: w / h,
        delta=lambda h: 1.0 / h[..., 0],
        h_compose=lambda a, b: a * b,
        h_inverse=lambda a: 1.0 / a,
        h_identity=np.array([1.0]),
        k_identity=np.array([0.0]),
        w_identity=np.array([0.0]),
        haar_H_density=lambda h: 1.0 / h[..., 0],
        validate_h=_affine_validate_h,
    )


# --- E(2): H = SO(2) as an angle, K = R^2 --------------------------------------

def rotate(theta, x):
    """Rotate the trailing 2-vectors of ``x`` by ``theta[..., 0]``."""
    c, s = np.cos(theta[..., 0]), np.sin(theta[..., 0])
    x0, x1 = x[..., 0], x[..., 1]
    return np.stack([c * x0 - s * x1, s * x0 + c * x1], axis=-1)


def _reduce_angle(theta):
    out = np.mod(theta, TWO_PI)
    # mod can round up to exactly 2*pi for tiny negative inputs
    return np.where(out >= TWO_PI, 0.0, out)


def make_e2() -> GroupDescriptor:
    """Rigid motions of the plane.  The dual action is rotation of the
    frequency vector, since <R^-1 x, w> = <x, R w> for orthogonal R."""
    return GroupDescriptor(
        name="e2",
        dim_H=1,
        dim_K=2,
        act=rotate,
        dual_act=rotate,
        delta=lambda h: np.ones(np.shape(h)[:-1]),
        h_compose=lambda a, b: _reduce_angle(a + b),
        h_inverse=lambda a: _reduce_angle(-a),
        h_identity=np.array([0.0]),
        k_identity=np.zeros(2),
        w_identity=np.zeros(2),
        haar_H_density=lambda h: np.full(np.shape(h)[:-1], 1.0 / TWO_PI),
    )


# --- Weyl-Heisenberg over K0 = Z_N --------------------------------------------
#
# H = Z_N (coordinate s), K = Z_N^ x T with points (m, Re z, Im z), and the
# dual of K is Z_N x Z with points (k, n).  Characters of Z_N are exact
# N-th roots of unity, omega_m(s) = exp(2 pi i m s / N).

def _unit(z):
    return z / np.abs(z)


def _split(k):
    return k[..., 0], k[..., 1] + 1j * k[..., 2]


def _join(m, z):
    return np.stack([m, z.real, z.imag], axis=-1)


def make_weyl_heisenberg(N: int) -> GroupDescriptor:
    if int(N) != N or N < 2:
        raise ValueError(f"Weyl-Heisenberg model needs integer N >= 2, got {N}")
    N = int(N)

    def char(m, s):
        return np.exp(2j * np.pi * np.mod(m * s, N) / N)

    def act(h, k):
        m, z = _split(k)
        return _join(m, _unit(z * char(m, h[..., 0])))

    def k_compose(k1, k2):
        m1, z1 = _split(k1)
        m2, z2 = _split(k2)
        return _join(np.mod(m1 + m2, N), _unit(z1 * z2))

    def k_inverse(k):
        m, z = _split(k)
        return _join(np.mod(-m, N), np.conj(_unit(z)))

    def dual_act(h, w):
        k, n = w[..., 0], w[..., 1]
        return np.stack([np.mod(k - n * h[..., 0], N), n], axis=-1)

    def w_compose(w1, w2):
        return np.stack([np.mod(w1[..., 0] + w2[..., 0], N), w1[..., 1] + w2[..., 1]], axis=-1)

    def w_inverse(w):
        return np.stack([np.mod(-w[..., 0], N), -w[..., 1]], axis=-1)

    def validate_h(h):
        if np.any(h != np.round(h)) or np.any(h < 0) or np.any(h >= N):
            raise InvalidElementError(f"weyl-heisenberg: s must be a residue mod {N}")

    def validate_k(k):
        m, z = _split(k)
        if np.any(m != np.round(m)) or np.any(m < 0) or np.any(m >= N):
            raise InvalidElementError(f"weyl-heisenberg: m must be a residue mod {N}")
        if np.any(np.abs(np.abs(z) - 1.0) > 1e-9):
            raise InvalidElementError("weyl-heisenberg: z must have unit modulus")

    return GroupDescriptor(
        name=f"weyl-heisenberg:{N}",
        dim_H=1,
        dim_K=3,
        dim_W=2,
        act=act,
        dual_act=dual_act,
        delta=lambda h: np.ones(np.shape(h)[:-1]),
        h_compose=lambda a, b: np.mod(a + b, N),
        h_inverse=lambda a: np.mod(-a, N),
        h_identity=np.array([0.0]),
        k_identity=np.array([0.0, 1.0, 0.0]),
        w_identity=np.array([0.0, 0.0]),
        haar_H_density=lambda h: np.ones(np.shape(h)[:-1]),
        haar_K_density=lambda k: np.ones(np.shape(k)[:-1]),
        k_compose=k_compose,
        k_inverse=k_inverse,
        w_compose=w_compose,
        w_inverse=w_inverse,
        validate_h=validate_h,
        validate_k=validate_k,
    )


def wh_pairing(N: int, k_point, w_point) -> complex:
    """<(m, z), (k, n)> = exp(2 pi i m k / N) z^n."""
    m, z = _split(np.asarray(k_point, float))
    k, n = np.asarray(w_point, float)[..., 0], np.asarray(w_point, float)[..., 1]
    return np.exp(2j * np.pi * np.mod(m * k, N) / N) * z ** n


def get_group(name: str) -> GroupDescriptor:
    """Look up a group by config name: "affine", "e2" or "weyl-heisenberg:N"."""
    key = name.strip().lower()
    if key == "affine":
        return make_affine()
    if key in ("e2", "e(2)"):
        return make_e2()
    if key.startswith("weyl-heisenberg"):
        _, _, n = key.partition(":")
        return make_weyl_heisenberg(int(n) if n else 8)
    raise KeyError(f"unknown group {name!r}")


# --- sampling and comparison, for property checks ----------------------------------

def random_h(G: GroupDescriptor, rng: np.random.Generator, n: int) -> np.ndarray:
    if G.name == "affine":
        return np.exp(rng.uniform(-2.0, 2.0, (n, 1)))
    if G.name == "e2":
        return rng.uniform(0.0, TWO_PI, (n, 1))
    N = _wh_order(G)
    return rng.integers(0, N, (n, 1)).astype(float)


def random_k(G: GroupDescriptor, rng: np.random.Generator, n: int) -> np.ndarray:
    if G.name.startswith("weyl-heisenberg"):
        N = _wh_order(G)
        m = rng.integers(0, N, n).astype(float)
        z = np.exp(1j * rng.uniform(0, TWO_PI, n))
        return _join(m, z)
    return rng.uniform(-5.0, 5.0, (n, G.dim_K))


def random_w(G: GroupDescriptor, rng: np.random.Generator, n: int) -> np.ndarray:
    if G.name.startswith("weyl-heisenberg"):
        N = _wh_order(G)
        return np.stack([rng.integers(0, N, n), rng.integers(-5, 6, n)], axis=-1).astype(float)
    return rng.uniform(-5.0, 5.0, (n, G.dim_hat))


def _wh_order(G: GroupDescriptor) -> int:
    return int(G.name.partition(":")[2])


def h_distance(G: GroupDescriptor, a, b) -> np.ndarray:
    """Coordinate distance on H; E(2) angles and Z_N residues wrap around."""
    d = np.abs(np.asarray(a, float) - np.asarray(b, float))[..., 0]
    if G.name == "e2":
        return np.minimum(d, TWO_PI - d)
    if G.name.startswith("weyl-heisenberg"):
        return np.minimum(d, _wh_order(G) - d)
    return d


def k_distance(G: GroupDescriptor, a, b) -> np.ndarray:
    a, b = np.asarray(a, float), np.asarray(b, float)
    if G.name.startswith("weyl-heisenberg"):
        N = _wh_order(G)
        dm = np.abs(a[..., 0] - b[..., 0])
        dm = np.minimum(dm, N - dm)
        return np.maximum(dm, np.abs(a[..., 1:] - b[..., 1:]).max(axis=-1))
    return np.abs(a - b).max(axis=-1)


def w_distance(G: GroupDescriptor, a, b) -> np.ndarray:
    a, b = np.asarray(a, float), np.asarray(b, float)
    if G.name.startswith("weyl-heisenberg"):
        N = _wh_order(G)
        dk = np.abs(a[..., 0] - b[..., 0])
        return np.maximum(np.minimum(dk, N - dk), np.abs(a[..., 1] - b[..., 1]))
    return np.abs(a - b).max(axis=-1)
