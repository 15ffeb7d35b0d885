import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sdgabor import groups as gc
from sdgabor.groups import GroupPoint, InvalidElementError, TFOtimesPoint, TFPoint
from sdgabor.instances import (
    get_group,
    h_distance,
    k_distance,
    make_affine,
    make_e2,
    make_weyl_heisenberg,
    random_h,
    random_k,
    random_w,
    w_distance,
    wh_pairing,
)

A = make_affine()
E2 = make_e2()
WH = make_weyl_heisenberg(8)


def gp(h, k):
    return GroupPoint(np.atleast_1d(np.asarray(h, float)), np.atleast_1d(np.asarray(k, float)))


# --- group_core examples --------------------------------------------------------

def test_affine_compose():
    p = gc.compose(A, gp(2, 3), gp(4, 5))
    assert np.allclose(p.h, [8]) and np.allclose(p.k, [13])


def test_affine_left_identity():
    p = gc.compose(A, gp(1, 0), gp(2.5, -7))
    assert np.allclose(p.h, [2.5]) and np.allclose(p.k, [-7])


def test_e2_compose():
    p = gc.compose(E2, gp(np.pi / 2, [1, 0]), gp(np.pi / 2, [1, 0]))
    assert np.allclose(p.h, [np.pi]) and np.allclose(p.k, [1, 1])


def test_affine_inverse():
    p = gc.inverse(A, gp(2, 3))
    assert np.allclose(p.h, [0.5]) and np.allclose(p.k, [-1.5])


def test_identity_inverse():
    for G in (A, E2, WH):
        e = gc.identity(G)
        inv = gc.inverse(G, e)
        assert np.allclose(inv.h, e.h) and np.allclose(inv.k, e.k)


def test_e2_inverse():
    g = gp(np.pi / 2, [1, 0])
    inv = gc.inverse(E2, g)
    assert np.allclose(inv.h, [3 * np.pi / 2]) and np.allclose(inv.k, [0, 1])
    e = gc.compose(E2, g, inv)
    assert h_distance(E2, e.h, [0.0]) < 1e-12 and np.allclose(e.k, 0, atol=1e-12)


def test_act_examples():
    assert np.allclose(gc.act(A, [2], [3]), [6])
    assert np.allclose(gc.act(E2, [np.pi / 2], [1, 0]), [0, 1])
    assert np.allclose(gc.act(A, A.h_identity, [4.2]), [4.2])


def test_dual_act_examples():
    assert np.allclose(gc.dual_act(A, [2], [4]), [2])
    assert np.allclose(gc.dual_act(A, A.h_identity, [4]), [4])
    assert np.allclose(gc.dual_act(WH, [3], [5, 2]), [(5 - 6) % 8, 2])


def test_delta_examples():
    assert gc.delta(A, [2]) == 0.5
    assert gc.delta(A, A.h_identity) == 1.0
    assert np.allclose(gc.delta(E2, [[0.3], [2.0], [6.0]]), 1.0)
    assert gc.delta(WH, [3]) == 1.0


def test_tf_compose_example():
    p = gc.tf_compose(A, TFPoint([2], [1], [3]), TFPoint([4], [5], [7]))
    assert np.allclose(np.concatenate(p), [8, 11, 6.5])


def test_tf_identity_and_inverse():
    p = TFPoint(np.array([2.0]), np.array([1.0]), np.array([3.0]))
    e = gc.tf_identity(A)
    assert np.allclose(np.concatenate(gc.tf_compose(A, e, p)), np.concatenate(p))
    q = gc.tf_compose(A, p, gc.tf_inverse(A, p))
    assert np.allclose(np.concatenate(q), np.concatenate(e))


def test_tf_otimes_compose_example():
    p = gc.tf_otimes_compose(A, TFOtimesPoint([2], [3], [1], [6]), TFOtimesPoint([4], [5], [7], [9]))
    assert np.allclose(np.concatenate(p), [8, 15, 15, 9])


def test_tf_otimes_identity():
    p = TFOtimesPoint(np.array([2.0]), np.array([3.0]), np.array([1.0]), np.array([6.0]))
    q = gc.tf_otimes_compose(A, gc.tf_otimes_identity(A), p)
    assert np.allclose(np.concatenate(q), np.concatenate(p))


def test_phi_examples():
    p = gc.phi_iso(gp(2, 3), gp(5, 7))
    assert np.allclose(np.concatenate(p), [2, 5, 3, 7])
    e = gc.phi_iso(gc.identity(A), gc.identity(A))
    assert np.allclose(np.concatenate(e), np.concatenate(gc.tf_otimes_identity(A)))
    x, y = gc.phi_iso_inverse(p)
    assert np.allclose(x.h, [2]) and np.allclose(y.k, [7])


def test_invalid_elements():
    with pytest.raises(InvalidElementError):
        gc.compose(A, gp(-1, 0), gp(1, 0))
    with pytest.raises(InvalidElementError):
        gc.act(A, [0.0], [1.0])
    with pytest.raises(InvalidElementError):
        gc.act(A, [1.0, 2.0], [1.0])
    with pytest.raises(InvalidElementError):
        gc.act(A, [1.0], [np.nan])
    with pytest.raises(InvalidElementError):
        gc.compose(WH, gp(1.5, [0, 1, 0]), gp(1, [0, 1, 0]))
    with pytest.raises(InvalidElementError):
        gc.compose(WH, gp(1, [0, 2, 0]), gp(1, [0, 1, 0]))


# --- instance examples -----------------------------------------------------------

def test_affine_hat_density_is_lebesgue():
    a = np.array([[0.3], [1.0], [7.0]])
    assert np.allclose(A.haar_H_density(a) / A.delta(a), 1.0)


def test_affine_g_tau_density():
    a = np.array([[0.3], [1.0], [7.0]])
    assert np.allclose(A.delta(a) * A.haar_H_density(a), a[:, 0] ** -2)


def test_wh_compose_example():
    # (s,(m,z))(s',(m',z')) = (s+s', (m+m', z z' e^{2 pi i m' s / N}))
    z, z2 = np.exp(0.3j), np.exp(-1.1j)
    p = gc.compose(WH, gp(3, [2, z.real, z.imag]), gp(6, [5, z2.real, z2.imag]))
    assert np.allclose(p.h, [(3 + 6) % 8])
    expect = z * z2 * np.exp(2j * np.pi * 5 * 3 / 8)
    assert np.allclose(p.k, [(2 + 5) % 8, expect.real, expect.imag])


def test_wh_needs_n_at_least_two():
    with pytest.raises(ValueError):
        make_weyl_heisenberg(1)


def test_wh_pairing_is_equivariant():
    # <tau_{s^-1}(m, z), (k, n)> = <(m, z), (k, n)_s>
    rng = np.random.default_rng(1)
    for _ in range(50):
        s = random_h(WH, rng, 1)[0]
        x = random_k(WH, rng, 1)[0]
        w = random_w(WH, rng, 1)[0]
        lhs = wh_pairing(8, WH.act(WH.h_inverse(s), x), w)
        rhs = wh_pairing(8, x, WH.dual_act(s, w))
        assert abs(lhs - rhs) < 1e-10


def test_wh_unit_modulus_over_many_compositions():
    rng = np.random.default_rng(2)
    g = gc.identity(WH)
    for _ in range(10_000 // 100):
        hs, ks = random_h(WH, rng, 100), random_k(WH, rng, 100)
        for i in range(100):
            g = gc.compose(WH, g, GroupPoint(hs[i], ks[i]))
    assert abs(np.hypot(g.k[1], g.k[2]) - 1) < 1e-12


def test_e2_dual_act_preserves_norm():
    rng = np.random.default_rng(3)
    th, w = random_h(E2, rng, 100), random_w(E2, rng, 100)
    assert np.allclose(np.linalg.norm(E2.dual_act(th, w), axis=1), np.linalg.norm(w, axis=1), atol=1e-12)


def test_e2_txw_density_constant(e2):
    th = np.linspace(0, 6, 7)[:, None]
    assert np.ptp(e2.haar_H_density(th)) == 0


def test_get_group():
    assert get_group("affine").name == "affine"
    assert get_group("E2").name == "e2"
    assert get_group("weyl-heisenberg:5").name == "weyl-heisenberg:5"
    assert get_group("weyl-heisenberg").name == "weyl-heisenberg:8"
    with pytest.raises(KeyError):
        get_group("heisenberg")


# --- invariants, sampled -----------------------------------------------------------

def _err(G, p, q):
    scale = np.maximum(1.0, np.abs(p.k).max(axis=-1))
    return max(float(np.max(h_distance(G, p.h, q.h) / np.maximum(1, np.abs(p.h[..., 0])))),
               float(np.max(k_distance(G, p.k, q.k) / scale)))


@pytest.mark.parametrize("G", [A, E2, WH], ids=lambda g: g.name)
def test_axioms_on_random_triples(G):
    rng = np.random.default_rng(4)
    x, y, z = (GroupPoint(random_h(G, rng, 1000), random_k(G, rng, 1000)) for _ in range(3))
    left = gc.compose(G, gc.compose(G, x, y), z)
    right = gc.compose(G, x, gc.compose(G, y, z))
    assert _err(G, left, right) <= 1e-12
    e = gc.identity(G)
    eb = GroupPoint(np.broadcast_to(e.h, x.h.shape), np.broadcast_to(e.k, x.k.shape))
    assert _err(G, gc.compose(G, x, gc.inverse(G, x)), eb) <= 1e-12
    assert _err(G, gc.compose(G, eb, x), x) <= 1e-12


@pytest.mark.parametrize("G", [A, E2, WH], ids=lambda g: g.name)
def test_delta_multiplicative_and_dual_contravariant(G):
    rng = np.random.default_rng(5)
    h, t = random_h(G, rng, 1000), random_h(G, rng, 1000)
    w = random_w(G, rng, 1000)
    d = G.delta(G.h_compose(h, t))
    assert np.all(np.abs(d - G.delta(h) * G.delta(t)) <= 1e-12 * G.delta(h) * G.delta(t))
    lhs = G.dual_act(G.h_compose(h, t), w)
    rhs = G.dual_act(h, G.dual_act(t, w))
    assert np.max(w_distance(G, lhs, rhs) / np.maximum(1, np.abs(lhs).max(axis=-1))) <= 1e-12


@pytest.mark.parametrize("G", [A, E2], ids=lambda g: g.name)
def test_action_pairing(G):
    rng = np.random.default_rng(6)
    h, x, w = random_h(G, rng, 500), random_k(G, rng, 500), random_w(G, rng, 500)
    lhs = np.exp(2j * np.pi * np.sum(G.act(G.h_inverse(h), x) * w, axis=-1))
    rhs = np.exp(2j * np.pi * np.sum(x * G.dual_act(h, w), axis=-1))
    assert np.max(np.abs(lhs - rhs)) < 1e-10


@pytest.mark.parametrize("G", [A, E2], ids=lambda g: g.name)
def test_act_is_homomorphism_in_h(G):
    rng = np.random.default_rng(7)
    h, t, x = random_h(G, rng, 200), random_h(G, rng, 200), random_k(G, rng, 200)
    assert np.allclose(G.act(G.h_compose(h, t), x), G.act(h, G.act(t, x)), atol=1e-12)


def test_e2_angles_reduced():
    p = gc.compose(E2, gp(6.0, [0, 0]), gp(1.0, [0, 0]))
    assert 0 <= p.h[0] < 2 * np.pi
    assert np.isclose(p.h[0], 7.0 - 2 * np.pi)


pos = st.floats(0.05, 20.0)
real = st.floats(-10.0, 10.0)


@settings(max_examples=200, deadline=None)
@given(pos, real, pos, real, pos, real, pos, real)
def test_phi_homomorphism_affine(h1, k1, t1, w1, h2, k2, t2, w2):
    x = (gp(h1, k1), gp(t1, w1))
    y = (gp(h2, k2), gp(t2, w2))
    xy = (gc.compose(A, x[0], y[0]), gc.hat_compose(A, x[1], y[1]))
    lhs = np.concatenate(gc.phi_iso(*xy))
    rhs = np.concatenate(gc.tf_otimes_compose(A, gc.phi_iso(*x), gc.phi_iso(*y)))
    assert np.allclose(lhs, rhs, rtol=1e-12, atol=1e-12)


@settings(max_examples=200, deadline=None)
@given(pos, real, real, pos, real, real, pos, real, real)
def test_tf_associativity_affine(a, b, c, d, e, f, g, h, i):
    p, q, r = (TFPoint(np.array([x]), np.array([y]), np.array([z]))
               for x, y, z in ((a, b, c), (d, e, f), (g, h, i)))
    left = np.concatenate(gc.tf_compose(A, gc.tf_compose(A, p, q), r))
    right = np.concatenate(gc.tf_compose(A, p, gc.tf_compose(A, q, r)))
    assert np.allclose(left, right, rtol=1e-12, atol=1e-9)


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 2 * np.pi), st.floats(0, 2 * np.pi), real, real)
def test_e2_rotation_is_orthogonal(t1, t2, x0, x1):
    x = np.array([x0, x1])
    y = E2.act(np.array([t1]), x)
    assert abs(np.linalg.norm(y) - np.linalg.norm(x)) <= 1e-12 * max(1, np.linalg.norm(x))
