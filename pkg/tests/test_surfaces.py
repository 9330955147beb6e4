import numpy as np
import pytest

from ahv.catalog.surfaces import (COORDS, KINDS, MAIN_SURFACES, custom_surface, from_real, point,
                                  sample_points, surface, to_real, wirtinger_from_real)
from ahv.errors import DomainViolation, SamplingExhausted

ALL_KINDS = sorted(KINDS)


def fd_jet(S, P, h1=1e-5, h2=1e-4):
    r0 = to_real(P)
    f = lambda r: float(S.phi(from_real(r)))
    g = np.zeros(6)
    R = np.zeros((6, 6))
    E = np.eye(6)
    for a in range(6):
        g[a] = (f(r0 + h1 * E[a]) - f(r0 - h1 * E[a])) / (2 * h1)
        for b in range(6):
            R[a, b] = (f(r0 + h2 * (E[a] + E[b])) - f(r0 + h2 * (E[a] - E[b]))
                       - f(r0 - h2 * (E[a] - E[b])) + f(r0 - h2 * (E[a] + E[b]))) / (4 * h2 ** 2)
    return wirtinger_from_real(g, R)


def test_phi_examples():
    assert surface("2.1").phi(point()) == 0
    assert surface("2.6").phi(point(0, 1, 1j)) == 0
    assert surface("2.3").phi(point(1, 0, -1j * np.log(2))) == pytest.approx(0, abs=1e-15)


def test_domain_errors():
    with pytest.raises(DomainViolation):
        surface("2.3").phi(point(-1.5, 0, 0))
    with pytest.raises(DomainViolation):
        surface("2.10").phi(point(1, -1, 1))
    with pytest.raises(DomainViolation):
        surface("2.7").phi(point(0, 1, 0))
    with pytest.raises(DomainViolation):
        surface("2.4", alpha=1.0)
    with pytest.raises(DomainViolation):
        surface("nope")


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_base_point_invariants(kind):
    S = surface(kind)
    S.check_base_point(tol=1e-12)


def test_quadric_jet_at_origin():
    j = surface("2.15").jet(point())
    np.testing.assert_allclose(j.grad, [0, 0, 0.5j], atol=1e-15)
    np.testing.assert_allclose(j.hermitian_hessian, np.diag([1, 1, 0]), atol=1e-15)


def test_levi_flat_exponent_zero_has_mixed_terms():
    # Re(conj(z1) w) contributes d^2/dw d(conj z1) = 1/2, so the Hermitian Hessian is not zero
    S = surface("2.10", alpha=0.0)
    H = S.jet(S.base_point).hermitian_hessian
    assert abs(H[2, 0]) == pytest.approx(0.5)
    assert np.allclose(H[:2, :2], 0)


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_jets_match_finite_differences(kind):
    S = surface(kind)
    for P in sample_points(S, 20, seed=11, radius=0.3):
        a, b = S.jet(P), fd_jet(S, P)
        for x, y in ((a.grad, b.grad), (a.hermitian_hessian, b.hermitian_hessian),
                     (a.holomorphic_hessian, b.holomorphic_hessian)):
            assert np.abs(x - y).max() <= 1e-6 * max(1.0, np.abs(x).max())


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_jet_symmetries(kind):
    S = surface(kind)
    j = S.jet(S.base_point)
    assert np.abs(j.hermitian_hessian - j.hermitian_hessian.conj().T).max() <= 1e-12
    assert np.abs(j.holomorphic_hessian - j.holomorphic_hessian.T).max() <= 1e-12


def test_batched_gradient_matches_pointwise():
    S = surface("2.8")
    P = sample_points(S, 7, seed=2)
    G = S.grad(P)
    for k in range(7):
        np.testing.assert_allclose(G[k], S.jet(P[k]).grad, rtol=1e-14, atol=1e-15)


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_sample_points_on_surface(kind):
    S = surface(kind)
    P = sample_points(S, 50, seed=5)
    assert P.shape == (50, 3)
    assert np.all(S.in_domain(P))
    assert np.abs(S.phi(P)).max() <= 1e-12
    assert np.array_equal(P, sample_points(S, 50, seed=5))


def test_exp_graph_exact():
    P = sample_points(surface("2.2"), 10, seed=0)
    v = np.exp(P[:, 0].real) + np.abs(P[:, 1]) ** 2
    np.testing.assert_array_equal(P[:, 2].imag, v)


@pytest.mark.parametrize("kind", [k for k in ALL_KINDS if KINDS[k].graph is not None])
def test_chart_grid_consistency(kind):
    S = surface(kind)
    r0 = to_real(S.base_point)[:5]
    ax = np.linspace(-0.2, 0.2, 10)
    X = np.stack(np.meshgrid(ax, ax, ax, indexing="ij"), -1).reshape(-1, 3)
    r = np.tile(r0, (len(X), 1))
    r[:, [0, 2, 4]] += X           # x1, x2, u
    v = S.graph_v(r)
    P = from_real(np.column_stack([r, v]))
    ok = S.in_domain(P)
    assert ok.mean() > 0.5
    assert np.abs(S.phi(P[ok])).max() <= 1e-10


def test_pulled_back_surface_consistency(rng):
    S = surface("2.8")
    M = np.eye(4, dtype=complex)
    M[:3] += 0.2 * (rng.normal(size=(3, 4)) + 1j * rng.normal(size=(3, 4)))
    T = S.pulled_back(M)
    P = sample_points(T, 10, seed=1)
    assert np.abs(T.phi(P)).max() <= 1e-12
    for p in P[:5]:
        a, b = T.jet(p), fd_jet(T, p)
        assert np.abs(a.grad - b.grad).max() <= 1e-6 * max(1, np.abs(a.grad).max())
        assert np.abs(a.hermitian_hessian - b.hermitian_hessian).max() <= 1e-5


def test_custom_surface_and_sampling_exhausted():
    x1, y1, x2, y2, u, v = COORDS
    S = custom_surface(x1 ** 2 + y1 ** 2 + x2 ** 2 + y2 ** 2 - v, point(), "paraboloid",
                       graph=x1 ** 2 + y1 ** 2 + x2 ** 2 + y2 ** 2)
    assert np.abs(S.phi(sample_points(S, 5))).max() <= 1e-14
    empty = custom_surface(x1 ** 2 + y1 ** 2 + x2 ** 2 + y2 ** 2 + u ** 2 + v ** 2 + 1,
                           point(), "empty")
    with pytest.raises(SamplingExhausted):
        sample_points(empty, 1)


def test_main_surface_list():
    assert MAIN_SURFACES == [f"2.{k}" for k in range(1, 11)]
