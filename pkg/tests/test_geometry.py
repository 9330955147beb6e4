import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ahv.catalog.surfaces import MAIN_SURFACES, custom_surface, COORDS, point, sample_points, surface
from ahv.errors import NotSPC, ResidualUSquare
from ahv.geometry import canonical_type, levi_form, normal_form2, signature_of, takagi


def random_symmetric(rng, n=2):
    Q = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return Q + Q.T


def test_takagi_singular_values_and_reconstruction(rng):
    for _ in range(20):
        Q = random_symmetric(rng, 3)
        U, s = takagi(Q)
        np.testing.assert_allclose(s, np.linalg.svd(Q, compute_uv=False), rtol=1e-12)
        np.testing.assert_allclose(U @ np.diag(s) @ U.T, Q, atol=1e-12)
        np.testing.assert_allclose(U.conj().T @ U, np.eye(3), atol=1e-12)


def test_takagi_rank_deficient():
    v = np.array([1, 1j, 0.5])
    Q = np.outer(v, v)
    U, s = takagi(Q)
    assert s[1] == s[2] == 0
    np.testing.assert_allclose(U @ np.diag(s) @ U.T, Q, atol=1e-12)
    np.testing.assert_allclose(U.conj().T @ U, np.eye(3), atol=1e-12)


@settings(max_examples=30)
@given(st.integers(0, 10_000))
def test_takagi_unitary_invariance(k):
    rng = np.random.default_rng(k)
    Q = random_symmetric(rng)
    W, _ = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    np.testing.assert_allclose(takagi(W @ Q @ W.T)[1], takagi(Q)[1], rtol=1e-10, atol=1e-12)


def test_quadric_levi_eigenvalues():
    L = levi_form(surface("2.15"))
    assert L.triple == (2, 0, 0) and L.spc
    np.testing.assert_allclose(L.eigenvalues, [1, 1], atol=1e-14)


@pytest.mark.parametrize("c", [3.0, -0.5])
def test_levi_sign_invariant_under_rescaling(c):
    for sid in ("2.2", "2.6", "2.10"):
        S = surface(sid)
        for P in sample_points(S, 5, seed=3):
            assert levi_form(S.scaled(c), P).triple == levi_form(S, P).triple


@pytest.mark.parametrize("alpha,triple", [(0.0, (1, 0, 1)), (1.0, (0, 0, 2)), (-1.0, (2, 0, 0)),
                                          (-2.0, (2, 0, 0)), (0.5, (1, 1, 0)), (2.0, (1, 1, 0))])
def test_levi_signature_of_exponent_family(alpha, triple):
    # computed values; alpha = 0 and 1 differ from the displayed table (see the errata)
    assert levi_form(surface("2.10", alpha=alpha)).triple == triple


def test_signature_threshold():
    assert signature_of([1.0, 1e-12, -2.0]).triple == (1, 1, 1)


@pytest.mark.parametrize("sid", MAIN_SURFACES + ["2.15"])
def test_type_of_catalog_surfaces(sid):
    t = canonical_type(surface(sid))
    assert abs(t.eps1 - 0.5) <= 1e-8 and abs(t.eps2) <= 1e-8


@pytest.mark.parametrize("sid", ["2.2", "2.8"])
def test_type_is_pointwise_constant(sid):
    S = surface(sid)
    for P in sample_points(S, 5, seed=7):
        t = canonical_type(S, P)
        assert abs(t.eps1 - 0.5) <= 1e-8 and abs(t.eps2) <= 1e-8


def test_hermitian_quadric_has_zero_type():
    x1, y1, x2, y2, u, v = COORDS
    S = custom_surface(x1 ** 2 + y1 ** 2 + x2 ** 2 + y2 ** 2 - v, point(), "hermitian quadric",
                       graph=x1 ** 2 + y1 ** 2 + x2 ** 2 + y2 ** 2)
    assert canonical_type(S).as_tuple() == pytest.approx((0, 0), abs=1e-12)


def test_type_invariant_under_scaling_w():
    S = surface("cubic", A=2.0)
    M = np.diag([1, 1, 3.0, 1]).astype(complex)
    a, b = canonical_type(S), canonical_type(S.pulled_back(M), np.linalg.solve(M[:3, :3], S.base_point))
    assert a.as_tuple() == pytest.approx(b.as_tuple(), abs=1e-10)


def test_type_invariant_under_affine_maps(rng):
    S = surface("cubic", A=3.0)
    for _ in range(5):
        M = np.eye(4, dtype=complex)
        M[:3, :3] += 0.3 * (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
        M[:3, 3] = rng.normal(size=3)
        P = np.linalg.solve(M[:3, :3], S.base_point - M[:3, 3])
        assert canonical_type(S.pulled_back(M), P).as_tuple() == pytest.approx(
            canonical_type(S).as_tuple(), abs=1e-9)


def test_coefficient_on_second_modulus_does_not_change_type():
    assert canonical_type(surface("2.7", c=2.0)).as_tuple() == pytest.approx((0.5, 0), abs=1e-10)


@pytest.mark.parametrize("A", [2.0, 3.0, 5.0])
def test_cubic_family_type(A):
    t = canonical_type(surface("cubic", A=A))
    assert t.eps1 == pytest.approx(0.5, abs=1e-10)
    assert t.eps2 == pytest.approx((A - 1) / (2 * (A + 1)), abs=1e-10)


@pytest.mark.parametrize("C", [-1.0, -0.5, 0.1, 0.2])
def test_cone_section_type_depends_on_constant(C):
    t = canonical_type(surface("5.21", C=C)).as_tuple()
    other = max(t, key=lambda e: abs(e - 0.5))
    assert min(abs(e - 0.5) for e in t) <= 1e-10
    assert other == pytest.approx(abs(1 + 4 * C) / (2 * abs(1 - 4 * C)), abs=1e-10)


def test_not_spc_raises():
    with pytest.raises(NotSPC):
        canonical_type(surface("2.10", alpha=0.5))


def test_u_square_reported_and_strict():
    S = surface("2.10")
    t = canonical_type(S)
    assert t.u_square == pytest.approx(-0.125)
    with pytest.raises(ResidualUSquare):
        canonical_type(S, strict=True)
    canonical_type(surface("2.2"), strict=True)


def test_normal_form_of_quadric():
    nf = normal_form2(surface("2.15"))
    np.testing.assert_allclose(np.linalg.eigvalsh(nf.hermitian_part), [1, 1], atol=1e-14)
    np.testing.assert_allclose(takagi(nf.quadratic_part)[1], [1, 0], atol=1e-14)
