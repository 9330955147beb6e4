"""Levi form, Takagi factorization and the second-order affine type (eps1, eps2)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .catalog.surfaces import Surface
from .errors import DegenerateGradient, NotSPC, ResidualUSquare

GRAD_MIN = 1e-10
SIGNATURE_RTOL = 1e-8
U_SQUARE_TOL = 1e-9


@dataclass(frozen=True)
class LeviSignature:
    n_plus: int
    n_minus: int
    n_zero: int
    eigenvalues: np.ndarray

    @property
    def triple(self) -> tuple[int, int, int]:
        return (self.n_plus, self.n_minus, self.n_zero)

    @property
    def spc(self) -> bool:
        return self.triple == (2, 0, 0)


@dataclass(frozen=True)
class TypeInvariant:
    eps1: float
    eps2: float
    u_square: float = 0.0   # weight-4 remainder after the shear, reported only

    def as_tuple(self):
        return (self.eps1, self.eps2)


@dataclass(frozen=True)
class NormalForm2:
    hermitian_part: np.ndarray
    quadratic_part: np.ndarray
    u_cross: np.ndarray
    u_square: float


def signature_of(eigs) -> LeviSignature:
    eigs = np.sort(np.asarray(eigs, dtype=float))[::-1]
    thr = SIGNATURE_RTOL * max(1.0, np.max(np.abs(eigs)))
    return LeviSignature(int(np.sum(eigs > thr)), int(np.sum(eigs < -thr)),
                         int(np.sum(np.abs(eigs) <= thr)), eigs)


def complex_tangent_basis(g: np.ndarray) -> np.ndarray:
    """Orthonormal columns spanning ``{X : sum g_j X_j = 0}`` (3 x 2)."""
    _, _, Vh = np.linalg.svd(g[None, :])
    return Vh[1:].conj().T


def levi_form(S: Surface, P=None) -> LeviSignature:
    """Levi eigenvalues at ``P``; orientation chosen so the trace is nonnegative."""
    P = S.base_point if P is None else P
    jet = S.jet(P)
    if np.linalg.norm(jet.grad) < GRAD_MIN:
        raise DegenerateGradient(f"gradient vanishes at {P}")
    X = complex_tangent_basis(jet.grad)
    L = X.T @ jet.hermitian_hessian @ X.conj()
    eigs = np.linalg.eigvalsh((L + L.conj().T) / 2)
    if eigs.sum() < 0:
        eigs = -eigs
    return signature_of(eigs)


def takagi(Q) -> tuple[np.ndarray, np.ndarray]:
    """``Q = U diag(sigma) U^T`` for complex symmetric ``Q``, ``sigma`` descending.

    Uses the real symmetric embedding ``[[A, B], [B, -A]]`` of ``Q = A + iB``:
    its eigenvector ``(x, y)`` for eigenvalue ``s >= 0`` gives a Takagi vector
    ``x + iy`` with ``Q conj(u) = s u``.
    """
    Q = np.asarray(Q, dtype=complex)
    n = Q.shape[0]
    A, B = Q.real, Q.imag
    big = np.block([[A, B], [B, -A]])
    vals, vecs = np.linalg.eigh((big + big.T) / 2)
    order = np.argsort(vals)[::-1][:n]
    sigma = np.clip(vals[order], 0.0, None)
    U = vecs[:n, order] + 1j * vecs[n:, order]
    tol = 1e-13 * max(1.0, np.abs(Q).max())
    nz = sigma > tol
    if not nz.all():
        # zero block: any unitary completion works; the embedding may hand back
        # vectors that are orthogonal only in the real sense
        _, _, Vh = np.linalg.svd(U[:, nz].conj().T) if nz.any() else (None, None, np.eye(n))
        U[:, ~nz] = Vh[nz.sum():].conj().T
        sigma[~nz] = 0.0
    return U, sigma


def _chart(jet):
    """Matrix ``M = [X1 X2 n]`` with ``g^T X_a = 0`` and ``g^T n = i/2``."""
    g = jet.grad
    X = complex_tangent_basis(g)
    n = 1j * g.conj() / (2 * np.vdot(g, g).real)
    return np.column_stack([X, n])


def normal_form2(S: Surface, P=None) -> NormalForm2:
    """Second-order graph coefficients ``v = Re(z^T Q z) + z^T H conj(z) + ...``.

    The chart puts ``P`` at the origin with the complex tangent as the
    ``z``-plane; ``u_cross`` and ``u_square`` are the coefficients of
    ``Re(c^T z) u`` and ``u^2``.
    """
    P = S.base_point if P is None else P
    jet = S.jet(P)
    if np.linalg.norm(jet.grad) < GRAD_MIN:
        raise DegenerateGradient(f"gradient vanishes at {P}")
    M = _chart(jet)
    H = M.T @ jet.hermitian_hessian @ M.conj()
    Q = M.T @ jet.holomorphic_hessian @ M
    return NormalForm2(H[:2, :2], Q[:2, :2], 2 * (Q[:2, 2] + H[:2, 2]),
                       float(Q[2, 2].real + H[2, 2].real))


def remove_u_cross(nf: NormalForm2) -> tuple[NormalForm2, np.ndarray]:
    """Shear ``z -> z + a w`` so the ``u z`` terms vanish; returns the new form and ``a``."""
    H, Q, c = nf.hermitian_part, nf.quadratic_part, nf.u_cross
    # c + 2 Q a + 2 H conj(a) = 0, as a real 4x4 system in (Re a, Im a)
    Mr = np.block([[2 * (Q.real + H.real), 2 * (-Q.imag + H.imag)],
                   [2 * (Q.imag + H.imag), 2 * (Q.real - H.real)]])
    rhs = -np.concatenate([c.real, c.imag])
    sol = np.linalg.lstsq(Mr, rhs, rcond=None)[0]
    a = sol[:2] + 1j * sol[2:]
    left = Mr @ sol - rhs
    usq = nf.u_square + float(np.real(c @ a + a @ Q @ a) + np.real(a @ H @ a.conj()))
    return NormalForm2(H, Q, (left[:2] + 1j * left[2:]), usq), a


def canonical_type(S: Surface, P=None, strict: bool = False) -> TypeInvariant:
    """Unordered pair ``(eps1, eps2)`` reported as ``eps1 >= eps2``.

    The shear ``z -> z + a w`` leaves the ``z``-block untouched, so a ``u^2``
    term that survives it does not enter ``eps``; it is returned in
    ``u_square`` and only raises :class:`ResidualUSquare` when ``strict``.
    """
    nf = normal_form2(S, P)
    w = np.linalg.eigvalsh(nf.hermitian_part)
    thr = SIGNATURE_RTOL * max(1.0, np.abs(w).max())
    if np.all(w < -thr):
        nf = normal_form2(S.scaled(-1.0), P)
    elif not np.all(w > thr):
        raise NotSPC(f"Levi form at the base point of {S.label or S.id} is not definite: {w}")
    nf, _ = remove_u_cross(nf)
    if np.abs(nf.u_cross).max() > U_SQUARE_TOL:
        raise ResidualUSquare(f"u z terms {nf.u_cross} cannot be sheared away")
    if strict and abs(nf.u_square) > U_SQUARE_TOL:
        raise ResidualUSquare(f"u^2 coefficient {nf.u_square:.3e} survives the shear")
    L = np.linalg.cholesky(nf.hermitian_part)
    Li = np.linalg.inv(L)
    Qn = Li @ nf.quadratic_part @ Li.T
    _, sigma = takagi((Qn + Qn.T) / 2)
    return TypeInvariant(float(sigma[0] / 2), float(sigma[1] / 2), nf.u_square)
