"""Tangency of affine fields to hypersurfaces and local transitivity."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..catalog.surfaces import Surface, sample_points, to_real
from ..field_algebra import FieldBasis, evaluate_at

RANK_RTOL = 1e-8


@dataclass(frozen=True)
class TangencyResult:
    max_residual: float
    per_field: np.ndarray
    n_samples: int
    seed: int


def field_applied_to_phi(X: np.ndarray, S: Surface, P) -> complex:
    """``Z(Phi)(P) = sum_j X_j(P) dPhi/dzeta_j``; tangency means its real part vanishes."""
    return complex(evaluate_at(X, P) @ S.grad(P))


def tangency_matrix(fields, S: Surface, points) -> np.ndarray:
    """``|Re Z_k(Phi)| / max(1, |P|)`` for every field ``k`` and point, shape (k, n)."""
    fields = np.asarray(fields)
    points = np.asarray(points, dtype=complex)
    g = S.grad(points)                                        # (n, 3)
    vals = np.einsum("kab,nb->kna", fields[:, :3, :3], points) + fields[:, None, :3, 3]
    scale = np.maximum(1.0, np.linalg.norm(points, axis=1))
    return np.abs(np.einsum("kna,na->kn", vals, g).real) / scale


def tangency_residual(basis: FieldBasis, S: Surface, n: int = 100, seed: int = 0,
                      points=None) -> TangencyResult:
    pts = sample_points(S, n, seed) if points is None else np.asarray(points)
    T = tangency_matrix(basis.fields, S, pts)
    per = T.max(axis=1)
    return TangencyResult(float(per.max()), per, len(pts), seed)


def transitivity_rank(basis: FieldBasis, S: Surface, P=None) -> int:
    """Real rank of the field values at ``P`` projected to the real tangent space."""
    P = S.base_point if P is None else np.asarray(P, dtype=complex)
    n = S.real_gradient(P)
    n = n / np.linalg.norm(n)
    vals = to_real(np.array([evaluate_at(E, P) for E in basis.fields]))
    proj = vals - np.outer(vals @ n, n)
    sv = np.linalg.svd(proj, compute_uv=False)
    if sv[0] == 0:
        return 0
    return int(np.sum(sv > RANK_RTOL * sv[0]))
