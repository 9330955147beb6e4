"""Least-squares search for an affine similarity between two bases.

Used where a similarity is asserted but no matrix is given.  Unknowns are the
top three rows of ``C`` (12 complex entries; ``C44 = 1`` fixes the gauge);
the residual is the distance of every field of ``C^-1 E C`` from the real
span of the target.  A failed search is inconclusive, never a refutation.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from ..catalog.algebras import instantiate, sample_params
from ..errors import AHVError
from ..field_algebra import FieldBasis

N_STARTS = 16
SUCCESS = 1e-8
PENALTY = 1e3
COND_MAX = 1e4     # keeps the search away from contractions (degenerate limits)


@dataclass(frozen=True)
class SimilarityResult:
    source: str
    target: str
    residual: float
    found: bool
    start_index: int
    condition: float
    transform: np.ndarray | None


def _unpack(x) -> np.ndarray:
    C = np.eye(4, dtype=complex)
    C[:3] = (x[:12] + 1j * x[12:24]).reshape(3, 4)
    return C


def _realified(F: np.ndarray) -> np.ndarray:
    F = F[:, :3].reshape(len(F), -1)
    return np.concatenate([F.real, F.imag], axis=1)


def _span_basis(T: np.ndarray) -> np.ndarray:
    U, sv, _ = np.linalg.svd(_realified(T).T, full_matrices=False)
    return U[:, sv > 1e-10 * sv[0]]


def _residual(x, src: np.ndarray, target) -> np.ndarray:
    """Distance of every field of ``C^-1 E C`` from the real span of the target."""
    C = _unpack(x)
    n = len(src) * 24
    if np.linalg.cond(C) > COND_MAX:
        return np.full(n, PENALTY)
    U = _span_basis(target(x[24:])) if callable(target) else target
    V = _realified(np.linalg.solve(C, src) @ C)
    R = V - (V @ U) @ U.T
    return (R / np.maximum(1.0, np.linalg.norm(V, axis=1))[:, None]).ravel()


def search_similarity(source: FieldBasis, target, seed: int = 0, starts: int = N_STARTS,
                      n_free: int = 0, source_id: str = "", target_id: str = "") -> SimilarityResult:
    """``target`` may be a callable of ``n_free`` real target parameters fitted alongside ``C``."""
    src = np.asarray(source.fields)
    tgt = (lambda y: np.asarray(target(y).fields)) if callable(target) else _span_basis(
        np.asarray(target.fields))
    rng = np.random.default_rng([seed, 0x5131])
    best = (np.inf, -1, None)
    for k in range(starts):
        C0 = np.eye(4, dtype=complex)
        C0[:3] += rng.normal(0, 1, (3, 4)) + 1j * rng.normal(0, 1, (3, 4))
        x0 = np.concatenate([C0[:3].real.ravel(), C0[:3].imag.ravel(), rng.normal(0, 1, n_free)])
        try:
            sol = least_squares(_residual, x0, args=(src, tgt), method="lm",
                                xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=3000)
        except (AHVError, np.linalg.LinAlgError):
            continue
        r = float(np.max(np.abs(_residual(sol.x, src, tgt))))
        if r < best[0]:
            best = (r, k, _unpack(sol.x))
        if r <= SUCCESS:
            break
    r, k, C = best
    cond = float(np.linalg.cond(C)) if C is not None else float("inf")
    return SimilarityResult(source_id, target_id, r, r <= SUCCESS, k, cond, C if r <= SUCCESS else None)


# asserted similarities that come without a matrix: (source, target, fixed source params,
# target params from source params, free target parameter names)
SEARCHES = {
    "4.4-similar": ("3.4", "5.11", {}, lambda p: {}, ("xi",)),
    "4.5-similar": ("3.5", "5.14", {}, lambda p: {}, ("t1", "m1", "m3", "m4")),
    "4.7-similar": ("3.7", "5.22c", {}, lambda p: {}, ("t1", "m1", "t3", "t4")),
}


def run_search(key: str, seed: int = 0, starts: int = N_STARTS) -> SimilarityResult:
    src_id, tgt_id, fixed, tparams, free = SEARCHES[key]
    p = sample_params(src_id, seed=seed, index=0)
    p.update(fixed)
    base = tparams(p)
    if free:
        target = lambda y: instantiate(tgt_id, {**base, **dict(zip(free, map(float, y)))})
    else:
        target = instantiate(tgt_id, base)
    return search_similarity(instantiate(src_id, p), target, seed, starts, len(free), src_id, tgt_id)
