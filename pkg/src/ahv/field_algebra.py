"""Affine vector fields on C^3 as 4x4 complex matrices.

A field ``(A z + t) . d/dz`` is stored as the matrix ``[[A, t], [0, 0]]``
acting on ``(z1, z2, w, 1)``; the Lie bracket of fields is the matrix
commutator.  Spans are always *real* spans, so every span computation goes
through the 24-dimensional realification returned by :func:`vectorize`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import DependentBasis, IllConditionedBasis, InvalidField, SingularTransform

RANK_RTOL = 1e-8
GRAM_COND_MAX = 1e12
TRANSFORM_COND_MAX = 1e12

# translation columns (p, s, q) of the five template generators
TEMPLATE_TRANSLATIONS = np.array(
    [[1, 0, 0], [1j, 0, 0], [0, 1, 0], [0, 1j, 0], [0, 0, 1]], dtype=complex
)


def as_field(entries) -> np.ndarray:
    """Validate and return ``entries`` as a complex 4x4 affine field."""
    m = np.array(entries, dtype=complex)
    if m.shape == (3, 4):
        m = np.vstack([m, np.zeros(4, dtype=complex)])
    if m.shape != (4, 4):
        raise InvalidField(f"expected a 4x4 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidField("field entries must be finite")
    if np.any(m[3] != 0):
        raise InvalidField("last row of an affine field must be exactly zero")
    return m


def zero_field() -> np.ndarray:
    return np.zeros((4, 4), dtype=complex)


def linear_part(X: np.ndarray) -> np.ndarray:
    return X[:3, :3]


def translation(X: np.ndarray) -> np.ndarray:
    return X[:3, 3]


def bracket(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Commutator ``XY - YX``; the zero last row is preserved exactly."""
    return X @ Y - Y @ X


def vectorize(X: np.ndarray) -> np.ndarray:
    """Realify the top three rows: ``(re, im)`` pairs of the 12 entries, row-major."""
    top = np.asarray(X)[..., :3, :].reshape(*np.shape(X)[:-2], 12)
    out = np.empty(top.shape[:-1] + (24,), dtype=float)
    out[..., 0::2] = top.real
    out[..., 1::2] = top.imag
    return out


def unvectorize(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    top = (v[0::2] + 1j * v[1::2]).reshape(3, 4)
    return np.vstack([top, np.zeros(4, dtype=complex)])


@dataclass(frozen=True)
class SpanCoefficients:
    lam: np.ndarray
    residual: float


@dataclass(eq=False)
class FieldBasis:
    """Ordered list of real-linearly independent affine fields.

    ``label`` records provenance (family id plus parameter values).  Pass
    ``check=False`` only for deliberately degenerate test inputs.
    """

    fields: np.ndarray
    label: str = ""
    params: dict = field(default_factory=dict)
    check: bool = True

    def __post_init__(self):
        arr = np.array([as_field(f) for f in self.fields], dtype=complex)
        self.fields = arr
        if self.check:
            sv = np.linalg.svd(vectorize(arr), compute_uv=False)
            if sv[-1] <= RANK_RTOL * sv[0]:
                raise DependentBasis(
                    f"basis {self.label or '<anon>'} is not real-linearly independent "
                    f"(sigma_min/sigma_max = {sv[-1] / sv[0]:.3e})"
                )

    def __len__(self) -> int:
        return len(self.fields)

    def __getitem__(self, i):
        return self.fields[i]

    def __iter__(self):
        return iter(self.fields)

    def with_fields(self, fields, label=None, check=True) -> "FieldBasis":
        return FieldBasis(np.asarray(fields), label if label is not None else self.label,
                          dict(self.params), check=check)

    def truncated(self, k: int) -> "FieldBasis":
        return FieldBasis(self.fields[:k], f"{self.label}[:{k}]", dict(self.params))

    def matrix(self) -> np.ndarray:
        """The ``24 x k`` real matrix whose columns are the vectorized fields."""
        return vectorize(self.fields).T


class _Projector:
    """Least-squares projector onto the real span of a basis (SVD based)."""

    def __init__(self, basis: FieldBasis):
        A = basis.matrix()
        U, s, Vt = np.linalg.svd(A, full_matrices=False)
        if s[-1] == 0 or (s[0] / s[-1]) ** 2 > GRAM_COND_MAX:
            cond = np.inf if s[-1] == 0 else (s[0] / s[-1]) ** 2
            raise IllConditionedBasis(f"span Gram matrix condition number {cond:.3e} exceeds 1e12")
        self.U, self.s, self.Vt = U, s, Vt

    def __call__(self, X: np.ndarray) -> SpanCoefficients:
        x = vectorize(X)
        c = self.U.T @ x
        lam = self.Vt.T @ (c / self.s)
        res = np.linalg.norm(x - self.U @ c)
        return SpanCoefficients(lam, float(res / max(1.0, np.linalg.norm(x))))


def decompose(X: np.ndarray, basis: FieldBasis) -> SpanCoefficients:
    """Real least-squares coefficients of ``X`` in the span of ``basis``.

    The residual is normalised by ``max(1, |vectorize(X)|)``.
    """
    return _Projector(basis)(X)


def has_template_translations(basis: FieldBasis, tol: float = 1e-12) -> bool:
    if len(basis) < 5:
        return False
    return bool(np.max(np.abs(basis.fields[:5, :3, 3] - TEMPLATE_TRANSLATIONS)) <= tol)


def decompose_fast(X: np.ndarray, basis: FieldBasis) -> SpanCoefficients:
    """Read the coefficients from the translation column (template-shaped bases).

    For a basis whose translation columns are (1,0,0), (i,0,0), (0,1,0),
    (0,i,0), (0,0,1) the coefficients of anything in the span are
    ``(Re p, Im p, Re s, Im s, Re q)``.
    """
    if len(basis) != 5 or not has_template_translations(basis):
        raise ValueError("fast path needs a 5-field basis with template translation columns")
    p, s, q = translation(X)
    lam = np.array([p.real, p.imag, s.real, s.imag, q.real])
    x = vectorize(X)
    res = np.linalg.norm(x - basis.matrix() @ lam)
    return SpanCoefficients(lam, float(res / max(1.0, np.linalg.norm(x))))


def brackets(basis: FieldBasis) -> Iterable[tuple[int, int, np.ndarray]]:
    for i, j in combinations(range(len(basis)), 2):
        yield i, j, bracket(basis[i], basis[j])


def closure_residual(basis: FieldBasis) -> float:
    """Worst normalised distance of a pairwise bracket from the span."""
    proj = _Projector(basis)
    return max((proj(Z).residual for _, _, Z in brackets(basis)), default=0.0)


def structure_constants(basis: FieldBasis) -> np.ndarray:
    """``c[i, j, k]`` with ``[E_i, E_j] ~ sum_k c[i, j, k] E_k`` (least squares)."""
    k = len(basis)
    proj = _Projector(basis)
    c = np.zeros((k, k, k))
    for i, j, Z in brackets(basis):
        lam = proj(Z).lam
        c[i, j], c[j, i] = lam, -lam
    return c


def check_affine_transform(C) -> np.ndarray:
    C = np.array(C, dtype=complex)
    if C.shape != (4, 4) or not np.all(np.isfinite(C)):
        raise SingularTransform("transform must be a finite 4x4 matrix")
    if np.any(C[3, :3] != 0) or C[3, 3] != 1:
        raise SingularTransform("transform must have last row (0, 0, 0, 1)")
    cond = np.linalg.cond(C)
    if not np.isfinite(cond) or cond >= TRANSFORM_COND_MAX:
        raise SingularTransform(f"transform condition number {cond:.3e} too large")
    return C


def conjugate(basis: FieldBasis, C) -> FieldBasis:
    """Each field ``E`` becomes ``C^{-1} E C``.

    This expresses the fields in coordinates ``zeta'`` with
    ``zeta = C zeta'`` (both extended by a trailing 1).
    """
    C = check_affine_transform(C)
    Ci = np.linalg.inv(C)
    new = np.einsum("ij,kjl,lm->kim", Ci, basis.fields, C)
    new[:, 3, :] = 0.0
    return FieldBasis(new, f"{basis.label}^C", dict(basis.params), check=basis.check)


def is_subspace_of(A: FieldBasis, B: FieldBasis) -> float:
    """Largest residual of a field of ``A`` against the span of ``B``."""
    proj = _Projector(B)
    return max(proj(X).residual for X in A)


def span_distance(A: FieldBasis, B: FieldBasis) -> float:
    """Symmetric span mismatch: zero iff the real spans coincide."""
    return max(is_subspace_of(A, B), is_subspace_of(B, A))


def span_rank(fields: Sequence[np.ndarray], rtol: float = RANK_RTOL) -> int:
    sv = np.linalg.svd(vectorize(np.asarray(fields)), compute_uv=False)
    return int(np.sum(sv > rtol * max(sv[0], 1e-300)))


def evaluate_at(X: np.ndarray, P) -> np.ndarray:
    """Value of the field at ``P = (z1, z2, w)``: ``linear_part @ P + translation``."""
    P = np.asarray(P, dtype=complex)
    return X[:3, :3] @ P + X[:3, 3]


def entrywise_distance(A: FieldBasis, B: FieldBasis) -> float:
    if len(A) != len(B):
        return float("inf")
    return float(np.max(np.abs(A.fields - B.fields)))
