"""The bracket-closure equations of the 5-field template as a residual function.

Unknowns are the a/b rows (entries (1,1..3) and (2,1..3)) of E1..E5 and the
five (3,3) entries m_k, all complex; the translation columns and the fixed
c-entries (4i, 0 | 0, 0 | 0, 2i | 0, 2 | 0, 0) come from the template.  For each
of the 10 pairs the bracket minus its expansion, with coefficients read off
the translation column, gives 12 complex equations.
"""
from __future__ import annotations

import zlib
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ..errors import NoConvergence, ShapeMismatch
from ..field_algebra import FieldBasis, TEMPLATE_TRANSLATIONS

N_FIELDS = 5
PAIRS = list(combinations(range(N_FIELDS), 2))
ENTRIES_PER_BRACKET = 12
N_UNKNOWNS = 2 * 3 * N_FIELDS + N_FIELDS       # 30 a/b entries + 5 m_k, complex

SUCCESS = 1e-8
MAX_ITER = 500
FD_STEP = 1.0        # central differences are exact for the quadratic residual

# entries (row 3, columns 1..2) fixed by the template
TEMPLATE_C = np.array([[4j, 0], [0, 0], [0, 2j], [0, 2], [0, 0]], dtype=complex)


@dataclass(frozen=True)
class ClosureSystem:
    mask: np.ndarray          # bool (N_UNKNOWNS,): entries treated as unknown
    fill: np.ndarray          # complex (N_UNKNOWNS,): values of the fixed entries

    @property
    def n_pairs(self) -> int:
        return len(PAIRS)

    @property
    def complex_equations(self) -> int:
        return self.n_pairs * ENTRIES_PER_BRACKET

    @property
    def real_equations(self) -> int:
        return 2 * self.complex_equations

    @property
    def n_real_unknowns(self) -> int:
        return 2 * int(self.mask.sum())

    def assemble(self, x) -> np.ndarray:
        """Full complex unknown vector from the real vector of free entries."""
        z = self.fill.copy()
        k = int(self.mask.sum())
        z[self.mask] = np.asarray(x[:k]) + 1j * np.asarray(x[k:])
        return z

    def free_part(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)[self.mask]
        return np.concatenate([z.real, z.imag])

    def residual(self, x) -> np.ndarray:
        return bracket_residual(fields_from_unknowns(self.assemble(x)))


def fields_from_unknowns(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    F = np.zeros((N_FIELDS, 4, 4), dtype=complex)
    ab = z[:6 * N_FIELDS].reshape(N_FIELDS, 2, 3)
    F[:, :2, :3] = ab
    F[:, 2, :2] = TEMPLATE_C
    F[:, 2, 2] = z[6 * N_FIELDS:]
    F[:, :3, 3] = TEMPLATE_TRANSLATIONS
    return F


def unknowns_from_fields(F) -> np.ndarray:
    """Inverse of :func:`fields_from_unknowns`; raises if ``F`` is not template-shaped."""
    F = np.asarray(F, dtype=complex)
    if F.shape != (N_FIELDS, 4, 4):
        raise ShapeMismatch("closure template needs exactly 5 fields")
    if not (np.allclose(F[:, :3, 3], TEMPLATE_TRANSLATIONS, atol=1e-12)
            and np.allclose(F[:, 2, :2], TEMPLATE_C, atol=1e-12)):
        raise ShapeMismatch("basis does not have the template translation and c entries")
    return np.concatenate([F[:, :2, :3].ravel(), F[:, 2, 2]])


_I, _J = (np.array(a) for a in zip(*PAIRS))


def bracket_residual(F) -> np.ndarray:
    """Realified entries of ``[Ei, Ej] - sum_k lam_k Ek`` over all pairs (240 reals)."""
    X = F[_I] @ F[_J] - F[_J] @ F[_I]
    p, s, q = X[:, 0, 3], X[:, 1, 3], X[:, 2, 3]
    lam = np.stack([p.real, p.imag, s.real, s.imag, q.real], axis=1)
    out = (X - np.einsum("nk,kab->nab", lam, F))[:, :3].ravel()
    return np.concatenate([out.real, out.imag])


def closure_system(mask=None, fill=None) -> ClosureSystem:
    """System with the given unknown mask (default: everything unknown)."""
    mask = np.ones(N_UNKNOWNS, bool) if mask is None else np.asarray(mask, bool)
    fill = np.zeros(N_UNKNOWNS, complex) if fill is None else np.asarray(fill, complex)
    if mask.shape != (N_UNKNOWNS,) or fill.shape != (N_UNKNOWNS,):
        raise ShapeMismatch(f"mask and fill must have {N_UNKNOWNS} entries")
    return ClosureSystem(mask, fill)


def residual_norm(system: ClosureSystem, x) -> float:
    return float(np.linalg.norm(system.residual(x)))


def _jacobian(system: ClosureSystem, x) -> np.ndarray:
    J = np.empty((system.real_equations, len(x)))
    for k in range(len(x)):
        e = np.zeros(len(x))
        e[k] = FD_STEP
        J[:, k] = (system.residual(x + e) - system.residual(x - e)) / (2 * FD_STEP)
    return J


@dataclass(frozen=True)
class SolveResult:
    x: np.ndarray
    residual: float
    iterations: int


def local_solve_closure(system: ClosureSystem, start, max_iter: int = MAX_ITER) -> SolveResult:
    """Gauss-Newton with backtracking; ``start`` is a real vector of free entries."""
    x = np.asarray(start, dtype=float).copy()
    r = system.residual(x)
    nr = float(np.linalg.norm(r))
    for it in range(max_iter + 1):
        if nr <= SUCCESS:
            return SolveResult(x, nr, it)
        if it == max_iter:
            break
        step = np.linalg.lstsq(_jacobian(system, x), -r, rcond=None)[0]
        t = 1.0
        for _ in range(40):
            xn = x + t * step
            rn = system.residual(xn)
            nn = float(np.linalg.norm(rn))
            if nn < nr:
                x, r, nr = xn, rn, nn
                break
            t /= 2
        else:
            break
    raise NoConvergence(f"Gauss-Newton stopped at residual {nr:.3e}", it, nr)


def perturbation_trials(basis: FieldBasis, seed: int, trials: int = 10, size: float = 1e-2,
                        tag: str = "") -> list[tuple[bool, float, int]]:
    """Perturb every free entry by ``size`` and solve back; (success, residual, iterations) per trial."""
    system = closure_system()
    x0 = system.free_part(unknowns_from_fields(basis.fields))
    out = []
    for k in range(trials):
        rng = np.random.default_rng([seed, k, zlib.crc32(tag.encode())])
        start = x0 + rng.uniform(-size, size, len(x0))
        try:
            res = local_solve_closure(system, start)
            out.append((True, res.residual, res.iterations))
        except NoConvergence as e:
            out.append((False, e.residual, e.iterations))
    return out
