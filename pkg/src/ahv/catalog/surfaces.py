"""Real hypersurfaces ``{Phi = 0}`` in C^3 with closed-form jets.

Every surface kind is a sympy expression in the real coordinates
``(x1, y1, x2, y2, u, v)`` and its own scalar parameters.  Gradient and
real Hessian are differentiated symbolically once per kind and compiled
with ``lambdify``; Wirtinger derivatives are assembled from them.

A :class:`Surface` may carry an affine pre-map ``M`` (``zeta_cat = M zeta``),
so ``Phi(zeta) = Phi_cat(M zeta)``.  Jets transform by the holomorphic chain
rule and sampling goes through the catalog frame.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Mapping

import numpy as np
import sympy as sp

from ..errors import DegenerateGradient, DomainViolation, SamplingExhausted

x1, y1, x2, y2, u, v = COORDS = sp.symbols("x1 y1 x2 y2 u v", real=True)

SAMPLE_RADIUS = 0.5
MAX_REJECTS = 1000
NEWTON_STEPS = 60
ON_SURFACE_TOL = 1e-12


def point(z1=0, z2=0, w=0) -> np.ndarray:
    return np.array([z1, z2, w], dtype=complex)


def to_real(P) -> np.ndarray:
    P = np.asarray(P, dtype=complex)
    out = np.empty(P.shape[:-1] + (6,))
    out[..., 0::2] = P.real
    out[..., 1::2] = P.imag
    return out


def from_real(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    return r[..., 0::2] + 1j * r[..., 1::2]


@dataclass(frozen=True)
class WirtingerJet:
    grad: np.ndarray                 # d Phi / d zeta_j
    hermitian_hessian: np.ndarray    # d^2 Phi / d zeta_j d conj(zeta_k)
    holomorphic_hessian: np.ndarray  # d^2 Phi / d zeta_j d zeta_k


def wirtinger_from_real(g: np.ndarray, R: np.ndarray) -> WirtingerJet:
    """Convert a real gradient (6,) and Hessian (6, 6) to Wirtinger form."""
    gx, gy = g[0::2], g[1::2]
    Rxx, Ryy = R[0::2, 0::2], R[1::2, 1::2]
    Rxy, Ryx = R[0::2, 1::2], R[1::2, 0::2]
    grad = (gx - 1j * gy) / 2
    H = (Rxx + Ryy + 1j * (Rxy - Ryx)) / 4
    Q = (Rxx - Ryy - 1j * (Rxy + Ryx)) / 4
    return WirtingerJet(grad, H, Q)


# ---------------------------------------------------------------------------
# kinds


@dataclass(frozen=True)
class Kind:
    id: str
    params: tuple[str, ...]
    expr: Callable                 # params (sympy symbols) -> Phi
    graph: Callable | None         # params -> F with Phi = F - v, or None
    domain: Callable               # (real coords (..., 6), params dict) -> bool array
    base: Callable                 # params dict -> complex 3-vector
    validate: Callable = lambda p: []
    description: str = ""


KINDS: dict[str, Kind] = {}


def _kind(id, params, expr, graph=None, domain=None, base=None, validate=None, description=""):
    if graph is not None and expr is None:
        expr = lambda *s, _g=graph: _g(*s) - v
    KINDS[id] = Kind(id, tuple(params), expr, graph,
                     domain or (lambda r, p: np.ones(r.shape[:-1], bool)),
                     base or (lambda p: point()),
                     validate or (lambda p: []), description)


def _graph_base(id):
    def base(p):
        f = _compiled(id).F
        return point(0, 0, 1j * float(f(*np.zeros(5), *[p[k] for k in KINDS[id].params])))
    return base


_mod2 = x2 ** 2 + y2 ** 2
_x1_gt_m1 = lambda r, p: r[..., 0] > -1


def _excluded(name, bad):
    return lambda p: [f"{name} must avoid {bad} (got {p[name]!r})"] if p[name] in bad else []


_kind("2.1", (), None, graph=lambda: 2 * x1 ** 2 + _mod2, description="v = 2 x1^2 + |z2|^2")
_kind("2.15", (), None, graph=lambda: 2 * x1 ** 2 + _mod2, description="quadric v = 2 x1^2 + |z2|^2")
_kind("2.2", (), None, graph=lambda: sp.exp(x1) + _mod2, base=_graph_base("2.2"),
      description="v = exp(x1) + |z2|^2")
_kind("2.3", (), None, graph=lambda: -sp.log(1 + x1) + _mod2, domain=_x1_gt_m1,
      description="v = -ln(1 + x1) + |z2|^2")
_kind("2.4", ("alpha",), None,
      graph=lambda a: sp.Function("sgn_aa1")(a) * (1 + x1) ** a + _mod2,
      domain=_x1_gt_m1, base=_graph_base("2.4"), validate=_excluded("alpha", (0.0, 1.0, 2.0)),
      description="v = +-(1 + x1)^alpha + |z2|^2, sign of alpha (alpha - 1)")
_kind("2.5", (), None, graph=lambda: (1 + x1) * sp.log(1 + x1) + _mod2, domain=_x1_gt_m1,
      description="v = (1 + x1) ln(1 + x1) + |z2|^2")
_kind("2.6", (), lambda: v ** 2 - x1 ** 2 - y1 ** 2 - _mod2,
      domain=lambda r, p: r[..., 5] != 0, base=lambda p: point(0, 1, 1j),
      description="v^2 = |z1|^2 + |z2|^2")
_kind("2.7", ("c",), None, graph=lambda c: x1 ** 2 / (1 - x2) + c * _mod2,
      domain=lambda r, p: r[..., 2] < 1,
      description="v = x1^2 / (1 - x2) + c |z2|^2 (c = 1 main list, c = 2 variant)")
_kind("2.8", ("B",), None,
      graph=lambda B: sp.sqrt(x1 ** 2 + y1 ** 2) * sp.exp(B * sp.atan2(y1, x1)) + _mod2,
      domain=lambda r, p: (np.hypot(r[..., 0], r[..., 1]) > 0)
      & (np.abs(np.arctan2(r[..., 1], r[..., 0])) < np.pi - 0.05),
      base=lambda p: point(1, 0, 1j), description="v = |z1| exp(B arg z1) + |z2|^2")
_kind("2.9", ("alpha",), None, graph=lambda a: x1 ** (1 - a) * _mod2 ** a,
      domain=lambda r, p: (r[..., 0] > 0) & (np.hypot(r[..., 2], r[..., 3]) > 0),
      base=lambda p: point(1, 1, 1j), validate=_excluded("alpha", (0.0, 1.0)),
      description="v = x1^(1 - alpha) |z2|^(2 alpha)")
_kind("2.10", ("alpha",), lambda a: x1 * u + y1 * v - (x1 * x2 + y1 * y2) ** a,
      domain=lambda r, p: r[..., 0] * r[..., 2] + r[..., 1] * r[..., 3] > 0,
      base=lambda p: point(1, 1, 1), description="Re(conj(z1) w) = Re(z1 conj(z2))^alpha")
_kind("5.25", ("alpha", "C"), lambda a, C: x1 * u + y1 * v - C * (x1 * x2 + y1 * y2) ** a,
      domain=lambda r, p: r[..., 0] * r[..., 2] + r[..., 1] * r[..., 3] > 0,
      base=lambda p: point(1, 1, p["C"]),
      description="Re(conj(z1) w) = C Re(z1 conj(z2))^alpha")
_kind("5.12", ("t",), lambda t: v ** t - x1 ** 2 - y1 ** 2 - _mod2,
      domain=lambda r, p: r[..., 5] > 0, base=lambda p: point(1, 1, 1j * 2 ** (1 / p["t"])),
      validate=_excluded("t", (0.0, 1.0, 2.0)), description="v^t = |z1|^2 + |z2|^2")
_kind("5.21", ("C",), None, graph=lambda C: x1 ** 2 / x2 - y2 ** 2 / 4 + C * x2 ** 2,
      domain=lambda r, p: r[..., 2] < 0, base=lambda p: point(0, -1, 1j * p["C"]),
      description="v = x1^2 / x2 - y2^2 / 4 + C x2^2 (x2 < 0 sheet)")
_kind("cubic", ("A",), None, graph=lambda A: x1 ** 2 / x2 + A * x2 ** 2 + y2 ** 2,
      domain=lambda r, p: r[..., 2] > 0, base=lambda p: point(0, 1, 1j * p["A"]),
      description="v = x1^2 / x2 + A x2^2 + y2^2 (x2 > 0 sheet)")

MAIN_SURFACES = ["2.1", "2.2", "2.3", "2.4", "2.5", "2.6", "2.7", "2.8", "2.9", "2.10"]

# representative parameters for the parametric main-list surfaces
DEFAULT_PARAMS = {"2.4": {"alpha": 3.0}, "2.7": {"c": 1.0}, "2.8": {"B": 1.0},
                  "2.9": {"alpha": 2.0}, "2.10": {"alpha": -1.0}, "5.25": {"alpha": -1.0, "C": 1.0},
                  "5.12": {"t": 3.0}, "5.21": {"C": -0.25}, "cubic": {"A": 2.0}}


@dataclass(frozen=True)
class _Compiled:
    phi: Callable
    grad: Callable
    hess: Callable
    F: Callable | None


def _sgn_aa1(a):
    return np.sign(a * (a - 1.0))


_LAMBDIFY_MODULES = [{"sgn_aa1": _sgn_aa1}, "numpy"]


def _lambdify_parts(expr, psyms, graph=None):
    grad = [sp.diff(expr, c) for c in COORDS]
    hess = [[sp.diff(gi, c) for c in COORDS] for gi in grad]
    args = list(COORDS) + list(psyms)
    F = None
    if graph is not None:
        F = sp.lambdify(list(COORDS[:5]) + list(psyms), graph, modules=_LAMBDIFY_MODULES)
    return _Compiled(
        sp.lambdify(args, expr, modules=_LAMBDIFY_MODULES),
        sp.lambdify(args, grad, modules=_LAMBDIFY_MODULES),
        sp.lambdify(args, hess, modules=_LAMBDIFY_MODULES),
        F,
    )


@lru_cache(maxsize=None)
def _compiled(kind_id: str) -> _Compiled:
    k = KINDS[kind_id]
    syms = sp.symbols(" ".join(k.params), real=True) if k.params else ()
    if isinstance(syms, sp.Symbol):
        syms = (syms,)
    expr = k.expr(*syms)
    graph = k.graph(*syms) if k.graph else None
    return _lambdify_parts(expr, syms, graph)


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Surface:
    """One catalog hypersurface, optionally seen through an affine pre-map."""

    id: str
    params: dict = field(default_factory=dict)
    M: np.ndarray | None = None           # zeta_catalog = M @ (zeta, 1)
    base_point: np.ndarray | None = None
    sign: float = 1.0
    label: str = ""
    _custom: _Compiled | None = None
    _domain: Callable | None = None

    # construction ---------------------------------------------------------

    def __post_init__(self):
        if self.base_point is None:
            bp = self._catalog_base()
            if self.M is not None:
                bp = _apply(np.linalg.inv(self.M), bp)
            object.__setattr__(self, "base_point", bp)

    def _catalog_base(self):
        if self.id in KINDS:
            return KINDS[self.id].base(self.params)
        raise DomainViolation(f"surface {self.id} needs an explicit base point")

    @property
    def compiled(self) -> _Compiled:
        return self._custom or _compiled(self.id)

    @property
    def is_graph(self) -> bool:
        return self.M is None and self.sign == 1.0 and self.compiled.F is not None

    def pulled_back(self, M, base_point=None) -> "Surface":
        """The same set seen in coordinates ``zeta`` with ``zeta_here = M zeta``."""
        M = np.asarray(M, dtype=complex)
        total = M if self.M is None else self.M @ M
        bp = base_point
        if bp is None:
            bp = _apply(np.linalg.inv(M), self.base_point)
        return replace(self, M=total, base_point=np.asarray(bp, dtype=complex),
                       label=f"{self.label or self.id}*M")

    def scaled(self, c: float) -> "Surface":
        return replace(self, sign=self.sign * c)

    # evaluation -----------------------------------------------------------

    def _pvals(self):
        return [self.params[k] for k in KINDS[self.id].params] if self._custom is None else []

    def _to_catalog(self, P):
        P = np.asarray(P, dtype=complex)
        return P if self.M is None else _apply(self.M, P)

    def in_domain(self, P) -> np.ndarray:
        r = to_real(self._to_catalog(P))
        fin = np.all(np.isfinite(r), axis=-1)
        dom = self._domain or (KINDS[self.id].domain if self.id in KINDS else None)
        if dom is None:
            return fin
        with np.errstate(all="ignore"):
            return fin & dom(r, self.params)

    def _require(self, P):
        if not np.all(self.in_domain(P)):
            raise DomainViolation(f"point outside the domain of surface {self.label or self.id}")

    def phi(self, P) -> float | np.ndarray:
        self._require(P)
        r = to_real(self._to_catalog(P))
        with np.errstate(all="ignore"):
            val = self.compiled.phi(*np.moveaxis(r, -1, 0), *self._pvals())
        return self.sign * np.asarray(val, dtype=float) + 0.0 * r[..., 0]

    def real_jet(self, P):
        """Real gradient (6,) and Hessian (6, 6) in the catalog frame at one point."""
        r = to_real(self._to_catalog(P))
        c = self.compiled
        g = np.array(np.broadcast_arrays(*c.grad(*r, *self._pvals())), dtype=float)
        R = np.array([np.broadcast_arrays(*row) for row in c.hess(*r, *self._pvals())], dtype=float)
        return self.sign * g, self.sign * R

    def jet(self, P) -> WirtingerJet:
        self._require(P)
        g, R = self.real_jet(P)
        j = wirtinger_from_real(g, R)
        if self.M is None:
            return j
        L = self.M[:3, :3]
        return WirtingerJet(L.T @ j.grad, L.T @ j.hermitian_hessian @ L.conj(),
                            L.T @ j.holomorphic_hessian @ L)

    def grad(self, P) -> np.ndarray:
        """Holomorphic gradient; ``P`` may be a single point or an ``(n, 3)`` array."""
        P = np.asarray(P, dtype=complex)
        r = to_real(self._to_catalog(P))
        with np.errstate(all="ignore"):
            parts = self.compiled.grad(*np.moveaxis(r, -1, 0), *self._pvals())
        g = np.stack(np.broadcast_arrays(*parts, r[..., 0]), axis=-1)[..., :6] * self.sign
        out = (g[..., 0::2] - 1j * g[..., 1::2]) / 2
        return out if self.M is None else out @ self.M[:3, :3]

    def real_gradient(self, P) -> np.ndarray:
        """Gradient of Phi in the real coordinates of this frame."""
        g = self.grad(P)
        out = np.empty(g.shape[:-1] + (6,))
        out[..., 0::2], out[..., 1::2] = 2 * g.real, -2 * g.imag
        return out

    def graph_v(self, x) -> np.ndarray:
        """``v = F(x1, y1, x2, y2, u)`` for graph kinds in the catalog frame."""
        x = np.asarray(x, dtype=float)
        with np.errstate(all="ignore"):
            val = self.compiled.F(*np.moveaxis(x, -1, 0), *self._pvals())
        return np.asarray(val, dtype=float) + 0.0 * x[..., 0]

    def check_base_point(self, tol=1e-10) -> None:
        P = self.base_point
        if not self.in_domain(P):
            raise DomainViolation(f"base point of {self.id} outside its domain")
        if abs(self.phi(P)) > tol:
            raise DomainViolation(f"base point of {self.id} is off the surface (Phi = {self.phi(P):.3e})")
        if np.linalg.norm(self.grad(P)) < 1e-10:
            raise DegenerateGradient(f"zero gradient at the base point of {self.id}")


def _apply(M, P):
    P = np.asarray(P, dtype=complex)
    return P @ M[:3, :3].T + M[:3, 3]


def surface(id: str, params: Mapping[str, float] | None = None, **kw) -> Surface:
    """Catalog surface ``id``; missing parameters fall back to :data:`DEFAULT_PARAMS`."""
    if id not in KINDS:
        raise DomainViolation(f"unknown surface {id!r}")
    k = KINDS[id]
    vals = {**DEFAULT_PARAMS.get(id, {}), **(params or {}), **kw}
    vals = {p: float(vals[p]) for p in k.params if p in vals}
    missing = [p for p in k.params if p not in vals]
    if missing:
        raise DomainViolation(f"surface {id}: missing parameters {missing}")
    bad = k.validate(vals)
    if bad:
        raise DomainViolation(f"surface {id}: " + "; ".join(bad))
    label = id + ("" if not vals else "(" + ", ".join(f"{a}={b!r}" for a, b in vals.items()) + ")")
    return Surface(id, vals, label=label)


def custom_surface(expr, base_point, label="custom", graph=None, domain=None) -> Surface:
    """Surface from a sympy expression in :data:`COORDS` (no free parameters)."""
    c = _lambdify_parts(expr, (), graph)
    return Surface("custom", {}, base_point=np.asarray(base_point, dtype=complex),
                   label=label, _custom=c, _domain=domain)


# ---------------------------------------------------------------------------
# sampling


def _newton_project(S: Surface, P: np.ndarray) -> np.ndarray:
    """Damped Newton along the real gradient for a batch of points; failures become NaN."""
    P = P.copy()
    alive = S.in_domain(P)
    for _ in range(NEWTON_STEPS):
        f = np.where(alive, S.phi(np.where(alive[:, None], P, S.base_point)), 0.0)
        todo = alive & (np.abs(f) > ON_SURFACE_TOL * 1e-2)
        if not todo.any():
            break
        g = S.real_gradient(P[todo])
        gg = np.einsum("ij,ij->i", g, g)
        step = (f[todo] / np.where(gg > 1e-20, gg, np.inf))[:, None] * g
        cur = to_real(P[todo])
        t = np.ones(len(cur))
        done = np.zeros(len(cur), bool)
        new = cur.copy()
        for _ in range(14):
            cand = from_real(cur - t[:, None] * step)
            ok = S.in_domain(cand)
            fc = np.full(len(cur), np.inf)
            if ok.any():
                fc[ok] = np.abs(S.phi(cand[ok]))
            good = ~done & ok & (fc < np.abs(f[todo]))
            new[good] = to_real(cand[good])
            done |= good
            if done.all():
                break
            t = np.where(done, t, t / 2)
        idx = np.flatnonzero(todo)
        P[idx] = from_real(new)
        alive[idx[~done]] = False
    ok = alive & S.in_domain(P)
    ok[ok] = np.abs(S.phi(P[ok])) <= ON_SURFACE_TOL
    P[~ok] = np.nan
    return P


def sample_points(S: Surface, n: int, seed: int = 0, radius: float = SAMPLE_RADIUS) -> np.ndarray:
    """``n`` seeded points of ``S`` near its base point, shape ``(n, 3)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if S.M is not None:
        # sample in the catalog frame and map back
        parent = replace(S, M=None, base_point=_apply(S.M, S.base_point), sign=1.0)
        pts = sample_points(parent, n, seed, radius)
        return _apply(np.linalg.inv(S.M), pts)
    rng = np.random.default_rng([seed, 0x5A17])
    base = to_real(S.base_point)
    out, rejects = [], 0
    while len(out) < n:
        batch = max(8, 2 * (n - len(out)))
        r = base + rng.uniform(-radius, radius, (batch, 6))
        if S.is_graph:
            r[:, 5] = S.graph_v(r[:, :5])
            P = from_real(r)
            ok = np.isfinite(r[:, 5])
            ok[ok] = S.in_domain(P[ok])
            ok[ok] = np.abs(S.phi(P[ok])) <= ON_SURFACE_TOL
        else:
            P = _newton_project(S, from_real(r))
            ok = np.all(np.isfinite(P), axis=1)
        for j in range(batch):
            if ok[j]:
                out.append(P[j])
                if len(out) == n:
                    break
            else:
                rejects += 1
                if rejects >= MAX_REJECTS:
                    raise SamplingExhausted(f"surface {S.label or S.id}: {rejects} rejected draws")
    return np.array(out)
