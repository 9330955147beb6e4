"""Multistart Levenberg-Marquardt fits of basis and surface parameters."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import least_squares

from ..catalog.algebras import instantiate
from ..catalog.surfaces import Surface, sample_points, surface
from ..errors import AHVError, FitFailed
from ..field_algebra import FieldBasis, conjugate
from . import correspondence as cc
from .tangency import tangency_matrix, tangency_residual

N_STARTS = 16
FIT_POINTS = 24
SUCCESS = 1e-6
PENALTY = 1e3


@dataclass(frozen=True)
class FitProblem:
    id: str
    family: str
    surface_id: str
    names: tuple[str, ...]
    build: Callable            # dict of values -> (basis in the surface frame, surface)
    start_ranges: dict
    base: np.ndarray | None = None   # point forced onto the surface, if any
    description: str = ""


@dataclass(frozen=True)
class FitResult:
    problem: str
    params: dict
    surface_param: dict
    residual: float
    start_residual: float
    iterations: int
    starts: int
    start_index: int
    basis: FieldBasis | None = field(default=None, compare=False)
    surface: Surface | None = field(default=None, compare=False)


def _in_frame(basis: FieldBasis, corr: cc.Correspondence) -> FieldBasis:
    return conjugate(basis, np.linalg.inv(corr.M))


def _power(v):
    A = (v["t1"] * v["m1"] + 2 * v["m3"] ** 2 + 2 * v["m4"] ** 2) / 2
    corr = cc.power_case(v["t1"], v["m1"], A)
    S = surface("2.9", alpha=v["alpha"])
    B = instantiate("5.14", t1=v["t1"], m1=v["m1"], m3=v["m3"], m4=v["m4"])
    return _in_frame(B, corr), S


def _cone(v, alpha=-1.0):
    corr = cc.cone_case(alpha, v["C"])
    return _in_frame(instantiate("5.24", alpha=alpha), corr), corr.surface


def _spiral(v):
    corr = cc.spiral_case(v["m2"], v["t7"])
    S = surface("2.8", B=v["B"])
    B = instantiate("5.4c", m2=v["m2"], t7=v["t7"], t8=v["t8"], t16=v["t16"])
    return _in_frame(B, corr), S


def _exp(v):
    corr = cc.exp_case(v["t7"])
    B = instantiate("5.4c", m2=0.0, t7=v["t7"], t8=v["t8"], t16=v["t16"])
    return _in_frame(B, corr), corr.surface


def _exp_literal(v):
    return instantiate("5.4", m2=0.0, t7=v["t7"], t8=v["t8"], t16=v["t16"]), surface("2.2")


def _sphere(v):
    return instantiate("5.11", xi=v["xi"]), surface("2.6")


FIT_PROBLEMS = {p.id: p for p in [
    FitProblem("5.14/2.9", "5.14", "2.9", ("t1", "m1", "m3", "m4", "alpha"), _power,
               {"t1": (0.5, 2), "m1": (-1, 1), "m3": (0.3, 1.5), "m4": (-1, 1), "alpha": (1.2, 3)},
               description="power surfaces through the closed-form frame map"),
    FitProblem("5.24/5.25", "5.24", "5.25", ("C",), _cone, {"C": (0.2, 3)},
               base=np.array([1, 1, 1], dtype=complex),
               description="alpha = -1 in the basis, C fitted with (1,1,1) on the surface"),
    FitProblem("5.4c/2.8", "5.4c", "2.8", ("m2", "t7", "t8", "t16", "B"), _spiral,
               {"m2": (0.3, 1.5), "t7": (-1, 1), "t8": (-1, 1), "t16": (-1, 1), "B": (-2, 2)},
               description="spiral surfaces through the closed-form frame map"),
    FitProblem("5.4c/2.2", "5.4c", "2.2", ("t7", "t8", "t16"), _exp,
               {"t7": (0.2, 1.5), "t8": (-1, 1), "t16": (-1, 1)},
               description="m2 = 0 through the closed-form frame map"),
    FitProblem("5.4/2.2-literal", "5.4", "2.2", ("t7", "t8", "t16"), _exp_literal,
               {"t7": (0.2, 1.5), "t8": (-1, 1), "t16": (-1, 1)},
               description="m2 = 0, basis and surface in the same frame (no map)"),
    FitProblem("5.11/2.6", "5.11", "2.6", ("xi",), _sphere, {"xi": (-2, 2)}),
]}


def _residual_vector(problem: FitProblem, theta, points_seed: int):
    vals = dict(zip(problem.names, map(float, theta)))
    try:
        basis, S = problem.build(vals)
        pts = sample_points(S, FIT_POINTS, points_seed)
        res = tangency_matrix(basis.fields, S, pts).ravel()
        if problem.base is not None:
            res = np.append(res, float(S.phi(problem.base)))
    except (AHVError, np.linalg.LinAlgError, ValueError):
        n = 5 * FIT_POINTS + (problem.base is not None)
        return np.full(n, PENALTY)
    return np.where(np.isfinite(res), res, PENALTY)


def fit_parameters(problem_id: str, seed: int = 0, starts: int = N_STARTS,
                   raise_on_failure: bool = True) -> FitResult:
    problem = FIT_PROBLEMS[problem_id]
    rng = np.random.default_rng([seed, 0xF17])
    lo = np.array([problem.start_ranges[n][0] for n in problem.names], float)
    hi = np.array([problem.start_ranges[n][1] for n in problem.names], float)
    candidates = []
    for k in range(starts):
        x0 = lo + (hi - lo) * rng.random(len(lo))
        r0 = float(np.max(np.abs(_residual_vector(problem, x0, seed))))
        fun = lambda th: _residual_vector(problem, th, seed)
        m = 5 * FIT_POINTS + (problem.base is not None)
        method = "lm" if m >= len(x0) else "trf"
        sol = least_squares(fun, x0, method=method, xtol=1e-15, ftol=1e-15, gtol=1e-15,
                            max_nfev=400 * (len(x0) + 1))
        r1 = float(np.max(np.abs(fun(sol.x))))
        x, r = (sol.x, r1) if r1 <= r0 else (x0, r0)
        candidates.append((r, k, x, r0, int(sol.nfev)))
    r, k, x, r0, nfev = min(candidates, key=lambda c: (c[0], c[1]))
    vals = dict(zip(problem.names, map(float, x)))
    basis = S = None
    final = r
    try:
        basis, S = problem.build(vals)
        final = tangency_residual(basis, S, 100, seed).max_residual
        if problem.base is not None:
            final = max(final, abs(float(S.phi(problem.base))))
    except AHVError:
        final = float("inf")
    scalar = {n: vals[n] for n in problem.names if n in (S.params if S is not None else {})}
    result = FitResult(problem.id, {n: v for n, v in vals.items() if n not in scalar}, scalar,
                       float(final), float(r0), nfev, starts, k, basis, S)
    if raise_on_failure and not final <= SUCCESS:
        raise FitFailed(f"fit {problem.id}: best residual {final:.3e} above {SUCCESS}", result)
    return result
