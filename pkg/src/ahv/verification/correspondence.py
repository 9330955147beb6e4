"""Closed-form affine maps from the frame of a reduced basis to a catalog surface.

Each map ``M`` is a 4x4 affine matrix with ``zeta_catalog = M zeta_frame``.
The integral surface of the basis in its own frame is the catalog surface
pulled back by ``M``; equivalently the basis conjugated by ``M^{-1}`` is
tangent to the catalog surface itself.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..catalog.surfaces import Surface, surface
from ..errors import DomainViolation


def affine(rows) -> np.ndarray:
    M = np.zeros((4, 4), dtype=complex)
    M[:3] = np.asarray(rows, dtype=complex)
    M[3, 3] = 1
    return M


@dataclass(frozen=True)
class Correspondence:
    surface: Surface
    M: np.ndarray
    note: str = ""


def exp_case(t7: float) -> Correspondence:
    """``m2 = 0``: ``H = e^{2 t7 x1} - 2 x1 / t7 - 1 / t7^2`` becomes ``v = exp(x1) + |z2|^2``."""
    if t7 == 0:
        raise DomainViolation("exp case needs t7 != 0")
    M = affine([[2 * t7, 0, 0, 0], [0, 1, 0, 0], [2j / t7, 0, 1, 1j / t7 ** 2]])
    return Correspondence(surface("2.2"), M, "z1' = 2 t7 z1, w' = w + 2i z1 / t7 + i / t7^2")


def spiral_case(m2: float, t7: float) -> Correspondence:
    """``m2 != 0``: logarithmic-spiral surface with ``B = -t7 / m2``."""
    if m2 == 0:
        raise DomainViolation("spiral case needs m2 != 0")
    d = t7 ** 2 + m2 ** 2
    a, b = -2 * t7 / d, -2 * m2 / d
    c = 1j / (2 * m2)
    M = affine([[1, 0, 0, c], [0, 1, 0, 0], [-(1j * a + b), 0, 1, -(1j * a + b) * c]])
    return Correspondence(surface("2.8", B=-t7 / m2), M,
                          "z1' = z1 + i/(2 m2), w' = w - (i a + b)(z1 + i/(2 m2))")


def tube_case(r: float, t7: float) -> Correspondence:
    """Solutions of ``(1 + r x1) H' = 2 t7 H + 4 x1`` as one of the five tubes."""
    if t7 == 0 and r == 0:
        return Correspondence(surface("2.1"), np.eye(4, dtype=complex), "quadric")
    if t7 == 0:
        M = affine([[r, 0, 0, 0], [0, r / 2, 0, 0], [-1j * r, 0, r ** 2 / 4, 0]])
        return Correspondence(surface("2.3"), M, "x1' = r x1, z2' = r z2 / 2, w' = r^2 (w - 4i z1 / r) / 4")
    if r == 0:
        return exp_case(t7)
    alpha = 2 * t7 / r
    if np.isclose(alpha, 1.0, rtol=0, atol=1e-12):
        M = affine([[r, 0, 0, 0], [0, r / 2, 0, 0], [0, 0, r ** 2 / 4, -1j]])
        return Correspondence(surface("2.5"), M, "z1' = r z1, z2' = r z2 / 2, w' = r^2 w / 4 - i")
    if np.isclose(alpha, 2.0, rtol=0, atol=1e-12):
        raise DomainViolation("alpha = 2 gives a quadric with a linear shift, outside surface 2.4")
    a = 4 / (r * (1 - alpha))
    b = 4 / (alpha * r ** 2 * (1 - alpha))
    M = affine([[r, 0, 0, 0], [0, 1, 0, 0], [-1j * a, 0, 1, -1j * b]])
    return Correspondence(surface("2.4", alpha=alpha), M, "z1' = r z1, w' = w - i a z1 - i b")


def power_case(t1: float, m1: float, A: float, K: float = 1.0) -> Correspondence:
    """Integral surfaces ``|v - h1 x1|^a |v - h2 x1|^b = |z2|^2 / K`` as ``v = x1^(1-alpha) |z2|^(2 alpha)``.

    ``h1, h2`` are the roots of ``A h^2 + (t1 - 2 m1) h - 4``, ``alpha = 1 / b``.
    """
    B = t1 - 2 * m1
    disc = B * B + 16 * A
    if A == 0 or disc <= 0 or K <= 0:
        raise DomainViolation("power case needs A != 0, real distinct roots and K > 0")
    h1 = (-B + np.sqrt(disc)) / (2 * A)
    h2 = (-B - np.sqrt(disc)) / (2 * A)
    a = (t1 + A * h1) / (A * (h1 - h2))
    b = 1 - a
    if b == 0 or b == 1:
        raise DomainViolation("degenerate exponent in the power case")
    M = affine([[-h1, 0, -1j, 0], [0, 1 / np.sqrt(K), 0, 0], [-1j * h2, 0, 1, 0]])
    return Correspondence(surface("2.9", alpha=1 / b), M,
                          "z1' = -h1 z1 - i w, z2' = z2 / sqrt(K), w' = w - i h2 z1")


def power_exponent(t1: float, m1: float, A: float) -> float:
    return power_case(t1, m1, A).surface.params["alpha"]


# the coordinate swap used with the negative-alpha family
SWAP_526 = affine([[0, 0, 1, 0], [-1j, 0, 0, 0], [0, -1j, 0, 0]])


def cone_case(alpha: float, C: float = 1.0) -> Correspondence:
    return Correspondence(surface("5.25", alpha=alpha, C=C), SWAP_526,
                          "z1'' = w, z2'' = -i z1, w'' = -i z2")
