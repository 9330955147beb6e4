"""Catalog of 5- and 7-dimensional algebras and the similarity matrices.

Every builder fills in one basis entry by entry.  Two corrected
variants are registered next to the literal ones:

``5.4c``
    the basis actually produced by conjugating family 3.2 with ``C5.1`` and
    replacing ``E5`` by ``E5 + (m1 - t7)/2 E2``.  The literal entries have
    ``2i m2`` / ``m2`` in the (1,1) slots of ``E1`` / ``E2`` and does not
    close for ``m2 != 0``; the conjugated basis carries ``-2i m2`` / ``2 m2``.
``5.22c``
    the literal basis with entry (2,3) of ``E3`` multiplied by ``i``,
    which is the smallest change making it closed.
"""
from __future__ import annotations

import zlib
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from ..errors import DomainViolation, SamplingExhausted, ShapeMismatch
from ..field_algebra import FieldBasis, TEMPLATE_TRANSLATIONS, as_field

I = 1j
DEFAULT_RANGE = (-2.0, 2.0)
DEFAULT_MARGIN = 0.1
MAX_REDRAWS = 1000


def _m(*rows) -> np.ndarray:
    out = np.zeros((4, 4), dtype=complex)
    for r, row in enumerate(rows):
        out[r, : len(row)] = row
    return out


# recurring generators
def _tr_z1():
    return _m([0, 0, 0, I])


def _z2_pair():
    return (_m([0, 0, 0, 0], [0, 0, 0, 1], [0, 2 * I, 0, 0]),
            _m([0, 0, 0, 0], [0, 0, 0, I], [0, 2, 0, 0]))


def _tr_w():
    return _m([0] * 4, [0] * 4, [0, 0, 0, 1])


@dataclass(frozen=True)
class Family:
    id: str
    params: tuple[str, ...]
    build: Callable[..., list]
    constraints: Callable[[Mapping[str, float], float], list] = lambda p, d: []
    description: str = ""


FAMILIES: dict[str, Family] = {}


def _family(fid, params, constraints=None, description=""):
    def deco(fn):
        FAMILIES[fid] = Family(fid, tuple(params), fn,
                               constraints or (lambda p, d: []), description)
        return fn
    return deco


def _nonzero(name):
    def check(p, delta):
        v = p[name]
        return [] if abs(v) >= delta and v != 0 else [f"|{name}| >= {delta} (got {v!r})"]
    return check


@_family("2.16", (), description="7-dimensional algebra of the quadric v = 2 x1^2 + |z2|^2")
def _a216():
    E3, E4 = _z2_pair()
    return [_m([0, 0, 0, 1], [0] * 4, [4 * I, 0, 0, 0]), _tr_z1(), E3, E4, _tr_w(),
            _m([1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 2, 0]),
            _m([0] * 4, [0, I, 0, 0])]


@_family("3.1", ("m1", "m2", "t16"), _nonzero("m2"))
def _a31(m1, m2, t16):
    E3, E4 = _z2_pair()
    return [_m([m1, 0, 0, 1], [0, m1 + I * m1 * t16 / m2, 0, 0], [4 * I, 0, 2 * m1, 0]),
            _m([m2, 0, 0, I], [0, m2 + I * t16, 0, 0], [0, 0, 2 * m2, 0]),
            E3, E4, _tr_w()]


@_family("3.2", ("m1", "m2", "t7", "t8", "t16"))
def _a32(m1, m2, t7, t8, t16):
    d = m1 - t7
    return [_m([2 * t7 - 2 * m1 - 2 * I * m2, 0, I * (m1 + I * m2) * d, 1],
               [0, t7 + I * t8, 0, 0], [4 * I, 0, 2 * m1, 0]),
            _m([2 * m2, 0, 0, I], [0, m2 + I * t16, 0, 0], [0, 0, 2 * m2, 0]),
            _m([0, -m1 + t7, 0, 0], [0, 0, 0, 1], [0, 2 * I, 0, 0]),
            _m([0, I * d, 0, 0], [0, 0, 0, I], [0, 2, 0, 0]),
            _m([-m2 * d, 0, 0, 0], [0, -0.5 * d * (m2 + I * t16), 0, 0], [0, 0, -m2 * d, 1])]


@_family("3.3", ("m1", "t1", "t7", "t8"))
def _a33(m1, t1, t7, t8):
    d = m1 - t7
    return [_m([t1, 0, -I / 2 * d * (t1 - 2 * t7), 1], [0, t7 + I * t8, 0, 0], [4 * I, 0, 2 * m1, 0]),
            _tr_z1(),
            _m([0, -d, 0, 0], [0, 0, 0, 1], [0, 2 * I, 0, 0]),
            _m([0, I * d, 0, 0], [0, 0, 0, I], [0, 2, 0, 0]),
            _tr_w()]


@_family("3.4", ("m1", "m2", "t16"))
def _a34(m1, m2, t16):
    return [_m([-2 * m1 - 2 * I * m2, 0, I * m1 * (m1 + I * m2), 1], [0, 2 * I * m2, 0, 0],
               [4 * I, 0, 2 * m1, 0]),
            _m([2 * m2, 0, 0, I], [0, 2 * m2 + I * t16, 0, 0], [0, 0, 2 * m2, 0]),
            _m([0, -m1 - I * m2, 0, 0], [-2 * I * m2, 0, -m1 * m2, 1], [0, 2 * I, 0, 0]),
            _m([0, I * m1 - m2, 0, 0], [2 * m2, 0, -I * m1 * m2, I], [0, 2, 0, 0]),
            _m([-m1 * m2, 0, 0, 0], [0, -0.5 * m1 * (2 * m2 + I * t16), 0, 0], [0, 0, -m1 * m2, 1])]


@_family("3.5", ("m1", "t1", "m3", "m4"))
def _a35(m1, t1, m3, m4):
    return [_m([t1, 2 * m3 - 2 * I * m4, -I / 2 * (t1 * m1 + 2 * m3 ** 2 + 2 * m4 ** 2), 1],
               [0] * 4, [4 * I, 0, 2 * m1, 0]),
            _tr_z1(),
            _m([2 * m3, -m1, 0, 0], [0, m3 - I * m4, 0, 1], [0, 2 * I, 2 * m3, 0]),
            _m([2 * m4, I * m1, 0, 0], [0, m4 + I * m3, 0, I], [0, 2, 2 * m4, 0]),
            _tr_w()]


@_family("3.6", ("m1", "m3", "m4"))
def _a36(m1, m3, m4):
    return [_m([-2 * m1, m3 - I * m4, I * m1 ** 2, 1], [0] * 4, [4 * I, 0, 2 * m1, 0]),
            _tr_z1(),
            _m([1.5 * m3, -m1, I / 4 * m1 * m3, 0], [0, m3, 0, 1], [0, 2 * I, 2 * m3, 0]),
            _m([1.5 * m4, I * m1, I / 4 * m1 * m4, 0], [0, m4, 0, I], [0, 2, 2 * m4, 0]),
            _tr_w()]


@_family("3.7", ("m1", "t1", "t3", "t4"))
def _a37(m1, t1, t3, t4):
    T = t3 ** 2 + t4 ** 2
    c = -t3 + I * t4
    return [_m([t1, t3 + I * t4, -I / 2 * (t1 * m1 + T), 1],
               [2 * t3 - 2 * I * t4, 0, I * m1 * c, 0], [4 * I, 0, 2 * m1, 0]),
            _m([0, t4 - I * t3, 0.5 * T, I]),
            _m([t3 - I * t4, -m1, I / 2 * m1 * c, 0],
               [0, -2 * I * t4, I / 2 * c * (t3 + I * t4), 1], [0, 2 * I, 0, 0]),
            _m([-t4 - I * t3, I * m1, 0.5 * m1 * c, 0], [0, -2 * I * t3, 0.5 * T, I], [0, 2, 0, 0]),
            _m([-I / 2 * T, I / 2 * m1 * (t3 + I * t4), -0.25 * m1 * T, 0],
               [0, -I / 2 * T, 0, 0], [0, 0, -I / 2 * T, 1])]


@_family("3.8", ("m1", "m3", "m4"))
def _a38(m1, m3, m4):
    return [_m([-2 * m1, 0, I * m1 ** 2, 1], [0] * 4, [4 * I, 0, 2 * m1, 0]),
            _tr_z1(),
            _m([m3, -m1, I / 2 * m1 * m3, 0], [0, m3 - I * m4, 0, 1], [0, 2 * I, 2 * m3, 0]),
            _m([m4, I * m1, I / 2 * m1 * m4, 0], [0, m4 + I * m3, 0, I], [0, 2, 2 * m4, 0]),
            _tr_w()]


@_family("3.9", ("m1", "m2", "m3", "m4", "t7"))
def _a39(m1, m2, m3, m4, t7):
    d = m1 - t7
    return [_m([3 * t7 - 2 * m1, 0, I / 2 * (2 * m1 - t7) * d, 1], [0, t7, 0, 0], [4 * I, 0, 2 * m1, 0]),
            _m([m2, 0, I / 2 * m2 * d, I], [0, m2, 0, 0], [0, 0, 2 * m2, 0]),
            _m([m3, t7 - m1, I / 2 * m3 * d, 0], [0, m3, 0, 1], [0, 2 * I, 2 * m3, 0]),
            _m([m4, I * d, I / 2 * m4 * d, 0], [0, m4, 0, I], [0, 2, 2 * m4, 0]),
            _m([-0.5 * m2 * d, 0, -I / 4 * m2 * d ** 2, 0], [0, -0.5 * m2 * d, 0, 0],
               [0, 0, -m2 * d, 1])]


@_family("5.2", ("m3", "m4"))
def _r52(m3, m4):
    base = _a216()
    return [base[0], base[1],
            _m([m3, 0, 0, 0], [0, m3 - I * m4, 0, 1], [0, 2 * I, 2 * m3, 0]),
            _m([m4, 0, 0, 0], [0, m4 + I * m3, 0, I], [0, 2, 2 * m4, 0]),
            base[4]]


@_family("5.4", ("m2", "t7", "t8", "t16"), description="literal entries (closes only for m2 = 0)")
def _r54(m2, t7, t8, t16):
    E3, E4 = _z2_pair()
    return [_m([2 * I * m2, 0, 0, 1], [0, t7 + I * t8, 0, 0], [4 * I, 0, 2 * t7, 0]),
            _m([m2, 0, 0, I], [0, m2 + I * t16, 0, 0], [0, 0, 2 * m2, 0]),
            E3, E4, _tr_w()]


@_family("5.4c", ("m2", "t7", "t8", "t16"), description="corrected 5.4: -2i m2 and 2 m2")
def _r54c(m2, t7, t8, t16):
    E3, E4 = _z2_pair()
    return [_m([-2 * I * m2, 0, 0, 1], [0, t7 + I * t8, 0, 0], [4 * I, 0, 2 * t7, 0]),
            _m([2 * m2, 0, 0, I], [0, m2 + I * t16, 0, 0], [0, 0, 2 * m2, 0]),
            E3, E4, _tr_w()]


@_family("5.8", ("r", "t7", "t8"))
def _r58(r, t7, t8):
    E3, E4 = _z2_pair()
    return [_m([r, 0, 0, 1], [0, t7 + I * t8, 0, 0], [4 * I, 0, 2 * t7, 0]),
            _tr_z1(), E3, E4, _tr_w()]


@_family("5.11", ("xi",))
def _r511(xi):
    return [_m([-I, 0, 0, 0], [0, I, 0, 0]),
            _m([1, 0, 0, 0], [0, 1 + I * xi, 0, 0], [0, 0, 1, 0]),
            _m([0, I, 0, 0], [I, 0, 0, 0]),
            _m([0, 1, 0, 0], [-1, 0, 0, 0]),
            _tr_w()]


@_family("5.14", ("t1", "m1", "m3", "m4"))
def _r514(t1, m1, m3, m4):
    A = (t1 * m1 + 2 * m3 ** 2 + 2 * m4 ** 2) / 2
    return [_m([t1, 0, -I * A, 0], [0] * 4, [4 * I, 0, 2 * m1, 0]),
            _tr_z1(),
            _m([2, 0, 0, 0], [0, 1, 0, 0], [0, 0, 2, 0]),
            _m([0] * 4, [0, I, 0, 0]),
            _tr_w()]


@_family("5.19", ())
def _r519():
    return [_m([0, 1, 0, 0], [0] * 4, [2 * I, 0, 0, 0]),
            _tr_z1(),
            _m([3, 0, 0, 0], [0, 2, 0, 0], [0, 0, 4, 0]),
            _m([0] * 4, [0, 0, 0, -2 * I], [0, 1, 0, 0]),
            _tr_w()]


def _t34_nonzero(p, delta):
    T = p["t3"] ** 2 + p["t4"] ** 2
    return [] if T >= delta ** 2 and T > 0 else [f"t3^2 + t4^2 >= {delta ** 2} (got {T!r})"]


def _r522_common():
    return [_m([0, 0, 1, 0]), _m([0] * 4, [0, 0, 1, 0]),
            _m([1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0]),
            _m([I, 0, 0, 0], [0, I, 0, 0], [0, 0, I, 0])]


def _r522_E1(t1, m1, t3, t4):
    A = t3 ** 2 + t4 ** 2 + t1 * m1 / 2
    return _m([t1, -I * A, 0, 0], [4 * I, 2 * m1, 0, 0])


@_family("5.22", ("t1", "m1", "t3", "t4"), _t34_nonzero, "literal entries (does not close)")
def _r522(t1, m1, t3, t4):
    return [_r522_E1(t1, m1, t3, t4)] + _r522_common()


@_family("5.22c", ("t1", "m1", "t3", "t4"), _t34_nonzero, "corrected 5.22: E3 entry (2,3) = i")
def _r522c(t1, m1, t3, t4):
    rest = _r522_common()
    rest[1] = _m([0] * 4, [0, 0, I, 0])
    return [_r522_E1(t1, m1, t3, t4)] + rest


def _alpha_negative(p, delta):
    a = p["alpha"]
    return [] if a <= -delta and a < 0 else [f"alpha <= -{delta} (got {a!r})"]


@_family("5.24", ("alpha",), _alpha_negative)
def _r524(alpha):
    return [_m([1, 0, 0, 0], [0, alpha, 0, 0])] + _r522_common()


# ---------------------------------------------------------------------------


def family_ids(prefix: str = "") -> list[str]:
    return [f for f in FAMILIES if f.startswith(prefix)]


PUBLISHED_FAMILIES = [f"3.{k}" for k in range(1, 10)]


def check_params(family: str, params: Mapping[str, float], delta: float = 0.0) -> dict:
    fam = _get(family)
    missing = [p for p in fam.params if p not in params]
    extra = [p for p in params if p not in fam.params]
    if missing or extra:
        raise DomainViolation(f"family {family}: missing {missing}, unexpected {extra}")
    vals = {k: float(params[k]) for k in fam.params}
    if not all(np.isfinite(v) for v in vals.values()):
        raise DomainViolation(f"family {family}: parameters must be finite")
    bad = fam.constraints(vals, delta)
    if bad:
        raise DomainViolation(f"family {family}: " + "; ".join(bad))
    return vals


def _get(family: str) -> Family:
    try:
        return FAMILIES[family]
    except KeyError:
        raise DomainViolation(f"unknown family {family!r}") from None


def instantiate(family: str, params: Mapping[str, float] | None = None, **kw) -> FieldBasis:
    """Build the basis of ``family`` at the given parameter values."""
    vals = check_params(family, {**(params or {}), **kw})
    fields = [as_field(E) for E in _get(family).build(**vals)]
    label = family + ("" if not vals else "(" + ", ".join(f"{k}={v!r}" for k, v in vals.items()) + ")")
    return FieldBasis(np.array(fields), label, vals)


def sample_params(family: str, range_=DEFAULT_RANGE, seed: int = 0, index: int = 0,
                  margin: float = DEFAULT_MARGIN) -> dict:
    """Deterministic parameter draw for ``(seed, index)`` honouring all constraints."""
    lo, hi = map(float, range_)
    if not hi > lo:
        raise ValueError(f"empty range {range_!r}")
    fam = _get(family)
    rng = np.random.default_rng([seed, index, zlib.crc32(family.encode())])
    for _ in range(MAX_REDRAWS):
        vals = {p: float(rng.uniform(lo, hi)) for p in fam.params}
        if not fam.constraints(vals, margin):
            return vals
    raise SamplingExhausted(f"family {family}: no draw met margin {margin} in {MAX_REDRAWS} tries")


def structure_constraints(basis: FieldBasis, eps1: float, eps2: float) -> float:
    """Largest violation of ``c1 = 2i(conj p + 2 eps1 p)``, ``c2 = 2i(conj s + 2 eps2 s)``, ``Im q = 0``."""
    F = basis.fields
    if len(F) != 5 or np.max(np.abs(F[:, :3, 3] - TEMPLATE_TRANSLATIONS)) > 1e-12:
        raise ShapeMismatch("translation columns are not (1,0,0), (i,0,0), (0,1,0), (0,i,0), (0,0,1)")
    p, s, q = F[:, 0, 3], F[:, 1, 3], F[:, 2, 3]
    c1, c2 = F[:, 2, 0], F[:, 2, 1]
    dev = np.concatenate([
        np.abs(c1 - 2j * (np.conj(p) + 2 * eps1 * p)),
        np.abs(c2 - 2j * (np.conj(s) + 2 * eps2 * s)),
        np.abs(q.imag),
    ])
    return float(dev.max())


# ---------------------------------------------------------------------------
# similarity matrices


def transform_c51(lam: float) -> np.ndarray:
    C = np.eye(4, dtype=complex)
    C[0, 2] = I * lam
    return C


def transform_s_printed(m1: float, m3: float, m4: float = 0.0) -> np.ndarray:
    """The eigenvector matrix exactly as displayed (last row ``(0,0,0,-2 m3^2)``)."""
    if m3 == 0:
        raise DomainViolation("S needs m3 != 0")
    return np.array([[1, m1, I * m1, m1],
                     [0, m3, 0, 2 * m3],
                     [0, -2 * I, 2, -2 * I],
                     [0, 0, 0, -2 * m3 ** 2]], dtype=complex)


def transform_s(m1: float, m3: float, m4: float = 0.0) -> np.ndarray:
    """``S`` rescaled to last row (0,0,0,1); conjugation is unchanged by the scalar."""
    S = transform_s_printed(m1, m3, m4)
    S = S / S[3, 3].real
    S[3, 3] = 1.0
    return S


def transform_d(m3: float, m4: float) -> np.ndarray:
    if m3 == 0:
        raise DomainViolation("D needs m3 != 0")
    return np.diag([(m3 ** 2 + m4 ** 2) / m3, (m3 + I * m4) / m3,
                    (m3 ** 2 + m4 ** 2) / m3 ** 2, 1]).astype(complex)


def transform_p526() -> np.ndarray:
    """Coordinate swap ``z1 = z2*, z2 = w*, w = z1*`` as ``zeta = P zeta*``."""
    P = np.zeros((4, 4), dtype=complex)
    P[0, 1] = P[1, 2] = P[2, 0] = P[3, 3] = 1
    return P


def eigen_522(t1: float, m1: float, t3: float, t4: float) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and eigenvectors of the z1-w block ``[[t1, A], [4, 2 m1]]`` of E1."""
    A = t3 ** 2 + t4 ** 2 + t1 * m1 / 2
    ev, R = np.linalg.eig(np.array([[t1, A], [4.0, 2 * m1]]))
    order = np.argsort(-ev.real)
    return ev.real[order], R.real[:, order]


def transform_eig522(t1: float, m1: float, t3: float, t4: float) -> np.ndarray:
    """Diagonalizes E1 of family 5.22c; the image is family 5.24 with alpha = lambda2 / lambda1."""
    _, R = eigen_522(t1, m1, t3, t4)
    P = np.eye(4, dtype=complex)
    P[:2, :2] = np.diag([1, I]) @ R
    return P


TRANSFORMS = {
    "C5.1": (("lam",), transform_c51),
    "S": (("m1", "m3", "m4"), transform_s),
    "D": (("m3", "m4"), transform_d),
    "P5.26": ((), transform_p526),
    "E5.22": (("t1", "m1", "t3", "t4"), transform_eig522),
}


def build_transform(tag: str, **params) -> np.ndarray:
    try:
        names, fn = TRANSFORMS[tag]
    except KeyError:
        raise DomainViolation(f"unknown transform {tag!r}") from None
    missing = [n for n in names if n not in params]
    if missing:
        raise DomainViolation(f"transform {tag}: missing {missing}")
    return fn(**{n: float(params[n]) for n in names})
