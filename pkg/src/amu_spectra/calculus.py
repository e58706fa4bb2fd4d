"""Trapezoid bumps, matrix functional calculus, and ordered theta products.

The bump with center c and width eta is the piecewise-linear function that
is 1 on |t - c| <= 3 eta/4, 0 on |t - c| >= eta, and linear on the two
transition bands. No smoothing is applied; the trapezoid is exact.

A theta product for a tuple (a_1, ..., a_n) at a point xi is the ordered
matrix product bump(a_1) bump(a_2) ... bump(a_n) with factor j centered at
xi_j. The order is fixed left to right and never rearranged: the factors
do not commute in general and the product is usually not Hermitian.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .constants import TOL
from .errors import DimensionMismatch
from .linalg import EigenDecomposition, HermitianMatrix, eig_hermitian, operator_norm
from .observables import OperatorTuple, VectorState

__all__ = [
    "Bump",
    "ThetaProduct",
    "BumpFactorCache",
    "bump_values",
    "bump_eval",
    "apply_function",
    "theta_product",
    "witness_test",
]


def _check_width(width: float) -> float:
    width = float(width)
    if width <= 0.0:
        raise ValueError(f"bump width must be positive, got {width}")
    return width


def bump_values(center: float, width: float, t) -> np.ndarray:
    """Trapezoid bump evaluated elementwise on ``t``."""
    d = np.abs(np.asarray(t, dtype=float) - float(center))
    return np.clip((width - d) * (4.0 / width), 0.0, 1.0)


@dataclass(frozen=True)
class Bump:
    """One trapezoid bump; callable on scalars and arrays."""

    center: float
    width: float

    def __post_init__(self):
        _check_width(self.width)

    def __call__(self, t):
        return bump_values(self.center, self.width, t)


def bump_eval(bump: Bump, t: float) -> float:
    return float(bump_values(bump.center, bump.width, t))


def apply_function(f, a, dec: EigenDecomposition | None = None) -> HermitianMatrix:
    """Apply a real-valued function to a Hermitian matrix spectrally.

    f(A) = U diag(f(w)) U† from the eigendecomposition; the result is
    symmetrized on construction. Pass ``dec`` to reuse a decomposition.
    """
    h = a if isinstance(a, HermitianMatrix) else HermitianMatrix(a)
    if dec is None:
        dec = eig_hermitian(h)
    w = dec.eigenvalues
    try:
        vals = np.asarray(f(w), dtype=float)
        if vals.shape != w.shape:
            raise TypeError
    except TypeError:
        vals = np.array([float(f(x)) for x in w])
    m = (dec.eigenvectors * vals) @ dec.eigenvectors.conj().T
    return HermitianMatrix(m)


@dataclass(frozen=True)
class ThetaProduct:
    """Ordered product of bump factors, one per observable.

    ``value`` is the raw product matrix. ``factor_norms`` are the operator
    norms of the individual factors (each the max of the bump over the
    corresponding spectrum). ``norm`` is computed on first access.
    """

    centers: tuple[float, ...]
    width: float
    value: np.ndarray
    factor_norms: tuple[float, ...]

    @cached_property
    def norm(self) -> float:
        return operator_norm(self.value)


class BumpFactorCache:
    """Per-tuple cache of bump factors keyed by (axis, center, width).

    Keys compare by exact float equality; grid scans re-use the same
    coordinate floats so hits are exact. Eigendecompositions of the
    observables are computed once. Safe for concurrent readers with
    single-writer insertion: values for a key are identical no matter
    which thread computes them first.
    """

    def __init__(self, tup: OperatorTuple):
        self.tuple = tup
        self._eig = [eig_hermitian(op) for op in tup.ops]
        self._matrices: dict[tuple[int, float, float], np.ndarray] = {}
        self._norms: dict[tuple[int, float, float], float] = {}

    def factor_norm(self, axis: int, center: float, width: float) -> float:
        """Operator norm of the bump factor: max of the bump over the spectrum."""
        key = (axis, float(center), float(width))
        got = self._norms.get(key)
        if got is None:
            w = self._eig[axis].eigenvalues
            got = float(np.max(bump_values(key[1], key[2], w)))
            self._norms[key] = got
        return got

    def factor_matrix(self, axis: int, center: float, width: float) -> np.ndarray:
        key = (axis, float(center), float(width))
        got = self._matrices.get(key)
        if got is None:
            dec = self._eig[axis]
            vals = bump_values(key[1], key[2], dec.eigenvalues)
            m = (dec.eigenvectors * vals) @ dec.eigenvectors.conj().T
            m = (m + m.conj().T) / 2.0  # bump is real, so the factor is Hermitian
            m.setflags(write=False)
            self._matrices[key] = m
            got = m
        return got


def theta_product(
    tup: OperatorTuple,
    xi,
    eta: float,
    cache: BumpFactorCache | None = None,
) -> ThetaProduct:
    """Ordered theta product for ``tup`` at the point ``xi`` with width ``eta``."""
    eta = float(eta)
    if not (0.0 < eta < 1.0):
        raise ValueError(f"eta must lie in (0, 1), got {eta}")
    centers = tuple(float(x) for x in np.asarray(xi, dtype=float).reshape(-1))
    if len(centers) != tup.n:
        raise DimensionMismatch(f"point has {len(centers)} coordinates, tuple has n={tup.n}")
    if cache is None:
        cache = BumpFactorCache(tup)
    elif cache.tuple is not tup:
        raise ValueError("cache was built for a different tuple")
    value = cache.factor_matrix(0, centers[0], eta)
    for j in range(1, tup.n):
        value = value @ cache.factor_matrix(j, centers[j], eta)
    fnorms = tuple(cache.factor_norm(j, centers[j], eta) for j in range(tup.n))
    return ThetaProduct(centers, eta, value, fnorms)


def witness_test(theta: ThetaProduct, state: VectorState, eta: float | None = None) -> bool:
    """True when Re <Theta x, x> > 1 - eta for the unit vector x.

    A passing witness certifies ||Theta|| >= 1 - eta; a failing one proves
    nothing. Defaults to the product's own width.
    """
    if eta is None:
        eta = theta.width
    if theta.value.shape[0] != state.dim:
        raise DimensionMismatch(
            f"product dim {theta.value.shape[0]} does not match state dim {state.dim}"
        )
    val = complex(np.vdot(state.vector, theta.value @ state.vector))
    return bool(val.real > 1.0 - float(eta))
