"""Finite models of behavior at infinity: compressions, decay, state sequences.

For a tuple on C^dim with basis u_1, ..., u_dim, the cut at m drops the
first m basis vectors. One-sided tails keep indices m+1..dim; interior
windows keep m+1..dim-m and avoid the far boundary as well, which matters
for truncated models whose commutators carry boundary terms at both ends.

``essential_spectrum_estimate`` scans compressed tuples at a fixed
resolution across increasing cuts and reports the Hausdorff distance
between the last two accepted sets as the stability of the estimate. The
estimate is reported as-is and never extrapolated.

``amu_sequence`` builds one state per cut, supported in the escaping
window [m+1, min(2m, dim-m)]: each state is exactly orthogonal to the
first m basis vectors while the window width grows with m, so the
standard deviations shrink as the cuts increase.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .constants import GRID_POINT_CAP
from .errors import DimensionMismatch
from .linalg import operator_norm
from .observables import AmuCertificate, OperatorTuple, VectorState, amu_check
from .search import ground_state
from .spectrum import SyntheticSpectrumResult, hausdorff, scan

__all__ = [
    "TailCompression",
    "EssentialLevel",
    "EssentialSpectrumEstimate",
    "tail_compression",
    "tail_commutator_decay",
    "essential_spectrum_estimate",
    "amu_sequence",
    "escape_window",
    "boundary_block_norm",
]


@dataclass(frozen=True)
class TailCompression:
    """A tuple compressed to a contiguous index window (0-based, half-open)."""

    m: int
    window: tuple[int, int]
    tuple_tail: OperatorTuple


def _validate_cut(dim: int, m: int) -> int:
    m = int(m)
    if m < 0:
        raise ValueError(f"cut {m} is negative")
    if m >= dim:
        raise ValueError(f"cut {m} must be below dim {dim}")
    return m


def tail_compression(tup: OperatorTuple, m: int, interior: bool = False) -> TailCompression:
    """Compress every observable to the window left after cutting at ``m``.

    One-sided (default): indices m..dim-1. Interior: indices m..dim-m-1,
    trimming the same amount from both ends. The window must keep at least
    two dimensions. Compression cannot grow operator norms, so the bound
    carries over and grids for compressed scans match the full-space ones.
    """
    m = _validate_cut(tup.dim, m)
    lo = m
    hi = tup.dim - m if interior else tup.dim
    if hi - lo < 2:
        raise ValueError(
            f"cut {m} leaves a window of size {hi - lo}; need at least 2"
        )
    ops = [op.array[lo:hi, lo:hi] for op in tup.ops]
    return TailCompression(m, (lo, hi), OperatorTuple(ops, bound=tup.bound))


def tail_commutator_decay(
    tup: OperatorTuple,
    cuts,
    interior: bool = False,
) -> list[tuple[int, float]]:
    """Worst commutator norm surviving each cut.

    One-sided (default): max over pairs of ||[T_i, T_j] (1 - p_m)||, the
    commutator with its first m columns removed. Interior: the commutator
    compressed to the window from both sides, which also removes
    far-boundary terms of truncated models. Values are reported per cut;
    a nonincreasing trend is expected but not enforced.
    """
    cuts = [(_validate_cut(tup.dim, m)) for m in cuts]
    arrs = tup.arrays()
    dim = tup.dim
    commutators = []
    for i in range(tup.n):
        for j in range(i + 1, tup.n):
            commutators.append(arrs[i] @ arrs[j] - arrs[j] @ arrs[i])
    out: list[tuple[int, float]] = []
    for m in cuts:
        worst = 0.0
        for k in commutators:
            if interior:
                hi = dim - m
                piece = k[m:hi, m:hi] if hi - m > 0 else np.zeros((1, 1))
            else:
                piece = k[:, m:]
            if piece.size:
                worst = max(worst, float(np.linalg.svd(piece, compute_uv=False)[0]))
        out.append((m, worst))
    return out


@dataclass(frozen=True)
class EssentialLevel:
    """One compression level of an essential-spectrum estimate."""

    cut: int
    window: tuple[int, int]
    result: SyntheticSpectrumResult


@dataclass(frozen=True)
class EssentialSpectrumEstimate:
    """Accepted sets across compression levels with a stability figure.

    ``stability`` is the Hausdorff distance between the accepted sets of
    the last two levels, or None when either of them is empty.
    ``stabilized`` is the accepted point set of the deepest level.
    """

    eta: float
    cuts: tuple[int, ...]
    levels: tuple[EssentialLevel, ...]
    stabilized: np.ndarray
    stability: float | None

    def to_json_dict(self) -> dict:
        return {
            "eta": self.eta,
            "cuts": list(self.cuts),
            "levels": [
                {
                    "cut": lvl.cut,
                    "window": list(lvl.window),
                    "spectrum": lvl.result.to_json_dict(),
                }
                for lvl in self.levels
            ],
            "stabilized": [[float(x) for x in row] for row in self.stabilized],
            "stability": self.stability,
        }


def essential_spectrum_estimate(
    tup: OperatorTuple,
    eta: float,
    cuts,
    *,
    interior: bool = True,
    k: int | None = None,
    cap: int | None = GRID_POINT_CAP,
    threads: int = 1,
) -> EssentialSpectrumEstimate:
    """Scan compressed tuples across increasing cuts at one resolution.

    ``cuts`` must be strictly increasing and leave at least two dimensions
    at the deepest level. Interior windows are the default model of
    behavior away from the boundary. Empty accepted sets are recorded, not
    fatal; stability is then None. Stop refining when stability reaches
    the grid pitch 1/k; the estimate never extrapolates beyond its levels.
    """
    cuts = [int(m) for m in cuts]
    if len(cuts) < 2:
        raise ValueError("need at least two cuts to report stability")
    if any(b <= a for a, b in zip(cuts, cuts[1:])):
        raise ValueError(f"cuts must be strictly increasing, got {cuts}")
    levels = []
    for m in cuts:
        comp = tail_compression(tup, m, interior=interior)
        result = scan(comp.tuple_tail, eta, k=k, cap=cap, threads=threads)
        levels.append(EssentialLevel(cut=m, window=comp.window, result=result))
    last = levels[-1].result.accepted_points()
    prev = levels[-2].result.accepted_points()
    stability = None
    if last.shape[0] > 0 and prev.shape[0] > 0:
        stability = hausdorff(last, prev)
    return EssentialSpectrumEstimate(
        eta=float(eta),
        cuts=tuple(cuts),
        levels=tuple(levels),
        stabilized=last,
        stability=stability,
    )


def escape_window(dim: int, m: int) -> tuple[int, int]:
    """Window [m, min(2m, dim - m)) used by ``amu_sequence`` at cut ``m``.

    States supported here are orthogonal to the first m basis vectors and
    stay clear of the far boundary; the width grows with m up to dim/3.
    """
    m = int(m)
    if m < 1:
        raise ValueError("cuts must be at least 1")
    stop = min(2 * m, dim - m)
    if stop - m < 2:
        raise ValueError(
            f"cut {m} leaves an escape window of size {stop - m} on dim {dim}; "
            "need at least 2"
        )
    return m, stop


def _broadcast_schedule(values, count: int, name: str) -> list[float]:
    if np.isscalar(values):
        return [float(values)] * count
    out = [float(v) for v in values]
    if len(out) != count:
        raise ValueError(f"{name} has {len(out)} entries for {count} cuts")
    return out


def amu_sequence(
    tup: OperatorTuple,
    lam,
    cuts,
    sigma_schedule,
    eps_schedule=None,
    estimate: EssentialSpectrumEstimate | None = None,
) -> list[AmuCertificate]:
    """One AMU certificate per cut, measured against the full tuple.

    The state for cut m is the localization ground state computed inside
    the escaping window and embedded back with exact zeros elsewhere.
    ``sigma_schedule`` (and optionally ``eps_schedule``) give the
    certification levels per cut; scalars broadcast. When an estimate is
    supplied, a target outside its stabilized set (beyond its eta) only
    warns: the certificates still report what was measured.
    """
    lam_arr = np.asarray(lam, dtype=float).reshape(-1)
    if lam_arr.shape[0] != tup.n:
        raise DimensionMismatch(
            f"lambda has {lam_arr.shape[0]} coordinates, tuple has n={tup.n}"
        )
    cuts = [int(m) for m in cuts]
    sigmas = _broadcast_schedule(sigma_schedule, len(cuts), "sigma_schedule")
    epss = (
        sigmas
        if eps_schedule is None
        else _broadcast_schedule(eps_schedule, len(cuts), "eps_schedule")
    )
    if estimate is not None:
        pts = estimate.stabilized
        if pts.shape[0] == 0 or float(
            np.sqrt(((pts - lam_arr) ** 2).sum(axis=1)).min()
        ) > estimate.eta:
            warnings.warn(
                "target point lies outside the stabilized essential-spectrum "
                "estimate; certificates may be weak",
                stacklevel=2,
            )
    certs: list[AmuCertificate] = []
    for m, sg, ep in zip(cuts, sigmas, epss):
        lo, hi = escape_window(tup.dim, m)
        windowed = OperatorTuple(
            [op.array[lo:hi, lo:hi] for op in tup.ops], bound=tup.bound
        )
        inner_state, _ = ground_state(windowed, lam_arr)
        full = np.zeros(tup.dim, dtype=np.complex128)
        full[lo:hi] = inner_state.vector
        certs.append(amu_check(tup, VectorState(full), lam_arr, sg, ep))
    return certs


def boundary_block_norm(tup: OperatorTuple, window: tuple[int, int]) -> float:
    """Largest norm of a coupling block between a window and its complement.

    Bounds how much any sd measured on the full space can exceed the one
    measured on the compression, for states supported in the window.
    """
    lo, hi = window
    worst = 0.0
    for op in tup.ops:
        block = np.concatenate([op.array[:lo, lo:hi], op.array[hi:, lo:hi]], axis=0)
        if block.size:
            worst = max(worst, float(np.linalg.svd(block, compute_uv=False)[0]))
    return worst
