"""Model families, deterministic pseudo-randomness, and file formats.

Randomized families draw from a counter-based SplitMix64 stream rather
than the platform generator so that the same seed yields bit-identical
matrices on every platform and in every language that implements the
same three-constant mixer:

    z   = seed + (i + 1) * 0x9E3779B97F4A7C15        (mod 2^64)
    z  ^= z >> 30;  z *= 0xBF58476D1CE4E5B9          (mod 2^64)
    z  ^= z >> 27;  z *= 0x94D049BB133111EB          (mod 2^64)
    out = z ^ (z >> 31)

Doubles take the top 53 bits: (out >> 11) * 2^-53 in [0, 1).

Tuple files are JSON with shape {n, dim, M, ops: [{re: [[...]], im:
[[...]]}], meta?: {...}} (floats round-trip exactly through their
shortest decimal representation) or NumPy .npz archives for a binary
lossless alternative.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import TupleFormatError
from .linalg import HermitianMatrix, operator_norm
from .observables import OperatorTuple

__all__ = [
    "ModelSpec",
    "FAMILIES",
    "splitmix64",
    "uniform_doubles",
    "generate",
    "save_tuple",
    "load_tuple",
    "tuple_to_json_dict",
    "write_accepted_csv",
]

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX_1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX_2 = np.uint64(0x94D049BB133111EB)
_MASK = 0xFFFFFFFFFFFFFFFF


def splitmix64(seed: int, count: int) -> np.ndarray:
    """``count`` SplitMix64 outputs for ``seed``, as uint64, vectorized."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    idx = np.arange(1, count + 1, dtype=np.uint64)
    z = np.uint64(int(seed) & _MASK) + idx * _GOLDEN
    z = (z ^ (z >> np.uint64(30))) * _MIX_1
    z = (z ^ (z >> np.uint64(27))) * _MIX_2
    return z ^ (z >> np.uint64(31))


def uniform_doubles(seed: int, count: int, low: float = 0.0, high: float = 1.0) -> np.ndarray:
    """Deterministic uniform doubles in [low, high) from the SplitMix64 stream."""
    bits = splitmix64(seed, count) >> np.uint64(11)
    unit = bits.astype(np.float64) * (2.0 ** -53)
    return low + unit * (high - low)


@dataclass(frozen=True)
class ModelSpec:
    """Which family to build, at which size, from which seed."""

    family: str
    dim: int
    n: int = 2
    seed: int = 0
    params: Mapping[str, object] = field(default_factory=dict)


def _shift_matrix(dim: int) -> np.ndarray:
    s = np.zeros((dim, dim), dtype=np.complex128)
    for j in range(dim - 1):
        s[j + 1, j] = 1.0
    return s


def _shift_pair(dim: int) -> OperatorTuple:
    s = _shift_matrix(dim)
    a1 = (s + s.conj().T) / 2.0
    a2 = -(s - s.conj().T) / 2.0j
    return OperatorTuple([a1, a2], bound=1.0)


def _commuting_diag(spec: ModelSpec) -> OperatorTuple:
    low = float(spec.params.get("eigen_low", -1.0))
    high = float(spec.params.get("eigen_high", 1.0))
    if not (low < high):
        raise ValueError("eigen_low must be below eigen_high")
    draws = uniform_doubles(spec.seed, spec.n * spec.dim, low, high)
    ops = []
    for j in range(spec.n):
        diag = draws[j * spec.dim : (j + 1) * spec.dim]
        ops.append(np.diag(diag.astype(np.complex128)))
    bound = max(1.0, float(np.max(np.abs(draws))))
    return OperatorTuple(ops, bound=bound)


def _random_hermitian(seed: int, dim: int) -> np.ndarray:
    re = uniform_doubles(seed, dim * dim, -1.0, 1.0).reshape(dim, dim)
    im = uniform_doubles(seed ^ 0x5DEECE66D, dim * dim, -1.0, 1.0).reshape(dim, dim)
    r = re + 1j * im
    return (r + r.conj().T) / 2.0


def _perturbed_commuting(spec: ModelSpec) -> OperatorTuple:
    size = float(spec.params.get("perturbation", 0.01))
    if size < 0:
        raise ValueError("perturbation size must be nonnegative")
    low = float(spec.params.get("eigen_low", -0.95))
    high = float(spec.params.get("eigen_high", 0.95))
    base = _commuting_diag(
        ModelSpec("commuting_diag", spec.dim, spec.n, spec.seed,
                  {"eigen_low": low, "eigen_high": high})
    )
    ops = []
    for j, arr in enumerate(base.arrays()):
        e = _random_hermitian(spec.seed + 1000003 * (j + 1), spec.dim)
        nrm = operator_norm(e)
        if nrm > 0 and size > 0:
            arr = arr + e * (size / nrm)
        ops.append(arr)
    bound = max(1.0, max(operator_norm(op) for op in ops))
    return OperatorTuple(ops, bound=bound)


def _clock_shift_triple(dim: int) -> OperatorTuple:
    angles = 2.0 * np.pi * np.arange(dim) / dim
    t1 = np.diag(np.cos(angles).astype(np.complex128))
    t2 = np.diag(np.sin(angles).astype(np.complex128))
    v = np.zeros((dim, dim), dtype=np.complex128)
    for j in range(dim):
        v[(j + 1) % dim, j] = 1.0
    t3 = (v + v.conj().T) / 2.0
    return OperatorTuple([t1, t2, t3], bound=1.0)


FAMILIES = ("shift_pair", "commuting_diag", "perturbed_commuting",
            "clock_shift_triple", "custom_file")


def generate(spec: ModelSpec) -> OperatorTuple:
    """Build the observable tuple described by ``spec``.

    Deterministic: equal specs produce bit-identical matrices.
    """
    if spec.family not in FAMILIES:
        raise ValueError(
            f"unknown family {spec.family!r}; available: {', '.join(FAMILIES)}"
        )
    if spec.family == "custom_file":
        path = spec.params.get("path")
        if not path:
            raise ValueError("custom_file needs a 'path' parameter")
        return load_tuple(str(path))[0]
    if spec.dim < 2:
        raise ValueError("dim must be at least 2")
    if spec.family == "shift_pair":
        if spec.n != 2:
            raise ValueError("shift_pair is a pair; pass n=2")
        return _shift_pair(spec.dim)
    if spec.family == "clock_shift_triple":
        if spec.n != 3:
            raise ValueError("clock_shift_triple is a triple; pass n=3")
        return _clock_shift_triple(spec.dim)
    if spec.n < 1:
        raise ValueError("n must be at least 1")
    if spec.family == "commuting_diag":
        return _commuting_diag(spec)
    return _perturbed_commuting(spec)


def tuple_to_json_dict(tup: OperatorTuple, meta: dict | None = None) -> dict:
    d = {
        "n": tup.n,
        "dim": tup.dim,
        "M": tup.bound,
        "ops": [
            {
                "re": [[float(z.real) for z in row] for row in op.array],
                "im": [[float(z.imag) for z in row] for row in op.array],
            }
            for op in tup.ops
        ],
    }
    if meta:
        d["meta"] = meta
    return d


def save_tuple(tup: OperatorTuple, path, fmt: str = "json",
               meta: dict | None = None) -> None:
    """Write ``tup`` to ``path`` as JSON (default) or a binary .npz archive.

    Both formats round-trip the matrices exactly: JSON through shortest
    decimal float representations, npz through raw IEEE bytes.
    """
    path = os.fspath(path)
    if fmt == "json":
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(tuple_to_json_dict(tup, meta), fh, indent=2)
            fh.write("\n")
    elif fmt == "npz":
        payload = {
            "n": np.array(tup.n),
            "dim": np.array(tup.dim),
            "M": np.array(tup.bound),
            "ops": np.stack(tup.arrays()),
        }
        if meta:
            payload["meta_json"] = np.frombuffer(
                json.dumps(meta).encode("utf-8"), dtype=np.uint8
            )
        with open(path, "wb") as fh:
            np.savez(fh, **payload)
    else:
        raise ValueError(f"unknown format {fmt!r}; use 'json' or 'npz'")


def _load_json_tuple(path: str) -> tuple[OperatorTuple, dict]:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TupleFormatError(
            f"{path}: parse error at byte offset {exc.pos}: {exc.msg}"
        ) from exc
    for key in ("n", "dim", "M", "ops"):
        if key not in d:
            raise TupleFormatError(f"{path}: missing key {key!r}")
    n, dim = int(d["n"]), int(d["dim"])
    if len(d["ops"]) != n:
        raise TupleFormatError(
            f"{path}: declared n={n} but found {len(d['ops'])} operators"
        )
    ops = []
    for j, entry in enumerate(d["ops"]):
        re = np.asarray(entry["re"], dtype=float)
        im = np.asarray(entry["im"], dtype=float)
        if re.shape != (dim, dim) or im.shape != (dim, dim):
            raise TupleFormatError(
                f"{path}: operator {j} has shape {re.shape}/{im.shape}, "
                f"expected ({dim}, {dim})"
            )
        try:
            ops.append(HermitianMatrix(re + 1j * im))
        except ValueError as exc:
            raise TupleFormatError(f"{path}: operator {j}: {exc}") from exc
    try:
        tup = OperatorTuple(ops, bound=float(d["M"]))
    except ValueError as exc:
        raise TupleFormatError(f"{path}: {exc}") from exc
    meta = d.get("meta") or {}
    if not isinstance(meta, dict):
        raise TupleFormatError(f"{path}: meta must be an object")
    return tup, meta


def _load_npz_tuple(path: str) -> tuple[OperatorTuple, dict]:
    with np.load(path) as archive:
        ops = archive["ops"]
        bound = float(archive["M"])
        declared_n = int(archive["n"])
        declared_dim = int(archive["dim"])
        meta = {}
        if "meta_json" in archive:
            meta = json.loads(bytes(archive["meta_json"]).decode("utf-8"))
    if ops.ndim != 3 or ops.shape[0] != declared_n or ops.shape[1] != declared_dim:
        raise TupleFormatError(f"{path}: inconsistent array shapes {ops.shape}")
    try:
        return OperatorTuple([HermitianMatrix(op) for op in ops], bound=bound), meta
    except ValueError as exc:
        raise TupleFormatError(f"{path}: {exc}") from exc


def load_tuple(path) -> tuple[OperatorTuple, dict]:
    """Read a tuple file; returns the tuple and its metadata mapping.

    Shape, Hermitian symmetry, and the norm bound are all validated.
    Files missing a meta block yield an empty mapping.
    """
    path = os.fspath(path)
    if not os.path.exists(path):
        raise TupleFormatError(f"{path}: no such file")
    # Zip magic identifies npz archives regardless of extension.
    with open(path, "rb") as fh:
        magic = fh.read(2)
    if magic == b"PK":
        return _load_npz_tuple(path)
    return _load_json_tuple(path)


def write_accepted_csv(result, path: str) -> None:
    """Accepted spectrum points as CSV: coord_1..coord_n, theta_norm."""
    n = result.grid.n
    header = ",".join(f"coord_{j + 1}" for j in range(n)) + ",theta_norm"
    lines = [header]
    for point, nrm in result.accepted:
        lines.append(",".join(repr(float(x)) for x in point) + f",{nrm!r}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
