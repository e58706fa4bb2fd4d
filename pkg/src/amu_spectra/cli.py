"""Command-line front end.

Subcommands: ``models`` generates observable tuples, ``spectrum`` runs the
acceptance scan, ``amu`` certifies states at target points, ``essential``
estimates behavior at infinity through compression levels.

Exit codes: 0 success, 2 configuration or parse error, 3 resource cap
exceeded, 4 numerical failure. Thread count defaults to the
AMU_SPECTRA_THREADS environment variable. Output files contain no
timestamps or environment data, so reruns are byte-identical.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .constants import GRID_POINT_CAP
from .errors import GridCapExceeded, NumericalError, SpectraError
from .essential import essential_spectrum_estimate
from .models import FAMILIES, ModelSpec, generate, load_tuple, save_tuple, write_accepted_csv
from .observables import commutator_profile
from .search import amu_at
from .spectrum import scan

__all__ = ["main", "build_parser"]

_FAMILY_ALIASES = {
    "shift": "shift_pair",
    "shift_pair": "shift_pair",
    "diag": "commuting_diag",
    "commuting_diag": "commuting_diag",
    "perturbed": "perturbed_commuting",
    "perturbed_commuting": "perturbed_commuting",
    "clock": "clock_shift_triple",
    "clock_shift_triple": "clock_shift_triple",
    "file": "custom_file",
    "custom_file": "custom_file",
}


def _default_threads() -> int:
    raw = os.environ.get("AMU_SPECTRA_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"AMU_SPECTRA_THREADS={raw!r} is not an integer") from None
    if value < 1:
        raise ValueError("AMU_SPECTRA_THREADS must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="amu-spectra",
        description="Synthetic spectra and AMU state search for Hermitian tuples.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_models = sub.add_parser("models", help="generate observable tuples")
    models_sub = p_models.add_subparsers(dest="models_command", required=True)
    p_gen = models_sub.add_parser("gen", help="generate a model family")
    p_gen.add_argument("family", help="family name (shift, diag, perturbed, clock, file)")
    p_gen.add_argument("--dim", type=int, required=True)
    p_gen.add_argument("--n", type=int, default=None,
                       help="observables per tuple (defaults to the family arity)")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                       help="family-specific parameter, repeatable")
    p_gen.add_argument("-o", "--output", required=True)
    p_gen.add_argument("--format", choices=["json", "npz"], default="json")

    p_spec = sub.add_parser("spectrum", help="scan a synthetic spectrum")
    p_spec.add_argument("--input", required=True, help="tuple file")
    p_spec.add_argument("--eta", type=float, required=True)
    p_spec.add_argument("--k", type=int, default=None, help="override the grid step count")
    p_spec.add_argument("--grid-cap", type=int, default=GRID_POINT_CAP)
    p_spec.add_argument("--threads", type=int, default=None)
    p_spec.add_argument("-o", "--output", required=True, help="JSON result path")
    p_spec.add_argument("--csv", default=None, help="also write accepted points as CSV")

    p_amu = sub.add_parser("amu", help="certify AMU states at target points")
    p_amu.add_argument("--input", required=True)
    p_amu.add_argument("--lambda", dest="lambdas", action="append", required=True,
                       metavar="COORDS",
                       help="comma-separated point, repeatable; or 'all-accepted'")
    p_amu.add_argument("--eta", type=float, default=None,
                       help="scan resolution for --lambda all-accepted")
    p_amu.add_argument("--sigma", type=float, required=True)
    p_amu.add_argument("--eps", type=float, required=True)
    p_amu.add_argument("--k", type=int, default=None)
    p_amu.add_argument("--grid-cap", type=int, default=GRID_POINT_CAP)
    p_amu.add_argument("--threads", type=int, default=None)
    p_amu.add_argument("-o", "--output", required=True)

    p_ess = sub.add_parser("essential", help="essential-spectrum estimate via compressions")
    p_ess.add_argument("--input", required=True)
    p_ess.add_argument("--eta", type=float, required=True)
    p_ess.add_argument("--cuts", required=True, help="comma-separated strictly increasing cuts")
    p_ess.add_argument("--one-sided", action="store_true",
                       help="use one-sided tails instead of interior windows")
    p_ess.add_argument("--k", type=int, default=None)
    p_ess.add_argument("--grid-cap", type=int, default=GRID_POINT_CAP)
    p_ess.add_argument("--threads", type=int, default=None)
    p_ess.add_argument("-o", "--output", required=True)
    return parser


def _threads(args) -> int:
    if getattr(args, "threads", None) is not None:
        if args.threads < 1:
            raise ValueError("--threads must be at least 1")
        return args.threads
    return _default_threads()


def _parse_params(pairs: list[str]) -> dict:
    params: dict[str, object] = {}
    for pair in pairs:
        if "=" not in pair:
            raise ValueError(f"--param needs KEY=VALUE, got {pair!r}")
        key, raw = pair.split("=", 1)
        try:
            params[key] = float(raw)
        except ValueError:
            params[key] = raw
    return params


def _parse_point(raw: str, n: int) -> list[float]:
    try:
        coords = [float(tok) for tok in raw.split(",") if tok.strip() != ""]
    except ValueError:
        raise ValueError(f"could not parse point {raw!r}") from None
    if len(coords) != n:
        raise ValueError(f"point {raw!r} has {len(coords)} coordinates, tuple has n={n}")
    return coords


def _cmd_models(args) -> int:
    family = _FAMILY_ALIASES.get(args.family)
    if family is None:
        raise ValueError(
            f"unknown family {args.family!r}; available: "
            + ", ".join(sorted(set(_FAMILY_ALIASES)))
        )
    n = args.n
    if n is None:
        n = {"shift_pair": 2, "clock_shift_triple": 3}.get(family, 2)
    spec = ModelSpec(family=family, dim=args.dim, n=n, seed=args.seed,
                     params=_parse_params(args.param))
    tup = generate(spec)
    profile = commutator_profile(tup)
    meta = {
        "family": family,
        "seed": args.seed,
        "params": {k: v for k, v in sorted(spec.params.items())},
        "commutator_norms": [[float(x) for x in row] for row in profile],
    }
    save_tuple(tup, args.output, fmt=args.format, meta=meta)
    print(f"wrote {family} tuple (n={tup.n}, dim={tup.dim}) to {args.output}")
    return 0


def _cmd_spectrum(args) -> int:
    tup, _ = load_tuple(args.input)
    result = scan(tup, args.eta, k=args.k, cap=args.grid_cap, threads=_threads(args))
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(result.to_json())
        fh.write("\n")
    if args.csv:
        write_accepted_csv(result, args.csv)
    print(
        f"scanned {result.grid.count} grid points (k={result.grid.k}), "
        f"accepted {len(result.accepted)}"
    )
    return 0


def _cmd_amu(args) -> int:
    tup, _ = load_tuple(args.input)
    threads = _threads(args)
    scan_meta = None
    if len(args.lambdas) == 1 and args.lambdas[0] == "all-accepted":
        if args.eta is None:
            raise ValueError("--lambda all-accepted requires --eta")
        result = scan(tup, args.eta, k=args.k, cap=args.grid_cap, threads=threads)
        points = [list(p) for p, _ in result.accepted]
        scan_meta = {"eta": args.eta, "k": result.grid.k,
                     "accepted_count": len(result.accepted)}
    else:
        points = [_parse_point(raw, tup.n) for raw in args.lambdas]

    def certify(point):
        return amu_at(tup, point, args.sigma, args.eps)

    if threads > 1 and len(points) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            certs = list(pool.map(certify, points))
    else:
        certs = [certify(point) for point in points]

    certified = 0
    for cert in certs:
        ok = cert.amu_member and cert.expectation_close
        certified += int(ok)
        coords = ",".join(f"{x:.6g}" for x in cert.lam)
        print(
            f"lambda=({coords}) max_sd={cert.max_sd:.6f} "
            f"max_exp_err={cert.max_exp_error:.6f} "
            f"amu={cert.amu_member} close={cert.expectation_close}"
        )
    payload = {
        "sigma": args.sigma,
        "eps": args.eps,
        "certificates": [c.to_json_dict() for c in certs],
    }
    if scan_meta is not None:
        payload["scan"] = scan_meta
    with open(args.output, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    print(f"certified {certified}/{len(certs)} points")
    return 0


def _cmd_essential(args) -> int:
    tup, _ = load_tuple(args.input)
    try:
        cuts = [int(tok) for tok in args.cuts.split(",") if tok.strip() != ""]
    except ValueError:
        raise ValueError(f"could not parse cuts {args.cuts!r}") from None
    estimate = essential_spectrum_estimate(
        tup, args.eta, cuts, interior=not args.one_sided,
        k=args.k, cap=args.grid_cap, threads=_threads(args),
    )
    with open(args.output, "w", encoding="utf-8") as fh:
        json.dump(estimate.to_json_dict(), fh, indent=2)
        fh.write("\n")
    for lvl in estimate.levels:
        print(f"cut={lvl.cut} window={lvl.window} accepted={len(lvl.result.accepted)}")
    stability = "n/a" if estimate.stability is None else f"{estimate.stability:.6f}"
    pitch = estimate.levels[-1].result.grid.pitch
    print(f"stability={stability} (grid pitch {pitch:.6f})")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "models":
            return _cmd_models(args)
        if args.command == "spectrum":
            return _cmd_spectrum(args)
        if args.command == "amu":
            return _cmd_amu(args)
        if args.command == "essential":
            return _cmd_essential(args)
        raise ValueError(f"unknown command {args.command!r}")
    except GridCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (NumericalError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4
    except (SpectraError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
