"""Command-line front end.

Subcommands build sections, compute spectra, reconstruct multipliers and run
distribution / range tests.  Every command writes plain CSV and JSON files
into ``--out`` and exits with 0 on success, 2 on configuration errors (including sizes over
the dense cap) and 3 on numerical failures.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import serialize as io_
from .circulant import optimal_circulant_toeplitz, strang_circulant
from .errors import ConditioningError, DegenerateWeightError, DomainError, ResourceError, UnsupportedError
from .expr import ExpressionError, parse_multiplier, parse_symbol, parse_test_function, parse_weight
from .reconstruction import algorithm1, algorithm2, reconstruct_block
from .sections import section_cheb1, section_cheb2, section_general
from .spectral import SpectralSample, distribution_compare, range_membership
from .structured import (
    circulant_eigenvalues,
    dense,
    eigen_decompose,
    singular_values,
    toeplitz_from_coeffs,
)
from .symbols import CHEBYSHEV1, CHEBYSHEV2, SymbolSpec, as_multi_index, fourier_coefficients

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


class ConfigError(Exception):
    pass


def _ints(text, what):
    try:
        vals = tuple(int(v) for v in str(text).split(","))
    except ValueError:
        raise ConfigError(f"invalid {what} {text!r}: expected comma-separated integers") from None
    return vals


def _floats(text, what):
    try:
        return tuple(float(v) for v in str(text).split(","))
    except ValueError:
        raise ConfigError(f"invalid {what} {text!r}") from None


def _order(args):
    try:
        return as_multi_index(_ints(args.n, "--n"))
    except DomainError as exc:
        raise ConfigError(str(exc)) from None


def _multiplier(args, n):
    if args.phi is None:
        raise ConfigError("--phi is required")
    phi = parse_multiplier(args.phi, d=len(n))
    if args.block is not None:
        block = _ints(args.block, "--block")
        if len(block) != 2 or block != phi.block_dims:
            raise ConfigError(f"--block {args.block} does not match the {phi.block_dims} multiplier")
    return phi


def _section(args, for_reconstruction=False):
    n = _order(args)
    phi = _multiplier(args, n)
    weight = parse_weight(args.weight)
    os_ = args.oversample
    if weight is CHEBYSHEV1:
        return section_cheb1(phi, n, oversample=os_ or 8), phi
    if weight is CHEBYSHEV2 and not for_reconstruction and len(n) == 1:
        return section_cheb2(phi, n, oversample=os_ or 8), phi
    return section_general(phi, weight, n, oversample=os_ or 16), phi


def _symbol_toeplitz(args):
    n = _order(args)
    sym = parse_symbol(args.symbol, d=len(n))
    table = fourier_coefficients(sym, n, oversample=args.oversample or 8)
    return sym, toeplitz_from_coeffs(table, n), n


def _outdir(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _config(args):
    keep = ("command", "phi", "symbol", "weight", "n", "block", "algorithm", "F", "point",
            "eps", "oversample", "kind", "approx", "seed")
    return {k: getattr(args, k) for k in keep if getattr(args, k, None) is not None}


def _sample_of_section(sec, kind):
    if kind == "singular":
        return singular_values(sec.matrix)
    return eigen_decompose(sec.matrix, hermitian=sec.is_hermitian())


def cmd_section(args):
    sec, _ = _section(args)
    out = _outdir(args)
    io_.dense_to_csv(sec.matrix, out / "section.csv")
    side = sec.sidecar()
    side["config"] = _config(args)
    io_.write_json(out / "section.json", side)
    return side


def cmd_spectrum(args):
    out = _outdir(args)
    kind = "singular" if args.kind == "svd" else "eigen"
    if args.symbol is not None:
        _, T, _ = _symbol_toeplitz(args)
        if args.approx in ("strang", "optimal"):
            build = strang_circulant if args.approx == "strang" else optimal_circulant_toeplitz
            C = build(T)
            io_.circulant_to_csv(C, out / "circulant.csv")
            sample = circulant_eigenvalues(C, kind=kind)
        elif kind == "singular":
            sample = singular_values(T)
        else:
            A = dense(T)
            sample = eigen_decompose(A, hermitian=np.allclose(A, A.conj().T, atol=1e-12))
    else:
        if args.approx != "none":
            raise ConfigError("--approx applies to --symbol Toeplitz matrices only")
        sec, _ = _section(args)
        sample = _sample_of_section(sec, kind)
    io_.sample_to_csv(sample, out / "spectrum.csv")
    summary = {"kind": sample.kind, "order": sample.order, "count": len(sample),
               "config": _config(args)}
    io_.write_json(out / "spectrum.json", summary)
    return summary


def cmd_reconstruct(args):
    sec, phi = _section(args, for_reconstruction=True)
    out = _outdir(args)
    if args.algorithm not in (1, 2):
        raise ConfigError("--algorithm must be 1 or 2")
    if phi.is_block:
        br = reconstruct_block(sec, phi, algorithm=args.algorithm)
        p, q = phi.block_dims
        entries = {}
        for s in range(p):
            for t in range(q):
                res = br.entries[s][t]
                io_.reconstruction_to_csv(res, out / f"reconstruction_{s}{t}.csv")
                entries[f"{s},{t}"] = res.summary()
        io_.sample_to_csv(br.singular_sample, out / "singular_values.csv")
        summary = {"algorithm": entries["0,0"]["algorithm"], "block": [p, q],
                   "max_residual": br.max_residual(), "entries": entries}
    else:
        run = algorithm1 if args.algorithm == 1 else algorithm2
        res = run(sec, reference=phi)
        io_.reconstruction_to_csv(res, out / "reconstruction.csv")
        summary = res.summary()
    summary["config"] = _config(args)
    io_.write_json(out / "summary.json", summary)
    return summary


def _scaled(sample, scale):
    if scale == 1:
        return sample
    return SpectralSample(sample.values / scale, sample.kind, sample.order,
                          grid=sample.grid, normal=sample.normal,
                          block_size=sample.block_size, source=sample.source)


def cmd_disttest(args):
    F = parse_test_function(args.F)
    kind = "singular" if args.kind == "svd" else "eigen"
    if args.symbol is not None:
        sym, T, _ = _symbol_toeplitz(args)
        A = dense(T)
        herm = np.allclose(A, A.conj().T, atol=1e-12)
        sample = singular_values(A) if kind == "singular" else eigen_decompose(A, hermitian=herm)
    else:
        sec, phi = _section(args)
        sample = _sample_of_section(sec, kind)
        scale = sec.symbol_scale
        d = sec.d
        # spectral symbol of the section: scale * phi(cos s)
        sym = SymbolSpec(lambda *s: scale * phi(*[np.cos(sk) for sk in s]),
                         dims=(d,) + tuple(phi.block_dims), name=f"symbol[{phi.name}]")
    report = distribution_compare(sample, sym, F)
    out = _outdir(args)
    res = report.to_dict()
    res["config"] = _config(args)
    io_.write_json(out / "disttest.json", res)
    return res


def cmd_rangetest(args):
    if args.point is None or args.eps is None:
        raise ConfigError("rangetest needs --point re,im and --eps")
    pt = _floats(args.point, "--point")
    if len(pt) not in (1, 2):
        raise ConfigError("--point takes re or re,im")
    point = complex(pt[0], pt[1] if len(pt) == 2 else 0.0)
    if args.symbol is not None:
        _, T, _ = _symbol_toeplitz(args)
        A = dense(T)
        sample = eigen_decompose(A, hermitian=np.allclose(A, A.conj().T, atol=1e-12))
    else:
        sec, phi = _section(args)
        if phi.is_block:
            sample = reconstruct_block(sec).singular_sample
        else:
            # compare against the range of phi itself
            sample = _scaled(_sample_of_section(sec, "eigen"), sec.symbol_scale)
    report = range_membership(sample, point, args.eps)
    out = _outdir(args)
    res = report.to_dict()
    res["config"] = _config(args)
    io_.write_json(out / "rangetest.json", res)
    return res


def build_parser():
    parser = argparse.ArgumentParser(prog="multspec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, symbol=False):
        p.add_argument("--phi", help="multiplier expression in x or x1..xd, or [[..],[..]] block")
        p.add_argument("--weight", default="cheb1", help="cheb1 | cheb2 | custom:<expr in x>")
        p.add_argument("--n", required=True, help="size or comma-separated multi-index")
        p.add_argument("--block", help="expected block dims p,q")
        p.add_argument("--oversample", type=int, help="quadrature oversampling factor")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--seed", type=int, help="recorded in outputs; the pipeline is deterministic")
        if symbol:
            p.add_argument("--symbol", help="periodic symbol: builtin (2-2cos, pi*cos, exp(is)) or expression in s")

    p = sub.add_parser("section", help="build a finite section")
    common(p)
    p.set_defaults(func=cmd_section)

    p = sub.add_parser("spectrum", help="eigen- or singular values of a section or Toeplitz matrix")
    common(p, symbol=True)
    p.add_argument("--kind", choices=("eig", "svd"), default="eig")
    p.add_argument("--approx", choices=("none", "strang", "optimal"), default="none")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("reconstruct", help="reconstruct the multiplier from its section")
    common(p)
    p.add_argument("--algorithm", type=int, default=1, choices=(1, 2))
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("disttest", help="compare spectral averages with the symbol integral")
    common(p, symbol=True)
    p.add_argument("--F", default="t", help="t | t2 | indicator:a,b")
    p.add_argument("--kind", choices=("eig", "svd"), default="eig")
    p.set_defaults(func=cmd_disttest)

    p = sub.add_parser("rangetest", help="fraction of the spectrum near a point")
    common(p, symbol=True)
    p.add_argument("--point", help="re,im")
    p.add_argument("--eps", type=float)
    p.set_defaults(func=cmd_rangetest)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "phi", None) is None and getattr(args, "symbol", None) is None:
        print("error: one of --phi or --symbol is required", file=sys.stderr)
        return EXIT_CONFIG
    try:
        result = args.func(args)
    except (ConfigError, ExpressionError, UnsupportedError, ResourceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConditioningError, DegenerateWeightError, np.linalg.LinAlgError,
            FloatingPointError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(json.dumps(io_._clean(result), sort_keys=True))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
