"""Command-line surface: generate series, estimate Hurst parameters, verify
chain identities, and run the estimator comparison table.

stdout carries only data; diagnostics and checksums go to stderr.  Exit codes:
0 success, 1 failed verification, 2 invalid parameters or input, 3 I/O
failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .estimators import METHODS, estimate_all
from .exceptions import LrdError
from .experiments import (
    TableConfig,
    acf_slope_check,
    count_variance_check,
    table2_harness,
    table_to_csv,
    table_to_text,
)
from .fgn import FgnGenerator
from .io import (
    read_bits,
    read_csv,
    read_lines,
    series_checksum,
    write_bits,
    write_csv,
    write_lines,
)
from .itmap import IntermittencyMapGenerator, MapParams, hurst_to_m
from .markov import (
    MAX_STATE,
    MarkovGenerator,
    alpha_to_hurst,
    hurst_to_alpha,
    jump_prob,
    jump_tail,
    equilibrium_pi,
    equilibrium_tail,
    validate_params,
    _sample_jumps,
    _sample_equilibrium,
)
from .series import BinarySeries, RealSeries, aggregate

_FORMATS = ("bits", "lines", "csv")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lrd",
        description="Binary long-range-dependent series: generation, "
        "Hurst estimation, verification.",
    )
    parser.add_argument("--version", action="version", version=f"lrd {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate a series to a file or stdout")
    gen.add_argument("--model", required=True, choices=("markov", "itmap", "fgn"))
    hsel = gen.add_mutually_exclusive_group(required=True)
    hsel.add_argument("--hurst", type=float)
    hsel.add_argument("--alpha", type=float)
    msel = gen.add_mutually_exclusive_group()
    msel.add_argument("--mean", type=float, help="target mean (markov only)")
    msel.add_argument("--pi0", type=float, help="state-0 occupancy (markov only)")
    gen.add_argument("--n", type=int, required=True, help="number of points")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--block", type=int, default=1,
                     help="aggregate output into block sums")
    gen.add_argument("--format", choices=_FORMATS, default="lines")
    gen.add_argument("--out", default="-", help="output path (default stdout)")
    gen.add_argument("--checksum", action="store_true",
                     help="print a 64-bit stream digest to stderr")

    est = sub.add_parser("estimate", help="estimate the Hurst parameter")
    est.add_argument("--in", dest="path", default="-",
                     help="input path (default stdin)")
    est.add_argument("--format", choices=_FORMATS, default="lines")
    est.add_argument("--methods", default="all",
                     help=f"comma list from {', '.join(METHODS)}, or 'all'")
    est.add_argument("--block", type=int, default=1,
                     help="aggregate into block sums before estimating")
    est.add_argument("--csv", action="store_true", help="CSV report")
    est.add_argument("--checksum", action="store_true",
                     help="print a 64-bit digest of the input stream to stderr")

    ver = sub.add_parser("verify", help="check chain identities and scaling")
    ver.add_argument("--pi0", type=float, default=0.5)
    ver.add_argument("--alpha", type=float, default=0.5)
    ver.add_argument("--level", required=True, choices=("law", "sampler", "scaling"))
    ver.add_argument("--n", type=int, default=10_000_000)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--replicas", type=int, default=300,
                     help="replica count for the scaling level")

    tab = sub.add_parser("table", help="run the estimator comparison table")
    tab.add_argument("--seed", type=int, default=TableConfig.master_seed)
    tab.add_argument("--n", type=int, default=1_000_000,
                     help="points per cell after aggregation")
    tab.add_argument("--replicas", type=int, default=3)
    tab.add_argument("--generators", default="fgn,itmap,markov")
    fmt = tab.add_mutually_exclusive_group()
    fmt.add_argument("--csv", action="store_true")
    fmt.add_argument("--text", action="store_true")
    tab.add_argument("--out", default="-", help="output path (default stdout)")
    return parser


# ---------------------------------------------------------------------------
# generate

def _resolve_hurst(args) -> float:
    return float(args.hurst) if args.hurst is not None else alpha_to_hurst(args.alpha)


def _generate_series(args):
    hurst = _resolve_hurst(args)
    if args.model != "markov" and (args.mean is not None or args.pi0 is not None):
        raise ValueError("--mean/--pi0 apply only to the markov model")
    if args.n < 1:
        raise ValueError("--n must be >= 1")
    if args.model == "markov":
        pi0 = args.pi0 if args.pi0 is not None else 1.0 - (
            args.mean if args.mean is not None else 0.5
        )
        params = validate_params(pi0, hurst_to_alpha(hurst), seed=args.seed)
        return MarkovGenerator(params).generate(args.n)
    if args.model == "itmap":
        m = hurst_to_m(hurst)
        return IntermittencyMapGenerator(
            MapParams(0.5, m, m, seed=args.seed)
        ).generate(args.n)
    values = FgnGenerator(hurst, seed=args.seed).generate_values(args.n)
    return RealSeries(values, "fgn")


def cmd_generate(args) -> int:
    series = _generate_series(args)
    if args.block < 1:
        raise ValueError("--block must be >= 1")
    binary_counts = args.block > 1 and isinstance(series, BinarySeries)
    if args.block > 1:
        series = aggregate(series, args.block)
    if args.format == "bits":
        if isinstance(series, RealSeries):
            if args.block > 1:
                raise ValueError("bits format cannot carry aggregated values")
            # sign-threshold the real-valued stream into balanced bits
            symbols = (series.values > 0).astype(np.uint8)
            series = BinarySeries(symbols, {"hurst": _resolve_hurst(args)},
                                  "fgn-thresholded")
        elif args.block > 1:
            raise ValueError("bits format cannot carry aggregated values")
        payload = series.symbols
    else:
        payload = series.symbols if isinstance(series, BinarySeries) else series.values
        if binary_counts:
            # block sums of 0/1 symbols are counts; serialize as integers
            payload = payload.astype(np.int64)
    if args.out == "-":
        out = sys.stdout.buffer if args.format == "bits" else sys.stdout
        _write_payload(out, payload, args.format)
        out.flush()
    else:
        mode = "wb" if args.format == "bits" else "w"
        with open(args.out, mode) as out:
            _write_payload(out, payload, args.format)
    if args.checksum:
        print(f"checksum {series_checksum(payload)}", file=sys.stderr)
    return 0


def _write_payload(fobj, payload, fmt: str) -> None:
    if fmt == "bits":
        write_bits(fobj, payload)
    elif fmt == "lines":
        write_lines(fobj, payload)
    else:
        write_csv(fobj, payload)


# ---------------------------------------------------------------------------
# estimate

def _read_payload(args) -> np.ndarray:
    binary = args.format == "bits"
    if args.path == "-":
        fobj = sys.stdin.buffer if binary else sys.stdin
        return _parse_payload(fobj, args.format)
    with open(args.path, "rb" if binary else "r") as fobj:
        return _parse_payload(fobj, args.format)


def _parse_payload(fobj, fmt: str) -> np.ndarray:
    if fmt == "bits":
        return read_bits(fobj)
    if fmt == "lines":
        return read_lines(fobj)
    return read_csv(fobj)


def _as_series(values: np.ndarray):
    arr = np.asarray(values)
    if not np.issubdtype(arr.dtype, np.integer):
        if arr.size and np.all(np.isfinite(arr)) and np.all(arr == np.rint(arr)):
            arr = arr.astype(np.int64)
        else:
            return RealSeries(arr, "external")
    if arr.size and 0 <= arr.min() and arr.max() <= 1:
        return BinarySeries(arr.astype(np.uint8), {}, "external")
    return RealSeries(arr.astype(np.float64), "external")


def _parse_methods(spec: str):
    if spec.strip().lower() == "all":
        return METHODS
    methods = tuple(m.strip() for m in spec.split(",") if m.strip())
    unknown = [m for m in methods if m not in METHODS]
    if not methods or unknown:
        raise ValueError(f"unknown methods {unknown or spec!r}; "
                         f"choose from {', '.join(METHODS)}")
    return methods


def cmd_estimate(args) -> int:
    values = _read_payload(args)
    if args.checksum:
        print(f"checksum {series_checksum(values)}", file=sys.stderr)
    if args.block < 1:
        raise ValueError("--block must be >= 1")
    series = _as_series(values)
    if args.block > 1:
        series = aggregate(series, args.block)
    methods = _parse_methods(args.methods)
    results: dict = {}
    errors: dict = {}
    groups = [g for g in (
        tuple(m for m in ("rs", "rs_modified") if m in methods),
        ("aggvar",), ("periodogram",), ("local_whittle",), ("wavelet",),
    ) if g and all(m in methods for m in g)]
    for group in groups:
        try:
            results.update(estimate_all(series, group))
        except (LrdError, ValueError) as exc:
            for m in group:
                errors[m] = f"{type(exc).__name__}: {exc}"
    if args.csv:
        print("method,h,ci_low,ci_high,r2,n_used,error")
        for m in methods:
            if m in errors:
                print(f"{m},,,,,,{errors[m].replace(',', ';')}")
                continue
            est = results[m]
            ci_lo = "" if est.ci_low is None else f"{est.ci_low:.4f}"
            ci_hi = "" if est.ci_high is None else f"{est.ci_high:.4f}"
            r2 = "" if est.fit is None else f"{est.fit.r2:.4f}"
            print(f"{m},{est.h:.4f},{ci_lo},{ci_hi},{r2},{est.n_used},")
    else:
        print(f"{'method':<14} {'h':>7} {'ci_low':>7} {'ci_high':>7} "
              f"{'r2':>7} {'n_used':>9}")
        for m in methods:
            if m in errors:
                print(f"{m:<14} ERR {errors[m]}")
                continue
            est = results[m]
            ci_lo = "-" if est.ci_low is None else f"{est.ci_low:.4f}"
            ci_hi = "-" if est.ci_high is None else f"{est.ci_high:.4f}"
            r2 = "-" if est.fit is None else f"{est.fit.r2:.4f}"
            print(f"{m:<14} {est.h:7.4f} {ci_lo:>7} {ci_hi:>7} "
                  f"{r2:>7} {est.n_used:>9}")
    return 0 if results else 2


# ---------------------------------------------------------------------------
# verify

def _report(name: str, ok: bool, detail: str) -> bool:
    print(f"{name:<22} {'PASS' if ok else 'FAIL'}  {detail}")
    return ok


def _verify_law(params) -> bool:
    ks = np.arange(0, 1_000_001)
    f = jump_prob(ks, params)
    total = float(np.cumsum(f.astype(np.longdouble))[-1] + jump_tail(ks[-1] + 1, params))
    ok = _report("law total-mass", abs(total - 1.0) < 1e-12,
                 f"|sum f + tail - 1| = {abs(total - 1.0):.3e}")

    sample = np.unique(np.geomspace(1, 999_999, 200).astype(np.int64))
    lhs = equilibrium_pi(sample, params)
    rhs = equilibrium_pi(sample + 1, params) + params.pi0 * jump_prob(sample, params)
    rel = float(np.max(np.abs(lhs - rhs) / lhs))
    ok &= _report("law recurrence", rel < 1e-12, f"max rel err = {rel:.3e}")

    pi = equilibrium_pi(np.arange(0, 1_000_001), params)
    partial = np.cumsum(pi.astype(np.longdouble))
    tail_direct = equilibrium_tail(sample + 1, params)
    tail_from_sum = 1.0 - np.asarray(partial[sample], dtype=np.float64)
    rel = float(np.max(np.abs(tail_direct - tail_from_sum) / tail_direct))
    ok &= _report("law equilibrium-tail", rel < 1e-12, f"max rel err = {rel:.3e}")
    return ok


def _chi2_report(name: str, observed, probs, n: int) -> bool:
    from scipy import stats

    expected = probs * n
    chi2 = float(np.sum((observed - expected) ** 2 / expected))
    df = probs.size - 1
    critical = float(stats.chi2.ppf(0.999, df))
    return _report(name, chi2 < critical,
                   f"chi2 = {chi2:.1f} vs critical {critical:.1f} (df {df})")


def _verify_sampler(params, n: int, seed: int) -> bool:
    rng = np.random.default_rng(seed)
    draws = _sample_jumps(rng, params, n)
    edges = np.arange(0, 66)
    counts = np.bincount(np.minimum(draws, 65), minlength=66)
    probs = np.append(jump_prob(edges[:-1], params), jump_tail(65, params))
    ok = _chi2_report("sampler jump-chi2", counts, probs, n)

    detail = []
    worst = 0.0
    for k in (10, 100, 1000, 10000):
        p = jump_tail(k, params)
        se = np.sqrt(p * (1 - p) / n)
        dev = abs(float(np.mean(draws >= k)) - p) / se
        worst = max(worst, dev)
        detail.append(f"k={k}: {dev:.2f} s.e.")
    ok &= _report("sampler tail-ccdf", worst <= 4.0, "; ".join(detail))

    eq = _sample_equilibrium(rng, params, n)
    counts = np.bincount(np.minimum(eq, 65), minlength=66)
    probs = np.append(equilibrium_pi(edges[:-1], params),
                      equilibrium_tail(65, params))
    ok &= _chi2_report("sampler equilibrium-chi2", counts, probs, n)
    return ok


def _verify_scaling(params, n: int, replicas: int) -> bool:
    from .markov import generate

    series = generate(params, max(n, 10_000_000))
    fit = acf_slope_check(series, (10, 1000))
    dev = fit.slope + params.alpha
    ok = _report("scaling acf-slope", abs(dev) <= 0.1,
                 f"slope = {fit.slope:.3f} vs -alpha = {-params.alpha:.3f} "
                 f"(r2 {fit.r2:.3f})")
    fit = count_variance_check(params, 1_000_000, replicas)
    dev = fit.slope - (2.0 - params.alpha)
    ok &= _report("scaling count-variance", abs(dev) <= 0.1,
                  f"slope = {fit.slope:.3f} vs 2-alpha = {2 - params.alpha:.3f} "
                  f"(r2 {fit.r2:.3f})")
    return ok


def cmd_verify(args) -> int:
    params = validate_params(args.pi0, args.alpha, seed=args.seed)
    if args.level == "law":
        ok = _verify_law(params)
    elif args.level == "sampler":
        ok = _verify_sampler(params, args.n, args.seed)
    else:
        ok = _verify_scaling(params, args.n, args.replicas)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# table

def cmd_table(args) -> int:
    generators = tuple(g.strip() for g in args.generators.split(",") if g.strip())
    config = TableConfig(
        generators=generators,
        replicas=args.replicas,
        n_points=args.n,
        master_seed=args.seed,
    )
    result = table2_harness(config)
    text = table_to_csv(result) if args.csv else table_to_text(result)
    if args.out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(args.out, "w") as fobj:
            fobj.write(text)
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handler = {
        "generate": cmd_generate,
        "estimate": cmd_estimate,
        "verify": cmd_verify,
        "table": cmd_table,
    }[args.command]
    try:
        return handler(args)
    except (LrdError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, MemoryError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
