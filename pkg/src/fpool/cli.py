"""Command-line experiments over the pooling library.

Every command emits CSV: ``# key=value`` header lines carrying the full
resolved configuration (sorted by key), then a ``shift,series,value``
header, then data rows.  The first column holds whatever indexes the rows
of that series: a shift for sweep curves, a sample position for signal
curves, a problem size for the bench table.  Output is byte-identical
across runs with the same flags; anything wall-clock dependent goes to
stderr.

Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 numerical
contract violation.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import asdict, dataclass

import numpy as np

from .baselines import BASELINE_KINDS, PoolingKind, pool_baseline, pool_baseline_2d
from .netpbm import read_netpbm, write_netpbm
from .pipeline import Pipeline, Pool1d, toy_classifier_predictions, transitivity_report
from .pooling import (
    ContractViolationError,
    EXACTNESS_TOL,
    make_plan,
    pool1d,
    pool1d_fast,
    pool2d,
    unpool1d,
)
from .metrics import consistency_from_predictions, shift_sweep
from .signals import is_signal_spec, load_signal_column, make_signal
from .spectral import circular_shift

__all__ = ["ExperimentConfig", "main"]

POOLINGS = ("fpool",) + BASELINE_KINDS


@dataclass
class ExperimentConfig:
    """Fully resolved settings for one command; echoed in output headers."""

    command: str
    input: str | None = None
    output: str | None = None
    n: int = 512
    m: int | None = None
    m2: int | None = None
    stride: int = 4
    window: int | None = None
    shift: int = 2
    shift_min: int | None = None
    shift_max: int | None = None
    odd_padding: bool = True
    padding: str = "circular"
    pooling: str = "fpool"
    seed: int = 0
    input_row: int | None = None  # resolved when the 1D input comes from an image

    def header(self) -> dict:
        return {"command": self.command, **asdict(self)}


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _emit_csv(config: ExperimentConfig, rows, stream) -> None:
    for key in sorted(config.header()):
        stream.write(f"# {key}={_fmt(config.header()[key])}\n")
    stream.write("shift,series,value\n")
    for shift, series, value in rows:
        if "," in series:
            raise ValueError(f"series name {series!r} would break the CSV")
        stream.write(f"{_fmt(shift)},{series},{_fmt(value)}\n")


def _write_rows(config: ExperimentConfig, rows) -> None:
    if config.output:
        with open(config.output, "w") as stream:
            _emit_csv(config, rows, stream)
    else:
        _emit_csv(config, rows, sys.stdout)


def _load_1d_input(config: ExperimentConfig) -> np.ndarray:
    """Resolve --input into a signal: a spec, a CSV column, or an image row."""
    spec = config.input or "smooth:0"
    if is_signal_spec(spec):
        return make_signal(spec, config.n)
    if spec.endswith((".pgm", ".ppm")):
        pixels, maxval, _ = read_netpbm(spec)
        if pixels.ndim == 3:
            pixels = pixels.mean(axis=2)
        row = int(np.random.default_rng(config.seed).integers(pixels.shape[0]))
        config.input_row = row
        return pixels[row] / maxval
    if spec.endswith(".csv"):
        return load_signal_column(spec)
    raise ValueError(
        f"--input {spec!r} is neither a signal spec (impulse, tone:F, rand:S, smooth:S) "
        "nor a .csv/.pgm/.ppm path"
    )


def _upsample_through(plan, y: np.ndarray) -> np.ndarray:
    return unpool1d(plan, y)


def cmd_demo1d(config: ExperimentConfig) -> int:
    """Both evaluation orders for every pooling, plus their gap.

    For each pooling kind two length-n curves are emitted: pool, upsample
    with the plan's coupled inverse, then shift; and shift first, then pool
    and upsample.  A shift-equivalent pooling makes the curves identical.
    """
    x = _load_1d_input(config)
    n = x.shape[0]
    config.n = n
    stride = config.stride
    if n % stride:
        raise ValueError(f"stride {stride} must divide the signal length {n}")
    m = config.m if config.m is not None else n // stride
    config.m = m
    plan = make_plan(n, m, config.odd_padding)
    delta = config.shift
    rows = []
    for kind in POOLINGS:
        if kind == "fpool":
            pooled = pool1d(plan, x)
            pooled_shifted = pool1d(plan, circular_shift(x, delta))
        else:
            pk = PoolingKind(kind, stride, config.window)
            if m != n // stride:
                raise ValueError(f"--m {m} conflicts with stride {stride} for {kind} pooling")
            pooled = pool_baseline(pk, x)
            pooled_shifted = pool_baseline(pk, circular_shift(x, delta))
        first = circular_shift(_upsample_through(plan, pooled), delta)
        second = _upsample_through(plan, pooled_shifted)
        gap = float(np.max(np.abs(first - second)))
        for j in range(n):
            rows.append((j, f"{kind}/pool_up_shift", float(first[j])))
        for j in range(n):
            rows.append((j, f"{kind}/shift_pool_up", float(second[j])))
        rows.append((delta, f"{kind}/gap", gap))
        if kind == "fpool" and plan.symmetric_band and gap > EXACTNESS_TOL * max(1.0, float(np.linalg.norm(x))):
            raise ContractViolationError(
                f"frequency pooling gap {gap:.3e} exceeds tolerance with a symmetric band"
            )
    _write_rows(config, rows)
    return 0


def _shift_range(config: ExperimentConfig, n: int) -> range:
    lo = -n if config.shift_min is None else config.shift_min
    hi = n if config.shift_max is None else config.shift_max
    if lo > hi:
        raise ValueError(f"--shift-min {lo} exceeds --shift-max {hi}")
    return range(lo, hi + 1)


def cmd_oddpad(config: ExperimentConfig) -> int:
    """Equivalence error against shift with and without the padding fix.

    Three series: the padded plan, the unpadded plan, and the unpadded plan
    fed the same signal with its unmatched edge-frequency pair removed
    (which restores exactness without any padding).
    """
    x = _load_1d_input(config)
    n = x.shape[0]
    config.n = n
    m = config.m if config.m is not None else n // config.stride
    config.m = m
    if m % 2:
        raise ValueError(f"the padding study needs even m, got {m}")
    shifts = _shift_range(config, n)
    spectrum = np.fft.fft(x)
    spectrum[m // 2] = 0.0
    spectrum[n - m // 2] = 0.0
    x_edge_free = np.real(np.fft.ifft(spectrum))
    cases = [
        ("padded", make_plan(n, m, True), x),
        ("unpadded", make_plan(n, m, False), x),
        ("unpadded_edge_zeroed", make_plan(n, m, False), x_edge_free),
    ]
    rows = []
    for series, plan, signal in cases:
        net = Pipeline((Pool1d(PoolingKind("fpool", config.stride), plan),), (1, n))
        sweep = shift_sweep(net, plan, shifts, signal.reshape(1, n))
        rows.extend((shift, series, float(err)) for shift, err in zip(sweep.shifts, sweep.errors))
        rows.append((0, f"{series}/max_error", sweep.max_error))
    _write_rows(config, rows)
    return 0


def cmd_transitivity(config: ExperimentConfig) -> int:
    """Per-segment equivalence sweeps for the two-stage pooling cascade."""
    n = config.n
    m = config.m if config.m is not None else n // 2
    m2 = config.m2 if config.m2 is not None else m // 2
    config.m, config.m2 = m, m2
    rows = []
    for row in transitivity_report(config.seed, (n, m, m2), config.odd_padding):
        rows.extend(
            (shift, row.segment, float(err)) for shift, err in zip(row.shifts, row.errors)
        )
        rows.append((0, f"{row.segment}/max_error", row.max_error))
        rows.append((0, f"{row.segment}/equivalent", 1.0 if row.equivalent else 0.0))
    _write_rows(config, rows)
    return 0


def cmd_pool_image(config: ExperimentConfig) -> int:
    """Pool an image file by the configured factor and write the same format."""
    if not config.input:
        raise ValueError("pool needs --input pointing at a .pgm or .ppm file")
    if not config.output:
        raise ValueError("pool needs --output for the pooled image")
    pixels, maxval, magic = read_netpbm(config.input)
    planar = pixels[np.newaxis] if pixels.ndim == 2 else np.moveaxis(pixels, 2, 0)
    h, w = planar.shape[1:]
    config.n = h
    if config.pooling == "fpool":
        plan_r = make_plan(h, max(1, h // config.stride), config.odd_padding)
        plan_c = make_plan(w, max(1, w // config.stride), config.odd_padding)
        pooled = pool2d(plan_r, plan_c, planar.astype(float))
    else:
        pk = PoolingKind(config.pooling, config.stride, config.window)
        pooled = pool_baseline_2d(pk, planar.astype(float))
    out = pooled[0] if pixels.ndim == 2 else np.moveaxis(pooled, 0, 2)
    write_netpbm(config.output, out, maxval=maxval, magic=magic)
    for key in sorted(config.header()):
        sys.stderr.write(f"# {key}={_fmt(config.header()[key])}\n")
    return 0


def cmd_consistency(config: ExperimentConfig) -> int:
    """Toy-classifier predictions under diagonal shifts, plus the summary."""
    lo = -7 if config.shift_min is None else config.shift_min
    hi = 7 if config.shift_max is None else config.shift_max
    if lo > hi:
        raise ValueError(f"--shift-min {lo} exceeds --shift-max {hi}")
    config.shift_min, config.shift_max = lo, hi
    shifts = list(range(lo, hi + 1))
    labels, probs, designated = toy_classifier_predictions(
        config.seed,
        shifts,
        pooling=config.pooling,
        size=config.n,
        stride=config.stride,
        conv_padding=config.padding,
        odd_padding=config.odd_padding,
        window=config.window,
    )
    rows = []
    for i, d in enumerate(shifts):
        rows.append((d, "label", float(labels[i])))
        rows.append((d, "prob_designated", float(probs[i, designated])))
    rows.append((0, "designated_class", float(designated)))
    rows.append((0, "consistency", consistency_from_predictions(labels)))
    rows.append((0, "prob_std", float(np.std(probs[:, designated]))))
    _write_rows(config, rows)
    return 0


def cmd_bench(config: ExperimentConfig) -> int:
    """Deterministic cost table for the dense and fast paths.

    The dense pooling matrix costs one m-by-n matrix-vector product per
    signal (2nm flops); the fast path runs two transforms (about
    5 n log2 n + 5 m log2 m flops by the usual FFT estimate).  Measured
    wall times go to stderr so the CSV stays run-independent.
    """
    rows = []
    timings = []
    rng = np.random.default_rng(config.seed)
    for n in (64, 128, 256, 512):
        for m in (n // 4, n // 2):
            rows.append((n, f"dense_matvec_flops/m_{m}", float(2 * n * m)))
            rows.append(
                (n, f"fast_transform_flops/m_{m}", float(5 * n * np.log2(n) + 5 * m * np.log2(m)))
            )
            plan = make_plan(n, m, config.odd_padding)
            x = rng.standard_normal(n)
            reps = 50
            t0 = time.perf_counter()
            for _ in range(reps):
                pool1d(plan, x)
            t1 = time.perf_counter()
            for _ in range(reps):
                pool1d_fast(plan, x)
            t2 = time.perf_counter()
            timings.append(
                f"# n={n} m={m} dense_s={(t1 - t0) / reps:.3e} fast_s={(t2 - t1) / reps:.3e}"
            )
    _write_rows(config, rows)
    for line in timings:
        sys.stderr.write(line + "\n")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fpool", description="Spectral downsampling experiments (CSV out)."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, shift_range=True):
        p.add_argument("--input", help="signal spec (impulse, tone:F, rand:S, smooth:S) or a .csv/.pgm/.ppm path")
        p.add_argument("--output", help="output file (default: stdout)")
        p.add_argument("--n", type=int, default=512, help="synthetic signal length or classifier size")
        p.add_argument("--m", type=int, help="pooled length (default: n / stride)")
        p.add_argument("--stride", type=int, default=4)
        p.add_argument("--window", type=int, help="baseline window (default: stride)")
        p.add_argument("--odd-padding", dest="odd_padding", action=argparse.BooleanOptionalAction, default=True)
        p.add_argument("--padding", choices=("circular", "zero"), default="circular")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--pooling", choices=POOLINGS, default="fpool")
        if shift_range:
            p.add_argument("--shift-min", dest="shift_min", type=int)
            p.add_argument("--shift-max", dest="shift_max", type=int)

    p = sub.add_parser("demo1d", help="both evaluation orders for every pooling at one shift")
    common(p, shift_range=False)
    p.add_argument("--shift", type=int, default=2)

    p = sub.add_parser("oddpad", help="equivalence error vs shift, with and without padding")
    common(p)
    p.set_defaults(n=16, stride=2)

    p = sub.add_parser("transitivity", help="stacked pooling segments and cascade verdicts")
    common(p)
    p.add_argument("--m2", type=int, help="second-stage length (default: m / 2)")
    p.set_defaults(n=32, m=16, m2=8)

    p = sub.add_parser("pool", help="pool a PGM/PPM image by the stride factor")
    common(p, shift_range=False)

    p = sub.add_parser("consistency", help="toy classifier predictions under diagonal shifts")
    common(p)
    p.set_defaults(n=32, odd_padding=False)

    p = sub.add_parser("bench", help="deterministic cost table; wall times on stderr")
    common(p, shift_range=False)
    return parser


_COMMANDS = {
    "demo1d": cmd_demo1d,
    "oddpad": cmd_oddpad,
    "transitivity": cmd_transitivity,
    "pool": cmd_pool_image,
    "consistency": cmd_consistency,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:  # argparse exits 2 on flag errors, 0 on --help
        return int(e.code or 0)
    fields = set(ExperimentConfig.__dataclass_fields__)
    config = ExperimentConfig(**{k: v for k, v in vars(args).items() if k in fields})
    try:
        return _COMMANDS[config.command](config)
    except ContractViolationError as e:
        sys.stderr.write(f"contract violation: {e}\n")
        return 4
    except ValueError as e:
        sys.stderr.write(f"configuration error: {e}\n")
        return 2
    except OSError as e:
        sys.stderr.write(f"i/o error: {e}\n")
        return 3
