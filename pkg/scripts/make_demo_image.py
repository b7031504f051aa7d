#!/usr/bin/env python3
"""Generate the synthetic grayscale demo image used by the experiments.

A seeded noise field with a radial spectral rolloff, so rows look like
natural-image scanlines: mostly smooth with occasional structure.
"""

import argparse

import numpy as np

from fpool.netpbm import write_netpbm


def make_demo_image(size: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    spectrum = np.fft.rfft2(rng.standard_normal((size, size)))
    ky = np.minimum(np.arange(size), size - np.arange(size))[:, np.newaxis]
    kx = np.arange(spectrum.shape[1])[np.newaxis, :]
    radius = np.hypot(ky, kx)
    field = np.fft.irfft2(spectrum / (1.0 + radius) ** 1.5, (size, size))
    lo, hi = field.min(), field.max()
    return (field - lo) / (hi - lo) * 255.0


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", type=int, default=512)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--output", default="demo.pgm")
    args = parser.parse_args()
    write_netpbm(args.output, make_demo_image(args.size, args.seed), maxval=255, magic="P5")
    print(f"wrote {args.output} ({args.size}x{args.size}, P5)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
