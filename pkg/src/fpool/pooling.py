"""Frequency-domain pooling plans and their coupled inverses.

A plan for pooling length ``n`` down to length ``m`` is a dense complex
matrix pair built from the transform matrices:

* pooling:    ``matrix = conj(F_m) @ D @ F_n / n``  (shape ``(m, n)``)
* upsampling: ``inverse_matrix = conj(F_n) @ D.T @ F_m / m``  (shape ``(n, m)``)

where ``D`` keeps the first ``ceil(m/2)`` and last ``floor(m/2)`` spectrum
rows.  Keeping the lowest-frequency band is what makes the pair exactly
shift-equivalent and anti-aliasing; the matrices are applied as plain
matmuls (the authoritative path, O(n*m) per signal).

For even ``m`` the band edge is asymmetric: the negative edge frequency is
kept without its positive mirror, so pooled values pick up a small imaginary
part that the real-valued API discards.  ``odd_padding=True`` zeroes that
unmatched selection row, restoring conjugate symmetry and making the
round trip exactly real (and exactly shift-equivalent); it is off by
default, matching the convention that downstream layers simply ignore the
residue.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .spectral import dft, dft_matrix, idft

__all__ = [
    "ContractViolationError",
    "FPoolPlan",
    "kept_bins",
    "low_band_component",
    "make_plan",
    "pool1d",
    "pool1d_fast",
    "pool2d",
    "reconstruction_decomposition",
    "unpool1d",
    "unpool1d_fast",
    "unpool2d",
]

# Shift-equivalence and round-trip identities are asserted at this scale.
EXACTNESS_TOL = 1e-9


class ContractViolationError(RuntimeError):
    """A numeric identity that the construction guarantees failed to hold."""


@dataclass(eq=False)
class FPoolPlan:
    """Pooling plan ``n -> m`` with its coupled inverse.

    ``matrix`` and ``inverse_matrix`` are treated as immutable after
    construction.  ``last_imag_max`` is a diagnostic only: the largest
    imaginary magnitude discarded by the most recent pool/unpool call.
    """

    n: int
    m: int
    odd_padding: bool
    matrix: np.ndarray = field(repr=False)
    inverse_matrix: np.ndarray = field(repr=False)
    last_imag_max: float = field(default=0.0, repr=False)

    @property
    def symmetric_band(self) -> bool:
        """True when the kept band is conjugate-symmetric (exactly real round trip)."""
        return self.m % 2 == 1 or self.odd_padding or self.m == self.n


def _head_tail(m: int) -> tuple[int, int]:
    head = (m + 1) // 2
    return head, m - head


def _pads_edge(n: int, m: int, odd_padding: bool) -> bool:
    # For m == n the edge bin is its own mirror, nothing is unmatched.
    return odd_padding and m % 2 == 0 and m < n


def kept_bins(n: int, m: int, odd_padding: bool = False) -> np.ndarray:
    """Boolean mask over the ``n`` source bins that survive the plan's selection."""
    head, tail = _head_tail(m)
    keep = np.zeros(n, dtype=bool)
    keep[:head] = True
    if tail:
        keep[n - tail :] = True
    if _pads_edge(n, m, odd_padding):
        keep[n - m // 2] = False
    return keep


def _selection(n: int, m: int, odd_padding: bool) -> np.ndarray:
    head, tail = _head_tail(m)
    d = np.zeros((m, n))
    cols = np.r_[np.arange(head), np.arange(n - tail, n)]
    d[np.arange(m), cols] = 1.0
    if _pads_edge(n, m, odd_padding):
        d[head] = 0.0  # drop the unmatched negative edge frequency
    return d


def make_plan(n: int, m: int, odd_padding: bool = False) -> FPoolPlan:
    """Build the pooling plan ``n -> m``.

    Parameters
    ----------
    n, m : int
        Input and output lengths, ``1 <= m <= n`` (a plan never upsamples).
    odd_padding : bool
        Zero the unmatched edge-frequency row for even ``m`` (see module
        docstring).  No effect for odd ``m`` or ``m == n``.

    The kept bins round-trip exactly: ``matrix @ inverse_matrix`` is the
    identity on the pooled domain (verified at build time to 1e-9).  Under
    odd padding it is instead the projection that removes the pooled
    domain's own edge frequency, I - s s^T / m with s_k = (-1)^k, since
    that frequency was deliberately dropped.
    """
    n, m = int(n), int(m)
    if n < 1:
        raise ValueError(f"input length must be >= 1, got {n}")
    if m < 1:
        raise ValueError(f"output length must be >= 1, got {m}")
    if m > n:
        raise ValueError(f"plan must not upsample: m={m} > n={n}")
    d = _selection(n, m, odd_padding)
    f_n = dft_matrix(n)
    f_m = dft_matrix(m)
    matrix = (np.conj(f_m) @ (d @ f_n)) / n
    inverse = (np.conj(f_n) @ (d.T @ f_m)) / m
    round_trip = matrix @ inverse
    expected = np.eye(m)
    if _pads_edge(n, m, odd_padding):
        signs = np.where(np.arange(m) % 2 == 0, 1.0, -1.0)
        expected -= np.outer(signs, signs) / m
    if np.max(np.abs(round_trip - expected)) > EXACTNESS_TOL:
        raise ContractViolationError(
            f"plan {n}->{m} round trip deviates from identity beyond {EXACTNESS_TOL}"
        )
    matrix.setflags(write=False)
    inverse.setflags(write=False)
    return FPoolPlan(n=n, m=m, odd_padding=bool(odd_padding), matrix=matrix, inverse_matrix=inverse)


def _check_real_1d(x, length: int, name: str) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != length:
        raise ValueError(f"{name} must be 1-D of length {length}, got shape {x.shape}")
    return x


def _discard_imag(plan: FPoolPlan, values: np.ndarray, scale: float) -> np.ndarray:
    imag_max = float(np.max(np.abs(values.imag))) if values.size else 0.0
    plan.last_imag_max = imag_max
    if plan.symmetric_band and imag_max > EXACTNESS_TOL * max(1.0, scale):
        raise ContractViolationError(
            f"symmetric-band plan discarded imaginary magnitude {imag_max:.3e}"
        )
    return values.real.copy()


def pool1d(plan: FPoolPlan, x) -> np.ndarray:
    """Pool a real length-``n`` signal to length ``m``.

    Keeps the signal's mean, keeps every below-band tone exactly on the
    coarse grid, and annihilates every outside-band tone.  For plans with a
    conjugate-symmetric band the result is exactly real; otherwise the edge
    residue is discarded and recorded in ``plan.last_imag_max``.
    """
    x = _check_real_1d(x, plan.n, "x")
    y = plan.matrix @ x
    return _discard_imag(plan, y, float(np.linalg.norm(x)))


def unpool1d(plan: FPoolPlan, y) -> np.ndarray:
    """Upsample a pooled signal back to length ``n`` with the coupled inverse.

    The output is band-limited: its spectrum is supported only on the
    plan's kept band (plus the conjugate mirror of the edge bin for
    unpadded even ``m``).
    """
    y = _check_real_1d(y, plan.m, "y")
    x = plan.inverse_matrix @ y
    return _discard_imag(plan, x, float(np.linalg.norm(y)))


def pool1d_fast(plan: FPoolPlan, x) -> np.ndarray:
    """Same map as :func:`pool1d` through the fast transform.

    The dense matrix is the authoritative definition; this path exists for
    large inputs and must agree with it to the exactness tolerance.
    """
    x = _check_real_1d(x, plan.n, "x")
    s = np.fft.fft(x)
    head, tail = _head_tail(plan.m)
    sel = np.concatenate([s[:head], s[plan.n - tail :] if tail else s[:0]])
    if _pads_edge(plan.n, plan.m, plan.odd_padding):
        sel[head] = 0.0
    y = np.fft.ifft(sel) * (plan.m / plan.n)
    return _discard_imag(plan, y, float(np.linalg.norm(x)))


def unpool1d_fast(plan: FPoolPlan, y) -> np.ndarray:
    """Same map as :func:`unpool1d` through the fast transform."""
    y = _check_real_1d(y, plan.m, "y")
    s = np.fft.fft(y)
    head, tail = _head_tail(plan.m)
    full = np.zeros(plan.n, dtype=complex)
    full[:head] = s[:head]
    if tail:
        full[plan.n - tail :] = s[head:]
    if _pads_edge(plan.n, plan.m, plan.odd_padding):
        full[plan.n - plan.m // 2] = 0.0
    x = np.fft.ifft(full) * (plan.n / plan.m)
    return _discard_imag(plan, x, float(np.linalg.norm(y)))


def pool2d(plan_rows: FPoolPlan, plan_cols: FPoolPlan, image) -> np.ndarray:
    """Separable pooling of an image, rows through ``plan_rows`` and columns
    through ``plan_cols``.

    The whole complex chain is evaluated first and the real part taken once
    at the end, so row/column order is irrelevant by associativity.  Accepts
    ``(h, w)`` or ``(channels, h, w)``.
    """
    return _apply_2d(plan_rows, plan_cols, image, plan_rows.matrix, plan_cols.matrix)


def unpool2d(plan_rows: FPoolPlan, plan_cols: FPoolPlan, pooled) -> np.ndarray:
    """Inverse of :func:`pool2d` on the kept band (coupled upsampling)."""
    return _apply_2d(
        plan_rows, plan_cols, pooled, plan_rows.inverse_matrix, plan_cols.inverse_matrix
    )


def _apply_2d(plan_rows, plan_cols, image, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    img = np.asarray(image, dtype=float)
    squeeze = img.ndim == 2
    if squeeze:
        img = img[np.newaxis]
    if img.ndim != 3 or img.shape[1] != left.shape[1] or img.shape[2] != right.shape[1]:
        raise ValueError(
            f"image must be (channels, {left.shape[1]}, {right.shape[1]}), got {np.shape(image)}"
        )
    out = np.empty((img.shape[0], left.shape[0], right.shape[0]), dtype=complex)
    for c in range(img.shape[0]):
        out[c] = left @ img[c] @ right.T
    scale = float(np.linalg.norm(img))
    imag_max = float(np.max(np.abs(out.imag))) if out.size else 0.0
    for plan in (plan_rows, plan_cols):
        plan.last_imag_max = imag_max
        if (
            plan_rows.symmetric_band
            and plan_cols.symmetric_band
            and imag_max > EXACTNESS_TOL * max(1.0, scale)
        ):
            raise ContractViolationError(
                f"symmetric-band plans discarded imaginary magnitude {imag_max:.3e}"
            )
    result = out.real.copy()
    return result[0] if squeeze else result


def low_band_component(x, plan: FPoolPlan) -> np.ndarray:
    """Complex band component of ``x`` under the plan's literal bin selection.

    This is exactly what pooling followed by coupled upsampling reproduces
    when both are run in complex arithmetic, for every parity and padding
    choice.
    """
    x = _check_real_1d(x, plan.n, "x")
    keep = kept_bins(plan.n, plan.m, plan.odd_padding)
    return idft(dft(x) * keep) / plan.n


def reconstruction_decomposition(
    x, plan: FPoolPlan, downsampled=None
) -> tuple[float, float, float]:
    """Split the reconstruction error of a downsample/upsample round trip.

    Evaluates the chain in complex arithmetic, where the coupled upsampler's
    range and the discarded band are orthogonal, so the identity

        ``err_total == err_low + energy_high``

    is exact for any real downsampled input:

    * ``err_total``   total squared error of the reconstruction against ``x``,
    * ``err_low``     squared error against the band component of ``x``,
    * ``energy_high`` squared energy of ``x`` outside the kept band.

    With ``downsampled=None`` the plan's own pooling is used, for which
    ``err_low`` vanishes (the round trip IS the band component): no
    downsampling to ``m`` samples reconstructs closer to ``x`` than the
    plan, whatever produced ``downsampled``.
    """
    x = _check_real_1d(x, plan.n, "x")
    if downsampled is None:
        y = plan.matrix @ x
    else:
        y = np.asarray(downsampled, dtype=float)
        if y.ndim != 1 or y.shape[0] != plan.m:
            raise ValueError(f"downsampled must have length {plan.m}, got shape {y.shape}")
    r = plan.inverse_matrix @ y
    x_l = low_band_component(x, plan)
    err_total = float(np.sum(np.abs(r - x) ** 2))
    err_low = float(np.sum(np.abs(r - x_l) ** 2))
    energy_high = float(np.sum(np.abs(x - x_l) ** 2))
    return err_total, err_low, energy_high
