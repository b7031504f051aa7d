"""Pooling-plan checks against independent FFT-bookkeeping oracles.

The oracles below re-derive every claimed identity with np.fft and literal
bin bookkeeping, independent of the dense matrix construction under test.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fpool.baselines import PoolingKind, pool_baseline
from fpool.pooling import (
    ContractViolationError,
    kept_bins,
    low_band_component,
    make_plan,
    pool1d,
    pool1d_fast,
    pool2d,
    reconstruction_decomposition,
    unpool1d,
    unpool1d_fast,
    unpool2d,
)
from fpool.spectral import circular_shift, signed_frequency


def _pool_oracle(x, m, odd_padding=False):
    """Transform, keep first ceil(m/2) and last floor(m/2) bins, invert at m, scale 1/n."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    s = np.fft.fft(x)
    head, tail = (m + 1) // 2, m - (m + 1) // 2
    sel = np.concatenate([s[:head], s[n - tail :] if tail else s[:0]])
    if odd_padding and m % 2 == 0 and m < n:
        sel[head] = 0.0
    return np.fft.ifft(sel) * (m / n)


def _unpool_oracle(y, n, odd_padding=False):
    """Zero-pad the pooled spectrum back to n bins and invert, scale 1/m."""
    y = np.asarray(y, dtype=float)
    m = len(y)
    s = np.fft.fft(y)
    head, tail = (m + 1) // 2, m - (m + 1) // 2
    full = np.zeros(n, dtype=complex)
    full[:head] = s[:head]
    if tail:
        full[n - tail :] = s[head:]
    if odd_padding and m % 2 == 0 and m < n:
        full[n - m // 2] = 0.0
    return np.fft.ifft(full) * (n / m)


def _round_trip_oracle(x, m, odd_padding=False):
    """Band component reproduced by pool-then-unpool on the real-valued API.

    For unpadded even m the two edge bins each end up holding half of the
    real part of the edge coefficient (the real-part extraction between the
    two steps mixes the unmatched bin with its mirror).
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    s = np.fft.fft(x)
    head, tail = (m + 1) // 2, m - (m + 1) // 2
    out = np.zeros(n, dtype=complex)
    out[:head] = s[:head]
    if tail:
        out[n - tail :] = s[n - tail :]
    if m % 2 == 0 and m < n:
        if odd_padding:
            out[n - m // 2] = 0.0
        else:
            v = (s[m // 2] + s[n - m // 2]) / 4.0
            out[m // 2] = v
            out[n - m // 2] = v
    return np.real(np.fft.ifft(out))


def _signals(max_n=48):
    return st.integers(min_value=2, max_value=max_n).flatmap(
        lambda n: st.tuples(
            st.lists(
                st.floats(min_value=-100, max_value=100, allow_nan=False, width=64),
                min_size=n,
                max_size=n,
            ),
            st.integers(1, n),
        )
    ).map(lambda t: (np.asarray(t[0]), t[1]))


class TestMakePlan:
    def test_identity_when_m_equals_n(self):
        plan = make_plan(8, 8)
        np.testing.assert_allclose(plan.matrix, np.eye(8), atol=1e-12)

    def test_impulse_through_4_to_2_plan(self):
        # by hand: spectrum of the impulse is all ones, bins {0, -1} kept,
        # inverse at length 2 and scale 1/4 gives [0.5, 0]
        plan = make_plan(4, 2)
        np.testing.assert_allclose(plan.matrix @ [1.0, 0, 0, 0], [0.5, 0.0], atol=1e-12)

    def test_matrix_against_oracle_columns(self):
        for n, m, pad in [(12, 6, False), (12, 6, True), (9, 3, False), (10, 5, False)]:
            plan = make_plan(n, m, pad)
            eye = np.eye(n)
            cols = np.stack([_pool_oracle(eye[j], m, pad) for j in range(n)], axis=1)
            np.testing.assert_allclose(plan.matrix, cols, atol=1e-12)

    def test_inverse_matrix_against_oracle_columns(self):
        for n, m, pad in [(12, 6, False), (12, 6, True), (9, 3, False)]:
            plan = make_plan(n, m, pad)
            eye = np.eye(m)
            cols = np.stack([_unpool_oracle(eye[j], n, pad) for j in range(m)], axis=1)
            np.testing.assert_allclose(plan.inverse_matrix, cols, atol=1e-12)

    def test_round_trip_identity_on_pooled_domain(self):
        for n, m in [(16, 8), (16, 5), (17, 4), (8, 8)]:
            plan = make_plan(n, m)
            np.testing.assert_allclose(plan.matrix @ plan.inverse_matrix, np.eye(m), atol=1e-9)

    def test_odd_padding_drops_the_edge_frequency_from_the_round_trip(self):
        plan = make_plan(16, 8, odd_padding=True)
        rt = plan.matrix @ plan.inverse_matrix
        # dropping one frequency makes the round trip the projection
        # I - s s^T / m along the alternating tone s_t = (-1)^t
        signs = (-1.0) ** np.arange(8)
        np.testing.assert_allclose(rt, np.eye(8) - np.outer(signs, signs) / 8, atol=1e-9)
        np.testing.assert_allclose(rt @ signs, np.zeros(8), atol=1e-9)
        # every slower tone still passes untouched
        t = np.arange(8)
        for f in range(4):
            tone = np.cos(2 * np.pi * f * t / 8 + 0.3)
            np.testing.assert_allclose(rt @ tone, tone, atol=1e-9)

    def test_kept_bins_bookkeeping(self):
        np.testing.assert_array_equal(np.flatnonzero(kept_bins(16, 8)), [0, 1, 2, 3, 12, 13, 14, 15])
        np.testing.assert_array_equal(np.flatnonzero(kept_bins(16, 8, True)), [0, 1, 2, 3, 13, 14, 15])
        np.testing.assert_array_equal(np.flatnonzero(kept_bins(16, 5)), [0, 1, 2, 14, 15])
        # m == n keeps everything, padding is a no-op there
        assert kept_bins(6, 6, True).all()

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            make_plan(8, 0)
        with pytest.raises(ValueError):
            make_plan(8, 9)
        with pytest.raises(ValueError):
            make_plan(0, 0)


class TestPool1d:
    def test_constant_passes_through(self):
        plan = make_plan(16, 8)
        np.testing.assert_allclose(pool1d(plan, np.full(16, 2.5)), np.full(8, 2.5), atol=1e-12)

    def test_below_band_tone_is_resampled_exactly(self):
        t = np.arange(16)
        plan = make_plan(16, 8)
        out = pool1d(plan, np.cos(2 * np.pi * t / 16))
        np.testing.assert_allclose(out, np.cos(2 * np.pi * np.arange(8) / 8), atol=1e-9)

    @pytest.mark.parametrize("f", [5, 6, 7])
    def test_outside_band_tone_is_annihilated(self, f):
        t = np.arange(16)
        plan = make_plan(16, 8)
        for phase in (0.0, 0.4, np.pi / 2):
            out = pool1d(plan, np.cos(2 * np.pi * f * t / 16 + phase))
            assert np.sum(out**2) <= 1e-9

    def test_edge_tone_without_padding_keeps_half_real_part(self):
        # edge coefficient 8*e^{i*phi}: the kept mirror bin alone gives
        # 0.5*cos(phi)*(-1)^t with discarded imaginary 0.5*sin(phi)
        phi = 0.7
        t = np.arange(16)
        x = np.cos(2 * np.pi * 4 * t / 16 + phi)
        plan = make_plan(16, 8)
        out = pool1d(plan, x)
        np.testing.assert_allclose(out, 0.5 * np.cos(phi) * (-1.0) ** np.arange(8), atol=1e-9)
        assert plan.last_imag_max == pytest.approx(0.5 * np.sin(phi), abs=1e-9)

    def test_edge_tone_with_padding_is_annihilated(self):
        phi = 0.7
        t = np.arange(16)
        x = np.cos(2 * np.pi * 4 * t / 16 + phi)
        plan = make_plan(16, 8, odd_padding=True)
        np.testing.assert_allclose(pool1d(plan, x), np.zeros(8), atol=1e-9)

    def test_pool_to_single_sample_is_the_mean(self):
        rng = np.random.default_rng(7)
        x = rng.standard_normal(12)
        np.testing.assert_allclose(pool1d(make_plan(12, 1), x), [x.mean()], atol=1e-12)

    def test_matches_oracle_on_random_signals(self):
        rng = np.random.default_rng(8)
        for n, m, pad in [(32, 8, False), (32, 8, True), (21, 7, False), (16, 5, False), (12, 12, False)]:
            x = rng.standard_normal(n)
            got = pool1d(make_plan(n, m, pad), x)
            np.testing.assert_allclose(got, _pool_oracle(x, m, pad).real, atol=1e-10)

    @settings(max_examples=40)
    @given(_signals())
    def test_mean_is_preserved(self, sig):
        x, m = sig
        out = pool1d(make_plan(len(x), m), x)
        np.testing.assert_allclose(out.mean(), x.mean(), rtol=1e-9, atol=1e-9)

    @settings(max_examples=40)
    @given(_signals(max_n=24), st.floats(-3, 3, allow_nan=False))
    def test_linearity(self, sig, a):
        x, m = sig
        plan = make_plan(len(x), m)
        np.testing.assert_allclose(pool1d(plan, a * x), a * pool1d(plan, x), atol=1e-7)

    def test_length_mismatch_is_an_error(self):
        with pytest.raises(ValueError):
            pool1d(make_plan(8, 4), np.zeros(9))


class TestUnpool1d:
    def test_constant_round_trip(self):
        plan = make_plan(12, 4)
        np.testing.assert_allclose(unpool1d(plan, np.full(4, 1.5)), np.full(12, 1.5), atol=1e-12)

    def test_matches_oracle(self):
        # the real-valued API discards the imaginary residue the lone edge
        # bin creates for unpadded even m, so compare real parts; the full
        # complex matrix is pinned column-wise in TestMakePlan
        rng = np.random.default_rng(9)
        for n, m, pad in [(32, 8, False), (32, 8, True), (21, 7, False), (16, 5, False)]:
            y = rng.standard_normal(m)
            got = unpool1d(make_plan(n, m, pad), y)
            np.testing.assert_allclose(got, _unpool_oracle(y, n, pad).real, atol=1e-10)

    def test_output_is_band_limited(self):
        rng = np.random.default_rng(10)
        for n, m, pad in [(32, 8, False), (32, 8, True), (24, 7, False)]:
            plan = make_plan(n, m, pad)
            out = unpool1d(plan, rng.standard_normal(m))
            spectrum = np.fft.fft(out)
            keep = kept_bins(n, m, pad)
            closure = keep | keep[(-np.arange(n)) % n]  # conjugate mirror
            leaked = np.sum(np.abs(spectrum[~closure]) ** 2)
            assert leaked <= 1e-9 * max(1.0, np.sum(np.abs(spectrum) ** 2))

    def test_below_band_signal_round_trips_exactly(self):
        t = np.arange(20)
        x = 1.0 + np.cos(2 * np.pi * 2 * t / 20) - 0.5 * np.sin(2 * np.pi * t / 20)
        plan = make_plan(20, 5)  # keeps |frequency| <= 2
        np.testing.assert_allclose(unpool1d(plan, pool1d(plan, x)), x, atol=1e-9)

    def test_length_mismatch_is_an_error(self):
        with pytest.raises(ValueError):
            unpool1d(make_plan(8, 4), np.zeros(8))


class TestRoundTripProjection:
    @pytest.mark.parametrize(
        "n,m,pad",
        [(32, 8, False), (32, 8, True), (21, 7, False), (16, 5, False), (12, 6, True), (18, 6, False)],
    )
    def test_round_trip_equals_band_component_oracle(self, n, m, pad):
        """Pool then unpool reproduces the kept-band component, edge bookkeeping included."""
        rng = np.random.default_rng(11)
        x = rng.standard_normal(n)
        plan = make_plan(n, m, pad)
        got = unpool1d(plan, pool1d(plan, x))
        np.testing.assert_allclose(got, _round_trip_oracle(x, m, pad), atol=1e-9)

    @pytest.mark.parametrize("n,m,pad", [(32, 8, True), (21, 7, False), (16, 5, False)])
    def test_idempotent_for_symmetric_bands(self, n, m, pad):
        rng = np.random.default_rng(12)
        x = rng.standard_normal(n)
        plan = make_plan(n, m, pad)
        once = unpool1d(plan, pool1d(plan, x))
        twice = unpool1d(plan, pool1d(plan, once))
        np.testing.assert_allclose(twice, once, atol=1e-9)

    def test_identity_on_band_limited_inputs_any_padding(self):
        rng = np.random.default_rng(13)
        n, m = 32, 8
        spectrum = np.zeros(n, dtype=complex)
        for f in (0, 1, 2, 3):
            c = rng.standard_normal() + 1j * rng.standard_normal()
            spectrum[f] = c
            if f:
                spectrum[n - f] = np.conj(c)
        x = np.fft.ifft(spectrum).real
        for pad in (False, True):
            plan = make_plan(n, m, pad)
            np.testing.assert_allclose(unpool1d(plan, pool1d(plan, x)), x, atol=1e-9)


class TestShiftEquivalence:
    @pytest.mark.parametrize("n,m,pad", [(16, 8, True), (16, 5, False), (21, 7, False), (12, 3, False)])
    def test_exact_for_symmetric_bands_at_every_shift(self, n, m, pad):
        """Shift-then-pool equals pool-then-shift through coupled upsampling."""
        rng = np.random.default_rng(14)
        x = rng.standard_normal(n)
        plan = make_plan(n, m, pad)
        base = unpool1d(plan, pool1d(plan, x))
        for delta in range(-n, n + 1):
            lhs = circular_shift(base, delta)
            rhs = unpool1d(plan, pool1d(plan, circular_shift(x, delta)))
            assert np.max(np.abs(lhs - rhs)) <= 1e-9 * np.linalg.norm(x)

    def test_generic_failure_without_padding_on_even_m(self):
        rng = np.random.default_rng(15)
        n, m = 16, 8
        x = rng.standard_normal(n)
        plan = make_plan(n, m)
        base = unpool1d(plan, pool1d(plan, x))
        worst = max(
            np.max(
                np.abs(
                    circular_shift(base, d)
                    - unpool1d(plan, pool1d(plan, circular_shift(x, d)))
                )
            )
            for d in range(-n, n + 1)
        )
        assert worst > 1e-12 * np.linalg.norm(x)

    def test_failure_collapses_when_edge_bin_is_zeroed(self):
        rng = np.random.default_rng(16)
        n, m = 16, 8
        x = rng.standard_normal(n)
        spectrum = np.fft.fft(x)
        spectrum[m // 2] = 0.0
        spectrum[n - m // 2] = 0.0
        x = np.fft.ifft(spectrum).real
        plan = make_plan(n, m)
        base = unpool1d(plan, pool1d(plan, x))
        for delta in range(-n, n + 1):
            rhs = unpool1d(plan, pool1d(plan, circular_shift(x, delta)))
            assert np.max(np.abs(circular_shift(base, delta) - rhs)) <= 1e-9 * np.linalg.norm(x)


class TestPool2d:
    def test_separable_product_of_tones(self):
        th = np.arange(16)
        row = np.cos(2 * np.pi * 2 * th / 16)
        col = np.sin(2 * np.pi * th / 16) + 2.0
        img = np.outer(row, col)
        plan = make_plan(16, 8)
        got = pool2d(plan, plan, img)
        np.testing.assert_allclose(got, np.outer(pool1d(plan, row), pool1d(plan, col)), atol=1e-9)

    def test_row_column_order_commutes(self):
        rng = np.random.default_rng(17)
        img = rng.standard_normal((16, 16))
        pr, pc = make_plan(16, 8), make_plan(16, 8)
        rows_first = (pr.matrix @ img) @ pc.matrix.T
        cols_first = pr.matrix @ (img @ pc.matrix.T)
        np.testing.assert_allclose(rows_first.real, cols_first.real, atol=1e-10)
        np.testing.assert_allclose(pool2d(pr, pc, img), rows_first.real, atol=1e-10)

    def test_matches_per_axis_pooling_for_symmetric_bands(self):
        rng = np.random.default_rng(18)
        img = rng.standard_normal((12, 16))
        pr = make_plan(12, 6, odd_padding=True)
        pc = make_plan(16, 5)
        by_axis = np.stack([pool1d(pc, row) for row in img])
        by_axis = np.stack([pool1d(pr, col) for col in by_axis.T]).T
        np.testing.assert_allclose(pool2d(pr, pc, img), by_axis, atol=1e-9)

    def test_rectangular_and_channelled_images(self):
        rng = np.random.default_rng(19)
        img = rng.standard_normal((3, 12, 16))
        pr, pc = make_plan(12, 3), make_plan(16, 4)
        got = pool2d(pr, pc, img)
        assert got.shape == (3, 3, 4)
        for c in range(3):
            np.testing.assert_allclose(got[c], pool2d(pr, pc, img[c]), atol=1e-12)

    def test_constant_image_passes_through(self):
        pr, pc = make_plan(8, 4), make_plan(8, 2)
        np.testing.assert_allclose(pool2d(pr, pc, np.full((8, 8), 3.0)), np.full((4, 2), 3.0), atol=1e-12)

    def test_unpool2d_round_trips_band_limited_images(self):
        t = np.arange(16)
        img = np.outer(np.cos(2 * np.pi * t / 16), np.sin(2 * np.pi * 2 * t / 16) + 1.0)
        pr = make_plan(16, 8, odd_padding=True)
        pooled = pool2d(pr, pr, img)
        np.testing.assert_allclose(unpool2d(pr, pr, pooled), img, atol=1e-9)

    def test_shape_errors(self):
        pr, pc = make_plan(8, 4), make_plan(8, 4)
        with pytest.raises(ValueError):
            pool2d(pr, pc, np.zeros((7, 8)))
        with pytest.raises(ValueError):
            pool2d(pr, pc, np.zeros(8))


class TestReconstructionDecomposition:
    def test_band_limited_signal_has_zero_errors(self):
        t = np.arange(32)
        x = 1.0 + np.cos(2 * np.pi * 3 * t / 32)
        err_total, err_low, energy_high = reconstruction_decomposition(x, make_plan(32, 8))
        assert err_total <= 1e-9 and err_low <= 1e-9 and energy_high <= 1e-9

    @pytest.mark.parametrize("n,m,pad", [(32, 8, False), (32, 8, True), (21, 7, False), (16, 5, False)])
    def test_energy_identity_is_exact(self, n, m, pad):
        """Total error splits into in-band error plus discarded energy."""
        rng = np.random.default_rng(20)
        x = rng.standard_normal(n)
        plan = make_plan(n, m, pad)
        err_total, err_low, energy_high = reconstruction_decomposition(x, plan)
        assert err_low <= 1e-9
        np.testing.assert_allclose(err_total, err_low + energy_high, rtol=1e-8, atol=1e-12)

    def test_identity_holds_for_arbitrary_downsampled_input(self):
        rng = np.random.default_rng(21)
        x = rng.standard_normal(32)
        plan = make_plan(32, 8)
        y = rng.standard_normal(8)
        err_total, err_low, energy_high = reconstruction_decomposition(x, plan, downsampled=y)
        np.testing.assert_allclose(err_total, err_low + energy_high, rtol=1e-8, atol=1e-12)
        assert err_low > 0

    def test_energy_high_matches_independent_mask_oracle(self):
        rng = np.random.default_rng(22)
        x = rng.standard_normal(32)
        plan = make_plan(32, 8)
        _, _, energy_high = reconstruction_decomposition(x, plan)
        s = np.fft.fft(x)
        keep = np.zeros(32, dtype=bool)
        keep[[0, 1, 2, 3]] = True
        keep[[28, 29, 30, 31]] = True
        oracle = np.sum(np.abs(s[~keep]) ** 2) / 32  # Parseval with 1/n on this convention
        np.testing.assert_allclose(energy_high, oracle, rtol=1e-9)

    @pytest.mark.parametrize("kind", ["max", "avg", "stride", "blur"])
    def test_no_baseline_reconstructs_closer(self, kind):
        """Every baseline's round-trip error is at least the plan's, strictly so off-band."""
        rng = np.random.default_rng(23)
        for trial in range(5):
            x = rng.standard_normal(32)
            plan = make_plan(32, 8)
            err_plan, _, energy_high = reconstruction_decomposition(x, plan)
            y_b = pool_baseline(PoolingKind(kind, 4), x)
            err_b, err_low_b, _ = reconstruction_decomposition(x, plan, downsampled=y_b)
            assert err_b >= err_plan - 1e-9
            assert energy_high > 1e-9 and err_low_b > 1e-9  # generic signal: strict dominance
            assert err_b > err_plan

    def test_low_band_component_matches_mask_oracle(self):
        rng = np.random.default_rng(24)
        for n, m, pad in [(32, 8, False), (32, 8, True), (21, 7, False)]:
            x = rng.standard_normal(n)
            plan = make_plan(n, m, pad)
            s = np.fft.fft(x)
            head, tail = (m + 1) // 2, m - (m + 1) // 2
            keep = np.zeros(n, dtype=bool)
            keep[:head] = True
            if tail:
                keep[n - tail :] = True
            if pad and m % 2 == 0:
                keep[n - m // 2] = False
            oracle = np.fft.ifft(np.where(keep, s, 0))
            np.testing.assert_allclose(low_band_component(x, plan), oracle, atol=1e-10)


class TestDiagnostics:
    def test_symmetric_plan_never_raises_on_clean_input(self):
        rng = np.random.default_rng(25)
        plan = make_plan(16, 8, odd_padding=True)
        pool1d(plan, rng.standard_normal(16))
        assert plan.last_imag_max <= 1e-9

    def test_contract_error_type_exists(self):
        assert issubclass(ContractViolationError, RuntimeError)

    def test_anti_aliasing_certificate_with_padding(self):
        # padded plans leave the pooled edge bin empty for any input
        rng = np.random.default_rng(26)
        plan = make_plan(16, 8, odd_padding=True)
        out = pool1d(plan, rng.standard_normal(16))
        assert abs(np.fft.fft(out)[4]) <= 1e-9


class TestFastPath:
    # the dense matrices define the maps; the transform path must agree

    def test_pool_matches_dense(self):
        rng = np.random.default_rng(27)
        for n, m, pad in [(16, 8, False), (16, 8, True), (17, 5, False), (64, 9, False), (513, 40, False)]:
            plan = make_plan(n, m, pad)
            x = rng.standard_normal(n)
            np.testing.assert_allclose(
                pool1d_fast(plan, x), pool1d(plan, x), atol=1e-9 * max(1.0, np.linalg.norm(x))
            )

    def test_unpool_matches_dense(self):
        rng = np.random.default_rng(28)
        for n, m, pad in [(16, 8, False), (16, 8, True), (21, 7, False), (512, 128, True)]:
            plan = make_plan(n, m, pad)
            y = rng.standard_normal(m)
            np.testing.assert_allclose(
                unpool1d_fast(plan, y), unpool1d(plan, y), atol=1e-9 * max(1.0, np.linalg.norm(y))
            )

    @given(_signals())
    def test_pool_matches_dense_everywhere(self, case):
        x, m = case
        plan = make_plan(len(x), m)
        scale = max(1.0, np.linalg.norm(x))
        np.testing.assert_allclose(pool1d_fast(plan, x), pool1d(plan, x), atol=1e-9 * scale)

    def test_fast_path_keeps_the_diagnostics(self):
        plan = make_plan(16, 8)  # asymmetric band, edge residue recorded
        t = np.arange(16)
        pool1d_fast(plan, np.cos(2 * np.pi * 4 * t / 16 + 0.7))
        assert plan.last_imag_max > 1e-3
