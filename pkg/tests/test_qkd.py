import math

import pytest

from pairlink.pairstats import ChannelSpec, SourceSpec, car_anchor_source, count_model
from pairlink.photonics import Wavelength
from pairlink.qkd import (
    LinkSpec,
    binary_entropy,
    link_qber,
    hybrid_link,
    pump_sweep,
    secret_key_rate,
)


def clean_ch(nm, loss=0.0, eta=1.0, dark=0.0):
    return ChannelSpec(Wavelength.from_nm(nm), loss, eta, dark, 0.0)


def clean_link(rate=1e5, e_int=0.0, window=900e-12, loss=0.0, dark=0.0, f=1.0):
    src = SourceSpec(pair_rate_per_mw=rate, intrinsic_pol_error=e_int)
    return LinkSpec(
        source=src,
        ch_signal=clean_ch(810, loss=loss, dark=dark),
        ch_idler=clean_ch(1550, loss=loss, dark=dark),
        window=window,
        ec_efficiency=f,
    )


# --- binary entropy ---------------------------------------------------------------


def test_binary_entropy_reference_points():
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.05) == pytest.approx(0.28639695711595625, abs=1e-12)
    for x in (0.01, 0.11, 0.3):
        assert binary_entropy(x) == pytest.approx(binary_entropy(1.0 - x), abs=1e-15)
    with pytest.raises(ValueError):
        binary_entropy(-0.01)
    with pytest.raises(ValueError):
        binary_entropy(1.01)


# --- QBER --------------------------------------------------------------------------


def test_qber_reduces_to_intrinsic_error_without_accidentals():
    link = clean_link(e_int=0.0025, window=1e-15)
    qz, qx, _ = link_qber(link, 1.0)
    assert qz == pytest.approx(0.0025, rel=1e-6)
    assert qx == pytest.approx(0.0025, rel=1e-6)


def test_qber_is_half_when_only_accidentals_remain():
    # kill the signal-arm transmission: C = 0 but darks keep A finite
    src = SourceSpec(pair_rate_per_mw=1e5, heralding_810=0.0)
    link = LinkSpec(
        source=src,
        ch_signal=clean_ch(810, dark=1e3),
        ch_idler=clean_ch(1550, dark=50.0),
    )
    qz, qx, model = link_qber(link, 100.0)
    assert model.true_coinc == 0.0
    assert qz == 0.5 and qx == 0.5


def test_qber_undefined_without_any_coincidences():
    with pytest.raises(ValueError):
        link_qber(clean_link(), 0.0)


def test_anchored_share_fixes_dark_free_qber():
    # 1.1% accidental share: qber_z = e*0.989 + 0.5*0.011
    link = LinkSpec(
        source=car_anchor_source(),
        ch_signal=clean_ch(810, loss=15.0, eta=0.60),
        ch_idler=clean_ch(1550, loss=15.0, eta=0.80),
        intrinsic_error_z=0.0025,
        intrinsic_error_x=0.0035,
    )
    qz, _, _ = link_qber(link, 125.0)
    assert qz == pytest.approx(0.0079725, abs=1e-9)


def test_dark_free_qber_is_loss_invariant():
    qz0, _, _ = link_qber(clean_link(e_int=0.0025, loss=0.0), 125.0)
    qz30, _, _ = link_qber(clean_link(e_int=0.0025, loss=15.0), 125.0)
    assert qz30 == pytest.approx(qz0, rel=1e-12)


def test_dark_free_qber_monotone_in_pump():
    link = clean_link(e_int=0.0025)
    qs = [link_qber(link, p)[0] for p in (1.0, 10.0, 100.0, 1000.0)]
    assert all(a < b for a, b in zip(qs, qs[1:]))


def test_extra_loss_scales_coincidences_and_raises_qber_with_darks():
    base = LinkSpec(
        source=car_anchor_source(),
        ch_signal=clean_ch(810, loss=12.0, dark=200.0),
        ch_idler=clean_ch(1550, loss=12.0, dark=50.0),
        intrinsic_error_z=0.0025,
    )
    plus3 = LinkSpec(
        source=base.source,
        ch_signal=clean_ch(810, loss=15.0, dark=200.0),
        ch_idler=clean_ch(1550, loss=15.0, dark=50.0),
        intrinsic_error_z=0.0025,
    )
    _, _, m0 = link_qber(base, 125.0)
    qz3, _, m3 = link_qber(plus3, 125.0)
    assert m3.true_coinc / m0.true_coinc == pytest.approx(10 ** -0.6, rel=1e-12)
    assert qz3 > link_qber(base, 125.0)[0]


def test_narrower_window_halves_accidentals_and_qber():
    link = hybrid_link()
    half = LinkSpec(
        source=link.source,
        ch_signal=link.ch_signal,
        ch_idler=link.ch_idler,
        window=link.window / 2.0,
        intrinsic_error_z=link.intrinsic_error_z,
        intrinsic_error_x=link.intrinsic_error_x,
    )
    _, _, m1 = link_qber(link, 500.0)
    qz2, _, m2 = link_qber(half, 500.0)
    assert m2.accidental == pytest.approx(m1.accidental / 2.0, rel=1e-12)
    assert m2.true_coinc == m1.true_coinc
    assert qz2 < link_qber(link, 500.0)[0]


# --- secret key rate ---------------------------------------------------------------


def test_skr_equals_sifted_rate_in_the_ideal_limit():
    link = clean_link(e_int=0.0, window=1e-18, f=1.0)
    pt = secret_key_rate(link, 1.0)
    assert pt.skr == pytest.approx(pt.sifted_rate, rel=1e-9)
    assert pt.sifted_rate == pytest.approx(0.5 * 1e5, rel=1e-6)


def test_skr_collapses_near_the_error_threshold():
    # 1 - 2 h(e) is ~1.7e-4 at e = 0.11 and negative at e = 0.12
    near = secret_key_rate(clean_link(e_int=0.11, window=1e-18, f=1.0), 1.0)
    assert 0.0 < near.skr < 2e-4 * near.sifted_rate
    dead = secret_key_rate(clean_link(e_int=0.12, window=1e-18, f=1.0), 1.0)
    assert dead.skr == 0.0


def test_hybrid_link_rate_at_full_pump():
    pt = secret_key_rate(hybrid_link(), 125.0)
    assert pt.skr > 100.0
    assert pt.qber_z < 0.05


def test_skr_dies_at_extreme_pump():
    assert secret_key_rate(hybrid_link(), 1e6).skr == 0.0


# --- pump sweep ---------------------------------------------------------------------


def test_pump_sweep_locates_interior_optimum():
    res = pump_sweep(hybrid_link(), 1.0, 2000.0, 64)
    assert 400.0 <= res.p_opt <= 1800.0
    assert res.skr_opt >= max(pt.skr for pt in res.points)
    qz_opt, _, _ = link_qber(hybrid_link(), res.p_opt)
    assert qz_opt == pytest.approx(0.05, abs=0.02)


def test_pump_sweep_grid_is_unimodal():
    res = pump_sweep(hybrid_link(), 1.0, 2000.0, 64)
    skrs = [pt.skr for pt in res.points]
    i_best = skrs.index(max(skrs))
    assert all(a <= b for a, b in zip(skrs[: i_best + 1], skrs[1 : i_best + 1]))
    assert all(a >= b for a, b in zip(skrs[i_best:], skrs[i_best + 1 :]))


def test_pump_sweep_five_percent_crossing():
    res = pump_sweep(hybrid_link(), 1.0, 2000.0, 64)
    assert res.p_at_qberz_5pct is not None
    qz, _, _ = link_qber(hybrid_link(), res.p_at_qberz_5pct)
    assert qz == pytest.approx(0.05, abs=1e-6)
    assert res.p_at_qberz_5pct < res.p_opt


def test_pump_sweep_handles_zero_power_start():
    res = pump_sweep(hybrid_link(), 0.0, 200.0, 16)
    assert res.points[0].pump_mw > 0.0
    assert math.isfinite(res.points[0].skr)


def test_pump_sweep_without_crossing_returns_none():
    res = pump_sweep(hybrid_link(), 1.0, 100.0, 16)
    assert res.p_at_qberz_5pct is None


def test_pump_sweep_validation():
    link = hybrid_link()
    with pytest.raises(ValueError):
        pump_sweep(link, -1.0, 100.0, 16)
    with pytest.raises(ValueError):
        pump_sweep(link, 100.0, 100.0, 16)
    with pytest.raises(ValueError):
        pump_sweep(link, 1.0, 100.0, 15)


def test_pump_sweep_rejects_dead_grid():
    with pytest.raises(ValueError):
        pump_sweep(clean_link(e_int=0.3), 1.0, 100.0, 16)


# --- LinkSpec ------------------------------------------------------------------------


def test_link_spec_defaults_and_validation():
    src = SourceSpec(pair_rate_per_mw=1e5, intrinsic_pol_error=0.01)
    link = LinkSpec(source=src, ch_signal=clean_ch(810), ch_idler=clean_ch(1550))
    assert link.intrinsic_error_z == 0.01
    assert link.intrinsic_error_x == 0.01

    with pytest.raises(ValueError):
        LinkSpec(src, clean_ch(810), clean_ch(1550), window=0.0)
    with pytest.raises(ValueError):
        LinkSpec(src, clean_ch(810), clean_ch(1550), ec_efficiency=0.9)
    with pytest.raises(ValueError):
        LinkSpec(src, clean_ch(810), clean_ch(1550), sifting_factor=0.0)
    with pytest.raises(ValueError):
        LinkSpec(src, clean_ch(810), clean_ch(1550), intrinsic_error_z=0.6)
