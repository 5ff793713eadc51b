import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tempolabel import (
    ConfigError,
    SimConfig,
    annotate,
    generate_events,
    round_to_resolution,
    run_error_rate_experiment,
    run_f1_experiment,
    run_mse_experiment,
)


def test_rounding_examples():
    eight_oh_seven = 8 * 60 + 7
    assert annotate(eight_oh_seven, 30, 0.0) == 8 * 60
    assert annotate(eight_oh_seven, 30, 15.0) == 8 * 60 + 30
    assert annotate(eight_oh_seven, 1, 0.0) == eight_oh_seven


def test_midpoint_rounds_up():
    assert round_to_resolution(495, 30) == 510
    assert round_to_resolution(15, 30) == 30
    assert round_to_resolution(7.5, 15) == 15


@settings(deadline=None, max_examples=100)
@given(
    st.integers(0, 100_000),
    st.sampled_from([1, 5, 10, 15, 30]),
    st.floats(0.0, 0.99),
)
def test_rounding_residual_bound(true_time, resolution, bias_fraction):
    bias = bias_fraction * resolution
    annotated = annotate(true_time, resolution, bias)
    assert abs(annotated - (true_time + bias)) <= resolution / 2


def test_generate_events_deterministic_and_sane():
    config = SimConfig(seed=11, n_events=40, resolution_minutes=15)
    records = generate_events(config)
    assert records == generate_events(config)
    assert len(records) == 40
    for rec in records:
        assert rec.true_end > rec.true_start
        assert 20 <= rec.true_end - rec.true_start <= 90
        assert rec.annotated_start % 15 == 0
        assert rec.annotated_end % 15 == 0
        assert rec.annotated_end >= rec.annotated_start
        day = rec.true_start // 1440
        assert rec.true_end // 1440 == day  # no midnight wrap


def test_generate_events_nonoverlapping_within_day():
    config = SimConfig(
        seed=5, n_events=12, events_per_day=3, duration_range=(20, 60)
    )
    records = generate_events(config)
    by_day = {}
    for rec in records:
        by_day.setdefault(rec.true_start // 1440, []).append(rec)
    assert all(len(v) == 3 for v in by_day.values())
    for recs in by_day.values():
        recs = sorted(recs, key=lambda r: r.true_start)
        for a, b in zip(recs, recs[1:]):
            assert a.true_end <= b.true_start


def test_window_too_small_is_config_error():
    with pytest.raises(ConfigError):
        generate_events(SimConfig(seed=1, n_events=4, day_window=(0, 180)))
    with pytest.raises(ConfigError):
        SimConfig(seed=1, n_events=4, day_window=(100, 90))


def test_debiased_ramp_support_always_covers_truth():
    # with bias <= resolution/2 the true boundary must sit inside the
    # re-centered ramp support [center - T/2, center + T/2]
    config = SimConfig(seed=9, n_events=200, resolution_minutes=30, bias_fraction=0.5)
    for rec in generate_events(config):
        for true_t, ann in (
            (rec.true_start, rec.annotated_start),
            (rec.true_end, rec.annotated_end),
        ):
            center = ann - rec.bias_minutes
            assert abs(true_t - center) <= 15.0


def test_mse_experiment_rows_and_resolution_one():
    rows = run_mse_experiment(SimConfig(seed=2, n_events=60), resolutions=(1, 30))
    assert [r["resolution_minutes"] for r in rows] == [1, 30]
    res1 = rows[0]
    assert res1["mse_hard"] <= 1e-12 and res1["mse_soft"] <= 1e-12
    res30 = rows[1]
    assert res30["mse_soft"] < res30["mse_hard"]


def test_f1_experiment_shares_truth_across_biases():
    rows = run_f1_experiment(
        SimConfig(seed=4, n_events=40), resolutions=(15,), bias_fractions=(0.0, 0.5)
    )
    assert {r["bias_fraction"] for r in rows} == {0.0, 0.5}
    assert all(r["n_events"] == 40 for r in rows)
    unbiased = next(r for r in rows if r["bias_fraction"] == 0.0)
    biased = next(r for r in rows if r["bias_fraction"] == 0.5)
    assert unbiased["f1_hard"] >= unbiased["f1_soft"]
    assert biased["f1_soft"] >= biased["f1_hard"]


def test_f1_resolution_one_unbiased_is_perfect():
    rows = run_f1_experiment(
        SimConfig(seed=8, n_events=50), resolutions=(1,), bias_fractions=(0.0,)
    )
    assert rows[0]["f1_hard"] == 1.0
    assert rows[0]["f1_soft"] == 1.0


def test_error_rate_experiment_shape_and_determinism():
    rows = run_error_rate_experiment(seed=3, n_values=(1, 10), trials=50)
    again = run_error_rate_experiment(seed=3, n_values=(1, 10), trials=50)
    assert rows == again
    assert len(rows) == 10  # 5 categories x 2 sweep points
    coarsest = [r for r in rows if r["category_period"] == 30]
    assert all(r["error_rate"] == 0.0 for r in coarsest)


def test_error_rate_experiment_custom_periods():
    rows = run_error_rate_experiment(seed=3, n_values=(1,), trials=20, periods=(5,))
    assert len(rows) == 1
    assert rows[0]["category_period"] == 5
    assert 0.0 <= rows[0]["error_rate"] <= 1.0
