import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tempolabel import (
    AnnotationSet,
    CategoryCatalog,
    ConfigError,
    DegenerateModelError,
    InputError,
    SwitchModel,
    category_posterior,
    habit_posterior,
    likelihood,
    map_category,
    switch_prob,
)

from .oracles import enumerate_posteriors

# habit posterior for a single annotation at minute 0, default catalogue and
# delta=0.1; frozen from the enumeration oracle
SINGLE_ZERO_HABIT = (
    0.4553278688524590,
    0.2401639344262295,
    0.1684426229508197,
    0.0967213114754098,
    0.0393442622950820,
)


def test_likelihood_values(catalog):
    assert likelihood(catalog[0], 30) == 0.5
    assert likelihood(catalog[3], 25) == 1.0 / 12.0
    assert likelihood(catalog[1], 20) == 0.0


def test_switch_prob_values(catalog, model):
    assert switch_prob(model, catalog[0], catalog[0], 5) == pytest.approx(0.9)
    assert switch_prob(model, catalog[0], catalog[1], 5) == pytest.approx(0.025)
    assert switch_prob(SwitchModel(0.0), catalog[0], catalog[1], 5) == 0.0


def test_switch_prob_single_category_catalogue(catalog, model):
    with pytest.raises(ConfigError):
        switch_prob(model, catalog[0], catalog[1], 1)


def test_delta_validation():
    with pytest.raises(ConfigError):
        SwitchModel(delta=1.5)
    with pytest.raises(ConfigError):
        SwitchModel(delta=-0.1)


def test_annotation_set_validation():
    with pytest.raises(InputError):
        AnnotationSet("a", (60,))
    ann = AnnotationSet.from_timestamps("a", (480, 510, 1445))
    assert ann.minutes == (0, 30, 5)


def test_empty_annotation_set_rejected(catalog, model):
    with pytest.raises(InputError):
        habit_posterior(AnnotationSet("a", ()), catalog, model)


def test_single_annotation_habit_frozen_vector(catalog, model):
    hab = habit_posterior(AnnotationSet("a", (0,)), catalog, model)
    np.testing.assert_allclose(hab.probs, SINGLE_ZERO_HABIT, atol=1e-12)
    assert hab.map_category().period_minutes == 30


def test_twenty_half_hour_annotations_give_confident_habit(catalog, model):
    hab = habit_posterior(AnnotationSet("a", (0, 30) * 10), catalog, model)
    assert hab.map_category().period_minutes == 30
    assert hab.probs[0] > 0.99


def test_no_switch_model_forces_compatible_habit(catalog):
    hab = habit_posterior(AnnotationSet("a", (0, 16)), catalog, SwitchModel(0.0))
    np.testing.assert_array_equal(hab.probs, [0.0, 0.0, 0.0, 0.0, 1.0])


def test_habit_matches_oracle_single(catalog, model):
    expected, _ = enumerate_posteriors((0,))
    hab = habit_posterior(AnnotationSet("a", (0,)), catalog, model)
    np.testing.assert_allclose(hab.probs, expected, atol=1e-12)


def test_category_rows_match_oracle(catalog, model):
    minutes = (0, 15, 7)
    ann = AnnotationSet("a", minutes)
    _, expected_rows = enumerate_posteriors(minutes)
    rows = category_posterior(ann, catalog, model)
    np.testing.assert_allclose(rows.rows, expected_rows, atol=1e-10)


def test_minute30_outlier_still_maps_finest(catalog, model):
    minutes = (7, 13, 22, 9, 41, 53, 1, 2, 3, 4, 6, 8, 11, 12, 14, 16, 17, 18, 19, 30)
    rows = category_posterior(AnnotationSet("a", minutes), catalog, model)
    assert rows.minutes[-1] == 30
    assert rows.map_category(19).period_minutes == 1


def test_confident_fine_habit_dominates_coarse_minutes(catalog, model):
    # an annotator established as 1-minute: entries landing on the coarse
    # grid still decode as 1-minute (0.9/60 beats 0.025/2)
    minutes = tuple(range(60))
    rows = category_posterior(AnnotationSet("a", minutes), catalog, model)
    for i, minute in enumerate(minutes):
        assert rows.map_category(i).period_minutes == 1, f"minute {minute}"


def test_zero_likelihood_exclusion(catalog, model):
    rows = category_posterior(AnnotationSet("a", (7, 20, 45)), catalog, model)
    for i, minute in enumerate(rows.minutes):
        for ci, cat in enumerate(catalog):
            if not cat.contains(minute):
                assert rows.rows[i, ci] == 0.0


def test_rows_and_habit_sum_to_one(catalog, model):
    ann = AnnotationSet("a", tuple(range(0, 60, 3)))
    hab = habit_posterior(ann, catalog, model)
    rows = category_posterior(ann, catalog, model, habit=hab)
    assert abs(hab.probs.sum() - 1.0) < 1e-12
    np.testing.assert_allclose(rows.rows.sum(axis=1), 1.0, atol=1e-12)


def test_map_category_tie_breaks_coarse(catalog):
    assert map_category((0.6, 0.2, 0.1, 0.05, 0.05), catalog).period_minutes == 30
    assert map_category((0.4, 0.4, 0.1, 0.05, 0.05), catalog).period_minutes == 30
    assert map_category((0.0, 0.0, 0.0, 1.0, 0.0), catalog).period_minutes == 5


def test_custom_prior_shifts_posterior(catalog, model):
    ann = AnnotationSet("a", (0,))
    skewed = habit_posterior(ann, catalog, model, prior=(0.0, 0.0, 0.0, 0.0, 1.0))
    assert skewed.map_category().period_minutes == 1
    with pytest.raises(ConfigError):
        habit_posterior(ann, catalog, model, prior=(1.0, 1.0))


def test_zero_prior_everywhere_feasible_degenerates(catalog):
    # prior allows only habits that cannot explain the data under delta=0
    with pytest.raises(DegenerateModelError):
        habit_posterior(
            AnnotationSet("a", (7,)),
            catalog,
            SwitchModel(0.0),
            prior=(1.0, 0.0, 0.0, 0.0, 0.0),
        )


@settings(deadline=None, max_examples=30)
@given(st.lists(st.integers(0, 59), min_size=1, max_size=40), st.randoms())
def test_habit_permutation_invariance(minutes, rnd):
    catalog = CategoryCatalog.default()
    model = SwitchModel()
    shuffled = list(minutes)
    rnd.shuffle(shuffled)
    a = habit_posterior(AnnotationSet("x", tuple(minutes)), catalog, model)
    b = habit_posterior(AnnotationSet("x", tuple(shuffled)), catalog, model)
    np.testing.assert_allclose(a.probs, b.probs, atol=1e-12)


@settings(deadline=None, max_examples=30)
@given(st.lists(st.integers(0, 59), min_size=1, max_size=20))
def test_duplicating_evidence_never_weakens_argmax(minutes):
    catalog = CategoryCatalog.default()
    model = SwitchModel()
    once = habit_posterior(AnnotationSet("x", tuple(minutes)), catalog, model)
    twice = habit_posterior(AnnotationSet("x", tuple(minutes) * 2), catalog, model)
    top = int(np.argmax(once.probs))
    assert twice.probs[top] >= once.probs[top] - 1e-12
