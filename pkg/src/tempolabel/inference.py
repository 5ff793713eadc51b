"""Exact Bayesian inference of annotation time resolutions.

Generative model, per annotator: a latent habit picks one catalogue category;
each annotation independently either keeps the habitual category (probability
1 - delta) or switches to one of the other categories (delta split evenly).
Given the category, the observed minute-of-hour is uniform over the
category's admissible minutes — so the likelihood of a minute is 1/|members|
when admissible and 0 otherwise.

Both posteriors are exact:

* habit: product over annotations of the per-annotation evidence
  sum_c P(c | habit) * P(minute | c), accumulated in log space and
  normalized with a final softmax so long evidence sets cannot underflow.
* per-annotation category: Bayes inversion of the same quantities, mixed
  over the habit posterior.

The MAP category of a posterior row breaks exact ties toward the coarsest
category, consistent with the model's preference for coarse explanations.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .catalog import CategoryCatalog, ResolutionCategory, _check_minute
from .errors import ConfigError, DegenerateModelError, InputError

_SUM_TOL = 1e-12


def _frozen_array(values, dtype=float) -> np.ndarray:
    arr = np.asarray(values, dtype=dtype)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class AnnotationSet:
    """One annotator's evidence: the minute-of-hour of every annotated time.

    Both the start and the end timestamp of every event contribute one entry
    each; entry order is preserved so downstream consumers can map rows back
    to event boundaries.
    """

    annotator_id: str
    minutes: tuple[int, ...]

    def __post_init__(self):
        for m in self.minutes:
            _check_minute(int(m))
        object.__setattr__(self, "minutes", tuple(int(m) for m in self.minutes))

    @classmethod
    def from_timestamps(cls, annotator_id: str, timestamps_minutes) -> "AnnotationSet":
        """Build from absolute minute timestamps; the hour is ignored."""
        return cls(annotator_id, tuple(int(t) % 60 for t in timestamps_minutes))

    def __len__(self) -> int:
        return len(self.minutes)


@dataclass(frozen=True)
class SwitchModel:
    """Probability of departing from the habitual category per annotation."""

    delta: float = 0.1

    def __post_init__(self):
        if not 0.0 <= self.delta <= 1.0:
            raise ConfigError(f"delta must be in [0, 1], got {self.delta}")


@dataclass(frozen=True)
class HabitPosterior:
    """Posterior over the annotator's habitual category."""

    catalog: CategoryCatalog
    probs: np.ndarray

    def __post_init__(self):
        probs = _frozen_array(self.probs)
        if probs.shape != (len(self.catalog),):
            raise InputError(
                f"expected {len(self.catalog)} probabilities, got shape {probs.shape}"
            )
        if np.any(probs < 0) or abs(probs.sum() - 1.0) > _SUM_TOL:
            raise InputError("habit posterior must be a probability vector")
        object.__setattr__(self, "probs", probs)

    def map_category(self) -> ResolutionCategory:
        return map_category(self.probs, self.catalog)

    def to_dict(self) -> dict:
        return {
            "periods": list(self.catalog.periods),
            "probs": [float(p) for p in self.probs],
            "map_period": self.map_category().period_minutes,
        }


@dataclass(frozen=True)
class CategoryPosterior:
    """Per-annotation posterior rows over categories, one row per minute."""

    catalog: CategoryCatalog
    minutes: tuple[int, ...]
    rows: np.ndarray

    def __post_init__(self):
        rows = _frozen_array(self.rows)
        if rows.shape != (len(self.minutes), len(self.catalog)):
            raise InputError(
                f"rows shape {rows.shape} does not match "
                f"{len(self.minutes)} annotations x {len(self.catalog)} categories"
            )
        sums = rows.sum(axis=1)
        if np.any(rows < 0) or np.any(np.abs(sums - 1.0) > _SUM_TOL):
            raise InputError("every category posterior row must sum to 1")
        object.__setattr__(self, "rows", rows)

    def __len__(self) -> int:
        return len(self.minutes)

    def map_category(self, i: int) -> ResolutionCategory:
        return map_category(self.rows[i], self.catalog)

    def map_categories(self) -> list[ResolutionCategory]:
        return [self.map_category(i) for i in range(len(self))]

    def to_dict(self) -> dict:
        return {
            "periods": list(self.catalog.periods),
            "annotations": [
                {
                    "index": i,
                    "minute": m,
                    "map_period": self.map_category(i).period_minutes,
                    "probs": [float(p) for p in self.rows[i]],
                }
                for i, m in enumerate(self.minutes)
            ],
        }


def likelihood(category: ResolutionCategory, minute: int) -> float:
    """P(observed minute | category): uniform over members, zero outside."""
    if category.contains(minute):
        return 1.0 / category.size
    return 0.0


def switch_prob(
    model: SwitchModel,
    category: ResolutionCategory,
    habit: ResolutionCategory,
    n_categories: int,
) -> float:
    """P(annotation category | habit) under the switch model."""
    if category.index == habit.index:
        return 1.0 - model.delta
    if n_categories == 1:
        raise ConfigError("switch probability undefined for a single-category catalogue")
    return model.delta / (n_categories - 1)


@lru_cache(maxsize=None)
def _likelihood_matrix(catalog: CategoryCatalog) -> np.ndarray:
    """L[c, m] = P(minute m | category c), shape (n_categories, 60)."""
    mat = np.zeros((len(catalog), 60))
    for ci, cat in enumerate(catalog):
        for m in cat.members:
            mat[ci, m] = 1.0 / cat.size
    mat.flags.writeable = False
    return mat


@lru_cache(maxsize=None)
def _switch_matrix(model: SwitchModel, n_categories: int) -> np.ndarray:
    """S[c, h] = P(category c | habit h)."""
    if n_categories == 1:
        if model.delta > 0:
            raise ConfigError(
                "switch probability undefined for a single-category catalogue"
            )
        return np.ones((1, 1))
    off = model.delta / (n_categories - 1)
    mat = np.full((n_categories, n_categories), off)
    np.fill_diagonal(mat, 1.0 - model.delta)
    mat.flags.writeable = False
    return mat


def _validate_prior(prior, n: int) -> np.ndarray:
    if prior is None:
        return np.full(n, 1.0 / n)
    arr = np.asarray(prior, dtype=float)
    if arr.shape != (n,) or np.any(arr < 0) or arr.sum() <= 0:
        raise ConfigError("prior must be a nonnegative vector over the catalogue")
    return arr / arr.sum()


def habit_posterior(
    annotations: AnnotationSet,
    catalog: CategoryCatalog,
    model: SwitchModel,
    prior=None,
) -> HabitPosterior:
    """Posterior over the annotator's habit given all annotated minutes.

    Accumulates per-annotation evidence in log space; the normalizing
    constant is never computed explicitly, a final softmax over habits
    replaces it.
    """
    if len(annotations) == 0:
        raise InputError("cannot infer a habit from an empty annotation set")
    minutes = np.asarray(annotations.minutes)
    prior_vec = _validate_prior(prior, len(catalog))
    lik = _likelihood_matrix(catalog)[:, minutes]  # (C, N)
    switch = _switch_matrix(model, len(catalog))  # (C, H)
    evidence = switch.T @ lik  # (H, N): P(minute_i | habit h)
    with np.errstate(divide="ignore"):
        scores = np.log(prior_vec) + np.log(evidence).sum(axis=1)
    if not np.any(np.isfinite(scores)):
        raise DegenerateModelError(
            "no habit has nonzero posterior mass; "
            "check the prior and the switch model"
        )
    scores -= scores.max()
    probs = np.exp(scores)
    probs /= probs.sum()
    return HabitPosterior(catalog=catalog, probs=probs)


def category_posterior(
    annotations: AnnotationSet,
    catalog: CategoryCatalog,
    model: SwitchModel,
    habit: HabitPosterior | None = None,
    prior=None,
) -> CategoryPosterior:
    """Per-annotation category posteriors, mixing over the habit posterior.

    Row i, entry c is the Bayes-inverted probability that annotation i used
    category c, averaged over habits weighted by the habit posterior.
    Categories whose member set excludes the annotated minute get exactly 0.
    """
    if habit is None:
        habit = habit_posterior(annotations, catalog, model, prior=prior)
    minutes = np.asarray(annotations.minutes)
    lik = _likelihood_matrix(catalog)[:, minutes]  # (C, N)
    switch = _switch_matrix(model, len(catalog))  # (C, H)
    joint = lik[:, None, :] * switch[:, :, None]  # (C, H, N)
    norm = joint.sum(axis=0)  # (H, N): P(minute_i | habit h)
    with np.errstate(invalid="ignore", divide="ignore"):
        cond = np.where(norm > 0.0, joint / norm, 0.0)  # P(c | minute_i, h)
    rows = np.einsum("chn,h->nc", cond, habit.probs)
    return CategoryPosterior(catalog=catalog, minutes=annotations.minutes, rows=rows)


def map_category(row, catalog: CategoryCatalog) -> ResolutionCategory:
    """Argmax category of a posterior row; exact ties go to the coarsest."""
    arr = np.asarray(row, dtype=float)
    if arr.shape != (len(catalog),):
        raise InputError(
            f"row has {arr.shape} entries, catalogue has {len(catalog)}"
        )
    # argmax returns the first maximum; the catalogue is ordered coarsest first
    return catalog[int(np.argmax(arr))]
