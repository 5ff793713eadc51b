"""Annotation time-resolution categories.

A category describes the granularity an annotator rounds reported times to:
a period in minutes (which must divide 60) and the set of minutes-of-hour
that period admits. The default catalogue covers 30, 15, 10, 5 and 1 minute
periods, ordered coarsest first. The finest category must admit every minute
so that no observation is impossible under every category.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConfigError, InputError

DEFAULT_PERIODS = (30, 15, 10, 5, 1)


def _check_minute(minute: int) -> int:
    if not isinstance(minute, (int,)) or isinstance(minute, bool):
        raise InputError(f"minute must be an integer, got {minute!r}")
    if not 0 <= minute <= 59:
        raise InputError(f"minute must be in 0..59, got {minute}")
    return minute


@dataclass(frozen=True)
class ResolutionCategory:
    """One granularity level: a period and its admissible minutes-of-hour."""

    index: int  # 1-based position in the catalogue, coarsest first
    period_minutes: int
    members: frozenset[int] = field(init=False)

    def __post_init__(self):
        if self.index < 1:
            raise ConfigError(f"category index must be >= 1, got {self.index}")
        if self.period_minutes < 1 or 60 % self.period_minutes != 0:
            raise ConfigError(
                f"period must be a divisor of 60, got {self.period_minutes}"
            )
        members = frozenset(
            k * self.period_minutes for k in range(60 // self.period_minutes)
        )
        object.__setattr__(self, "members", members)

    @property
    def size(self) -> int:
        """Number of admissible minutes-of-hour."""
        return len(self.members)

    def contains(self, minute: int) -> bool:
        """True iff `minute` is one of this category's admissible values."""
        return _check_minute(minute) in self.members

    def __str__(self) -> str:
        return f"{self.period_minutes}min"


@dataclass(frozen=True)
class CategoryCatalog:
    """Ordered set of categories, strictly coarsest to finest.

    Construction enforces that periods strictly decrease and that the finest
    category admits every minute of the hour; otherwise some observed minute
    would have zero likelihood under every category and posteriors would be
    undefined.
    """

    categories: tuple[ResolutionCategory, ...]

    def __post_init__(self):
        if not self.categories:
            raise ConfigError("catalogue must contain at least one category")
        periods = [c.period_minutes for c in self.categories]
        if any(nxt >= prev for prev, nxt in zip(periods, periods[1:])):
            raise ConfigError(
                f"periods must be strictly decreasing (coarsest first), got {periods}"
            )
        if self.categories[-1].period_minutes != 1:
            raise ConfigError(
                "finest category must admit every minute (period 1), "
                f"got period {self.categories[-1].period_minutes}"
            )
        for pos, cat in enumerate(self.categories, start=1):
            if cat.index != pos:
                raise ConfigError(
                    f"category at position {pos} has index {cat.index}"
                )

    @classmethod
    def from_periods(cls, periods=DEFAULT_PERIODS) -> "CategoryCatalog":
        cats = tuple(
            ResolutionCategory(index=i, period_minutes=int(p))
            for i, p in enumerate(periods, start=1)
        )
        return cls(categories=cats)

    @classmethod
    def default(cls) -> "CategoryCatalog":
        return cls.from_periods(DEFAULT_PERIODS)

    def __len__(self) -> int:
        return len(self.categories)

    def __iter__(self):
        return iter(self.categories)

    def __getitem__(self, pos: int) -> ResolutionCategory:
        return self.categories[pos]

    @property
    def n_categories(self) -> int:
        return len(self.categories)

    @property
    def periods(self) -> tuple[int, ...]:
        return tuple(c.period_minutes for c in self.categories)

    def by_period(self, period_minutes: int) -> ResolutionCategory:
        for cat in self.categories:
            if cat.period_minutes == period_minutes:
                return cat
        raise InputError(f"no category with period {period_minutes}")

    def coarsest_containing(self, minute: int) -> ResolutionCategory:
        """The largest-period category admitting `minute`.

        Always resolves: the finest category admits every minute.
        """
        _check_minute(minute)
        for cat in self.categories:
            if minute in cat.members:
                return cat
        raise AssertionError("unreachable: finest category admits all minutes")


def contains(category: ResolutionCategory, minute: int) -> bool:
    """Functional form of `ResolutionCategory.contains`."""
    return category.contains(minute)
