"""Typical-period time series aggregation.

Reduces one year of hourly, multi-attribute series to a small set of
representative days (clustered by Ward-linkage hierarchical agglomeration on
min-max-normalized daily profiles) whose centroids are rescaled so every
attribute's weighted annual sum matches the original exactly. Within each
representative day, adjacent hours are merged into contiguous segments by a
dynamic program minimizing squared reconstruction error.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Mapping, Tuple

import numpy as np
from scipy.cluster.hierarchy import fcluster, linkage

from geolith.core.types import TimeSeries
from geolith.errors import GeolithError

HOURS_PER_DAY = 24
DAYS_PER_YEAR = 365
HOURS_PER_YEAR = HOURS_PER_DAY * DAYS_PER_YEAR


@dataclass(frozen=True)
class TypicalPeriods:
    """Aggregated representation of a year of hourly series.

    ``representative_values[attr]`` has shape ``(n_periods, n_segments)``;
    ``segment_durations`` (hours) has the same shape and each row sums to 24.
    ``period_weights`` counts represented days per period (sums to 365);
    ``assignment`` maps each original day to its period.
    """

    n_periods: int
    n_segments: int
    period_weights: np.ndarray  # (P,)
    segment_durations: np.ndarray  # (P, S)
    representative_values: Mapping[str, np.ndarray]  # attr -> (P, S)
    assignment: np.ndarray  # (365,)

    def __post_init__(self):
        weights = np.asarray(self.period_weights, dtype=int)
        durations = np.asarray(self.segment_durations, dtype=int)
        assignment = np.asarray(self.assignment, dtype=int)
        for arr in (weights, durations, assignment):
            arr.setflags(write=False)
        object.__setattr__(self, "period_weights", weights)
        object.__setattr__(self, "segment_durations", durations)
        object.__setattr__(self, "assignment", assignment)
        reps = {}
        for name, values in self.representative_values.items():
            arr = np.array(values, dtype=float)
            arr.setflags(write=False)
            reps[name] = arr
        object.__setattr__(self, "representative_values", reps)

        if weights.sum() != DAYS_PER_YEAR:
            raise GeolithError("period weights must sum to 365")
        if (durations <= 0).any() or (durations.sum(axis=1) != HOURS_PER_DAY).any():
            raise GeolithError("segment durations must be positive and sum to 24 per period")
        if assignment.size != DAYS_PER_YEAR or assignment.min() < 0 or assignment.max() >= self.n_periods:
            raise GeolithError("assignment must map every day to a period")

    @property
    def total_hours(self) -> int:
        return int((self.period_weights[:, None] * self.segment_durations).sum())

    def weighted_annual_sum(self, attribute: str) -> float:
        """Annual total implied by weights x durations x representatives."""
        rep = self.representative_values[attribute]
        return float((self.period_weights[:, None] * self.segment_durations * rep).sum())

    def hour_index(self) -> Tuple[np.ndarray, np.ndarray]:
        """(period, segment) lookup for each of the 8760 original hours."""
        periods = np.repeat(self.assignment, HOURS_PER_DAY)
        seg_of_hour = np.empty((self.n_periods, HOURS_PER_DAY), dtype=int)
        for p in range(self.n_periods):
            seg_of_hour[p] = np.repeat(
                np.arange(self.n_segments), self.segment_durations[p]
            )
        hods = np.tile(np.arange(HOURS_PER_DAY), DAYS_PER_YEAR)
        return periods, seg_of_hour[periods, hods]


def _daily_matrix(values: np.ndarray) -> np.ndarray:
    return values.reshape(DAYS_PER_YEAR, HOURS_PER_DAY)


def _normalize(values: np.ndarray) -> np.ndarray:
    lo, hi = values.min(), values.max()
    if hi - lo <= 0:
        return np.zeros_like(values)
    return (values - lo) / (hi - lo)


def _segment_day(profile: np.ndarray, n_segments: int) -> np.ndarray:
    """Optimal contiguous partition of a (A, 24) profile into n_segments.

    Dynamic program over merge boundaries minimizing the summed squared
    deviation from each segment's mean, across all attributes. Returns the
    segment length per block. Ties break toward earlier boundaries; a
    zero-variance day falls back to a near-uniform split.
    """
    n_attr, n_hours = profile.shape
    if n_segments >= n_hours:
        return np.ones(n_hours, dtype=int)

    totals = np.zeros((n_attr, n_hours + 1))
    squares = np.zeros((n_attr, n_hours + 1))
    totals[:, 1:] = np.cumsum(profile, axis=1)
    squares[:, 1:] = np.cumsum(profile**2, axis=1)

    # cost[i, j]: SSE of merging hours i..j-1 into one segment.
    cost = np.full((n_hours, n_hours + 1), np.inf)
    for i in range(n_hours):
        for j in range(i + 1, n_hours + 1):
            seg_sum = totals[:, j] - totals[:, i]
            seg_sq = squares[:, j] - squares[:, i]
            cost[i, j] = float((seg_sq - seg_sum**2 / (j - i)).sum())

    if cost[0, n_hours] <= 1e-15:
        # Constant day: every partition is optimal; use a near-uniform one.
        base = n_hours // n_segments
        lengths = np.full(n_segments, base, dtype=int)
        lengths[: n_hours - base * n_segments] += 1
        return lengths

    best = np.full((n_segments + 1, n_hours + 1), np.inf)
    back = np.zeros((n_segments + 1, n_hours + 1), dtype=int)
    best[0, 0] = 0.0
    for s in range(1, n_segments + 1):
        for j in range(s, n_hours + 1):
            candidates = best[s - 1, s - 1 : j] + cost[s - 1 : j, j]
            k = int(np.argmin(candidates))  # first minimum: earlier boundary wins
            best[s, j] = candidates[k]
            back[s, j] = k + s - 1
    boundaries = [n_hours]
    j = n_hours
    for s in range(n_segments, 0, -1):
        j = back[s, j]
        boundaries.append(j)
    boundaries.reverse()
    return np.diff(np.asarray(boundaries))


def aggregate(
    series_set: Mapping[str, TimeSeries],
    n_periods: int = 60,
    n_segments: int = 16,
    peak_attributes: Tuple[str, ...] = (),
) -> TypicalPeriods:
    """Cluster a year of hourly series into typical periods with segments.

    All series must be 8760 hours. ``peak_attributes`` optionally pins each
    named attribute's peak-hour day as its own cluster (capacity sizing is
    peak-sensitive; off by default).
    """
    if not series_set:
        raise GeolithError("need at least one series")
    if not (1 <= n_periods <= DAYS_PER_YEAR):
        raise GeolithError("n_periods must be within [1, 365]")
    if not (1 <= n_segments <= HOURS_PER_DAY):
        raise GeolithError("n_segments must be within [1, 24]")
    names = sorted(series_set)
    raw = {}
    for name in names:
        values = np.asarray(series_set[name].values, dtype=float)
        if values.size != HOURS_PER_YEAR:
            raise GeolithError(
                f"series '{name}' has {values.size} hours, expected {HOURS_PER_YEAR}"
            )
        raw[name] = _daily_matrix(values)

    normalized = np.hstack([_normalize(raw[name]) for name in names])  # (365, 24*A)

    pinned: list[int] = []
    for attr in peak_attributes:
        if attr not in raw:
            raise GeolithError(f"unknown peak attribute '{attr}'")
        day = int(np.argmax(raw[attr].max(axis=1)))
        if day not in pinned:
            pinned.append(day)
    pinned = pinned[: max(0, n_periods - 1)]
    free_days = np.asarray([d for d in range(DAYS_PER_YEAR) if d not in pinned])
    n_free_clusters = n_periods - len(pinned)

    assignment = np.empty(DAYS_PER_YEAR, dtype=int)
    if n_free_clusters <= 1 or np.ptp(normalized[free_days], axis=0).max() <= 0:
        # Degenerate: all remaining days identical (or one cluster requested).
        assignment[free_days] = 0
        n_free_clusters = 1
    else:
        links = linkage(normalized[free_days], method="ward")
        labels = fcluster(links, t=n_free_clusters, criterion="maxclust")
        # Relabel deterministically by first member day.
        first_day = {}
        for day, label in zip(free_days, labels):
            first_day.setdefault(label, day)
        order = sorted(first_day, key=first_day.get)
        relabel = {label: i for i, label in enumerate(order)}
        for day, label in zip(free_days, labels):
            assignment[day] = relabel[label]
        n_free_clusters = len(order)
    for i, day in enumerate(pinned):
        assignment[day] = n_free_clusters + i
    n_clusters = n_free_clusters + len(pinned)

    weights = np.bincount(assignment, minlength=n_clusters)

    # Centroid representatives, then exact annual-sum rescaling per attribute.
    hourly_reps: Dict[str, np.ndarray] = {}
    for name in names:
        daily = raw[name]
        rep = np.empty((n_clusters, HOURS_PER_DAY))
        for p in range(n_clusters):
            rep[p] = daily[assignment == p].mean(axis=0)
        original_sum = daily.sum()
        weighted = float((weights[:, None] * rep).sum())
        if original_sum > 0 and weighted > 0:
            rep *= original_sum / weighted
        elif original_sum == 0:
            rep[:] = 0.0
        hourly_reps[name] = rep

    # Segment each representative day on its normalized profiles so
    # attributes with different units weigh in comparably.
    spans = {name: (raw[name].min(), raw[name].max()) for name in names}
    durations = np.empty((n_clusters, n_segments), dtype=int)
    rep_values: Dict[str, np.ndarray] = {name: np.empty((n_clusters, n_segments)) for name in names}
    for p in range(n_clusters):
        stacked = []
        for name in names:
            lo, hi = spans[name]
            scale = hi - lo if hi > lo else 1.0
            stacked.append((hourly_reps[name][p] - lo) / scale)
        lengths = _segment_day(np.vstack(stacked), n_segments)
        durations[p] = lengths
        bounds = np.concatenate(([0], np.cumsum(lengths)))
        for name in names:
            day = hourly_reps[name][p]
            for s in range(n_segments):
                rep_values[name][p, s] = day[bounds[s] : bounds[s + 1]].mean()

    return TypicalPeriods(
        n_periods=n_clusters,
        n_segments=n_segments,
        period_weights=weights,
        segment_durations=durations,
        representative_values=rep_values,
        assignment=assignment,
    )


def expand(agg: TypicalPeriods, dispatch: Mapping[str, np.ndarray]) -> Dict[str, np.ndarray]:
    """Blow (period, segment)-indexed values back up to 8760 hourly values.

    Each original hour receives the value of its assigned period and the
    segment containing its hour-of-day; annual totals equal the weighted
    aggregated totals exactly.
    """
    periods, segments = agg.hour_index()
    out = {}
    for name, values in dispatch.items():
        arr = np.asarray(values, dtype=float)
        if arr.shape != (agg.n_periods, agg.n_segments):
            raise GeolithError(
                f"dispatch '{name}' has shape {arr.shape}, expected "
                f"({agg.n_periods}, {agg.n_segments})"
            )
        out[name] = arr[periods, segments]
    return out


def reconstruct(agg: TypicalPeriods) -> Dict[str, np.ndarray]:
    """Hourly reconstruction of the aggregation's own representatives."""
    return expand(agg, agg.representative_values)


def rms_error(agg: TypicalPeriods, series_set: Mapping[str, TimeSeries]) -> float:
    """Root-mean-square reconstruction error over all attributes."""
    rebuilt = reconstruct(agg)
    total = 0.0
    count = 0
    for name, series in series_set.items():
        diff = rebuilt[name] - np.asarray(series.values, dtype=float)
        total += float((diff**2).sum())
        count += diff.size
    return float(np.sqrt(total / count))
