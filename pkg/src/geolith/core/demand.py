"""Deterministic synthetic demand and availability profiles.

Stand-ins for regionalized consumption data and weather-driven capacity
factors, used for the bundled example dataset and for tests. Everything is
seeded and reproducible.
"""

from __future__ import annotations

import numpy as np

from geolith.core.types import ELECTRICITY, HEAT_LOW, HOURS_PER_YEAR, TimeSeries
from geolith.errors import GeolithError

_SHAPES = ("default", "flat")


def _hour_grid():
    hours = np.arange(HOURS_PER_YEAR)
    day_of_year = hours // 24
    hour_of_day = hours % 24
    return hours, day_of_year, hour_of_day


def _electricity_shape(rng: np.random.Generator) -> np.ndarray:
    _, day, hod = _hour_grid()
    # Daily double peak (morning/evening), weekday/weekend split, mild
    # seasonality, small autocorrelated noise.
    daily = (
        1.0
        + 0.35 * np.exp(-0.5 * ((hod - 11.0) / 3.0) ** 2)
        + 0.45 * np.exp(-0.5 * ((hod - 19.0) / 2.5) ** 2)
        - 0.30 * np.exp(-0.5 * ((hod - 3.5) / 2.5) ** 2)
    )
    weekday = np.where((day % 7) < 5, 1.05, 0.90)
    seasonal = 1.0 + 0.12 * np.cos(2.0 * np.pi * (day - 15) / 365.0)
    noise = _smooth_noise(rng, scale=0.05)
    shape = daily * weekday * seasonal * (1.0 + noise)
    return np.clip(shape, 0.05, None)


def _heat_shape(rng: np.random.Generator) -> np.ndarray:
    _, day, hod = _hour_grid()
    # Strong winter peak with a summer hot-water floor.
    seasonal = 0.25 + 1.5 * (1.0 + np.cos(2.0 * np.pi * (day - 15) / 365.0)) / 2.0
    daily = 1.0 + 0.25 * np.exp(-0.5 * ((hod - 7.0) / 2.5) ** 2) + 0.15 * np.exp(
        -0.5 * ((hod - 20.0) / 3.0) ** 2
    )
    noise = _smooth_noise(rng, scale=0.08)
    shape = seasonal * daily * (1.0 + noise)
    return np.clip(shape, 0.02, None)


def _smooth_noise(rng: np.random.Generator, scale: float) -> np.ndarray:
    # Daily random factors linearly interpolated over hours; keeps profiles
    # wiggly without hour-to-hour jitter.
    daily = rng.normal(0.0, scale, size=366)
    hours = np.arange(HOURS_PER_YEAR) / 24.0
    return np.interp(hours, np.arange(366), daily)


def synthesize_demand(
    total_el: float,
    total_heat: float,
    profile_shape: str = "default",
    seed: int = 0,
) -> dict[str, TimeSeries]:
    """Hourly demand series whose annual sums equal the requested totals.

    ``total_el`` and ``total_heat`` are kWh/a. Returns a map with
    ``electricity`` and ``heat_low`` series (kW). Deterministic in ``seed``.
    """
    if profile_shape not in _SHAPES:
        raise GeolithError(
            f"unknown profile shape '{profile_shape}'; known: {', '.join(_SHAPES)}"
        )
    if total_el < 0 or total_heat < 0:
        raise GeolithError("demand totals must be >= 0")

    if profile_shape == "flat":
        el = np.full(HOURS_PER_YEAR, 1.0)
        heat = np.full(HOURS_PER_YEAR, 1.0)
    else:
        rng = np.random.default_rng(seed)
        el = _electricity_shape(rng)
        heat = _heat_shape(rng)

    def _scale(shape: np.ndarray, total: float) -> np.ndarray:
        if total == 0.0:
            return np.zeros(HOURS_PER_YEAR)
        return shape * (total / shape.sum())

    return {
        ELECTRICITY: TimeSeries(_scale(el, total_el), unit="kW", kind="demand"),
        HEAT_LOW: TimeSeries(_scale(heat, total_heat), unit="kW", kind="demand"),
    }


def synthesize_availability(kind: str, seed: int = 0) -> TimeSeries:
    """Synthetic hourly capacity-factor profile for ``"pv"`` or ``"wind"``."""
    rng = np.random.default_rng(seed)
    _, day, hod = _hour_grid()
    if kind == "pv":
        # Daylight half-sine scaled by season and a daily cloudiness factor.
        declination = np.cos(2.0 * np.pi * (day - 172) / 365.0)
        day_length = 12.0 + 4.0 * declination
        sunrise = 12.0 - day_length / 2.0
        x = (hod - sunrise) / day_length
        solar = np.where((x > 0) & (x < 1), np.sin(np.pi * np.clip(x, 0, 1)), 0.0)
        season = 0.55 + 0.45 * declination
        cloud = np.clip(1.0 + _smooth_noise(rng, scale=0.35), 0.15, 1.0)
        cf = solar * season * cloud * 0.85
    elif kind == "wind":
        # Autocorrelated mean-reverting process pushed through a smooth ramp.
        steps = rng.normal(0.0, 0.14, size=HOURS_PER_YEAR)
        level = np.empty(HOURS_PER_YEAR)
        value = 0.0
        for i, step in enumerate(steps):
            value = 0.98 * value + step
            level[i] = value
        seasonal = 0.15 * np.cos(2.0 * np.pi * (day - 20) / 365.0)
        cf = 1.0 / (1.0 + np.exp(-(level + seasonal - 0.25) * 2.2))
        cf = np.clip(cf, 0.0, 0.98)
    else:
        raise GeolithError(f"unknown availability kind '{kind}'")
    return TimeSeries(np.clip(cf, 0.0, 1.0), unit="-", kind="capacity_factor")
