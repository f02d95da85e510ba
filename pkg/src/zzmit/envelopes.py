"""Parametric pulse envelopes and frame phase profiles.

Envelopes are closed-form scalar functions of time, never sampled arrays, so
areas and derivatives are exact; sampling happens only at the propagator and
waveform-export boundaries.  The family is deliberately small: the sin^2
pulse, the sinusoidal frame modulation, and linear combinations of them.

All amplitudes are angular frequencies (rad / time unit).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np

TimeLike = Union[float, np.ndarray]

_SUPPORT_RTOL = 1e-9


class OutsideSupportError(ValueError):
    """Envelope evaluated outside its declared time support."""


class Envelope:
    """Base class: value/area are exact, max_abs is a certified numeric search."""

    #: (t0, t1) with None meaning unbounded on that side
    support: Tuple[float, float] = (-math.inf, math.inf)

    def value(self, t: TimeLike) -> TimeLike:
        self._check_support(t)
        return self._value(np.asarray(t, dtype=float)) if isinstance(t, np.ndarray) \
            else float(self._value(np.asarray(t, dtype=float)))

    def _value(self, t: np.ndarray):
        raise NotImplementedError

    def area(self, t0: float, t1: float) -> float:
        """Exact integral of the envelope over [t0, t1]."""
        if t1 < t0:
            raise ValueError("area requires t0 <= t1")
        self._check_support(t0)
        self._check_support(t1)
        return self._area(t0, t1)

    def _area(self, t0: float, t1: float) -> float:
        raise NotImplementedError

    def shortest_period(self) -> float:
        """Fastest intrinsic timescale; inf for constants."""
        return math.inf

    def _check_support(self, t: TimeLike):
        lo, hi = self.support
        tmin = float(np.min(t))
        tmax = float(np.max(t))
        span = (hi - lo) if math.isfinite(hi - lo) else 1.0
        slack = _SUPPORT_RTOL * max(span, 1.0)
        if tmin < lo - slack or tmax > hi + slack:
            raise OutsideSupportError(
                f"t in [{tmin:g}, {tmax:g}] outside envelope support [{lo:g}, {hi:g}]"
            )

    def max_abs(self, t0: float, t1: float, rel_tol: float = 1e-6) -> float:
        """max |f(t)| over [t0, t1]: dense grid plus golden-section refinement.

        The grid places at least 4096 points per shortest period so no
        oscillation lobe is skipped; golden search then polishes the best
        bracket to ``rel_tol`` relative accuracy.
        """
        if not t1 > t0:
            raise ValueError("max_abs requires t0 < t1")
        period = self.shortest_period()
        n = 4096
        if math.isfinite(period) and period > 0:
            n = max(n, int(math.ceil(4096 * (t1 - t0) / period)))
        ts = np.linspace(t0, t1, n + 1)
        vals = np.abs(self.value(ts))
        i = int(np.argmax(vals))
        lo = ts[max(i - 1, 0)]
        hi = ts[min(i + 1, n)]
        return _golden_max(lambda t: abs(self.value(float(t))), lo, hi, rel_tol)


def _golden_max(f, lo: float, hi: float, rel_tol: float) -> float:
    invphi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    best = max(fc, fd, f(a), f(b))
    while (b - a) > rel_tol * max(abs(hi - lo), 1e-300) * 1e-3 and (b - a) > 1e-15:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
        best = max(best, fc, fd)
    return best


@dataclass(frozen=True)
class Constant(Envelope):
    value_const: float

    def _value(self, t):
        return np.full_like(t, self.value_const, dtype=float)

    def _area(self, t0, t1):
        return self.value_const * (t1 - t0)


@dataclass(frozen=True)
class SinSquared(Envelope):
    """A * sin^2(pi t / total_time): the smooth zero-to-zero drive pulse."""

    amplitude: float
    total_time: float

    def __post_init__(self):
        if self.total_time <= 0:
            raise ValueError("total_time must be positive")
        object.__setattr__(self, "support", (0.0, self.total_time))

    def _value(self, t):
        return self.amplitude * np.sin(np.pi * t / self.total_time) ** 2

    def _area(self, t0, t1):
        # int A sin^2(pi t/T) = A [t/2 - T sin(2 pi t/T) / (4 pi)]
        T = self.total_time

        def F(t):
            return self.amplitude * (t / 2 - T * math.sin(2 * math.pi * t / T) / (4 * math.pi))

        return F(t1) - F(t0)

    def shortest_period(self) -> float:
        return self.total_time


@dataclass(frozen=True)
class Modulation(Envelope):
    """A * sin(2 pi t / period): the zero-mean frame-correction tone."""

    amplitude: float
    period: float

    def __post_init__(self):
        if self.period <= 0:
            raise ValueError("period must be positive")

    def _value(self, t):
        return self.amplitude * np.sin(2 * np.pi * t / self.period)

    def _area(self, t0, t1):
        tau = self.period

        def F(t):
            return -self.amplitude * tau * math.cos(2 * math.pi * t / tau) / (2 * math.pi)

        return F(t1) - F(t0)

    def shortest_period(self) -> float:
        return self.period


@dataclass(frozen=True)
class Scaled(Envelope):
    factor: float
    inner: Envelope

    def __post_init__(self):
        object.__setattr__(self, "support", self.inner.support)

    def _value(self, t):
        return self.factor * self.inner._value(t)

    def _area(self, t0, t1):
        return self.factor * self.inner._area(t0, t1)

    def shortest_period(self) -> float:
        return self.inner.shortest_period()


@dataclass(frozen=True)
class Sum(Envelope):
    parts: Tuple[Envelope, ...]

    def __init__(self, parts: Sequence[Envelope]):
        object.__setattr__(self, "parts", tuple(parts))
        lo = max((p.support[0] for p in self.parts), default=-math.inf)
        hi = min((p.support[1] for p in self.parts), default=math.inf)
        object.__setattr__(self, "support", (lo, hi))

    def _value(self, t):
        out = np.zeros_like(t, dtype=float)
        for p in self.parts:
            out = out + p._value(t)
        return out

    def _area(self, t0, t1):
        return sum(p._area(t0, t1) for p in self.parts)

    def shortest_period(self) -> float:
        return min((p.shortest_period() for p in self.parts), default=math.inf)


@dataclass(frozen=True)
class PhaseProfile:
    """theta(t) = (omega tau / pi) sin^2(pi t / tau), the frame rotation angle.

    Vanishes at every multiple of tau and extends tau-periodically, so the
    frame it generates returns to identity at each period boundary.  The
    derivative is the exact closed form omega sin(2 pi t / tau).
    """

    omega: float
    tau: float

    def __post_init__(self):
        if self.tau <= 0:
            raise ValueError("tau must be positive")

    def theta(self, t: TimeLike) -> TimeLike:
        return (self.omega * self.tau / np.pi) * np.sin(np.pi * np.asarray(t) / self.tau) ** 2

    def dtheta(self, t: TimeLike) -> TimeLike:
        return self.omega * np.sin(2 * np.pi * np.asarray(t) / self.tau)

    def dtheta_envelope(self) -> Modulation:
        return Modulation(self.omega, self.tau)


def write_waveform(env: Envelope, t0: float, t1: float, rate: float, path) -> int:
    """Sample the envelope at ``rate`` points per time unit into a (t, value) CSV.

    Returns the number of sample rows written.  Endpoints are included.
    """
    if rate <= 0:
        raise ValueError("sample rate must be positive")
    n = max(2, int(round((t1 - t0) * rate)) + 1)
    ts = np.linspace(t0, t1, n)
    vals = env.value(ts)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "value"])
        for t, v in zip(ts, vals):
            w.writerow([f"{t:.12g}", f"{v:.12g}"])
    return n
