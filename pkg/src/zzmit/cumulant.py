"""Error-cumulant evaluation and the modulation-ratio optimization.

In the rotated frame the residual crosstalk per modulation period is

    EC = eta * ( |int cos(chi)| + |int sin(chi)| ),
    chi(t) = (2 omega tau / pi) sin^2(pi t / tau),

taken over any one period (chi is tau-periodic, so the segment index is
immaterial).  The drive strength eta sits outside the integrals: zeroing
them zeroes the cumulant for every crosstalk strength at once.

The optimizer scans the dimensionless ratio gamma (omega = gamma k Omega0)
for the cumulant's first touch-zero.  EC is a sum of absolute values, so it
reaches zero without a sign change; the finder therefore locates minima and
accepts those that dip below threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Optional, Sequence, Tuple

import numpy as np

from .envelopes import Modulation, SinSquared, Sum

#: First touch-zero of the cumulant for a quarter-turn pulse (area pi/4).
GAMMA_QUARTER_TURN = 4.809651115391545
#: First touch-zero for a half-turn pulse (area pi/2); also the two-qubit value.
GAMMA_HALF_TURN = 2.4048255576957724


@dataclass(frozen=True)
class CumulantSpec:
    """Pulse area (rad), period count k, modulation ratio gamma, crosstalk eta.

    The base drive amplitude is normalized to ``amplitude``; the gate time
    follows from the area condition, T = 2 * area / amplitude.
    """

    area: float
    k: int
    gamma: float
    eta: float = 1.0
    amplitude: float = 1.0

    def __post_init__(self):
        if self.area <= 0:
            raise ValueError("pulse area must be positive")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.amplitude <= 0:
            raise ValueError("amplitude must be positive")

    @property
    def total_time(self) -> float:
        return 2.0 * self.area / self.amplitude

    @property
    def tau(self) -> float:
        return self.total_time / self.k

    @property
    def omega(self) -> float:
        return self.gamma * self.k * self.amplitude


def _period_integrals(omega: float, tau: float, t0: float,
                      abs_tol: float = 1e-12) -> Tuple[float, float]:
    """(int cos chi, int sin chi) over [t0, t0+tau], Gauss-Legendre with doubling."""
    amp = 2.0 * omega * tau / math.pi

    def chi(t):
        return amp * np.sin(np.pi * t / tau) ** 2

    nodes, weights = np.polynomial.legendre.leggauss(16)

    def pass_at(panels: int) -> Tuple[float, float]:
        edges = np.linspace(t0, t0 + tau, panels + 1)
        mids = (edges[:-1] + edges[1:]) / 2
        halves = (edges[1:] - edges[:-1]) / 2
        ts = mids[:, None] + halves[:, None] * nodes[None, :]
        ws = halves[:, None] * weights[None, :]
        ch = chi(ts)
        return float((ws * np.cos(ch)).sum()), float((ws * np.sin(ch)).sum())

    panels = 4
    prev = pass_at(panels)
    while panels <= 512:
        panels *= 2
        cur = pass_at(panels)
        if max(abs(cur[0] - prev[0]), abs(cur[1] - prev[1])) <= abs_tol:
            return cur
        prev = cur
    return prev


def error_cumulant(spec: CumulantSpec, segment: int = 1) -> float:
    """EC for the given segment (>= 1); periodicity makes all segments equal."""
    if segment < 1 or segment > spec.k:
        raise ValueError(f"segment {segment} outside 1..{spec.k}")
    t0 = (segment - 1) * spec.tau
    ic, is_ = _period_integrals(spec.omega, spec.tau, t0)
    return spec.eta * (abs(ic) + abs(is_))


@dataclass(frozen=True)
class GammaRoot:
    gamma: float
    cumulant: float
    index: int


class NoCumulantZeroError(ValueError):
    """No cumulant zero found in the bracket; carries the scanned minimum."""

    def __init__(self, message: str, best_gamma: float, best_cumulant: float):
        super().__init__(message)
        self.best_gamma = best_gamma
        self.best_cumulant = best_cumulant


def find_gamma(area: float, k: int = 4,
               bracket: Tuple[float, float] = (0.5, 8.0),
               root_index: int = 1,
               eta: float = 1.0,
               scan_step: float = 0.01,
               threshold_factor: float = 1e-9) -> GammaRoot:
    """Smallest positive gamma zeroing the cumulant (or the root_index-th one).

    Coarse scan at ``scan_step`` followed by golden-section refinement of
    each candidate minimum; a root is accepted when the refined cumulant
    falls below threshold_factor * eta * tau.
    """
    lo, hi = bracket
    if not (0 < lo < hi):
        raise ValueError("bracket must satisfy 0 < lo < hi")
    if root_index < 1:
        raise ValueError("root_index must be >= 1")

    def ec(g: float) -> float:
        return error_cumulant(CumulantSpec(area, k, g, eta))

    tau = 2.0 * area / k
    threshold = threshold_factor * eta * tau
    grid = np.arange(lo, hi + scan_step / 2, scan_step)
    vals = np.array([ec(g) for g in grid])

    found = 0
    for i in range(1, len(grid) - 1):
        if vals[i] <= vals[i - 1] and vals[i] <= vals[i + 1]:
            # EC only touches zero, so the touch point must be pinned far
            # below the scan step for the cumulant to clear the threshold
            g_star, e_star = _golden_min(ec, grid[i - 1], grid[i + 1], tol=1e-10)
            if e_star < threshold:
                found += 1
                if found == root_index:
                    return GammaRoot(float(g_star), float(e_star), root_index)

    i_best = int(np.argmin(vals))
    raise NoCumulantZeroError(
        f"no cumulant zero (index {root_index}) in gamma bracket [{lo:g}, {hi:g}]; "
        f"scanned minimum EC={vals[i_best]:.3e} at gamma={grid[i_best]:.4f}",
        float(grid[i_best]), float(vals[i_best]))


def _golden_min(f: Callable[[float], float], a: float, b: float,
                tol: float = 1e-7) -> Tuple[float, float]:
    invphi = (math.sqrt(5) - 1) / 2
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = (a + b) / 2
    return x, f(x)


def cumulant_curve(area: float, k: int, gammas: Sequence[float],
                   eta: float = 1.0) -> np.ndarray:
    """EC sampled on a gamma grid (the CSV behind the gamma-scan figure)."""
    return np.array([error_cumulant(CumulantSpec(area, k, g, eta)) for g in gammas])


def modulation_peak(k: int, gamma: float) -> float:
    """M(k, gamma) = max_s |sin^2(pi s) + gamma k sin(2 pi k s)| on s in [0, 1].

    The peak of the equivalent drive in units of the base amplitude; under an
    amplitude cap Omega_m the base becomes Omega_m / M.
    """
    env = Sum([SinSquared(1.0, 1.0), Modulation(gamma * k, 1.0 / k)])
    return env.max_abs(0.0, 1.0)


def capped_base_amplitude(cap: float, k: int, gamma: float) -> float:
    return cap / modulation_peak(k, gamma)


@dataclass(frozen=True)
class KSelection:
    k: int
    worst_infidelity: Dict[int, float]


def select_k(scenario_factory: Callable[[int], "object"],
             eta_ratios: Sequence[float],
             k_candidates: Iterable[int],
             config: Optional[object] = None) -> KSelection:
    """Pick the k whose worst-case infidelity over the ratio grid is smallest.

    ``scenario_factory(k)`` must return a Scenario; each candidate is swept
    over ``eta_ratios`` with the shared propagator config.  Ties break toward
    the smaller k, and results merge deterministically in candidate order.
    """
    from .scenarios import run_sweep  # local import to avoid a module cycle

    k_candidates = list(k_candidates)
    if not k_candidates:
        raise ValueError("k_candidates must not be empty")
    worst: Dict[int, float] = {}
    for k in k_candidates:
        records = run_sweep(scenario_factory(k), eta_ratios, config=config)
        worst[k] = max(r.infidelity for r in records)
    best = min(worst, key=lambda k: (worst[k], k))
    return KSelection(best, worst)
