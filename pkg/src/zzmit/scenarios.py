"""Catalog of lattice experiments: gate constructions and their plain baselines.

Each scenario fixes a qubit box cut out of the 2D lattice, its crosstalk
edge set, a pulse schedule parameterized by the crosstalk ratio, and the
ideal target gate.  Two schemes exist for every experiment:

* ``zzcm``  - the frame-modulated construction that cancels the averaged
              crosstalk (drives carry the added sinusoid at ratio gamma),
* ``dy``    - the plain dynamical baseline: the same gate from bare sin^2
              pulses with no correction.

Both schemes of a family share the register, the crosstalk edges, and the
ideal target; only the drives differ.

Crosstalk normalization conventions (the CSV ratio column is eta / unit):

* drive-amplitude : unit = base drive amplitude (uncapped isolated gates)
* amplitude-cap   : unit = the cap Omega_m on the equivalent drive
* coupling        : unit = the exchange amplitude J0 (two-qubit gates)

Geometry is written for the gate block at row 1, col 1; coordinates are
absolute (row, col) pairs within each box.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .cumulant import (GAMMA_HALF_TURN, GAMMA_QUARTER_TURN, capped_base_amplitude)
from .envelopes import Envelope, Modulation, SinSquared, Sum
from .hamiltonian import (DriveTerm, TimeDependentHamiltonian, XYEdge, ZZEdge,
                          build_drive, build_xy, build_zz)
from .operators import DenseOperator
from .propagate import (FidelityResult, PropagatorConfig, Schedule, ScheduleStep,
                        gate_fidelity, ideal_gate)
from .register import QubitRegister, Site, grid_register

NORM_DRIVE = "drive-amplitude"
NORM_CAP = "amplitude-cap"
NORM_COUPLING = "coupling"


@dataclass(frozen=True)
class Scenario:
    """A fully specified experiment; ``schedule(ratio)`` yields the pulse program."""

    name: str
    family: str
    scheme: str                      # "zzcm" | "dy"
    register: QubitRegister
    zz_edges: Tuple[Tuple[Site, Site], ...]
    k: int                           # modulation periods per pulse (0 for dy)
    eta_unit: float                  # eta = ratio * eta_unit
    normalization: str
    ideal: DenseOperator
    builder: Callable[[float], Schedule] = field(repr=False)
    export_envelope: Optional[Envelope] = field(default=None, repr=False)
    export_window: Tuple[float, float] = (0.0, 0.0)
    modulation_period: Optional[float] = None
    description: str = ""

    def schedule(self, eta_ratio: float) -> Schedule:
        eta = eta_ratio * self.eta_unit
        # the averaging argument assumes the crosstalk drifts slowly over one
        # modulation period; flag clear violations but keep computing
        if self.modulation_period is not None and abs(eta) * self.modulation_period >= 0.5:
            warnings.warn(
                f"{self.name}: crosstalk strength {abs(eta):.3g} is not small "
                f"against 1/period = {1 / self.modulation_period:.3g}; the "
                "per-period averaging argument is outside its validity range",
                stacklevel=2)
        return self.builder(eta)

    def fidelity(self, eta_ratio: float,
                 config: Optional[PropagatorConfig] = None) -> FidelityResult:
        return gate_fidelity(self.schedule(eta_ratio), self.ideal, config)


@dataclass(frozen=True)
class SweepRecord:
    scenario: str
    k: int
    eta_ratio: float
    fidelity: float
    infidelity: float
    converged: bool
    wall_ms: float


# ---------------------------------------------------------------------------
# geometry: boxes and crosstalk edge sets (gate block anchored at (1, 1))
# ---------------------------------------------------------------------------

def _edges_of(site: Site, neighbors: Sequence[Site]) -> List[Tuple[Site, Site]]:
    return [(site, n) for n in neighbors]


ISOLATED_GATE = (1, 1)
ISOLATED_SPECTATORS = ((0, 1), (1, 0), (1, 2), (2, 1))
ISOLATED_EDGES = tuple(_edges_of(ISOLATED_GATE, ISOLATED_SPECTATORS))

NNN_GATES = ((1, 1), (2, 2))
NNN_BOX = ((0, 1), (1, 0), (1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 2))
NNN_EDGES = tuple(_edges_of((1, 1), ((0, 1), (2, 1), (1, 0), (1, 2)))
                  + _edges_of((2, 2), ((1, 2), (3, 2), (2, 1), (2, 3))))

NN_GATES = ((1, 1), (1, 2))
NN_BOX = ((0, 1), (0, 2), (1, 0), (1, 1), (1, 2), (1, 3), (2, 1), (2, 2))
NN_EDGES = tuple(_edges_of((1, 1), ((0, 1), (2, 1), (1, 0), (1, 2)))
                 + _edges_of((1, 2), ((0, 2), (2, 2), (1, 3))))
NN_FRAME_SITES = ((0, 2), (1, 1), (1, 3), (2, 2))

SWAP_PAIR = ((1, 1), (1, 2))
SWAP_X_TARGET = (0, 2)
SWAP_Y_TARGET = (1, 3)

PAIR_BOX = ((0, 1), (0, 2), (1, 1), (1, 2), (2, 1), (2, 2), (3, 1), (3, 2))
PAIR_A = ((1, 1), (1, 2))
PAIR_B = ((2, 1), (2, 2))
PAIR_EDGES = (((1, 1), (0, 1)), ((1, 1), (2, 1)), ((1, 1), (1, 2)),
              ((1, 2), (0, 2)), ((1, 2), (2, 2)), ((2, 1), (2, 2)),
              ((2, 1), (3, 1)), ((2, 2), (3, 2)))
PAIR_FRAME_SITES = ((0, 2), (1, 1), (2, 2), (3, 1))


def _zz(register: QubitRegister, edges, eta: float) -> TimeDependentHamiltonian:
    return build_zz(register, [ZZEdge(a, b, eta) for a, b in edges])


# ---------------------------------------------------------------------------
# isolated single-qubit gates (5-qubit box)
# ---------------------------------------------------------------------------

def _isolated(area: float, gamma: float, tag: str, k: int, scheme: str,
              normalization: str, base_amplitude: float, cap: float) -> Scenario:
    register = grid_register((ISOLATED_GATE,) + ISOLATED_SPECTATORS)
    capped = normalization == NORM_CAP
    if scheme == "zzcm":
        om0 = capped_base_amplitude(cap, k, gamma) if capped else base_amplitude
        T = 2 * area / om0
        tau = T / k
        omega = gamma * k * om0
        env = Sum([SinSquared(om0, T), Modulation(omega, tau)])
        resolution = tau
        k_at = k
    else:
        om0 = cap if capped else base_amplitude
        T = 2 * area / om0
        env = SinSquared(om0, T)
        resolution = T
        k_at = 0
    eta_unit = cap if capped else base_amplitude

    def build(eta: float) -> Schedule:
        H = build_drive(register, [DriveTerm(ISOLATED_GATE, env, 0.0)],
                        support=(0.0, T)) + _zz(register, ISOLATED_EDGES, eta)
        return Schedule([ScheduleStep(H, T, resolution)])

    suffix = "-capped" if capped else ""
    name = f"isolated-{tag}{suffix}-{scheme}" + (f"-k{k}" if scheme == "zzcm" else "")
    return Scenario(
        name=name, family=f"isolated-{tag}{suffix}", scheme=scheme,
        register=register, zz_edges=ISOLATED_EDGES, k=k_at,
        eta_unit=eta_unit, normalization=normalization,
        ideal=ideal_gate(register, [(ISOLATED_GATE, tag)]),
        builder=build, export_envelope=env, export_window=(0.0, T),
        modulation_period=(T / k if scheme == "zzcm" else None),
        description=f"{tag} on one qubit with four crosstalk spectators")


def isolated_x90(k: int = 4, scheme: str = "zzcm", capped: bool = False,
                 base_amplitude: float = 1.0, cap: float = 1.0) -> Scenario:
    """Quarter turn about x on the center qubit of a 5-qubit cross."""
    return _isolated(math.pi / 4, GAMMA_QUARTER_TURN, "x90", k, scheme,
                     NORM_CAP if capped else NORM_DRIVE, base_amplitude, cap)


def isolated_x180(k: int = 4, scheme: str = "zzcm", capped: bool = True,
                  base_amplitude: float = 1.0, cap: float = 1.0) -> Scenario:
    """Half turn about x; the amplitude-capped object of the k trade-off study."""
    return _isolated(math.pi / 2, GAMMA_HALF_TURN, "x180", k, scheme,
                     NORM_CAP if capped else NORM_DRIVE, base_amplitude, cap)


# ---------------------------------------------------------------------------
# parallel single-qubit gates (8-qubit boxes)
# ---------------------------------------------------------------------------

def parallel_xy_nnn(k: int = 4, scheme: str = "zzcm", cap: float = 1.0) -> Scenario:
    """x180 and y180 on next-nearest neighbors, both drives modulated."""
    register = grid_register(NNN_BOX)
    area = math.pi / 2
    gamma = GAMMA_HALF_TURN
    if scheme == "zzcm":
        om0 = capped_base_amplitude(cap, k, gamma)
        T = 2 * area / om0
        tau = T / k
        env = Sum([SinSquared(om0, T), Modulation(gamma * k * om0, tau)])
        resolution, k_at = tau, k
    else:
        T = 2 * area / cap
        env = SinSquared(cap, T)
        resolution, k_at = T, 0

    def build(eta: float) -> Schedule:
        H = build_drive(register,
                        [DriveTerm(NNN_GATES[0], env, 0.0),
                         DriveTerm(NNN_GATES[1], env, math.pi / 2)],
                        support=(0.0, T)) + _zz(register, NNN_EDGES, eta)
        return Schedule([ScheduleStep(H, T, resolution)])

    name = f"parallel-xy-nnn-{scheme}" + (f"-k{k}" if scheme == "zzcm" else "")
    return Scenario(
        name=name, family="parallel-xy-nnn", scheme=scheme, register=register,
        zz_edges=NNN_EDGES, k=k_at, eta_unit=cap, normalization=NORM_CAP,
        ideal=ideal_gate(register, [(NNN_GATES[0], "x180"), (NNN_GATES[1], "y180")]),
        builder=build, export_envelope=env, export_window=(0.0, T),
        modulation_period=(T / k if scheme == "zzcm" else None),
        description="simultaneous x180/y180 on next-nearest neighbors")


def parallel_xy_nn(k: int = 4, scheme: str = "zzcm", cap: float = 1.0) -> Scenario:
    """x180 and y180 on nearest neighbors; correction tones on three bystanders.

    The y-gate qubit is not part of the rotating frame, so its drive stays a
    bare sin^2 pulse; the frame covers the x-gate qubit and the three
    spectators adjacent to the y-gate qubit.
    """
    register = grid_register(NN_BOX)
    area = math.pi / 2
    gamma = GAMMA_HALF_TURN
    if scheme == "zzcm":
        om0 = capped_base_amplitude(cap, k, gamma)
        T = 2 * area / om0
        tau = T / k
        tone = Modulation(gamma * k * om0, tau)
        drives = [DriveTerm(NN_GATES[0], Sum([SinSquared(om0, T), tone]), 0.0),
                  DriveTerm(NN_GATES[1], SinSquared(om0, T), math.pi / 2)]
        drives += [DriveTerm(site, tone, 0.0)
                   for site in NN_FRAME_SITES if site != NN_GATES[0]]
        export = Sum([SinSquared(om0, T), tone])
        resolution, k_at = tau, k
    else:
        T = 2 * area / cap
        export = SinSquared(cap, T)
        drives = [DriveTerm(NN_GATES[0], export, 0.0),
                  DriveTerm(NN_GATES[1], export, math.pi / 2)]
        resolution, k_at = T, 0

    def build(eta: float) -> Schedule:
        H = build_drive(register, drives, support=(0.0, T)) + _zz(register, NN_EDGES, eta)
        return Schedule([ScheduleStep(H, T, resolution)])

    name = f"parallel-xy-nn-{scheme}" + (f"-k{k}" if scheme == "zzcm" else "")
    return Scenario(
        name=name, family="parallel-xy-nn", scheme=scheme, register=register,
        zz_edges=NN_EDGES, k=k_at, eta_unit=cap, normalization=NORM_CAP,
        ideal=ideal_gate(register, [(NN_GATES[0], "x180"), (NN_GATES[1], "y180")]),
        builder=build, export_envelope=export, export_window=(0.0, T),
        modulation_period=(T / k if scheme == "zzcm" else None),
        description="simultaneous x180/y180 on nearest neighbors")


# ---------------------------------------------------------------------------
# exchange-based two-qubit gates (8-qubit boxes, two steps)
# ---------------------------------------------------------------------------

def swap_with_singles(k: int = 4, scheme: str = "zzcm", j0: float = 1.0,
                      singles: str = "matched") -> Scenario:
    """SWAP on a qubit pair with simultaneous x180/y180 on two spectators.

    Two exchange half-pulses (XX then YY in the respective frames) compose
    the SWAP.  The frame rotates four qubits about x in step 1 and about y
    in step 2, which averages every crosstalk edge to zero.

    singles="matched" drives each target spectator only during the step
    whose frame commutes with its drive axis (x in step 1, y in step 2) at
    full exchange amplitude, accumulating exactly a half turn each.
    singles="split-both-steps" instead applies both drives at half amplitude
    through both steps; the frame then averages away the non-commuting half,
    leaving quarter turns (kept for comparison experiments).
    """
    if singles not in ("matched", "split-both-steps"):
        raise ValueError(f"unknown singles mode {singles!r}")
    register = grid_register(NN_BOX)
    T = math.pi / j0                # exchange area pi/2
    tau = T / k
    omega = GAMMA_HALF_TURN * k * j0
    J = SinSquared(j0, T)
    xy = [XYEdge(SWAP_PAIR[0], SWAP_PAIR[1], J)]
    tone = Modulation(omega, tau)

    if scheme == "zzcm":
        def build(eta: float) -> Schedule:
            steps = []
            for stage, axis_phase in ((1, 0.0), (2, math.pi / 2)):
                drives = [DriveTerm(site, tone, axis_phase) for site in NN_FRAME_SITES]
                if singles == "matched":
                    if stage == 1:
                        drives.append(DriveTerm(SWAP_X_TARGET, J, 0.0))
                    else:
                        drives.append(DriveTerm(SWAP_Y_TARGET, J, math.pi / 2))
                else:
                    half = SinSquared(j0 / 2, T)
                    drives.append(DriveTerm(SWAP_X_TARGET, half, 0.0))
                    drives.append(DriveTerm(SWAP_Y_TARGET, half, math.pi / 2))
                H = (build_xy(register, xy, support=(0.0, T))
                     + build_drive(register, drives, support=(0.0, T))
                     + _zz(register, NN_EDGES, eta))
                steps.append(ScheduleStep(H, T, tau))
            return Schedule(steps)
        k_at = k
    else:
        def build(eta: float) -> Schedule:
            drives = [DriveTerm(SWAP_X_TARGET, J, 0.0),
                      DriveTerm(SWAP_Y_TARGET, J, math.pi / 2)]
            H = (build_xy(register, xy, support=(0.0, T))
                 + build_drive(register, drives, support=(0.0, T))
                 + _zz(register, NN_EDGES, eta))
            return Schedule([ScheduleStep(H, T, T)])
        k_at = 0

    mode_tag = "" if singles == "matched" else "-split"
    name = f"swap-with-singles{mode_tag}-{scheme}" + (f"-k{k}" if scheme == "zzcm" else "")
    return Scenario(
        name=name, family="swap-with-singles", scheme=scheme, register=register,
        zz_edges=NN_EDGES, k=k_at, eta_unit=j0, normalization=NORM_COUPLING,
        ideal=ideal_gate(register, [(list(SWAP_PAIR), "swap"),
                                    (SWAP_X_TARGET, "x180"),
                                    (SWAP_Y_TARGET, "y180")]),
        builder=build, export_envelope=J, export_window=(0.0, T),
        modulation_period=(tau if scheme == "zzcm" else None),
        description="SWAP on a pair plus x180/y180 on two spectators")


def parallel_swap(k: int = 4, scheme: str = "zzcm", j0: float = 1.0) -> Scenario:
    """Two simultaneous SWAP gates on adjacent row pairs of an 8-qubit block."""
    register = grid_register(PAIR_BOX)
    T = math.pi / j0
    tau = T / k
    omega = GAMMA_HALF_TURN * k * j0
    J = SinSquared(j0, T)
    xy = [XYEdge(PAIR_A[0], PAIR_A[1], J), XYEdge(PAIR_B[0], PAIR_B[1], J)]
    tone = Modulation(omega, tau)

    if scheme == "zzcm":
        def build(eta: float) -> Schedule:
            steps = []
            for axis_phase in (0.0, math.pi / 2):
                drives = [DriveTerm(site, tone, axis_phase) for site in PAIR_FRAME_SITES]
                H = (build_xy(register, xy, support=(0.0, T))
                     + build_drive(register, drives, support=(0.0, T))
                     + _zz(register, PAIR_EDGES, eta))
                steps.append(ScheduleStep(H, T, tau))
            return Schedule(steps)
        k_at = k
    else:
        def build(eta: float) -> Schedule:
            H = build_xy(register, xy, support=(0.0, T)) + _zz(register, PAIR_EDGES, eta)
            return Schedule([ScheduleStep(H, T, T)])
        k_at = 0

    name = f"parallel-swap-{scheme}" + (f"-k{k}" if scheme == "zzcm" else "")
    return Scenario(
        name=name, family="parallel-swap", scheme=scheme, register=register,
        zz_edges=PAIR_EDGES, k=k_at, eta_unit=j0, normalization=NORM_COUPLING,
        ideal=ideal_gate(register, [(list(PAIR_A), "swap"), (list(PAIR_B), "swap")]),
        builder=build, export_envelope=J, export_window=(0.0, T),
        modulation_period=(tau if scheme == "zzcm" else None),
        description="two simultaneous SWAP gates on adjacent pairs")


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

def run_sweep(scenario: Scenario, eta_ratios: Sequence[float],
              config: Optional[PropagatorConfig] = None,
              workers: int = 1) -> List[SweepRecord]:
    """One record per ratio, in input order regardless of worker count."""
    eta_ratios = list(eta_ratios)
    if not eta_ratios:
        raise ValueError("eta grid must not be empty")
    config = config or PropagatorConfig()

    def one(ratio: float) -> SweepRecord:
        t0 = time.perf_counter()
        res = scenario.fidelity(ratio, config)
        wall = (time.perf_counter() - t0) * 1e3
        return SweepRecord(scenario.name, scenario.k, float(ratio),
                           res.fidelity, res.infidelity, res.converged, wall)

    if workers <= 1 or len(eta_ratios) == 1:
        return [one(r) for r in eta_ratios]
    from concurrent.futures import ThreadPoolExecutor
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, eta_ratios))


# ---------------------------------------------------------------------------
# registry for the CLI
# ---------------------------------------------------------------------------

def _family_isolated_x90(scheme, k, normalization):
    return isolated_x90(k=k, scheme=scheme, capped=(normalization == NORM_CAP))


def _family_isolated_x180(scheme, k, normalization):
    return isolated_x180(k=k, scheme=scheme, capped=(normalization == NORM_CAP))


FAMILIES: Dict[str, Dict] = {
    "isolated-x90": dict(
        make=_family_isolated_x90, qubits=5,
        normalizations=(NORM_DRIVE, NORM_CAP), default_normalization=NORM_DRIVE,
        description="x90 on one qubit, four spectators"),
    "isolated-x180": dict(
        make=_family_isolated_x180, qubits=5,
        normalizations=(NORM_DRIVE, NORM_CAP), default_normalization=NORM_CAP,
        description="x180 on one qubit, four spectators"),
    "parallel-xy-nnn": dict(
        make=lambda scheme, k, n: parallel_xy_nnn(k=k, scheme=scheme), qubits=8,
        normalizations=(NORM_CAP,), default_normalization=NORM_CAP,
        description="x180 (x) y180 on next-nearest neighbors"),
    "parallel-xy-nn": dict(
        make=lambda scheme, k, n: parallel_xy_nn(k=k, scheme=scheme), qubits=8,
        normalizations=(NORM_CAP,), default_normalization=NORM_CAP,
        description="x180 (x) y180 on nearest neighbors"),
    "swap-with-singles": dict(
        make=lambda scheme, k, n: swap_with_singles(k=k, scheme=scheme), qubits=8,
        normalizations=(NORM_COUPLING,), default_normalization=NORM_COUPLING,
        description="SWAP plus x180/y180 on spectators, two steps"),
    "parallel-swap": dict(
        make=lambda scheme, k, n: parallel_swap(k=k, scheme=scheme), qubits=8,
        normalizations=(NORM_COUPLING,), default_normalization=NORM_COUPLING,
        description="two simultaneous SWAPs, two steps"),
}


def get_scenario(family: str, scheme: str = "zzcm", k: int = 4,
                 normalization: Optional[str] = None) -> Scenario:
    if family not in FAMILIES:
        raise ValueError(f"unknown scenario family {family!r}; "
                         f"known: {', '.join(sorted(FAMILIES))}")
    if scheme not in ("zzcm", "dy"):
        raise ValueError(f"scheme must be zzcm or dy, got {scheme!r}")
    info = FAMILIES[family]
    normalization = normalization or info["default_normalization"]
    if normalization not in info["normalizations"]:
        raise ValueError(f"family {family} does not support normalization "
                         f"{normalization!r} (allowed: {info['normalizations']})")
    return info["make"](scheme, k, normalization)
