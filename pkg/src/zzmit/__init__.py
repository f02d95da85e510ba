"""Pulse-level simulator for crosstalk-mitigated quantum gates on 2D lattices.

Builds driven-lattice Hamiltonians with static ZZ crosstalk, derives the
periodic frame transformations whose averaged action cancels the crosstalk,
finds the modulation amplitudes that zero the per-period error cumulant, and
propagates the exact time-ordered dynamics to benchmark gate fidelities
against plain dynamical baselines.
"""

from .register import QubitRegister, grid_register
from .operators import (DenseOperator, embed_pauli, herm_expm, identity,
                        product_term, trace_fidelity, zero)
from .envelopes import (Constant, Envelope, Modulation, OutsideSupportError,
                        PhaseProfile, Scaled, SinSquared, Sum, write_waveform)
from .hamiltonian import (DriveTerm, TimeDependentHamiltonian, XYEdge, ZZEdge,
                          build_drive, build_xy, build_zz, zz_operator)
from .frames import (FrameGenerator, average_hamiltonian, correction_hamiltonian,
                     from_frame, to_frame)
from .cumulant import (GAMMA_HALF_TURN, GAMMA_QUARTER_TURN, CumulantSpec,
                       GammaRoot, KSelection, NoCumulantZeroError,
                       capped_base_amplitude, cumulant_curve, error_cumulant,
                       find_gamma, modulation_peak, select_k)
from .propagate import (EvolveResult, FidelityResult, PropagationError,
                        PropagatorConfig, Schedule, ScheduleStep, evolve,
                        evolve_probed, gate_fidelity, ideal_gate)
from .scenarios import (FAMILIES, Scenario, SweepRecord, get_scenario,
                        isolated_x90, isolated_x180, parallel_swap,
                        parallel_xy_nn, parallel_xy_nnn, run_sweep,
                        swap_with_singles)
from ._kernels import numba_enabled, propagate_product, propagate_product_numpy

__version__ = "0.1.0"
