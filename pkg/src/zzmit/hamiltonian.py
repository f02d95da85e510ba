"""Lattice Hamiltonians: single-qubit drives, XY exchange edges, static ZZ crosstalk.

The three builders assemble the interaction-picture terms of a driven 2D
qubit lattice over an explicit register and edge list:

* drives   sum_q  Omega_q(t) (cos(phi) sigma^x_q + sin(phi) sigma^y_q)
* exchange sum_<ab> J_ab(t)/2 (sigma^x_a sigma^x_b + sigma^y_a sigma^y_b)
* crosstalk sum_<ab> eta_ab sigma^z_a sigma^z_b   (static)

A TimeDependentHamiltonian is just a list of (envelope, constant operator)
terms, evaluable at any time inside its support.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .envelopes import Constant, Envelope, OutsideSupportError
from .operators import DenseOperator, embed_pauli, product_term, zero
from .register import QubitRegister, Site


@dataclass(frozen=True)
class DriveTerm:
    """Resonant drive on one site: envelope * (cos(phase) X + sin(phase) Y)."""

    site: Site
    envelope: Envelope
    phase: float = 0.0


@dataclass(frozen=True)
class XYEdge:
    """Exchange coupling J(t)/2 (XX + YY) between two distinct sites."""

    site_a: Site
    site_b: Site
    envelope: Envelope

    def __post_init__(self):
        if tuple(self.site_a) == tuple(self.site_b):
            raise ValueError("XY edge needs two distinct sites")

    def key(self):
        return frozenset((tuple(self.site_a), tuple(self.site_b)))


@dataclass(frozen=True)
class ZZEdge:
    """Static crosstalk eta * sigma^z sigma^z between two distinct sites."""

    site_a: Site
    site_b: Site
    strength: float

    def __post_init__(self):
        if tuple(self.site_a) == tuple(self.site_b):
            raise ValueError("ZZ edge needs two distinct sites")

    def key(self):
        return frozenset((tuple(self.site_a), tuple(self.site_b)))


class TimeDependentHamiltonian:
    """H(t) = sum_j envelope_j(t) * M_j with constant Hermitian matrices M_j."""

    def __init__(self, register: QubitRegister,
                 terms: Sequence[Tuple[Envelope, DenseOperator]],
                 support: Optional[Tuple[float, float]] = None):
        self.register = register
        self.terms: List[Tuple[Envelope, DenseOperator]] = []
        for env, op in terms:
            if op.register != register:
                raise ValueError("term operator register mismatch")
            if isinstance(env, (int, float)):
                env = Constant(float(env))
            self.terms.append((env, op))
        if support is None:
            lo = max((e.support[0] for e, _ in self.terms), default=-math.inf)
            hi = min((e.support[1] for e, _ in self.terms), default=math.inf)
            support = (lo, hi)
        self.support = support

    def evaluate(self, t: float) -> DenseOperator:
        lo, hi = self.support
        if not (lo - 1e-12 <= t <= hi + 1e-12):
            raise OutsideSupportError(f"t={t:g} outside Hamiltonian support [{lo:g}, {hi:g}]")
        d = self.register.dim
        out = np.zeros((d, d), dtype=np.complex128)
        for env, op in self.terms:
            out += env.value(t) * op.matrix
        return DenseOperator(self.register, out)

    def __add__(self, other: "TimeDependentHamiltonian") -> "TimeDependentHamiltonian":
        if other.register != self.register:
            raise ValueError("cannot add Hamiltonians on different registers")
        lo = max(self.support[0], other.support[0])
        hi = min(self.support[1], other.support[1])
        return TimeDependentHamiltonian(self.register, self.terms + other.terms, (lo, hi))

    def shortest_period(self) -> float:
        return min((env.shortest_period() for env, _ in self.terms), default=math.inf)

    def term_arrays(self) -> Tuple[np.ndarray, List[Envelope]]:
        """Stacked (m, dim, dim) matrices and their envelopes, for the kernels."""
        mats = np.ascontiguousarray(
            np.stack([op.matrix for _, op in self.terms])
            if self.terms else np.zeros((0, self.register.dim, self.register.dim), np.complex128)
        )
        return mats, [env for env, _ in self.terms]


def build_drive(register: QubitRegister, drives: Sequence[DriveTerm],
                support: Optional[Tuple[float, float]] = None) -> TimeDependentHamiltonian:
    """Drive Hamiltonian; duplicate (site, phase) entries simply add."""
    terms = []
    for d in drives:
        op = (math.cos(d.phase) * embed_pauli(register, d.site, "x")
              + math.sin(d.phase) * embed_pauli(register, d.site, "y"))
        terms.append((d.envelope, op))
    if not terms:
        terms = [(Constant(0.0), zero(register))]
    return TimeDependentHamiltonian(register, terms, support)


def build_xy(register: QubitRegister, edges: Sequence[XYEdge],
             support: Optional[Tuple[float, float]] = None) -> TimeDependentHamiltonian:
    """Exchange Hamiltonian over an undirected edge list; duplicate edges are ambiguous."""
    _reject_duplicates(edges)
    terms = []
    for e in edges:
        op = 0.5 * (product_term(register, [(e.site_a, "x"), (e.site_b, "x")])
                    + product_term(register, [(e.site_a, "y"), (e.site_b, "y")]))
        terms.append((e.envelope, op))
    if not terms:
        terms = [(Constant(0.0), zero(register))]
    return TimeDependentHamiltonian(register, terms, support)


def build_zz(register: QubitRegister, edges: Sequence[ZZEdge]) -> TimeDependentHamiltonian:
    """Static diagonal crosstalk Hamiltonian; one lumped term for all edges."""
    _reject_duplicates(edges)
    d = register.dim
    acc = np.zeros((d, d), dtype=np.complex128)
    for e in edges:
        acc += e.strength * product_term(register, [(e.site_a, "z"), (e.site_b, "z")]).matrix
    return TimeDependentHamiltonian(register, [(Constant(1.0), DenseOperator(register, acc))])


def zz_operator(register: QubitRegister, edges: Sequence[ZZEdge]) -> DenseOperator:
    """The bare sum eta_ab sigma^z_a sigma^z_b as a single operator."""
    return build_zz(register, edges).terms[0][1]


def _reject_duplicates(edges):
    seen = set()
    for e in edges:
        k = e.key()
        if k in seen:
            raise ValueError(f"duplicate edge {sorted(k)} (ambiguous strength)")
        seen.add(k)
