"""Dense complex operator algebra on small qubit registers.

Everything is an explicit ``dim x dim`` complex matrix (dim = 2^n, n <= 8 in
practice), where dense spectral methods beat any sparse machinery.  Pauli
embedding and products, Hermitian matrix exponentials, and the trace-overlap
gate fidelity all live here.
"""

from __future__ import annotations

from typing import Iterable, Sequence, Tuple

import numpy as np

from .register import QubitRegister, Site

HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-10

_I2 = np.eye(2, dtype=np.complex128)
_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


class DenseOperator:
    """A square complex matrix tied to a register.

    Thin wrapper around an ndarray; arithmetic stays within the register so
    mixing operators from different registers fails loudly.
    """

    __slots__ = ("register", "matrix")

    def __init__(self, register: QubitRegister, matrix: np.ndarray):
        matrix = np.asarray(matrix, dtype=np.complex128)
        if matrix.shape != (register.dim, register.dim):
            raise ValueError(
                f"matrix shape {matrix.shape} does not match register dim {register.dim}"
            )
        self.register = register
        self.matrix = matrix

    # -- algebra ---------------------------------------------------------
    def _check(self, other: "DenseOperator"):
        if self.register != other.register:
            raise ValueError("operators live on different registers")

    def __add__(self, other: "DenseOperator") -> "DenseOperator":
        self._check(other)
        return DenseOperator(self.register, self.matrix + other.matrix)

    def __sub__(self, other: "DenseOperator") -> "DenseOperator":
        self._check(other)
        return DenseOperator(self.register, self.matrix - other.matrix)

    def __mul__(self, scalar) -> "DenseOperator":
        return DenseOperator(self.register, scalar * self.matrix)

    __rmul__ = __mul__

    def __neg__(self) -> "DenseOperator":
        return DenseOperator(self.register, -self.matrix)

    def __matmul__(self, other: "DenseOperator") -> "DenseOperator":
        self._check(other)
        return DenseOperator(self.register, self.matrix @ other.matrix)

    def dagger(self) -> "DenseOperator":
        return DenseOperator(self.register, self.matrix.conj().T)

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    # -- predicates ------------------------------------------------------
    def hermiticity_defect(self) -> float:
        return float(np.abs(self.matrix - self.matrix.conj().T).max())

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        return self.hermiticity_defect() <= tol

    def unitarity_defect(self) -> float:
        d = self.register.dim
        return float(np.abs(self.matrix.conj().T @ self.matrix - np.eye(d)).max())

    def is_unitary(self, tol: float = UNITARY_TOL) -> bool:
        return self.unitarity_defect() <= tol

    def __repr__(self) -> str:
        return f"DenseOperator(n={self.register.count}, dim={self.register.dim})"


def identity(register: QubitRegister) -> DenseOperator:
    return DenseOperator(register, np.eye(register.dim, dtype=np.complex128))


def zero(register: QubitRegister) -> DenseOperator:
    return DenseOperator(register, np.zeros((register.dim, register.dim), np.complex128))


def embed_single_site(register: QubitRegister, site: Site, gate: np.ndarray) -> DenseOperator:
    """Tensor a 2x2 gate at ``site`` with identity elsewhere (big-endian order)."""
    pos = register.index(site)
    out = np.array([[1.0 + 0j]])
    for i in range(register.count):
        out = np.kron(out, gate if i == pos else _I2)
    return DenseOperator(register, out)


def embed_pauli(register: QubitRegister, site: Site, axis: str) -> DenseOperator:
    """Single-site Pauli sigma^axis embedded in the full register space."""
    if axis not in _PAULI:
        raise ValueError(f"axis must be one of x, y, z; got {axis!r}")
    return embed_single_site(register, site, _PAULI[axis])


def product_term(register: QubitRegister, factors: Iterable[Tuple[Site, str]]) -> DenseOperator:
    """Product of single-site Paulis on distinct sites, e.g. a sigma^z sigma^z pair.

    Repeated sites make an ill-formed coupling term and are rejected.
    """
    factors = list(factors)
    sites = [tuple(s) for s, _ in factors]
    if len(set(sites)) != len(sites):
        raise ValueError(f"repeated site in product term: {sites}")
    if not factors:
        return identity(register)
    out = embed_pauli(register, *factors[0])
    for site, axis in factors[1:]:
        out = out @ embed_pauli(register, site, axis)
    return out


def herm_expm(H: DenseOperator, angle: float) -> DenseOperator:
    """exp(-i * angle * H) for Hermitian H, by eigendecomposition.

    The spectral route keeps the result unitary to machine precision and is
    the reference exponential every faster kernel is checked against.
    """
    defect = H.hermiticity_defect()
    if defect > HERMITIAN_TOL:
        raise ValueError(f"matrix is not Hermitian (defect {defect:.3e})")
    w, V = np.linalg.eigh(H.matrix)
    U = (V * np.exp(-1j * angle * w)) @ V.conj().T
    return DenseOperator(H.register, U)


def trace_fidelity(U_ideal: DenseOperator, U_actual: DenseOperator) -> float:
    """|Tr(U_ideal^dag U_actual)| / dim, the global-phase-invariant gate overlap."""
    if U_ideal.register != U_actual.register:
        raise ValueError("fidelity requires operators on the same register")
    d = U_ideal.register.dim
    return float(abs(np.trace(U_ideal.matrix.conj().T @ U_actual.matrix)) / d)
