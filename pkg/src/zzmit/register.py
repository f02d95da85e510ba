"""Qubit registers over explicit 2D lattice coordinates.

A register fixes an ordered set of ``(row, col)`` sites.  Every operator in
this package is built against one register, and tensor factors follow the
register order big-endian: the first label is the most significant qubit.
"""

from __future__ import annotations

from typing import Iterable, Sequence, Tuple

Site = Tuple[int, int]


class QubitRegister:
    """Ordered collection of lattice sites defining an n-qubit Hilbert space."""

    __slots__ = ("labels", "count", "dim", "_index")

    def __init__(self, labels: Iterable[Site]):
        labels = tuple(tuple(lbl) for lbl in labels)
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate site labels in register: {labels}")
        if not labels:
            raise ValueError("register needs at least one qubit")
        self.labels: Tuple[Site, ...] = labels
        self.count: int = len(labels)
        self.dim: int = 2 ** self.count
        self._index = {lbl: i for i, lbl in enumerate(labels)}

    def index(self, site: Site) -> int:
        """Position of ``site`` in the tensor order; unknown sites are an error."""
        try:
            return self._index[tuple(site)]
        except KeyError:
            raise ValueError(
                f"site {tuple(site)} is not in register {self.labels}"
            ) from None

    def __contains__(self, site) -> bool:
        return tuple(site) in self._index

    def __len__(self) -> int:
        return self.count

    def __eq__(self, other) -> bool:
        return isinstance(other, QubitRegister) and self.labels == other.labels

    def __hash__(self) -> int:
        return hash(self.labels)

    def __repr__(self) -> str:
        return f"QubitRegister({list(self.labels)!r})"


def grid_register(sites: Sequence[Site]) -> QubitRegister:
    """Register over ``sites`` in row-major sorted order (deterministic layout)."""
    return QubitRegister(sorted(tuple(s) for s in sites))
