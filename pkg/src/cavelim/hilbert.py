"""Operators on the joint Hilbert space of an (N+1)-level atom and a
Fock-truncated cavity mode.

Sparse operators are kept in a canonical form (entries sorted by row then
column, exact zeros dropped) so that operator equality is entry-list
equality.  The tensor convention is fixed package-wide: atom factor first,
i.e. the atomic index varies slowest.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True)
class AtomSpace:
    """N+1 atomic levels; index 0 is always the ground level g."""

    level_count: int
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if self.level_count < 2:
            raise ValidationError("AtomSpace needs level_count >= 2")
        if not self.labels:
            names = ("g",) + tuple(str(k) for k in range(1, self.level_count))
            object.__setattr__(self, "labels", names)
        if len(self.labels) != self.level_count:
            raise ValidationError("labels must match level_count")
        if len(set(self.labels)) != self.level_count:
            raise ValidationError("labels must be unique")
        if self.labels[0] != "g":
            raise ValidationError("index 0 must be the ground level g")


@dataclass(frozen=True)
class FockSpace:
    """Photon-number states |0> .. |cutoff|; dimension cutoff + 1."""

    cutoff: int

    def __post_init__(self):
        if self.cutoff < 1:
            raise ValidationError("FockSpace needs cutoff >= 1")

    @property
    def dim(self) -> int:
        return self.cutoff + 1


def _canonical(dim: int, entries) -> tuple:
    acc: dict[tuple[int, int], complex] = {}
    for r, c, v in entries:
        if not (0 <= r < dim and 0 <= c < dim):
            raise ValidationError(f"entry ({r},{c}) outside dim {dim}")
        acc[(r, c)] = acc.get((r, c), 0j) + complex(v)
    return tuple(
        (r, c, v) for (r, c), v in sorted(acc.items()) if v != 0
    )


@dataclass(frozen=True)
class SparseOperator:
    """Complex sparse matrix in canonical entry-list form."""

    dim: int
    entries: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "entries", _canonical(self.dim, self.entries))

    @classmethod
    def from_dense(cls, mat: np.ndarray) -> "SparseOperator":
        mat = np.asarray(mat, dtype=complex)
        rows, cols = np.nonzero(mat)
        return cls(mat.shape[0], [(int(r), int(c), mat[r, c]) for r, c in zip(rows, cols)])

    @classmethod
    def identity(cls, dim: int) -> "SparseOperator":
        return cls(dim, [(k, k, 1.0) for k in range(dim)])

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def dagger(self) -> "SparseOperator":
        return SparseOperator(self.dim, [(c, r, np.conj(v)) for r, c, v in self.entries])

    def scaled(self, factor: complex) -> "SparseOperator":
        return SparseOperator(self.dim, [(r, c, factor * v) for r, c, v in self.entries])

    def __add__(self, other: "SparseOperator") -> "SparseOperator":
        if self.dim != other.dim:
            raise ValidationError("dimension mismatch in operator sum")
        return SparseOperator(self.dim, list(self.entries) + list(other.entries))

    def __sub__(self, other: "SparseOperator") -> "SparseOperator":
        return self + other.scaled(-1.0)

    def __matmul__(self, other: "SparseOperator") -> "SparseOperator":
        if self.dim != other.dim:
            raise ValidationError("dimension mismatch in operator product")
        by_row: dict[int, list[tuple[int, complex]]] = {}
        for r, c, v in other.entries:
            by_row.setdefault(r, []).append((c, v))
        out: list[tuple[int, int, complex]] = []
        for r, k, va in self.entries:
            for c, vb in by_row.get(k, ()):
                out.append((r, c, va * vb))
        return SparseOperator(self.dim, out)

    def commutator(self, other: "SparseOperator") -> "SparseOperator":
        return (self @ other) - (other @ self)

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        lut = {(r, c): v for r, c, v in self.entries}
        for (r, c), v in lut.items():
            if abs(v - np.conj(lut.get((c, r), 0j))) > tol:
                return False
        return True

    def allclose(self, other: "SparseOperator", tol: float = 1e-12) -> bool:
        if self.dim != other.dim:
            return False
        a = {(r, c): v for r, c, v in self.entries}
        b = {(r, c): v for r, c, v in other.entries}
        for key in set(a) | set(b):
            if abs(a.get(key, 0j) - b.get(key, 0j)) > tol:
                return False
        return True

    def to_dense(self) -> np.ndarray:
        mat = np.zeros((self.dim, self.dim), dtype=complex)
        for r, c, v in self.entries:
            mat[r, c] = v
        return mat

    def one_norm(self) -> float:
        """Maximum absolute column sum; cheap upper bound on the spectral norm."""
        col: dict[int, float] = {}
        for _, c, v in self.entries:
            col[c] = col.get(c, 0.0) + abs(v)
        return max(col.values(), default=0.0)


def sigma(atom: AtomSpace, i: int, j: int) -> SparseOperator:
    """Atomic transition operator |i><j| on the bare atom space."""
    n = atom.level_count
    if not (0 <= i < n and 0 <= j < n):
        raise ValidationError(f"level index out of range: ({i},{j}) for {n} levels")
    return SparseOperator(n, [(i, j, 1.0)])


def annihilator(fock: FockSpace) -> SparseOperator:
    """Photon annihilation operator, a|n> = sqrt(n)|n-1>."""
    return SparseOperator(
        fock.dim, [(n - 1, n, np.sqrt(n)) for n in range(1, fock.dim)]
    )


def tensor(a: SparseOperator, b: SparseOperator) -> SparseOperator:
    """Kronecker product with the first (atom) factor varying slowest."""
    dim = a.dim * b.dim
    out = [
        (ra * b.dim + rb, ca * b.dim + cb, va * vb)
        for ra, ca, va in a.entries
        for rb, cb, vb in b.entries
    ]
    return SparseOperator(dim, out)


def apply(op: SparseOperator, vec: np.ndarray) -> np.ndarray:
    """Matrix-vector product against a plain complex vector."""
    vec = np.asarray(vec, dtype=complex)
    if vec.shape != (op.dim,):
        raise ValidationError(f"vector length {vec.shape} does not match dim {op.dim}")
    out = np.zeros(op.dim, dtype=complex)
    for r, c, v in op.entries:
        out[r] += v * vec[c]
    return out
