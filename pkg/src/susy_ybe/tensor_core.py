"""Dense complex operators and states on small tensor-product spaces.

Basis ordering is big-endian: the leftmost tensor factor is the most
significant digit, so on two qubits the basis runs |00>, |01>, |10>, |11>.
Sites are numbered from 1, as in ``embed(op, 1, N) == op (x) I^(N-m)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import reduce
from numbers import Number

import numpy as np

MAX_DIM = 4096
DEFAULT_TOL = 1e-10

__all__ = [
    "MAX_DIM",
    "DEFAULT_TOL",
    "DimensionError",
    "DenseOperator",
    "StateVector",
    "identity",
    "zeros",
    "kron",
    "kron_all",
    "embed",
    "apply_embedded",
    "permutation_op",
    "frobenius_distance",
    "operator_to_json",
    "operator_from_json",
]


class DimensionError(ValueError):
    """Raised on shape, local-dimension or site-window mismatches."""


def _sites_for(size: int, d: int) -> int:
    if d < 1:
        raise DimensionError(f"local dimension must be positive, got {d}")
    n, acc = 0, 1
    while acc < size:
        acc *= d
        n += 1
    if acc != size or (d == 1 and size != 1):
        raise DimensionError(f"size {size} is not a power of d={d}")
    return n


def _check_dim(d: int, sites: int) -> int:
    if d < 1 or sites < 1:
        raise DimensionError(f"need d >= 1 and sites >= 1, got d={d}, sites={sites}")
    dim = d**sites
    if dim > MAX_DIM:
        raise DimensionError(f"d^N = {d}^{sites} = {dim} exceeds the guard {MAX_DIM}")
    return dim


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=np.complex128, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DenseOperator:
    """Square complex matrix acting on (C^d)^(x)sites."""

    matrix: np.ndarray
    d: int
    sites: int

    def __post_init__(self):
        dim = _check_dim(self.d, self.sites)
        mat = _frozen(self.matrix)
        if mat.shape != (dim, dim):
            raise DimensionError(
                f"matrix shape {mat.shape} does not match d^N = {self.d}^{self.sites}"
            )
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def from_matrix(cls, matrix, d: int) -> DenseOperator:
        mat = np.asarray(matrix)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise DimensionError(f"expected a square matrix, got shape {mat.shape}")
        return cls(mat, d, _sites_for(mat.shape[0], d))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def dag(self) -> DenseOperator:
        return DenseOperator(self.matrix.conj().T, self.d, self.sites)

    def adjoint(self) -> DenseOperator:
        return self.dag

    def _same_space(self, other: DenseOperator):
        if self.d != other.d or self.sites != other.sites:
            raise DimensionError(
                f"operators live on different spaces: "
                f"(d={self.d}, N={self.sites}) vs (d={other.d}, N={other.sites})"
            )

    def __matmul__(self, other):
        if isinstance(other, DenseOperator):
            self._same_space(other)
            return DenseOperator(self.matrix @ other.matrix, self.d, self.sites)
        if isinstance(other, StateVector):
            if other.d != self.d or other.sites != self.sites:
                raise DimensionError("state and operator live on different spaces")
            return StateVector(self.matrix @ other.amplitudes, self.d, self.sites)
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, DenseOperator):
            self._same_space(other)
            return DenseOperator(self.matrix + other.matrix, self.d, self.sites)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, DenseOperator):
            self._same_space(other)
            return DenseOperator(self.matrix - other.matrix, self.d, self.sites)
        return NotImplemented

    def __mul__(self, scalar):
        if isinstance(scalar, Number):
            return DenseOperator(self.matrix * scalar, self.d, self.sites)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if isinstance(scalar, Number):
            return DenseOperator(self.matrix / scalar, self.d, self.sites)
        return NotImplemented

    def __neg__(self):
        return DenseOperator(-self.matrix, self.d, self.sites)

    def __pow__(self, n: int):
        return DenseOperator(np.linalg.matrix_power(self.matrix, n), self.d, self.sites)

    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix))

    def __repr__(self):
        return f"DenseOperator(d={self.d}, sites={self.sites})"


@dataclass(frozen=True, eq=False)
class StateVector:
    """Amplitude vector on (C^d)^(x)sites, big-endian basis order."""

    amplitudes: np.ndarray
    d: int
    sites: int

    def __post_init__(self):
        dim = _check_dim(self.d, self.sites)
        amp = _frozen(self.amplitudes).reshape(-1)
        if amp.shape != (dim,):
            raise DimensionError(f"expected {dim} amplitudes, got {amp.shape[0]}")
        object.__setattr__(self, "amplitudes", amp)

    @classmethod
    def basis(cls, label: str, d: int = 2) -> StateVector:
        """Basis ket from a base-d digit string such as ``"011"``."""
        if not label or any(not ch.isdigit() or int(ch) >= d for ch in label):
            raise DimensionError(f"bad basis label {label!r} for d={d}")
        amp = np.zeros(d ** len(label), dtype=complex)
        amp[int(label, d)] = 1.0
        return cls(amp, d, len(label))

    @classmethod
    def from_terms(cls, terms: dict[str, complex], d: int = 2, normalize=True) -> StateVector:
        labels = list(terms)
        if not labels:
            raise ValueError("empty superposition")
        n = len(labels[0])
        amp = np.zeros(d**n, dtype=complex)
        for lab, c in terms.items():
            if len(lab) != n:
                raise DimensionError("labels of unequal length")
            amp[int(lab, d)] += c
        state = cls(amp, d, n)
        return state.normalized() if normalize else state

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> StateVector:
        nrm = self.norm
        if nrm == 0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.amplitudes / nrm, self.d, self.sites)

    def label(self, index: int) -> str:
        digits = []
        for _ in range(self.sites):
            index, r = divmod(index, self.d)
            digits.append(str(r))
        return "".join(reversed(digits))

    def terms(self, tol: float = 1e-14) -> dict[str, complex]:
        return {
            self.label(i): complex(a)
            for i, a in enumerate(self.amplitudes)
            if abs(a) > tol
        }

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((self.d,) * self.sites)

    def __repr__(self):
        return f"StateVector(d={self.d}, sites={self.sites}, norm={self.norm:.6g})"


def identity(d: int, sites: int = 1) -> DenseOperator:
    return DenseOperator(np.eye(_check_dim(d, sites)), d, sites)


def zeros(d: int, sites: int = 1) -> DenseOperator:
    dim = _check_dim(d, sites)
    return DenseOperator(np.zeros((dim, dim)), d, sites)


def kron(a: DenseOperator, b: DenseOperator) -> DenseOperator:
    if a.d != b.d:
        raise DimensionError(f"kron of mismatched local dims {a.d} and {b.d}")
    return DenseOperator(np.kron(a.matrix, b.matrix), a.d, a.sites + b.sites)


def kron_all(ops) -> DenseOperator:
    return reduce(kron, ops)


def embed(op: DenseOperator, start: int, total: int) -> DenseOperator:
    """Place ``op`` on sites ``start .. start+m-1`` of a ``total``-site chain."""
    m = op.sites
    if start < 1 or start + m - 1 > total:
        raise DimensionError(f"window [{start}, {start + m - 1}] does not fit in {total} sites")
    _check_dim(op.d, total)
    left, right = start - 1, total - (start + m - 1)
    mat = op.matrix
    if left:
        mat = np.kron(np.eye(op.d**left), mat)
    if right:
        mat = np.kron(mat, np.eye(op.d**right))
    return DenseOperator(mat, op.d, total)


def apply_embedded(op: np.ndarray, d: int, start: int, total: int, target: np.ndarray) -> np.ndarray:
    """Left-multiply ``target`` by ``op`` embedded at ``start`` (1-based).

    Equivalent to ``embed(op, start, total).matrix @ target`` but never forms
    the embedded matrix; ``target`` may be a vector or a matrix with d^total rows.
    """
    m = _sites_for(op.shape[0], d)
    left = d ** (start - 1)
    right = d ** (total - start - m + 1)
    cols = target.reshape(d**total, -1).shape[1]
    t = target.reshape(left, d**m, right * cols)
    rows, _ = np.nonzero(op)
    if rows.size * 4 >= op.size:
        out = np.einsum("ij,ajb->aib", op, t, optimize=True)
        return out.reshape(target.shape)
    # Sparse generators (words of matrix units) touch only a few rows.
    out = np.zeros(t.shape, dtype=np.result_type(op, t))
    for i in np.unique(rows):
        cols_i = np.flatnonzero(op[i])
        if cols_i.size == 1:
            out[:, i, :] = op[i, cols_i[0]] * t[:, cols_i[0], :]
        else:
            out[:, i, :] = np.tensordot(op[i, cols_i], t[:, cols_i, :], axes=(0, 1))
    return out.reshape(target.shape)


def permutation_op(d: int) -> DenseOperator:
    """Swap of two d-dimensional sites, P(x (x) y) = y (x) x."""
    if d < 2:
        raise DimensionError("permutation operator needs d >= 2")
    p = np.zeros((d * d, d * d))
    for x in range(d):
        for y in range(d):
            p[y * d + x, x * d + y] = 1.0
    return DenseOperator(p, d, 2)


def frobenius_distance(a, b) -> float:
    ma = a.matrix if isinstance(a, DenseOperator) else np.asarray(a)
    mb = b.matrix if isinstance(b, DenseOperator) else np.asarray(b)
    if ma.shape != mb.shape:
        raise DimensionError(f"shape mismatch {ma.shape} vs {mb.shape}")
    return float(np.linalg.norm(ma - mb))


def operator_to_json(op: DenseOperator) -> str:
    flat = op.matrix.reshape(-1)
    return json.dumps(
        {"d": op.d, "N": op.sites, "entries": [[float(z.real), float(z.imag)] for z in flat]}
    )


def operator_from_json(text: str) -> DenseOperator:
    data = json.loads(text)
    d, n = int(data["d"]), int(data["N"])
    dim = _check_dim(d, n)
    pairs = np.asarray(data["entries"], dtype=float)
    if pairs.shape != (dim * dim, 2):
        raise DimensionError(f"expected {dim * dim} [re, im] pairs, got shape {pairs.shape}")
    mat = (pairs[:, 0] + 1j * pairs[:, 1]).reshape(dim, dim)
    return DenseOperator(mat, d, n)
