"""State generation with R-matrices and SLOCC classification of the results.

Two-qubit states are either product or Bell class. Three-qubit states fall
into six classes: fully separable ``A-B-C``, the biseparable ``AB-C``,
``A-BC`` and ``AC-B``, and the tripartite ``GHZ`` and ``W`` classes. The
last two are told apart by the three-tangle. Larger registers only get a
descriptor built from local ranks and separable bipartitions.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .baxterizer import RMatrixFun
from .tensor_core import DenseOperator, DimensionError, StateVector, apply_embedded, kron_all

__all__ = [
    "PRODUCT",
    "BELL",
    "GHZ",
    "W",
    "UNCLASSIFIED",
    "GeneratedState",
    "SloccLabel",
    "IloMatrix",
    "apply_r",
    "reduced_density",
    "local_ranks",
    "three_tangle",
    "classify",
    "w_unitary",
    "ilo_apply",
    "state_to_text",
    "state_from_text",
]

PRODUCT = "product"
BELL = "bell"
GHZ = "GHZ"
W = "W"
UNCLASSIFIED = "unclassified"
THREE_QUBIT_CLASSES = ("A-B-C", "AB-C", "A-BC", "AC-B", GHZ, W)

RANK_TOL = 1e-8
NORM_TOL = 1e-8


class GeneratedState(NamedTuple):
    state: StateVector
    raw: StateVector
    provenance: str


def _as_state(ket, d: int) -> StateVector:
    if isinstance(ket, StateVector):
        return ket
    return StateVector.basis(str(ket), d)


def apply_r(r: RMatrixFun, u, ket, position: int = 1, total: int | None = None,
            provenance: str = "") -> GeneratedState:
    """Act with ``R(u)`` on sites ``position .. position+m-1`` of ``ket``.

    ``u`` is a scalar for one-parameter R-matrices or a tuple for two. The
    input may be a basis label such as ``"001"`` or a StateVector.
    """
    state = _as_state(ket, r.d)
    if state.d != r.d:
        raise DimensionError(f"state has d={state.d} but R acts on d={r.d}")
    total = state.sites if total is None else total
    if total != state.sites:
        raise DimensionError(f"state has {state.sites} sites, expected {total}")
    if position < 1 or position + r.m - 1 > total:
        raise DimensionError(f"R on {r.m} sites does not fit at site {position} of {total}")
    params = tuple(u) if isinstance(u, (tuple, list)) else (u,)
    out = r.apply_embedded(params, position, total, state.amplitudes)
    raw = StateVector(out, r.d, total)
    return GeneratedState(raw.normalized(), raw, provenance)


def _require_normalized(state: StateVector):
    if abs(state.norm - 1.0) > NORM_TOL:
        raise ValueError(f"state must be normalized (norm = {state.norm:.6g})")


def reduced_density(state: StateVector, site: int) -> DenseOperator:
    """Single-site reduced density matrix; ``site`` is 1-based."""
    _require_normalized(state)
    if not 1 <= site <= state.sites:
        raise DimensionError(f"site {site} outside 1..{state.sites}")
    t = np.moveaxis(state.tensor(), site - 1, 0).reshape(state.d, -1)
    return DenseOperator(t @ t.conj().T, state.d, 1)


def _rank(mat: np.ndarray, tol: float) -> int:
    s = np.linalg.svd(mat, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def local_ranks(state: StateVector, tol: float = RANK_TOL) -> tuple[int, ...]:
    return tuple(_rank(reduced_density(state, i).matrix, tol) for i in range(1, state.sites + 1))


def three_tangle(state: StateVector) -> float:
    """4 |Cayley hyperdeterminant| of the 2x2x2 amplitude tensor."""
    if state.d != 2 or state.sites != 3:
        raise DimensionError("three-tangle is defined for three qubits")
    _require_normalized(state)
    a = state.tensor()
    hdet = (
        a[0, 0, 0] ** 2 * a[1, 1, 1] ** 2
        + a[0, 0, 1] ** 2 * a[1, 1, 0] ** 2
        + a[0, 1, 0] ** 2 * a[1, 0, 1] ** 2
        + a[1, 0, 0] ** 2 * a[0, 1, 1] ** 2
        - 2 * (
            a[0, 0, 0] * a[1, 1, 1] * a[0, 1, 1] * a[1, 0, 0]
            + a[0, 0, 0] * a[1, 1, 1] * a[1, 0, 1] * a[0, 1, 0]
            + a[0, 0, 0] * a[1, 1, 1] * a[1, 1, 0] * a[0, 0, 1]
            + a[0, 1, 1] * a[1, 0, 0] * a[1, 0, 1] * a[0, 1, 0]
            + a[0, 1, 1] * a[1, 0, 0] * a[1, 1, 0] * a[0, 0, 1]
            + a[1, 0, 1] * a[0, 1, 0] * a[1, 1, 0] * a[0, 0, 1]
        )
        + 4 * (
            a[0, 0, 0] * a[1, 1, 0] * a[1, 0, 1] * a[0, 1, 1]
            + a[1, 1, 1] * a[0, 0, 1] * a[0, 1, 0] * a[1, 0, 0]
        )
    )
    return float(4 * abs(hdet))


@dataclass(frozen=True)
class SloccLabel:
    n: int
    cls: str
    ranks: tuple[int, ...]
    tangle: float | None = None
    evidence: dict = field(default_factory=dict)
    provenance: str = ""

    def to_dict(self) -> dict:
        return {
            "class": self.cls,
            "ranks": list(self.ranks),
            "tangle": self.tangle,
            "provenance": self.provenance,
            "evidence": self.evidence,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _separable_cuts(state: StateVector, tol: float) -> list[str]:
    """Bipartitions (as site groups) across which the state factorizes."""
    n = state.sites
    t = state.tensor()
    cuts = []
    for size in range(1, n // 2 + 1):
        for group in itertools.combinations(range(n), size):
            if size * 2 == n and 0 not in group:
                continue
            rest = [i for i in range(n) if i not in group]
            mat = np.transpose(t, list(group) + rest).reshape(state.d**size, -1)
            if _rank(mat, tol) == 1:
                cuts.append("".join(str(i + 1) for i in group) + "|" + "".join(str(i + 1) for i in rest))
    return cuts


def _effective_qubit(state: StateVector, tol: float) -> StateVector | None:
    """Restrict a qutrit state to span{|1>, |2>} per site, or None if |0> appears."""
    amps = np.zeros(2**state.sites, dtype=complex)
    for i, a in enumerate(state.amplitudes):
        if abs(a) <= tol:
            continue
        label = state.label(i)
        if "0" in label:
            return None
        amps[int(label.replace("1", "0").replace("2", "1"), 2)] = a
    return StateVector(amps, 2, state.sites).normalized()


def _classify_qubits(state: StateVector, tol: float) -> tuple[str, tuple[int, ...], float | None, dict]:
    ranks = local_ranks(state, tol)
    n = state.sites
    if n == 1:
        return PRODUCT, ranks, None, {}
    if n == 2:
        return (BELL if ranks == (2, 2) else PRODUCT), ranks, None, {}
    if n == 3:
        tangle = three_tangle(state)
        if ranks == (2, 2, 2):
            cls = GHZ if tangle > tol else W
        elif ranks == (1, 1, 1):
            cls = "A-B-C"
        else:
            lone = ranks.index(1)
            cls = ("A-BC", "AC-B", "AB-C")[lone]
        return cls, ranks, tangle, {}
    cuts = _separable_cuts(state, tol)
    cls = "ranks-" + "".join(map(str, ranks))
    return cls, ranks, None, {"separable_cuts": cuts, "fully_separable": all(r == 1 for r in ranks)}


def classify(state: StateVector, tol: float = RANK_TOL, provenance: str = "") -> SloccLabel:
    """SLOCC class of a normalized pure state.

    Qutrit states are classified through their effective qubit on
    span{|1>, |2>}; any |0> amplitude blocks that and yields an
    ``unclassified`` label carrying only local ranks.
    """
    _require_normalized(state)
    evidence: dict = {}
    if state.d == 3:
        reduced = _effective_qubit(state, tol)
        if reduced is None:
            ranks = local_ranks(state, tol)
            return SloccLabel(state.sites, UNCLASSIFIED, ranks, None,
                              {"reason": "qutrit state has |0> amplitude"}, provenance)
        state = reduced
        evidence["effective_qubit"] = "span{|1>,|2>}"
    elif state.d != 2:
        raise DimensionError(f"classification is defined for qubits (and reducible qutrits), got d={state.d}")
    cls, ranks, tangle, extra = _classify_qubits(state, tol)
    evidence.update(extra)
    return SloccLabel(state.sites, cls, ranks, tangle, evidence, provenance)


_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SZ = np.diag([1.0, -1.0]).astype(complex)


def w_unitary(n: int) -> DenseOperator:
    """(1/sqrt n) sum_k chi_k with chi_k = (prod_{j<k} sigma^z_j) sigma^x_k."""
    if n < 1:
        raise DimensionError("w_unitary needs n >= 1")
    total = np.zeros((2**n, 2**n), dtype=complex)
    for k in range(n):
        factors = [_SZ] * k + [_SX] + [np.eye(2)] * (n - k - 1)
        total += kron_all([DenseOperator(f, 2, 1) for f in factors]).matrix
    return DenseOperator(total / np.sqrt(n), 2, n)


@dataclass(frozen=True, eq=False)
class IloMatrix:
    """Invertible local operator L_1 (x) ... (x) L_N, one d x d factor per site."""

    factors: tuple

    def __post_init__(self):
        mats = tuple(np.array(f, dtype=complex) for f in self.factors)
        if not mats:
            raise ValueError("an ILO needs at least one factor")
        d = mats[0].shape[0]
        for i, f in enumerate(mats, 1):
            if f.shape != (d, d):
                raise DimensionError(f"factor {i} has shape {f.shape}, expected ({d}, {d})")
            scale = max(np.linalg.norm(f), 1e-300) ** d
            if abs(np.linalg.det(f)) <= 1e-12 * scale:
                raise ValueError(f"factor {i} is singular")
        object.__setattr__(self, "factors", mats)

    @property
    def d(self) -> int:
        return self.factors[0].shape[0]

    @property
    def sites(self) -> int:
        return len(self.factors)

    @classmethod
    def random(cls, rng: np.random.Generator, n: int, d: int = 2) -> IloMatrix:
        mats = []
        while len(mats) < n:
            f = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
            if np.linalg.cond(f) < 1e3:
                mats.append(f)
        return cls(tuple(mats))


def ilo_apply(state: StateVector, ilo: IloMatrix) -> StateVector:
    """(L_1 (x) ... (x) L_N)|state>, normalized."""
    if ilo.d != state.d or ilo.sites != state.sites:
        raise DimensionError(
            f"ILO acts on {ilo.sites} sites of d={ilo.d}, state has {state.sites} of d={state.d}"
        )
    amps = state.amplitudes
    for i, f in enumerate(ilo.factors, 1):
        amps = apply_embedded(f, state.d, i, state.sites, amps)
    return StateVector(amps, state.d, state.sites).normalized()


def state_to_text(state: StateVector, tol: float = 0.0) -> str:
    """One ``label re im`` line per nonzero amplitude, preceded by a ``# d=`` header."""
    lines = [f"# d={state.d}"]
    for label, a in state.terms(tol).items():
        lines.append(f"{label} {a.real!r} {a.imag!r}")
    return "\n".join(lines) + "\n"


def state_from_text(text: str, d: int | None = None) -> StateVector:
    """Parse the state file format; ``d`` defaults to the header or the largest digit + 1."""
    terms: dict[str, complex] = {}
    header_d = None
    for num, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("d="):
                header_d = int(body[2:])
            continue
        parts = line.split()
        if len(parts) != 3 or not parts[0].isdigit():
            raise ValueError(f"line {num}: expected 'label re im', got {line!r}")
        try:
            amp = complex(float(parts[1]), float(parts[2]))
        except ValueError:
            raise ValueError(f"line {num}: bad amplitude in {line!r}") from None
        terms[parts[0]] = terms.get(parts[0], 0) + amp
    if not terms:
        raise ValueError("state file has no amplitudes")
    if d is None:
        d = header_d or max(2, max(int(ch) for lab in terms for ch in lab) + 1)
    return StateVector.from_terms(terms, d=d, normalize=False)
