"""Numerical checks of the generalized Yang-Baxter equation and companion relations.

Every check returns a :class:`VerificationReport` carrying the worst residual
over its samples and the parameters where it occurred. Residuals are
Frobenius norms of the difference between the two sides of a relation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import reduce
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import norm as sparse_norm

from .baxterizer import (
    EXP_PROJECTOR,
    LINEAR,
    RMatrixFun,
    baxterize_nilpotent,
    baxterize_projector,
)
from .charge_catalog import HAMILTONIAN, NILPOTENT, ChargeOperator, build, format_spec
from .sis_susy import SusySuite, susy_suite
from .tensor_core import DEFAULT_TOL, MAX_DIM, DenseOperator, DimensionError, apply_embedded

__all__ = [
    "PASS",
    "FAIL",
    "EXPECTED_FAIL",
    "UNEXPECTED_PASS",
    "RELATIONS",
    "GybeShape",
    "VerificationReport",
    "merge_reports",
    "gybe_residual",
    "relation_residual",
    "unitarity_residual",
    "periodicity_residual",
    "nybe_residual",
    "charge_r_matrix",
    "verify_charge",
]

PASS = "pass"
FAIL = "fail"
EXPECTED_FAIL = "expected-fail"
UNEXPECTED_PASS = "unexpected-pass"

REAL_SPAN = 2.0
IMAG_SPAN = 2 * math.pi
TWO_PARAM_BOUND = 0.5


@dataclass(frozen=True)
class GybeShape:
    d: int
    m: int
    l: int

    def __post_init__(self):
        if self.d < 2 or self.m < 2 or self.l < 1:
            raise DimensionError(f"invalid (d, m, l) = ({self.d}, {self.m}, {self.l})")
        if self.d ** (self.m + self.l) > MAX_DIM:
            raise DimensionError(
                f"(d, m, l) = ({self.d}, {self.m}, {self.l}) needs d^(m+l) = "
                f"{self.d ** (self.m + self.l)} > {MAX_DIM}"
            )

    @property
    def sites(self) -> int:
        return self.m + self.l

    def as_dict(self) -> dict:
        return {"d": self.d, "m": self.m, "l": self.l}


@dataclass(frozen=True)
class VerificationReport:
    relation_id: str
    shape: GybeShape | None
    samples: int
    max_residual: float
    tolerance: float
    verdict: str
    witness: dict = field(default_factory=dict)
    ref: str = ""
    subject: str = ""
    sampling: str = ""

    @classmethod
    def from_residual(cls, relation_id: str, residual: float, tol: float, ref: str,
                      subject: str = "", witness: dict | None = None, shape: GybeShape | None = None,
                      samples: int = 1, expect_pass: bool = True) -> VerificationReport:
        return _report(relation_id, shape, samples, (residual, witness or {}), tol, ref,
                       subject, expect_pass=expect_pass)

    @property
    def ok(self) -> bool:
        return self.verdict in (PASS, EXPECTED_FAIL)

    def to_dict(self) -> dict:
        return {
            "relation_id": self.relation_id,
            "subject": self.subject,
            "shape": self.shape.as_dict() if self.shape else None,
            "samples": self.samples,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "witness": self.witness,
            "sampling": self.sampling,
            "paper_ref": self.ref,
        }


def _verdict(residual: float, tol: float, expect_pass: bool = True) -> str:
    holds = residual <= tol
    if expect_pass:
        return PASS if holds else FAIL
    return UNEXPECTED_PASS if holds else EXPECTED_FAIL


def _report(relation_id, shape, samples, worst, tol, ref, subject="", sampling="",
            expect_pass=True) -> VerificationReport:
    residual, witness = worst
    return VerificationReport(
        relation_id=relation_id,
        shape=shape,
        samples=samples,
        max_residual=float(residual),
        tolerance=tol,
        verdict=_verdict(residual, tol, expect_pass),
        witness=witness,
        ref=ref,
        subject=subject,
        sampling=sampling,
    )


def _witness_key(witness: dict) -> str:
    return repr(sorted(witness.items()))


def _worse(a: tuple[float, dict], b: tuple[float, dict]) -> tuple[float, dict]:
    # ties broken on the witness text so merging does not depend on order
    if a[0] != b[0]:
        return a if a[0] > b[0] else b
    return a if _witness_key(a[1]) >= _witness_key(b[1]) else b


def merge_reports(reports: Iterable[VerificationReport]) -> VerificationReport:
    """Combine reports of one relation: residuals by max, samples summed."""
    reports = list(reports)
    if not reports:
        raise ValueError("nothing to merge")
    first = reports[0]
    for r in reports[1:]:
        if (r.relation_id, r.shape, r.tolerance) != (first.relation_id, first.shape, first.tolerance):
            raise ValueError("can only merge reports of the same relation, shape and tolerance")
    worst = reduce(_worse, [(r.max_residual, r.witness) for r in reports])
    expect_pass = first.verdict in (PASS, FAIL)
    return replace(
        first,
        samples=sum(r.samples for r in reports),
        max_residual=worst[0],
        witness=worst[1],
        verdict=_verdict(worst[0], first.tolerance, expect_pass),
    )


def _cnum(z: complex):
    z = complex(z)
    return z.real if z.imag == 0 else [z.real, z.imag]


def _sample_pairs(profile_kind: str, samples: int, seed: int, domain: str | None):
    if samples < 1:
        raise ValueError("need at least one spectral sample")
    rng = np.random.default_rng(seed)
    domain = domain or ("imag" if profile_kind == EXP_PROJECTOR else "real")
    if domain == "real":
        pts = rng.uniform(-REAL_SPAN, REAL_SPAN, size=(samples, 2))
        return [(complex(u), complex(v)) for u, v in pts], f"u,v uniform in [-{REAL_SPAN:g}, {REAL_SPAN:g}]"
    if domain == "imag":
        pts = rng.uniform(0.0, IMAG_SPAN, size=(samples, 2))
        return [(1j * u, 1j * v) for u, v in pts], "u,v = i*t with t uniform in [0, 2pi]"
    raise ValueError(f"unknown sampling domain {domain!r}")


def gybe_sides(r: RMatrixFun, l: int, u: complex, v: complex) -> tuple[np.ndarray, np.ndarray]:
    """Both sides of the spectral (d, m, l)-gYBE as full matrices on m+l sites."""
    total = r.m + l
    eye = np.eye(r.d**total)
    left = r.apply_embedded((v,), 1, total, eye)
    left = r.apply_embedded((u + v,), 1 + l, total, left)
    left = r.apply_embedded((u,), 1, total, left)
    right = r.apply_embedded((u,), 1 + l, total, eye)
    right = r.apply_embedded((u + v,), 1, total, right)
    right = r.apply_embedded((v,), 1 + l, total, right)
    return left, right


class _WordProducts:
    """Sparse products of a generator G and its l-translate, reused across samples."""

    def __init__(self, g: DenseOperator, l: int):
        mat = sparse.csr_matrix(g.matrix)
        pad = sparse.identity(g.d**l, dtype=complex, format="csr")
        self.a = sparse.kron(mat, pad, format="csr")
        self.b = sparse.kron(pad, mat, format="csr")
        self.aa = self.a @ self.a
        self.bb = self.b @ self.b
        self.ab = self.a @ self.b
        self.ba = self.b @ self.a
        self.aba = self.a @ self.ba
        self.bab = self.b @ self.ab

    def difference(self, a1, a2, a3, b1, b2, b3):
        """(1+a1 A)(1+a2 B)(1+a3 A) - (1+b1 B)(1+b2 A)(1+b3 B), expanded."""
        return (
            (a1 + a3 - b2) * self.a
            + (a2 - b1 - b3) * self.b
            + (a1 * a3) * self.aa
            - (b1 * b3) * self.bb
            + (a1 * a2 - b2 * b3) * self.ab
            + (a2 * a3 - b1 * b2) * self.ba
            + (a1 * a2 * a3) * self.aba
            - (b1 * b2 * b3) * self.bab
        )


DIRECT_MAX_DIM = 64


def gybe_residual(r: RMatrixFun, shape: GybeShape, samples: int = 16, seed: int = 0,
                  tol: float = DEFAULT_TOL, domain: str | None = None,
                  subject: str = "", method: str = "auto") -> VerificationReport:
    """Worst residual of (R(u) x 1^l)(1^l x R(u+v))(R(v) x 1^l) = mirror over sampled (u, v).

    ``method="direct"`` multiplies the six embedded R-matrices for every
    sample. ``"expanded"`` precomputes the generator word products once and
    forms both sides as sparse linear combinations, which keeps the
    2187-dim spaces cheap; ``"auto"`` switches at d^(m+l) > 64.
    """
    if r.arity != 1:
        raise ValueError("gYBE check needs a one-parameter R-matrix")
    if (r.d, r.m) != (shape.d, shape.m):
        raise DimensionError(f"R acts on (d={r.d}, m={r.m}) but shape is {shape}")
    if method == "auto":
        method = "direct" if shape.d**shape.sites <= DIRECT_MAX_DIM else "expanded"
    if method not in ("direct", "expanded"):
        raise ValueError(f"unknown method {method!r}")
    pairs, sampling = _sample_pairs(r.profile.kind, samples, seed, domain)
    words = _WordProducts(r.generator, shape.l) if method == "expanded" else None
    a = r.profile
    worst = (-1.0, {})  # any sample beats this, so the witness is never empty
    for u, v in pairs:
        if words is None:
            left, right = gybe_sides(r, shape.l, u, v)
            res = np.linalg.norm(left - right)
        else:
            diff = words.difference(a(u), a(u + v), a(v), a(v), a(u + v), a(u))
            res = sparse_norm(diff)
        worst = _worse(worst, (float(res), {"u": _cnum(u), "v": _cnum(v)}))
    return _report("gybe", shape, samples, worst, tol, "gybe-spectral", subject,
                   f"{sampling}; seed={seed}; {method}")


def _pair(op: DenseOperator, l: int) -> tuple[np.ndarray, np.ndarray, int]:
    total = op.sites + l
    eye = np.eye(op.d**total)
    return (
        apply_embedded(op.matrix, op.d, 1, total, eye),
        apply_embedded(op.matrix, op.d, 1 + l, total, eye),
        total,
    )


def _n(x) -> float:
    return float(np.linalg.norm(x))


def _susy_battery(s: SusySuite) -> dict[str, float]:
    q, qd, h, b, f, w = (x.matrix for x in (s.q, s.q_dag, s.h, s.b, s.f, s.w))
    one = np.eye(s.d)
    return {
        "q^2": _n(q @ q),
        "qdag^2": _n(qd @ qd),
        "{q,qdag}-h": _n(q @ qd + qd @ q - h),
        "[h,q]": _n(h @ q - q @ h),
        "[h,qdag]": _n(h @ qd - qd @ h),
        "h^2-h": _n(h @ h - h),
        "b^2-b": _n(b @ b - b),
        "f^2-f": _n(f @ f - f),
        "bq-q": _n(b @ q - q),
        "qf-q": _n(q @ f - q),
        "qdag b-qdag": _n(qd @ b - qd),
        "f qdag-qdag": _n(f @ qd - qd),
        "hq-q": _n(h @ q - q),
        "qh-q": _n(q @ h - q),
        "wq+q": _n(w @ q + q),
        "qw-q": _n(q @ w - q),
        "qdag w+qdag": _n(qd @ w + qd),
        "w qdag-qdag": _n(w @ qd - qd),
        "w^2-1": _n(w @ w - one),
        "{q,w}": _n(q @ w + w @ q),
        "{qdag,w}": _n(qd @ w + w @ qd),
        "bf": _n(b @ f),
        "fb": _n(f @ b),
        "w-(1-2b)": _n(w - (one - 2 * b)),
    }


RELATIONS = (
    "braid",
    "far_commute",
    "commute",
    "nilpotent",
    "triple_zero",
    "ql",
    "nbraid",
    "commuting_projector",
    "idempotent",
    "extraspecial",
    "susy",
)


def relation_residual(relation: str, operand, l: int = 1, tol: float = DEFAULT_TOL,
                      k: float = 1.0, subject: str = "") -> VerificationReport:
    """Residual of a relation template instantiated with an operand and its l-translate.

    ``operand`` is a :class:`DenseOperator` on m sites (a :class:`SusySuite`
    for ``susy``). Templates, with ``A`` the operand at site 1 and ``B`` its
    copy shifted by ``l`` sites:

    ``braid`` ABA = BAB; ``far_commute`` / ``commute`` AB = BA; ``nilpotent``
    A^2 = 0; ``triple_zero`` ABA = BAB = 0; ``ql`` ABA = BAB; ``nbraid``
    [BA, A + B] = 0; ``commuting_projector`` ABA = BAB = AB; ``idempotent``
    A^2 = kA; ``extraspecial`` x^2 = -1 (or -h^(x)m when d > 2), anticommuting
    translates for l < m and commuting ones for l >= m.
    """
    if relation not in RELATIONS:
        raise ValueError(f"unknown relation {relation!r}; choose from {RELATIONS}")
    if relation == "susy":
        if not isinstance(operand, SusySuite):
            raise TypeError("susy relation takes a SusySuite")
        vals = _susy_battery(operand)
        name = max(vals, key=lambda n: (vals[n], n))
        witness = {"worst": name, "d": operand.d, "weights": "uniform"}
        return _report("susy", None, len(vals), (vals[name], witness),
                       tol, "susy-algebra", subject or f"d={operand.d}")
    if not isinstance(operand, DenseOperator):
        raise TypeError("relation operand must be a DenseOperator")
    op = operand
    if relation in ("nilpotent", "idempotent"):
        g = op.matrix
        res = _n(g @ g) if relation == "nilpotent" else _n(g @ g - k * g)
        return _report(relation, None, 1, (res, {"k": k} if relation == "idempotent" else {}),
                       tol, relation, subject)
    if relation == "far_commute" and l < op.sites:
        raise DimensionError(f"far commutation needs l >= m = {op.sites}, got l={l}")
    shape = GybeShape(op.d, op.sites, l)
    a, b, total = _pair(op, l)
    witness = {"l": l}
    if relation == "braid" or relation == "ql":
        res = _n(a @ b @ a - b @ a @ b)
    elif relation in ("far_commute", "commute"):
        res = _n(a @ b - b @ a)
    elif relation == "triple_zero":
        aba, bab = _n(a @ b @ a), _n(b @ a @ b)
        res = max(aba, bab)
        witness.update(ABA=aba, BAB=bab)
    elif relation == "nbraid":
        prod, summ = b @ a, a + b
        res = _n(prod @ summ - summ @ prod)
    elif relation == "commuting_projector":
        ab = a @ b
        res = max(_n(a @ b @ a - ab), _n(b @ a @ b - ab))
    else:  # extraspecial
        res, witness = _extraspecial_defect(op, l)
    return _report(relation, shape, 1, (res, witness), tol, relation, subject)


def _extraspecial_defect(x: DenseOperator, l: int) -> tuple[float, dict]:
    g = x.matrix
    if x.d == 2:
        square = np.eye(g.shape[0])
    else:
        h = susy_suite(x.d).h.matrix
        square = reduce(np.kron, [h] * x.sites)
    parts = {"x^2": _n(g @ g + square), "x^3+x": _n(g @ g @ g + g)}
    a, b, _ = _pair(x, l)
    if l < x.sites:
        parts["anticommute"] = _n(a @ b + b @ a)
    else:
        parts["commute"] = _n(a @ b - b @ a)
    worst = max(parts, key=lambda n: (parts[n], n))
    return parts[worst], {"l": l, "worst": worst, **parts}


def _t_samples(t_samples, seed: int) -> list[float]:
    if isinstance(t_samples, int):
        rng = np.random.default_rng(seed)
        return [float(t) for t in rng.uniform(0.0, IMAG_SPAN, size=t_samples)]
    return [float(t) for t in t_samples]


def unitarity_residual(r: RMatrixFun, t_samples: int | Sequence[float] = 16, seed: int = 0,
                       tol: float = DEFAULT_TOL, expect_unitary: bool | None = None,
                       subject: str = "") -> VerificationReport:
    """Worst ||R(it)^dag R(it) - 1|| over real t.

    This is the condition R^dag(-u) R(u) = 1 with the dagger also
    conjugating the spectral argument, evaluated on the imaginary axis. When
    ``expect_unitary`` is false (the default for linear nilpotent R) the
    report verdict is ``expected-fail`` on a violation and ``unexpected-pass``
    otherwise.
    """
    if expect_unitary is None:
        expect_unitary = r.profile.kind != LINEAR
    ts = _t_samples(t_samples, seed)
    if not ts:
        raise ValueError("need at least one t sample")
    worst = (-1.0, {})  # any sample beats this, so the witness is never empty
    for t in ts:
        m = r.matrix(1j * t)
        res = _n(m.conj().T @ m - np.eye(m.shape[0]))
        worst = _worse(worst, (res, {"t": t}))
    return _report("unitarity", None, len(ts), worst, tol, "unitarity", subject,
                   f"u = i*t, seed={seed}", expect_pass=expect_unitary)


def periodicity_residual(r: RMatrixFun, ts: Sequence[float] = (0.1, 0.7, 2.3),
                         tol: float = DEFAULT_TOL, subject: str = "") -> VerificationReport:
    """Worst of ||R(i(t + 2pi/c)) - R(it)|| over ``ts`` and ||R(2 pi i / c) - 1||."""
    if r.profile.kind != EXP_PROJECTOR:
        raise ValueError("periodicity applies to exponential projector profiles only")
    period = 2 * math.pi / r.profile.c
    one = np.eye(r.generator.dim)
    worst = (_n(r.matrix(1j * period) - one), {"t": 0.0, "period": period, "at": "R(iT)=1"})
    for t in ts:
        res = _n(r.matrix(1j * (t + period)) - r.matrix(1j * t))
        worst = _worse(worst, (res, {"t": float(t), "period": period}))
    return _report("periodicity", None, len(ts) + 1, worst, tol, "periodicity", subject,
                   f"t in {list(ts)}")


def nybe_sides(r: RMatrixFun, x: complex, y: complex, z: complex, l: int = 1):
    total = r.m + l
    eye = np.eye(r.d**total)
    left = r.apply_embedded((y, z), 1, total, eye)
    left = r.apply_embedded((x, z), 1 + l, total, left)
    left = r.apply_embedded((x, y), 1, total, left)
    right = r.apply_embedded((x, y), 1 + l, total, eye)
    right = r.apply_embedded((x, z), 1, total, right)
    right = r.apply_embedded((y, z), 1 + l, total, right)
    return left, right


def nybe_residual(r: RMatrixFun, samples: int = 8, seed: int = 0, tol: float = DEFAULT_TOL,
                  bound: float = TWO_PARAM_BOUND, subject: str = "") -> VerificationReport:
    """R1(x,y) R2(x,z) R1(y,z) = R2(y,z) R1(x,z) R2(x,y) without the difference property."""
    if r.arity != 2:
        raise ValueError("nYBE check needs a two-parameter R-matrix")
    if samples < 1:
        raise ValueError("need at least one spectral sample")
    rng = np.random.default_rng(seed)
    triples = rng.uniform(-bound, bound, size=(samples, 3))
    worst = (-1.0, {})  # any sample beats this, so the witness is never empty
    for x, y, z in triples:
        left, right = nybe_sides(r, x, y, z)
        worst = _worse(worst, (_n(left - right), {"x": float(x), "y": float(y), "z": float(z)}))
    return _report("nybe", GybeShape(r.d, r.m, 1), samples, worst, tol, "nybe", subject,
                   f"x,y,z uniform in [-{bound:g}, {bound:g}]; seed={seed}")


def charge_r_matrix(charge: ChargeOperator, c: float = 1.0, sector: str | None = None) -> RMatrixFun:
    """Default R-matrix of a catalog charge (linear for nilpotent kinds, exponential otherwise)."""
    gen, k = charge.generator(sector)
    if sector == "nilpotent" or (sector is None and charge.kind == NILPOTENT):
        return baxterize_nilpotent(gen, c)
    return baxterize_projector(gen, k, c)


def verify_charge(charge: ChargeOperator | str, l: int, samples: int = 16, seed: int = 0,
                  tol: float = DEFAULT_TOL, c: float = 1.0,
                  sector: str | None = None) -> VerificationReport:
    """gYBE check of a catalog charge at its own (d, m) and the given l."""
    if isinstance(charge, str):
        charge = build(charge)
    if not charge.info.l_ok(charge.spec.m, l):
        raise ValueError(
            f"{format_spec(charge.spec)} solves the gYBE only for l >= {charge.info.l_min(charge.spec.m)}"
        )
    r = charge_r_matrix(charge, c, sector)
    shape = GybeShape(charge.spec.d, charge.spec.m, l)
    rep = gybe_residual(r, shape, samples, seed, tol, subject=format_spec(charge.spec))
    ref = f"family:{charge.spec.family}"
    if charge.kind == HAMILTONIAN:
        ref += ":hamiltonian"
    sampling = rep.sampling
    if charge.spec.d > 3:
        sampling += "; uniform supercharge weights for d > 3"
    return replace(rep, ref=ref, sampling=sampling)
