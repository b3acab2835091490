"""Spectral-parameter R-matrices built from nilpotent, projector and braid generators.

Single-parameter R-matrices have the form ``R(u) = 1 + a(u) G``:

* ``linear``: ``a(u) = c u`` for nilpotent or permutation generators;
* ``exp_projector``: ``a(u) = (exp(c u) - 1) / k`` for ``G^2 = k G``.

Two-parameter forms ``R(x, y) = 1 + a(x, y) G`` come from the Baxterization
``(1 - y s)(1 - x s)^-1``: ``x - y`` for nilpotent ``s``, ``(x - y)/(1 - k x)``
for projectors, and ``(x - y)/(2 - x - y)`` for extraspecial generators.
"""
from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass

import numpy as np

from .tensor_core import DenseOperator, apply_embedded, identity, permutation_op
from .charge_catalog import extraspecial_generator

__all__ = [
    "LINEAR",
    "EXP_PROJECTOR",
    "TWO_PARAM_NILPOTENT",
    "TWO_PARAM_PROJECTOR",
    "TWO_PARAM_EXTRASPECIAL",
    "BaxterizationError",
    "SpectralDomainError",
    "SpectralProfile",
    "RMatrixFun",
    "parse_profile",
    "baxterize_nilpotent",
    "baxterize_projector",
    "baxterize_permutation",
    "baxterize_two_param",
    "bell_matrix",
]

LINEAR = "linear"
EXP_PROJECTOR = "exp_projector"
TWO_PARAM_NILPOTENT = "two_param_nilpotent"
TWO_PARAM_PROJECTOR = "two_param_projector"
TWO_PARAM_EXTRASPECIAL = "two_param_extraspecial"

_TWO_PARAM = (TWO_PARAM_NILPOTENT, TWO_PARAM_PROJECTOR, TWO_PARAM_EXTRASPECIAL)
_TEXT_NAMES = {
    LINEAR: "linear",
    EXP_PROJECTOR: "exp",
    TWO_PARAM_NILPOTENT: "2p-nil",
    TWO_PARAM_PROJECTOR: "2p-proj",
    TWO_PARAM_EXTRASPECIAL: "2p-ex",
}
STRUCT_TOL = 1e-10


class BaxterizationError(ValueError):
    """Generator fails the structural condition of the requested form."""


class SpectralDomainError(ValueError):
    """Spectral parameters hit a pole of the profile."""


@dataclass(frozen=True)
class SpectralProfile:
    kind: str
    c: float = 1.0
    k: float = 1.0

    def __post_init__(self):
        if self.kind not in _TEXT_NAMES:
            raise ValueError(f"unknown profile kind {self.kind!r}")
        if not self.k > 0:
            raise ValueError("normalization k must be positive")

    @property
    def arity(self) -> int:
        return 2 if self.kind in _TWO_PARAM else 1

    def __call__(self, *params: complex) -> complex:
        if len(params) != self.arity:
            raise TypeError(f"{self.kind} profile takes {self.arity} spectral parameter(s)")
        if self.kind == LINEAR:
            return self.c * params[0]
        if self.kind == EXP_PROJECTOR:
            return (cmath.exp(self.c * params[0]) - 1) / self.k
        x, y = params
        if self.kind == TWO_PARAM_NILPOTENT:
            return x - y
        if self.kind == TWO_PARAM_PROJECTOR:
            den = 1 - self.k * x
        else:
            den = 2 - x - y
        if abs(den) < 1e-14:
            raise SpectralDomainError(f"{self.kind} has a pole at x={x}, y={y}")
        return (x - y) / den

    def functional_residual(self, u: complex, v: complex) -> float:
        """Defect of the addition law the profile must obey."""
        a = self
        if self.kind == LINEAR:
            return abs(a(u) + a(v) - a(u + v))
        if self.kind == EXP_PROJECTOR:
            return abs(a(u) + a(v) + self.k * a(u) * a(v) - a(u + v))
        raise ValueError("addition laws exist only for single-parameter profiles")

    def __str__(self):
        name = _TEXT_NAMES[self.kind]
        if self.kind == LINEAR:
            return f"{name}{{c={_num(self.c)}}}"
        if self.kind == TWO_PARAM_NILPOTENT or self.kind == TWO_PARAM_EXTRASPECIAL:
            return f"{name}{{}}"
        return f"{name}{{c={_num(self.c)},k={_num(self.k)}}}"


def _num(x: float) -> str:
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


_PROFILE_RE = re.compile(r"(?P<name>[a-z0-9-]+)(?:\{(?P<params>[^{}]*)\})?")


def parse_profile(text: str) -> SpectralProfile:
    """Parse ``linear{c=1}``, ``exp{c=1,k=1}``, ``2p-proj{k=1}`` and friends."""
    m = _PROFILE_RE.fullmatch(text.strip())
    by_name = {v: k for k, v in _TEXT_NAMES.items()}
    if m is None or m["name"] not in by_name:
        raise ValueError(f"malformed profile {text!r}")
    vals = {}
    for item in filter(None, (p.strip() for p in (m["params"] or "").split(","))):
        key, eq, val = item.partition("=")
        if not eq or key not in ("c", "k"):
            raise ValueError(f"bad profile parameter {item!r}")
        vals[key] = float(val)
    return SpectralProfile(by_name[m["name"]], **vals)


@dataclass(frozen=True, eq=False)
class RMatrixFun:
    """``R(params) = 1 + a(params) * generator``."""

    generator: DenseOperator
    profile: SpectralProfile

    @property
    def arity(self) -> int:
        return self.profile.arity

    @property
    def d(self) -> int:
        return self.generator.d

    @property
    def m(self) -> int:
        return self.generator.sites

    def coefficient(self, *params: complex) -> complex:
        return self.profile(*params)

    def matrix(self, *params: complex) -> np.ndarray:
        g = self.generator.matrix
        return np.eye(g.shape[0]) + self.profile(*params) * g

    def __call__(self, *params: complex) -> DenseOperator:
        return DenseOperator(self.matrix(*params), self.d, self.m)

    def apply_embedded(self, params, start: int, total: int, target: np.ndarray) -> np.ndarray:
        """``(R(params) at window start) @ target`` without building the embedding."""
        a = self.profile(*params)
        return target + a * apply_embedded(self.generator.matrix, self.d, start, total, target)


def _defect(mat: np.ndarray) -> float:
    return float(np.linalg.norm(mat))


def baxterize_nilpotent(q: DenseOperator, c: float = 1.0) -> RMatrixFun:
    if _defect(q.matrix @ q.matrix) > STRUCT_TOL:
        raise BaxterizationError("generator is not nilpotent (Q^2 != 0)")
    return RMatrixFun(q, SpectralProfile(LINEAR, c=c))


def baxterize_projector(e: DenseOperator, k: float = 1.0, c: float = 1.0) -> RMatrixFun:
    if _defect(e.matrix @ e.matrix - k * e.matrix) > STRUCT_TOL * max(1.0, k):
        raise BaxterizationError(f"generator does not satisfy E^2 = {k} E")
    return RMatrixFun(e, SpectralProfile(EXP_PROJECTOR, c=c, k=k))


def baxterize_permutation(d: int, c: float = 1.0) -> RMatrixFun:
    return RMatrixFun(permutation_op(d), SpectralProfile(LINEAR, c=c))


def bell_matrix() -> DenseOperator:
    """(1 + i sigma^y (x) sigma^x) / sqrt 2."""
    x = extraspecial_generator(2, 2)
    return (identity(2, 2) + x) / math.sqrt(2)


def _shifted_pair(g: DenseOperator, shift: int = 1) -> tuple[np.ndarray, np.ndarray]:
    total = g.sites + shift
    eye = np.eye(g.d**total)
    first = apply_embedded(g.matrix, g.d, 1, total, eye)
    second = apply_embedded(g.matrix, g.d, 1 + shift, total, eye)
    return first, second


def nbraid_defect(g: DenseOperator, shift: int = 1) -> float:
    """Norm of [s2 s1, s1 + s2] with s2 the generator shifted by ``shift`` sites."""
    s1, s2 = _shifted_pair(g, shift)
    prod = s2 @ s1
    summ = s1 + s2
    return _defect(prod @ summ - summ @ prod)


def baxterize_two_param(gen: DenseOperator, kind: str, k: float | None = None) -> RMatrixFun:
    """Two-parameter R-matrix; ``kind`` is ``nilpotent``, ``projector`` or ``extraspecial``.

    Nilpotent and projector generators must obey the nbraid relation. The
    extraspecial generator does not (its commutator is 2(x1 - x2)); it is
    checked against x^2 = -1 and nearest-neighbour anticommutation instead.
    """
    g = gen.matrix
    if kind == "nilpotent":
        if _defect(g @ g) > STRUCT_TOL:
            raise BaxterizationError("nilpotent kind needs Q^2 = 0")
        profile = SpectralProfile(TWO_PARAM_NILPOTENT)
    elif kind == "projector":
        if k is None:
            tr = np.trace(g).real
            k = float(np.trace(g @ g).real / tr) if tr else 1.0
        if _defect(g @ g - k * g) > STRUCT_TOL * max(1.0, k):
            raise BaxterizationError(f"projector kind needs H^2 = k H (k={k})")
        profile = SpectralProfile(TWO_PARAM_PROJECTOR, k=k)
    elif kind == "extraspecial":
        if _defect(g @ g + np.eye(g.shape[0])) > STRUCT_TOL:
            raise BaxterizationError("extraspecial kind needs x^2 = -1")
        for shift in range(1, gen.sites):
            a, b = _shifted_pair(gen, shift)
            if _defect(a @ b + b @ a) > STRUCT_TOL:
                raise BaxterizationError("extraspecial kind needs anticommuting overlapping translates")
        return RMatrixFun(gen, SpectralProfile(TWO_PARAM_EXTRASPECIAL))
    else:
        raise BaxterizationError(f"unknown two-parameter kind {kind!r}")
    if nbraid_defect(gen) > STRUCT_TOL:
        raise BaxterizationError("generator violates [s2 s1, s1 + s2] = 0")
    return RMatrixFun(gen, profile)
