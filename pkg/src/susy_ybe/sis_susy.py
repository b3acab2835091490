"""Symmetric inverse semigroup S^n_1 and the single-site supersymmetry suite.

Elements ``x[a,b]`` are partial bijections sending ``a`` to ``b``; the
product ``x[a,b] * x[c,d]`` is ``x[a,d]`` when ``b == c`` and the semigroup
zero otherwise. In the matrix representation index ``a`` labels ket
``|a-1>``, so ``x[a,b]`` becomes the matrix unit ``|a-1><b-1|``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import lru_cache
from numbers import Number

import numpy as np

from .tensor_core import DenseOperator, DimensionError

__all__ = [
    "SisElement",
    "OperatorExpr",
    "SusySuite",
    "compose",
    "represent",
    "supercharge",
    "susy_suite",
    "parse_element",
]

_ELEMENT_RE = re.compile(r"x\[(\d+),(\d+)\]@(\d+)")


@dataclass(frozen=True, order=True)
class SisElement:
    a: int
    b: int
    n: int

    def __post_init__(self):
        if self.n < 1 or not (1 <= self.a <= self.n and 1 <= self.b <= self.n):
            raise ValueError(f"x[{self.a},{self.b}] is not an element of S^{self.n}_1")

    def __str__(self):
        return f"x[{self.a},{self.b}]@{self.n}"

    @property
    def inverse(self) -> SisElement:
        return SisElement(self.b, self.a, self.n)


def parse_element(text: str) -> SisElement:
    m = _ELEMENT_RE.fullmatch(text.strip())
    if m is None:
        raise ValueError(f"not a semigroup element: {text!r} (expected x[a,b]@n)")
    return SisElement(int(m[1]), int(m[2]), int(m[3]))


def compose(x: SisElement, y: SisElement) -> SisElement | None:
    """Semigroup product; ``None`` stands for the zero element."""
    if x.n != y.n:
        raise ValueError(f"cannot compose elements of S^{x.n}_1 and S^{y.n}_1")
    if x.b != y.a:
        return None
    return SisElement(x.a, y.b, x.n)


@dataclass(frozen=True)
class OperatorExpr:
    """Finite complex linear combination of semigroup elements.

    Zero coefficients are never stored; the semigroup zero is simply an
    absent term.
    """

    n: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for el, c in self.terms.items():
            if el.n != self.n:
                raise ValueError("term from a different semigroup")
            if c != 0:
                clean[el] = complex(c)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def of(cls, el: SisElement, coeff: complex = 1.0) -> OperatorExpr:
        return cls(el.n, {el: coeff})

    def __add__(self, other: OperatorExpr) -> OperatorExpr:
        if not isinstance(other, OperatorExpr):
            return NotImplemented
        if other.n != self.n:
            raise ValueError("order mismatch")
        out = dict(self.terms)
        for el, c in other.terms.items():
            out[el] = out.get(el, 0) + c
        return OperatorExpr(self.n, out)

    def __mul__(self, other):
        if isinstance(other, Number):
            return OperatorExpr(self.n, {el: c * other for el, c in self.terms.items()})
        if isinstance(other, OperatorExpr):
            if other.n != self.n:
                raise ValueError("order mismatch")
            out = {}
            for x, cx in self.terms.items():
                for y, cy in other.terms.items():
                    z = compose(x, y)
                    if z is not None:
                        out[z] = out.get(z, 0) + cx * cy
            return OperatorExpr(self.n, out)
        return NotImplemented

    def __rmul__(self, scalar):
        if isinstance(scalar, Number):
            return self * scalar
        return NotImplemented

    @property
    def dag(self) -> OperatorExpr:
        return OperatorExpr(self.n, {el.inverse: c.conjugate() for el, c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c:g})*{el}" for el, c in sorted(self.terms.items()))


def represent(x: SisElement | OperatorExpr | None, d: int) -> DenseOperator:
    """Matrix of an element or linear combination on C^d."""
    mat = np.zeros((d, d), dtype=complex)
    if x is None:
        return DenseOperator(mat, d, 1)
    if isinstance(x, SisElement):
        x = OperatorExpr.of(x)
    if x.n != d:
        raise DimensionError(f"S^{x.n}_1 is represented on C^{x.n}, not C^{d}")
    for el, c in x.terms.items():
        mat[el.a - 1, el.b - 1] += c
    return DenseOperator(mat, d, 1)


def supercharge(d: int) -> OperatorExpr:
    """Uniformly weighted supercharge sum_j x[1,j] / sqrt(d-1), j = 2..d."""
    if d < 2:
        raise ValueError(f"a supercharge needs d >= 2, got {d}")
    w = 1.0 / math.sqrt(d - 1)
    return OperatorExpr(d, {SisElement(1, j, d): w for j in range(2, d + 1)})


@dataclass(frozen=True)
class SusySuite:
    d: int
    q: DenseOperator
    q_dag: DenseOperator
    h: DenseOperator
    b: DenseOperator
    f: DenseOperator
    w: DenseOperator

    def letter(self, ch: str) -> np.ndarray:
        """Single-site matrix for a word letter.

        ``q`` supercharge, ``Q`` its adjoint, ``b``/``f`` bosonic/fermionic
        projectors, ``h`` Hamiltonian, ``w`` Witten operator, ``I`` identity,
        ``X`` the combination q + q^dag.
        """
        table = {
            "q": self.q.matrix,
            "Q": self.q_dag.matrix,
            "b": self.b.matrix,
            "f": self.f.matrix,
            "h": self.h.matrix,
            "w": self.w.matrix,
            "I": np.eye(self.d),
            "X": self.q.matrix + self.q_dag.matrix,
        }
        try:
            return table[ch]
        except KeyError:
            raise ValueError(f"unknown operator letter {ch!r}") from None


@lru_cache(maxsize=None)
def susy_suite(d: int) -> SusySuite:
    q_expr = supercharge(d)
    qd_expr = q_expr.dag
    b_expr = q_expr * qd_expr
    f_expr = qd_expr * q_expr
    q = represent(q_expr, d)
    b = represent(b_expr, d)
    f = represent(f_expr, d)
    one = np.eye(d)
    return SusySuite(
        d=d,
        q=q,
        q_dag=represent(qd_expr, d),
        h=represent(b_expr + f_expr, d),
        b=b,
        f=f,
        w=DenseOperator(one - 2 * b.matrix, d, 1),
    )
