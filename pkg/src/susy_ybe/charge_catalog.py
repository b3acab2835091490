"""Catalog of multi-site charges built from the single-site supersymmetry suite.

Every charge is a sum of tensor words over the letters of
:meth:`SusySuite.letter` (``q``, ``Q`` = q^dag, ``b``, ``f``, ``w``, ...),
e.g. ``[(1.0, "bq"), (1.0, "Qf")]`` stands for ``b (x) q + q^dag (x) f``.

Three kinds of entries exist:

* ``nilpotent``: Q^2 = 0 and the triple products vanish, used directly as the
  generator of ``R(u) = 1 + c u Q``;
* ``supercharge-unitary-family``: normalized supercharges whose bosonic
  projector ``B = Q Q^dag`` (or fermionic ``F = Q^dag Q``) drives a unitary
  exponential R-matrix;
* ``hamiltonian-projector``: supercharges whose full Hamiltonian
  ``H = {Q, Q^dag}`` is a projector commuting with its overlapping translates.

Specs have a compact text form ``family[.k][{params}]@d<d>m<m>``, for example
``uq1{a=1,b=2}@d2m2``, ``qghz.3@d2m3``, ``appendixA{1,1,1}@d2m3`` or
``qir{sig=nd,pos=13}@d2m3``. Weights go in the braces either positionally or
as ``a=, b=, c=``; structural options are ``key=value`` pairs.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import reduce
from typing import Callable

import numpy as np

from .sis_susy import susy_suite
from .tensor_core import DenseOperator, DimensionError, StateVector

__all__ = [
    "NILPOTENT",
    "UNITARY",
    "HAMILTONIAN",
    "CatalogError",
    "ChargeSpec",
    "ChargeOperator",
    "FamilyInfo",
    "FAMILIES",
    "parse_spec",
    "format_spec",
    "build",
    "word_operator",
    "projectors",
    "extraspecial_generator",
    "synthesize_charge",
    "catalog_list",
]

NILPOTENT = "nilpotent"
UNITARY = "supercharge-unitary-family"
HAMILTONIAN = "hamiltonian-projector"

_WEIGHT_KEYS = "abcdefgh"


class CatalogError(ValueError):
    """Invalid charge specification."""


Word = list[tuple[complex, str]]


@dataclass(frozen=True)
class ChargeSpec:
    family: str
    index: int | None = None
    weights: tuple[float, ...] = ()
    m: int = 2
    d: int = 2
    options: tuple[tuple[str, str], ...] = ()

    def option(self, key: str, default: str | None = None) -> str | None:
        return dict(self.options).get(key, default)

    def __str__(self):
        return format_spec(self)


@dataclass(frozen=True)
class FamilyInfo:
    name: str
    kind: str
    summary: str
    words: Callable[[ChargeSpec], Word]
    n_weights: Callable[[int], int] = lambda m: 0
    native_m: int | None = None
    min_m: int = 2
    n_index: int | None = None
    option_keys: tuple[str, ...] = ()
    normalized: bool = False
    qubit_only: bool = False
    # gYBE validity: nilpotent and lowl entries hold for every l >= 1, the
    # projector families only once the supports stop overlapping (l >= m)
    l_min: Callable[[int], int] = lambda m: 1
    index_m: Callable[[int], int | None] = lambda k: None

    def l_ok(self, m: int, l: int) -> bool:
        return l >= self.l_min(m)

    def sweep_ls(self, m: int) -> list[int]:
        lo = self.l_min(m)
        if lo >= m:
            return [m, m + 1]
        return list(range(lo, m))


FAMILIES: dict[str, FamilyInfo] = {}


def _register(info: FamilyInfo):
    FAMILIES[info.name] = info


def _pure(words: list[str]) -> Callable[[ChargeSpec], Word]:
    def get(spec: ChargeSpec) -> Word:
        return [(1.0, words[spec.index - 1])]

    return get


def _sums(table: list[list[str]]) -> Callable[[ChargeSpec], Word]:
    def get(spec: ChargeSpec) -> Word:
        return [(1.0, w) for w in table[spec.index - 1]]

    return get


def _weighted(*words: str) -> Callable[[ChargeSpec], Word]:
    def get(spec: ChargeSpec) -> Word:
        return list(zip(spec.weights, words))

    return get


_SCHOICES = ["wq", "qw", "qq", "QQ", "qQ", "Qq"]
_QPE = ["qqw", "QQw", "Qqw", "qQw", "wqq", "wQQ", "wqQ", "wQq", "qwq", "QwQ", "qwQ", "Qwq"]
_QGHZ = ["qqq", "qqQ", "qQq", "Qqq", "QQq", "qQQ", "QqQ", "QQQ"]
_QW = [
    ["bQq", "Qbq"],
    ["QbQ", "bQQ"],
    ["QQb", "bQQ"],
    ["QQb", "QbQ"],
    ["qqf", "qfq"],
    ["qqf", "fqq"],
    ["qfq", "fqq"],
    ["Qqf", "Qfq"],
]
# (bosonic word, fermionic word) pairs sharing the GHZ bosonic sector {000, 111}
# except the last, which targets {001, 110}
_UQ3_VARIANTS = [
    None,
    ("bbq", "QQf"),
    ("bqb", "QfQ"),
    ("qbb", "fQQ"),
    ("qbq", "fQf"),
    ("qqb", "ffQ"),
    ("bbQ", "QQb"),
]


def _uq1(spec: ChargeSpec) -> Word:
    a, b = spec.weights
    if spec.index in (None, 1):
        return [(a, "bq"), (b, "Qf")]
    return [(a, "qb"), (b, "fQ")]


def _uq2(spec: ChargeSpec) -> Word:
    a, b = spec.weights
    if spec.index in (None, 1):
        return [(a, "fq"), (b, "qf")]
    return [(a, "bQ"), (b, "Qb")]


def _uq3(spec: ChargeSpec) -> Word:
    a, b = spec.weights
    if spec.index in (None, 1):
        return [(a, "b" + "q" * (spec.m - 1)), (b, "Q" + "f" * (spec.m - 1))]
    bos, fer = _UQ3_VARIANTS[spec.index - 1]
    return [(a, bos), (b, fer)]


def _uq9(spec: ChargeSpec) -> Word:
    m = spec.m
    return [(spec.weights[r], "b" * r + "Q" + "b" * (m - 1 - r)) for r in range(m)]


def _appendix_a(spec: ChargeSpec) -> Word:
    a1, a2, a3 = spec.weights
    return [
        (a1, "bbQ"), (a2, "bQb"), (a3, "Qbb"),
        (a1, "qqf"), (a2, "qfq"), (a3, "fqq"),
    ]


def _mproduct(spec: ChargeSpec) -> Word:
    r = int(spec.option("r", "0"))
    dag = spec.option("dag", "0") == "1"
    if not 0 <= r < spec.m:
        raise CatalogError(f"mproduct needs 0 <= r < m, got r={r}")
    return [(1.0, "w" * r + ("Q" if dag else "q") + "w" * (spec.m - r - 1))]


def _sig_letters(sig: str) -> list[str]:
    if not sig or any(ch not in "nd" for ch in sig):
        raise CatalogError(f"signature must be a string over 'n'/'d', got {sig!r}")
    return ["Q" if ch == "d" else "q" for ch in sig]


def _qir(spec: ChargeSpec) -> Word:
    letters = _sig_letters(spec.option("sig", "nn"))
    r = len(letters)
    pos_opt = spec.option("pos")
    pos = [int(ch) for ch in pos_opt] if pos_opt else list(range(1, r + 1))
    if not 2 <= r <= spec.m - 1:
        raise CatalogError(f"qir needs 2 <= r <= m-1, got r={r}, m={spec.m}")
    if len(pos) != r or sorted(set(pos)) != pos or pos[0] < 1 or pos[-1] > spec.m:
        raise CatalogError(f"qir positions {pos_opt!r} must be {r} increasing sites in 1..{spec.m}")
    word = ["w"] * spec.m
    for p, ch in zip(pos, letters):
        word[p - 1] = ch
    return [(1.0, "".join(word))]


def _mghz(spec: ChargeSpec) -> Word:
    letters = _sig_letters(spec.option("sig", "n" * spec.m))
    if len(letters) != spec.m:
        raise CatalogError(f"mghz signature must have length m={spec.m}")
    return [(1.0, "".join(letters))]


def _mwstate(spec: ChargeSpec) -> Word:
    m = spec.m
    return [(1.0, "b" * r + "Q" + "b" * (m - 2 - r) + "q") for r in range(m - 1)]


_LOWL = [
    lambda m: "q" * m,
    lambda m: "q" * (m - 1) + "Q",
    lambda m: "q" * (m - 1) + "w",
]


def _lowl(spec: ChargeSpec) -> Word:
    return [(1.0, _LOWL[spec.index - 1](spec.m))]


def _synth(spec: ChargeSpec) -> Word:
    src = spec.option("src")
    tgt = spec.option("tgt")
    if not src or not tgt:
        raise CatalogError("synth needs src= and tgt= options")
    kets = tgt.split("+")
    if len(kets) != len(spec.weights):
        raise CatalogError("synth needs one weight per target ket")
    return [(w, _outer_word(t, src)) for w, t in zip(spec.weights, kets)]


def _outer_word(target: str, source: str) -> str:
    """Tensor word equal to |target><source| on qubits."""
    letter = {("0", "0"): "b", ("1", "1"): "f", ("0", "1"): "q", ("1", "0"): "Q"}
    if len(target) != len(source):
        raise CatalogError("target and source kets differ in length")
    try:
        return "".join(letter[t, s] for t, s in zip(target, source))
    except KeyError:
        raise CatalogError(f"kets {target!r}, {source!r} are not qubit labels") from None


_l_ge_m = lambda m: m  # noqa: E731

_register(FamilyInfo("schoices", NILPOTENT, "two-site supercharge/Witten words (Bell or product)",
                     _pure(_SCHOICES), native_m=2, n_index=6))
_register(FamilyInfo("mproduct", NILPOTENT, "product-state generators, one supercharge among Witten operators",
                     _mproduct, option_keys=("r", "dag")))
_register(FamilyInfo("qpe", NILPOTENT, "three-site partial entanglers (AB-C, A-BC, AC-B)",
                     _pure(_QPE), native_m=3, n_index=12))
_register(FamilyInfo("qghz", NILPOTENT, "three-site GHZ generators",
                     _pure(_QGHZ), native_m=3, n_index=8))
_register(FamilyInfo("qw", NILPOTENT, "three-site W-state generators w1..w8",
                     _sums(_QW), native_m=3, n_index=8))
_register(FamilyInfo("qir", NILPOTENT, "r supercharges among Witten operators (r-qubit GHZ inside m sites)",
                     _qir, min_m=3, option_keys=("sig", "pos")))
_register(FamilyInfo("mghz", NILPOTENT, "m-site GHZ generators, one supercharge per site",
                     _mghz, option_keys=("sig",)))
_register(FamilyInfo("mwstate", NILPOTENT, "m-site W-pattern generator",
                     _mwstate))
_register(FamilyInfo("uq1", UNITARY, "Bell sector {00, 11}, fermion 01; variant 2 takes fermion 10",
                     _uq1, n_weights=lambda m: 2, native_m=2, n_index=2,
                     normalized=True, l_min=_l_ge_m))
_register(FamilyInfo("uq2", UNITARY, "Bell sector {01, 10}, fermion 11; variant 2 takes fermion 00",
                     _uq2, n_weights=lambda m: 2, native_m=2, n_index=2,
                     normalized=True, l_min=_l_ge_m))
_register(FamilyInfo("uq3", UNITARY, "GHZ sector {0..0, 1..1}; variants 2-7 are the three-site alternatives",
                     _uq3, n_weights=lambda m: 2, min_m=3, n_index=7, normalized=True, l_min=_l_ge_m,
                     index_m=lambda k: None if k == 1 else 3))
_register(FamilyInfo("uq4", UNITARY, "W sector {001, 010, 100}, fermion 000",
                     _weighted("bbQ", "bQb", "Qbb"), n_weights=lambda m: 3, native_m=3,
                     normalized=True, l_min=_l_ge_m))
_register(FamilyInfo("uq5", UNITARY, "W sector {111, 001, 010}",
                     _weighted("QQQ", "bbQ", "bQb"), n_weights=lambda m: 3, native_m=3,
                     normalized=True, l_min=_l_ge_m))
_register(FamilyInfo("uq6", UNITARY, "A-BC sector {000, 011}, fermion 111",
                     _weighted("qqq", "qff"), n_weights=lambda m: 2, native_m=3,
                     normalized=True, l_min=_l_ge_m))
_register(FamilyInfo("uq7", UNITARY, "AC-B sector {000, 101}, fermion 111",
                     _weighted("qqq", "fqf"), n_weights=lambda m: 2, native_m=3,
                     normalized=True, l_min=_l_ge_m))
_register(FamilyInfo("uq8", UNITARY, "AB-C sector {000, 110}, fermion 111",
                     _weighted("qqq", "ffq"), n_weights=lambda m: 2, native_m=3,
                     normalized=True, l_min=_l_ge_m))
_register(FamilyInfo("uq9", UNITARY, "m-site W sector, fermion 0..0",
                     _uq9, n_weights=lambda m: m, normalized=True, l_min=_l_ge_m))
_register(FamilyInfo("appendixA", UNITARY, "swaps the GHZ sector (F) and the W sector (B)",
                     _appendix_a, n_weights=lambda m: 3, native_m=3, l_min=_l_ge_m))
_register(FamilyInfo("lowl", HAMILTONIAN, "Hamiltonian projectors commuting with overlapping translates",
                     _lowl, n_index=3))
_register(FamilyInfo("synth", UNITARY, "charge synthesized from a target superposition and a source ket",
                     _synth, n_weights=lambda m: -1, option_keys=("src", "tgt"),
                     normalized=True, qubit_only=True, l_min=_l_ge_m))


_SPEC_RE = re.compile(
    r"(?P<fam>[A-Za-z]+\d*)(?:\.(?P<idx>\d+))?(?:\{(?P<params>[^{}]*)\})?@d(?P<d>\d+)m(?P<m>\d+)"
)


def _fmt_num(x: float) -> str:
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


def format_spec(spec: ChargeSpec) -> str:
    info = FAMILIES.get(spec.family)
    parts = []
    if spec.weights:
        if info is not None and 0 < len(spec.weights) <= 3 and spec.family != "appendixA":
            parts += [f"{k}={_fmt_num(w)}" for k, w in zip(_WEIGHT_KEYS, spec.weights)]
        else:
            parts += [_fmt_num(w) for w in spec.weights]
    parts += [f"{k}={v}" for k, v in spec.options]
    out = spec.family
    if spec.index is not None:
        out += f".{spec.index}"
    if parts:
        out += "{" + ",".join(parts) + "}"
    return out + f"@d{spec.d}m{spec.m}"


def parse_spec(text: str) -> ChargeSpec:
    match = _SPEC_RE.fullmatch(text.strip())
    if match is None:
        raise CatalogError(f"malformed charge spec {text!r}")
    fam = match["fam"]
    info = FAMILIES.get(fam)
    if info is None:
        raise CatalogError(f"unknown charge family {fam!r}")
    weights: list[float] = []
    named: dict[str, float] = {}
    options: list[tuple[str, str]] = []
    for item in filter(None, (p.strip() for p in (match["params"] or "").split(","))):
        key, eq, val = item.partition("=")
        if not eq:
            weights.append(_to_float(item))
        elif key in info.option_keys:
            options.append((key, val))
        elif len(key) == 1 and key in _WEIGHT_KEYS:
            named[key] = _to_float(val)
        else:
            raise CatalogError(f"unknown parameter {key!r} for family {fam}")
    if named:
        if weights:
            raise CatalogError("mix of positional and named weights")
        keys = sorted(named, key=_WEIGHT_KEYS.index)
        if keys != list(_WEIGHT_KEYS[: len(keys)]):
            raise CatalogError(f"named weights must be a, b, c, ... in order, got {keys}")
        weights = [named[k] for k in keys]
    spec = ChargeSpec(
        family=fam,
        index=int(match["idx"]) if match["idx"] else None,
        weights=tuple(weights),
        m=int(match["m"]),
        d=int(match["d"]),
        options=tuple(options),
    )
    return normalize_spec(spec)


def _to_float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise CatalogError(f"not a number: {text!r}") from None


def normalize_spec(spec: ChargeSpec) -> ChargeSpec:
    """Validate a spec and fill in default index and all-ones weights."""
    info = FAMILIES.get(spec.family)
    if info is None:
        raise CatalogError(f"unknown charge family {spec.family!r}")
    if spec.d < 2:
        raise CatalogError("local dimension must be >= 2")
    if info.qubit_only and spec.d != 2:
        raise CatalogError(f"{spec.family} is defined for qubits only")
    index = spec.index
    if info.n_index is not None:
        index = 1 if index is None else index
        if not 1 <= index <= info.n_index:
            raise CatalogError(f"{spec.family} index must be in 1..{info.n_index}, got {index}")
    elif index is not None:
        raise CatalogError(f"{spec.family} takes no index")
    want_m = info.native_m or info.index_m(index)
    if want_m is not None and spec.m != want_m:
        raise CatalogError(f"{format_spec(spec)}: this family lives on m={want_m} sites")
    if spec.m < max(2, info.min_m):
        raise CatalogError(f"{spec.family} needs m >= {max(2, info.min_m)}")
    n_w = info.n_weights(spec.m)
    weights = spec.weights
    if n_w == -1:
        tgt = spec.option("tgt", "")
        n_w = len(tgt.split("+")) if tgt else 0
    if not weights and n_w:
        weights = (1.0,) * n_w
    if len(weights) != n_w:
        raise CatalogError(f"{spec.family} takes {n_w} weights, got {len(weights)}")
    if weights and (not all(math.isfinite(w) for w in weights) or not any(weights)):
        raise CatalogError("weights must be finite and not all zero")
    for key, _ in spec.options:
        if key not in info.option_keys:
            raise CatalogError(f"unknown option {key!r} for {spec.family}")
    return ChargeSpec(spec.family, index, tuple(float(w) for w in weights), spec.m, spec.d, spec.options)


def word_operator(words: Word, d: int) -> DenseOperator:
    """Sum of weighted tensor words as a dense operator."""
    suite = susy_suite(d)
    sites = {len(w) for _, w in words}
    if len(sites) != 1:
        raise DimensionError("tensor words of unequal length")
    (m,) = sites
    mat = np.zeros((d**m, d**m), dtype=complex)
    for coeff, word in words:
        mat += coeff * reduce(np.kron, [suite.letter(ch) for ch in word])
    return DenseOperator(mat, d, m)


@dataclass(frozen=True, eq=False)
class ChargeOperator:
    Q: DenseOperator
    spec: ChargeSpec
    kind: str
    words: tuple = field(default=(), repr=False)

    @property
    def info(self) -> FamilyInfo:
        return FAMILIES[self.spec.family]

    def projectors(self) -> tuple[DenseOperator, DenseOperator]:
        return projectors(self)

    def hamiltonian(self) -> DenseOperator:
        b, f = self.projectors()
        return b + f

    def projector_scale(self, which: str = "bosonic") -> float:
        """Measured k in P^2 = k P for the chosen projector."""
        b, f = self.projectors()
        p = {"bosonic": b, "fermionic": f, "hamiltonian": b + f}[which].matrix
        tr = np.trace(p).real
        return float(np.trace(p @ p).real / tr) if tr > 0 else 0.0

    def zero_modes(self, tol: float = 1e-12) -> list[str]:
        """Basis kets annihilated by both Q and Q^dag."""
        q = self.Q.matrix
        col = np.linalg.norm(q, axis=0) + np.linalg.norm(q.conj().T, axis=0)
        label = StateVector(np.zeros(q.shape[0]), self.Q.d, self.Q.sites).label
        return [label(i) for i in np.flatnonzero(col <= tol)]

    def generator(self, sector: str | None = None) -> tuple[DenseOperator, float]:
        """Operator and its scale k fed to the Baxterizer.

        ``sector`` picks ``"nilpotent"`` (Q itself), ``"bosonic"``,
        ``"fermionic"`` or ``"hamiltonian"``; the default follows the kind,
        with the appendix family using its full Hamiltonian.
        """
        if sector is None:
            if self.kind == NILPOTENT:
                sector = "nilpotent"
            elif self.kind == HAMILTONIAN or self.spec.family == "appendixA":
                sector = "hamiltonian"
            else:
                sector = "bosonic"
        if sector == "nilpotent":
            return self.Q, 0.0
        b, f = self.projectors()
        op = {"bosonic": b, "fermionic": f, "hamiltonian": b + f}.get(sector)
        if op is None:
            raise ValueError(f"unknown sector {sector!r}")
        scale = self.projector_scale(sector)
        return op, (scale if scale > 0 else 1.0)

    def __str__(self):
        return format_spec(self.spec)


def build(spec: ChargeSpec | str, tol: float = 1e-12) -> ChargeOperator:
    if isinstance(spec, str):
        spec = parse_spec(spec)
    else:
        spec = normalize_spec(spec)
    info = FAMILIES[spec.family]
    words = info.words(spec)
    if any(len(w) != spec.m for _, w in words):
        raise CatalogError(f"{format_spec(spec)}: word length differs from m")
    op = word_operator(words, spec.d)
    if info.normalized:
        op = op / math.sqrt(sum(abs(w) ** 2 for w in spec.weights))
    if (op @ op).norm() > tol:
        raise CatalogError(f"{format_spec(spec)} is not nilpotent")
    return ChargeOperator(op, spec, info.kind, tuple(words))


def projectors(charge: ChargeOperator) -> tuple[DenseOperator, DenseOperator]:
    """Bosonic B = Q Q^dag and fermionic F = Q^dag Q."""
    q = charge.Q
    return q @ q.dag, q.dag @ q


def extraspecial_generator(m: int, d: int = 2) -> DenseOperator:
    """``-w(q + q^dag) (x) (q + q^dag)^(m-1)``; i sigma^y (x) sigma^x ... on qubits."""
    if m < 2 or d < 2:
        raise DimensionError("extraspecial generator needs m >= 2 and d >= 2")
    suite = susy_suite(d)
    first = -suite.w.matrix @ suite.letter("X")
    mat = reduce(np.kron, [first] + [suite.letter("X")] * (m - 1))
    return DenseOperator(mat, d, m)


def synthesize_charge(target, source, m: int | None = None, d: int = 2) -> ChargeOperator:
    """Supercharge sending basis ket ``source`` to the normalized ``target``.

    ``target`` is a :class:`StateVector` or a mapping from basis labels to
    weights; its components form the bosonic sector, ``source`` is the lone
    fermionic state, and every other basis ket is a zero mode.
    """
    if d != 2:
        raise CatalogError("charge synthesis is defined on qubits")
    if isinstance(target, StateVector):
        terms = target.terms()
        m = target.sites if m is None else m
    else:
        terms = dict(target)
    if isinstance(source, int):
        if m is None:
            raise CatalogError("integer source index needs m")
        source = format(source, f"0{m}b")
    m = len(source) if m is None else m
    if len(source) != m or any(len(k) != m for k in terms):
        raise CatalogError("target/source kets must have m sites")
    if source in terms:
        raise CatalogError(f"source ket {source} appears in the target")
    if not terms:
        raise CatalogError("empty target")
    if len(terms) > 2**m - 1:
        raise CatalogError(f"at most 2^m - 1 = {2**m - 1} target components")
    kets = sorted(terms)
    weights = [terms[k] for k in kets]
    if any(abs(complex(w).imag) > 0 for w in weights):
        raise CatalogError("synthesis weights must be real")
    spec = ChargeSpec(
        "synth",
        weights=tuple(complex(w).real for w in weights),
        m=m,
        d=2,
        options=(("src", source), ("tgt", "+".join(kets))),
    )
    return build(spec)


def _family_ms(info: FamilyInfo, m: int | None, index: int | None) -> list[int]:
    fixed = info.native_m or (info.index_m(index) if index is not None else None)
    if fixed is not None:
        return [fixed] if m in (None, fixed) else []
    choices = [m] if m is not None else [2, 3, 4]
    return [mm for mm in choices if mm >= max(2, info.min_m)]


def _entries(info: FamilyInfo, m: int, d: int) -> list[ChargeSpec]:
    name = info.name
    if name == "mproduct":
        return [
            ChargeSpec(name, m=m, d=d, options=(("r", str(r)), ("dag", str(dag))))
            for dag in (0, 1)
            for r in range(m)
        ]
    if name == "qir":
        out = []
        for r in range(2, m):
            for pos in itertools.combinations(range(1, m + 1), r):
                for sig in itertools.product("nd", repeat=r):
                    out.append(ChargeSpec(name, m=m, d=d, options=(
                        ("sig", "".join(sig)), ("pos", "".join(map(str, pos))))))
        return out
    if name == "mghz":
        return [
            ChargeSpec(name, m=m, d=d, options=(("sig", "".join(sig)),))
            for sig in itertools.product("nd", repeat=m)
        ]
    if name == "synth":
        return []
    if info.n_index is not None:
        ks = [k for k in range(1, info.n_index + 1) if (info.native_m or info.index_m(k) or m) == m]
        return [normalize_spec(ChargeSpec(name, k, m=m, d=d)) for k in ks]
    return [normalize_spec(ChargeSpec(name, m=m, d=d))]


def catalog_list(family: str | None = None, m: int | None = None, d: int = 2,
                 kind: str | None = None) -> list[ChargeSpec]:
    """Deterministically ordered catalog entries matching the filters.

    Families without a fixed window are listed at m = 2, 3, 4 unless ``m``
    is given. Weights default to all ones.
    """
    if family is not None and family not in FAMILIES:
        raise CatalogError(f"unknown charge family {family!r}")
    out = []
    for name, info in FAMILIES.items():
        if family is not None and name != family:
            continue
        if kind is not None and info.kind != kind:
            continue
        if info.qubit_only and d != 2:
            continue
        ms = sorted({mm for k in (range(1, (info.n_index or 1) + 1)) for mm in _family_ms(info, m, k)})
        for mm in ms:
            out.extend(_entries(info, mm, d))
    return out
