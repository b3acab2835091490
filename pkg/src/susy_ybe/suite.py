"""The full check battery behind ``susy-ybe suite``.

Every check is a :class:`VerificationReport`; the battery passes when every
report is ``ok`` (pass or expected-fail).
"""
from __future__ import annotations

import math

import numpy as np

from .baxterizer import baxterize_nilpotent, baxterize_two_param, bell_matrix
from .charge_catalog import (
    FAMILIES,
    NILPOTENT,
    ChargeSpec,
    build,
    catalog_list,
    extraspecial_generator,
    format_spec,
)
from .sis_susy import susy_suite
from .slocc_lab import IloMatrix, apply_r, classify, ilo_apply
from .tensor_core import DEFAULT_TOL, StateVector, identity, kron
from .verifier import (
    VerificationReport,
    charge_r_matrix,
    nybe_residual,
    periodicity_residual,
    relation_residual,
    unitarity_residual,
    verify_charge,
)

SLOT = 0.37
T_GENERIC = math.pi / 2
UQ_FAMILIES = tuple(f"uq{i}" for i in range(1, 10))


def _unit(n: int, row: int, col: int) -> np.ndarray:
    m = np.zeros((n, n))
    m[row, col] = 1.0
    return m


def explicit_matrices(cu: float = SLOT) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """Reference displays paired with the matrices the library builds, at c*u = ``cu``."""
    a, b = 1.0, 1.0
    au = math.e**cu - 1
    s = a * a + b * b
    uq1_ref = np.eye(4, dtype=complex)
    uq1_ref[0, 0] += a * a / s * au
    uq1_ref[0, 3] = uq1_ref[3, 0] = a * b / s * au
    uq1_ref[3, 3] += b * b / s * au
    bell_ref = np.array([[1, 0, 0, 1], [0, 1, 1, 0], [0, -1, 1, 0], [-1, 0, 0, 1]]) / math.sqrt(2)
    out = {
        "schoices.3": (np.eye(4) + cu * _unit(4, 0, 3), build("schoices.3@d2m2")),
        "qpe.1": (np.eye(8) - cu * _unit(8, 0, 6) + cu * _unit(8, 1, 7), build("qpe.1@d2m3")),
        "qghz.2": (np.eye(8) + cu * _unit(8, 1, 6), build("qghz.2@d2m3")),
        "qw.1": (np.eye(8) + cu * (_unit(8, 2, 1) + _unit(8, 4, 1)), build("qw.1@d2m3")),
        "uq1": (uq1_ref, build("uq1{a=1,b=1}@d2m2")),
    }
    built = {}
    for name, (ref, charge) in out.items():
        r = charge_r_matrix(charge)
        # c = 1, so u is the slot value itself
        built[name] = (ref, r.matrix(cu))
    built["bell"] = (bell_ref, bell_matrix().matrix)
    return built


def explicit_checks(tol: float) -> list[VerificationReport]:
    rows = []
    for name, (ref, mat) in explicit_matrices().items():
        res = float(np.max(np.abs(ref - mat)))
        rows.append(VerificationReport.from_residual(
            "explicit-matrix", res, min(tol, 1e-12), "explicit-display", name, {"cu": SLOT}))
    return rows


def nilpotent_sweep(samples: int, seed: int, tol: float) -> list[VerificationReport]:
    rows = []
    for d in (2, 3):
        for spec in catalog_list(d=d, kind=NILPOTENT):
            for l in range(1, spec.m):
                if spec.m + l > 6:
                    continue
                rows.append(verify_charge(build(spec), l, samples, seed, tol))
    return rows


def unitary_checks(samples: int, seed: int, tol: float) -> list[VerificationReport]:
    rows = []
    for fam in UQ_FAMILIES:
        for spec in catalog_list(family=fam, d=2):
            charge = build(spec)
            for l in FAMILIES[fam].sweep_ls(spec.m):
                if 2 ** (spec.m + l) <= 4096:
                    rows.append(verify_charge(charge, l, samples, seed, tol))
            r = charge_r_matrix(charge)
            name = format_spec(spec)
            rows.append(unitarity_residual(r, samples, seed, tol, subject=name))
            rows.append(periodicity_residual(r, tol=tol, subject=name))
    return rows


def lowl_checks(samples: int, seed: int, tol: float) -> list[VerificationReport]:
    rows = []
    for d in (2, 3):
        for spec in catalog_list(family="lowl", d=d):
            for l in range(1, spec.m):
                rows.append(verify_charge(build(spec), l, samples, seed, tol))
    return rows


def bell_constants() -> tuple[float, float, float, float]:
    """Residuals of R1R2R1 and R2R1R2 against kappa (x1 + x2), and the two kappas."""
    r = bell_matrix()
    x = extraspecial_generator(2, 2)
    one = identity(2, 1)
    r1, r2 = kron(r, one).matrix, kron(one, r).matrix
    xs = kron(x, one).matrix + kron(one, x).matrix
    out = []
    for prod in (r1 @ r2 @ r1, r2 @ r1 @ r2):
        kappa = np.vdot(xs, prod) / np.vdot(xs, xs)
        out.append((float(np.linalg.norm(prod - kappa * xs)), complex(kappa)))
    (res12, k12), (res21, k21) = out
    return res12, res21, k12, k21


def bell_checks(tol: float) -> list[VerificationReport]:
    tight = min(tol, 1e-12)
    r = bell_matrix()
    rows = [relation_residual("braid", r, 1, tight, subject="bell")]
    square = np.linalg.norm(r.matrix @ r.matrix - math.sqrt(2) * r.matrix + np.eye(4))
    rows.append(VerificationReport.from_residual("bell-quadratic", float(square), tight,
                                                 "bell-matrix", "R^2 = sqrt2 R - 1"))
    res12, res21, k12, k21 = bell_constants()
    rows.append(VerificationReport.from_residual(
        "bell-proportional", max(res12, res21, abs(k12 - k21)), tight, "bell-matrix",
        "R1R2R1, R2R1R2 ~ x1 + x2",
        {"kappa_121": [k12.real, k12.imag], "kappa_212": [k21.real, k21.imag]}))
    return rows


def extraspecial_checks(tol: float) -> list[VerificationReport]:
    tight = min(tol, 1e-12)
    rows = []
    for m in (2, 3, 4):
        x = extraspecial_generator(m, 2)
        for l in range(1, m + 2):
            if 2 ** (m + l) <= 4096:
                rows.append(relation_residual("extraspecial", x, l, tight, subject=f"x d=2 m={m}"))
    x3 = extraspecial_generator(2, 3)
    rows.append(relation_residual("extraspecial", x3, 1, tight, subject="x d=3 m=2"))
    # the non-invertible braid operator built from the qutrit generator
    h = susy_suite(3).h
    bop = (kron(h, h) + x3) / 2
    rows.append(relation_residual("braid", bop, 1, tight, subject="(h h + x)/2, d=3"))
    sv = np.linalg.svd(bop.matrix, compute_uv=False)
    rows.append(VerificationReport.from_residual(
        "non-invertible", float(sv[-1]), tight, "extraspecial", "(h h + x)/2, d=3",
        {"smallest_singular_value": float(sv[-1]), "null_dim": int(np.sum(sv < 1e-12))}))
    return rows


GENERATION_CASES = (
    ("uq1{a=1,b=1}@d2m2", None, "00", "bell"),
    ("uq3{a=1,b=1}@d2m3", None, "000", "GHZ"),
    ("uq4{a=1,b=1,c=1}@d2m3", None, "001", "W"),
    ("uq9{1,1,1}@d2m3", None, "001", "W"),
    ("uq6{a=1,b=1}@d2m3", None, "000", "A-BC"),
    ("uq7{a=1,b=1}@d2m3", None, "000", "AC-B"),
    ("uq8{a=1,b=1}@d2m3", None, "000", "AB-C"),
    ("uq1{a=1,b=1}@d2m2", "fermionic", "01", "product"),
    ("uq3{a=1,b=1}@d2m3", "fermionic", "011", "A-B-C"),
    ("appendixA{1,1,1}@d2m3", None, "001", "W"),
    ("appendixA{1,1,1}@d2m3", None, "000", "GHZ"),
    ("lowl.1@d3m2", None, "11", "bell"),
    ("lowl.1@d3m3", None, "112", "GHZ"),
    ("lowl.3@d3m3", None, "121", "AB-C"),
)


def generation_checks(tol: float = DEFAULT_TOL, t: float = T_GENERIC) -> list[VerificationReport]:
    rows = []
    for text, sector, ket, want in GENERATION_CASES:
        charge = build(text)
        r = charge_r_matrix(charge, sector=sector)
        label = classify(apply_r(r, 1j * t, ket).state)
        witness = {"input": ket, "expected": want, "got": label.cls,
                   "ranks": list(label.ranks), "tangle": label.tangle, "t": t}
        miss = 0.0 if label.cls == want else 1.0
        if want == "GHZ" and label.tangle is not None and text.startswith("uq3"):
            miss = max(miss, abs(label.tangle - 1.0))
        if want == "W" and label.tangle is not None:
            miss = max(miss, label.tangle)
        subject = text + (f" [{sector}]" if sector else "")
        rows.append(VerificationReport.from_residual("slocc-generation", miss, tol,
                                                     f"family:{charge.spec.family}", subject, witness))
    return rows


def reference_states() -> dict[str, StateVector]:
    s2 = 1 / math.sqrt(2)
    s3 = 1 / math.sqrt(3)
    return {
        "bell": StateVector.from_terms({"00": s2, "11": s2}),
        "product2": StateVector.basis("01"),
        "GHZ": StateVector.from_terms({"000": s2, "111": s2}),
        "W": StateVector.from_terms({"100": s3, "010": s3, "001": s3}),
        "A-BC": StateVector.from_terms({"000": s2, "011": s2}),
        "AB-C": StateVector.from_terms({"000": s2, "110": s2}),
        "AC-B": StateVector.from_terms({"000": s2, "101": s2}),
        "A-B-C": StateVector.basis("010"),
    }


def ilo_invariance(n_ilos: int = 50, seed: int = 0) -> dict[str, int]:
    """Number of random ILOs that changed the class, per reference state."""
    rng = np.random.default_rng(seed)
    out = {}
    for name, state in reference_states().items():
        base = classify(state).cls
        misses = 0
        for _ in range(n_ilos):
            ilo = IloMatrix.random(rng, state.sites, state.d)
            misses += classify(ilo_apply(state, ilo)).cls != base
        out[name] = misses
    return out


def appendix_scales(n: int = 10, seed: int = 0) -> list[tuple[tuple[float, ...], float, float, float]]:
    """(weights, k, ||B^2 - kB||, ||F^2 - kF||) for random appendix weights."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        w = tuple(float(x) for x in rng.uniform(-2, 2, size=3))
        charge = build(ChargeSpec("appendixA", weights=w, m=3, d=2))
        k = 2 * sum(x * x for x in w)
        b, f = (p.matrix for p in charge.projectors())
        out.append((w, k, float(np.linalg.norm(b @ b - k * b)), float(np.linalg.norm(f @ f - k * f))))
    return out


def two_param_generators():
    suite = susy_suite(2)
    qq = kron(suite.q, suite.q)
    h = build("lowl.1@d2m2").hamiltonian()
    return {
        "nilpotent": baxterize_two_param(qq, "nilpotent"),
        "projector": baxterize_two_param(h, "projector"),
        "extraspecial": baxterize_two_param(extraspecial_generator(2, 2), "extraspecial"),
    }


def run_battery(samples: int = 16, seed: int = 0, tol: float = DEFAULT_TOL) -> list[VerificationReport]:
    rows = explicit_checks(tol)
    rows += nilpotent_sweep(samples, seed, tol)
    rows += unitary_checks(samples, seed, tol)
    rows += lowl_checks(samples, seed, tol)
    rows += bell_checks(tol)
    rows += extraspecial_checks(tol)
    rows += generation_checks(tol)
    for w, k, rb, rf in appendix_scales(10, seed):
        rows.append(VerificationReport.from_residual(
            "projector-scale", max(rb, rf), tol, "family:appendixA",
            "B^2 = kB, F^2 = kF", {"weights": list(w), "k": k}))
    for kind, r in two_param_generators().items():
        rows.append(nybe_residual(r, 8, seed, tol, subject=kind))
    for d in range(2, 7):
        rows.append(relation_residual("susy", susy_suite(d), tol=min(tol, 1e-12)))
    for name, misses in ilo_invariance(50, seed).items():
        rows.append(VerificationReport.from_residual(
            "ilo-invariance", float(misses), tol, "slocc", name, {"ilos": 50, "changed": misses}))
    nil = baxterize_nilpotent(build("schoices.3@d2m2").Q)
    rows.append(unitarity_residual(nil, samples, seed, tol, subject="schoices.3@d2m2"))
    return rows
