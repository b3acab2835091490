import cmath
import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from susy_ybe.baxterizer import baxterize_nilpotent
from susy_ybe.charge_catalog import build
from susy_ybe.sis_susy import susy_suite
from susy_ybe.slocc_lab import (
    BELL,
    GHZ,
    PRODUCT,
    UNCLASSIFIED,
    W,
    IloMatrix,
    apply_r,
    classify,
    ilo_apply,
    local_ranks,
    reduced_density,
    state_from_text,
    state_to_text,
    three_tangle,
    w_unitary,
)
from susy_ybe.suite import GENERATION_CASES, reference_states
from susy_ybe.tensor_core import DimensionError, StateVector, kron
from susy_ybe.verifier import charge_r_matrix

s2, s3 = 1 / math.sqrt(2), 1 / math.sqrt(3)
sx = np.array([[0, 1], [1, 0]])


def st_(terms, d=2):
    return StateVector.from_terms(terms, d)


def oracle_rho(amps, n, site, d=2):
    """Partial trace by summing over every index except ``site``."""
    rho = np.zeros((d, d), dtype=complex)
    for idx in itertools.product(range(d), repeat=n):
        for jdx in itertools.product(range(d), repeat=n):
            if all(idx[k] == jdx[k] for k in range(n) if k != site - 1):
                i = int("".join(map(str, idx)), d)
                j = int("".join(map(str, jdx)), d)
                rho[idx[site - 1], jdx[site - 1]] += amps[i] * np.conj(amps[j])
    return rho


def concurrence(rho):
    yy = np.kron([[0, -1j], [1j, 0]], [[0, -1j], [1j, 0]])
    tilde = yy @ rho.conj() @ yy
    w, v = np.linalg.eigh(rho)
    root = (v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T
    lam = np.sqrt(np.clip(np.linalg.eigvalsh(root @ tilde @ root), 0, None))[::-1]
    return max(0.0, lam[0] - lam[1] - lam[2] - lam[3])


def ckw_tangle(amps):
    """tau = C^2_{A(BC)} - C^2_{AB} - C^2_{AC}, from Wootters concurrences."""
    t = amps.reshape(2, 2, 2)
    rho_a = np.einsum("abc,dbc->ad", t, t.conj())
    rho_ab = np.einsum("abc,dec->abde", t, t.conj()).reshape(4, 4)
    rho_ac = np.einsum("abc,dbe->acde", t, t.conj()).reshape(4, 4)
    return 4 * np.linalg.det(rho_a).real - concurrence(rho_ab) ** 2 - concurrence(rho_ac) ** 2


def random_state(rng, n, d=2):
    v = rng.normal(size=d**n) + 1j * rng.normal(size=d**n)
    return StateVector(v / np.linalg.norm(v), d, n)


def test_reduced_density_examples():
    psi4 = st_({"01": s2, "10": s2})
    assert np.allclose(reduced_density(psi4, 1).matrix, np.eye(2) / 2)
    for site in (1, 2, 3):
        assert np.allclose(reduced_density(StateVector.basis("000"), site).matrix, np.diag([1, 0]))
    abc = st_({"000": s2, "011": s2})
    assert np.allclose(reduced_density(abc, 1).matrix, np.diag([1, 0]))


def test_reduced_density_against_index_sum():
    rng = np.random.default_rng(0)
    for n, d in ((3, 2), (2, 3), (4, 2)):
        s = random_state(rng, n, d)
        for site in range(1, n + 1):
            rho = reduced_density(s, site).matrix
            assert np.allclose(rho, oracle_rho(s.amplitudes, n, site, d))
            assert np.trace(rho).real == pytest.approx(1)
            assert np.allclose(rho, rho.conj().T)
            assert np.linalg.eigvalsh(rho).min() > -1e-12


def test_reduced_density_requires_normalization():
    with pytest.raises(ValueError):
        reduced_density(StateVector(np.array([1.0, 1, 0, 0]), 2, 2), 1)


def test_local_ranks_examples():
    assert local_ranks(StateVector.basis("000")) == (1, 1, 1)
    assert local_ranks(st_({"000": s2, "111": s2})) == (2, 2, 2)
    assert local_ranks(st_({"000": s2, "011": s2})) == (1, 2, 2)


def test_three_tangle_examples():
    assert three_tangle(st_({"000": s2, "111": s2})) == pytest.approx(1, abs=1e-12)
    assert three_tangle(st_({"100": s3, "010": s3, "001": s3})) < 1e-12
    assert three_tangle(StateVector.basis("101")) == 0
    with pytest.raises(DimensionError):
        three_tangle(StateVector.basis("00"))


def test_three_tangle_matches_ckw_oracle():
    rng = np.random.default_rng(11)
    for _ in range(25):
        s = random_state(rng, 3)
        # the concurrence oracle takes square roots of eigenvalues that are
        # zero up to rounding, so it is only good to about 1e-8
        assert three_tangle(s) == pytest.approx(ckw_tangle(s.amplitudes), abs=1e-7)


def test_classify_examples():
    r = baxterize_nilpotent(kron(susy_suite(2).q, susy_suite(2).q))
    assert classify(apply_r(r, 1j * math.pi / 2, "11").state).cls == BELL
    uq4 = charge_r_matrix(build("uq4{a=1,b=1,c=1}@d2m3"))
    out = classify(apply_r(uq4, 1j * math.pi / 2, "001").state)
    assert out.cls == W and out.ranks == (2, 2, 2) and out.tangle < 1e-10
    assert classify(st_({"000": s2, "011": s2})).cls == "A-BC"
    assert classify(StateVector.basis("01")).cls == PRODUCT


@pytest.mark.parametrize("name", list(reference_states()))
def test_reference_states_label_themselves(name):
    want = {"product2": PRODUCT, "bell": BELL}.get(name, name)
    assert classify(reference_states()[name]).cls == want


@pytest.mark.parametrize("i,terms", [
    (1, {"100": 1, "010": 1, "001": 1}), (2, {"101": 1, "011": 1, "000": 1}),
    (3, {"110": 1, "000": 1, "011": -1}), (4, {"000": 1, "110": -1, "101": -1}),
    (5, {"111": 1, "001": 1, "010": -1}), (6, {"001": 1, "111": -1, "100": -1}),
    (7, {"010": 1, "100": -1, "111": 1}), (8, {"011": 1, "101": -1, "110": 1}),
])
def test_eight_w_states_are_w(i, terms):
    assert classify(st_({k: v * s3 for k, v in terms.items()})).cls == W


def test_classify_four_qubits_descriptor():
    ghz4 = st_({"0000": s2, "1111": s2})
    lab = classify(ghz4)
    assert lab.cls == "ranks-2222" and lab.evidence["separable_cuts"] == []
    pair = st_({"0000": s2, "0011": s2})
    lab = classify(pair)
    assert lab.cls == "ranks-1122" and "12|34" in lab.evidence["separable_cuts"]


def test_classify_qutrit_reduction():
    lab = classify(st_({"11": s2, "22": s2}, d=3))
    assert lab.cls == BELL and "effective_qubit" in lab.evidence
    assert classify(st_({"01": s2, "22": s2}, d=3)).cls == UNCLASSIFIED
    with pytest.raises(DimensionError):
        classify(StateVector.basis("00", 4))


def test_label_json():
    lab = classify(st_({"000": s2, "111": s2}), provenance="uq3")
    d = lab.to_dict()
    assert d["class"] == GHZ and d["ranks"] == [2, 2, 2] and d["provenance"] == "uq3"
    assert '"class": "GHZ"' in lab.to_json()


def test_apply_r_ghz_display():
    r = charge_r_matrix(build("uq3{a=1,b=1}@d2m3"))
    for t in (0.3, 1.1, math.pi / 2):
        e = cmath.exp(1j * t)
        out = apply_r(r, 1j * t, "000").raw.amplitudes
        want = 0.5 * ((e + 1) * StateVector.basis("000").amplitudes + (e - 1) * StateVector.basis("111").amplitudes)
        assert np.allclose(out, want)


@pytest.mark.parametrize("a,b,c", [(1, 1, 1), (1, 2, 3), (0.5, -1, 2)])
def test_apply_r_w_display(a, b, c):
    r = charge_r_matrix(build(f"uq4{{a={a},b={b},c={c}}}@d2m3"))
    cu = 0.8j
    e = cmath.exp(cu)
    n = a * a + b * b + c * c
    basis = lambda lab: StateVector.basis(lab).amplitudes
    want = {
        "001": ((a * a * e + b * b + c * c) * basis("001") + (e - 1) * (a * b * basis("010") + a * c * basis("100"))) / n,
        "010": ((a * a + b * b * e + c * c) * basis("010") + (e - 1) * (a * b * basis("001") + b * c * basis("100"))) / n,
        "100": ((a * a + b * b + c * c * e) * basis("100") + (e - 1) * (a * c * basis("001") + b * c * basis("010"))) / n,
    }
    for lab, w in want.items():
        assert np.allclose(apply_r(r, cu, lab).raw.amplitudes, w)


def test_apply_r_leaves_product_invariant_and_errors():
    r = baxterize_nilpotent(kron(susy_suite(2).q, susy_suite(2).q))
    out = apply_r(r, 0.7, "01")
    assert np.array_equal(out.raw.amplitudes, StateVector.basis("01").amplitudes)
    out = apply_r(r, 0.5, "0111", position=3)
    assert np.allclose(out.raw.amplitudes, StateVector.basis("0111").amplitudes + 0.5 * StateVector.basis("0100").amplitudes)
    with pytest.raises(DimensionError):
        apply_r(r, 0.5, "011", position=3)
    with pytest.raises(DimensionError):
        apply_r(r, 0.5, "01", total=3)


def test_w_unitary():
    for n in range(1, 6):
        u = w_unitary(n).matrix
        assert np.linalg.norm(u @ u - np.eye(2**n)) < 1e-12
        assert np.linalg.norm(u - u.conj().T) < 1e-12
        out = u @ StateVector.basis("0" * n).amplitudes
        want = sum(StateVector.basis("0" * r + "1" + "0" * (n - r - 1)).amplitudes for r in range(n))
        assert np.allclose(out, want / math.sqrt(n))
    assert np.array_equal(w_unitary(1).matrix, sx)


def test_ilo_examples():
    psi1 = st_({"00": s2, "11": -s2})
    psi2 = st_({"01": s2, "10": -s2})
    out = ilo_apply(psi1, IloMatrix((np.eye(2), sx)))
    assert np.allclose(out.amplitudes, psi2.amplitudes)
    al, be, ga = 0.4, -1.2, 2.0
    w1 = st_({"100": s3, "010": s3, "001": s3})
    ilo = IloMatrix((math.sqrt(3) * np.diag([1, al]), np.diag([1, be]), np.diag([1, ga])))
    want = st_({"100": al, "010": be, "001": ga})
    assert np.allclose(ilo_apply(w1, ilo).amplitudes, want.amplitudes)
    ghz = reference_states()["GHZ"]
    assert np.allclose(ilo_apply(ghz, IloMatrix((np.eye(2),) * 3)).amplitudes, ghz.amplitudes)


def test_ilo_errors():
    with pytest.raises(ValueError, match="singular"):
        IloMatrix((np.eye(2), np.array([[1, 2], [2, 4]])))
    with pytest.raises(DimensionError):
        ilo_apply(StateVector.basis("00"), IloMatrix((np.eye(2),) * 3))


def test_state_file_round_trip():
    rng = np.random.default_rng(2)
    s = random_state(rng, 3)
    back = state_from_text(state_to_text(s))
    assert np.array_equal(back.amplitudes, s.amplitudes)
    q = st_({"12": s2, "21": s2}, d=3)
    assert state_from_text(state_to_text(q)).d == 3
    assert state_from_text("00 1 0\n11 1 0\n").norm == pytest.approx(math.sqrt(2))
    with pytest.raises(ValueError):
        state_from_text("# only a comment\n")
    with pytest.raises(ValueError):
        state_from_text("00 one 0\n")


@pytest.mark.parametrize("text,sector,ket,want", GENERATION_CASES)
def test_generation_claims(text, sector, ket, want):
    r = charge_r_matrix(build(text), sector=sector)
    lab = classify(apply_r(r, 1j * math.pi / 2, ket).state)
    assert lab.cls == want
    if text.startswith("uq3") and sector is None:
        assert abs(lab.tangle - 1) < 1e-10


def test_uq1_and_uq2_variants_give_bell():
    for text, ket in (("uq1.2{a=1,b=2}@d2m2", "10"), ("uq2{a=1,b=1}@d2m2", "11"), ("uq2.2{a=1,b=1}@d2m2", "00")):
        charge = build(text)
        r = charge_r_matrix(charge)
        bos = [lab for lab in ("00", "01", "10", "11")
               if np.linalg.norm(charge.projectors()[0].matrix @ StateVector.basis(lab).amplitudes) > 0]
        assert classify(apply_r(r, 1j * math.pi / 2, bos[0]).state).cls == BELL


def test_uq5_gives_w():
    r = charge_r_matrix(build("uq5{a=1,b=1,c=1}@d2m3"))
    assert classify(apply_r(r, 1j * math.pi / 2, "111").state).cls == W


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(sorted(reference_states())), st.integers(0, 2**31))
def test_classification_ilo_invariant(name, seed):
    s = reference_states()[name]
    rng = np.random.default_rng(seed)
    base = classify(s).cls
    for _ in range(5):
        assert classify(ilo_apply(s, IloMatrix.random(rng, s.sites, s.d))).cls == base


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31), st.permutations([0, 1, 2]))
def test_ranks_permutation_covariant(seed, perm):
    rng = np.random.default_rng(seed)
    # mix of product and entangled factors so ranks are not all equal
    a = random_state(rng, 1).amplitudes
    bc = random_state(rng, 2).amplitudes
    s = StateVector(np.kron(a, bc), 2, 3)
    permuted = np.transpose(s.tensor(), perm).reshape(-1)
    t = StateVector(permuted, 2, 3)
    ranks = local_ranks(s)
    assert local_ranks(t) == tuple(ranks[p] for p in perm)


def random_unitary(rng):
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / abs(np.diag(r)))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31))
def test_tangle_local_unitary_invariant(seed):
    rng = np.random.default_rng(seed)
    s = random_state(rng, 3)
    out = ilo_apply(s, IloMatrix(tuple(random_unitary(rng) for _ in range(3))))
    assert abs(three_tangle(out) - three_tangle(s)) < 1e-10
