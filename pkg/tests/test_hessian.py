"""Trace-free quadratic forms, spectral certificates, conformal values.

Term matrices are checked against explicit loop sums, the assembled
remainder against hand-expanded coefficient values, and the certified
minimal eigenvalues against pinned constants for every compact family.
"""

import numpy as np
import pytest

from crosscurv.models import NoSpectralDataError, build_model
from crosscurv.hessian import (
    QuadForm,
    TERM_KEYS,
    UnsupportedExponentError,
    assemble_quadform,
    assemble_tt_remainder,
    compact_tt_coefficients,
    conformal_value,
    family_bound_form,
    hp_scale,
    min_eigen_tt,
    noncompact_tt_coefficients,
    stability_verdict,
    term_matrix,
    tt_basis,
)

RNG = np.random.default_rng(7)


def _random_tt(n):
    h = RNG.standard_normal((n, n))
    h = 0.5 * (h + h.T)
    return h - np.trace(h) / n * np.eye(n)


@pytest.mark.parametrize("n", [3, 4, 5, 16])
def test_tt_basis_orthonormal_symmetric_tracefree(n):
    B = tt_basis(n)
    dim = n * (n + 1) // 2 - 1
    assert B.shape == (n * n, dim)
    assert np.allclose(B.T @ B, np.eye(dim), atol=1e-14)
    for col in B.T:
        h = col.reshape(n, n)
        assert np.allclose(h, h.T, atol=1e-15)
        assert abs(np.trace(h)) < 1e-14


def test_tt_dimension_octonionic_plane():
    # n = 16 gives 16*17/2 - 1 = 135 trace-free directions
    assert tt_basis(16).shape[1] == 135


def _term_oracle(model, key, h):
    """Loop-sum evaluation of one basis quantity, independent of kron."""
    n, R = model.n, model.R.entries
    if key == "NORM_H":
        return float(np.sum(h * h))
    if key in ("IP_H_HTILDE", "NORM_HTILDE"):
        ht = np.zeros((n, n))
        for J in model.J.operators:
            ht += J.T @ h @ J
        return float(np.sum(h * ht) if key == "IP_H_HTILDE"
                     else np.sum(ht * ht))
    if key == "NORM_RRING":
        act = np.zeros((n, n))
        for x in range(n):
            for y in range(n):
                act[x, y] = sum(R[i, x, j, y] * h[i, j]
                                for i in range(n) for j in range(n))
        return float(np.sum(act * act))
    if key == "K_PAIR":
        tot = 0.0
        for p in range(n):
            for q in range(n):
                for m in range(n):
                    for u in range(n):
                        tot += h[p, q] * h[m, u] * sum(
                            R[p, i, m, j] * R[q, i, u, j]
                            for i in range(n) for j in range(n))
        return float(tot)
    if key == "RR_KN":
        tot = 0.0
        for p in range(n):
            for q in range(n):
                for m in range(n):
                    for u in range(n):
                        tot += 0.5 * h[p, q] * h[m, u] * sum(
                            R[p, m, i, j] * R[q, u, i, j]
                            for i in range(n) for j in range(n))
        return float(tot)
    raise KeyError(key)


@pytest.mark.parametrize("key", TERM_KEYS)
def test_term_matrix_matches_loop_oracle(key):
    model = build_model("complex", 2, 1.0)
    h = _random_tt(model.n)
    v = h.reshape(-1)
    M = term_matrix(model, key)
    assert np.allclose(M, M.T, atol=1e-12) or key == "K_PAIR"
    got = float(v @ M @ v)
    want = _term_oracle(model, key, h)
    assert abs(got - want) < 1e-9 * max(1.0, abs(want))


def test_term_matrix_unknown_key():
    model = build_model("complex", 2, 1.0)
    with pytest.raises(KeyError):
        term_matrix(model, "NORM_DDH")


def test_assemble_quadform_is_weighted_sum():
    model = build_model("quaternionic", 1, 1.0)
    coeffs = {"NORM_H": 1.5, "K_PAIR": -2.0, "NORM_RRING": 0.25}
    qf = assemble_quadform(model, coeffs, provenance="probe")
    assert qf.provenance == "probe"
    assert qf.dim == model.n * (model.n + 1) // 2 - 1
    h = _random_tt(model.n)
    want = sum(w * _term_oracle(model, k, h) for k, w in coeffs.items())
    assert abs(qf.value(h) - want) < 1e-9 * max(1.0, abs(want))


def test_compact_coefficients_cp2():
    qf = compact_tt_coefficients(build_model("complex", 2, 1.0))
    assert qf == {"K_PAIR": 4.0, "NORM_RRING": -0.5, "NORM_H": 92.0,
                  "IP_H_HTILDE": 40.0, "NORM_HTILDE": -48.0}


def test_noncompact_coefficients_hp2_dual():
    qf = noncompact_tt_coefficients(build_model("quaternionic", 2, -1.0))
    assert qf == {"NORM_RRING": -0.5, "K_PAIR": 4.0, "RR_KN": 2.0,
                  "NORM_H": 406.0, "IP_H_HTILDE": 10.0, "NORM_HTILDE": -12.0}


def test_remainder_regime_guard():
    m = build_model("complex", 2, 1.0)
    with pytest.raises(ValueError):
        assemble_tt_remainder(m, regime="noncompact")
    with pytest.raises(ValueError):
        assemble_tt_remainder(m, regime="bogus")
    assert assemble_tt_remainder(m).provenance == "tt-remainder/compact"
    d = build_model("quaternionic", 2, -1.0)
    assert assemble_tt_remainder(d).provenance == "tt-remainder/noncompact"


# model key -> (pinned minimal eigenvalue of the displayed remainder form)
PINNED_EIG = {
    "sphere5": 25.5,
    "cp2": -4.0,
    "cp3": 20.0,
    "hp2": 288.0,
    "op2": -464.0,
}


def _model(key):
    family, m, nkw = {
        "sphere5": ("sphere", 0, 5),
        "cp2": ("complex", 2, None),
        "cp3": ("complex", 3, None),
        "hp2": ("quaternionic", 2, None),
        "op2": ("octonionic", 2, None),
    }[key]
    return build_model(family, m, 1.0, n=nkw)


@pytest.mark.parametrize("key", sorted(PINNED_EIG))
def test_min_eigen_pinned(key):
    qf = assemble_tt_remainder(_model(key))
    cert = min_eigen_tt(qf, samples=20_000, seed=0)
    assert abs(cert.eig_min - PINNED_EIG[key]) < 1e-8
    assert cert.consistent
    assert abs(cert.rayleigh_min - cert.eig_min) <= 1e-6


def test_sphere_remainder_is_scalar():
    qf = assemble_tt_remainder(_model("sphere5"))
    assert np.allclose(qf.matrix, 25.5 * np.eye(qf.dim), atol=1e-10)
    cert = min_eigen_tt(qf, samples=500, seed=0)
    assert cert.rotations == 0


def test_min_eigen_deterministic():
    qf = assemble_tt_remainder(_model("cp2"))
    a = min_eigen_tt(qf, samples=5_000, seed=3)
    b = min_eigen_tt(qf, samples=5_000, seed=3)
    assert a.rayleigh_min == b.rayleigh_min
    assert a.eig_min == b.eig_min


def test_family_bound_forms():
    import sympy as sp
    R2, n, c = sp.symbols("R2 n c")
    fb = family_bound_form("complex")
    assert sp.simplify(fb["NORM_H"] - (2 * R2 / n + c**2 * (2 * n - 65))) == 0
    assert fb["K_PAIR"] == 4
    lit = family_bound_form("complex", variant="literal")
    # the literal display drops the scale factor on the constant block
    assert sp.simplify(lit["NORM_H"] - (2 * R2 / n + 2 * n - 65)) == 0
    fq = family_bound_form("quaternionic")
    assert sp.simplify(fq["NORM_HTILDE"] - c**2 * (n - 53)) == 0
    fo = family_bound_form("octonionic")
    assert sp.simplify(fo["NORM_H"] - (2 * R2 / n + c**2 * (11 * n + 188))) == 0
    with pytest.raises(ValueError):
        family_bound_form("sphere")
    with pytest.raises(ValueError):
        family_bound_form("complex", variant="bogus")


def test_conformal_values_claimed_and_computed():
    assert conformal_value(_model("sphere5")) == 0
    assert conformal_value(_model("sphere5"), norm_source="computed") == 0
    assert conformal_value(_model("cp2")) == 288
    assert conformal_value(_model("cp2"), norm_source="computed") == 288
    assert conformal_value(_model("hp2")) == -3712
    assert conformal_value(_model("hp2"), norm_source="computed") == -640
    assert conformal_value(_model("op2")) == -184320
    assert conformal_value(_model("op2"), norm_source="computed") == -55296


def test_conformal_explicit_mu_and_errors():
    # q(0) = (4 - n) |R|^2 with the displayed norm
    assert conformal_value(_model("hp2"), mu=0) == -8704
    with pytest.raises(NoSpectralDataError):
        conformal_value(build_model("quaternionic", 2, -1.0))
    with pytest.raises(UnsupportedExponentError):
        conformal_value(_model("cp2"), p=4)


def test_hp_scale():
    assert hp_scale(2, 192.0) == 1.0
    assert hp_scale(4, 192.0) == 2.0 * 192.0
    assert abs(hp_scale(3, 64.0) - 1.5 * 8.0) < 1e-12
    with pytest.raises(ValueError):
        hp_scale(1.5, 192.0)
    with pytest.raises(ValueError):
        hp_scale(4, 0.0)


def test_stability_verdict_sphere():
    sr = stability_verdict(_model("sphere5"), samples=2_000)
    assert sr.tt_verdict == "stable-strict"
    assert abs(sr.epsilon - 25.5) < 1e-9
    assert sr.regime == "compact"
    assert sr.verdict_flags == ["conformal direction exactly neutral"]
    assert sr.conformal["claimed"] == 0


def test_stability_verdict_indefinite_families():
    for key in ("cp2", "op2"):
        sr = stability_verdict(_model(key), samples=2_000)
        assert sr.tt_verdict == "algebraic certificate inconclusive"
        assert sr.epsilon is None
        assert sr.tt_min_eig < 0


def test_stability_verdict_op2_discrepancy_note():
    sr = stability_verdict(_model("op2"), samples=2_000)
    assert any("squared norms differ" in s for s in sr.discrepancy_notes)
    assert sr.conformal["claimed"] == -184320
    assert sr.conformal["computed"] == -55296


def test_stability_verdict_noncompact():
    sr = stability_verdict(build_model("quaternionic", 2, -1.0),
                           samples=2_000)
    assert sr.regime == "noncompact"
    assert sr.tt_verdict == "stable-strict"
    assert abs(sr.epsilon - 456.0) < 1e-8
    assert sr.conformal == {"note": "no spectral reference data for "
                                    "non-compact duals"}


def test_stability_verdict_p4_scales_certificate():
    sr = stability_verdict(_model("sphere5"), p=4, samples=2_000)
    # scale factor (p/2) |R|^(p-2) = 2 * 40 at p = 4 on the 5-sphere
    assert abs(sr.epsilon - 25.5 * 80.0) < 1e-6
    assert sr.tt_verdict == "stable-strict"
    assert "UNAVAILABLE" in sr.conformal["note"]
