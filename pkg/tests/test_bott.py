import dataclasses
from fractions import Fraction

import pytest

import qcplane.matrixops as mo
from qcplane import algebra, bott, qnormal
from qcplane.algebra import RationalCoefficient, element
from qcplane.errors import ConfigurationError, DomainError
from qcplane.qnormal import TruncationWindow
from qcplane.ratfunc import RationalFunction
from qcplane.represent import represent

HALF = Fraction(1, 2)
SAMPLE_POINTS = [Fraction(0)] + [Fraction(2) ** k for k in range(-12, 13)]


def test_canonical_power_coefficients():
    mode, cf = bott.canonical_power(1, "1/2")
    assert mode == 1
    assert cf.rf.evaluate(1).re == Fraction(1, 2)
    mode, cf = bott.canonical_power(2, "1/2")
    assert mode == 2
    assert cf.rf.evaluate(1).re == Fraction(1, 8)
    mode, cf = bott.canonical_power(-1, "1/2")
    assert mode == -1
    assert cf.rf.evaluate(1).re == 1
    mode, cf = bott.canonical_power(-2, "1/2")
    assert cf.rf.evaluate(1).re == 2
    with pytest.raises(DomainError):
        bott.canonical_power(0, "1/2")


def test_power_element_matches_matrix_powers():
    T = qnormal.build_from_generators("1/2", ["1"], TruncationWindow(-6, 6), exact=True)
    for n in range(1, 5):
        direct = mo.matpow(T.zeta, n)
        rep = represent(bott.power_element(n, "1/2"), T)
        assert mo.max_entry_gap(direct, rep) == 0
        direct_star = mo.matpow(mo.adjoint(T.zeta), n)
        rep_star = represent(bott.power_element(-n, "1/2"), T)
        assert mo.max_entry_gap(direct_star, rep_star) == 0


def test_power_element_adjoint_symmetry():
    pts = [Fraction(1, 4), Fraction(1), Fraction(3)]
    for n in (1, 2, 3):
        a = algebra.adjoint(bott.power_element(n, "1/2"))
        b = bott.power_element(-n, "1/2")
        assert algebra.element_residual(a, b, pts) == 0


def test_projection_entry_values():
    P = bott.bott_projection(1, 1, "1/2")
    (e11, e12), (e21, e22) = P.entries
    assert e11.unit == 0 and e12.unit == 0 and e21.unit == 0
    assert e22.unit == 1

    assert e11.body.coefficient(0).eval_exact(1).re == Fraction(4, 5)
    assert e12.body.coefficient(1).eval_exact(1).re == Fraction(2, 5)
    assert e21.body.coefficient(-1).eval_exact(1).re == Fraction(1, 2)
    # diagonal corner: t^2/(1+t^2) split as unit 1 plus vanishing body
    assert e22.body.coefficient(0).eval_exact(1).re == Fraction(-1, 2)
    assert e22.body.coefficient(0).value_at_zero == -1


def test_projection_mode_layout():
    for n in (1, 2, 3):
        P = bott.bott_projection(n, 1, "2/3")
        (e11, e12), (e21, e22) = P.entries
        assert e11.body.modes == (0,)
        assert e12.body.modes == (n,)
        assert e21.body.modes == (-n,)
        assert e22.body.modes == (0,)
        assert P.mode_span == n
    Pm = bott.bott_projection(2, -1, "2/3")
    assert Pm.entries[0][1].body.modes == (-2,)


def test_projection_offdiagonal_structure():
    for sign in (1, -1):
        P = bott.bott_projection(2, sign, "1/2")
        (e11, e12), (e21, e22) = P.entries
        for e in (e12, e21):
            f = e.body.coefficient(e.body.modes[0])
            assert f.value_at_zero == 0
            assert f.vanishes_at_infinity
        # lower left is the adjoint of the upper right
        adj = algebra.u_adjoint(e12)
        assert algebra.unitized_residual(adj, e21, SAMPLE_POINTS[1:]) == 0


def test_projection_exact_certificate():
    for n in (1, 2):
        for sign in (1, -1):
            P = bott.bott_projection(n, sign, "1/2")
            report = bott.verify_projection_exact(P, SAMPLE_POINTS)
            assert report.max_residue == 0
            assert report.points_checked == len(SAMPLE_POINTS)


def test_projection_exact_flags_scaled_copy():
    P = bott.bott_projection(1, 1, "1/2")
    fake = dataclasses.replace(P, entries=bott.m2_scale(P.entries, 2))
    report = bott.verify_projection_exact(fake, SAMPLE_POINTS)
    assert report.max_residue > 0
    with pytest.raises(DomainError):
        bott.verify_projection_exact(P, [])


def test_projection_numeric_defects():
    T = qnormal.build_from_generators("1/2", ["1"], TruncationWindow(-8, 8))
    for sign in (1, -1):
        rep = bott.verify_projection_numeric(bott.bott_projection(1, sign, "1/2"), T)
        assert rep.max_defect <= 1e-12
    T23 = qnormal.build_from_generators("2/3", ["1"], TruncationWindow(-10, 10))
    rep = bott.verify_projection_numeric(bott.bott_projection(2, 1, "2/3"), T23)
    assert rep.max_defect <= 1e-12


def test_projection_numeric_flags_scaled_copy():
    T = qnormal.build_from_generators("1/2", ["1"], TruncationWindow(-8, 8))
    P = bott.bott_projection(1, 1, "1/2")
    fake = dataclasses.replace(P, entries=bott.m2_scale(P.entries, 2))
    rep = bott.verify_projection_numeric(fake, T)
    assert rep.idempotency_defect > 0.1


def test_projection_numeric_window_guard():
    T = qnormal.build_from_generators("1/2", ["1"], TruncationWindow(-5, 5))
    with pytest.raises(ConfigurationError):
        bott.verify_projection_numeric(bott.bott_projection(3, 1, "1/2"), T)


def test_winding_signs():
    T = qnormal.build_from_generators("1/2", ["1"], TruncationWindow(-8, 8))
    w = {sign: bott.winding_diagnostic(bott.bott_projection(1, sign, "1/2"), T)
         for sign in (1, -1)}
    assert {round(w[1]), round(w[-1])} == {1, -1}
    assert abs(abs(w[1]) - 1) <= 1e-2
    assert abs(abs(w[-1]) - 1) <= 1e-2


def test_winding_flat_reference_is_zero():
    T = qnormal.build_from_generators("1/2", ["1"], TruncationWindow(-6, 6))
    P = bott.bott_projection(1, 1, "1/2")
    flat = dataclasses.replace(P, entries=bott.unitized_diag("1/2", 1, 0))
    assert bott.winding_diagnostic(flat, T) == 0.0


def test_projection_constructor_guards():
    with pytest.raises(DomainError):
        bott.bott_projection(0, 1, "1/2")
    with pytest.raises(DomainError):
        bott.bott_projection(1, 2, "1/2")
    with pytest.raises(DomainError):
        bott.bott_projection(1, 1, "1/1")
    with pytest.raises(DomainError):
        bott.bott_projection(1, 1, "3/2")


def test_split_rejects_nonvanishing_shift_mode():
    bad = element(HALF, {1: RationalCoefficient(RationalFunction.constant(1))})
    with pytest.raises(DomainError):
        bott._split_at_infinity(bad)


def test_projection_report_shape():
    P = bott.bott_projection(2, -1, "1/2")
    data = bott.projection_report(P, "exact", "0/1", 26, None)
    assert data["n"] == 2
    assert data["sign"] == "-"
    assert data["q"] == "1/2"
    assert data["winding_diagnostic"] is None
    data = bott.projection_report(P, "numeric", 0.0, None, 0.5,
                                  extra={"window": "[-8, 8]"})
    assert data["winding_diagnostic"] == {"value": 0.5, "unverified": True}
    assert data["window"] == "[-8, 8]"
