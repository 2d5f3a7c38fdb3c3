import pytest

from hlvkernels.arith import LaurentPoly, RationalFn, to_laurent, var
from hlvkernels.hlv import (
    HLVConfig,
    coefficient_at,
    compute_hlv,
    delta_v_kernel_recursion,
    grading_filter,
    h_from_omega,
    integrality_report,
    m_basis_table,
    observed_symmetries,
    omega_direct,
    omega_via_operators,
    split_by_degree,
    sym_rec_solve,
)
from hlvkernels.macdonald import (
    S_DEFAULT,
    Shift,
    build_macdonald_table,
    delta_v,
    mac_norm_sq,
    n_lambda_product,
    operator_kernel_log,
)
from hlvkernels.symfunc import SymSeries, sym

q, t, v = var("q"), var("t"), var("v")
S = S_DEFAULT


def test_config_validation():
    with pytest.raises(ValueError):
        HLVConfig(-1, 0, 2)
    cfg = HLVConfig(2, 1, 3)
    assert cfg.u_names == ("u1", "u2") and cfg.alphabets == ("X1",)
    assert cfg.to_json() == {"genus": 2, "punctures": 1, "degree": 3}


def test_omega_low_terms():
    O = omega_direct(HLVConfig(0, 0, 2))
    assert O.coefficient(T=0) == 1
    assert O.coefficient(T=1) == RationalFn(1, mac_norm_sq((1,)))


def test_omega_one_puncture_degree_one():
    O = omega_direct(HLVConfig(0, 1, 2))
    assert O.coefficient(X1=(1,), T=1) == RationalFn(1, (1 - t) * (q - 1))


def test_genus_zero_closed_forms():
    # H~_lam[1] = 1 and the Cauchy identity give H = T, p1[X1] T, p1[X1] p1[X2] T
    H0 = compute_hlv(HLVConfig(0, 0, 3))
    assert H0.terms == {(1,): 1}
    H1 = compute_hlv(HLVConfig(0, 1, 3))
    assert H1.terms == {((1,), 1): 1}
    H2 = compute_hlv(HLVConfig(0, 2, 2))
    assert H2.terms == {((1,), (1,), 1): 1}


def test_pexp_of_h_recovers_omega():
    cfg = HLVConfig(1, 1, 2)
    O = omega_direct(cfg)
    back = h_from_omega(O).scale(RationalFn(1, S)).pexp()
    assert (back - O).map_coefficients(to_laurent).is_zero()


def test_genus_one_first_coefficient():
    # the T^1 term of pLog is the T^1 term of Omega
    H = compute_hlv(HLVConfig(1, 0, 2))
    expected = to_laurent(RationalFn(S * n_lambda_product((1,), "u1"), mac_norm_sq((1,))))
    assert coefficient_at(H, (), 1) == expected
    assert set(expected.variables) == {"q", "t", "u1"}


def test_coefficient_at_edge_cases():
    H = compute_hlv(HLVConfig(1, 1, 2))
    assert coefficient_at(H, [(1,)]) != 0
    assert coefficient_at(H, [()], 0) == 0
    with pytest.raises(ValueError):
        coefficient_at(H, [(3,)])
    with pytest.raises(ValueError):
        coefficient_at(H, [(1,), (1,)])
    H2 = compute_hlv(HLVConfig(0, 2, 2))
    assert coefficient_at(H2, [(1,), (2,)]) == 0
    assert coefficient_at(H2, [(1,), (1,)]) == 1
    H0 = compute_hlv(HLVConfig(1, 0, 2))
    with pytest.raises(ValueError):
        coefficient_at(H0, [])


@pytest.mark.parametrize("g,n,D", [(0, 0, 3), (0, 1, 3), (1, 0, 3), (1, 1, 2), (0, 3, 2), (2, 0, 2)])
def test_integrality(g, n, D):
    rep = integrality_report(HLVConfig(g, n, D))
    assert rep.passed, rep.failures
    assert rep.checked == len(rep.coefficients)
    for _, _, c in rep.coefficients:
        assert c.is_integral()


def test_empty_report():
    rep = integrality_report(HLVConfig(1, 1, 0))
    assert rep.passed and rep.checked == 0 and rep.coefficients == []


def test_fault_injection_detected():
    table = build_macdonald_table(2).perturbed((2,), (1, 1), q)
    rep = integrality_report(HLVConfig(0, 1, 2), table=table)
    assert not rep.passed
    assert all(set(f) == {"lambda_tuple", "tdeg", "reason", "value"} for f in rep.failures)


def test_report_json():
    rep = integrality_report(HLVConfig(1, 1, 2))
    data = rep.to_json()
    assert set(data) == {"config", "coefficients", "integrality", "symmetries"}
    assert data["integrality"] == {"pass": True, "failures": []}
    row = data["coefficients"][0]
    assert set(row) == {"lambda_tuple", "tdeg", "poly"}


def test_observed_symmetries():
    rep = integrality_report(HLVConfig(1, 0, 3))
    assert rep.symmetries == {"u1->1/u1": False, "u1->1/(qtu1)": True}
    assert observed_symmetries([LaurentPoly(1)], ("u1",))["u1->1/u1"]


def test_parallel_matches_serial():
    cfg = HLVConfig(1, 1, 3)
    assert omega_direct(cfg, jobs=3) == omega_direct(cfg)


# symmetric recursion


def test_sym_rec_solve_examples():
    one = SymSeries.scalar(1).with_space(("X",), ())
    assert sym_rec_solve(one, "X", 1) == sym("m", (1,))
    G = sym("m", (1,)) + one
    assert sym_rec_solve(G, "X", 2) == sym("h", (2,))


def test_sym_rec_solve_scalar_coefficients():
    G = SymSeries.scalar(1 - v).with_space(("X",), ())
    assert sym_rec_solve(G, "X", 1) == sym("m", (1,), coeff=1 - v)
    zero = SymSeries(("X",), (), (), {})
    assert sym_rec_solve(zero, "X", 3).is_zero()


def test_sym_rec_solve_rejects():
    with pytest.raises(ValueError):
        sym_rec_solve(sym("m", (2,)), "X", 3)
    with pytest.raises(ValueError):
        sym_rec_solve(sym("m", (2,)), "X", 2)
    with pytest.raises(ValueError):
        sym_rec_solve(sym("m", (1,)), "X", 0)


@pytest.mark.parametrize("lam", [(3,), (2, 1), (1, 1, 1), (2, 2), (3, 1)])
def test_sym_rec_solve_round_trip(lam):
    F = sym("m", lam)
    G = Shift(1)(F) - F
    assert sym_rec_solve(G, "X", sum(lam)) == F


def test_delta_recursion_matches_operator_kernel():
    parts = delta_v_kernel_recursion(4)
    ref = split_by_degree(operator_kernel_log(delta_v("v"), D=4).L, 4)
    assert parts == ref


def test_delta_recursion_low_pieces():
    L1, L2 = delta_v_kernel_recursion(2)
    assert m_basis_table(L1) == {((1,), (1,)): 1 - v}
    assert m_basis_table(L2) == {((1, 1), (1, 1)): v * (v - 1)}


# operator route


def test_grading_filter():
    F = SymSeries(("A", "B"), ("T",), (), {((1,), (2,), 1): 1, ((), (1,), 1): 2, ((2,), (2,), 2): 3, ((1,), (1,), 0): 4})
    kept = grading_filter(F, ("A", "B"))
    assert set(kept.terms) == {((1,), (2,), 1), ((2,), (2,), 2), ((1,), (1,), 0)}


@pytest.mark.parametrize("g,n,D", [(0, 1, 2), (0, 2, 1), (1, 0, 1), (1, 1, 1)])
def test_operator_route_matches_direct(g, n, D):
    cfg = HLVConfig(g, n, D)
    out = omega_via_operators(cfg)
    O = omega_direct(cfg)
    assert out["direct"] == O
    assert out["graphs"] == O


def test_operator_route_needs_an_alphabet():
    with pytest.raises(ValueError):
        omega_via_operators(HLVConfig(0, 0, 2))
