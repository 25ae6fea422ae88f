import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hisafe.field import smallest_prime_gt
from hisafe.mvpoly import (
    MvPolynomial,
    TiePolicy,
    construct_mv_polynomial,
    evaluate,
    formula_latency,
    power_schedule,
    reachable_sums,
    replay_schedule,
    split_exponent,
    verify_polynomial,
)
from hisafe.published import COST_TABLE, POLYNOMIAL_TABLE

POLICIES = list(TiePolicy)


def interpolate_oracle(n, policy):
    """Coefficients of the unique degree < p polynomial with the majority-vote
    value table, solved by Gaussian elimination over F_p."""
    p = smallest_prime_gt(n)
    table = {x: 0 for x in range(p)}
    for m in reachable_sums(n):
        table[m % p] = policy.sign(m) % p
    rows = [[pow(x, k, p) for k in range(p)] + [table[x]] for x in range(p)]
    for col in range(p):
        piv = next(r for r in range(col, p) if rows[r][col])
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = pow(rows[col][col], p - 2, p)
        rows[col] = [v * inv % p for v in rows[col]]
        for r in range(p):
            if r != col and rows[r][col]:
                f = rows[r][col]
                rows[r] = [(a - f * b) % p for a, b in zip(rows[r], rows[col])]
    return tuple(rows[k][p] for k in range(p))


@pytest.mark.parametrize("n,policy,terms,p", POLYNOMIAL_TABLE)
def test_published_polynomials(n, policy, terms, p):
    poly = construct_mv_polynomial(n, TiePolicy(policy))
    assert poly.p == p
    assert poly.terms() == terms


def test_published_polynomials_fast():
    t0 = time.perf_counter()
    for n, policy, _, _ in POLYNOMIAL_TABLE:
        construct_mv_polynomial(n, TiePolicy(policy))
    assert time.perf_counter() - t0 < 1.0


@pytest.mark.parametrize("policy", POLICIES)
@pytest.mark.parametrize("n", range(2, 41))
def test_verify_and_oracle(n, policy):
    poly = construct_mv_polynomial(n, policy)
    assert verify_polynomial(poly)
    assert poly.coeffs == interpolate_oracle(n, policy)


@pytest.mark.parametrize("n", range(3, 40, 2))
def test_odd_n_policy_independent(n):
    polys = [construct_mv_polynomial(n, pol) for pol in POLICIES]
    assert polys[0].coeffs == polys[1].coeffs == polys[2].coeffs


@pytest.mark.parametrize("n", range(3, 30, 2))
def test_odd_n_polynomial_is_odd_function(n):
    poly = construct_mv_polynomial(n)
    assert all(c == 0 for k, c in poly.terms().items() if k % 2 == 0)


def test_mutated_coefficient_fails_verification():
    poly = construct_mv_polynomial(6)
    for k in range(poly.p):
        coeffs = list(poly.coeffs)
        coeffs[k] = (coeffs[k] + 1) % poly.p
        bad = MvPolynomial(poly.n, poly.modulus, poly.policy, tuple(coeffs))
        assert not verify_polynomial(bad)


@pytest.mark.parametrize(
    "n,policy,x,expected",
    [
        (3, TiePolicy.RESOLVE_TO_MINUS, 1, 1),
        (3, TiePolicy.RESOLVE_TO_MINUS, -3, -1),
        (4, TiePolicy.RESOLVE_TO_MINUS, 0, -1),
        (4, TiePolicy.RESOLVE_TO_PLUS, 0, 1),
        (4, TiePolicy.ZERO_STATE, 0, 0),
        (4, TiePolicy.RESOLVE_TO_MINUS, -4, -1),
        (4, TiePolicy.RESOLVE_TO_MINUS, 2, 1),
        (24, TiePolicy.RESOLVE_TO_MINUS, 2, 1),
    ],
)
def test_evaluate_examples(n, policy, x, expected):
    assert evaluate(construct_mv_polynomial(n, policy), x) == expected


def test_evaluate_rejects_unreachable_sums():
    poly = construct_mv_polynomial(3)
    for x in (0, 2, 5, -5):
        with pytest.raises(ValueError):
            evaluate(poly, x)


def test_construct_rejects_small_n():
    with pytest.raises(ValueError):
        construct_mv_polynomial(1)


def test_split_exponent():
    assert split_exponent(2) == (1, 1)
    assert split_exponent(3) == (1, 2)
    assert split_exponent(5) == (1, 4)
    assert split_exponent(12) == (4, 8)
    with pytest.raises(ValueError):
        split_exponent(1)


def test_schedule_n3():
    s = construct_mv_polynomial(3).schedule
    assert [(g.target, g.left, g.right) for g in s.gates] == [(2, 1, 1), (3, 1, 2)]
    assert s.R == 4
    assert s.schedule_depth == 2
    assert s.formula_latency == 2


def test_schedule_n5_closure():
    s = construct_mv_polynomial(5).schedule
    assert s.targets() == [2, 3, 4, 5]
    assert s.R == 8


def test_schedule_n2():
    assert construct_mv_polynomial(2).schedule.R == 2


@pytest.mark.parametrize("p,expected", [(3, 1), (5, 2), (7, 2), (13, 3), (17, 4), (29, 4), (101, 6)])
def test_formula_latency(p, expected):
    assert formula_latency(p) == expected


@pytest.mark.parametrize("policy", POLICIES)
@pytest.mark.parametrize("n", range(2, 41))
def test_schedule_sound_and_sufficient(n, policy):
    poly = construct_mv_polynomial(n, policy)
    s = power_schedule(poly)
    needed = {k for k in poly.terms() if k >= 2}
    assert needed <= set(s.targets())
    for g in s.gates:
        assert g.left + g.right == g.target
        assert g.left < g.target and g.right < g.target
    for x in range(poly.p):
        powers = replay_schedule(s, x, poly.p)
        for k in s.targets():
            assert powers[k] == pow(x, k, poly.p)
    # layers respect dependencies
    done = {1}
    for layer in s.layers:
        assert all(g.left in done and g.right in done for g in layer)
        done |= {g.target for g in layer}


@pytest.mark.parametrize("row", [r for r in COST_TABLE if 3 <= r.n1 <= 6], ids=lambda r: f"n{r.n}-l{r.l}")
def test_schedule_R_matches_table_small_subgroups(row):
    assert construct_mv_polynomial(row.n1).schedule.R == row.R


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=2, max_value=60), st.sampled_from(POLICIES), st.data())
def test_evaluate_matches_sign(n, policy, data):
    poly = construct_mv_polynomial(n, policy)
    m = data.draw(st.sampled_from(list(reachable_sums(n))))
    assert evaluate(poly, m) == policy.sign(m)
    assert poly.degree <= poly.p - 1
