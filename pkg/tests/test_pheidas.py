import pytest
from hypothesis import given, strategies as st

from padicred.pheidas import (
    DivisibilityInstance, NotDivisible, admissible_pairs, brute_force_divp, check_identity, format_table,
    lemma_table, witness_alpha,
)
from padicred.structures.finite import BudgetExceeded
from padicred.structures.truncpoly import TruncPoly


def T(p, N, *cs):
    return TruncPoly.from_coeffs(p, N, cs)


def test_instance_bounds():
    with pytest.raises(ValueError):
        DivisibilityInstance(2, 9, 1, 3)    # 3m = 9 is not < 9
    with pytest.raises(ValueError):
        DivisibilityInstance(2, 20, 3, 2)
    inst = DivisibilityInstance(3, 30, 1, 9)
    assert inst.divisible and inst.s == 2
    assert DivisibilityInstance(2, 20, 2, 3).s is None


def test_witness_examples():
    assert witness_alpha(DivisibilityInstance(2, 8, 1, 2)) == TruncPoly.t(2, 8)
    assert witness_alpha(DivisibilityInstance(2, 16, 1, 4)) == T(2, 16, 0, 0, *([1] * 14))
    assert witness_alpha(DivisibilityInstance(2, 8, 2, 2)) == TruncPoly.one(2, 8)
    with pytest.raises(NotDivisible):
        witness_alpha(DivisibilityInstance(2, 10, 1, 3))


def test_check_identity_examples():
    assert check_identity(DivisibilityInstance(2, 8, 1, 2), TruncPoly.t(2, 8))
    assert not check_identity(DivisibilityInstance(2, 8, 1, 2), TruncPoly.zero(2, 8))
    assert check_identity(DivisibilityInstance(2, 8, 2, 2), TruncPoly.one(2, 8))
    with pytest.raises(ValueError):
        check_identity(DivisibilityInstance(2, 8, 1, 2), TruncPoly.t(3, 8))


def test_brute_force_examples():
    assert brute_force_divp(DivisibilityInstance(2, 10, 1, 2)) is not None
    assert brute_force_divp(DivisibilityInstance(2, 10, 1, 3)) is None
    hit = brute_force_divp(DivisibilityInstance(2, 10, 2, 2))
    assert hit is not None and check_identity(DivisibilityInstance(2, 10, 2, 2), hit)
    with pytest.raises(BudgetExceeded):
        brute_force_divp(DivisibilityInstance(2, 24, 1, 2), budget=1 << 20)


def test_lemma_table_examples():
    rows = lemma_table(2, 10)
    assert [(r.n, r.m) for r in rows] == [(1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)]
    assert all(r.agrees for r in rows)
    assert {(r.n, r.m) for r in rows if r.witness_exists} == {(1, 1), (1, 2), (2, 2), (3, 3)}
    rows3 = {(r.n, r.m): r for r in lemma_table(3, 10)}
    assert rows3[(1, 3)].witness_exists and not rows3[(1, 2)].witness_exists
    # N=4 admits only n=m=1
    assert [(r.n, r.m) for r in lemma_table(2, 4)] == [(1, 1)]
    assert "agree" in format_table(rows).splitlines()[0]


def test_admissible_pair_count():
    assert len(admissible_pairs(16)) == 15
    with pytest.raises(BudgetExceeded):
        lemma_table(7, 30)


@pytest.mark.parametrize("N", range(7, 13))
def test_biconditional_small(N):
    for r in lemma_table(2, N):
        assert r.agrees, (r.n, r.m)
        if r.witness is not None:
            assert check_identity(DivisibilityInstance(2, N, r.n, r.m), r.witness)


@given(st.sampled_from([2, 3, 5]), st.integers(1, 4), st.integers(0, 3))
def test_constructed_witness(p, n, s):
    m = n * p ** s
    inst = DivisibilityInstance(p, 3 * m + 1, n, m)
    a = witness_alpha(inst)
    assert check_identity(inst, a)
    if s >= 1:
        assert a.valuation() == m // p


@given(st.sampled_from([2, 3]), st.integers(1, 3), st.integers(1, 3))
def test_untruncated_shadow(p, n, s):
    # compute the witness at 2N and read the identity below t^N
    m = n * p ** s
    N = 3 * m + 1
    a2 = witness_alpha(DivisibilityInstance(p, 2 * N, n, m))
    one = TruncPoly.one(p, 2 * N)
    lhs = a2 ** p * (TruncPoly.monomial(p, 2 * N, n) - TruncPoly.monomial(p, 2 * N, m))
    rhs = TruncPoly.monomial(p, 2 * N, n + m) * (one - a2 ** (p - 1))
    assert lhs.coeffs[:N] == rhs.coeffs[:N]
    a = witness_alpha(DivisibilityInstance(p, N, n, m))
    assert a2.coeffs[:N] == a.coeffs
