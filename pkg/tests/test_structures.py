import itertools
import random

import pytest
from hypothesis import assume, given, settings, strategies as st

from padicred.logic.generate import FormulaGenerator
from padicred.logic.sexpr import parse_formula
from padicred.logic.signature import L_PDIV, L_TP
from padicred.logic.syntax import Exists, Forall, Not, Var
from padicred.logic.transform import nnf
from padicred.structures.finite import INF, BudgetExceeded, FiniteStructure, ScalarEvaluator, eval_sentence
from padicred.structures.models import (
    IModel, TruncPolyRingModel, all_coeff_vectors, divides_p, i_divp, i_oplus, power_to_index,
)
from padicred.structures.truncpoly import ModulusMismatch, TruncPoly, is_power_of_t, poly_arith
from padicred.structures.vector import VectorEvaluator


def P(p, N, *coeffs):
    return TruncPoly.from_coeffs(p, N, coeffs)


def polys(p, N):
    return st.lists(st.integers(0, p - 1), min_size=N, max_size=N).map(lambda c: TruncPoly(p, N, tuple(c)))


ring_params = st.sampled_from([(p, N) for p in (2, 3, 5) for N in (1, 2, 5, 9, 16)])


# -- arithmetic


def test_poly_arith_examples():
    one_t = P(2, 4, 1, 1)
    assert poly_arith("mul", one_t, one_t) == P(2, 4, 1, 0, 1)
    assert poly_arith("mul", TruncPoly.monomial(2, 4, 2), TruncPoly.monomial(2, 4, 3)).is_zero()
    assert poly_arith("add", P(2, 4, 1, 1, 1), one_t) == TruncPoly.monomial(2, 4, 2)
    assert poly_arith("pow", one_t, 2) == P(2, 4, 1, 0, 1)


def test_modulus_mismatch():
    with pytest.raises(ModulusMismatch):
        P(2, 4, 1) + P(2, 5, 1)
    with pytest.raises(ModulusMismatch):
        P(2, 4, 1) * P(3, 4, 1)


def test_str_and_inverse():
    assert str(P(3, 4, 2, 0, 1)) == "2 + t^2"
    u = P(3, 6, 2, 1, 0, 2)
    assert u * u.inverse() == TruncPoly.one(3, 6)
    with pytest.raises(ZeroDivisionError):
        TruncPoly.t(3, 6).inverse()


@given(st.data(), ring_params)
@settings(max_examples=300, deadline=None)
def test_ring_axioms(data, pN):
    p, N = pN
    a, b, c = (data.draw(polys(p, N)) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a and a + b == b + a
    assert a + (-a) == TruncPoly.zero(p, N)
    assert a * TruncPoly.one(p, N) == a


@given(st.data(), ring_params)
@settings(max_examples=300, deadline=None)
def test_frobenius(data, pN):
    p, N = pN
    a, b = data.draw(polys(p, N)), data.draw(polys(p, N))
    assert (a + b) ** p == a ** p + b ** p


@pytest.mark.parametrize("N", [1, 4, 9])
def test_power_of_t_monoid(N):
    for i, j in itertools.product(range(N), repeat=2):
        prod = TruncPoly.monomial(2, N, i) * TruncPoly.monomial(2, N, j)
        assert prod == (TruncPoly.monomial(2, N, i + j) if i + j < N else TruncPoly.zero(2, N))
        assert is_power_of_t(prod)


def test_is_power_of_t_examples():
    assert is_power_of_t(TruncPoly.monomial(2, 8, 3))
    assert not is_power_of_t(P(2, 8, 1, 1))
    assert is_power_of_t(TruncPoly.zero(2, 8))


@pytest.mark.parametrize("n", range(1, 13))
def test_power_monoid_isomorphic_to_I(n):
    R = TruncPolyRingModel(2, n)
    Ps = R.power_set()
    assert len(Ps) == n + 1
    images = [power_to_index(x) for x in Ps]
    assert sorted(images, key=lambda v: (v == INF, v)) == list(range(n)) + [INF]
    assert power_to_index(TruncPoly.one(2, n)) == 0
    for x, y in itertools.product(Ps, repeat=2):
        assert power_to_index(x * y) == i_oplus(n, power_to_index(x), power_to_index(y))


def test_ring_model_shape():
    R = TruncPolyRingModel(3, 3)
    assert len(R.domain("R")) == 27
    assert R.domain("R")[0] == TruncPoly.zero(3, 3)
    assert all_coeff_vectors(2, 2).tolist() == [[0, 0], [0, 1], [1, 0], [1, 1]]


# -- I_n


def test_i_oplus_examples():
    assert i_oplus(8, 3, 4) == 7
    assert i_oplus(8, 5, 5) == INF
    assert i_oplus(8, INF, 0) == INF
    with pytest.raises(ValueError):
        i_oplus(8, 8, 0)


def test_i_divp_examples():
    assert i_divp(10, 2, 1, 2)
    assert not i_divp(10, 2, 1, 4)
    assert not i_divp(10, 2, 2, 3)
    assert not i_divp(10, 2, 0, 0)
    assert divides_p(0, 0, 2) and not divides_p(0, 3, 2)


@given(st.integers(1, 40), st.data())
def test_i_oplus_laws(n, data):
    el = st.sampled_from(list(range(n)) + [INF])
    x, y, z = data.draw(el), data.draw(el), data.draw(el)
    assert i_oplus(n, x, y) == i_oplus(n, y, x)
    assert i_oplus(n, i_oplus(n, x, y), z) == i_oplus(n, x, i_oplus(n, y, z))
    assert i_oplus(n, x, 0) == x
    s = i_oplus(n, x, y)
    assert s == (x + y if x != INF and y != INF and x + y < n else INF)


# -- evaluation


def test_eval_examples():
    I6 = IModel(6, 2)
    phi = parse_formula("(exists ((x D)) (= (add x x) 2))", L_PDIV)
    assert eval_sentence(I6, phi, engine="scalar") and eval_sentence(I6, phi, engine="vector")
    nil = parse_formula("(exists ((x R)) (and (= (mul x x) zero) (not (= x zero))))", L_TP)
    sq = parse_formula("(forall ((x R)) (or (= (mul x x) zero) (= (mul x x) one)))", L_TP)
    for engine in ("scalar", "vector"):
        assert eval_sentence(TruncPolyRingModel(2, 3), nil, engine=engine)
        assert eval_sentence(TruncPolyRingModel(2, 2), sq, engine=engine)
        assert not eval_sentence(TruncPolyRingModel(2, 1), nil, engine=engine)
        assert not eval_sentence(TruncPolyRingModel(3, 2), sq, engine=engine)


def test_eval_rejects_open_and_foreign():
    from padicred.logic.syntax import FreeVariableError, SortError
    I6 = IModel(6, 2)
    with pytest.raises(FreeVariableError):
        eval_sentence(I6, parse_formula("(= x one)", L_PDIV, free={"x": "D"}))
    with pytest.raises((SortError, ValueError)):
        eval_sentence(I6, parse_formula("(exists ((x R)) (P x))", L_TP))


def test_scalar_budget():
    R = TruncPolyRingModel(2, 8)
    phi = parse_formula("(forall ((x R) (y R) (z R)) (= (mul x (mul y z)) (mul (mul x y) z)))", L_TP)
    with pytest.raises(BudgetExceeded):
        ScalarEvaluator(R, budget=1000).holds(phi)


def _random_structure(rng):
    if rng.random() < 0.5:
        return IModel(rng.randint(1, 7), rng.choice([2, 3]))
    return TruncPolyRingModel(rng.choice([2, 3]), rng.randint(1, 3))


@pytest.mark.parametrize("seed", range(0, 500, 5))
def test_de_morgan_and_quantifier_duality(seed):
    rng = random.Random(seed)
    S = _random_structure(rng)
    phi = FormulaGenerator(S.signature, rng).sentence()
    v = eval_sentence(S, phi)
    assert eval_sentence(S, Not(phi)) == (not v)
    assert eval_sentence(S, nnf(Not(phi))) == (not v)
    assert eval_sentence(S, nnf(phi)) == v
    if isinstance(phi, Exists):
        assert v == (not eval_sentence(S, Forall(phi.var, Not(phi.body))))
    elif isinstance(phi, Forall):
        assert v == (not eval_sentence(S, Exists(phi.var, Not(phi.body))))


@pytest.mark.parametrize("seed", range(120))
def test_vector_engine_matches_scalar(seed):
    rng = random.Random(1000 + seed)
    S = _random_structure(rng)
    phi = FormulaGenerator(S.signature, rng).sentence()
    assert eval_sentence(S, phi, engine="vector") == eval_sentence(S, phi, engine="scalar")


def test_generic_structure_without_backend():
    # an arbitrary finite structure uses the scalar engine under "auto"
    S = FiniteStructure(
        signature=L_PDIV, domains={"D": [0, 1, 2]},
        constants={"zero": 0, "one": 1, "inf": 2},
        functions={"add": lambda a, b: (a + b) % 3}, relations={"divp": lambda a, b: a == b},
        name="Z/3",
    )
    phi = parse_formula("(forall ((x D)) (exists ((y D)) (= (add x y) zero)))", L_PDIV)
    assert eval_sentence(S, phi)
    with pytest.raises(ValueError):
        eval_sentence(S, phi, engine="vector")
