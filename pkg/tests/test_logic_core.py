import random

import pytest
from hypothesis import given, settings, strategies as st

from padicred.logic.generate import FormulaGenerator, GenConfig
from padicred.logic.sexpr import ParseError, UnknownSymbolError, parse_formula, pretty, to_sexpr
from padicred.logic.signature import (
    L_PDIV, L_TP, L_VAL_X, SIGNATURES, Signature, SignatureError, get_signature, load_signature,
)
from padicred.logic.syntax import (
    And, App, Const, Eq, Exists, Forall, FreeVariableError, Not, Rel, SortError, Var, check_formula,
    iter_atoms, quantifier_depth,
)
from padicred.logic.transform import (
    PrenexClass, classify, is_unnested, is_unnested_atom, prefix_class, prenex_classify, unnest,
)
from padicred.structures.finite import eval_sentence
from padicred.structures.models import IModel, TruncPolyRingModel

R = "R"
x, y, z, w = (Var(n, R) for n in "xyzw")


# -- parsing


def test_parse_square_equals_t():
    phi = parse_formula("(exists ((x R)) (= (mul x x) t))", L_TP)
    assert phi == Exists(x, Eq(App("mul", (x, x), R), Const("t", R)))


def test_parse_arity_error():
    with pytest.raises(ParseError, match="takes 2 arguments, got 1"):
        parse_formula("(exists ((x R)) (= (mul x) x))", L_TP)


def test_parse_sort_mismatch_names_symbol():
    with pytest.raises(SortError) as exc:
        parse_formula("(= (s zero_G) zero_G)", L_VAL_X)
    assert "zero_G" in str(exc.value) or "s" in str(exc.value)


def test_parse_unknown_symbol():
    with pytest.raises(UnknownSymbolError, match="frob"):
        parse_formula("(exists ((x R)) (= (frob x) x))", L_TP)


def test_parse_error_position():
    with pytest.raises(ParseError) as exc:
        parse_formula("(exists ((x R))\n  (= x t)", L_TP)
    assert exc.value.line is not None


def test_parse_numerals_and_sugar():
    phi = parse_formula("(exists ((x D)) (= (times 6 x) (add 1 2)))", L_PDIV)
    check_formula(phi, L_PDIV)
    assert to_sexpr(phi) == "(exists ((x D)) (= (times 6 x) (add 1 2)))"


def test_pretty_reparses():
    phi = parse_formula("(forall ((x R) (y R)) (implies (P x) (or (= x y) (not (P y)))))", L_TP)
    assert parse_formula(pretty(phi), L_TP) == phi


@given(st.integers(0, 10**9), st.sampled_from(["pdiv", "tP", "valx"]))
@settings(max_examples=500, deadline=None)
def test_print_parse_round_trip(seed, signame):
    sig = SIGNATURES[signame]
    phi = FormulaGenerator(sig, seed, GenConfig(max_qdepth=3, max_quantifiers=4)).sentence()
    assert parse_formula(to_sexpr(phi), sig) == phi


# -- signatures


def test_signature_json_round_trip(tmp_path):
    import json
    path = tmp_path / "sig.json"
    path.write_text(json.dumps(L_TP.to_dict()))
    assert load_signature(path) == L_TP
    assert get_signature(str(path)) == L_TP


def test_signature_rejects_undeclared_sort():
    with pytest.raises(SignatureError):
        Signature("bad", ("A",), {"c": "B"}, {}, {}, {})


# -- unnesting


def test_unnest_leaves_unnested_atom():
    a = Eq(App("mul", (x, y), R), z)
    assert unnest(a, L_TP) == a


def test_unnest_one_level():
    a = Eq(App("add", (App("mul", (x, y), R), z), R), w)
    out = unnest(a, L_TP)
    assert isinstance(out, Exists)
    u = out.var
    assert out.body == And((Eq(App("mul", (x, y), R), u), Eq(App("add", (u, z), R), w)))


def test_unnest_relation_with_constant():
    a = Rel("P", (App("add", (x, Const("one", R)), R),))
    out = unnest(a, L_TP)
    assert quantifier_depth(out) == 2
    assert is_unnested(out)
    atoms = list(iter_atoms(out))
    assert atoms[0] == Eq(atoms[0].lhs, Const("one", R))
    assert isinstance(atoms[-1], Rel)


@given(st.integers(0, 10**9), st.sampled_from(["pdiv", "tP", "valx"]))
@settings(max_examples=200, deadline=None)
def test_unnest_output_is_unnested(seed, signame):
    sig = SIGNATURES[signame]
    phi = FormulaGenerator(sig, seed).sentence()
    out = unnest(phi, sig)
    for a in iter_atoms(out):
        assert is_unnested_atom(a), to_sexpr(a)


# -- prenex


def _A(u, v):
    return Eq(App("add", (u, v), "D"), Const("one", "D"))


def test_prenex_already_prenex():
    xd, yd = Var("x", "D"), Var("y", "D")
    phi = Exists(xd, Forall(yd, _A(xd, yd)))
    out, cls = prenex_classify(phi)
    assert out == phi and cls == "∃∀"


def test_prenex_negated_existential():
    xd = Var("x", "D")
    out, cls = prenex_classify(Not(Exists(xd, Eq(xd, Const("one", "D")))))
    assert cls == "∀"
    assert out == Forall(xd, Not(Eq(xd, Const("one", "D"))))


def test_prenex_hoists_existential_first():
    xd, yd, zd = (Var(n, "D") for n in "xyz")
    phi = Exists(xd, And((Forall(yd, _A(xd, yd)), Exists(zd, _A(xd, zd)))))
    out, cls = prenex_classify(phi)
    assert cls == "∃∀"
    assert [v.name for v in (out.var, out.body.var, out.body.body.var)] == ["x", "z", "y"]
    for n in range(1, 7):
        I = IModel(n, 2)
        assert eval_sentence(I, out) == eval_sentence(I, phi)


def test_prenex_requires_sentence():
    with pytest.raises(FreeVariableError):
        prenex_classify(Eq(x, y))


def test_prenex_class_helpers():
    c = PrenexClass.parse("∃∀")
    assert str(c) == "EA" and c.symbols == "∃∀"
    assert PrenexClass.parse("E").within(c) and PrenexClass("").within(c)
    assert not PrenexClass.parse("AE").within(c)
    assert PrenexClass("EEAA") == "EA"


@given(st.integers(0, 10**9), st.sampled_from(["pdiv", "tP", "valx"]))
@settings(max_examples=200, deadline=None)
def test_class_matches_scanned_prefix(seed, signame):
    sig = SIGNATURES[signame]
    phi = FormulaGenerator(sig, seed, GenConfig(max_qdepth=3, max_quantifiers=4)).sentence()
    out, cls = prenex_classify(phi)
    assert prefix_class(out) == cls
    assert classify(phi) == cls


# -- truth preservation (small structures; the acceptance test runs the full sweep)


@pytest.mark.parametrize("seed", range(40))
def test_unnest_and_prenex_preserve_truth(seed):
    rng = random.Random(seed)
    if seed % 2:
        S = IModel(rng.randint(1, 8), rng.choice([2, 3]))
    else:
        S = TruncPolyRingModel(2, rng.randint(1, 6))
    phi = FormulaGenerator(S.signature, rng).sentence()
    v = eval_sentence(S, phi)
    assert eval_sentence(S, unnest(phi, S.signature)) == v
    assert eval_sentence(S, prenex_classify(phi)[0]) == v
