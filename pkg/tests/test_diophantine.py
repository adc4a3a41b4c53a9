import pytest
from hypothesis import given, strategies as st

from padicred.diophantine import (
    DiophSystem, SystemFormatError, check_claim, encode_system, example_suite, format_system,
    full_pipeline, load_system, norm_inf, parse_system, pipeline_stages, relativize_to_residue,
    residue_is_prime_field, solve_naive,
)
from padicred.interpretations import ComplexityError, gamma_interpretation, reduce_formula
from padicred.logic.sexpr import parse_formula, to_sexpr
from padicred.logic.signature import L_VAL_X
from padicred.logic.syntax import Var
from padicred.logic.transform import classify, is_existential
from padicred.structures.finite import eval_sentence
from padicred.structures.models import IModel, TruncPolyRingModel

SUITE = {S.name: S for S in example_suite()}
X1 = SUITE["x+1=2"]


# -- norms


def test_norm_examples():
    assert norm_inf([[1, 2], [3, 4]]) == 7
    assert norm_inf([[0, 0], [0, 0]]) == 0
    assert norm_inf([[5], [1], [2]]) == 5
    assert norm_inf([]) == 0


def matrices(rows, cols):
    return st.lists(st.lists(st.integers(-20, 20), min_size=cols, max_size=cols), min_size=rows, max_size=rows)


@given(st.data(), st.integers(1, 4), st.integers(1, 4), st.integers(1, 4))
def test_norm_sub_additive_and_multiplicative(data, r, c, k):
    A, B = data.draw(matrices(r, c)), data.draw(matrices(r, c))
    C = data.draw(matrices(c, k))
    S = [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]
    AC = [[sum(A[i][j] * C[j][l] for j in range(c)) for l in range(k)] for i in range(r)]
    assert norm_inf(S) <= norm_inf(A) + norm_inf(B)
    assert norm_inf(AC) <= norm_inf(A) * norm_inf(C)


# -- systems and files


def test_system_validation():
    with pytest.raises(ValueError):
        DiophSystem(1, A1=((1, 2),), b1=(0,), A2=((0,),), b2=(0,))
    with pytest.raises(ValueError):
        DiophSystem.build(1, [((-1,), 0, (0,), 0)])
    assert SUITE["empty"].M == 0


def test_file_round_trip(tmp_path):
    for S in example_suite():
        text = format_system(S)
        T = parse_system(text, S.name)
        assert T == S
        path = tmp_path / f"s{S.n}.dio"
        path.write_text(text)
        assert load_system(path).equations() == S.equations()


def test_file_with_comments():
    S = parse_system("# demo\nvars: 2\n\neq: 1 0 | 1 = 0 1 | 0   # x1+1 = x2\ndiv: 1 0 | 0 |p 0 1 | 0\n")
    assert S.n == 2 and S.satisfied((1, 2), 2) and not S.satisfied((2, 3), 2)


@pytest.mark.parametrize("text,line", [
    ("vars: 1\neq: 1 | 1 = 0 | 2\ndiv: 1 | 0 | 1 | 0\n", 3),
    ("eq: 1 | 1 = 0 | 2\n", 1),
    ("vars: 1\n\neq: 1 1 | 1 = 0 | 2\n", 3),
    ("vars: 1\neq: 1 | x = 0 | 2\n", 2),
    ("vars: 2\nvars: 2\n", 2),
    ("vars: 1\nfoo: 1\n", 2),
])
def test_file_errors_name_the_line(text, line):
    with pytest.raises(SystemFormatError) as exc:
        parse_system(text)
    assert exc.value.line == line and f"line {line}" in str(exc.value)


def test_missing_vars_line():
    with pytest.raises(SystemFormatError, match="vars"):
        parse_system("# nothing\n")


# -- encoding


def test_encode_examples():
    enc = encode_system(X1)
    assert enc.M == 2
    assert to_sexpr(enc.sentence) == "(exists ((x D)) (and (= (add x 1) 2) (not (= (times 6 x) inf))))"
    assert enc.prenex_class == "E"
    enc1 = encode_system(SUITE["1|x,x=4"])
    assert "(divp 1 x)" in to_sexpr(enc1.sentence)
    enc0 = encode_system(SUITE["empty"])
    assert enc0.M == 0 and to_sexpr(enc0.sentence) == "(exists ((x D)) (not (= (times 0 x) inf)))"


def test_solve_naive_examples():
    assert solve_naive(X1, 8) == (1,)
    assert solve_naive(SUITE["x+x=1"], 8) is None
    assert solve_naive(SUITE["1|x,x=4"], 8) == (4,)
    assert solve_naive(SUITE["1|x,x=3"], 8) is None
    assert solve_naive(SUITE["1|x,x=3"], 8, p=3) == (3,)


def test_check_claim_examples():
    r = check_claim(X1, 2, 20)
    assert r.ok and r.forward.status == "PASS" and r.backward.status == "PASS"
    r = check_claim(SUITE["x+x=1"], 2, 20)
    assert r.ok and not r.holds_in_I and r.backward.status == "VACUOUS"
    # M = 4, so the solution x = 4 needs N > 3·4·4 = 48: both directions are vacuous at N = 30
    r = check_claim(SUITE["1|x,x=4"], 2, 30)
    assert r.ok and r.M == 4 and r.forward.status == "VACUOUS" and "3·M·m < N" in r.forward.detail
    assert [line.split()[0] for line in r.lines()[1:]] == ["PASS", "PASS"]
    r = check_claim(SUITE["1|x,x=4"], 2, 49)
    assert r.ok and r.forward.status == "PASS" and "3·M·max(m,1)=48 < N=49" in r.forward.detail
    assert all(line.split()[0] in ("PASS", "system=x+1=2") for line in check_claim(X1, 2, 20).lines())


@pytest.mark.parametrize("name", sorted(SUITE))
def test_check_claim_suite(name):
    for N in (1, 7, 13, 20, 30):
        assert check_claim(SUITE[name], 2, N).ok, check_claim(SUITE[name], 2, N).lines()


def test_zero_divides_zero_divergence():
    # in ℕ, x = 0 solves {x |_p x, x + x = x}; in I_N the relation needs x ≥ 1
    S = DiophSystem.build(1, [((2,), 0, (1,), 0)], [((1,), 0, (1,), 0)], name="x|x,x+x=x")
    assert solve_naive(S, 5) == (0,)
    r = check_claim(S, 2, 20)
    assert not r.holds_in_I and r.forward.status == "FAIL"


# -- relativisation and pipeline


def test_relativize_examples():
    phi = parse_formula("(exists ((x K)) (= x zero))", L_VAL_X)
    out = relativize_to_residue(phi, 2)
    assert to_sexpr(out) == "(exists ((z k) (x K)) (or (not (= (pow z 2) z)) (= x zero)))"
    assert classify(out) == "E"
    psi = parse_formula("(exists ((x K)) (forall ((y K)) (= (mul x y) zero)))", L_VAL_X)
    assert classify(relativize_to_residue(psi, 2)) == "EA"
    assert classify(residue_is_prime_field(3, Var("z", "k"))) == "A"


def test_relativize_avoids_capture_and_rejects_AE():
    phi = parse_formula("(exists ((z K)) (= z zero))", L_VAL_X)
    out = relativize_to_residue(phi, 2)
    assert "(z0 k)" in to_sexpr(out)
    bad = parse_formula("(forall ((x K)) (exists ((y K)) (= x y)))", L_VAL_X)
    with pytest.raises(ComplexityError, match="∀∃"):
        relativize_to_residue(bad, 2)


def test_relativize_semantics_in_prime_residue_field():
    # with k = F_p the premise holds, so the relativised sentence agrees with φ
    from padicred.valued_field import bounded_eval, make_field
    M = make_field(2, n=2, k=2)
    for text in ("(exists ((x K)) (= (mul x x) (add one one)))", "(forall ((x K)) (= x zero))"):
        phi = parse_formula(text, L_VAL_X)
        assert bool(bounded_eval(M, relativize_to_residue(phi, 2))) == bool(bounded_eval(M, phi))


def test_guard_translation():
    g = reduce_formula(gamma_interpretation(2), encode_system(X1).sentence, shortcut=True)
    assert "(not (= (pow x 6) zero))" in to_sexpr(g)


@pytest.mark.parametrize("name", sorted(SUITE))
def test_pipeline_class(name):
    st_ = pipeline_stages(SUITE[name], 2)
    assert is_existential(st_.gamma)
    assert classify(st_.delta_EA).within("EA")
    assert classify(full_pipeline(SUITE[name], 2)).within("EA")


@pytest.mark.parametrize("name", sorted(SUITE))
def test_stage_equivalence(name):
    S = SUITE[name]
    st_ = pipeline_stages(S, 2)
    for N in range(1, 13):
        assert eval_sentence(IModel(N, 2), st_.encoded) == eval_sentence(TruncPolyRingModel(2, N), st_.gamma), N


def test_pipeline_deterministic():
    assert to_sexpr(full_pipeline(X1, 2)) == to_sexpr(full_pipeline(X1, 2))
