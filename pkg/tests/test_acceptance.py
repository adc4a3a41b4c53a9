"""The seven acceptance criteria, one PASS/FAIL line each.

Run under pytest (lines appear in the -v output) or directly with
``python3 tests/test_acceptance.py``.
"""

import itertools
import random
import sys
import time

import pytest

from padicred.diophantine import (
    check_claim, example_suite, full_pipeline, relativize_to_residue,
)
from padicred.interpretations import (
    delta_interpretation, exists_to_EA, gamma_interpretation, reduce_formula, verify_interpretation,
)
from padicred.logic.generate import FormulaGenerator, GenConfig
from padicred.logic.signature import L_PDIV, L_TP
from padicred.logic.sexpr import to_sexpr
from padicred.logic.transform import classify, prenex_classify, unnest
from padicred.pheidas import DivisibilityInstance, check_identity, lemma_table, witness_alpha
from padicred.structures.finite import eval_sentence
from padicred.structures.models import IModel, TruncPolyRingModel
from padicred.structures.truncpoly import TruncPoly
from padicred.valued_field import make_field, mod_p_reduce


def _line(k, ok, seconds, detail):
    return f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail} ({seconds:.1f}s)"


def criterion_1():
    checked, bad = 0, []
    for p, Ns in ((2, range(7, 17)), (3, range(7, 11))):
        for N in Ns:
            for r in lemma_table(p, N):
                checked += 1
                if not r.agrees:
                    bad.append((p, N, r.n, r.m))
    return not bad, f"brute-force witness existence = n|_p m on {checked} (p,N,n,m) cases, disagreements={bad}"


def criterion_2():
    checked, bad = 0, []
    for p, n, s in itertools.product((2, 3, 5), range(1, 5), range(0, 4)):
        m = n * p ** s
        inst = DivisibilityInstance(p, 3 * m + 1, n, m)
        a = witness_alpha(inst)
        ok = check_identity(inst, a) and (s == 0 or a.valuation() == n * p ** (s - 1))
        checked += 1
        if not ok:
            bad.append((p, n, s))
    return not bad, f"constructed witness satisfies identity and valuation on {checked} cases, failures={bad}"


def criterion_3():
    atom_fail = []
    for p in (2, 3):
        G = gamma_interpretation(p)
        for n in range(4, 11):
            rep = verify_interpretation(G, IModel(n, p), TruncPolyRingModel(p, n))
            if not rep.ok:
                atom_fail.append((p, n, [e.key for e in rep.failures()]))
    rng = random.Random(2024)
    sent_fail, cfg = [], GenConfig(max_qdepth=2, max_quantifiers=3)
    gammas = {p: gamma_interpretation(p) for p in (2, 3)}
    for i in range(200):
        p = (2, 3)[i % 2]
        n = rng.randint(4, 10)
        phi = FormulaGenerator(L_PDIV, rng, cfg).sentence()
        if eval_sentence(IModel(n, p), phi) != eval_sentence(TruncPolyRingModel(p, n), reduce_formula(gammas[p], phi)):
            sent_fail.append((p, n, to_sexpr(phi)))
    ok = not atom_fail and not sent_fail
    return ok, (f"atomic tables exhaustive for p∈{{2,3}}, n=4..10 (failures={atom_fail}); "
                f"200 sentences end-to-end, failures={len(sent_fail)}")


def criterion_4():
    fails = []
    for p in (2, 3):
        D = delta_interpretation(p)
        for n in range(2, 7):
            M = make_field(p, n=n, k=2)
            rep = verify_interpretation(D, TruncPolyRingModel(p, n), M, lifts=100, seed=n)
            if not rep.ok or any(e.lifts_checked != 100 for e in rep.entries):
                fails.append(("table", p, n, [e.key for e in rep.failures()]))
            reps = [M.element(c) for c in itertools.product(range(p), repeat=n)]
            if len({mod_p_reduce(x) for x in reps}) != p ** n:
                fails.append(("surjective", p, n))
            if mod_p_reduce(M.pi()) != TruncPoly.t(p, n):
                fails.append(("pi", p, n))
            pairs = reps if p ** (2 * n) <= 5000 else random.Random(n).sample(reps, 70)
            for x, y in itertools.product(pairs, repeat=2):
                if (mod_p_reduce(x + y) != mod_p_reduce(x) + mod_p_reduce(y)
                        or mod_p_reduce(x * y) != mod_p_reduce(x) * mod_p_reduce(y)):
                    fails.append(("hom", p, n))
                    break
    return not fails, f"Δ entries over residues + 100 lifts, reduction homomorphism, p∈{{2,3}}, n=2..6, failures={fails}"


def criterion_5():
    suite = example_suite()
    fails = []
    for S in suite:
        for N in range(1, 31):
            rep = check_claim(S, 2, N)
            if not rep.ok:
                fails.append((S.name, N))
    return len(suite) >= 10 and not fails, f"{len(suite)} systems × N=1..30 both directions, failures={fails}"


def criterion_6():
    gen = FormulaGenerator(L_TP, 61, GenConfig(max_quantifiers=3))
    bad = []
    for _ in range(100):
        phi = gen.sentence(existential=True)
        out = exists_to_EA(phi, p=2)
        if not classify(out).within("EA"):
            bad.append(("ea", to_sexpr(phi)))
        elif not classify(relativize_to_residue(out, 2)).within("EA"):
            bad.append(("rel", to_sexpr(phi)))
    for S in example_suite():
        if classify(full_pipeline(S, 2)) != "EA":
            bad.append(("pipeline", S.name))
    return not bad, f"100 random existentials + relativisation + {len(example_suite())} pipelines classify ∃∀, misclassified={len(bad)}"


def criterion_7():
    rng = random.Random(7)
    bad = []
    for i in range(500):
        if i % 2 == 0:
            S = IModel(rng.randint(1, 8), rng.choice((2, 3)))
        else:
            p = rng.choice((2, 3))
            S = TruncPolyRingModel(p, rng.randint(1, 8 if p == 2 else 5))
        phi = FormulaGenerator(S.signature, rng).sentence()
        v = eval_sentence(S, phi)
        if eval_sentence(S, unnest(phi, S.signature)) != v or eval_sentence(S, prenex_classify(phi)[0]) != v:
            bad.append((S.name, to_sexpr(phi)))
    return not bad, f"500 sentences, verdicts of φ / unnest(φ) / prenex(φ) agree, failures={len(bad)}"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7]


def _run(k):
    start = time.perf_counter()
    ok, detail = CRITERIA[k - 1]()
    return ok, _line(k, ok, time.perf_counter() - start, detail)


@pytest.mark.parametrize("k", range(1, 8))
def test_criterion(k, capsys):
    ok, line = _run(k)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [_run(k) for k in range(1, 8)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
