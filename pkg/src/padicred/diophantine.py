"""Linear systems with p-divisibility constraints over ℕ, their encoding as
L_{p-div}∪{∞}-sentences, and the end-to-end chain of reductions to an
∃∀-sentence of valued fields with cross-section."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from pathlib import Path

from .interpretations import (
    ComplexityError, delta_interpretation, exists_to_EA, gamma_interpretation, reduce_formula,
)
from .logic.signature import L_PDIV
from .logic.syntax import (
    App, Const, Eq, Exists, Forall, Formula, Implies, Not, Num, Pow, Rel, Term, Times, Var, conj,
)
from .logic.transform import PrenexClass, all_names, classify, fresh_for, prenex_classify
from .structures.finite import eval_sentence
from .structures.models import IModel, divides_p

Matrix = tuple[tuple[int, ...], ...]


class SystemFormatError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


# ------------------------------------------------------------------- systems


def norm_inf(A) -> int:
    """Maximum absolute row sum; 0 for an empty matrix."""
    return max((sum(abs(a) for a in row) for row in A), default=0)


@dataclass(frozen=True)
class DiophSystem:
    """A1·x + b1 = A2·x + b2 and, row-wise, A3·x + b3 |_p A4·x + b4."""

    n: int
    A1: Matrix = ()
    b1: tuple[int, ...] = ()
    A2: Matrix = ()
    b2: tuple[int, ...] = ()
    A3: Matrix = ()
    b3: tuple[int, ...] = ()
    A4: Matrix = ()
    b4: tuple[int, ...] = ()
    name: str = ""

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a system needs at least one variable")
        for (A, b), (C, d), block in (((self.A1, self.b1), (self.A2, self.b2), "equation"),
                                      ((self.A3, self.b3), (self.A4, self.b4), "divisibility")):
            rows = {len(A), len(b), len(C), len(d)}
            if len(rows) != 1:
                raise ValueError(f"{block} block: inconsistent row counts")
            for row in A + C:
                if len(row) != self.n:
                    raise ValueError(f"{block} block: row of length {len(row)}, expected {self.n}")
            if any(x < 0 for row in A + C for x in row) or any(x < 0 for x in b + d):
                raise ValueError(f"{block} block: entries must be natural numbers")

    @property
    def M(self) -> int:
        pairs = ((self.A1, self.b1), (self.A2, self.b2), (self.A3, self.b3), (self.A4, self.b4))
        return max(norm_inf(A) + max(b, default=0) for A, b in pairs)

    def equations(self):
        return list(zip(self.A1, self.b1, self.A2, self.b2))

    def divisibilities(self):
        return list(zip(self.A3, self.b3, self.A4, self.b4))

    @staticmethod
    def _lin(row, b, x) -> int:
        return sum(a * xi for a, xi in zip(row, x)) + b

    def satisfied(self, x, p: int) -> bool:
        return (all(self._lin(a, b, x) == self._lin(c, d, x) for a, b, c, d in self.equations())
                and all(divides_p(self._lin(a, b, x), self._lin(c, d, x), p)
                        for a, b, c, d in self.divisibilities()))

    @classmethod
    def build(cls, n: int, eqs=(), divs=(), name: str = "") -> DiophSystem:
        """From rows ``(row1, b1, row2, b2)``."""
        def cols(rows, i):
            return tuple(tuple(r[i]) if i % 2 == 0 else r[i] for r in rows)
        eqs, divs = list(eqs), list(divs)
        return cls(n, cols(eqs, 0), cols(eqs, 1), cols(eqs, 2), cols(eqs, 3),
                   cols(divs, 0), cols(divs, 1), cols(divs, 2), cols(divs, 3), name)


# --------------------------------------------------------------- file format


def _row(text: str, n: int | None, line: int):
    """``a1 a2 ... | b``."""
    if text.count("|") != 1:
        raise SystemFormatError(f"expected 'coefficients | constant', got {text.strip()!r}", line)
    lhs, rhs = text.split("|")
    try:
        row = tuple(int(t) for t in lhs.split())
        b = int(rhs.strip())
    except ValueError:
        raise SystemFormatError(f"non-integer entry in {text.strip()!r}", line) from None
    if n is not None and len(row) != n:
        raise SystemFormatError(f"row has {len(row)} coefficients, expected {n}", line)
    if any(a < 0 for a in row) or b < 0:
        raise SystemFormatError("entries must be natural numbers", line)
    return row, b


def parse_system(text: str, name: str = "") -> DiophSystem:
    n = None
    eqs, divs = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep:
            raise SystemFormatError(f"expected 'vars:', 'eq:' or 'div:', got {line!r}", lineno)
        if key == "vars":
            if n is not None:
                raise SystemFormatError("duplicate 'vars:' line", lineno)
            try:
                n = int(rest)
            except ValueError:
                raise SystemFormatError(f"bad variable count {rest.strip()!r}", lineno) from None
            if n < 1:
                raise SystemFormatError("variable count must be positive", lineno)
        elif key in ("eq", "div"):
            if n is None:
                raise SystemFormatError("'vars:' must come first", lineno)
            sep_tok = "=" if key == "eq" else "|p"
            if rest.count(sep_tok) != 1:
                raise SystemFormatError(f"'{key}:' rows need exactly one '{sep_tok}'", lineno)
            left, right = rest.split(sep_tok)
            r1, b1 = _row(left, n, lineno)
            r2, b2 = _row(right, n, lineno)
            (eqs if key == "eq" else divs).append((r1, b1, r2, b2))
        else:
            raise SystemFormatError(f"unknown block {key!r}", lineno)
    if n is None:
        raise SystemFormatError("missing 'vars:' line")
    return DiophSystem.build(n, eqs, divs, name)


def load_system(path: str | Path) -> DiophSystem:
    p = Path(path)
    return parse_system(p.read_text(encoding="utf-8"), name=p.stem)


def format_system(S: DiophSystem) -> str:
    def row(r, b):
        return " ".join(str(a) for a in r) + " | " + str(b)
    out = [f"vars: {S.n}"]
    out += [f"eq: {row(a, b)} = {row(c, d)}" for a, b, c, d in S.equations()]
    out += [f"div: {row(a, b)} |p {row(c, d)}" for a, b, c, d in S.divisibilities()]
    return "\n".join(out) + "\n"


# ------------------------------------------------------------------ encoding


@dataclass(frozen=True)
class EncodedSentence:
    sentence: Formula
    M: int
    prenex_class: PrenexClass


def system_vars(S: DiophSystem) -> list[Var]:
    return [Var(f"x{i + 1}" if S.n > 1 else "x", "D") for i in range(S.n)]


def _linear_term(row, b, xs) -> Term:
    parts: list[Term] = [x if a == 1 else Times(a, x) for a, x in zip(row, xs) if a]
    if b:
        parts.append(Num(b, "D"))
    if not parts:
        return Const("zero", "D")
    out = parts[0]
    for t in parts[1:]:
        out = App("add", (out, t), "D")
    return out


def matrix_formula(S: DiophSystem, xs: list[Var] | None = None) -> Formula:
    xs = xs or system_vars(S)
    atoms: list[Formula] = [Eq(_linear_term(a, b, xs), _linear_term(c, d, xs)) for a, b, c, d in S.equations()]
    atoms += [Rel("divp", (_linear_term(a, b, xs), _linear_term(c, d, xs))) for a, b, c, d in S.divisibilities()]
    return conj(*atoms)


def encode_system(S: DiophSystem) -> EncodedSentence:
    """∃x̄ (Σ(x̄) ∧ ⋀_i 3M·x_i ≠ ∞)."""
    xs = system_vars(S)
    M = S.M
    guards = [Not(Eq(Times(3 * M, x), Const("inf", "D"))) for x in xs]
    body = conj(matrix_formula(S, xs), *guards)
    phi: Formula = body
    for x in reversed(xs):
        phi = Exists(x, phi)
    return EncodedSentence(phi, M, classify(phi))


# ------------------------------------------------------------------- solving


def solve_naive(S: DiophSystem, bound: int, p: int = 2) -> tuple[int, ...] | None:
    """Lexicographically least x ∈ {0..bound}^n solving S in ℕ (true |_p, so 0 |_p 0)."""
    for x in itertools.product(range(bound + 1), repeat=S.n):
        if S.satisfied(x, p):
            return x
    return None


PASS, FAIL, VACUOUS = "PASS", "FAIL", "VACUOUS"


@dataclass(frozen=True)
class Direction:
    status: str
    detail: str


@dataclass(frozen=True)
class ClaimReport:
    system: str
    p: int
    N: int
    M: int
    holds_in_I: bool
    forward: Direction
    backward: Direction

    @property
    def ok(self) -> bool:
        return FAIL not in (self.forward.status, self.backward.status)

    def lines(self) -> list[str]:
        tag = {PASS: "PASS", FAIL: "FAIL", VACUOUS: "PASS"}
        head = f"system={self.system or '-'} p={self.p} N={self.N} M={self.M} I_N⊨encoding={self.holds_in_I}"
        return [head,
                f"{tag[self.forward.status]} forward {self.forward.status.lower()}: {self.forward.detail}",
                f"{tag[self.backward.status]} backward {self.backward.status.lower()}: {self.backward.detail}"]


def check_claim(S: DiophSystem, p: int, N: int, budget: int | None = None) -> ClaimReport:
    """Both directions of the truncation claim at one N.

    (⇒) a solution c with 3·M·max(‖c‖∞, 1) < N makes the encoding true in I_N;
    (⇐) if N > 3M and the encoding holds in I_N, a solution with entries below
    ⌈N/(3M)⌉ exists.
    """
    enc = encode_system(S)
    M = enc.M
    I = IModel(N, p)
    holds = eval_sentence(I, enc.sentence)
    if M == 0:
        fwd_bound, applies = N, True
    else:
        fwd_bound, applies = (N - 1) // (3 * M), N > 3 * M
    if not applies:
        fwd = Direction(VACUOUS, f"N={N} ≤ 3M={3 * M}: no witness size qualifies")
    else:
        c = solve_naive(S, fwd_bound, p)
        if c is None:
            fwd = Direction(VACUOUS, f"no solution with entries ≤ {fwd_bound} (threshold 3·M·m < N)")
        else:
            m = max(c)
            detail = f"witness {c}, m={m}, 3·M·max(m,1)={3 * M * max(m, 1)} < N={N}"
            fwd = Direction(PASS if holds else FAIL, detail + ("" if holds else "; encoding false in I_N"))
    if not holds:
        bwd = Direction(VACUOUS, "encoding false in I_N")
    elif not N > 3 * M:
        bwd = Direction(VACUOUS, f"N={N} ≤ 3M={3 * M}")
    else:
        bound = N if M == 0 else -(-N // (3 * M))
        c = solve_naive(S, bound, p)
        bwd = Direction(PASS if c is not None else FAIL,
                        f"solution {c} within bound ⌈N/(3M)⌉={bound}" if c is not None
                        else f"no solution with entries ≤ {bound}")
    return ClaimReport(S.name, p, N, M, holds, fwd, bwd)


# --------------------------------------------------------------- relativising


def residue_is_prime_field(p: int, z: Var) -> Formula:
    """k = F_p, as ∀z∈k (z^p = z)."""
    return Forall(z, Eq(Pow(z, p), z))


def relativize_to_residue(phi: Formula, p: int) -> Formula:
    """Prenex form of (k = F_p) → φ for an ∃∀-sentence φ."""
    cls = classify(phi)
    if not cls.within("EA"):
        raise ComplexityError(f"expected an ∃∀-sentence, got class {cls.symbols}")
    names = all_names(phi)
    fresh = fresh_for(phi, prefix="z")
    z = Var("z" if "z" not in names else fresh.name(), "k")
    out, _ = prenex_classify(Implies(residue_is_prime_field(p, z), phi), fresh)
    return out


@dataclass(frozen=True)
class PipelineStages:
    encoded: Formula
    gamma: Formula
    delta_EA: Formula
    relativized: Formula
    M: int


def pipeline_stages(S: DiophSystem, p: int) -> PipelineStages:
    enc = encode_system(S)
    g = reduce_formula(gamma_interpretation(p), enc.sentence, shortcut=True)
    d = exists_to_EA(g, delta_interpretation(p))
    r = relativize_to_residue(d, p)
    return PipelineStages(enc.sentence, g, d, r, enc.M)


def full_pipeline(S: DiophSystem, p: int) -> Formula:
    """encode → Γ (with N·x=∞ ↦ x^N=0) → Δ with ∃∀ normalisation → (k=F_p) → ·."""
    return pipeline_stages(S, p).relativized


# --------------------------------------------------------------------- suite


def _s(n, eqs=(), divs=(), name=""):
    return DiophSystem.build(n, eqs, divs, name)


def example_suite() -> list[DiophSystem]:
    """Thirteen small systems.

    Only ``x|y,y|x`` has a least solution, (0, 0), that uses 0 |_p 0; it also
    has the solution (1, 1), so its encoding is unaffected.
    """
    return [
        _s(1, [((1,), 1, (0,), 2)], name="x+1=2"),
        _s(1, [((2,), 0, (0,), 1)], name="x+x=1"),
        _s(1, [((1,), 0, (0,), 4)], [((0,), 1, (1,), 0)], name="1|x,x=4"),
        _s(2, [((1, 0), 1, (0, 1), 0)], [((1, 0), 0, (0, 1), 0)], name="x+1=y,x|y"),
        _s(1, [((1,), 0, (0,), 3)], name="x=3"),
        _s(2, [((2, 0), 0, (0, 1), 0)], [((0, 0), 1, (0, 1), 0)], name="2x=y,1|y"),
        _s(2, [], [((1, 0), 0, (0, 1), 0), ((0, 1), 0, (1, 0), 0)], name="x|y,y|x"),
        _s(1, [((1,), 1, (1,), 0)], name="x+1=x"),
        _s(1, [((1,), 0, (0,), 3)], [((0,), 1, (1,), 0)], name="1|x,x=3"),
        _s(2, [((1, 1), 0, (0, 0), 3)], [((0, 0), 1, (1, 0), 0), ((0, 0), 1, (0, 1), 0)],
           name="x+y=3,1|x,1|y"),
        _s(3, [((1, 1, 0), 0, (0, 0, 1), 0)], [((0, 0, 0), 1, (1, 0, 0), 0), ((1, 0, 0), 0, (0, 1, 0), 0)],
           name="x+y=z,1|x,x|y"),
        _s(1, [((2,), 0, (0,), 4)], name="x+x=4"),
        _s(1, name="empty"),
    ]
