"""Command-line interface: ``padicred <command> [options]``.

Exit status: 0 success / all checks pass, 1 a verification failed,
2 configuration, parse or budget error.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from .structures.finite import DEFAULT_BUDGET, BudgetExceeded

BUDGET_ENV = "PADICRED_BUDGET"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    p: int | None = None
    n: int | None = None
    N: int | None = None
    k: int | None = None
    E: str | None = None
    mode: str | None = None
    budget: int = DEFAULT_BUDGET
    jobs: int = 1
    input: str | None = None
    output: str | None = None
    system: str | None = None
    interp: str | None = None
    variant: str | None = None
    sig: str | None = None
    structure: str | None = None
    emit: str = "sexp"
    shortcut: bool = False

    def lines(self) -> list[str]:
        parts = [f"{f.name}={getattr(self, f.name)}" for f in fields(self)
                 if getattr(self, f.name) not in (None, False)]
        return ["# config: " + " ".join(parts)]


def _default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_BUDGET
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{BUDGET_ENV}={raw!r} is not an integer") from None


def _prime(text: str) -> int:
    p = int(text)
    if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        raise argparse.ArgumentTypeError(f"{p} is not prime")
    return p


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="padicred", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, *flags):
        sp.add_argument("--budget", type=_positive, default=None,
                        help=f"enumeration budget (default ${BUDGET_ENV} or {DEFAULT_BUDGET})")
        sp.add_argument("--jobs", type=_positive, default=1, help="worker cap (evaluation is single-process)")
        sp.add_argument("--out", help="also write the report to this file")
        for f in flags:
            if f == "p":
                sp.add_argument("--p", type=_prime, default=2)
            elif f == "n":
                sp.add_argument("--n", type=_positive)
            elif f == "N":
                sp.add_argument("--N", type=_positive, required=True)
            elif f == "k":
                sp.add_argument("--k", type=_positive, default=2, help="p-adic precision")
            elif f == "E":
                sp.add_argument("--E", help="Eisenstein polynomial, e.g. 't^2-2' or '[-2,0]'")
            elif f == "in":
                sp.add_argument("--in", dest="input", default="-", help="formula file ('-' for stdin)")
            elif f == "sig":
                sp.add_argument("--sig", default=None, help="signature name or JSON file")
            elif f == "system":
                sp.add_argument("--system", required=True, help="system file (.dio)")
            elif f == "emit":
                sp.add_argument("--emit", choices=("sexp", "pretty"), default="sexp")
            elif f == "interp":
                sp.add_argument("--interp", choices=("gamma", "delta"), required=True)
                sp.add_argument("--variant", default=None,
                                help="table variant (gamma: guarded|literal, delta: lift-invariant|literal)")

    common(sub.add_parser("parse", help="parse and re-print a formula"), "in", "sig", "emit")
    common(sub.add_parser("classify", help="prenex form and alternation class"), "in", "sig", "emit")
    sp = sub.add_parser("translate", help="apply an interpretation to a formula")
    common(sp, "interp", "p", "in", "emit")
    sp.add_argument("--shortcut", action="store_true", help="translate N·x=∞ as x^N=0 (gamma)")
    sp.add_argument("--ea", action="store_true", help="delta only: produce the ∃∀ form")
    sp = sub.add_parser("eval", help="evaluate a sentence in a finite or bounded structure")
    common(sp, "p", "n", "k", "E", "in")
    sp.add_argument("--structure", default=None,
                    help="'ring p=2 n=8', 'imodel p=2 n=8' or 'field p=2 E=[-2] k=3'")
    sp.add_argument("--window", type=_positive, default=None, help="value-group window B (field)")
    sp.add_argument("--engine", choices=("auto", "scalar", "vector"), default="auto")
    common(sub.add_parser("encode", help="encode a system as an L_p-div sentence"), "p", "system", "emit")
    common(sub.add_parser("pipeline", help="system to ∃∀ valued-field sentence"), "p", "system", "emit")
    common(sub.add_parser("verify-lemma", help="truncated divisibility criterion table"), "p", "N")
    sp = sub.add_parser("verify-interp", help="check an interpretation atom by atom")
    common(sp, "interp", "p", "n", "k", "E")
    sp.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    sp.add_argument("--lifts", type=int, default=100)
    common(sub.add_parser("check-claim", help="both directions of the encoding claim at N"),
           "p", "N", "system")
    return ap


# -------------------------------------------------------------------- helpers


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e.strerror}") from None


def _emit(phi, how: str) -> str:
    from .logic.sexpr import pretty, to_sexpr
    return pretty(phi) if how == "pretty" else to_sexpr(phi)


def _detect_signature(text: str):
    """Pick the standard signature whose sort names appear in the binders."""
    from .logic.signature import SIGNATURES
    sorts = set(re.findall(r"\(\s*[^\s()]+\s+([^\s()]+)\s*\)", text))
    for name in ("tP", "pdiv", "valx", "oag", "rings"):
        sig = SIGNATURES[name]
        if sorts and sorts <= set(sig.sorts):
            return sig
    return SIGNATURES["tP"]


def _signature(name: str | None, text: str):
    from .logic.signature import get_signature
    return get_signature(name) if name else _detect_signature(text)


_KV = re.compile(r"([A-Za-z]+)\s*=\s*(\[[^\]]*\]|[^\s;]+)")


def parse_structure(text: str, args) -> tuple[str, dict]:
    text = text.strip()
    kind = text.split()[0] if text and "=" not in text.split()[0] else "field"
    kv = {m.group(1): m.group(2) for m in _KV.finditer(text)}
    if kind not in ("ring", "imodel", "field"):
        raise ConfigError(f"unknown structure kind {kind!r}")
    return kind, kv


def _build_structure(args):
    from .structures.models import IModel, TruncPolyRingModel
    from .valued_field import make_field
    kind, kv = parse_structure(args.structure or "ring", args)
    try:
        p = int(kv.get("p", args.p))
        n = int(kv["n"]) if "n" in kv else args.n
        k = int(kv.get("k", args.k))
    except ValueError as e:
        raise ConfigError(f"bad structure parameter: {e}") from None
    E = kv.get("E", args.E)
    if kind == "ring":
        if n is None:
            raise ConfigError("ring needs n")
        return TruncPolyRingModel(p, n)
    if kind == "imodel":
        if n is None:
            raise ConfigError("imodel needs n")
        return IModel(n, p)
    if E is None and n is None:
        raise ConfigError("field needs E or n")
    return make_field(p, E, k, window=args.window, n=n)


def _interp(args):
    from .interpretations import delta_interpretation, gamma_interpretation
    if args.interp == "gamma":
        return gamma_interpretation(args.p, args.variant or "guarded")
    return delta_interpretation(args.p, args.variant or "lift-invariant")


# ------------------------------------------------------------------- commands


def cmd_parse(args, out):
    from .logic.sexpr import parse_formula
    text = _read_input(args.input)
    sig = _signature(args.sig, text)
    phi = parse_formula(text, sig)
    out.append(f"signature: {sig.name}")
    out.append(_emit(phi, args.emit))
    return 0


def cmd_classify(args, out):
    from .logic.sexpr import parse_formula
    from .logic.transform import prenex_classify
    text = _read_input(args.input)
    phi = parse_formula(text, _signature(args.sig, text))
    pre, cls = prenex_classify(phi)
    out.append(_emit(pre, args.emit))
    out.append(f"class: {cls}")
    return 0


def cmd_translate(args, out):
    from .interpretations import exists_to_EA, reduce_formula
    from .logic.sexpr import parse_formula
    from .logic.transform import classify
    G = _interp(args)
    phi = parse_formula(_read_input(args.input), G.source)
    if args.ea:
        if args.interp != "delta":
            raise ConfigError("--ea applies to the delta interpretation")
        res = exists_to_EA(phi, G)
    else:
        res = reduce_formula(G, phi, shortcut=args.shortcut)
    out.append(_emit(res, args.emit))
    out.append(f"class: {classify(res)}")
    return 0


def cmd_eval(args, out):
    from .logic.sexpr import parse_formula
    from .structures.finite import eval_sentence
    from .valued_field import PadicModel, bounded_eval
    S = _build_structure(args)
    phi = parse_formula(_read_input(args.input), S.signature)
    out.append(f"structure: {S.name}")
    if isinstance(S, PadicModel):
        v = bounded_eval(S, phi)
        out.extend(v.report().splitlines())
    else:
        v = eval_sentence(S, phi, engine=args.engine, budget=args.budget)
        out.append(f"verdict: {'true' if v else 'false'}")
    return 0


def _system(args):
    from .diophantine import load_system
    try:
        return load_system(args.system)
    except OSError as e:
        raise ConfigError(f"cannot read {args.system}: {e.strerror}") from None


def cmd_encode(args, out):
    from .diophantine import encode_system
    enc = encode_system(_system(args))
    out.append(_emit(enc.sentence, args.emit))
    out.append(f"M: {enc.M}")
    out.append(f"class: {enc.prenex_class}")
    return 0


def cmd_pipeline(args, out):
    from .diophantine import pipeline_stages
    from .logic.transform import classify
    st = pipeline_stages(_system(args), args.p)
    out.append(_emit(st.relativized, args.emit))
    out.append(f"class: {classify(st.relativized)}")
    return 0


def cmd_verify_lemma(args, out):
    from .pheidas import admissible_pairs, format_table, lemma_table
    rows = lemma_table(args.p, args.N, budget=args.budget)
    out.append(format_table(rows))
    bad = [r for r in rows if not r.agrees]
    for r in bad:
        out.append(f"FAIL n={r.n} m={r.m} divides={r.divides} witness={r.witness_exists}")
    out.append(f"{'FAIL' if bad else 'PASS'} pairs={len(rows)}")
    return 1 if bad else 0


def cmd_verify_interp(args, out):
    from .interpretations import verify_interpretation
    from .structures.models import IModel, TruncPolyRingModel
    from .valued_field import make_field
    G = _interp(args)
    if args.interp == "gamma":
        if args.n is None:
            raise ConfigError("gamma verification needs --n")
        src, tgt = IModel(args.n, args.p), TruncPolyRingModel(args.p, args.n)
    else:
        if args.n is None and args.E is None:
            raise ConfigError("delta verification needs --n or --E")
        tgt = make_field(args.p, args.E, args.k, n=args.n)
        src = TruncPolyRingModel(args.p, tgt.n)
    rep = verify_interpretation(G, src, tgt, mode=args.mode, lifts=args.lifts)
    out.append(f"source: {src.name}")
    out.append(f"target: {tgt.name}")
    out.extend(rep.lines())
    out.append(f"{'PASS' if rep.ok else 'FAIL'} interpretation={G.name} mode={rep.mode}")
    return 0 if rep.ok else 1


def cmd_check_claim(args, out):
    from .diophantine import check_claim
    rep = check_claim(_system(args), args.p, args.N)
    out.extend(rep.lines())
    out.append(f"{'PASS' if rep.ok else 'FAIL'} claim N={args.N}")
    return 0 if rep.ok else 1


COMMANDS = {
    "parse": cmd_parse, "classify": cmd_classify, "translate": cmd_translate, "eval": cmd_eval,
    "encode": cmd_encode, "pipeline": cmd_pipeline, "verify-lemma": cmd_verify_lemma,
    "verify-interp": cmd_verify_interp, "check-claim": cmd_check_claim,
}


def _config(args) -> RunConfig:
    vals = {f.name: getattr(args, f.name, None) for f in fields(RunConfig) if f.name != "command"}
    vals = {k: v for k, v in vals.items() if v is not None}
    return RunConfig(command=args.command, **vals)


def main(argv: list[str] | None = None) -> int:
    from .diophantine import SystemFormatError
    from .logic.sexpr import ParseError
    from .logic.signature import SignatureError
    from .logic.syntax import FreeVariableError, SortError
    from .interpretations import ComplexityError, TranslationError
    from .valued_field import NotEisensteinError

    parser = build_parser()
    args = parser.parse_args(argv)
    out: list[str] = []
    try:
        if getattr(args, "budget", None) is None:
            args.budget = _default_budget()
        cfg = _config(args)
        out.extend(cfg.lines())
        status = COMMANDS[args.command](args, out)
    except BudgetExceeded as e:
        out.append(f"SKIP budget exceeded: {e}")
        status = 2
    except (ParseError, SystemFormatError, SortError, SignatureError, FreeVariableError,
            ConfigError, NotEisensteinError, ComplexityError, TranslationError) as e:
        out.append(f"error: {e}")
        status = 2
    text = "\n".join(out) + "\n"
    stream = sys.stdout if status != 2 else sys.stderr
    stream.write(text)
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")
    return status


if __name__ == "__main__":
    sys.exit(main())
