"""Many-sorted signatures and the standard languages used by the reductions."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping


class SignatureError(ValueError):
    pass


@dataclass(frozen=True)
class Arith:
    """Symbols that give a sort numeral, scalar-multiple and power sugar."""

    zero: str
    one: str | None
    add: str
    mul: str | None = None


@dataclass(frozen=True, eq=False)
class Signature:
    name: str
    sorts: tuple[str, ...]
    constants: Mapping[str, str] = field(default_factory=dict)
    functions: Mapping[str, tuple[tuple[str, ...], str]] = field(default_factory=dict)
    relations: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    arith: Mapping[str, Arith] = field(default_factory=dict)

    def __post_init__(self):
        if len(set(self.sorts)) != len(self.sorts):
            raise SignatureError(f"{self.name}: duplicate sort names")
        known = set(self.sorts)
        for c, s in self.constants.items():
            if s not in known:
                raise SignatureError(f"{self.name}: constant {c!r} has undeclared sort {s!r}")
        for f, (args, res) in self.functions.items():
            for s in (*args, res):
                if s not in known:
                    raise SignatureError(f"{self.name}: function {f!r} uses undeclared sort {s!r}")
        for r, args in self.relations.items():
            for s in args:
                if s not in known:
                    raise SignatureError(f"{self.name}: relation {r!r} uses undeclared sort {s!r}")
        for s, a in self.arith.items():
            if s not in known:
                raise SignatureError(f"{self.name}: arithmetic declared for undeclared sort {s!r}")
            if self.constants.get(a.zero) != s or (a.one is not None and self.constants.get(a.one) != s):
                raise SignatureError(f"{self.name}: arithmetic constants for {s!r} are not of that sort")
            for fn in (a.add, a.mul):
                if fn is not None and self.functions.get(fn) != ((s, s), s):
                    raise SignatureError(f"{self.name}: {fn!r} is not a binary operation on {s!r}")

    def __eq__(self, other):
        if not isinstance(other, Signature):
            return NotImplemented
        return (self.sorts == other.sorts and dict(self.constants) == dict(other.constants)
                and dict(self.functions) == dict(other.functions)
                and dict(self.relations) == dict(other.relations))

    def __hash__(self):
        return hash((self.name, self.sorts))

    def symbols(self) -> set[str]:
        return set(self.constants) | set(self.functions) | set(self.relations)

    def includes(self, other: Signature) -> bool:
        """True when every symbol of ``other`` is declared here with the same typing."""
        return (set(other.sorts) <= set(self.sorts)
                and all(self.constants.get(c) == s for c, s in other.constants.items())
                and all(self.functions.get(f) == t for f, t in other.functions.items())
                and all(self.relations.get(r) == t for r, t in other.relations.items()))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "sorts": list(self.sorts),
            "constants": dict(self.constants),
            "functions": {f: {"args": list(a), "result": r} for f, (a, r) in self.functions.items()},
            "relations": {r: list(a) for r, a in self.relations.items()},
            "arith": {s: {"zero": a.zero, "one": a.one, "add": a.add, "mul": a.mul}
                      for s, a in self.arith.items()},
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> Signature:
        try:
            return cls(
                name=d.get("name", "custom"),
                sorts=tuple(d["sorts"]),
                constants=dict(d.get("constants", {})),
                functions={f: (tuple(v["args"]), v["result"]) for f, v in d.get("functions", {}).items()},
                relations={r: tuple(a) for r, a in d.get("relations", {}).items()},
                arith={s: Arith(a["zero"], a.get("one"), a["add"], a.get("mul"))
                       for s, a in d.get("arith", {}).items()},
            )
        except (KeyError, TypeError) as exc:
            raise SignatureError(f"malformed signature declaration: {exc}") from exc


def load_signature(path: str | Path) -> Signature:
    """Read a signature from a JSON key-value file (see ``Signature.to_dict``)."""
    with open(path, encoding="utf-8") as fh:
        return Signature.from_dict(json.load(fh))


def _ring_symbols(sort: str, suffix: str = ""):
    zero, one, add, mul = (f"zero{suffix}", f"one{suffix}", f"add{suffix}", f"mul{suffix}")
    return (
        {zero: sort, one: sort},
        {add: ((sort, sort), sort), mul: ((sort, sort), sort)},
        Arith(zero, one, add, mul),
    )


def _build_rings() -> Signature:
    consts, funcs, ar = _ring_symbols("R")
    return Signature("L_rings", ("R",), consts, funcs, {}, {"R": ar})


def _build_oag() -> Signature:
    return Signature(
        "L_oag", ("G",), {"zero_G": "G"}, {"add_G": (("G", "G"), "G")},
        {"lt": ("G", "G")}, {"G": Arith("zero_G", None, "add_G")},
    )


def _build_tP() -> Signature:
    consts, funcs, ar = _ring_symbols("R")
    consts["t"] = "R"
    return Signature("L_tP", ("R",), consts, funcs, {"P": ("R",)}, {"R": ar})


def _build_pdiv() -> Signature:
    return Signature(
        "L_pdiv_inf", ("D",),
        {"zero": "D", "one": "D", "inf": "D"},
        {"add": (("D", "D"), "D")},
        {"divp": ("D", "D")},
        {"D": Arith("zero", "one", "add")},
    )


def _build_val(cross_section: bool) -> Signature:
    k_consts, k_funcs, k_ar = _ring_symbols("K")
    r_consts, r_funcs, r_ar = _ring_symbols("k", "_k")
    consts = {**k_consts, **r_consts, "zero_G": "G", "inf": "G"}
    funcs = {**k_funcs, **r_funcs, "add_G": (("G", "G"), "G"),
             "v": (("K",), "G"), "res": (("K",), "k")}
    if cross_section:
        funcs["s"] = (("G",), "K")
    return Signature(
        "L_val_x" if cross_section else "L_val",
        ("K", "G", "k"), consts, funcs, {"lt": ("G", "G")},
        {"K": k_ar, "k": r_ar, "G": Arith("zero_G", None, "add_G")},
    )


L_RINGS = _build_rings()
L_OAG = _build_oag()
L_TP = _build_tP()
L_PDIV = _build_pdiv()
L_VAL = _build_val(False)
L_VAL_X = _build_val(True)

SIGNATURES: dict[str, Signature] = {
    "rings": L_RINGS,
    "oag": L_OAG,
    "tP": L_TP,
    "pdiv": L_PDIV,
    "val": L_VAL,
    "valx": L_VAL_X,
}


def get_signature(name: str) -> Signature:
    try:
        return SIGNATURES[name]
    except KeyError:
        if Path(name).exists():
            return load_signature(name)
        raise SignatureError(f"unknown signature {name!r}; known: {', '.join(SIGNATURES)}") from None
