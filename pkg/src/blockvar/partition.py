"""Finitely described partitions of N x N.

A position in a word of length n is the pair (i, j) = (distance from start,
distance from end), so i + j = n - 1.  A :class:`PartitionSpec` is an ordered
list of predicates on (i, j); the class of a pair is the first predicate that
holds, and the last predicate must be ``true``.

Atoms: ``true``, ``i<c``, ``j<c``, ``i%m=r``, ``j%m=r``.  The short text form
accepted by :func:`parse_pred` combines literals with ``&`` or ``|`` (not
mixed) and ``!`` for negation.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Sequence, Union


@dataclass(frozen=True)
class TrueP:
    def holds(self, i: int, j: int) -> bool:
        return True

    def __str__(self):
        return "true"


@dataclass(frozen=True)
class Lt:
    var: str
    bound: int

    def holds(self, i: int, j: int) -> bool:
        return (i if self.var == "i" else j) < self.bound

    def __str__(self):
        return f"{self.var}<{self.bound}"


@dataclass(frozen=True)
class Mod:
    var: str
    residue: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be >= 1")

    def holds(self, i: int, j: int) -> bool:
        return (i if self.var == "i" else j) % self.modulus == self.residue % self.modulus

    def __str__(self):
        return f"{self.var}%{self.modulus}={self.residue}"


@dataclass(frozen=True)
class PNot:
    child: "Pred"

    def holds(self, i: int, j: int) -> bool:
        return not self.child.holds(i, j)

    def __str__(self):
        return f"!{self.child}"


@dataclass(frozen=True)
class PAnd:
    items: tuple["Pred", ...]

    def holds(self, i: int, j: int) -> bool:
        return all(p.holds(i, j) for p in self.items)

    def __str__(self):
        return " & ".join(map(str, self.items))


@dataclass(frozen=True)
class POr:
    items: tuple["Pred", ...]

    def holds(self, i: int, j: int) -> bool:
        return any(p.holds(i, j) for p in self.items)

    def __str__(self):
        return " | ".join(map(str, self.items))


Pred = Union[TrueP, Lt, Mod, PNot, PAnd, POr]

_ATOM = re.compile(r"^(?:(true)|([ij])<(\d+)|([ij])%(\d+)=(\d+))$")


def parse_atom(text: str) -> Pred:
    mt = _ATOM.match(text.strip())
    if not mt:
        raise ValueError(f"bad partition atom {text!r}")
    if mt.group(1):
        return TrueP()
    if mt.group(2):
        return Lt(mt.group(2), int(mt.group(3)))
    return Mod(mt.group(4), int(mt.group(6)), int(mt.group(5)))


def parse_pred(text: str) -> Pred:
    def literal(s: str) -> Pred:
        s = s.strip()
        return PNot(literal(s[1:])) if s.startswith("!") else parse_atom(s)

    if "&" in text and "|" in text:
        raise ValueError(f"cannot mix & and | without grouping: {text!r}")
    if "&" in text:
        return PAnd(tuple(literal(s) for s in text.split("&")))
    if "|" in text:
        return POr(tuple(literal(s) for s in text.split("|")))
    return literal(text)


def pred_to_json(p: Pred) -> dict:
    if isinstance(p, (TrueP, Lt, Mod)):
        return {"atom": str(p)}
    if isinstance(p, PNot):
        return {"not": pred_to_json(p.child)}
    key = "and" if isinstance(p, PAnd) else "or"
    return {key: [pred_to_json(q) for q in p.items]}


def pred_from_json(data: Mapping) -> Pred:
    if not isinstance(data, Mapping):
        raise ValueError(f"partition predicate must be an object, got {data!r}")
    if "atom" in data:
        return parse_atom(str(data["atom"]))
    if "not" in data:
        return PNot(pred_from_json(data["not"]))
    if "and" in data:
        return PAnd(tuple(pred_from_json(q) for q in data["and"]))
    if "or" in data:
        return POr(tuple(pred_from_json(q) for q in data["or"]))
    raise ValueError(f"partition predicate has no known kind: {sorted(data)}")


@dataclass(frozen=True)
class PartitionSpec:
    classes: tuple[Pred, ...]

    def __post_init__(self):
        if not self.classes or not isinstance(self.classes[-1], TrueP):
            raise ValueError("the last partition class must be the constant 'true'")

    @classmethod
    def parse(cls, preds: Sequence[str]) -> "PartitionSpec":
        return cls(tuple(parse_pred(p) for p in preds))

    @classmethod
    def single(cls) -> "PartitionSpec":
        return cls((TrueP(),))

    def __len__(self) -> int:
        return len(self.classes)

    def class_of(self, i: int, j: int) -> int:
        for k, p in enumerate(self.classes):
            if p.holds(i, j):
                return k
        raise AssertionError("unreachable: last class is true")

    def classes_for_length(self, n: int) -> tuple[int, ...]:
        return tuple(self.class_of(i, n - 1 - i) for i in range(n))

    def __str__(self):
        return "[" + ", ".join(map(str, self.classes)) + "]"

    def to_json(self) -> dict:
        return {"classes": [{"pred": pred_to_json(p)} for p in self.classes]}

    @classmethod
    def from_json(cls, data: Mapping) -> "PartitionSpec":
        if "classes" not in data:
            raise ValueError("partition JSON missing field 'classes'")
        try:
            return cls(tuple(pred_from_json(c["pred"]) for c in data["classes"]))
        except (KeyError, TypeError):
            raise ValueError("partition JSON field 'classes' entries need a 'pred'") from None


def class_of(p: PartitionSpec, i: int, j: int) -> int:
    return p.class_of(i, j)
