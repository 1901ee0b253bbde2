"""Bounded Boolean trees over indexed leaves.

Used as the top part of a layered circuit family and as the formula of a
presented block language.  The constructors fold constants.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence, Union


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Leaf:
    index: int


@dataclass(frozen=True)
class Not:
    child: "Tree"


@dataclass(frozen=True)
class And:
    left: "Tree"
    right: "Tree"


@dataclass(frozen=True)
class Or:
    left: "Tree"
    right: "Tree"


Tree = Union[Const, Leaf, Not, And, Or]

TRUE = Const(True)
FALSE = Const(False)


def and_(a: Tree, b: Tree) -> Tree:
    if a == FALSE or b == FALSE:
        return FALSE
    if a == TRUE:
        return b
    if b == TRUE:
        return a
    return And(a, b)


def or_(a: Tree, b: Tree) -> Tree:
    if a == TRUE or b == TRUE:
        return TRUE
    if a == FALSE:
        return b
    if b == FALSE:
        return a
    return Or(a, b)


def not_(a: Tree) -> Tree:
    if isinstance(a, Const):
        return Const(not a.value)
    if isinstance(a, Not):
        return a.child
    return Not(a)


def all_of(items: Iterable[Tree]) -> Tree:
    out: Tree = TRUE
    for t in items:
        out = and_(out, t)
    return out


def any_of(items: Iterable[Tree]) -> Tree:
    out: Tree = FALSE
    for t in items:
        out = or_(out, t)
    return out


def evaluate(t: Tree, leaf: Callable[[int], bool] | Sequence[bool]) -> bool:
    get = leaf if callable(leaf) else leaf.__getitem__
    if isinstance(t, Const):
        return t.value
    if isinstance(t, Leaf):
        return bool(get(t.index))
    if isinstance(t, Not):
        return not evaluate(t.child, get)
    if isinstance(t, And):
        return evaluate(t.left, get) and evaluate(t.right, get)
    return evaluate(t.left, get) or evaluate(t.right, get)


def leaves(t: Tree) -> set[int]:
    if isinstance(t, Leaf):
        return {t.index}
    if isinstance(t, Not):
        return leaves(t.child)
    if isinstance(t, (And, Or)):
        return leaves(t.left) | leaves(t.right)
    return set()


def relabel(t: Tree, mapping: Mapping[int, int]) -> Tree:
    if isinstance(t, Leaf):
        return Leaf(mapping[t.index])
    if isinstance(t, Not):
        return Not(relabel(t.child, mapping))
    if isinstance(t, And):
        return And(relabel(t.left, mapping), relabel(t.right, mapping))
    if isinstance(t, Or):
        return Or(relabel(t.left, mapping), relabel(t.right, mapping))
    return t


def is_monotone(t: Tree) -> bool:
    if isinstance(t, Not):
        return False
    if isinstance(t, (And, Or)):
        return is_monotone(t.left) and is_monotone(t.right)
    return True


def to_json(t: Tree) -> dict:
    if isinstance(t, Const):
        return {"kind": "const", "value": int(t.value)}
    if isinstance(t, Leaf):
        return {"kind": "leaf", "index": t.index}
    if isinstance(t, Not):
        return {"kind": "not1", "child": to_json(t.child)}
    kind = "and2" if isinstance(t, And) else "or2"
    return {"kind": kind, "left": to_json(t.left), "right": to_json(t.right)}


def from_json(data: Mapping) -> Tree:
    kind = data.get("kind")
    try:
        if kind == "const":
            return Const(bool(data["value"]))
        if kind == "leaf":
            return Leaf(int(data["index"]))
        if kind == "not1":
            return Not(from_json(data["child"]))
        if kind in ("and2", "or2"):
            cls = And if kind == "and2" else Or
            return cls(from_json(data["left"]), from_json(data["right"]))
    except KeyError as exc:
        raise ValueError(f"tree JSON node {kind!r} missing field {exc.args[0]!r}") from None
    raise ValueError(f"tree JSON field 'kind' has unknown value {kind!r}")
