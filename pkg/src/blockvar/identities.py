"""Profinite terms, identities and the satisfaction relation.

Terms are finite syntax trees built from letters, variables, concatenation
and omega-power.  Under a morphism into a finite monoid a term evaluates to
one element; ``x^w`` is the idempotent power of the value of ``x``.

A small text syntax is accepted by :func:`parse_term`: juxtaposition is
concatenation, parentheses group, ``^w`` is the omega-power and ``^k`` for a
decimal k is a k-fold repetition.  Every symbol is one character; characters
listed in ``variables`` are variables, all others are letters.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Mapping, Union

from .monoid import FiniteMonoid, MonoidMorphism, accepting_elements, omega_power, syntactic_morphism
from .regular import AlphabetError, Dfa, minimize


@dataclass(frozen=True)
class Sym:
    kind: str  # "letter" or "var"
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Cat:
    left: "Term"
    right: "Term"

    def __str__(self):
        return f"{self.left}{self.right}"


@dataclass(frozen=True)
class Omega:
    child: "Term"

    def __str__(self):
        inner = str(self.child)
        if not (isinstance(self.child, Sym)):
            inner = f"({inner})"
        return f"{inner}^w"


@dataclass(frozen=True)
class Empty:
    def __str__(self):
        return "ε"


Term = Union[Sym, Cat, Omega, Empty]


@dataclass(frozen=True)
class Identity:
    lhs: Term
    rhs: Term

    def __str__(self):
        return f"{self.lhs} = {self.rhs}"

    def variables(self) -> list[str]:
        return sorted(term_symbols(self.lhs, "var") | term_symbols(self.rhs, "var"))

    def letters(self) -> list[str]:
        return sorted(term_symbols(self.lhs, "letter") | term_symbols(self.rhs, "letter"))

    def is_ground(self) -> bool:
        return not self.variables()

    def to_json(self) -> dict:
        return {"lhs": term_to_json(self.lhs), "rhs": term_to_json(self.rhs)}

    @classmethod
    def from_json(cls, data: Mapping) -> "Identity":
        if "lhs" not in data or "rhs" not in data:
            raise ValueError("identity JSON needs fields 'lhs' and 'rhs'")
        return cls(term_from_json(data["lhs"]), term_from_json(data["rhs"]))


def term_symbols(t: Term, kind: str) -> set[str]:
    if isinstance(t, Sym):
        return {t.name} if t.kind == kind else set()
    if isinstance(t, Cat):
        return term_symbols(t.left, kind) | term_symbols(t.right, kind)
    if isinstance(t, Omega):
        return term_symbols(t.child, kind)
    return set()


def term_to_json(t: Term) -> dict:
    if isinstance(t, Sym):
        return {"sym": t.name, "tag": t.kind}
    if isinstance(t, Cat):
        return {"cat": [term_to_json(t.left), term_to_json(t.right)]}
    if isinstance(t, Omega):
        return {"omega": term_to_json(t.child)}
    return {"empty": True}


def term_from_json(data: Mapping) -> Term:
    if not isinstance(data, Mapping):
        raise ValueError(f"term JSON node must be an object, got {data!r}")
    if "sym" in data:
        tag = data.get("tag", "letter")
        if tag not in ("letter", "var"):
            raise ValueError(f"term JSON field 'tag' must be 'letter' or 'var', got {tag!r}")
        return Sym(tag, str(data["sym"]))
    if "cat" in data:
        parts = data["cat"]
        if not isinstance(parts, list) or not parts:
            raise ValueError("term JSON field 'cat' must be a non-empty list")
        out = term_from_json(parts[0])
        for p in parts[1:]:
            out = Cat(out, term_from_json(p))
        return out
    if "omega" in data:
        return Omega(term_from_json(data["omega"]))
    if "empty" in data:
        return Empty()
    raise ValueError(f"term JSON node has no known kind: {sorted(data)}")


def concat(*terms: Term) -> Term:
    out: Term | None = None
    for t in terms:
        if isinstance(t, Empty):
            continue
        out = t if out is None else Cat(out, t)
    return Empty() if out is None else out


def parse_term(text: str, variables: str = "xyz") -> Term:
    s = text.replace(" ", "")
    pos = 0

    def atom() -> Term:
        nonlocal pos
        if s[pos] == "(":
            pos += 1
            t = seq()
            if pos >= len(s) or s[pos] != ")":
                raise ValueError(f"unbalanced parenthesis in {text!r}")
            pos += 1
        elif s[pos] in ")^":
            raise ValueError(f"unexpected {s[pos]!r} in {text!r}")
        else:
            c = s[pos]
            pos += 1
            t = Sym("var" if c in variables else "letter", c)
        while pos < len(s) and s[pos] == "^":
            pos += 1
            if pos < len(s) and s[pos] == "w":
                pos += 1
                t = Omega(t)
            else:
                start = pos
                while pos < len(s) and s[pos].isdigit():
                    pos += 1
                if start == pos:
                    raise ValueError(f"bad exponent in {text!r}")
                t = concat(*[t] * int(s[start:pos]))
        return t

    def seq() -> Term:
        parts = []
        while pos < len(s) and s[pos] != ")":
            parts.append(atom())
        return concat(*parts)

    t = seq()
    if pos != len(s):
        raise ValueError(f"unbalanced parenthesis in {text!r}")
    return t


def parse_identity(text: str, variables: str = "xyz") -> Identity:
    if text.count("=") != 1:
        raise ValueError(f"identity needs exactly one '=': {text!r}")
    lhs, rhs = text.split("=")
    return Identity(parse_term(lhs, variables), parse_term(rhs, variables))


PRESETS: dict[str, list[str]] = {
    "ac0": ["xy=yx", "x^2y=xy^2"],
    "acc0": ["xy=yx"],
    "cc0": ["xy=yx", "x^w=y^w"],
}


def preset(name: str) -> list[Identity]:
    try:
        return [parse_identity(t) for t in PRESETS[name]]
    except KeyError:
        raise ValueError(f"unknown identity preset {name!r}; choose from {sorted(PRESETS)}") from None


def evaluate_term(t: Term, m: FiniteMonoid, h: MonoidMorphism | None = None,
                  assignment: Mapping[str, int] | None = None) -> int:
    if isinstance(t, Sym):
        if t.kind == "var":
            if assignment is None or t.name not in assignment:
                raise KeyError(f"unbound variable {t.name!r}")
            return assignment[t.name]
        if h is None:
            raise AlphabetError(f"letter {t.name!r} needs a morphism to be evaluated")
        return h.letter(t.name)
    if isinstance(t, Cat):
        return m.mul(evaluate_term(t.left, m, h, assignment), evaluate_term(t.right, m, h, assignment))
    if isinstance(t, Omega):
        return omega_power(m, evaluate_term(t.child, m, h, assignment))
    return m.identity


def monoid_satisfies_identity(m: FiniteMonoid, identity: Identity,
                              h: MonoidMorphism | None = None) -> dict[str, int] | None:
    """First failing assignment of the identity's variables, or None if it holds.

    Assignments are tried in lexicographic order over the sorted variable
    names.  Letters (if any) are interpreted through ``h``.
    """
    names = identity.variables()
    for values in product(range(m.size), repeat=len(names)):
        env = dict(zip(names, values))
        if evaluate_term(identity.lhs, m, h, env) != evaluate_term(identity.rhs, m, h, env):
            return env
    return None


def satisfies_all(m: FiniteMonoid, identities: list[Identity]) -> bool:
    return all(monoid_satisfies_identity(m, i) is None for i in identities)


def language_satisfies_identity(d: Dfa, identity: Identity) -> dict[str, int] | None:
    """Check an identity on the syntactic monoid of L(d).

    Returns None when L satisfies it, otherwise a counterexample assignment
    (empty for a failing ground identity).
    """
    d = minimize(d)
    foreign = [a for a in identity.letters() if a not in d.alphabet]
    if foreign:
        raise AlphabetError(f"identity letters {foreign} not in alphabet {d.alphabet}")
    m, h = syntactic_morphism(d)
    return monoid_satisfies_identity(m, identity, h)


def regular_in_profinite_ultrafilter(d: Dfa, t: Term) -> bool:
    """Whether L(d) belongs to the ultrafilter denoted by the ground term t."""
    if term_symbols(t, "var"):
        raise ValueError("profinite membership needs a ground term")
    d = minimize(d)
    foreign = sorted(a for a in term_symbols(t, "letter") if a not in d.alphabet)
    if foreign:
        raise AlphabetError(f"term letters {foreign} not in alphabet {d.alphabet}")
    m, h = syntactic_morphism(d)
    return evaluate_term(t, m, h) in accepting_elements(d, h)
