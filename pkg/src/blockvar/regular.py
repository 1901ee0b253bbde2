"""Regular languages as complete DFAs.

Every language in the package is carried by a :class:`Dfa` over an explicit,
ordered alphabet.  The canonical form produced by :func:`minimize` (minimal,
states numbered in breadth-first order from the initial state) doubles as the
equality witness for languages.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence

Word = tuple[str, ...]


class AlphabetError(ValueError):
    pass


def as_word(w: Sequence[str] | str) -> Word:
    return tuple(w)


def word_str(w: Sequence[str]) -> str:
    """Render a word; single-character letters are juxtaposed."""
    if all(len(a) == 1 for a in w):
        return "".join(w)
    return " ".join(w)


def words_upto(alphabet: Sequence[str], max_len: int) -> Iterator[Word]:
    """All words of length <= max_len in length-lexicographic order."""
    for n in range(max_len + 1):
        yield from product(alphabet, repeat=n)


@dataclass(frozen=True)
class Dfa:
    alphabet: tuple[str, ...]
    initial: int
    accepting: frozenset[int]
    # delta[q][k] is the successor of state q on alphabet[k]
    delta: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(set(self.alphabet)) != len(self.alphabet):
            raise AlphabetError(f"duplicate letters in alphabet {self.alphabet}")
        if any(not a for a in self.alphabet):
            raise AlphabetError("letters must be non-empty strings")
        n = len(self.delta)
        if n == 0 or not 0 <= self.initial < n:
            raise ValueError(f"initial state {self.initial} out of range")
        if any(not 0 <= q < n for q in self.accepting):
            raise ValueError("accepting state out of range")
        for row in self.delta:
            if len(row) != len(self.alphabet):
                raise ValueError("transition table is not total")
            if any(not 0 <= r < n for r in row):
                raise ValueError("transition target out of range")

    @property
    def state_count(self) -> int:
        return len(self.delta)

    def letter_index(self, a: str) -> int:
        try:
            return self.alphabet.index(a)
        except ValueError:
            raise AlphabetError(f"letter {a!r} not in alphabet {self.alphabet}") from None

    def step(self, q: int, a: str) -> int:
        return self.delta[q][self.letter_index(a)]

    def run(self, w: Iterable[str], start: int | None = None) -> int:
        q = self.initial if start is None else start
        index = {a: k for k, a in enumerate(self.alphabet)}
        for a in w:
            if a not in index:
                raise AlphabetError(f"letter {a!r} not in alphabet {self.alphabet}")
            q = self.delta[q][index[a]]
        return q

    def accepts(self, w: Iterable[str]) -> bool:
        return self.run(w) in self.accepting

    def with_start_and_final(self, initial: int, accepting: Iterable[int]) -> "Dfa":
        return Dfa(self.alphabet, initial, frozenset(accepting), self.delta)

    # serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "alphabet": list(self.alphabet),
            "states": self.state_count,
            "initial": self.initial,
            "accepting": sorted(self.accepting),
            "transitions": [
                {"from": q, "on": a, "to": self.delta[q][k]}
                for q in range(self.state_count)
                for k, a in sorted(enumerate(self.alphabet), key=lambda ka: ka[1])
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Dfa":
        for key in ("alphabet", "states", "initial", "accepting", "transitions"):
            if key not in data:
                raise ValueError(f"DFA JSON missing field {key!r}")
        alphabet = tuple(str(a) for a in data["alphabet"])
        n = int(data["states"])
        table: dict[tuple[int, str], int] = {}
        for t in data["transitions"]:
            try:
                src, a, dst = int(t["from"]), str(t["on"]), int(t["to"])
            except (KeyError, TypeError) as exc:
                raise ValueError(f"DFA JSON field 'transitions' malformed: {t!r}") from exc
            if a not in alphabet:
                raise AlphabetError(f"DFA JSON field 'transitions': letter {a!r} not in alphabet")
            if (src, a) in table and table[src, a] != dst:
                raise ValueError(f"DFA JSON field 'transitions': conflicting entries for ({src}, {a!r})")
            table[src, a] = dst
        missing = [(q, a) for q in range(n) for a in alphabet if (q, a) not in table]
        if missing:
            raise ValueError(f"DFA JSON field 'transitions' not total, missing {missing[0]}")
        delta = tuple(tuple(table[q, a] for a in alphabet) for q in range(n))
        return cls(alphabet, int(data["initial"]), frozenset(int(q) for q in data["accepting"]), delta)

    def canonical_key(self) -> tuple:
        m = minimize(self)
        return (m.alphabet, m.initial, tuple(sorted(m.accepting)), m.delta)


def from_function(alphabet: Sequence[str], states: int, initial: int,
                  accepting: Iterable[int], step) -> Dfa:
    """Build a DFA from a transition callable ``step(q, letter) -> q'``."""
    delta = tuple(tuple(step(q, a) for a in alphabet) for q in range(states))
    return Dfa(tuple(alphabet), initial, frozenset(accepting), delta)


def _require(alphabet: Sequence[str], *letters: str) -> None:
    for a in letters:
        if a not in alphabet:
            raise AlphabetError(f"builtin language needs letter {a!r} in alphabet")


def builtin_language(name: str, params: Sequence[int] = (), alphabet: Sequence[str] = ("0", "1")) -> Dfa:
    """Minimal DFA for one of the named gate/test languages.

    ``and`` is 1*, ``or`` is the set of words containing a 1, ``mod`` with
    params ``[p]`` counts 1s modulo p (other letters are neutral), ``parity``
    is ``mod [2]``.  ``single_word`` takes letter indices into the alphabet.
    """
    alphabet = tuple(alphabet)
    if name == "and":
        _require(alphabet, "0", "1")
        d = from_function(alphabet, 2, 0, [0], lambda q, a: q if a == "1" else 1)
    elif name == "or":
        _require(alphabet, "0", "1")
        d = from_function(alphabet, 2, 0, [1], lambda q, a: 1 if a == "1" else q)
    elif name in ("mod", "parity"):
        _require(alphabet, "0", "1")
        if name == "parity":
            p = 2
        else:
            if not params:
                raise ValueError("mod requires a modulus parameter")
            p = int(params[0])
        if p < 1:
            raise ValueError("mod requires modulus p >= 1")
        d = from_function(alphabet, p, 0, [0], lambda q, a: (q + 1) % p if a == "1" else q)
    elif name == "all":
        d = from_function(alphabet, 1, 0, [0], lambda q, a: 0)
    elif name == "none":
        d = from_function(alphabet, 1, 0, [], lambda q, a: 0)
    elif name == "single_word":
        word = [alphabet[i] for i in params]
        n = len(word)
        # states 0..n track the prefix read, n+1 is the sink
        d = from_function(alphabet, n + 2, 0, [n],
                          lambda q, a: q + 1 if q < n and word[q] == a else n + 1)
    else:
        raise ValueError(f"unknown builtin language {name!r}")
    return minimize(d)


def minimize(d: Dfa) -> Dfa:
    """Canonical minimal complete DFA: Moore refinement on reachable states,
    then renumbering in breadth-first order (letters in alphabet order)."""
    k = len(d.alphabet)
    seen = {d.initial}
    queue = deque([d.initial])
    while queue:
        q = queue.popleft()
        for r in d.delta[q]:
            if r not in seen:
                seen.add(r)
                queue.append(r)
    reach = sorted(seen)

    block = {q: int(q in d.accepting) for q in reach}
    while True:
        sigs = {q: (block[q],) + tuple(block[d.delta[q][i]] for i in range(k)) for q in reach}
        ids: dict[tuple, int] = {}
        new = {q: ids.setdefault(sigs[q], len(ids)) for q in reach}
        if len(ids) == len(set(block.values())):
            break
        block = new
    block = new

    order: dict[int, int] = {}
    start = block[d.initial]
    order[start] = 0
    rep: dict[int, int] = {}
    for q in reach:
        rep.setdefault(block[q], q)
    queue = deque([start])
    while queue:
        b = queue.popleft()
        for i in range(k):
            c = block[d.delta[rep[b]][i]]
            if c not in order:
                order[c] = len(order)
                queue.append(c)
    inv = {v: b for b, v in order.items()}
    delta = tuple(
        tuple(order[block[d.delta[rep[inv[s]]][i]]] for i in range(k)) for s in range(len(order))
    )
    accepting = frozenset(order[block[q]] for q in reach if q in d.accepting)
    return Dfa(d.alphabet, 0, accepting, delta)


def equivalent(x: Dfa, y: Dfa) -> bool:
    return x.canonical_key() == y.canonical_key()


_OPS = {
    "union": lambda p, q: p or q,
    "intersection": lambda p, q: p and q,
    "difference": lambda p, q: p and not q,
    "xor": lambda p, q: p != q,
}


def combine(lhs: Dfa, rhs: Dfa | None, op: str) -> Dfa:
    """Boolean combination of two languages over the same alphabet."""
    if op == "complement":
        return minimize(lhs.with_start_and_final(
            lhs.initial, set(range(lhs.state_count)) - lhs.accepting))
    if op not in _OPS:
        raise ValueError(f"unknown Boolean operation {op!r}")
    if rhs is None:
        raise ValueError(f"{op} needs two operands")
    if lhs.alphabet != rhs.alphabet:
        raise AlphabetError(f"alphabet mismatch: {lhs.alphabet} vs {rhs.alphabet}")
    accept = _OPS[op]
    k = len(lhs.alphabet)
    start = (lhs.initial, rhs.initial)
    index = {start: 0}
    pairs = [start]
    delta: list[tuple[int, ...]] = []
    i = 0
    while i < len(pairs):
        p, q = pairs[i]
        row = []
        for a in range(k):
            nxt = (lhs.delta[p][a], rhs.delta[q][a])
            if nxt not in index:
                index[nxt] = len(pairs)
                pairs.append(nxt)
            row.append(index[nxt])
        delta.append(tuple(row))
        i += 1
    final = [n for n, (p, q) in enumerate(pairs) if accept(p in lhs.accepting, q in rhs.accepting)]
    return minimize(Dfa(lhs.alphabet, 0, frozenset(final), tuple(delta)))


def membership(d: Dfa, w: Sequence[str]) -> bool:
    return d.accepts(w)


def two_sided_quotients_with_witnesses(d: Dfa) -> list[tuple[Dfa, Word, Word]]:
    """Distinct quotients x^-1 L y^-1 together with one (x, y) realizing each.

    Start states are explored by extending x on the right, accepting sets
    {q | delta(q, y) in F} by extending y on the left; both saturate because
    the coordinate spaces are finite.
    """
    d = minimize(d)
    k = len(d.alphabet)

    starts: dict[int, Word] = {d.initial: ()}
    queue = deque([d.initial])
    while queue:
        q = queue.popleft()
        for i in range(k):
            r = d.delta[q][i]
            if r not in starts:
                starts[r] = starts[q] + (d.alphabet[i],)
                queue.append(r)

    finals: dict[frozenset[int], Word] = {d.accepting: ()}
    fqueue = deque([d.accepting])
    while fqueue:
        fs = fqueue.popleft()
        for i in range(k):
            pre = frozenset(q for q in range(d.state_count) if d.delta[q][i] in fs)
            if pre not in finals:
                finals[pre] = (d.alphabet[i],) + finals[fs]
                fqueue.append(pre)

    found: dict[tuple, tuple[Dfa, Word, Word]] = {}
    for q, x in starts.items():
        for fs, y in finals.items():
            m = minimize(d.with_start_and_final(q, fs))
            key = _serial_key(m)
            if key not in found:
                found[key] = (m, x, y)
    return [found[key] for key in sorted(found)]


def _serial_key(d: Dfa) -> str:
    return json.dumps(d.to_json(), sort_keys=True)


def two_sided_quotients(d: Dfa) -> list[Dfa]:
    return [m for m, _, _ in two_sided_quotients_with_witnesses(d)]


@dataclass(frozen=True)
class FreeMorphism:
    """Monoid morphism between free monoids, given by letter images."""

    source: tuple[str, ...]
    target: tuple[str, ...]
    image: Mapping[str, Word]

    def __post_init__(self):
        for a in self.source:
            if a not in self.image:
                raise AlphabetError(f"morphism has no image for letter {a!r}")
            for b in self.image[a]:
                if b not in self.target:
                    raise AlphabetError(f"image letter {b!r} not in target alphabet")

    def apply(self, w: Iterable[str]) -> Word:
        out: list[str] = []
        for a in w:
            if a not in self.image:
                raise AlphabetError(f"letter {a!r} not in morphism source")
            out.extend(self.image[a])
        return tuple(out)


def inverse_morphism_image(d: Dfa, h: FreeMorphism) -> Dfa:
    """DFA over h.source recognizing h^-1(L(d))."""
    if tuple(h.target) != d.alphabet:
        raise AlphabetError(f"morphism target {h.target} differs from DFA alphabet {d.alphabet}")
    delta = tuple(
        tuple(d.run(h.image[a], start=q) for a in h.source) for q in range(d.state_count)
    )
    return minimize(Dfa(tuple(h.source), d.initial, d.accepting, delta))


def is_commutative(d: Dfa) -> bool:
    """Whether L is closed under permuting letters: all letter actions on the
    minimal DFA commute pairwise."""
    m = minimize(d)
    k = len(m.alphabet)
    for a in range(k):
        for b in range(a + 1, k):
            for q in range(m.state_count):
                if m.delta[m.delta[q][a]][b] != m.delta[m.delta[q][b]][a]:
                    return False
    return True
