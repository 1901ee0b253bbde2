"""Finite monoids, syntactic morphisms and omega-powers."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import permutations, product
from typing import Iterable, Mapping, Sequence

from .regular import AlphabetError, Dfa, Word, minimize


@dataclass(frozen=True)
class FiniteMonoid:
    table: tuple[tuple[int, ...], ...]
    identity: int = 0

    def __post_init__(self):
        n = len(self.table)
        if n < 1:
            raise ValueError("a monoid has at least one element")
        if not 0 <= self.identity < n:
            raise ValueError("identity out of range")
        for row in self.table:
            if len(row) != n or any(not 0 <= v < n for v in row):
                raise ValueError("multiplication table must be a total n x n table")

    @property
    def size(self) -> int:
        return len(self.table)

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def prod(self, xs: Iterable[int]) -> int:
        acc = self.identity
        for x in xs:
            acc = self.table[acc][x]
        return acc

    def power(self, x: int, n: int) -> int:
        acc, base = self.identity, x
        while n:
            if n & 1:
                acc = self.table[acc][base]
            base = self.table[base][base]
            n >>= 1
        return acc

    def is_associative(self) -> bool:
        t = self.table
        r = range(self.size)
        return all(t[t[x][y]][z] == t[x][t[y][z]] for x in r for y in r for z in r)

    def is_identity_neutral(self) -> bool:
        e = self.identity
        return all(self.table[e][x] == x == self.table[x][e] for x in range(self.size))

    def is_commutative(self) -> bool:
        t = self.table
        return all(t[x][y] == t[y][x] for x in range(self.size) for y in range(x))

    def to_json(self) -> dict:
        return {"size": self.size, "identity": self.identity, "table": [list(r) for r in self.table]}

    @classmethod
    def from_json(cls, data: Mapping) -> "FiniteMonoid":
        for key in ("size", "identity", "table"):
            if key not in data:
                raise ValueError(f"monoid JSON missing field {key!r}")
        table = tuple(tuple(int(v) for v in row) for row in data["table"])
        if len(table) != int(data["size"]):
            raise ValueError("monoid JSON field 'table' does not match 'size'")
        m = cls(table, int(data["identity"]))
        if not m.is_identity_neutral():
            raise ValueError("monoid JSON field 'identity' is not neutral")
        if not m.is_associative():
            raise ValueError("monoid JSON field 'table' is not associative")
        return m


def omega_power(m: FiniteMonoid, x: int) -> int:
    """The idempotent power of x.

    Walks x, x^2, ... until the first repeat x^i = x^(i+p) and returns x^k
    for the k >= i in the cycle with k divisible by p.
    """
    seen: dict[int, int] = {}
    powers = [m.identity]
    k, cur = 1, x
    while cur not in seen:
        seen[cur] = k
        powers.append(cur)
        cur = m.mul(cur, x)
        k += 1
    start = seen[cur]
    period = k - start
    j = start + (-start) % period
    return powers[j]


def cyclic_group(p: int) -> FiniteMonoid:
    return FiniteMonoid(tuple(tuple((x + y) % p for y in range(p)) for x in range(p)))


def u1() -> FiniteMonoid:
    """{e, z} with z absorbing: the syntactic monoid of 1*."""
    return FiniteMonoid(((0, 1), (1, 1)))


def chain(n: int) -> FiniteMonoid:
    """Totally ordered semilattice 0 > 1 > ... > n-1 under min (identity 0)."""
    return FiniteMonoid(tuple(tuple(max(x, y) for y in range(n)) for x in range(n)))


def direct_product(*factors: FiniteMonoid) -> FiniteMonoid:
    elems = list(product(*(range(f.size) for f in factors)))
    index = {e: i for i, e in enumerate(elems)}
    table = tuple(
        tuple(index[tuple(f.mul(a, b) for f, a, b in zip(factors, x, y))] for y in elems)
        for x in elems
    )
    return FiniteMonoid(table, index[tuple(f.identity for f in factors)])


def _canonical_relabel(table: Sequence[Sequence[int]], identity: int) -> tuple:
    n = len(table)
    others = [x for x in range(n) if x != identity]
    best = None
    for perm in permutations(others):
        order = (identity,) + perm
        pos = {x: i for i, x in enumerate(order)}
        t = tuple(tuple(pos[table[order[i]][order[j]]] for j in range(n)) for i in range(n))
        if best is None or t < best:
            best = t
    return best


def commutative_monoids(max_size: int) -> list[FiniteMonoid]:
    """All commutative monoids of size <= max_size up to isomorphism.

    Brute force over symmetric tables on the non-identity elements; sizes
    above 4 are refused (5 elements already means 5^10 candidate tables).
    """
    if max_size > 4:
        raise ValueError("exhaustive enumeration supports sizes up to 4")
    found: dict[tuple, FiniteMonoid] = {}
    for n in range(1, max_size + 1):
        free = [(x, y) for x in range(1, n) for y in range(x, n)]
        for values in product(range(n), repeat=len(free)):
            t = [[0] * n for _ in range(n)]
            for x in range(n):
                t[0][x] = t[x][0] = x
            for (x, y), v in zip(free, values):
                t[x][y] = t[y][x] = v
            m = FiniteMonoid(tuple(tuple(r) for r in t))
            if not m.is_associative():
                continue
            key = _canonical_relabel(m.table, 0)
            if key not in found:
                found[key] = FiniteMonoid(key)
    return [found[k] for k in sorted(found, key=lambda k: (len(k), k))]


def default_catalog() -> list[FiniteMonoid]:
    """Z_p for p <= 5, the 1*-monoid, and pairwise products up to size 8."""
    base = [cyclic_group(p) for p in range(1, 6)] + [u1()]
    out = list(base)
    for i, a in enumerate(base[1:], 1):
        for b in base[i:]:
            if 1 < a.size * b.size <= 8:
                out.append(direct_product(a, b))
    return out


@dataclass(frozen=True)
class MonoidMorphism:
    source: tuple[str, ...]
    target: FiniteMonoid
    image: Mapping[str, int]

    def __post_init__(self):
        for a in self.source:
            if a not in self.image:
                raise AlphabetError(f"morphism has no image for letter {a!r}")
            if not 0 <= self.image[a] < self.target.size:
                raise ValueError(f"image of {a!r} is not a monoid element")

    def letter(self, a: str) -> int:
        try:
            return self.image[a]
        except KeyError:
            raise AlphabetError(f"letter {a!r} not in morphism source {self.source}") from None

    def __call__(self, w: Iterable[str]) -> int:
        t = self.target.table
        acc = self.target.identity
        for a in w:
            acc = t[acc][self.letter(a)]
        return acc

    def representatives(self) -> dict[int, Word]:
        """Shortest (then lexicographically first) word for each reachable element."""
        reps: dict[int, Word] = {self.target.identity: ()}
        queue = deque([self.target.identity])
        while queue:
            x = queue.popleft()
            for a in self.source:
                y = self.target.mul(x, self.image[a])
                if y not in reps:
                    reps[y] = reps[x] + (a,)
                    queue.append(y)
        return reps

    def to_json(self) -> dict:
        return {
            "alphabet": list(self.source),
            "monoid": self.target.to_json(),
            "image": {a: self.image[a] for a in self.source},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "MonoidMorphism":
        for key in ("alphabet", "monoid", "image"):
            if key not in data:
                raise ValueError(f"morphism JSON missing field {key!r}")
        return cls(tuple(data["alphabet"]), FiniteMonoid.from_json(data["monoid"]),
                   {str(a): int(v) for a, v in data["image"].items()})


def transition_monoid(d: Dfa) -> tuple[FiniteMonoid, MonoidMorphism]:
    """Monoid of state transformations generated by the letters.

    Element 0 is the identity transformation; further elements are numbered
    in breadth-first order of their shortest generating words.  The product
    x * y means "apply x, then y", matching left-to-right word reading.
    """
    n = d.state_count
    ident = tuple(range(n))
    gens = [tuple(d.delta[q][k] for q in range(n)) for k in range(len(d.alphabet))]
    index = {ident: 0}
    elems = [ident]
    queue = deque([ident])
    while queue:
        f = queue.popleft()
        for g in gens:
            fg = tuple(g[f[q]] for q in range(n))
            if fg not in index:
                index[fg] = len(elems)
                elems.append(fg)
                queue.append(fg)
    table = tuple(
        tuple(index[tuple(g[f[q]] for q in range(n))] for g in elems) for f in elems
    )
    m = FiniteMonoid(table, 0)
    h = MonoidMorphism(d.alphabet, m, {a: index[g] for a, g in zip(d.alphabet, gens)})
    return m, h


def syntactic_morphism(d: Dfa) -> tuple[FiniteMonoid, MonoidMorphism]:
    return transition_monoid(minimize(d))


def accepting_elements(d: Dfa, h: MonoidMorphism) -> frozenset[int]:
    """h(L) for the transition morphism h of d: elements sending the initial
    state into an accepting state."""
    reps = h.representatives()
    return frozenset(x for x, w in reps.items() if d.accepts(w))
