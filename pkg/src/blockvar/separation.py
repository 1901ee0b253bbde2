"""Finite-scale separation experiments.

The completeness direction says: if L lies in the block product, some
candidate (position partition, morphism into a gate-variety monoid, length
threshold) determines membership from the per-class morphism images.  Here
every candidate inside explicit bounds is refuted by a concrete pair of
equal-length words with equal per-class images and different membership.
This is evidence within the stated bounds, not a proof.

An independent check enumerates all single-layer circuits at a fixed input
length.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .circuits import (BITS, BoolNode, Circuit, ConstNode, GateNode, GateType, InputNode,
                       LayeredCircuitFamily, evaluate_circuit)
from .identities import Identity, satisfies_all
from .monoid import FiniteMonoid, MonoidMorphism, syntactic_morphism
from .partition import Lt, Mod, PAnd, PartitionSpec, PNot, POr, Pred, TrueP
from .regular import AlphabetError, Dfa, Word, builtin_language, word_str

log = logging.getLogger(__name__)


class OracleUndefined(ValueError):
    pass


class BoundsExceeded(ValueError):
    pass


class LanguageOracle:
    """A total membership predicate on words, optionally only up to a length."""

    def __init__(self, name: str, alphabet: Sequence[str], predicate: Callable[[Word], bool],
                 max_length: int | None = None):
        self.name = name
        self.alphabet = tuple(alphabet)
        self._predicate = predicate
        self.max_length = max_length
        self._by_length: dict[int, list[bool]] = {}

    @classmethod
    def from_dfa(cls, d: Dfa, name: str = "dfa") -> "LanguageOracle":
        return cls(name, d.alphabet, d.accepts)

    @classmethod
    def named(cls, name: str) -> "LanguageOracle":
        """``and`` (1*), ``or``, ``parity`` (even number of 1s), ``mod:p``."""
        if name in ("and", "or", "parity"):
            return cls.from_dfa(builtin_language(name), name)
        if name.startswith("mod:"):
            return cls.from_dfa(builtin_language("mod", [int(name[4:])]), name)
        raise ValueError(f"unknown target language {name!r}")

    @classmethod
    def from_table(cls, name: str, alphabet: Sequence[str], table: Mapping[str, bool],
                   max_length: int) -> "LanguageOracle":
        alphabet = tuple(alphabet)

        def pred(w: Word) -> bool:
            key = word_str(w)
            if key not in table:
                raise OracleUndefined(f"table oracle {name!r} has no entry for {key!r}")
            return bool(table[key])
        return cls(name, alphabet, pred, max_length)

    def _check_length(self, n: int) -> None:
        if self.max_length is not None and n > self.max_length:
            raise OracleUndefined(f"oracle {self.name!r} is defined only up to length {self.max_length}")

    def accepts(self, w: Sequence[str]) -> bool:
        w = tuple(w)
        self._check_length(len(w))
        for a in w:
            if a not in self.alphabet:
                raise AlphabetError(f"letter {a!r} not in alphabet {self.alphabet}")
        return bool(self._predicate(w))

    def words(self, n: int) -> list[Word]:
        return list(product(self.alphabet, repeat=n))

    def table(self, n: int) -> list[bool]:
        """Memberships of all words of length n, in lexicographic order."""
        if n not in self._by_length:
            self._check_length(n)
            self._by_length[n] = [bool(self._predicate(w)) for w in self.words(n)]
        return self._by_length[n]


# --- substitution and swaps -------------------------------------------------

@dataclass(frozen=True, order=True)
class PositionPair:
    i: int  # distance from start
    n: int  # distance from end

    @property
    def length(self) -> int:
        return self.i + self.n + 1


def in_substitution_domain(w: Sequence[str], s: Sequence[str], p: Sequence[PositionPair]) -> bool:
    if len(s) != len(p):
        return False
    if any(q.i + q.n != len(w) - 1 for q in p):
        return False
    firsts = [q.i for q in p]
    return all(a < b for a, b in zip(firsts, firsts[1:])) and all(0 <= x < len(w) for x in firsts)


def substitute(w: Sequence[str], s: Sequence[str], p: Sequence[PositionPair]) -> Word:
    """Write s_t at position p_t.i of w when (w, s, p) is a correct
    substitution; return w unchanged otherwise."""
    w = tuple(w)
    if not in_substitution_domain(w, s, p):
        return w
    out = list(w)
    for letter, q in zip(s, p):
        out[q.i] = letter
    return tuple(out)


def swap_respects(L: LanguageOracle, a: PositionPair, b: PositionPair) -> bool:
    """Whether swapping positions a.i and b.i never changes membership.

    Pairs addressing different word lengths are related by definition; for
    equal lengths the check is exhaustive at that single length.
    """
    if a.length != b.length:
        return True
    n = a.length
    words = L.words(n)
    member = L.table(n)
    index = {w: k for k, w in enumerate(words)}
    for w, m in zip(words, member):
        v = list(w)
        v[a.i], v[b.i] = v[b.i], v[a.i]
        if member[index[tuple(v)]] != m:
            return False
    return True


# --- candidates -------------------------------------------------------------

@dataclass(frozen=True)
class Candidate:
    partition: PartitionSpec
    morphism: MonoidMorphism
    threshold: int

    def admits(self, identities: Sequence[Identity]) -> bool:
        return satisfies_all(self.morphism.target, list(identities))

    def images(self, w: Sequence[str]) -> tuple[int, ...]:
        classes = self.partition.classes_for_length(len(w))
        m = self.morphism.target
        acc = [m.identity] * len(self.partition)
        for a, k in zip(w, classes):
            acc[k] = m.mul(acc[k], self.morphism.letter(a))
        return tuple(acc)

    def describe(self) -> dict:
        return {
            "partition": str(self.partition),
            "monoid_size": self.morphism.target.size,
            "monoid": [list(r) for r in self.morphism.target.table],
            "image": {a: self.morphism.image[a] for a in self.morphism.source},
            "threshold": self.threshold,
        }


def validate_witness(L: LanguageOracle, c: Candidate, s: Sequence[str], t: Sequence[str]) -> bool:
    return (len(s) == len(t) >= c.threshold
            and c.images(s) == c.images(t)
            and L.accepts(s) != L.accepts(t))


class _WitnessSearch:
    """Per-length first witnesses for one (partition, morphism) pair."""

    def __init__(self, L: LanguageOracle, partition: PartitionSpec, h: MonoidMorphism):
        self.L = L
        self.partition = partition
        self.h = h
        self._found: dict[int, tuple[Word, Word] | None] = {}

    def at_length(self, n: int) -> tuple[Word, Word] | None:
        if n not in self._found:
            self._found[n] = self._search(n)
        return self._found[n]

    def _search(self, n: int) -> tuple[Word, Word] | None:
        classes = self.partition.classes_for_length(n)
        words = self.L.words(n)
        member = self.L.table(n)
        table = self.h.target.table
        e = self.h.target.identity
        img = [self.h.letter(a) for a in self.L.alphabet]
        letter_idx = {a: k for k, a in enumerate(self.L.alphabet)}
        r = len(self.partition)
        # key -> [first accepted word index, first rejected word index]
        firsts: dict[tuple, list] = {}
        for wi, w in enumerate(words):
            acc = [e] * r
            for a, k in zip(w, classes):
                acc[k] = table[acc[k]][img[letter_idx[a]]]
            slot = firsts.setdefault(tuple(acc), [None, None])
            side = 0 if member[wi] else 1
            if slot[side] is None:
                slot[side] = wi
        best = None
        for x, y in firsts.values():
            if x is None or y is None:
                continue
            s, t = (x, y) if x < y else (y, x)
            if best is None or s < best[0]:
                best = (s, t)
        if best is None:
            return None
        return words[best[0]], words[best[1]]

    def first_from(self, n0: int, max_len: int) -> tuple[Word, Word] | None:
        for n in range(n0, max_len + 1):
            hit = self.at_length(n)
            if hit is not None:
                return hit
        return None


def exhn_counterexample(L: LanguageOracle, c: Candidate, max_len: int) -> tuple[Word, Word] | None:
    """Length-lexicographically first pair (s, t) with c.threshold <= |s| = |t|
    <= max_len, equal images on every class, and different membership.

    Within one length, s is the smallest word lying in an image group that
    contains both members and non-members; t is the smallest word of that
    group on the other side.
    """
    if max_len < c.threshold:
        raise ValueError("max_len must be at least the candidate threshold")
    if tuple(c.morphism.source) != L.alphabet:
        raise AlphabetError("candidate morphism alphabet differs from the language alphabet")
    return _WitnessSearch(L, c.partition, c.morphism).first_from(c.threshold, max_len)


# --- candidate enumeration --------------------------------------------------

def _atoms(max_modulus: int, max_threshold: int) -> list[Pred]:
    out: list[Pred] = []
    for var in "ij":
        out += [Lt(var, c) for c in range(1, max_threshold + 1)]
    for var in "ij":
        out += [Mod(var, r, m) for m in range(2, max_modulus + 1) for r in range(m)]
    return out


def _class_signature(p: PartitionSpec, grid: int) -> tuple[int, ...]:
    relabel: dict[int, int] = {}
    return tuple(relabel.setdefault(p.class_of(i, j), len(relabel))
                 for i in range(grid + 1) for j in range(grid + 1))


def enumerate_partitions(max_classes: int, max_modulus: int, max_threshold: int,
                         grid: int) -> list[PartitionSpec]:
    """Partition specs from the atom grammar, deduplicated by their class
    function on [0, grid]^2 (up to renaming classes).

    Class predicates are literals (atoms or negated atoms) and two-literal
    conjunctions/disjunctions.
    """
    atoms = _atoms(max_modulus, max_threshold)
    literals: list[Pred] = atoms + [PNot(a) for a in atoms]
    preds: list[Pred] = list(literals)
    for x, y in combinations(literals, 2):
        preds.append(PAnd((x, y)))
        preds.append(POr((x, y)))

    seen: dict[tuple, PartitionSpec] = {}

    def offer(spec: PartitionSpec) -> None:
        key = _class_signature(spec, grid)
        if key not in seen and len(set(key)) == len(spec):
            seen[key] = spec

    offer(PartitionSpec.single())
    layer = [()]
    for _ in range(max_classes - 1):
        nxt = []
        for prefix in layer:
            for q in preds:
                seq = prefix + (q,)
                nxt.append(seq)
                offer(PartitionSpec(seq + (TrueP(),)))
        layer = nxt
    return list(seen.values())


def all_morphisms(alphabet: Sequence[str], m: FiniteMonoid) -> Iterable[MonoidMorphism]:
    for values in product(range(m.size), repeat=len(alphabet)):
        yield MonoidMorphism(tuple(alphabet), m, dict(zip(alphabet, values)))


@dataclass
class CandidateOutcome:
    candidate: Candidate
    witness: tuple[Word, Word] | None

    def to_json(self) -> dict:
        d = self.candidate.describe()
        d["witness"] = None if self.witness is None else [word_str(w) for w in self.witness]
        return d


@dataclass
class RefutationReport:
    target: str
    identities: list[str]
    bounds: dict
    admitted: list[int]
    skipped: list[dict]
    outcomes: list[CandidateOutcome] = field(default_factory=list)

    @property
    def refuted(self) -> int:
        return sum(o.witness is not None for o in self.outcomes)

    @property
    def summary(self) -> str:
        if not self.outcomes:
            return "no candidates"
        if self.refuted == len(self.outcomes):
            return "evidenced at scale"
        return "not evidenced"

    @property
    def all_refuted(self) -> bool:
        return bool(self.outcomes) and self.refuted == len(self.outcomes)

    def to_json(self) -> dict:
        return {
            "target": self.target,
            "identities": self.identities,
            "bounds": self.bounds,
            "admitted_monoids": self.admitted,
            "skipped_monoids": self.skipped,
            "candidates": len(self.outcomes),
            "refuted": self.refuted,
            "summary": self.summary,
            "note": "evidence within the stated bounds, not a proof",
            "outcomes": [o.to_json() for o in self.outcomes],
        }

    def to_text(self, limit: int = 20) -> str:
        lines = [
            f"target      : {self.target}",
            f"identities  : {', '.join(self.identities)}",
            "bounds      : " + ", ".join(f"{k}={v}" for k, v in self.bounds.items()),
            f"monoids     : {len(self.admitted)} admitted, {len(self.skipped)} skipped",
            f"candidates  : {len(self.outcomes)}, refuted {self.refuted}",
            f"summary     : {self.summary} (evidence within bounds, not a proof)",
            "",
            f"{'partition':<28} {'|M|':>3} {'image':<12} {'n0':>2}  witness",
        ]
        shown = [o for o in self.outcomes if o.witness is None][:limit]
        shown += [o for o in self.outcomes if o.witness is not None][:max(0, limit - len(shown))]
        for o in shown:
            c = o.candidate
            img = ",".join(f"{a}>{c.morphism.image[a]}" for a in c.morphism.source)
            wit = "unrefuted" if o.witness is None else " / ".join(word_str(w) for w in o.witness)
            lines.append(f"{str(c.partition):<28} {c.morphism.target.size:>3} {img:<12} "
                         f"{c.threshold:>2}  {wit}")
        if len(self.outcomes) > len(shown):
            lines.append(f"... {len(self.outcomes) - len(shown)} more")
        return "\n".join(lines)


def refute_candidates(L: LanguageOracle, identities: Sequence[Identity],
                      partition_bounds: tuple[int, int, int], monoid_catalog: Sequence[FiniteMonoid],
                      max_len: int, thresholds: Sequence[int] = (0, 1, 2, 3)) -> RefutationReport:
    """Run the witness search on every candidate inside the bounds.

    ``partition_bounds`` is (max classes, max modulus, max threshold).
    Catalog monoids violating an identity are skipped and listed in the
    report.  Candidates are processed in a fixed order: partition, monoid,
    letter assignment, threshold.
    """
    max_classes, max_modulus, max_threshold = partition_bounds
    identities = list(identities)
    admitted, skipped = [], []
    for n, m in enumerate(monoid_catalog):
        if satisfies_all(m, identities):
            admitted.append(n)
        else:
            skipped.append({"index": n, "size": m.size, "reason": "violates an identity"})
    partitions = enumerate_partitions(max_classes, max_modulus, max_threshold, max_len)
    report = RefutationReport(
        target=L.name,
        identities=[str(i) for i in identities],
        bounds={"max_classes": max_classes, "max_modulus": max_modulus,
                "max_threshold": max_threshold, "max_len": max_len,
                "thresholds": list(thresholds), "partitions": len(partitions)},
        admitted=admitted,
        skipped=skipped,
    )
    for p in partitions:
        for n in admitted:
            for h in all_morphisms(L.alphabet, monoid_catalog[n]):
                search = _WitnessSearch(L, p, h)
                for n0 in thresholds:
                    c = Candidate(p, h, n0)
                    wit = search.first_from(n0, max_len)
                    if wit is not None and not validate_witness(L, c, *wit):
                        raise AssertionError(f"witness {wit} failed re-validation")
                    report.outcomes.append(CandidateOutcome(c, wit))
    log.info("%s: %d/%d candidates refuted", L.name, report.refuted, len(report.outcomes))
    return report


def generated_submonoid(factors: Sequence[FiniteMonoid], alphabet: Sequence[str],
                        images: Mapping[str, tuple[int, ...]]) -> MonoidMorphism:
    """Morphism into the submonoid of a direct product generated by the
    letter images (avoids building the full product table)."""
    ident = tuple(f.identity for f in factors)

    def mul(x, y):
        return tuple(f.mul(a, b) for f, a, b in zip(factors, x, y))

    elems = [ident]
    index = {ident: 0}
    i = 0
    while i < len(elems):
        x = elems[i]
        for a in alphabet:
            y = mul(x, images[a])
            if y not in index:
                index[y] = len(elems)
                elems.append(y)
        i += 1
    table = tuple(tuple(index[mul(x, y)] for y in elems) for x in elems)
    return MonoidMorphism(tuple(alphabet), FiniteMonoid(table, 0), {a: index[images[a]] for a in alphabet})


def candidate_from_family(fam: LayeredCircuitFamily, threshold: int = 0) -> Candidate:
    """The candidate a layered family induces: its own partition and, per
    (layer gate, class), the gate's syntactic image of the encoded letter."""
    factors, parts = [], []
    for g in fam.layer:
        m, h = syntactic_morphism(g.gate.language)
        for k in range(len(fam.partition)):
            factors.append(m)
            parts.append((g, k, h))
    images = {}
    for a in fam.alphabet:
        images[a] = tuple(h(tuple(BITS[a in s] for s in g.wires(k))) for g, k, h in parts)
    if not factors:
        trivial = FiniteMonoid(((0,),))
        return Candidate(fam.partition, MonoidMorphism(fam.alphabet, trivial, {a: 0 for a in fam.alphabet}),
                         threshold)
    return Candidate(fam.partition, generated_submonoid(factors, fam.alphabet, images), threshold)


# --- brute-force circuits ---------------------------------------------------

def _letter_set_options(alphabet: Sequence[str]) -> list[frozenset | None]:
    opts: list[frozenset | None] = [None]
    for r in range(len(alphabet) + 1):
        opts += [frozenset(c) for c in combinations(alphabet, r)]
    return opts


def brute_force_circuit_search(target: LanguageOracle, base: Sequence[GateType], k: int,
                               multiplicity: int, n: int) -> Circuit | None:
    """Search all single-layer circuits at input length n.

    Each of at most k gates takes a type from ``base`` and, at every
    position, either no wire or one wire labeled by a subset of the alphabet.
    The top combiner may be any Boolean function of the gate bits, so a
    layer works iff the gate-bit vector determines the target on A^n.
    """
    A = target.alphabet
    if len(A) > 2 or k > 2 or multiplicity > 1 or n > 6:
        raise BoundsExceeded("brute force is limited to |A| <= 2, k <= 2, multiplicity <= 1, n <= 6")
    if multiplicity < 1 or k < 1:
        raise ValueError("k and multiplicity must be at least 1")
    words = target.words(n)
    goal = np.array(target.table(n), dtype=bool)
    opts = _letter_set_options(A)

    # output vector of every single-gate configuration, deduplicated up to complement
    vectors: dict[bytes, tuple[GateType, tuple]] = {}
    rows = []
    for gate in base:
        for choice in product(range(len(opts)), repeat=n):
            wiring = tuple(opts[c] for c in choice)
            out = np.array([gate(tuple(BITS[w[i] in s] for i, s in enumerate(wiring) if s is not None))
                            for w in words], dtype=bool)
            key = out.tobytes()
            if key in vectors or (~out).tobytes() in vectors:
                continue
            vectors[key] = (gate, wiring)
            rows.append(out)
    configs = list(vectors.values())
    V = np.array(rows, dtype=bool)
    log.info("brute force: %d distinct gate vectors at n=%d", len(configs), n)

    def determines(keys: np.ndarray, width: int) -> np.ndarray:
        ok = np.ones(keys.shape[0], dtype=bool)
        for c in range(1 << width):
            mask = keys == c
            ok &= ~((mask & goal).any(axis=1) & (mask & ~goal).any(axis=1))
        return ok

    hit = None
    ok1 = determines(V.astype(np.int8), 1)
    if ok1.any():
        hit = (int(np.argmax(ok1)),)
    elif k >= 2:
        for i in range(len(configs)):
            keys = 2 * V[i].astype(np.int8) + V[i:].astype(np.int8)
            ok = determines(keys, 2)
            if ok.any():
                hit = (i, i + int(np.argmax(ok)))
                break
    if hit is None:
        return None
    circuit = _build_layer_circuit(A, n, [configs[i] for i in hit], words, goal)
    for w, g in zip(words, goal):
        if bool(evaluate_circuit(circuit, w)) != bool(g):
            raise AssertionError("brute-force circuit failed re-validation")
    return circuit


def _build_layer_circuit(alphabet, n, gates, words, goal) -> Circuit:
    nodes: list = []
    inputs: dict = {}

    def add(node) -> int:
        nodes.append(node)
        return len(nodes) - 1

    gate_ids = []
    for gate, wiring in gates:
        preds = []
        for i, s in enumerate(wiring):
            if s is None:
                continue
            if (i, s) not in inputs:
                inputs[i, s] = add(InputNode(i, s))
            preds.append(inputs[i, s])
        gate_ids.append(add(GateNode(gate, tuple(preds))))

    # truth table of the top function on the gate-bit vectors that occur
    truth: dict[tuple[int, ...], bool] = {}
    for w, g in zip(words, goal):
        bits = tuple(int(gate(tuple(BITS[w[i] in s] for i, s in enumerate(wiring) if s is not None)))
                     for gate, wiring in gates)
        truth[bits] = bool(g)
    ones = sorted(b for b, v in truth.items() if v)
    if not ones or len(ones) == len(truth):
        out = add(ConstNode(int(bool(ones))))
        return Circuit(tuple(alphabet), n, tuple(nodes), out)
    negs = {}
    terms = []
    for bits in ones:
        lits = []
        for gid, b in zip(gate_ids, bits):
            if b:
                lits.append(gid)
            else:
                if gid not in negs:
                    negs[gid] = add(BoolNode("not1", (gid,)))
                lits.append(negs[gid])
        acc = lits[0]
        for x in lits[1:]:
            acc = add(BoolNode("and2", (acc, x)))
        terms.append(acc)
    acc = terms[0]
    for x in terms[1:]:
        acc = add(BoolNode("or2", (acc, x)))
    return Circuit(tuple(alphabet), n, tuple(nodes), acc)
