"""Position-class relabeling and block-product languages.

``transduce`` attaches to every position its partition class, producing a
word over the product alphabet A x D.  A :class:`RawBlockLang` is the inverse
image of a DFA over that product alphabet; a :class:`PresentedBlockLang`
is a Boolean formula over gate atoms, each atom being a letter-to-bits
encoding of the product alphabet followed by a gate language.  Layered
circuit families and presented block languages translate into each other.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence, Union

from . import booltree as bt
from .circuits import (BITS, GateType, GeneralCircuitFamily, LayerGate, LayeredCircuitFamily,
                       evaluate_circuit, instantiate_family)
from .partition import PartitionSpec
from .regular import (AlphabetError, Dfa, FreeMorphism, Word, builtin_language, combine,
                      inverse_morphism_image, words_upto)


def product_letter(a: str, k: int) -> str:
    return f"{a}@{k}"


def product_alphabet(alphabet: Sequence[str], p: PartitionSpec) -> tuple[str, ...]:
    return tuple(product_letter(a, k) for a in alphabet for k in range(len(p)))


def transduce(p: PartitionSpec, w: Sequence[str]) -> tuple[tuple[str, int], ...]:
    n = len(w)
    return tuple((a, p.class_of(i, n - 1 - i)) for i, a in enumerate(w))


def transduce_letters(p: PartitionSpec, w: Sequence[str]) -> Word:
    return tuple(product_letter(a, k) for a, k in transduce(p, w))


def extract_class(p: PartitionSpec, w: Sequence[str], k: int) -> Word:
    if not 0 <= k < len(p):
        raise IndexError(f"class index {k} out of range for {len(p)} classes")
    return tuple(a for a, c in transduce(p, w) if c == k)


@dataclass(frozen=True)
class RawBlockLang:
    alphabet: tuple[str, ...]
    partition: PartitionSpec
    language: Dfa

    def __post_init__(self):
        if self.language.alphabet != product_alphabet(self.alphabet, self.partition):
            raise AlphabetError("raw block language must be over the product alphabet A x D")

    def to_json(self) -> dict:
        return {"type": "blocklang", "form": "raw", "alphabet": list(self.alphabet),
                "partition": self.partition.to_json(), "language": self.language.to_json()}


@dataclass(frozen=True)
class GateAtom:
    encoding: Mapping[tuple[str, int], Word]
    gate: GateType


@dataclass(frozen=True)
class PresentedBlockLang:
    alphabet: tuple[str, ...]
    partition: PartitionSpec
    atoms: tuple[GateAtom, ...]
    formula: bt.Tree

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "atoms", tuple(self.atoms))
        for n, atom in enumerate(self.atoms):
            for a in self.alphabet:
                for k in range(len(self.partition)):
                    bits = atom.encoding.get((a, k))
                    if bits is None:
                        raise ValueError(f"atom {n} encoding undefined on ({a!r}, {k})")
                    if any(b not in BITS for b in bits):
                        raise ValueError(f"atom {n} encoding of ({a!r}, {k}) is not a bit word")
        bad = [i for i in bt.leaves(self.formula) if not 0 <= i < len(self.atoms)]
        if bad:
            raise ValueError(f"formula references missing atoms {bad}")

    def to_json(self) -> dict:
        atoms = []
        for atom in self.atoms:
            enc = {product_letter(a, k): "".join(atom.encoding[a, k])
                   for a in self.alphabet for k in range(len(self.partition))}
            atoms.append({"gate": atom.gate.to_json(), "encoding": enc})
        return {"type": "blocklang", "form": "presented", "alphabet": list(self.alphabet),
                "partition": self.partition.to_json(), "atoms": atoms,
                "formula": bt.to_json(self.formula)}


BlockLang = Union[RawBlockLang, PresentedBlockLang]


def blocklang_from_json(data: Mapping) -> BlockLang:
    form = data.get("form")
    alphabet = tuple(data["alphabet"])
    p = PartitionSpec.from_json(data["partition"])
    if form == "raw":
        return RawBlockLang(alphabet, p, Dfa.from_json(data["language"]))
    if form != "presented":
        raise ValueError(f"blocklang JSON field 'form' must be 'raw' or 'presented', got {form!r}")
    atoms = []
    for n, atom in enumerate(data["atoms"]):
        enc = {}
        for key, bits in atom["encoding"].items():
            a, _, k = key.rpartition("@")
            if not _ or not k.isdigit():
                raise ValueError(f"blocklang JSON field 'atoms[{n}].encoding' has bad key {key!r}")
            enc[a, int(k)] = tuple(bits)
        atoms.append(GateAtom(enc, GateType.from_json(atom["gate"])))
    return PresentedBlockLang(alphabet, p, tuple(atoms), bt.from_json(data["formula"]))


def block_membership(b: BlockLang, w: Sequence[str]) -> bool:
    for a in w:
        if a not in b.alphabet:
            raise AlphabetError(f"letter {a!r} not in alphabet {b.alphabet}")
    if isinstance(b, RawBlockLang):
        return b.language.accepts(transduce_letters(b.partition, w))
    tw = transduce(b.partition, w)

    def atom_value(n: int) -> bool:
        atom = b.atoms[n]
        bits = [bit for pair in tw for bit in atom.encoding[pair]]
        return atom.gate(bits)

    return bt.evaluate(b.formula, atom_value)


def _tree_language(t: bt.Tree, atoms: Sequence[Dfa], alphabet: tuple[str, ...]) -> Dfa:
    if isinstance(t, bt.Const):
        return builtin_language("all" if t.value else "none", alphabet=alphabet)
    if isinstance(t, bt.Leaf):
        return atoms[t.index]
    if isinstance(t, bt.Not):
        return combine(_tree_language(t.child, atoms, alphabet), None, "complement")
    op = "intersection" if isinstance(t, bt.And) else "union"
    return combine(_tree_language(t.left, atoms, alphabet), _tree_language(t.right, atoms, alphabet), op)


def to_raw(b: PresentedBlockLang) -> RawBlockLang:
    sigma = product_alphabet(b.alphabet, b.partition)
    atom_langs = []
    for atom in b.atoms:
        h = FreeMorphism(sigma, BITS, {product_letter(a, k): tuple(atom.encoding[a, k])
                                       for a in b.alphabet for k in range(len(b.partition))})
        atom_langs.append(inverse_morphism_image(atom.gate.language, h))
    return RawBlockLang(b.alphabet, b.partition, _tree_language(b.formula, atom_langs, sigma))


def family_to_blocklang(fam: LayeredCircuitFamily) -> PresentedBlockLang:
    """Each layer gate becomes an atom whose encoding sends (a, class) to the
    bits that a position of that class reading a feeds into the gate."""
    atoms = []
    for g in fam.layer:
        enc = {(a, k): tuple(BITS[a in s] for s in g.wires(k))
               for a in fam.alphabet for k in range(len(fam.partition))}
        atoms.append(GateAtom(enc, g.gate))
    return PresentedBlockLang(fam.alphabet, fam.partition, tuple(atoms), fam.top)


class PaddingError(ValueError):
    pass


def blocklang_to_family(b: PresentedBlockLang) -> LayeredCircuitFamily:
    """One layer gate per atom, wired so that a position of class k reading a
    contributes exactly the bits encoding(a, k).

    Encodings of different letters within one class are padded to a common
    length with a bit that the gate language ignores.
    """
    if isinstance(b, RawBlockLang):
        # no general decomposition of a raw language into gate atoms is known
        raise TypeError("blocklang_to_family needs a presented block language, got raw form")
    layer = []
    for n, atom in enumerate(b.atoms):
        wiring = {}
        neutral = None
        for k in range(len(b.partition)):
            words = {a: atom.encoding[a, k] for a in b.alphabet}
            width = max(len(w) for w in words.values())
            if any(len(w) != width for w in words.values()):
                if neutral is None:
                    neutral = atom.gate.neutral_bit()
                if neutral is None:
                    raise PaddingError(f"atom {n}: encodings of class {k} differ in length and "
                                       f"gate {atom.gate.name!r} has no neutral bit")
                words = {a: tuple(w) + (neutral,) * (width - len(w)) for a, w in words.items()}
            wiring[k] = [frozenset(a for a in b.alphabet if words[a][t] == "1") for t in range(width)]
        layer.append(LayerGate(atom.gate, wiring))
    return LayeredCircuitFamily(b.alphabet, b.partition, tuple(layer), b.formula)


Recognizer = Union[Dfa, GeneralCircuitFamily, LayeredCircuitFamily, RawBlockLang, PresentedBlockLang]


def membership_function(x) -> Callable[[Sequence[str]], bool]:
    """Uniform membership test; circuit families are instantiated once per length."""
    if isinstance(x, Dfa):
        return x.accepts
    if isinstance(x, (RawBlockLang, PresentedBlockLang)):
        return lambda w: block_membership(x, w)
    if isinstance(x, (GeneralCircuitFamily, LayeredCircuitFamily)):
        cache = {}

        def member(w):
            n = len(w)
            if n not in cache:
                cache[n] = instantiate_family(x, n)
            return bool(evaluate_circuit(cache[n], tuple(w)))
        return member
    if hasattr(x, "accepts"):
        return x.accepts
    raise TypeError(f"cannot test membership for {type(x).__name__}")


def bounded_equivalence(x, y, max_len: int) -> Word | None:
    """Length-lexicographically first word of length <= max_len on which x
    and y disagree, or None."""
    if tuple(x.alphabet) != tuple(y.alphabet):
        raise AlphabetError(f"alphabet mismatch: {tuple(x.alphabet)} vs {tuple(y.alphabet)}")
    fx, fy = membership_function(x), membership_function(y)
    for w in words_upto(tuple(x.alphabet), max_len):
        if fx(w) != fy(w):
            return w
    return None
