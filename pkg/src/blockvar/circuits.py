"""Constant-size circuits over gate bases given by commutative languages.

A gate type is a commutative regular language over {0,1}; a gate of fan-in
k outputs 1 iff the word of its input bits lies in the language.  Families
are described independently of the input length: every input position is
classified by a :class:`~blockvar.partition.PartitionSpec` and a gate's
wiring lists, per class, the letter-sets it reads from such a position.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Mapping, Sequence, Union

from . import booltree as bt
from .monoid import accepting_elements, syntactic_morphism
from .partition import PartitionSpec
from .regular import (AlphabetError, Dfa, builtin_language, combine, is_commutative,
                      minimize, two_sided_quotients)

BITS = ("0", "1")

LetterSet = frozenset  # of alphabet letters
Wiring = Mapping[int, tuple]  # class index -> tuple of LetterSet, multiplicity allowed


class NonCommutativeGate(ValueError):
    pass


@dataclass(frozen=True)
class GateType:
    name: str
    language: Dfa

    def __post_init__(self):
        if self.language.alphabet != BITS:
            raise ValueError(f"gate {self.name!r} language must be over ('0', '1')")
        if not is_commutative(self.language):
            raise NonCommutativeGate(f"gate {self.name!r} language is not commutative")
        object.__setattr__(self, "language", minimize(self.language))

    def __call__(self, bits: Sequence[str]) -> bool:
        return self.language.accepts(bits)

    def complement(self) -> "GateType":
        name = self.name[4:] if self.name.startswith("not-") else f"not-{self.name}"
        return GateType(name, combine(self.language, None, "complement"))

    def neutral_bit(self) -> str | None:
        """A bit whose insertion never changes membership, if there is one."""
        m, h = syntactic_morphism(self.language)
        for b in BITS:
            if h.letter(b) == m.identity:
                return b
        return None

    def to_json(self) -> dict:
        try:
            if gate_type(self.name).language == self.language:
                return {"name": self.name}
        except ValueError:
            pass
        return {"name": self.name, "dfa": self.language.to_json()}

    @classmethod
    def from_json(cls, data: Mapping | str) -> "GateType":
        if isinstance(data, str):
            return gate_type(data)
        if "dfa" in data:
            return cls(str(data.get("name", "custom")), Dfa.from_json(data["dfa"]))
        if "name" not in data:
            raise ValueError("gate JSON needs 'name' (builtin) or 'dfa'")
        return gate_type(str(data["name"]))


def gate_type(name: str) -> GateType:
    """Builtin gate by name: ``and``, ``or``, ``parity``, ``mod:p``, ``all``,
    ``none``, each optionally prefixed with ``not-`` for the complement."""
    if name.startswith("not-"):
        return gate_type(name[4:]).complement()
    if name.startswith("mod:"):
        p = int(name[4:])
        return GateType(name, builtin_language("mod", [p]))
    if name in ("and", "or", "parity", "all", "none"):
        return GateType(name, builtin_language(name))
    raise ValueError(f"unknown gate type {name!r}")


# --- fixed-length circuits --------------------------------------------------

@dataclass(frozen=True)
class ConstNode:
    value: int


@dataclass(frozen=True)
class InputNode:
    position: int
    letters: frozenset


@dataclass(frozen=True)
class GateNode:
    gate: GateType
    preds: tuple[int, ...]


@dataclass(frozen=True)
class BoolNode:
    op: str  # and2, or2, not1
    preds: tuple[int, ...]

    def __post_init__(self):
        arity = {"and2": 2, "or2": 2, "not1": 1}.get(self.op)
        if arity is None:
            raise ValueError(f"unknown Boolean operation {self.op!r}")
        if len(self.preds) != arity:
            raise ValueError(f"{self.op} needs {arity} predecessors")


Node = Union[ConstNode, InputNode, GateNode, BoolNode]


@dataclass(frozen=True)
class Circuit:
    alphabet: tuple[str, ...]
    input_count: int
    nodes: tuple[Node, ...]
    output: int

    def __post_init__(self):
        for k, node in enumerate(self.nodes):
            if isinstance(node, (GateNode, BoolNode)) and any(not 0 <= p < k for p in node.preds):
                raise ValueError(f"node {k} has a predecessor that is not earlier")
            if isinstance(node, InputNode) and not 0 <= node.position < self.input_count:
                raise ValueError(f"input node {k} reads position {node.position} out of range")
        if not 0 <= self.output < len(self.nodes):
            raise ValueError("output node out of range")

    @property
    def size(self) -> int:
        return sum(isinstance(n, (GateNode, BoolNode)) for n in self.nodes)

    def to_json(self) -> dict:
        out = []
        for node in self.nodes:
            if isinstance(node, ConstNode):
                out.append({"kind": "const", "value": node.value})
            elif isinstance(node, InputNode):
                out.append({"kind": "input", "position": node.position, "letters": sorted(node.letters)})
            elif isinstance(node, GateNode):
                out.append({"kind": "gate", "gate": node.gate.to_json(), "preds": list(node.preds)})
            else:
                out.append({"kind": node.op, "preds": list(node.preds)})
        return {"type": "circuit", "alphabet": list(self.alphabet), "input_count": self.input_count,
                "nodes": out, "output": self.output}

    @classmethod
    def from_json(cls, data: Mapping) -> "Circuit":
        nodes: list[Node] = []
        for k, nd in enumerate(data["nodes"]):
            kind = nd.get("kind")
            if kind == "const":
                nodes.append(ConstNode(int(nd["value"])))
            elif kind == "input":
                nodes.append(InputNode(int(nd["position"]), frozenset(nd["letters"])))
            elif kind == "gate":
                nodes.append(GateNode(GateType.from_json(nd["gate"]), tuple(nd["preds"])))
            elif kind in ("and2", "or2", "not1"):
                nodes.append(BoolNode(kind, tuple(nd["preds"])))
            else:
                raise ValueError(f"circuit JSON field 'nodes[{k}].kind' unknown: {kind!r}")
        return cls(tuple(data["alphabet"]), int(data["input_count"]), tuple(nodes), int(data["output"]))


def evaluate_circuit(c: Circuit, w: Sequence[str]) -> int:
    if len(w) != c.input_count:
        raise ValueError(f"word of length {len(w)} given to a circuit for length {c.input_count}")
    vals: list[int] = []
    for node in c.nodes:
        if isinstance(node, ConstNode):
            vals.append(node.value)
        elif isinstance(node, InputNode):
            if w[node.position] not in c.alphabet:
                raise AlphabetError(f"letter {w[node.position]!r} not in alphabet {c.alphabet}")
            vals.append(int(w[node.position] in node.letters))
        elif isinstance(node, GateNode):
            vals.append(int(node.gate(tuple(BITS[vals[p]] for p in node.preds))))
        elif node.op == "and2":
            vals.append(vals[node.preds[0]] & vals[node.preds[1]])
        elif node.op == "or2":
            vals.append(vals[node.preds[0]] | vals[node.preds[1]])
        else:
            vals.append(1 - vals[node.preds[0]])
    return vals[c.output]


# --- families ---------------------------------------------------------------

def _norm_wiring(wiring: Mapping[int, Sequence]) -> tuple[tuple[int, tuple[frozenset, ...]], ...]:
    return tuple(sorted((int(k), tuple(frozenset(s) for s in v)) for k, v in wiring.items() if v))


def _wiring_json(wiring) -> dict:
    return {str(k): [sorted(s) for s in sets] for k, sets in wiring}


def _wiring_from_json(data: Mapping) -> dict:
    return {int(k): [frozenset(s) for s in v] for k, v in data.items()}


@dataclass(frozen=True)
class FamilyGate:
    """One gate of a general family.

    ``kind`` is a :class:`GateType` or one of ``and2``/``or2``/``not1``.
    ``preds`` are earlier gate indices or :class:`booltree.Const` constants;
    ``wiring`` (gate types only) maps class index to letter-sets.
    """

    kind: Union[GateType, str]
    preds: tuple = ()
    wiring: tuple = ()

    def __init__(self, kind, preds=(), wiring=None):
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "preds", tuple(preds))
        object.__setattr__(self, "wiring", _norm_wiring(wiring or {}))
        if isinstance(kind, str):
            BoolNode(kind, tuple(range(len(self.preds))))  # arity check
            if self.wiring:
                raise ValueError("Boolean gates cannot read inputs directly")

    def wires(self, cls: int) -> tuple[frozenset, ...]:
        for k, sets in self.wiring:
            if k == cls:
                return sets
        return ()

    @property
    def touches_inputs(self) -> bool:
        return bool(self.wiring)


@dataclass(frozen=True)
class GeneralCircuitFamily:
    alphabet: tuple[str, ...]
    partition: PartitionSpec
    gates: tuple[FamilyGate, ...]
    output: int = -1

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "gates", tuple(self.gates))
        if not self.gates:
            raise ValueError("a family needs at least one gate")
        out = self.output % len(self.gates)
        object.__setattr__(self, "output", out)
        for k, g in enumerate(self.gates):
            for p in g.preds:
                if isinstance(p, bt.Const):
                    continue
                if not isinstance(p, int) or not 0 <= p < k:
                    raise ValueError(f"gate {k} predecessor {p!r} is not an earlier gate")
            for cls, sets in g.wiring:
                if not 0 <= cls < len(self.partition):
                    raise ValueError(f"gate {k} wired to unknown class {cls}")
                for s in sets:
                    if not s <= set(self.alphabet):
                        raise AlphabetError(f"gate {k} wiring letters {sorted(s)} outside alphabet")

    @property
    def size(self) -> int:
        return len(self.gates)

    def to_json(self) -> dict:
        gates = []
        for g in self.gates:
            d: dict = {}
            if isinstance(g.kind, GateType):
                d["kind"] = "gate"
                d["gate"] = g.kind.to_json()
            else:
                d["kind"] = g.kind
            d["preds"] = [{"const": int(p.value)} if isinstance(p, bt.Const) else p for p in g.preds]
            if g.wiring:
                d["wiring"] = _wiring_json(g.wiring)
            gates.append(d)
        return {"type": "general", "alphabet": list(self.alphabet),
                "partition": self.partition.to_json(), "gates": gates, "output": self.output}

    @classmethod
    def from_json(cls, data: Mapping) -> "GeneralCircuitFamily":
        gates = []
        for k, g in enumerate(data["gates"]):
            kind = g.get("kind")
            if kind == "gate":
                kind = GateType.from_json(g["gate"])
            elif kind not in ("and2", "or2", "not1"):
                raise ValueError(f"family JSON field 'gates[{k}].kind' unknown: {kind!r}")
            preds = [bt.Const(bool(p["const"])) if isinstance(p, Mapping) else int(p)
                     for p in g.get("preds", [])]
            gates.append(FamilyGate(kind, preds, _wiring_from_json(g.get("wiring", {}))))
        return cls(tuple(data["alphabet"]), PartitionSpec.from_json(data["partition"]),
                   tuple(gates), int(data.get("output", -1)))


@dataclass(frozen=True)
class LayerGate:
    gate: GateType
    wiring: tuple

    def __init__(self, gate: GateType, wiring):
        object.__setattr__(self, "gate", gate)
        object.__setattr__(self, "wiring", wiring if isinstance(wiring, tuple) else _norm_wiring(wiring))

    def wires(self, cls: int) -> tuple[frozenset, ...]:
        for k, sets in self.wiring:
            if k == cls:
                return sets
        return ()


@dataclass(frozen=True)
class LayeredCircuitFamily:
    alphabet: tuple[str, ...]
    partition: PartitionSpec
    layer: tuple[LayerGate, ...]
    top: bt.Tree

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "layer", tuple(self.layer))
        bad = [i for i in bt.leaves(self.top) if not 0 <= i < len(self.layer)]
        if bad:
            raise ValueError(f"top tree references missing layer gates {bad}")
        for g in self.layer:
            for cls, sets in g.wiring:
                if not 0 <= cls < len(self.partition):
                    raise ValueError(f"layer gate wired to unknown class {cls}")

    def to_json(self) -> dict:
        return {"type": "layered", "alphabet": list(self.alphabet),
                "partition": self.partition.to_json(),
                "layer": [{"gate": g.gate.to_json(), "wiring": _wiring_json(g.wiring)} for g in self.layer],
                "top": bt.to_json(self.top)}

    @classmethod
    def from_json(cls, data: Mapping) -> "LayeredCircuitFamily":
        layer = tuple(LayerGate(GateType.from_json(g["gate"]), _wiring_from_json(g.get("wiring", {})))
                      for g in data["layer"])
        return cls(tuple(data["alphabet"]), PartitionSpec.from_json(data["partition"]),
                   layer, bt.from_json(data["top"]))


Family = Union[GeneralCircuitFamily, LayeredCircuitFamily]


class _Builder:
    def __init__(self):
        self.nodes: list[Node] = []
        self.inputs: dict[tuple[int, frozenset], int] = {}
        self.consts: dict[int, int] = {}

    def add(self, node: Node) -> int:
        self.nodes.append(node)
        return len(self.nodes) - 1

    def const(self, v: int) -> int:
        if v not in self.consts:
            self.consts[v] = self.add(ConstNode(v))
        return self.consts[v]

    def input(self, pos: int, letters: frozenset) -> int:
        key = (pos, letters)
        if key not in self.inputs:
            self.inputs[key] = self.add(InputNode(pos, letters))
        return self.inputs[key]

    def wires(self, partition: PartitionSpec, classes, g) -> list[int]:
        return [self.input(i, s) for i, c in enumerate(classes) for s in g.wires(c)]

    def tree(self, t: bt.Tree, leaf_nodes: Sequence[int]) -> int:
        if isinstance(t, bt.Const):
            return self.const(int(t.value))
        if isinstance(t, bt.Leaf):
            return leaf_nodes[t.index]
        if isinstance(t, bt.Not):
            return self.add(BoolNode("not1", (self.tree(t.child, leaf_nodes),)))
        op = "and2" if isinstance(t, bt.And) else "or2"
        a = self.tree(t.left, leaf_nodes)
        b = self.tree(t.right, leaf_nodes)
        return self.add(BoolNode(op, (a, b)))


def instantiate_family(fam: Family, n: int) -> Circuit:
    """The member circuit for input length n.

    Wires are attached in position order, then wiring-list order; a gate
    with no wires at length n reads the empty word.
    """
    classes = fam.partition.classes_for_length(n)
    b = _Builder()
    if isinstance(fam, LayeredCircuitFamily):
        outs = [b.add(GateNode(g.gate, tuple(b.wires(fam.partition, classes, g)))) for g in fam.layer]
        out = b.tree(fam.top, outs)
    else:
        outs: list[int] = []
        for g in fam.gates:
            preds = [b.const(int(p.value)) if isinstance(p, bt.Const) else outs[p] for p in g.preds]
            if isinstance(g.kind, GateType):
                wires = b.wires(fam.partition, classes, g)
                outs.append(b.add(GateNode(g.kind, tuple(wires + preds))))
            else:
                outs.append(b.add(BoolNode(g.kind, tuple(preds))))
        out = outs[fam.output]
    return Circuit(fam.alphabet, n, tuple(b.nodes), out)


def family_membership(fam: Family, w: Sequence[str]) -> bool:
    w = tuple(w)
    return bool(evaluate_circuit(instantiate_family(fam, len(w)), w))


# --- normalization ----------------------------------------------------------

@dataclass
class _LayerPool:
    gates: list[LayerGate] = field(default_factory=list)
    index: dict = field(default_factory=dict)

    def leaf(self, gate: GateType, wiring: tuple) -> bt.Tree:
        key = (gate.language.canonical_key(), wiring)
        if key not in self.index:
            self.index[key] = len(self.gates)
            self.gates.append(LayerGate(gate, wiring))
        return bt.Leaf(self.index[key])


def _quotient_split(gate: GateType):
    """Syntactic data used to rebuild a gate from its quotient gates."""
    m, h = syntactic_morphism(gate.language)
    acc = accepting_elements(gate.language, h)
    quotients = two_sided_quotients(gate.language)
    reps = h.representatives()
    patterns = {x: tuple(q.accepts(w) for q in quotients) for x, w in reps.items()}
    return m, h, acc, quotients, patterns


def normalize_family(fam: GeneralCircuitFamily) -> LayeredCircuitFamily:
    """Rewrite a family so that only gate-type gates read inputs and the rest
    is a monotone and2/or2 tree over them.

    Each gate g is processed in topological order and gets a pair of trees
    (value, negated value).  A gate that reads only inputs becomes a layer
    gate itself (its complement serves the negated tree).  Otherwise the
    contribution of its input wires is identified, as a syntactic-monoid
    element, by the quotient gates of its language and their complements,
    wired exactly as g; the gate value is then a DNF over that element and
    the values of g's predecessors.
    """
    pool = _LayerPool()
    pos: list[bt.Tree] = []
    neg: list[bt.Tree] = []

    def ref(p, want: bool) -> bt.Tree:
        if isinstance(p, bt.Const):
            return bt.Const(p.value == want)
        return pos[p] if want else neg[p]

    for g in fam.gates:
        if isinstance(g.kind, str):
            a = [ref(p, True) for p in g.preds]
            na = [ref(p, False) for p in g.preds]
            if g.kind == "and2":
                pos.append(bt.and_(a[0], a[1]))
                neg.append(bt.or_(na[0], na[1]))
            elif g.kind == "or2":
                pos.append(bt.or_(a[0], a[1]))
                neg.append(bt.and_(na[0], na[1]))
            else:
                pos.append(na[0])
                neg.append(a[0])
            continue

        gate = g.kind
        if g.touches_inputs and not g.preds:
            pos.append(pool.leaf(gate, g.wiring))
            neg.append(pool.leaf(gate.complement(), g.wiring))
            continue

        m, h, acc, quotients, patterns = _quotient_split(gate)
        if g.touches_inputs:
            qleaves = [(pool.leaf(GateType(f"{gate.name}/q{k}", q), g.wiring),
                        pool.leaf(GateType(f"{gate.name}/q{k}", q).complement(), g.wiring))
                       for k, q in enumerate(quotients)]
            indicator = {x: bt.all_of(qp if bit else qn for (qp, qn), bit in zip(qleaves, pat))
                         for x, pat in patterns.items()}
        else:
            indicator = {x: (bt.TRUE if x == m.identity else bt.FALSE) for x in patterns}

        live = [p for p in g.preds if not isinstance(p, bt.Const)]
        fixed = m.prod(h.letter(BITS[int(p.value)]) for p in g.preds if isinstance(p, bt.Const))
        pos_terms, neg_terms = [], []
        for bits in product((0, 1), repeat=len(live)):
            cond = bt.all_of(ref(p, bool(b)) for p, b in zip(live, bits))
            if cond == bt.FALSE:
                continue
            rest = m.mul(fixed, m.prod(h.letter(BITS[b]) for b in bits))
            yes = bt.any_of(t for x, t in indicator.items() if m.mul(x, rest) in acc)
            no = bt.any_of(t for x, t in indicator.items() if m.mul(x, rest) not in acc)
            pos_terms.append(bt.and_(cond, yes))
            neg_terms.append(bt.and_(cond, no))
        pos.append(bt.any_of(pos_terms))
        neg.append(bt.any_of(neg_terms))

    # drop layer gates (mostly unused complements) the output tree never reads
    top = pos[fam.output]
    used = sorted(bt.leaves(top))
    layer = tuple(pool.gates[i] for i in used)
    top = bt.relabel(top, {old: new for new, old in enumerate(used)})
    return LayeredCircuitFamily(fam.alphabet, fam.partition, layer, top)


def layered_as_general(fam: LayeredCircuitFamily) -> GeneralCircuitFamily:
    """The same family written with explicit and2/or2/not1 gates."""
    gates: list[FamilyGate] = [FamilyGate(g.gate, (), dict(g.wiring)) for g in fam.layer]

    def emit(t: bt.Tree):
        if isinstance(t, bt.Const):
            return t
        if isinstance(t, bt.Leaf):
            return t.index
        if isinstance(t, bt.Not):
            c = emit(t.child)
            if isinstance(c, bt.Const):
                return bt.Const(not c.value)
            gates.append(FamilyGate("not1", (c,)))
            return len(gates) - 1
        a, b = emit(t.left), emit(t.right)
        gates.append(FamilyGate("and2" if isinstance(t, bt.And) else "or2", (a, b)))
        return len(gates) - 1

    out = emit(fam.top)
    if isinstance(out, bt.Const):
        gates.append(FamilyGate("or2", (out, out)))
        out = len(gates) - 1
    return GeneralCircuitFamily(fam.alphabet, fam.partition, tuple(gates), out)
