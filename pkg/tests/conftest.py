"""Shared strategies, brute-force oracles and the family / block-language corpus."""
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from blockvar import booltree as bt
from blockvar.circuits import FamilyGate, GeneralCircuitFamily, LayeredCircuitFamily, LayerGate, gate_type
from blockvar.partition import PartitionSpec
from blockvar.regular import Dfa, words_upto
from blockvar.transduction import GateAtom, PresentedBlockLang

# fixed example sequence so that every run of the suite is reproducible
settings.register_profile("repro", derandomize=True, print_blob=True)
settings.load_profile("repro")

A01 = ("0", "1")
AB = ("a", "b")

# filled by the acceptance tests, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@st.composite
def dfas(draw, max_states=4, alphabets=(("a",), ("a", "b"), ("a", "b", "c"))):
    alphabet = draw(st.sampled_from(alphabets))
    n = draw(st.integers(1, max_states))
    delta = tuple(tuple(draw(st.integers(0, n - 1)) for _ in alphabet) for _ in range(n))
    accepting = frozenset(draw(st.sets(st.integers(0, n - 1))))
    return Dfa(alphabet, draw(st.integers(0, n - 1)), accepting, delta)


def dfa(alphabet, n, initial, accepting, step):
    return Dfa(tuple(alphabet), initial, frozenset(accepting),
               tuple(tuple(step(q, a) for a in alphabet) for q in range(n)))


def myhill_classes(d: Dfa, word_len: int = 4, ctx_len: int = 4) -> int:
    """Number of two-sided context classes among words of length <= word_len,
    contexts (x, y) with |xy| <= ctx_len."""
    contexts = [(x, y) for x in words_upto(d.alphabet, ctx_len) for y in words_upto(d.alphabet, ctx_len - len(x))]
    sigs = set()
    for u in words_upto(d.alphabet, word_len):
        sigs.add(tuple(d.accepts(x + u + y) for x, y in contexts))
    return len(sigs)


def membership_table(member, alphabet, max_len):
    return [member(w) for w in words_upto(alphabet, max_len)]


def S(*letters):
    return frozenset(letters)


def general_corpus():
    """Structurally distinct general families, <= 3 gates, mixed gate types."""
    one = PartitionSpec.single()
    parity_pos = PartitionSpec.parse(["i%2=0", "true"])
    first = PartitionSpec.parse(["i<1", "true"])
    ends = PartitionSpec.parse(["i<1 | j<1", "true"])
    three = PartitionSpec.parse(["i<2", "j%2=1", "true"])
    g = gate_type
    fams = [
        # AND gate reading input plus a MOD2 gate output
        GeneralCircuitFamily(A01, one, [
            FamilyGate(g("mod:2"), (), {0: [S("1")]}),
            FamilyGate(g("and"), (0,), {0: [S("1")]}),
        ]),
        # OR over odd positions fed by AND on even positions
        GeneralCircuitFamily(A01, parity_pos, [
            FamilyGate(g("and"), (), {0: [S("1")]}),
            FamilyGate(g("or"), (0,), {1: [S("1")]}),
        ]),
        # MOD3 reading 1s twice, negated, combined with an OR
        GeneralCircuitFamily(A01, one, [
            FamilyGate(g("mod:3"), (), {0: [S("1"), S("1")]}),
            FamilyGate("not1", (0,)),
            FamilyGate(g("or"), (1,), {0: [S("0")]}),
        ]),
        # and2 over two constants
        GeneralCircuitFamily(A01, one, [FamilyGate("and2", (bt.TRUE, bt.FALSE))]),
        # first letter test combined with parity of the rest
        GeneralCircuitFamily(A01, first, [
            FamilyGate(g("and"), (), {0: [S("1")]}),
            FamilyGate(g("parity"), (), {1: [S("1")]}),
            FamilyGate("or2", (0, 1)),
        ]),
        # MOD2 fed by two gates and a constant
        GeneralCircuitFamily(A01, ends, [
            FamilyGate(g("or"), (), {0: [S("0")]}),
            FamilyGate(g("and"), (), {1: [S("1")]}),
            FamilyGate(g("mod:2"), (0, 1, bt.TRUE), {1: [S("0", "1"), S("1")]}),
        ]),
        # three classes, complement gate, inter-gate edge into NOT-AND
        GeneralCircuitFamily(A01, three, [
            FamilyGate(g("mod:2"), (), {0: [S("1")], 2: [S("0")]}),
            FamilyGate(g("not-and"), (0,), {1: [S("1")], 2: [S("1")]}),
        ]),
        # gate over letters a/b with a chain of two inter-gate edges
        GeneralCircuitFamily(AB, parity_pos, [
            FamilyGate(g("or"), (), {0: [S("a")]}),
            FamilyGate(g("mod:2"), (0,), {1: [S("b")]}),
            FamilyGate(g("and"), (0, 1), {0: [S("a", "b")], 1: [S("a")]}),
        ]),
        # MOD3 with a constant-0 predecessor and an empty wiring class
        GeneralCircuitFamily(AB, first, [
            FamilyGate(g("mod:3"), (bt.FALSE,), {1: [S("a")]}),
            FamilyGate("not1", (0,)),
        ]),
        # gate whose only predecessors are gates (no input wires)
        GeneralCircuitFamily(A01, one, [
            FamilyGate(g("and"), (), {0: [S("1")]}),
            FamilyGate(g("or"), (), {0: [S("1")]}),
            FamilyGate(g("mod:2"), (0, 1)),
        ]),
        # layered already: two input gates under and2
        GeneralCircuitFamily(A01, parity_pos, [
            FamilyGate(g("and"), (), {0: [S("1")]}),
            FamilyGate(g("or"), (), {1: [S("1")]}),
            FamilyGate("and2", (0, 1)),
        ]),
        # letter-set {0,1} (counts positions) feeding MOD2, then OR with input
        GeneralCircuitFamily(A01, PartitionSpec.parse(["j<2", "true"]), [
            FamilyGate(g("mod:2"), (), {1: [S("0", "1")]}),
            FamilyGate(g("not-or"), (0,), {0: [S("1")]}),
        ]),
    ]
    return fams


def layered_corpus():
    from blockvar.circuits import normalize_family
    one = PartitionSpec.single()
    evenodd = PartitionSpec.parse(["i%2=0", "true"])
    g = gate_type
    hand = [
        LayeredCircuitFamily(A01, one, [LayerGate(g("and"), {0: [S("1")]})], bt.Leaf(0)),
        LayeredCircuitFamily(A01, one, [], bt.TRUE),
        LayeredCircuitFamily(A01, evenodd, [LayerGate(g("and"), {0: [S("1")]}),
                                            LayerGate(g("or"), {1: [S("1")]})],
                             bt.And(bt.Leaf(0), bt.Leaf(1))),
        LayeredCircuitFamily(AB, PartitionSpec.parse(["i<1", "j%2=0", "true"]),
                             [LayerGate(g("mod:2"), {0: [S("a")], 1: [S("b"), S("a")]}),
                              LayerGate(g("not-and"), {2: [S("a")]})],
                             bt.Or(bt.Not(bt.Leaf(0)), bt.Leaf(1))),
    ]
    return hand + [normalize_family(f) for f in general_corpus()]


def _enc(mapping):
    return {k: tuple(v) for k, v in mapping.items()}


def blocklang_corpus():
    g = gate_type
    one = PartitionSpec.single()
    evenodd = PartitionSpec.parse(["i%2=0", "true"])
    thresh = PartitionSpec.parse(["i<2", "true"])
    mixed = PartitionSpec.parse(["i<1", "j%3=0 & !j<1", "true"])
    ends = PartitionSpec.parse(["j<1", "i%2=1", "true"])
    ident = {("0", 0): "0", ("1", 0): "1"}
    out = [
        PresentedBlockLang(A01, one, [GateAtom(_enc(ident), g("and"))], bt.Leaf(0)),
        PresentedBlockLang(A01, one, [], bt.TRUE),
        PresentedBlockLang(A01, one, [GateAtom(_enc(ident), g("mod:2"))], bt.Leaf(0)),
        PresentedBlockLang(A01, evenodd, [
            GateAtom(_enc({("0", 0): "0", ("1", 0): "1", ("0", 1): "", ("1", 1): ""}), g("and")),
            GateAtom(_enc({("0", 0): "", ("1", 0): "", ("0", 1): "0", ("1", 1): "1"}), g("or")),
        ], bt.And(bt.Leaf(0), bt.Leaf(1))),
        # unequal encoding lengths inside a class, padded by the neutral bit
        PresentedBlockLang(A01, thresh, [
            GateAtom(_enc({("0", 0): "", ("1", 0): "11", ("0", 1): "1", ("1", 1): ""}), g("mod:3")),
        ], bt.Not(bt.Leaf(0))),
        PresentedBlockLang(AB, mixed, [
            GateAtom(_enc({("a", 0): "1", ("b", 0): "0", ("a", 1): "11", ("b", 1): "01",
                           ("a", 2): "0", ("b", 2): "1"}), g("mod:2")),
            GateAtom(_enc({("a", 0): "1", ("b", 0): "1", ("a", 1): "1", ("b", 1): "0",
                           ("a", 2): "1", ("b", 2): "1"}), g("and")),
        ], bt.Or(bt.Leaf(0), bt.Not(bt.Leaf(1)))),
        PresentedBlockLang(AB, ends, [
            GateAtom(_enc({("a", 0): "1", ("b", 0): "0", ("a", 1): "0", ("b", 1): "0",
                           ("a", 2): "0", ("b", 2): "0"}), g("or")),
            GateAtom(_enc({("a", 0): "0", ("b", 0): "0", ("a", 1): "1", ("b", 1): "0",
                           ("a", 2): "0", ("b", 2): "1"}), g("mod:3")),
        ], bt.And(bt.Leaf(0), bt.Leaf(1))),
        PresentedBlockLang(A01, mixed, [
            GateAtom(_enc({("0", k): "0" for k in range(3)} | {("1", k): "1" * (k + 1) for k in range(3)}),
                     g("mod:4")),
        ], bt.Leaf(0)),
        PresentedBlockLang(A01, evenodd, [
            GateAtom(_enc({("0", 0): "1", ("1", 0): "0", ("0", 1): "0", ("1", 1): "0"}), g("not-or")),
            GateAtom(_enc({("0", 0): "0", ("1", 0): "0", ("0", 1): "01", ("1", 1): "10"}), g("parity")),
            GateAtom(_enc({("0", 0): "1", ("1", 0): "1", ("0", 1): "1", ("1", 1): "0"}), g("and")),
        ], bt.Or(bt.And(bt.Leaf(0), bt.Leaf(1)), bt.Leaf(2))),
        PresentedBlockLang(AB, thresh, [
            GateAtom(_enc({("a", 0): "1", ("b", 0): "1", ("a", 1): "0", ("b", 1): "1"}), g("mod:2")),
        ], bt.Leaf(0)),
        PresentedBlockLang(A01, one, [], bt.FALSE),
    ]
    return out


@pytest.fixture(scope="session")
def general_families():
    return general_corpus()


@pytest.fixture(scope="session")
def layered_families():
    return layered_corpus()


@pytest.fixture(scope="session")
def blocklangs():
    return blocklang_corpus()
