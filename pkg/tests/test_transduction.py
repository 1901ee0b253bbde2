from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blockvar import booltree as bt
from blockvar.circuits import FamilyGate, GateType, GeneralCircuitFamily, LayeredCircuitFamily, LayerGate, gate_type
from blockvar.partition import PartitionSpec, class_of, parse_pred
from blockvar.regular import AlphabetError, Dfa, builtin_language, from_function, words_upto
from blockvar.transduction import (GateAtom, PaddingError, PresentedBlockLang, RawBlockLang, block_membership,
                                   blocklang_from_json, blocklang_to_family, bounded_equivalence, extract_class,
                                   family_to_blocklang, product_alphabet, to_raw, transduce)

from conftest import A01, AB, S, blocklang_corpus, layered_corpus

FIRST = PartitionSpec.parse(["i<1", "true"])
EVEN = PartitionSpec.parse(["i%2=0", "true"])
ONE = PartitionSpec.single()

SPECS = [ONE, FIRST, EVEN, PartitionSpec.parse(["i<2 | j<2", "i%3=1 & !j%2=0", "true"]),
         PartitionSpec.parse(["j%2=1", "i<4", "true"])]


class TestPartition:
    def test_examples(self):
        assert class_of(FIRST, 0, 5) == 0
        assert class_of(FIRST, 3, 2) == 1
        assert class_of(EVEN, 4, 0) == 0

    @pytest.mark.parametrize("p", SPECS, ids=str)
    def test_total_first_match(self, p):
        for i in range(51):
            for j in range(51):
                k = p.class_of(i, j)
                assert 0 <= k < len(p)
                assert p.classes[k].holds(i, j)
                assert not any(c.holds(i, j) for c in p.classes[:k])

    @pytest.mark.parametrize("p", SPECS, ids=str)
    def test_json_round_trip(self, p):
        assert PartitionSpec.from_json(p.to_json()) == p

    def test_last_class_must_be_true(self):
        with pytest.raises(ValueError):
            PartitionSpec.parse(["i<1", "j<1"])

    @pytest.mark.parametrize("bad", ["i<", "k<1", "i%0=0", "i%2=", "i<1 &", ""])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            parse_pred(bad)


class TestTransduce:
    def test_examples(self):
        assert transduce(EVEN, "") == ()
        assert transduce(EVEN, "ab") == (("a", 0), ("b", 1))
        assert transduce(ONE, "abc") == (("a", 0), ("b", 0), ("c", 0))

    def test_extract(self):
        assert extract_class(ONE, "abba", 0) == tuple("abba")
        assert extract_class(EVEN, "abcd", 0) == ("a", "c")
        assert extract_class(FIRST, "abc", 0) == ("a",)
        with pytest.raises(IndexError):
            extract_class(FIRST, "abc", 2)

    @settings(max_examples=100, deadline=None)
    @given(st.sampled_from(SPECS), st.text("abc", max_size=20))
    def test_length_and_cover(self, p, w):
        assert len(transduce(p, w)) == len(w)
        pieces = Counter()
        for k in range(len(p)):
            pieces.update(extract_class(p, w, k))
        assert pieces == Counter(w)


def first_components_one():
    sigma = product_alphabet(A01, ONE)
    return from_function(sigma, 2, 0, [0], lambda q, a: 0 if q == 0 and a.startswith("1@") else 1)


class TestBlockLanguages:
    def test_raw_membership(self):
        b = RawBlockLang(A01, ONE, first_components_one())
        assert block_membership(b, "11")
        assert not block_membership(b, "101")
        assert block_membership(b, "")

    def test_raw_needs_product_alphabet(self):
        with pytest.raises(AlphabetError):
            RawBlockLang(A01, EVEN, first_components_one())

    def test_to_raw_and_atom(self):
        b = blocklang_corpus()[0]
        raw = to_raw(b)
        for w in words_upto(raw.language.alphabet, 6):
            assert raw.language.accepts(w) == all(a.startswith("1@") for a in w)

    def test_to_raw_constant_true(self):
        raw = to_raw(blocklang_corpus()[1])
        assert raw.language.state_count == 1 and raw.language.accepting

    def test_family_to_blocklang_examples(self):
        lay = layered_corpus()[0]
        b = family_to_blocklang(lay)
        assert b.atoms[0].encoding == {("1", 0): ("1",), ("0", 0): ("0",)}
        assert b.atoms[0].gate.name == "and"
        assert bounded_equivalence(lay, b, 8) is None
        empty = family_to_blocklang(layered_corpus()[1])
        assert empty.atoms == () and empty.formula == bt.TRUE

    def test_blocklang_to_family_examples(self):
        corpus = blocklang_corpus()
        assert blocklang_to_family(corpus[1]).layer == ()
        mod = blocklang_to_family(corpus[2])
        assert [g.gate.name for g in mod.layer] == ["mod:2"]
        assert bounded_equivalence(corpus[2], mod, 8) is None

    def test_padding(self):
        b = blocklang_corpus()[4]  # unequal encoding lengths under a MOD3 gate
        fam = blocklang_to_family(b)
        assert fam.layer[0].wires(0) == (S("1"), S("1"))
        assert bounded_equivalence(b, fam, 8) is None

    def test_padding_error(self):
        # words of even length over {0,1}: neither bit acts as the identity
        even_len = GateType("evenlen", from_function(A01, 2, 0, [0], lambda q, a: 1 - q))
        b = PresentedBlockLang(A01, ONE, [GateAtom({("0", 0): (), ("1", 0): ("1",)}, even_len)], bt.Leaf(0))
        with pytest.raises(PaddingError):
            blocklang_to_family(b)

    def test_raw_form_refused(self, blocklangs):
        with pytest.raises(TypeError):
            blocklang_to_family(to_raw(blocklangs[0]))

    def test_json_round_trip(self, blocklangs):
        for b in blocklangs:
            assert blocklang_from_json(b.to_json()) == b
        raw = to_raw(blocklangs[3])
        assert blocklang_from_json(raw.to_json()) == raw

    def test_encoding_must_be_total(self):
        with pytest.raises(ValueError):
            PresentedBlockLang(A01, EVEN, [GateAtom({("0", 0): ("0",)}, gate_type("and"))], bt.Leaf(0))


class TestBoundedEquivalence:
    def test_self(self, blocklangs):
        assert bounded_equivalence(blocklangs[5], blocklangs[5], 6) is None

    def test_and_vs_or(self):
        fam = LayeredCircuitFamily(A01, ONE, [LayerGate(gate_type("and"), {0: [S("1")]})], bt.Leaf(0))
        ident = {("0", 0): ("0",), ("1", 0): ("1",)}
        orb = PresentedBlockLang(A01, ONE, [GateAtom(ident, gate_type("or"))], bt.Leaf(0))
        # the empty word is in 1* but not in the OR language
        assert bounded_equivalence(fam, orb, 2) == ()
        nonempty = [w for w in words_upto(A01, 2)
                    if w and block_membership(family_to_blocklang(fam), w) != block_membership(orb, w)]
        assert nonempty[0] == ("0", "1")

    def test_empty_word_only(self):
        fam = LayeredCircuitFamily(A01, ONE, [LayerGate(gate_type("and"), {0: [S("1")]})], bt.Leaf(0))
        other = LayeredCircuitFamily(A01, ONE, [LayerGate(gate_type("mod:2"), {0: [S("1")]})], bt.Leaf(0))
        assert bounded_equivalence(fam, other, 0) is None

    def test_alphabet_mismatch(self, blocklangs):
        with pytest.raises(AlphabetError):
            bounded_equivalence(blocklangs[0], blocklangs[5], 2)


class TestRoundTrips:
    def test_corpus_sizes(self, blocklangs, layered_families):
        assert len(blocklangs) >= 10 and len(layered_families) >= 10
        assert any(len(b.partition) >= 3 for b in blocklangs)

    def test_family_to_blocklang(self, layered_families):
        for f in layered_families:
            assert bounded_equivalence(f, family_to_blocklang(f), 8) is None

    def test_blocklang_to_family(self, blocklangs):
        for b in blocklangs:
            assert bounded_equivalence(b, blocklang_to_family(b), 8) is None

    def test_raw_coherence(self, blocklangs):
        for b in blocklangs:
            assert bounded_equivalence(b, to_raw(b), 8) is None
