import json

import pytest

from blockvar.circuits import LayeredCircuitFamily
from blockvar.cli import run_cli
from blockvar.regular import Dfa, builtin_language

from conftest import blocklang_corpus, general_corpus


def run(capsys, *argv):
    code = run_cli(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def and_file(tmp_path):
    p = tmp_path / "and_lang.json"
    p.write_text(json.dumps(builtin_language("and").to_json()))
    return str(p)


class TestLang:
    def test_monoid(self, capsys, and_file):
        code, out, _ = run(capsys, "lang", "monoid", "--in", and_file)
        assert code == 0 and json.loads(out)["size"] == 2

    def test_minimize_round_trip(self, capsys, and_file, tmp_path):
        code, out, _ = run(capsys, "lang", "minimize", "--in", and_file)
        assert code == 0
        first = tmp_path / "min.json"
        first.write_text(out)
        code, again, _ = run(capsys, "lang", "minimize", "--in", str(first))
        assert code == 0 and again == out
        assert Dfa.from_json(json.loads(out)) == builtin_language("and")

    def test_identity_exit_codes(self, capsys):
        assert run(capsys, "lang", "identity", "--lang", "and", "--identities", "ac0")[0] == 0
        code, out, _ = run(capsys, "lang", "identity", "--lang", "and", "--identities", "cc0")
        assert code == 1 and "x" in out

    def test_profinite_member(self, capsys):
        assert run(capsys, "lang", "profinite-member", "--lang", "mod:2", "--term", "(11)^w")[0] == 0
        assert run(capsys, "lang", "profinite-member", "--lang", "or", "--term", "0^w")[0] == 1

    def test_commutative(self, capsys, tmp_path):
        assert run(capsys, "lang", "commutative", "--lang", "parity")[0] == 0
        ab = builtin_language("single_word", [0, 1])
        p = tmp_path / "w.json"
        p.write_text(json.dumps(ab.to_json()))
        assert run(capsys, "lang", "commutative", "--in", str(p))[0] == 1


class TestCircuit:
    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "circuit", "eval", "--in", "missing.json", "--word", "1")
        assert code == 2 and "missing.json" in err

    def test_malformed_json_names_field(self, capsys, tmp_path):
        p = tmp_path / "bad.json"
        data = builtin_language("and").to_json()
        data["initial"] = 5
        p.write_text(json.dumps(data))
        code, _, err = run(capsys, "lang", "minimize", "--in", str(p))
        assert code == 2 and "initial" in err

    def test_unknown_flag(self, capsys):
        assert run(capsys, "lang", "monoid", "--lang", "and", "--bogus")[0] == 2

    def test_pipeline(self, capsys, tmp_path):
        fam = general_corpus()[0]
        src = tmp_path / "fam.json"
        src.write_text(json.dumps(fam.to_json()))
        code, out, _ = run(capsys, "circuit", "normalize", "--in", str(src))
        assert code == 0
        lay = tmp_path / "lay.json"
        lay.write_text(out)
        assert isinstance(LayeredCircuitFamily.from_json(json.loads(out)), LayeredCircuitFamily)
        code, out, _ = run(capsys, "circuit", "to-block", "--in", str(lay))
        blk = tmp_path / "blk.json"
        blk.write_text(out)
        code, out, _ = run(capsys, "circuit", "from-block", "--in", str(blk))
        back = tmp_path / "back.json"
        back.write_text(out)
        for other in (lay, blk, back):
            assert run(capsys, "circuit", "equiv", "--in", str(src), "--other", str(other), "--max-len", "6")[0] == 0

    def test_eval_and_equiv_negative(self, capsys, tmp_path):
        corpus = blocklang_corpus()
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        a.write_text(json.dumps(corpus[0].to_json()))
        b.write_text(json.dumps(corpus[2].to_json()))
        assert run(capsys, "circuit", "eval", "--in", str(a), "--word", "11")[0] == 0
        assert run(capsys, "circuit", "eval", "--in", str(a), "--word", "10")[0] == 1
        code, out, _ = run(capsys, "circuit", "equiv", "--in", str(a), "--other", str(b))
        # "0" has no 1s: even count, but not in 1*
        assert code == 1 and json.loads(out)["counterexample"] == "0"


class TestSeparate:
    def test_swap(self, capsys):
        assert run(capsys, "separate", "swap", "--target", "and", "--pair", "0,2", "--pair", "1,1")[0] == 0

    def test_counterexample(self, capsys, tmp_path):
        cand = {"partition": {"classes": [{"pred": {"atom": "true"}}]},
                "morphism": {"alphabet": ["0", "1"], "monoid": {"size": 2, "identity": 0, "table": [[0, 1], [1, 1]]},
                             "image": {"0": 0, "1": 1}},
                "threshold": 1}
        p = tmp_path / "cand.json"
        p.write_text(json.dumps(cand))
        code, out, _ = run(capsys, "separate", "counterexample", "--target", "parity", "--candidate", str(p),
                           "--max-len", "4")
        assert code == 1 and json.loads(out)["witness"] == ["01", "11"]

    def test_refute_small(self, capsys):
        argv = ["separate", "refute", "--target", "and", "--identities", "cc0", "--bounds", "1,2,1",
                "--catalog", "enum:3", "--max-len", "8"]
        code, out, _ = run(capsys, *argv)
        assert code == 0 and json.loads(out)["summary"] == "evidenced at scale"
        assert run(capsys, *argv)[1] == out

    def test_bad_bounds(self, capsys):
        assert run(capsys, "separate", "refute", "--target", "and", "--bounds", "2,2")[0] == 2

    def test_brute_force(self, capsys):
        assert run(capsys, "separate", "brute-force", "--target", "and", "--base", "and", "--n", "3")[0] == 0
        assert run(capsys, "separate", "brute-force", "--target", "and", "--base", "mod:2,not-mod:2",
                   "--n", "3")[0] == 1
        assert run(capsys, "separate", "brute-force", "--target", "and", "--base", "and", "--n", "9")[0] == 2

    def test_meta_outside_payload(self, capsys):
        code, out, err = run(capsys, "lang", "monoid", "--lang", "and", "--meta")
        assert code == 0 and "elapsed_s" in err and "elapsed_s" not in out
