"""Command-line entry point.

Exit codes: 0 result, 1 semantic negative (property fails, counterexample
found, word rejected), 2 input error.  Output is deterministic; ``--meta``
writes a timing record to stderr, never into the payload.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Sequence

from . import booltree as bt
from .circuits import (Circuit, GeneralCircuitFamily, LayeredCircuitFamily, evaluate_circuit,
                       family_membership, gate_type, normalize_family)
from .identities import (Identity, language_satisfies_identity, parse_identity, parse_term, preset,
                         regular_in_profinite_ultrafilter)
from .monoid import (FiniteMonoid, MonoidMorphism, commutative_monoids, default_catalog,
                     syntactic_morphism)
from .partition import PartitionSpec
from .regular import Dfa, builtin_language, is_commutative, minimize, word_str
from .separation import (Candidate, LanguageOracle, PositionPair, brute_force_circuit_search,
                         exhn_counterexample, refute_candidates, swap_respects)
from .transduction import (PresentedBlockLang, RawBlockLang, block_membership, blocklang_from_json,
                           blocklang_to_family, bounded_equivalence, family_to_blocklang)


class InputError(Exception):
    pass


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise InputError(f"input file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON: {exc}") from None


def _language(args) -> Dfa:
    if getattr(args, "lang", None):
        name = args.lang
        if name.startswith("mod:"):
            return builtin_language("mod", [int(name[4:])])
        return builtin_language(name)
    if not args.inp:
        raise InputError("give --in FILE or --lang NAME")
    return Dfa.from_json(_read_json(args.inp))


def _target(spec: str) -> LanguageOracle:
    if Path(spec).is_file():
        return LanguageOracle.from_dfa(Dfa.from_json(_read_json(spec)), Path(spec).stem)
    return LanguageOracle.named(spec)


def _identities(spec: str) -> list[Identity]:
    if spec in ("ac0", "acc0", "cc0"):
        return preset(spec)
    data = _read_json(spec)
    if not isinstance(data, list):
        raise InputError(f"{spec}: expected a JSON list of identities")
    return [parse_identity(x) if isinstance(x, str) else Identity.from_json(x) for x in data]


def _catalog(spec: str) -> list[FiniteMonoid]:
    if spec == "default":
        return default_catalog()
    if spec.startswith("enum:"):
        return commutative_monoids(int(spec[5:]))
    data = _read_json(spec)
    return [FiniteMonoid.from_json(m) for m in data]


def _recognizer(data):
    kind = data.get("type") if isinstance(data, dict) else None
    if kind == "circuit":
        return Circuit.from_json(data)
    if kind == "general":
        return GeneralCircuitFamily.from_json(data)
    if kind == "layered":
        return LayeredCircuitFamily.from_json(data)
    if kind == "blocklang":
        return blocklang_from_json(data)
    if isinstance(data, dict) and "transitions" in data:
        return Dfa.from_json(data)
    raise InputError(f"input field 'type' must be circuit/general/layered/blocklang, got {kind!r}")


def _word(text: str | None, alphabet: Sequence[str]) -> tuple[str, ...]:
    if text is None:
        raise InputError("--word is required")
    if all(len(a) == 1 for a in alphabet):
        return tuple(text)
    return tuple(text.split())


def _bounds(text: str) -> tuple[int, int, int]:
    try:
        a, b, c = (int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"--bounds expects CLASSES,MODULUS,THRESHOLD, got {text!r}") from None
    return a, b, c


# --- subcommands: each returns (payload, exit code) ------------------------

def cmd_lang_minimize(args):
    return minimize(_language(args)).to_json(), 0


def cmd_lang_monoid(args):
    d = _language(args)
    m, h = syntactic_morphism(d)
    return {"size": m.size, "monoid": m.to_json(), "morphism": {a: h.image[a] for a in h.source},
            "commutative": m.is_commutative()}, 0


def cmd_lang_identity(args):
    d = _language(args)
    ids = [parse_identity(args.identity)] if args.identity else _identities(args.identities)
    results, code = [], 0
    for i in ids:
        cex = language_satisfies_identity(d, i)
        results.append({"identity": str(i), "holds": cex is None, "counterexample": cex})
        if cex is not None:
            code = 1
    return {"results": results}, code


def cmd_lang_profinite_member(args):
    d = _language(args)
    member = regular_in_profinite_ultrafilter(d, parse_term(args.term, variables=""))
    return {"term": args.term, "member": member}, 0 if member else 1


def cmd_lang_commutative(args):
    c = is_commutative(_language(args))
    return {"commutative": c}, 0 if c else 1


def cmd_circuit_eval(args):
    x = _recognizer(_read_json(args.inp))
    w = _word(args.word, x.alphabet)
    if isinstance(x, Circuit):
        ok = bool(evaluate_circuit(x, w))
    elif isinstance(x, Dfa):
        ok = x.accepts(w)
    elif isinstance(x, (RawBlockLang, PresentedBlockLang)):
        ok = block_membership(x, w)
    else:
        ok = family_membership(x, w)
    return {"word": word_str(w), "accepted": ok}, 0 if ok else 1


def cmd_circuit_normalize(args):
    fam = _recognizer(_read_json(args.inp))
    if not isinstance(fam, GeneralCircuitFamily):
        raise InputError("normalize expects a family with type 'general'")
    out = normalize_family(fam)
    payload = out.to_json()
    payload["emitted_layer_gates"] = len(out.layer)
    return payload, 0


def cmd_circuit_to_block(args):
    fam = _recognizer(_read_json(args.inp))
    if isinstance(fam, GeneralCircuitFamily):
        fam = normalize_family(fam)
    if not isinstance(fam, LayeredCircuitFamily):
        raise InputError("to-block expects a family with type 'layered' or 'general'")
    return family_to_blocklang(fam).to_json(), 0


def cmd_circuit_from_block(args):
    b = _recognizer(_read_json(args.inp))
    if not isinstance(b, PresentedBlockLang):
        raise InputError("from-block expects a blocklang with form 'presented'")
    return blocklang_to_family(b).to_json(), 0


def cmd_circuit_equiv(args):
    x = _recognizer(_read_json(args.inp))
    y = _recognizer(_read_json(args.other))
    if isinstance(x, Circuit) or isinstance(y, Circuit):
        raise InputError("equiv compares families, block languages or DFAs, not fixed circuits")
    cex = bounded_equivalence(x, y, args.max_len)
    return {"max_len": args.max_len, "equivalent": cex is None,
            "counterexample": None if cex is None else word_str(cex)}, 0 if cex is None else 1


def _pair(text: str) -> PositionPair:
    try:
        i, n = (int(v) for v in text.split(","))
    except ValueError:
        raise InputError(f"--pair expects I,N, got {text!r}") from None
    return PositionPair(i, n)


def cmd_separate_swap(args):
    L = _target(args.target)
    if len(args.pair) != 2:
        raise InputError("swap needs exactly two --pair arguments")
    a, b = (_pair(p) for p in args.pair)
    ok = swap_respects(L, a, b)
    return {"target": L.name, "pairs": [[a.i, a.n], [b.i, b.n]], "related": ok}, 0 if ok else 1


def cmd_separate_counterexample(args):
    L = _target(args.target)
    data = _read_json(args.candidate)
    for key in ("partition", "morphism", "threshold"):
        if key not in data:
            raise InputError(f"candidate JSON missing field {key!r}")
    c = Candidate(PartitionSpec.from_json(data["partition"]), MonoidMorphism.from_json(data["morphism"]),
                  int(data["threshold"]))
    wit = exhn_counterexample(L, c, args.max_len)
    payload = {"target": L.name, "max_len": args.max_len,
               "witness": None if wit is None else [word_str(w) for w in wit]}
    return payload, 1 if wit is not None else 0


def cmd_separate_refute(args):
    L = _target(args.target)
    report = refute_candidates(L, _identities(args.identities), _bounds(args.bounds),
                               _catalog(args.catalog), args.max_len)
    if args.format == "text":
        return report.to_text(), 0 if report.all_refuted else 1
    return report.to_json(), 0 if report.all_refuted else 1


def cmd_separate_brute_force(args):
    L = _target(args.target)
    base = [gate_type(name) for name in args.base.split(",")]
    c = brute_force_circuit_search(L, base, args.k, args.multiplicity, args.n)
    payload = {"target": L.name, "n": args.n, "k": args.k, "base": [g.name for g in base],
               "found": c is not None, "circuit": None if c is None else c.to_json()}
    return payload, 0 if c is not None else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="blockvar", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--out", help="write the payload here instead of stdout")
    parser.add_argument("--format", choices=["json", "text"], default="json")
    parser.add_argument("--meta", action="store_true", help="print timing to stderr")
    groups = parser.add_subparsers(dest="group", required=True)

    def common(p, lang=True):
        p.add_argument("--in", dest="inp", help="input JSON file")
        if lang:
            p.add_argument("--lang", help="builtin language: and, or, parity, mod:p, all, none")
        p.add_argument("--out", default=argparse.SUPPRESS)
        p.add_argument("--format", choices=["json", "text"], default=argparse.SUPPRESS)
        p.add_argument("--meta", action="store_true", default=argparse.SUPPRESS)

    lang = groups.add_parser("lang", help="regular languages and identities").add_subparsers(
        dest="cmd", required=True)
    p = lang.add_parser("minimize", help="in: DFA JSON; out: canonical minimal DFA JSON")
    common(p)
    p.set_defaults(func=cmd_lang_minimize)
    p = lang.add_parser("monoid", help="in: DFA JSON; out: syntactic monoid and morphism")
    common(p)
    p.set_defaults(func=cmd_lang_monoid)
    p = lang.add_parser("identity", help="in: DFA JSON; out: per-identity verdicts (exit 1 if any fails)")
    common(p)
    p.add_argument("--identities", default="acc0", help="ac0 | acc0 | cc0 | JSON file (default acc0)")
    p.add_argument("--identity", help="single identity in text form, e.g. 'x^2y=xy^2'")
    p.set_defaults(func=cmd_lang_identity)
    p = lang.add_parser("profinite-member", help="in: DFA JSON + ground term; exit 1 if not a member")
    common(p)
    p.add_argument("--term", required=True, help="ground term, e.g. '(ab)^w'")
    p.set_defaults(func=cmd_lang_profinite_member)
    p = lang.add_parser("commutative", help="in: DFA JSON; exit 1 if not commutative")
    common(p)
    p.set_defaults(func=cmd_lang_commutative)

    circ = groups.add_parser("circuit", help="circuits, families, block languages").add_subparsers(
        dest="cmd", required=True)
    p = circ.add_parser("eval", help="in: circuit/family/blocklang JSON + --word; exit 1 if rejected")
    common(p, lang=False)
    p.add_argument("--word")
    p.set_defaults(func=cmd_circuit_eval)
    p = circ.add_parser("normalize", help="in: general family JSON; out: layered family JSON")
    common(p, lang=False)
    p.set_defaults(func=cmd_circuit_normalize)
    p = circ.add_parser("to-block", help="in: layered family JSON; out: presented blocklang JSON")
    common(p, lang=False)
    p.set_defaults(func=cmd_circuit_to_block)
    p = circ.add_parser("from-block", help="in: presented blocklang JSON; out: layered family JSON")
    common(p, lang=False)
    p.set_defaults(func=cmd_circuit_from_block)
    p = circ.add_parser("equiv", help="compare two recognizers on all words up to --max-len")
    common(p, lang=False)
    p.add_argument("--other", required=True)
    p.add_argument("--max-len", type=int, default=8, help="default 8")
    p.set_defaults(func=cmd_circuit_equiv)

    sep = groups.add_parser("separate", help="separation experiments").add_subparsers(
        dest="cmd", required=True)
    target_help = "and | or | parity | mod:p | DFA JSON file"
    p = sep.add_parser("swap", help="check the swap relation for two positions (exit 1 if unrelated)")
    common(p, lang=False)
    p.add_argument("--target", required=True, help=target_help)
    p.add_argument("--pair", action="append", default=[], help="I,N (distance from start, from end)")
    p.set_defaults(func=cmd_separate_swap)
    p = sep.add_parser("counterexample", help="witness search for one candidate (exit 1 if found)")
    common(p, lang=False)
    p.add_argument("--target", required=True, help=target_help)
    p.add_argument("--candidate", required=True, help="JSON with partition, morphism, threshold")
    p.add_argument("--max-len", type=int, default=10, help="default 10")
    p.set_defaults(func=cmd_separate_counterexample)
    p = sep.add_parser("refute", help="refute every candidate within bounds (exit 1 unless all refuted)")
    common(p, lang=False)
    p.add_argument("--target", required=True, help=target_help)
    p.add_argument("--identities", default="cc0", help="ac0 | acc0 | cc0 | JSON file (default cc0)")
    p.add_argument("--bounds", default="2,2,2", help="CLASSES,MODULUS,THRESHOLD (default 2,2,2)")
    p.add_argument("--catalog", default="enum:4",
                   help="enum:N (all commutative monoids of size <= N, N <= 4), default, or JSON file "
                        "(default enum:4)")
    p.add_argument("--max-len", type=int, default=12, help="default 12")
    p.set_defaults(func=cmd_separate_refute)
    p = sep.add_parser("brute-force", help="exhaustive single-layer circuit search (exit 1 if none)")
    common(p, lang=False)
    p.add_argument("--target", required=True, help=target_help)
    p.add_argument("--base", required=True, help="comma-separated gate names, e.g. and,not-and,or")
    p.add_argument("--k", type=int, default=1, help="max gates, <= 2 (default 1)")
    p.add_argument("--multiplicity", type=int, default=1, help="<= 1 (default 1)")
    p.add_argument("--n", type=int, default=4, help="input length, <= 6 (default 4)")
    p.set_defaults(func=cmd_separate_brute_force)
    return parser


def run_cli(argv: Sequence[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.time()
    try:
        payload, code = args.func(args)
    except (InputError, ValueError, KeyError, TypeError, IndexError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2, ensure_ascii=False)
    if args.format == "text" and not isinstance(payload, str):
        text = "\n".join(f"{k}: {json.dumps(v, ensure_ascii=False)}" for k, v in payload.items())
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    if args.meta:
        print(json.dumps({"started": start, "elapsed_s": round(time.time() - start, 6)}), file=sys.stderr)
    return code


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
