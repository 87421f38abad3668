"""Command-line surface: machine documents in, verdict lines out.

Output grammar (stable, line oriented):
    VERDICT holds|fails|holds-bounded
    WITNESS <word>            (only when a witness exists)
    STATS key=value ...

Exit codes: 0 holds (certified), 1 fails (witness printed when available),
2 holds-bounded (cap-limited verdict), 3 input or contract error, 4 resource
bound exceeded.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor

from . import jsonio
from .counters import Dcm, Ncm
from .decide import (
    comm_semilinear_shuffle_superset,
    disjoint_alphabet_dcm_shuffle_superset,
    finite_shuffle_npda_noninclusion,
    lang_equals_word_shuffle,
    lang_subset_word_shuffle,
    shuffle_inclusion_ncm_dcm,
    shuffle_inclusion_regular_dpda,
    unary_finite_shuffle_inclusion,
    word_shuffle_subset_lang,
)
from .decompose import decompose as _decompose
from .errors import ContractError, InputError, ResourceLimitError, ShuffleKitError
from .fa import Dfa, Nfa, accepts, complement, determinize, equivalent
from .outcome import DecisionOutcome
from .pushdown import Dpda, Npda
from .reductions import (
    dfa_noninclusion_to_inequality,
    parse_dimacs,
    random_cnf3,
    sat_to_shuffle_noninclusion,
    verify_reduction,
)
from .shuffle import enumerate_shuffle, naive_shuffle_nfa, word_in_shuffle
from .words import Word, as_word, fmt_word

EXIT_HOLDS = 0
EXIT_FAILS = 1
EXIT_HOLDS_BOUNDED = 2
EXIT_INPUT_ERROR = 3
EXIT_RESOURCE = 4


def parse_word(text: str) -> Word:
    """Plain string of one-character symbols, or JSON array for longer tokens."""
    if text.startswith("["):
        return as_word(json.loads(text))
    return as_word(text)


def parse_word_list(text: str) -> list[Word]:
    if not text:
        return []
    return [parse_word(tok) for tok in text.split(",")]


def parse_binary_list(text: str) -> list[int]:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok or tok.strip("01"):
            raise InputError(f"length {tok!r} is not a binary numeral")
        out.append(int(tok, 2))
    return out


def load_as(path: str, *kinds: type):
    machine = jsonio.load(path)
    if not isinstance(machine, tuple(kinds)):
        names = "/".join(k.__name__ for k in kinds)
        raise InputError(f"{path}: expected a {names} document, got {type(machine).__name__}")
    return machine


def emit_outcome(out: DecisionOutcome) -> int:
    print(f"VERDICT {out.verdict}")
    if out.witness is not None:
        print(f"WITNESS {fmt_word(out.witness)}")
    if out.stats:
        print("STATS " + " ".join(f"{k}={v}" for k, v in sorted(out.stats.items())))
    if not out.holds:
        return EXIT_FAILS
    return EXIT_HOLDS_BOUNDED if out.bounded else EXIT_HOLDS


def emit_machine(machine, out_path: str | None) -> int:
    doc = jsonio.machine_to_doc(machine)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(jsonio.dumps(doc))
    else:
        sys.stdout.write(jsonio.dumps(doc))
    return EXIT_HOLDS


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="shufflekit", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    shuffle = sub.add_parser("shuffle", help="word-shuffle constructions")
    ssub = shuffle.add_subparsers(dest="action", required=True)
    p = ssub.add_parser("build", help="emit the naive interleaving automaton")
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p.add_argument("--out")
    p = ssub.add_parser("member", help="is w an interleaving of u and v?")
    p.add_argument("--w", required=True)
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p = ssub.add_parser("enumerate", help="list the whole interleaving set")
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p.add_argument("--bound", type=int, default=16)

    decide = sub.add_parser("decide", help="decision procedures")
    dsub = decide.add_subparsers(dest="action", required=True)
    p = dsub.add_parser("word-subset", help="u shuffle v inside L(M)?")
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p.add_argument("--automaton", required=True)
    p = dsub.add_parser("subset-word", help="L(M) inside u shuffle v?")
    p.add_argument("--automaton", required=True)
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p = dsub.add_parser("equals-word", help="L(M) equal to u shuffle v?")
    p.add_argument("--automaton", required=True)
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p = dsub.add_parser("regular-dpda", help="shuffle of two NFAs inside a DPDA language?")
    p.add_argument("--m1", required=True)
    p.add_argument("--m2", required=True)
    p.add_argument("--m3", required=True)
    p = dsub.add_parser("ncm-dcm", help="shuffle of two NCMs inside a DCM language?")
    p.add_argument("--m1", required=True)
    p.add_argument("--m2", required=True)
    p.add_argument("--m3", required=True)
    p.add_argument("--cap", type=int)
    p = dsub.add_parser("unary-finite", help="finite unary shuffle inside a unary NFA?")
    p.add_argument("--d1", required=True, help="comma-separated binary lengths")
    p.add_argument("--d2", required=True, help="comma-separated binary lengths")
    p.add_argument("--automaton", required=True)
    p = dsub.add_parser("finite-npda", help="finite shuffle NOT inside an NPDA language?")
    p.add_argument("--l1", required=True, help="comma-separated words")
    p.add_argument("--l2", required=True, help="comma-separated words")
    p.add_argument("--automaton", required=True)
    p.add_argument("--budget", type=int, default=4000)
    p = dsub.add_parser("comm-semilinear", help="L(M) inside a sum of semilinear sets?")
    p.add_argument("--automaton", required=True)
    p.add_argument("--q1", required=True)
    p.add_argument("--q2", required=True)
    p.add_argument("--vector-bound", type=int, default=10)
    p = dsub.add_parser("disjoint-dcm", help="L(M) inside a disjoint-alphabet DCM shuffle?")
    p.add_argument("--automaton", required=True)
    p.add_argument("--m1", required=True)
    p.add_argument("--m2", required=True)
    p.add_argument("--cap", type=int)

    reduce_p = sub.add_parser("reduce", help="hardness-reduction generators")
    rsub = reduce_p.add_subparsers(dest="action", required=True)
    p = rsub.add_parser("sat", help="3-CNF to shuffle non-inclusion instance")
    p.add_argument("--cnf", required=True)
    p.add_argument("--out-dir", required=True)
    p = rsub.add_parser("dfa-ineq", help="DFA inclusion to two-block equality instance")
    p.add_argument("--automaton", required=True)
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p.add_argument("--out-dir", required=True)
    p = rsub.add_parser("verify", help="replay reduction biconditionals against brute force")
    p.add_argument("--cnf")
    p.add_argument("--count", type=int, default=0)
    p.add_argument("--vars", type=int, default=3)
    p.add_argument("--clauses", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("decompose", help="shuffle decomposition of an acyclic automaton")
    p.add_argument("--automaton", required=True)

    autom = sub.add_parser("automaton", help="regular-language algebra")
    asub = autom.add_subparsers(dest="action", required=True)
    p = asub.add_parser("check", help="does the automaton accept w?")
    p.add_argument("--automaton", required=True)
    p.add_argument("--w", required=True)
    p = asub.add_parser("determinize", help="subset construction")
    p.add_argument("--automaton", required=True)
    p.add_argument("--out")
    p = asub.add_parser("complement", help="complement of a complete DFA")
    p.add_argument("--automaton", required=True)
    p.add_argument("--out")
    p = asub.add_parser("equiv", help="language equality of two automata")
    p.add_argument("--m1", required=True)
    p.add_argument("--m2", required=True)
    return top


def _cmd_shuffle(args) -> int:
    if args.action == "build":
        return emit_machine(naive_shuffle_nfa(parse_word(args.u), parse_word(args.v)), args.out)
    if args.action == "member":
        ok = word_in_shuffle(parse_word(args.w), parse_word(args.u), parse_word(args.v))
        return emit_outcome(DecisionOutcome(ok, "shuffle-membership"))
    members = sorted(enumerate_shuffle(parse_word(args.u), parse_word(args.v), bound=args.bound))
    for w in members:
        print(fmt_word(w))
    print(f"STATS count={len(members)}")
    return EXIT_HOLDS


def _cmd_decide(args) -> int:
    if args.action == "word-subset":
        m = load_as(args.automaton, Nfa)
        return emit_outcome(word_shuffle_subset_lang(parse_word(args.u), parse_word(args.v), m))
    if args.action == "subset-word":
        m = load_as(args.automaton, Nfa)
        return emit_outcome(lang_subset_word_shuffle(m, parse_word(args.u), parse_word(args.v)))
    if args.action == "equals-word":
        m = load_as(args.automaton, Nfa)
        return emit_outcome(lang_equals_word_shuffle(m, parse_word(args.u), parse_word(args.v)))
    if args.action == "regular-dpda":
        m1 = load_as(args.m1, Nfa)
        m2 = load_as(args.m2, Nfa)
        m3 = load_as(args.m3, Dpda)
        return emit_outcome(shuffle_inclusion_regular_dpda(m1, m2, m3))
    if args.action == "ncm-dcm":
        m1 = load_as(args.m1, Ncm)
        m2 = load_as(args.m2, Ncm)
        m3 = load_as(args.m3, Dcm)
        return emit_outcome(shuffle_inclusion_ncm_dcm(m1, m2, m3, args.cap))
    if args.action == "unary-finite":
        m = load_as(args.automaton, Nfa)
        return emit_outcome(
            unary_finite_shuffle_inclusion(
                parse_binary_list(args.d1), parse_binary_list(args.d2), m
            )
        )
    if args.action == "finite-npda":
        m = load_as(args.automaton, Npda)
        return emit_outcome(
            finite_shuffle_npda_noninclusion(
                parse_word_list(args.l1), parse_word_list(args.l2), m, budget=args.budget
            )
        )
    if args.action == "comm-semilinear":
        m = load_as(args.automaton, Nfa)
        q1 = jsonio.load(args.q1)
        q2 = jsonio.load(args.q2)
        return emit_outcome(
            comm_semilinear_shuffle_superset(m, q1, q2, vector_bound=args.vector_bound)
        )
    m = load_as(args.automaton, Nfa)
    m1 = load_as(args.m1, Dcm)
    m2 = load_as(args.m2, Dcm)
    return emit_outcome(disjoint_alphabet_dcm_shuffle_superset(m, m1, m2, args.cap))


def _verify_one(task) -> bool:
    p, q, seed, index = task
    rng = random.Random(seed * 1_000_003 + index)
    formula = random_cnf3(p, q, rng)
    return verify_reduction(sat_to_shuffle_noninclusion(formula)).holds


def _cmd_reduce(args) -> int:
    if args.action == "sat":
        with open(args.cnf, encoding="utf-8") as fh:
            formula = parse_dimacs(fh.read())
        inst = sat_to_shuffle_noninclusion(formula)
        import os

        os.makedirs(args.out_dir, exist_ok=True)
        jsonio.save(os.path.join(args.out_dir, "u.json"), inst.u)
        jsonio.save(os.path.join(args.out_dir, "v.json"), inst.v)
        jsonio.save(os.path.join(args.out_dir, "automaton.json"), inst.automaton)
        with open(os.path.join(args.out_dir, "manifest.json"), "w", encoding="utf-8") as fh:
            fh.write(jsonio.dumps(inst.manifest))
        print(f"STATS p={inst.manifest['p']} q={inst.manifest['q']} y={inst.manifest['y']}")
        return EXIT_HOLDS
    if args.action == "dfa-ineq":
        m = load_as(args.automaton, Dfa)
        inst = dfa_noninclusion_to_inequality(m, parse_word(args.u), parse_word(args.v))
        import os

        os.makedirs(args.out_dir, exist_ok=True)
        jsonio.save(os.path.join(args.out_dir, "machine.json"), inst.machine)
        jsonio.save(os.path.join(args.out_dir, "target.json"), inst.target)
        manifest = {"p": inst.p, "q": inst.q}
        with open(os.path.join(args.out_dir, "manifest.json"), "w", encoding="utf-8") as fh:
            fh.write(jsonio.dumps(manifest))
        print(f"STATS p={inst.p} q={inst.q}")
        return EXIT_HOLDS
    # verify
    if args.cnf:
        with open(args.cnf, encoding="utf-8") as fh:
            formula = parse_dimacs(fh.read())
        out = verify_reduction(sat_to_shuffle_noninclusion(formula))
        return emit_outcome(out)
    if args.count < 1:
        raise InputError("reduce verify needs --cnf or --count")
    tasks = [(args.vars, args.clauses, args.seed, i) for i in range(args.count)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_verify_one, tasks))
    else:
        results = [_verify_one(t) for t in tasks]
    agreements = sum(results)
    print(f"STATS instances={args.count} agreements={agreements}")
    return emit_outcome(
        DecisionOutcome(
            agreements == args.count,
            "reduce-verify-batch (holds=all biconditionals match)",
            stats={"instances": args.count, "agreements": agreements},
        )
    )


def _cmd_decompose(args) -> int:
    m = load_as(args.automaton, Nfa)
    got = _decompose(m)
    if got is None:
        print("VERDICT fails")
        print("not decomposable")
        return EXIT_FAILS
    u, v = got
    print("VERDICT holds")
    print(f"U {fmt_word(u)}")
    print(f"V {fmt_word(v)}")
    return EXIT_HOLDS


def _cmd_automaton(args) -> int:
    if args.action == "check":
        m = load_as(args.automaton, Nfa)
        ok = accepts(m, parse_word(args.w))
        return emit_outcome(DecisionOutcome(ok, "automaton-membership"))
    if args.action == "determinize":
        m = load_as(args.automaton, Nfa)
        return emit_machine(determinize(m), args.out)
    if args.action == "complement":
        m = load_as(args.automaton, Nfa)
        if not isinstance(m, Dfa):
            raise ContractError("complement needs a dfa document (run determinize first)")
        return emit_machine(complement(m), args.out)
    m1 = load_as(args.m1, Nfa)
    m2 = load_as(args.m2, Nfa)
    return emit_outcome(equivalent(m1, m2))


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "shuffle":
            return _cmd_shuffle(args)
        if args.command == "decide":
            return _cmd_decide(args)
        if args.command == "reduce":
            return _cmd_reduce(args)
        if args.command == "decompose":
            return _cmd_decompose(args)
        return _cmd_automaton(args)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (InputError, ContractError, ShuffleKitError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
