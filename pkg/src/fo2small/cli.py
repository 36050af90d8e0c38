"""Command-line front end.

Exit codes: 0 for success / true verdicts, 1 for false or FAIL verdicts
(UNSAT and RESOURCE_EXCEEDED included), 2 for usage or input errors.
Output is line-oriented `key value` text with stable field order.
"""

from __future__ import annotations

import argparse
import sys

from .compressor import CompressionConfig, compress, compress_structure, verify_properties
from .errors import Fo2Error
from .formula import (
    Vocabulary,
    check_against_vocab,
    format_snf,
    load_formula_file,
    parse_snf,
    to_scott_normal_form,
)
from .satengine import (
    SAT,
    decide_sat,
    random_structure,
    random_tournament,
    size_bound,
    snf_of_structure,
)
from .tournament import from_structure, graph_to_text, load_graph
from .typespace import check_snf, evaluate, load_structure, save_structure, structure_to_text

_MODES = {"paper": "paper_exact", "tight": "tight"}


def _read(path):
    with open(path) as fh:
        return fh.read()


def _write_out(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _cmd_normalize(args):
    vocab, phi = load_formula_file(_read(args.formula))
    snf = to_scott_normal_form(phi, vocab)
    _write_out(format_snf(snf), args.out)
    return 0


def _load_formula_or_snf(path):
    """A formula file holds one sentence; a normal-form file has alpha/beta
    lines.  Returns ("snf", snf) or ("sentence", (vocab, phi))."""
    text = _read(path)
    keys = {line.split()[0] for line in text.splitlines() if line.strip()}
    if "alpha" in keys or "beta" in keys:
        return "snf", parse_snf(text)
    return "sentence", load_formula_file(text)


def _cmd_check(args):
    model = load_structure(args.model)
    kind, payload = _load_formula_or_snf(args.formula)
    if kind == "snf":
        result = check_snf(model, payload)
        print(f"verdict {result.describe()}")
        return 0 if result.ok else 1
    vocab, phi = payload
    try:
        check_against_vocab(phi, model.vocab)
    except ValueError as exc:
        raise Fo2Error(f"formula does not fit the model's vocabulary: {exc}") from exc
    verdict = evaluate(phi, model)
    print("verdict TRUE" if verdict else "verdict FALSE")
    return 0 if verdict else 1


def _print_size_table(H):
    counts = {}
    for c in H.vertex_colors:
        counts[c] = counts.get(c, 0) + 1
    for c in sorted(counts):
        print(f"class {c} {counts[c]}")
    print(f"total {H.num_vertices}")


def _cmd_compress(args):
    cfg = CompressionConfig(mode=_MODES[args.mode])
    if (args.model is None) == (args.graph is None):
        raise Fo2Error("give exactly one of --model or --graph")
    if args.model is not None:
        S = load_structure(args.model)
        B = compress_structure(S, cfg)
        _write_out(structure_to_text(B), args.out)
        _print_size_table(from_structure(B).graph)
    else:
        G = load_graph(args.graph)
        H = compress(G, cfg)
        _write_out(graph_to_text(H), args.out)
        _print_size_table(H)
    return 0


def _cmd_verify(args):
    cfg = CompressionConfig(mode=_MODES[args.mode])
    G = load_graph(args.before)
    H = load_graph(args.after)
    report = verify_properties(G, H, cfg)
    sys.stdout.write(report.to_text())
    return 0 if report.all_passed else 1


def _cmd_sat(args):
    vocab, phi = load_formula_file(_read(args.formula))
    result = decide_sat(phi, vocab, cap=args.cap)
    print(f"verdict {result.verdict}")
    print(f"bound {result.bound.total_bound}")
    if result.verdict == SAT:
        print(f"size {result.witness.size}")
        if args.witness:
            save_structure(result.reduct, args.witness)
            print(f"witness {args.witness}")
        return 0
    print(f"searched_up_to {result.searched_up_to}")
    print(f"complete {'yes' if result.complete else 'no'}")
    return 1


def _cmd_gen_graph(args):
    sizes = [int(s) for s in args.sizes.split(",") if s]
    G = random_tournament(args.colors, args.edgecolors, sizes, args.seed)
    _write_out(graph_to_text(G), args.out)
    return 0


def _cmd_gen_structure(args):
    vocab = Vocabulary(
        tuple(f"P{i}" for i in range(args.unary)),
        tuple(f"R{i}" for i in range(args.binary)),
    )
    S = random_structure(vocab, args.size, args.seed)
    _write_out(structure_to_text(S), args.out)
    if args.snf_out:
        with open(args.snf_out, "w") as fh:
            fh.write(format_snf(snf_of_structure(S)))
    return 0


def _cmd_bound(args):
    bound = size_bound(args.n, args.m, _MODES[args.mode])
    print(f"mode {args.mode}")
    print(f"n {bound.n}")
    print(f"m {bound.m}")
    if bound.mode == "paper_exact":
        print(f"one_types {bound.one_type_count}")
        print(f"multiplicity {bound.per_type_multiplicity}")
        print(f"total {bound.total_bound}")
    else:
        print(f"formula {bound.formula}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fo2",
        description="Small models for two-variable logic: normalize sentences, "
        "check models, compress them to bounded size, and decide satisfiability.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normalize", help="rewrite a sentence into normal form")
    p.add_argument("-f", "--formula", required=True)
    p.add_argument("-o", "--out")
    p.set_defaults(func=_cmd_normalize)

    p = sub.add_parser("check", help="check a model against a formula or normal form")
    p.add_argument("--model", required=True)
    p.add_argument("--formula", required=True)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("compress", help="compress a model or graph to bounded size")
    p.add_argument("--model")
    p.add_argument("--graph")
    p.add_argument("--out")
    p.add_argument("--mode", choices=sorted(_MODES), default="tight")
    p.set_defaults(func=_cmd_compress)

    p = sub.add_parser("verify", help="verify the preservation properties of a rebuild")
    p.add_argument("--before", required=True)
    p.add_argument("--after", required=True)
    p.add_argument("--mode", choices=sorted(_MODES), default="paper")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("sat", help="decide satisfiability within the size bound")
    p.add_argument("--formula", required=True)
    p.add_argument("--cap", type=int)
    p.add_argument("--witness")
    p.set_defaults(func=_cmd_sat)

    p = sub.add_parser("gen-graph", help="generate a seeded random colored tournament")
    p.add_argument("--colors", type=int, required=True)
    p.add_argument("--edgecolors", type=int, required=True)
    p.add_argument("--sizes", required=True, help="comma-separated class sizes")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_gen_graph)

    p = sub.add_parser("gen-structure", help="generate a seeded random structure")
    p.add_argument("--unary", type=int, required=True)
    p.add_argument("--binary", type=int, required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--snf-out", help="also write a normal form the structure satisfies")
    p.set_defaults(func=_cmd_gen_structure)

    p = sub.add_parser("bound", help="print the model size bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--mode", choices=sorted(_MODES), default="paper")
    p.set_defaults(func=_cmd_bound)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (Fo2Error, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
