"""Command-line front end.

Subcommands: align, delimiters, simulate, evaluate. Exit codes: 0 on
success, 1 on I/O failures, 2 on flag or input-validation errors.
"""

from __future__ import annotations

import argparse
import sys

from . import dac, evaluation, miner, simulator
from .core import (
    AlignmentSet,
    ValidationError,
    read_alignment_file,
    serialize_alignment,
)
from .dp import BeadSet, GaleChurchScorer
from .embed import load_embeddings
from .lexical import LexicalScorer, load_ttable


def read_sentences(path) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return fh.read().splitlines()


def _add_input_flags(p: argparse.ArgumentParser, with_scorer: bool) -> None:
    p.add_argument("--src", required=True, help="source document, one sentence per line")
    p.add_argument("--tgt", required=True, help="target document, one sentence per line")
    p.add_argument("--src-emb", help="source embeddings, raw little-endian float32")
    p.add_argument("--tgt-emb", help="target embeddings, raw little-endian float32")
    p.add_argument("--dim", type=int, help="embedding dimension")
    p.add_argument("--threshold", type=float, default=0.6, help="candidate cosine threshold")
    p.add_argument("--knn", type=int, default=4, help="neighbourhood size for margin scoring")
    if with_scorer:
        p.add_argument(
            "--scorer", choices=("gale-church", "lexical"), default="gale-church",
            help="bead cost model",
        )
        p.add_argument("--ttable", help="word-translation table (required with --scorer lexical)")
        p.add_argument(
            "--beads", choices=("default", "extended"), default="default",
            help="allowed bead types; extended adds 1-to-n/n-to-1 up to 5",
        )
        p.add_argument("--max-chunk", type=int, default=200, help="largest side aligned by full DP")
        p.add_argument("--band", type=int, default=10, help="band width around anchors (cells)")
        p.add_argument("--max-depth", type=int, default=3, help="re-mining rounds inside big chunks")
        p.add_argument("--jobs", type=int, default=1, help="parallel workers for chunk alignment")
        p.add_argument("--no-dac", action="store_true", help="skip mining; whole-document DP")
    p.add_argument("--out", help="output file (default: standard output)")


def _load_documents(args, need_embeddings: bool):
    src_sentences = read_sentences(args.src)
    tgt_sentences = read_sentences(args.tgt)
    if not need_embeddings:
        return src_sentences, tgt_sentences, None, None
    for flag in ("src_emb", "tgt_emb", "dim"):
        if getattr(args, flag) is None:
            raise ValidationError(f"--{flag.replace('_', '-')} is required here")
    src_emb = load_embeddings(args.src_emb, args.dim)
    tgt_emb = load_embeddings(args.tgt_emb, args.dim)
    if src_emb.n != len(src_sentences):
        raise ValidationError(
            f"--src-emb has {src_emb.n} rows but --src has {len(src_sentences)} sentences"
        )
    if tgt_emb.n != len(tgt_sentences):
        raise ValidationError(
            f"--tgt-emb has {tgt_emb.n} rows but --tgt has {len(tgt_sentences)} sentences"
        )
    return src_sentences, tgt_sentences, src_emb, tgt_emb


def _build_scorer(args, src_sentences, tgt_sentences):
    if args.scorer == "lexical":
        if not args.ttable:
            raise ValidationError("--ttable is required with --scorer lexical")
        return LexicalScorer(src_sentences, tgt_sentences, load_ttable(args.ttable))
    return GaleChurchScorer(src_sentences, tgt_sentences)


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_align(args) -> int:
    bead_set = BeadSet.extended() if args.beads == "extended" else BeadSet.default()
    src_sentences, tgt_sentences, src_emb, tgt_emb = _load_documents(
        args, need_embeddings=not args.no_dac
    )
    scorer = _build_scorer(args, src_sentences, tgt_sentences)
    if args.no_dac:
        alignment = dac.whole_document_align(src_sentences, tgt_sentences, scorer, bead_set)
    else:
        config = dac.DacConfig(
            cos_threshold=args.threshold,
            k_nn=args.knn,
            max_chunk=args.max_chunk,
            band=args.band,
            max_depth=args.max_depth,
            jobs=args.jobs,
            bead_set=bead_set,
        )
        alignment = dac.dac_align(
            src_sentences, tgt_sentences, src_emb, tgt_emb, scorer, config
        )
    _emit(args, serialize_alignment(alignment))
    return 0


def _mined_delimiters(args):
    src_sentences, tgt_sentences, src_emb, tgt_emb = _load_documents(args, True)
    config = dac.DacConfig(cos_threshold=args.threshold, k_nn=args.knn)
    chain = (
        dac._mine_chain(src_emb, tgt_emb, config) if src_emb.n and tgt_emb.n else []
    )
    return miner.select_hard_delimiters(chain, len(src_sentences), len(tgt_sentences))


def cmd_delimiters(args) -> int:
    _emit(args, miner.format_delimiters(_mined_delimiters(args)))
    return 0


def _parse_int_list(text: str, flag: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok]
    except ValueError:
        raise ValidationError(f"{flag} expects comma-separated integers, got {text!r}") from None


def _parse_float_list(text: str, flag: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok]
    except ValueError:
        raise ValidationError(f"{flag} expects comma-separated numbers, got {text!r}") from None


def cmd_simulate(args) -> int:
    n_list = _parse_int_list(args.n, "--n")
    r_list = _parse_float_list(args.r, "--r")
    rows = simulator.sweep(n_list, r_list, args.trials, args.seed, exact=args.exact)
    _emit(args, simulator.sweep_csv(rows))
    return 0


def cmd_evaluate(args) -> int:
    gold = read_alignment_file(args.gold)
    if args.delimiters:
        found = miner.parse_delimiter_file(args.test)
        p, r, f1 = evaluation.delimiter_prf(found, gold)
    else:
        test = read_alignment_file(args.test)
        p, r, f1 = evaluation.strict_prf(test, gold)
    _emit(args, f"{p:.4f}\t{r:.4f}\t{f1:.4f}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chunkalign",
        description="Sentence alignment via mined hard delimiters and chunked DP",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_align = sub.add_parser(
        "align", help="align a document pair",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    _add_input_flags(p_align, with_scorer=True)
    p_align.set_defaults(func=cmd_align)

    p_delim = sub.add_parser(
        "delimiters", help="print mined hard delimiters",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    _add_input_flags(p_delim, with_scorer=False)
    p_delim.set_defaults(func=cmd_delimiters)

    p_sim = sub.add_parser(
        "simulate", help="expected maximum chunk size (CSV)",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    p_sim.add_argument("--n", required=True, help="alignment counts, comma-separated")
    p_sim.add_argument("--r", required=True, help="1-to-1 ratios, comma-separated")
    p_sim.add_argument("--trials", type=int, default=10_000, help="Monte Carlo trials per cell")
    p_sim.add_argument("--seed", type=int, default=42, help="random seed")
    p_sim.add_argument(
        "--exact", action="store_true",
        help=f"exhaustive enumeration instead of sampling (n <= {simulator.EXHAUSTIVE_MAX_N})",
    )
    p_sim.add_argument("--out", help="output file (default: standard output)")
    p_sim.set_defaults(func=cmd_simulate)

    p_eval = sub.add_parser(
        "evaluate", help="strict P/R/F1 of a test alignment against gold",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    p_eval.add_argument("--test", required=True, help="test alignment file (or delimiter file)")
    p_eval.add_argument("--gold", required=True, help="gold alignment file")
    p_eval.add_argument(
        "--delimiters", action="store_true",
        help="treat --test as a mined-delimiter file and score split points",
    )
    p_eval.add_argument("--out", help="output file (default: standard output)")
    p_eval.set_defaults(func=cmd_evaluate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
