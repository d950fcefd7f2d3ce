"""Command-line front end: analyze, disambiguate, fsig-parse, eval, extract-ngroups, stats.

Every command reads one file (or standard input) and writes one data stream;
diagnostics go to standard error. Resource paths come from the command line,
then from a JSON config file (``--config`` or $SURFPARSE_CONFIG), then from
the shipped demo resources.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, fields, replace
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Iterator, Sequence, TextIO

from . import demo
from .core import (
    DEFAULT_DELIMITERS,
    CohortSyntaxError,
    Document,
    Sentence,
    iter_cohorts,
    parse_cohort_stream,
    serialize_sentence,
    split_sentences,
)
from .engine import EngineConfig, disambiguate, format_trace, map_syntax
from .lexicon import Guesser, Lexicon, analyze, load_guesser, load_lexicon, tokenize
from .metrics import AlignmentError, EvalReport, ambiguity_stats, compare_report, evaluate, percent, report_tsv, two_places
from .rules import Grammar, GrammarSyntaxError, load_grammar
from .text_heuristics import (
    PredominanceConfig,
    TextConfig,
    collect_lexical_stats,
    extract_noun_groups,
    format_noun_groups,
    parse_noun_groups,
    run_text_pipeline,
)

log = logging.getLogger("surfparse")

CONFIG_ENV = "SURFPARSE_CONFIG"
EXIT_OK, EXIT_ERROR, EXIT_REJECTED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for FSIG rejection here
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------- configuration


@dataclass(frozen=True)
class RunConfig:
    lexicon: str | None = None
    guesser: str | None = None
    grammar: str | None = None
    fsig_grammar: str | None = None
    penalty: str | None = None
    heuristic: bool = False
    trace: str | None = None
    input: str | None = None
    output: str | None = None
    text_based: bool = False
    noun_groups: bool = True
    predominance: bool = True
    by_lemma: bool = False
    max_passes: int = 100
    jobs: int = 1

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"config {path}: {exc}") from None
        if not isinstance(data, dict):
            raise UsageError(f"config {path}: expected a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise UsageError(f"config {path}: unknown keys {', '.join(unknown)}")
        return cls(**data)

    def merged(self, args: argparse.Namespace) -> "RunConfig":
        """Command-line values win over the config file."""
        given = {f.name: getattr(args, f.name) for f in fields(self) if getattr(args, f.name, None) is not None}
        return replace(self, **given)


def resolve_config(args: argparse.Namespace) -> RunConfig:
    path = args.config or os.environ.get(CONFIG_ENV)
    base = RunConfig.load(path) if path else RunConfig()
    cfg = base.merged(args)
    if cfg.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    if cfg.max_passes < 1:
        raise UsageError("--max-passes must be at least 1")
    return cfg


def _load(what: str, path: str | None, default: str, loader: Callable):
    target = Path(path) if path else demo.data_path(default)
    if not target.is_file():
        raise UsageError(f"{what} not found: {target}")
    try:
        return loader(target)
    except (OSError, ValueError) as exc:
        raise UsageError(f"{what} {target}: {exc}") from None


def load_lexicon_of(cfg: RunConfig) -> Lexicon:
    return _load("lexicon", cfg.lexicon, "lexicon.cohorts", load_lexicon)


def load_guesser_of(cfg: RunConfig) -> Guesser:
    return _load("guesser", cfg.guesser, "guesser.txt", load_guesser)


def load_grammar_of(cfg: RunConfig) -> Grammar:
    return _load("grammar", cfg.grammar, "grammar.cg", load_grammar)


def _read_input(cfg: RunConfig) -> str:
    if cfg.input in (None, "-"):
        return sys.stdin.read()
    try:
        return Path(cfg.input).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"input {cfg.input}: {exc.strerror}") from None


def _read_cohorts(cfg: RunConfig, delimiters: frozenset[str] = DEFAULT_DELIMITERS) -> list[Sentence]:
    # parsed up front so a format error never leaves partial output behind
    source = cfg.input or "<stdin>"
    return list(split_sentences(iter_cohorts(_read_input(cfg), source), delimiters))


@contextmanager
def _output(cfg: RunConfig) -> Iterator[TextIO]:
    if cfg.output in (None, "-"):
        yield sys.stdout
        sys.stdout.flush()
        return
    with open(cfg.output, "w", encoding="utf-8", newline="\n") as fh:
        yield fh


# ---------------------------------------------------------------- parallel map

_WORKER: dict = {}


def _init_worker(init: Callable, args: tuple) -> None:
    _WORKER.clear()
    _WORKER.update(init(*args))


@contextmanager
def _mapper(jobs: int, init: Callable, args: tuple, state: dict | None = None) -> Iterator[Callable]:
    """An order-preserving map, in-process or over a process pool set up by ``init``."""
    if jobs <= 1:
        _WORKER.clear()
        _WORKER.update(state if state is not None else init(*args))
        yield map
        return
    with ProcessPoolExecutor(jobs, initializer=_init_worker, initargs=(init, args)) as pool:
        yield lambda fn, items: pool.map(fn, items, chunksize=8)


# ---------------------------------------------------------------- analyze


def _sentences_from_text(lines: Iterable[str], lex: Lexicon) -> Iterator[list[str]]:
    buf: list[str] = []
    for line in lines:
        for tok in tokenize(line):
            buf.append(tok)
            if tok in lex.delimiters:
                yield buf
                buf = []
    if buf:
        yield buf


def _readings_line(d: Sequence[Sentence]) -> str:
    unamb, per_word = ambiguity_stats(Document(tuple(d)))
    return f"readings/word {two_places(per_word)}  unambiguous {percent(unamb)}"


def cmd_analyze(cfg: RunConfig, args: argparse.Namespace) -> int:
    lex, guesser = load_lexicon_of(cfg), load_guesser_of(cfg)
    text = _read_input(cfg)
    done: list[Sentence] = []
    with _output(cfg) as out:
        for tokens in _sentences_from_text(text.splitlines(), lex):
            s = analyze(lex, guesser, tokens)
            out.write(serialize_sentence(s))
            done.append(s)
    if args.stats:
        print(_readings_line(done), file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------- disambiguate


def _cg_init(grammar: Grammar, engine: EngineConfig, mapping: bool) -> dict:
    return {"grammar": grammar, "engine": engine, "map": mapping}


def _cg_one(item: tuple[int, Sentence]):
    n, s = item
    g, engine = _WORKER["grammar"], _WORKER["engine"]
    run = disambiguate(s, g, engine, n)
    out = map_syntax(run.sentence, g) if _WORKER["map"] else run.sentence
    return out, run.events, run.converged


def cmd_disambiguate(cfg: RunConfig, args: argparse.Namespace) -> int:
    g = load_grammar_of(cfg)
    extra = set()
    if args.groups:
        try:
            extra = parse_noun_groups(Path(args.groups).read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise UsageError(f"noun groups {args.groups}: {exc}") from None
    if cfg.trace and cfg.text_based:
        raise UsageError("--trace is not available with --text-based")
    sentences = _read_cohorts(cfg, g.delimiters)
    engine = EngineConfig(cfg.max_passes, cfg.heuristic, trace=bool(cfg.trace))

    if cfg.text_based:
        tcfg = TextConfig(
            engine=engine,
            predominance=PredominanceConfig(by_lemma=cfg.by_lemma),
            noun_groups=cfg.noun_groups,
            use_predominance=cfg.predominance,
        )
        pool = ProcessPoolExecutor(cfg.jobs) if cfg.jobs > 1 else None
        try:
            run = run_text_pipeline(Document(tuple(sentences)), g, tcfg, extra, pool)
        finally:
            if pool is not None:
                pool.shutdown()
        for stage, n in run.stage_readings:
            log.info("%s: %d readings", stage, n)
        result = [map_syntax(s, g) for s in run.document] if args.map else list(run.document)
        with _output(cfg) as out:
            out.writelines(serialize_sentence(s) for s in result)
        return EXIT_OK

    trace_fh = open(cfg.trace, "w", encoding="utf-8", newline="\n") if cfg.trace else None
    try:
        with _output(cfg) as out, _mapper(cfg.jobs, _cg_init, (g, engine, args.map)) as work:
            for s, events, _ in work(_cg_one, enumerate(sentences)):
                out.write(serialize_sentence(s))
                if trace_fh:
                    trace_fh.write(format_trace(events))
    finally:
        if trace_fh:
            trace_fh.close()
    return EXIT_OK


# ---------------------------------------------------------------- fsig-parse


def _fsig_init(grammar_path: str | None, penalty_path: str | None, mode: str, limit: int, oracle: bool, bound: int) -> dict:
    from .fsig import Penalty, compile_grammar, load_fsig_grammar, load_penalty

    grammar = _load("FSIG grammar", grammar_path, "fsig.grammar", load_fsig_grammar)
    penalty = _load("penalty table", penalty_path, "", load_penalty) if penalty_path else Penalty.default()
    try:
        rules = compile_grammar(grammar)
    except ValueError as exc:
        raise UsageError(f"FSIG grammar: {exc}") from None
    return {
        "grammar": grammar,
        "rules": rules,
        "penalty": penalty,
        "mode": mode,
        "limit": limit,
        "oracle": oracle,
        "bound": bound,
    }


@dataclass
class FsigResult:
    text: str
    parses: int
    rejected: bool = False
    mismatch: str | None = None
    skipped: bool = False


def _fsig_one(s: Sentence) -> FsigResult:
    from .fsig import brute_force_filter, enumerate_parses, intersect_all, select_parse, sentence_to_automaton

    w = _WORKER
    a = intersect_all(sentence_to_automaton(s), w["rules"])
    if w["mode"] == "one":
        chosen = select_parse(a, s, w["penalty"])
        parses = [] if chosen is None else [chosen]
    else:
        parses = enumerate_parses(a, s, w["limit"])
    res = FsigResult("".join(serialize_sentence(p) for p in parses), len(parses), rejected=not parses)
    if w["oracle"]:
        if s.combinations > w["bound"]:
            res.skipped = True
        else:
            got = set(enumerate_parses(a, s)) if w["mode"] == "one" or len(parses) == w["limit"] else set(parses)
            want = brute_force_filter(s, w["grammar"].rules, w["bound"])
            if got != want:
                res.mismatch = f"automaton keeps {len(got)} parses, brute force {len(want)}"
    return res


def cmd_fsig(cfg: RunConfig, args: argparse.Namespace) -> int:
    mode = "all" if args.all else "one"
    if args.limit < 1:
        raise UsageError("--limit must be at least 1")
    init_args = (cfg.fsig_grammar, cfg.penalty, mode, args.limit, args.oracle, args.bound)
    state = _fsig_init(*init_args)  # fails before any output if the grammar is broken
    sentences = _read_cohorts(cfg)
    rejected, mismatched, skipped = [], [], 0
    with _output(cfg) as out, _mapper(cfg.jobs, _fsig_init, init_args, state) as work:
        for n, res in enumerate(work(_fsig_one, sentences), 1):
            out.write(res.text)
            if res.rejected:
                rejected.append(n)
                print(f"sentence {n}: rejected, no parse satisfies every rule", file=sys.stderr)
            elif mode == "all":
                log.info("sentence %d: %d parses", n, res.parses)
            if res.mismatch:
                mismatched.append(n)
                print(f"sentence {n}: oracle mismatch, {res.mismatch}", file=sys.stderr)
            skipped += res.skipped
    if skipped:
        print(f"oracle skipped {skipped} sentences above {args.bound} combinations", file=sys.stderr)
    if mismatched:
        return EXIT_ERROR
    if rejected:
        print(f"{len(rejected)} of {n} sentences rejected", file=sys.stderr)
        return EXIT_REJECTED
    return EXIT_OK


# ---------------------------------------------------------------- eval


def _counts_rows(path: str) -> list[tuple[str, Fraction, Fraction, Fraction]]:
    """Rows ``system  appropriate  intended  received  tokens`` from a TSV file."""
    rows = []
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise UsageError(f"counts {path}: {exc.strerror}") from None
    for n, line in enumerate(lines, 1):
        if not line.strip() or line.startswith("#"):
            continue
        cells = line.split("\t")
        if cells[0] == "system":
            continue
        if len(cells) != 5 or not all(c.isdigit() for c in cells[1:]):
            raise UsageError(f"counts {path}:{n}: expected system, appropriate, intended, received, tokens")
        appropriate, intended, received, tokens = map(int, cells[1:])
        if 0 in (intended, received, tokens):
            raise UsageError(f"counts {path}:{n}: zero denominator")
        rows.append((cells[0], Fraction(appropriate, intended), Fraction(appropriate, received), Fraction(received, tokens)))
    return rows


def counts_table(rows: Sequence[tuple[str, Fraction, Fraction, Fraction]], tsv: bool = False) -> str:
    table = [["system", "recall", "precision", "readings/word"]]
    table += [[name, percent(r), percent(p), two_places(rw)] for name, r, p, rw in rows]
    if tsv:
        return "".join("\t".join(line) + "\n" for line in table)
    widths = [max(len(line[k]) for line in table) for k in range(4)]
    return "".join(
        "  ".join([line[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(line[1:], widths[1:])]) + "\n"
        for line in table
    )


def cmd_eval(cfg: RunConfig, args: argparse.Namespace) -> int:
    if args.counts:
        if args.systems or args.gold:
            raise UsageError("--counts takes no system outputs or gold")
        with _output(cfg) as out:
            out.write(counts_table(_counts_rows(args.counts), args.tsv))
        return EXIT_OK
    if not args.gold or not args.systems:
        raise UsageError("eval needs --gold and at least one system output")
    try:
        gold = parse_cohort_stream(Path(args.gold).read_text(encoding="utf-8"), source=args.gold)
        rows: list[tuple[str, EvalReport]] = []
        for path in args.systems:
            out_doc = parse_cohort_stream(Path(path).read_text(encoding="utf-8"), source=path)
            rows.append((Path(path).stem, evaluate(out_doc, gold, args.syntax)))
    except OSError as exc:
        raise UsageError(f"{exc.filename}: {exc.strerror}") from None
    except AlignmentError as exc:
        raise UsageError(f"misaligned with gold: {exc}") from None
    with _output(cfg) as out:
        out.write(report_tsv(rows) if args.tsv else compare_report(rows))
    if args.plot:
        from .plotting import plot_report

        plot_report(rows, args.plot)
    return EXIT_OK


# ---------------------------------------------------------------- extract-ngroups and stats


def cmd_extract_ngroups(cfg: RunConfig, args: argparse.Namespace) -> int:
    doc = Document(tuple(_read_cohorts(cfg)))
    with _output(cfg) as out:
        out.write(format_noun_groups(extract_noun_groups(doc)))
    return EXIT_OK


def cmd_stats(cfg: RunConfig, args: argparse.Namespace) -> int:
    doc = Document(tuple(_read_cohorts(cfg)))
    with _output(cfg) as out:
        if args.lexical:
            out.write(collect_lexical_stats(doc, cfg.by_lemma).to_tsv())
        else:
            words = [c for c in doc.cohorts() if not c.is_punct]
            unamb, per_word = ambiguity_stats(doc)
            out.write(f"sentences\t{len(doc)}\n")
            out.write(f"words\t{len(words)}\n")
            out.write(f"readings\t{sum(len(c.readings) for c in words)}\n")
            out.write(f"readings/word\t{two_places(per_word)}\n")
            out.write(f"unambiguous\t{percent(unamb)}\n")
    if args.plot:
        from .plotting import plot_ambiguity

        plot_ambiguity([(Path(cfg.input or "stdin").stem, doc)], args.plot)
    return EXIT_OK


# ---------------------------------------------------------------- argument parsing


def _io(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", nargs="?", help="input file (default: standard input)")
    p.add_argument("-o", "--output", help="output file (default: standard output)")
    p.add_argument("--config", help=f"JSON config file (default: ${CONFIG_ENV})")
    p.add_argument("-v", "--verbose", action="store_true", help="progress messages on standard error")


def _jobs(p: argparse.ArgumentParser) -> None:
    p.add_argument("-j", "--jobs", type=int, help="worker processes; output order is preserved")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="surfparse", description="Reductionistic surface parsing.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="tokenize text and list every reading of every token")
    _io(p)
    p.add_argument("--lexicon", help="full-form lexicon in cohort format")
    p.add_argument("--guesser", help="guesser rules for unknown words")
    p.add_argument("--stats", action="store_true", help="print readings per word on standard error")
    p.set_defaults(run=cmd_analyze)

    p = sub.add_parser(
        "disambiguate",
        help="discard readings with the constraint grammar",
        description="Reads cohorts and writes the surviving readings, one sentence at a time. "
        "--text-based needs the whole document, since later steps learn from earlier output.",
    )
    _io(p)
    _jobs(p)
    p.add_argument("--grammar", help="constraint grammar file")
    p.add_argument("--heuristic", action="store_true", default=None, help="also apply the heuristic tier")
    p.add_argument("--trace", help="write one line per removal to this file")
    p.add_argument("--max-passes", type=int, help="pass limit per tier (default 100)")
    p.add_argument("--map", action="store_true", help="add syntactic-function alternatives afterwards")
    p.add_argument("--text-based", action="store_true", default=None, help="run the whole-document heuristics")
    p.add_argument("--groups", help="extra noun groups, one per line (text-generic mode)")
    p.add_argument("--no-noun-groups", dest="noun_groups", action="store_false", default=None)
    p.add_argument("--no-predominance", dest="predominance", action="store_false", default=None)
    p.add_argument("--by-lemma", action="store_true", default=None, help="count predominance by lemma")
    p.set_defaults(run=cmd_disambiguate)

    p = sub.add_parser("fsig-parse", help="parse by intersecting the sentence with the rule automata")
    _io(p)
    _jobs(p)
    p.add_argument("--fsig-grammar", help="intersection grammar file")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--one", action="store_true", help="print the cheapest parse (default)")
    mode.add_argument("--all", action="store_true", help="print every surviving parse, up to --limit")
    p.add_argument("--limit", type=int, default=100, help="parses per sentence under --all (default 100)")
    p.add_argument("--penalty", help="penalty table for --one, lines of SYMBOL COST")
    p.add_argument("--oracle", action="store_true", help="cross-check against brute-force filtering")
    p.add_argument("--bound", type=int, default=4096, help="combination bound for --oracle (default 4096)")
    p.set_defaults(run=cmd_fsig)

    p = sub.add_parser("eval", help="recall and precision against a gold standard")
    p.add_argument("systems", nargs="*", help="system outputs in cohort format")
    p.add_argument("--gold", help="gold standard in cohort format")
    p.add_argument("--counts", help="TSV of raw counts to report instead")
    p.add_argument("--syntax", action="store_true", help="score syntactic functions too")
    p.add_argument("--tsv", action="store_true", help="tab-separated output")
    p.add_argument("--plot", help="save a recall/precision chart here")
    p.add_argument("-o", "--output", help="output file (default: standard output)")
    p.add_argument("--config", help=f"JSON config file (default: ${CONFIG_ENV})")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("extract-ngroups", help="list unambiguous noun groups in disambiguated cohorts")
    _io(p)
    p.set_defaults(run=cmd_extract_ngroups)

    p = sub.add_parser("stats", help="ambiguity figures or lexical counts for a cohort file")
    _io(p)
    p.add_argument("--lexical", action="store_true", help="print part-of-speech counts per word")
    p.add_argument("--by-lemma", action="store_true", default=None, help="count by lemma under --lexical")
    p.add_argument("--plot", help="save a readings-per-word histogram here")
    p.set_defaults(run=cmd_stats)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = resolve_config(args)
        return args.run(cfg, args)
    except UsageError as exc:
        print(f"surfparse: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (CohortSyntaxError, GrammarSyntaxError) as exc:
        print(f"surfparse: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
