"""Command line: the appointment assistant REPL and grammar tools.

    setccg assist [--db FILE] [--plan-trace]     read questions from stdin
    setccg parse "gazeteyi ayse okuyor" [--trace] [--all]
    setccg generate input.dag [--all]
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .dialogue import (AppointmentConflict, Assistant, DiscourseModel,
                       FactBase, PlanningError)
from .generator import GenerationError, generate_signs
from .lexicon import LexiconError, load_lexicon
from .notation import NotationError, block, parse_block
from .parser import (ParseError, UnknownToken, describe_info, first_derivation,
                     format_derivation, parse_analyses)
from .categories import short
from .graph import Atom


def _add_common(p, default=None):
    kw = {} if default is None else {"default": default}
    p.add_argument("--lexicon", type=Path, help="lexicon file (default: bundled demo)", **kw)
    p.add_argument("--db", type=Path, help="fact file (default: bundled demo, not saved)", **kw)
    p.add_argument("--trace", action="store_true", help="print derivations", **kw)
    p.add_argument("--plan-trace", action="store_true", help="dump the planned answer DAG", **kw)
    p.add_argument("--all", action="store_true", help="print every result, not just the best",
                   **kw)
    p.add_argument("--focus-optional", action="store_true",
                   help="let verbs skip the focus slot", **kw)
    p.add_argument("-v", "--verbose", action="store_true", **kw)


def _build_parser():
    p = argparse.ArgumentParser(prog="setccg", description=__doc__.splitlines()[0])
    _add_common(p)
    sub = p.add_subparsers(dest="command")
    # options may also follow the subcommand
    pa = sub.add_parser("assist", help="question-answering loop on stdin")
    _add_common(pa, argparse.SUPPRESS)
    ps = sub.add_parser("parse", help="parse one sentence")
    _add_common(ps, argparse.SUPPRESS)
    ps.add_argument("sentence", nargs="+")
    pg = sub.add_parser("generate", help="realise an input DAG file ('-' for stdin)")
    _add_common(pg, argparse.SUPPRESS)
    pg.add_argument("file")
    return p


def _check_paths(args):
    for label in ("lexicon", "db"):
        path = getattr(args, label)
        if path is not None and not path.is_file():
            raise SystemExit(f"setccg: {label} file not found: {path}")


def run_assist(args, lexicon, out=None, inp=None) -> int:
    out = out or sys.stdout
    inp = inp or sys.stdin
    db = FactBase.load(args.db)
    session = Assistant(lexicon, db)
    interactive = inp.isatty()
    try:
        while True:
            if interactive:
                out.write("|: ")
                out.flush()
            line = inp.readline()
            if not line:
                break
            line = line.strip()
            if not line:
                continue
            if line in ("quit", "exit", "halt."):
                break
            repl_step(line, session, args, out)
    finally:
        if args.db is not None and db.dirty:
            db.save()
    return 0


def repl_step(line, session, args, out=None):
    out = out or sys.stdout
    try:
        resp = session.respond(line)
    except UnknownToken as exc:
        out.write(f"?? unknown word: {exc.token}\n")
        return None
    except (ParseError, PlanningError, GenerationError, AppointmentConflict) as exc:
        out.write(f"?? {exc}\n")
        return None
    out.write(resp.text + "\n")
    if args.trace and resp.question is not None:
        out.write(f"Question: {short(resp.question.cat)}\n")
    if args.plan_trace and resp.plan is not None and resp.plan.gen_input is not None:
        out.write("\nDag:\n" + block(resp.plan.gen_input) + "\n\n")
    return resp


def run_parse(args, lexicon, out=None) -> int:
    out = out or sys.stdout
    sentence = " ".join(args.sentence)
    try:
        analyses = parse_analyses(sentence, lexicon)
    except UnknownToken as exc:
        out.write(f"unknown word: {exc.token}\n")
        return 1
    if not analyses:
        out.write("no analysis\n")
        return 1
    for i, a in enumerate(analyses if args.all else analyses[:1], 1):
        out.write(f"analysis {i}:\n" + block(a.sign.result, indent=2) + "\n")
        info = describe_info(a.sign)
        out.write("  order: " + ", ".join(f"{k}={v}" for k, v in info.items()) + "\n")
        if args.trace:
            out.write(format_derivation(first_derivation(a.edge)) + "\n")
    return 0


def run_generate(args, lexicon, out=None) -> int:
    out = out or sys.stdout
    text = sys.stdin.read() if args.file == "-" else Path(args.file).read_text(encoding="utf-8")
    try:
        dag = parse_block(text)
    except NotationError as exc:
        out.write(f"bad input: {exc}\n")
        return 1
    db = FactBase.load(args.db) if args.db else None
    dm = DiscourseModel()
    if db is not None:
        for name in db.entities():
            dm.register(name, db.props_of(Atom(name)))
    try:
        signs = generate_signs(dag, lexicon, dm if db is not None else None)
    except GenerationError as exc:
        out.write(f"generation failed: {exc}\n")
        return 1
    for s in signs if args.all else signs[:1]:
        out.write(" ".join(s.phon) + ".\n")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    _check_paths(args)
    try:
        lexicon = load_lexicon(args.lexicon, focus_optional=args.focus_optional)
    except (LexiconError, OSError) as exc:
        print(f"setccg: {exc}", file=sys.stderr)
        return 2
    command = args.command or "assist"
    if command == "parse":
        return run_parse(args, lexicon)
    if command == "generate":
        return run_generate(args, lexicon)
    try:
        return run_assist(args, lexicon)
    except ValueError as exc:
        print(f"setccg: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
