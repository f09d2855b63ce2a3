"""Command-line front end.

Exit codes: 0 success, 2 parse error, 3 invalid presentation, 4 unknown
verdict (classify only), 5 precondition error, 6 budget or generation
failure.  With --json, errors also go to stderr as one JSON object.
Output is plain ASCII and byte-stable; NO_COLOR is respected trivially
because nothing is ever colored.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import classify as cls
from . import strings as st
from .errors import ClockCycleError, InfeasibleError, PreconditionError, WitnessBudgetError
from .presentation import (
    BudgetExceededError,
    ParseError,
    Presentation,
    export,
    parse_presentation,
    validate_presentation,
)
from .randomgen import generate_random_gentle
from .repetitive import build_repetitive_window, window_dot, window_json

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INVALID = 3
EXIT_UNKNOWN = 4
EXIT_PRECONDITION = 5
EXIT_BUDGET = 6


class _CliFailure(Exception):
    def __init__(self, exit_code: int, code: str, message: str):
        super().__init__(message)
        self.exit_code = exit_code
        self.code = code


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load(path: str) -> Presentation:
    try:
        return parse_presentation(_read_input(path))
    except ParseError as e:
        raise _CliFailure(EXIT_PARSE, e.code, str(e))
    except OSError as e:
        raise _CliFailure(EXIT_PARSE, "IO", str(e))


def _load_valid(path: str) -> Presentation:
    p = _load(path)
    report = validate_presentation(p)
    if not report.ok:
        lines = "; ".join(f"{c}: {m} [{e}]" for c, m, e in report.violations)
        raise _CliFailure(EXIT_INVALID, "INVALID_PRESENTATION", lines)
    return p


def _tri(x) -> str | bool:
    return "unknown" if x is None else x


def _tri_text(x) -> str:
    return "unknown" if x is None else ("yes" if x else "no")


def _decision_doc(d: cls.TrivialityDecision) -> dict:
    return {
        "verdict": d.verdict,
        "reason": d.reason,
        "reason_text": d.reason_text,
        "equivalents": {
            "pure_semisimple": _tri(d.equivalents.pure_semisimple),
            "perfect_complexes_locally_finite": _tri(
                d.equivalents.perfect_complexes_locally_finite
            ),
            "derived_discrete": _tri(d.equivalents.derived_discrete),
        },
        "witness": st.witness_doc(d.witness) if d.witness is not None else None,
    }


def _emit(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _matrix_str(m) -> str:
    return "[" + ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in m) + "]"


# ---------------------------------------------------------------------------
# subcommands


def _cmd_classify(args) -> int:
    p = _load(args.file)
    report = validate_presentation(p)
    rep = cls.classify_biserial(p) if report.ok else None
    stats = cls.underlying_graph_stats(p) if report.ok else None
    clock = None
    decision = None
    if report.ok:
        if rep.gentle and stats.components == 1 and stats.betti == 1:
            clock = cls.clock_counts(p)
        if stats.components == 1:
            decision = cls.decide_generic_triviality(p, want_witness=False)
    if args.json:
        doc = {
            "name": p.name,
            "validation": {
                "ok": report.ok,
                "violations": [
                    {"code": c, "message": m, "entity": e} for c, m, e in report.violations
                ],
            },
            "biserial": None
            if rep is None
            else {
                "special_biserial": rep.special_biserial,
                "gentle": rep.gentle,
                "string_algebra": rep.string_algebra,
                "violated_conditions": [list(v) for v in rep.violated_conditions],
            },
            "graph": None
            if stats is None
            else {
                "components": stats.components,
                "betti": stats.betti,
                "cycle": None if stats.cycle is None else [list(c) for c in stats.cycle],
            },
            "clock": None
            if clock is None
            else {
                "with_traversal": clock.with_traversal,
                "against_traversal": clock.against_traversal,
                "equal": clock.equal,
            },
            "decision": None if decision is None else _decision_doc(decision),
        }
        _emit(doc)
    else:
        w = sys.stdout.write
        w(f"presentation: {p.name}\n")
        if report.ok:
            w("validation: ok\n")
        else:
            w("validation: FAILED\n")
            for c, m, e in report.violations:
                w(f"  {c}: {m} [{e}]\n")
        if rep is not None:
            w(
                f"special biserial: {_yn(rep.special_biserial)}   gentle: {_yn(rep.gentle)}"
                f"   string algebra: {_yn(rep.string_algebra)}\n"
            )
            for code, entity in rep.violated_conditions:
                w(f"  violated {code} at {entity}\n")
        if stats is not None:
            w(f"components: {stats.components}   betti: {stats.betti}\n")
            if stats.cycle is not None:
                w(
                    "cycle: "
                    + " ".join(f"{a}({'+' if s > 0 else '-'})" for a, s in stats.cycle)
                    + "\n"
                )
        if clock is not None:
            w(
                f"clock counts: with={clock.with_traversal} against={clock.against_traversal}"
                f" ({'equal' if clock.equal else 'unequal'})\n"
            )
        if decision is not None:
            w(f"verdict: {decision.verdict}\n")
            w(f"reason: {decision.reason}\n")
            w(f"  {decision.reason_text}\n")
            eq = decision.equivalents
            w(
                "equivalents: "
                f"pure_semisimple={_tri_text(eq.pure_semisimple)} "
                f"perfect_complexes_locally_finite={_tri_text(eq.perfect_complexes_locally_finite)} "
                f"derived_discrete={_tri_text(eq.derived_discrete)}\n"
            )
    if not report.ok:
        return EXIT_INVALID
    if decision is None:
        raise _CliFailure(EXIT_PRECONDITION, "NOT_CONNECTED", "quiver is not connected")
    if decision.verdict == "unknown":
        return EXIT_UNKNOWN
    return EXIT_OK


def _yn(b: bool) -> str:
    return "yes" if b else "no"


def _cmd_repetitive(args) -> int:
    p = _load_valid(args.file)
    try:
        w = build_repetitive_window(p, args.lo, args.hi, args.variant)
    except PreconditionError as e:
        raise _CliFailure(EXIT_PRECONDITION, e.code, str(e))
    if args.dot:
        sys.stdout.write(window_dot(w))
    elif args.json:
        sys.stdout.write(window_json(w))
    else:
        out = sys.stdout.write
        out(f"window [{w.lo}, {w.hi}] of {p.name} ({w.variant} variant)\n")
        for (b, i) in w.vertices:
            out(f"vertex {b}@{i} [{w.kind_of((b, i))}]\n")
        from .repetitive import _structure, leveled

        rs = _structure(p)
        for a in w.arrows:
            out(
                f"arrow {a.name} : {leveled(*rs.src(a))} -> {leveled(*rs.tgt(a))}"
                f" [{a.kind}]\n"
            )
        for r in w.relations:
            out(f"rel {' '.join(reversed(r.word))} [{r.kind}]\n")
    return EXIT_OK


def _witness_bundle(p: Presentation) -> st.Witness:
    try:
        ps = st.build_witness_string(p)
    except PreconditionError as e:
        raise _CliFailure(EXIT_PRECONDITION, e.code, str(e))
    except (WitnessBudgetError, ClockCycleError) as e:
        raise _CliFailure(EXIT_BUDGET, getattr(e, "code", "BUDGET"), str(e))
    return st.Witness(ps, st.periodic_string_module(ps))


def _cmd_witness(args) -> int:
    p = _load_valid(args.file)
    wit = _witness_bundle(p)
    if args.json:
        sys.stdout.write(st.witness_json(wit))
    else:
        ps = wit.string
        out = sys.stdout.write
        out(f"period: {ps.truncate(1).tokens()}\n")
        out(f"level shift: {ps.level_shift}\n")
        out(f"anchor: {ps.anchor[0]}@{ps.anchor[1]}\n")
        fin = st.local_finiteness_check(ps)
        out(f"locally finite: {_yn(fin.ok)} (max vertex dimension {fin.max_dim})\n")
        for k, v in wit.module.orbit_dims:
            out(f"orbit dim {k}: {v}\n")
        for k, m in wit.module.orbit_matrices:
            out(f"orbit matrix {k}: {_matrix_str(m)}\n")
    return EXIT_OK


def _word_context(p: Presentation, word: st.Word, args):
    leveledness = any("@" in l.arrow for l in word.letters)
    if not leveledness:
        return p
    lvls = [int(l.arrow.rpartition("@")[2]) for l in word.letters]
    lo = args.lo if args.lo is not None else min(lvls) - 1
    hi = args.hi if args.hi is not None else max(lvls) + 1
    try:
        return build_repetitive_window(p, lo, hi, "string")
    except PreconditionError as e:
        raise _CliFailure(EXIT_PRECONDITION, e.code, str(e))


def _cmd_check_string(args) -> int:
    p = _load_valid(args.file)
    word = st.parse_word(args.word)
    ctx = _word_context(p, word, args)
    try:
        check = st.validate_string(ctx, word)
    except PreconditionError as e:
        raise _CliFailure(EXIT_PARSE, e.code, str(e))
    if args.json:
        _emit(
            {
                "ok": check.ok,
                "violations": [
                    {"code": c, "position": i, "message": m} for c, i, m in check.violations
                ],
            }
        )
    else:
        if check.ok:
            sys.stdout.write("ok\n")
        else:
            for c, i, m in check.violations:
                sys.stdout.write(f"violation {c} at position {i}: {m}\n")
    return EXIT_OK


def _cmd_string_module(args) -> int:
    p = _load_valid(args.file)
    word = st.parse_word(args.word)
    ctx = _word_context(p, word, args)
    try:
        mod = st.string_module(ctx, word)
    except PreconditionError as e:
        if e.code == "UNKNOWN_ARROW":
            raise _CliFailure(EXIT_PARSE, e.code, str(e))
        raise _CliFailure(EXIT_PRECONDITION, e.code, str(e))
    indec = st.is_indecomposable(mod)
    if args.json:
        _emit(
            {
                "dims": {v: d for v, d in mod.dims if d},
                "matrices": {
                    a: [list(row) for row in m] for a, m in mod.matrices if any(any(row) for row in m)
                },
                "indecomposable": indec,
            }
        )
    else:
        out = sys.stdout.write
        for v, d in mod.dims:
            if d:
                out(f"dim {v} = {d}\n")
        for a, m in mod.matrices:
            if any(any(row) for row in m):
                out(f"matrix {a}: {_matrix_str(m)}\n")
        out(f"indecomposable: {_yn(indec)}\n")
    return EXIT_OK


def _cmd_bounds(args) -> int:
    try:
        b = cls.support_bounds(args.n, args.gldim)
    except ValueError as e:
        raise _CliFailure(EXIT_PARSE, "NEGATIVE", str(e))
    if args.json:
        _emit({"forward": b.forward, "backward": b.backward})
    else:
        sys.stdout.write(f"forward: {b.forward}\n")
        if b.backward is not None:
            sys.stdout.write(f"backward: {b.backward}\n")
    return EXIT_OK


def _cmd_generate(args) -> int:
    want_clock = None if args.clock is None else args.clock == "yes"
    try:
        p = generate_random_gentle(args.seed, args.vertices, args.cycle, want_clock)
    except (InfeasibleError, ValueError) as e:
        raise _CliFailure(EXIT_BUDGET, "INFEASIBLE", str(e))
    sys.stdout.write(export(p, "canonical-text"))
    return EXIT_OK


def _cmd_export(args) -> int:
    p = _load_valid(args.file)
    sys.stdout.write(export(p, args.format))
    return EXIT_OK


# ---------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dergen",
        description="Decide generic triviality of the derived category of a "
        "bounded-quiver algebra and construct string-module witnesses.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="full classification report")
    c.add_argument("file")
    c.add_argument("--json", action="store_true")
    c.set_defaults(fn=_cmd_classify)

    r = sub.add_parser("repetitive", help="materialize a window of the doubled quiver")
    r.add_argument("file")
    r.add_argument("--from", dest="lo", type=int, required=True)
    r.add_argument("--to", dest="hi", type=int, required=True)
    r.add_argument("--variant", choices=["string", "hatted"], default="string")
    g = r.add_mutually_exclusive_group()
    g.add_argument("--dot", action="store_true")
    g.add_argument("--json", action="store_true")
    r.set_defaults(fn=_cmd_repetitive)

    w = sub.add_parser("witness", help="periodic infinite string and its module")
    w.add_argument("file")
    w.add_argument("--json", action="store_true")
    w.set_defaults(fn=_cmd_witness)

    s = sub.add_parser("string-module", help="module of a word (tokens outermost first)")
    s.add_argument("file")
    s.add_argument("--word", required=True)
    s.add_argument("--from", dest="lo", type=int, default=None)
    s.add_argument("--to", dest="hi", type=int, default=None)
    s.add_argument("--json", action="store_true")
    s.set_defaults(fn=_cmd_string_module)

    k = sub.add_parser("check-string", help="validate a word against the relations")
    k.add_argument("file")
    k.add_argument("--word", required=True)
    k.add_argument("--from", dest="lo", type=int, default=None)
    k.add_argument("--to", dest="hi", type=int, default=None)
    k.add_argument("--json", action="store_true")
    k.set_defaults(fn=_cmd_check_string)

    b = sub.add_parser("bounds", help="support bounds from a homology range")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--gldim", type=int, default=None)
    b.add_argument("--json", action="store_true")
    b.set_defaults(fn=_cmd_bounds)

    gen = sub.add_parser("generate", help="seeded random gentle presentation")
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--vertices", type=int, required=True)
    gen.add_argument("--cycle", action="store_true")
    gen.add_argument("--clock", choices=["yes", "no"], default=None)
    gen.set_defaults(fn=_cmd_generate)

    e = sub.add_parser("export", help="re-serialize a presentation")
    e.add_argument("file")
    e.add_argument("--format", choices=["canonical-text", "json", "dot"], default="canonical-text")
    e.set_defaults(fn=_cmd_export)

    return ap


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.fn(args)
    except _CliFailure as e:
        if getattr(args, "json", False):
            sys.stderr.write(
                json.dumps({"error": e.code, "message": str(e)}, sort_keys=True) + "\n"
            )
        else:
            sys.stderr.write(f"error {e.code}: {e}\n")
        return e.exit_code
    except BudgetExceededError as e:
        sys.stderr.write(f"error BUDGET_EXCEEDED: {e}\n")
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
